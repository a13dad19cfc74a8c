"""
Management commands in the manner of Django's: a `Command` class per module in `commands/` with
`help`, `add_arguments(parser)` and `handle(**options)`.
"""
import argparse
import logging
import sys

from mixdescent.config import build_config
from mixdescent.exceptions import NUMERICAL_FAILURES, ConfigError, InadmissibleConfig, LibsvmFormatError

logger = logging.getLogger(__name__)

NUMERICAL_FAILURE_EXIT = 2

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


class CommandError(Exception):
    def __init__(self, *args, returncode=1):
        self.returncode = returncode
        super().__init__(*args)


class BaseCommand:
    help = ''

    def create_parser(self, prog_name: str, subcommand: str) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog="{} {}".format(prog_name, subcommand), description=self.help or None)
        parser.add_argument('-v', '--verbosity', type=int, default=0, choices=[0, 1, 2],
                            help='Verbosity level; 0=warnings, 1=info, 2=debug')
        self.add_arguments(parser)
        return parser

    def add_arguments(self, parser: argparse.ArgumentParser):
        pass

    def handle(self, *args, **options):
        raise NotImplementedError('subclasses of BaseCommand must provide a handle() method')

    def execute(self, **options):
        logging.basicConfig(level=VERBOSITY_LEVELS[options.get('verbosity', 0)],
                            format='%(asctime)s %(levelname)s %(name)s: %(message)s')
        output = self.handle(**options)
        if output:
            sys.stdout.write(output if output.endswith('\n') else output + '\n')

    def run_from_argv(self, argv) -> int:
        """
        :param argv: [prog_name, subcommand, arguments...]
        :return: exit code
        """
        parser = self.create_parser(argv[0], argv[1])
        options = parser.parse_args(argv[2:])
        try:
            self.execute(**vars(options))
        except CommandError as e:
            sys.stderr.write("CommandError: {}\n".format(e))
            return e.returncode
        except NUMERICAL_FAILURES as e:
            sys.stderr.write("Numerical failure: {}\n".format(e))
            return NUMERICAL_FAILURE_EXIT
        return 0


class ExperimentCommand(BaseCommand):
    """
    Command running one experiment type, with the flags shared by every experiment
    """
    experiment = None

    def add_arguments(self, parser):
        parser.add_argument('--config', dest='config', type=str, help='Config file of `key = value` lines')
        parser.add_argument('--seed', dest='master_seed', type=int, help='Master seed of the run')
        parser.add_argument('--out', dest='output_dir', type=str, help='Output directory')
        parser.add_argument('--method', dest='method', type=str,
                            help='Comma separated methods with optional order, ie. power:0.5,mirror:1')
        parser.add_argument('--alpha', dest='alpha', type=float, help='Divergence order')
        parser.add_argument('--eta0', dest='eta0', type=float, help='Initial learning rate')
        parser.add_argument('--format', dest='export_format', type=str, help='Export format: csv, xlsx, frictionless')
        parser.add_argument('--skip-flagged', dest='skip_flagged', action='store_true', default=None,
                            help='Skip updates with non-finite gradient estimates instead of aborting')
        parser.add_argument('--warn-only', dest='warn_only', action='store_true', default=None,
                            help='Run inadmissible transform configurations with a warning')
        parser.add_argument('--override', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                            help='Set a config value by dotted key, ie. schedule.inner_steps=5')

    def flags(self, options) -> dict:
        return {
            'master_seed': options.get('master_seed'),
            'output_dir': options.get('output_dir'),
            'method': options.get('method'),
            'alpha': options.get('alpha'),
            'transform.eta0': options.get('eta0'),
            'export_format': options.get('export_format'),
            'skip_flagged': options.get('skip_flagged'),
            'warn_only': options.get('warn_only'),
        }

    def get_config(self, options, experiment: str = None):
        try:
            return build_config(experiment or self.experiment, options.get('config'), self.flags(options),
                                options.get('overrides', []))
        except ConfigError as e:
            raise CommandError(str(e))

    def run_experiment(self, config):
        from mixdescent.experiments import get_experiment

        try:
            paths = get_experiment(config).run()
        except (ConfigError, InadmissibleConfig, LibsvmFormatError, NotImplementedError) as e:
            raise CommandError(str(e))
        return '\n'.join(paths)

    def handle(self, *args, **options):
        return self.run_experiment(self.get_config(options))
