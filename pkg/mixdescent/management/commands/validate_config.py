from mixdescent.config import METHOD_FAMILIES
from mixdescent.management.base import CommandError, ExperimentCommand
from mixdescent.transforms import validate_convergence, validate_monotonicity


class Command(ExperimentCommand):
    help = 'Checks the transform of every configured method for monotonicity and convergence'

    def add_arguments(self, parser):
        parser.add_argument('experiment', nargs='?', default='toy', choices=['toy', 'blr', 'oracle'],
                            help='Experiment whose defaults the config applies to')
        super().add_arguments(parser)

    def handle(self, *args, **options):
        config = self.get_config(options, options['experiment'])
        lines = []
        violated = False
        for method in config.methods:
            if method.name not in METHOD_FAMILIES:
                lines.append("{}: importance sampling, no transform to check".format(method))
                continue
            transform = config.transform_config(method)
            monotonicity = validate_monotonicity(transform)
            convergence = validate_convergence(transform, config.b_infty)
            violated = violated or monotonicity.violated or convergence.violated
            lines.append("{}: monotonicity {}; convergence {}".format(transform, monotonicity, convergence))

        report = '\n'.join(lines)
        if violated and not config.warn_only:
            raise CommandError("inadmissible configuration\n" + report)
        return report
