import importlib
import os
import pkgutil
import sys

from mixdescent import __version__


def get_commands():
    """
    Subcommand names, taken from the modules in `commands/`; underscores are written as dashes
    """
    path = os.path.join(os.path.dirname(__file__), 'commands')
    return sorted(name.replace('_', '-') for _, name, is_pkg in pkgutil.iter_modules([path]) if not is_pkg)


def load_command(subcommand: str):
    module = importlib.import_module('mixdescent.management.commands.' + subcommand.replace('-', '_'))
    return module.Command()


def main_help_text(prog_name: str) -> str:
    lines = ["Usage: {} <subcommand> [options]".format(prog_name), "",
             "mixdescent {}".format('.'.join(map(str, __version__))), "", "Available subcommands:"]
    lines += ["    " + name for name in get_commands()]
    return '\n'.join(lines) + '\n'


def execute_from_command_line(argv=None) -> int:
    argv = list(argv or sys.argv)
    prog_name = os.path.basename(argv[0]) if argv else 'mixdescent'
    if prog_name == '__main__.py':
        prog_name = 'python -m mixdescent'

    subcommand = argv[1] if len(argv) > 1 else 'help'
    if subcommand in ('help', '-h', '--help'):
        sys.stdout.write(main_help_text(prog_name))
        return 0
    if subcommand not in get_commands():
        sys.stderr.write("Unknown command: {!r}\n{}".format(subcommand, main_help_text(prog_name)))
        return 1
    return load_command(subcommand).run_from_argv([prog_name] + argv[1:])


def main():
    sys.exit(execute_from_command_line(sys.argv))
