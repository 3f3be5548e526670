"""Command-line entry point: parse, dispatch and map errors to exit codes"""

import logging
import sys

from psgan import configure_logging, configure_runtime
from psgan.commands import COMMANDS
from psgan.commands.common import CommandParser, ParserExit, apply_config_file
from psgan.errors import PsganError, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


def build_parser():
    parser = CommandParser(prog='psgan', description='Pedestrian synthesis for detector data augmentation')
    subparsers = parser.add_subparsers(dest='command', parser_class=CommandParser, metavar='COMMAND')
    registered = {module.NAME: module.register(subparsers) for module in COMMANDS}
    return parser, registered


def parse(argv):
    """Parse argv, folding a --config file into the chosen command's defaults"""
    parser, registered = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError('a command is required: ' + ', '.join(sorted(registered)))
    if args.config:
        apply_config_file(registered[args.command], args.config)
        args = parser.parse_args(argv)
    return args


def dispatch(argv=None):
    """Run one command and return its exit code (0 ok, 1 usage/config, 2 data/io, 3 numeric)"""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse(argv)
    except ParserExit as e:
        return e.status
    except UsageError as e:
        build_parser()[0].print_usage(sys.stderr)
        print(f'psgan: error: {e}', file=sys.stderr)
        return EXIT_USAGE

    configure_logging('DEBUG' if args.verbose else None)
    configure_runtime()
    title = args.command.replace('-', ' ').capitalize()

    try:
        return args.handler(args)
    except PsganError as e:
        logger.debug('%s failed', args.command, exc_info=True)
        print(f'{title} failed: {e}', file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f'{title} failed: {e}', file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(dispatch())
