import argparse
import json
import os

from psgan.errors import UsageError
from psgan.services.scene_data import load_annotations, load_image_directory
from psgan.utils.validators import find_missing_fields, find_unknown_fields


class ParserExit(Exception):
    """Raised instead of sys.exit when argparse finishes (e.g. after --help)"""

    def __init__(self, status):
        super().__init__(status)
        self.status = status


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as exceptions instead of exiting"""

    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            self._print_message(message)
        raise ParserExit(status)


def add_common_options(parser):
    parser.add_argument('--config', help='JSON file with option values; flags override it')
    parser.add_argument('--verbose', action='store_true', help='log at DEBUG level')


def comma_ints(text):
    """Parse '64,128,256' into a tuple of ints"""
    try:
        return tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}')


def apply_config_file(subparser, path):
    """Use the JSON file's values as defaults of subparser so explicit flags win"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            values = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f'cannot read config file {path}: {e}')
    if not isinstance(values, dict):
        raise UsageError(f'config file {path} must hold a JSON object')

    known = vars(subparser.parse_args([]))
    unknown = find_unknown_fields(values, known)
    if unknown:
        raise UsageError(f'unknown keys in {path}: {", ".join(unknown)}')
    subparser.set_defaults(**values)


def require(args, *names):
    """Raise a usage error naming every missing required option"""
    missing = find_missing_fields(vars(args), names)
    if missing:
        raise UsageError('missing required option(s): ' + ', '.join('--' + m.replace('_', '-') for m in missing))


def print_summary(title, rows):
    print('=' * 60)
    print(title)
    print('=' * 60)
    for key, value in rows:
        print(f'  {key}: {value}')


def load_scenes(path, filename='annotations.json'):
    """Scenes from an annotation document, a directory holding one, or a directory of bare images"""
    if os.path.isdir(path):
        document = os.path.join(path, filename)
        if not os.path.exists(document):
            return load_image_directory(path)
        path = document
    return load_annotations(path)
