# Command-line subcommands
from . import convert, convert_daimler, evaluate, prep, synth, toygen, train

COMMANDS = [toygen, convert, convert_daimler, prep, train, synth, evaluate]

__all__ = ['COMMANDS']
