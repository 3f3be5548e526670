"""Pedestrian synthesis with a U-Net generator and two discriminators."""

import logging
import os

import torch
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

__version__ = '1.0.0'

_handler = None


def configure_logging(level=None):
    """Attach a single stream handler to the package logger"""
    global _handler

    level = level or os.getenv('PSGAN_LOG_LEVEL', 'INFO')
    logger = logging.getLogger('psgan')
    logger.setLevel(level.upper() if isinstance(level, str) else level)

    if _handler is None:
        _handler = logging.StreamHandler()
        _handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
        logger.addHandler(_handler)

    return logger


def configure_runtime():
    """Apply torch runtime settings from the environment"""
    threads = os.getenv('PSGAN_NUM_THREADS')
    if threads:
        torch.set_num_threads(int(threads))

    if os.getenv('PSGAN_DETERMINISTIC', '1') == '1':
        torch.use_deterministic_algorithms(True, warn_only=True)
