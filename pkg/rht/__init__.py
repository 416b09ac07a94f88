"""Top-level package for the rational homotopy toolkit."""

import logging

__author__ = """Mariusz Wasiluk"""
__email__ = 'foo@bar.com'
__version__ = '0.1.0'

_main_logger = logging.getLogger(__name__)

# Expose the configuration and the source loader
from rht.config import AppConfig, LimitsConfig  # noqa: E402
from rht.dsl import load, load_file  # noqa: E402

__all__ = [
    '__version__',
    'AppConfig',
    'LimitsConfig',
    'load',
    'load_file',
]
