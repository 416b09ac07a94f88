"""Logging setup: text or JSON records on stderr and/or a rotating file."""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import List

from pythonjsonlogger import jsonlogger

from rht.config import LoggingConfig

TEXT_FORMAT = '%(asctime)s [%(levelname)-5.5s] [%(name)s] %(command)s %(source)s: %(message)s'
JSON_FORMAT = '%(timestamp)s %(level)s %(logger)s %(command)s %(source)s %(message)s'

# loggers of libraries that are chatty at DEBUG
QUIET_LOGGERS = ('sympy',)


class RunContextFilter(logging.Filter):
    """Stamp the running command and source file on every record."""

    def __init__(self, command: str = '', source: str = ''):
        super().__init__()
        self.command = command
        self.source = source

    def filter(self, record: logging.LogRecord) -> bool:
        record.command = self.command
        record.source = self.source
        return True


class RunJsonFormatter(jsonlogger.JsonFormatter):
    """JSON records with timestamp, level and logger always filled in."""

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        # required fields named in the format string arrive as None
        if not log_record.get('timestamp'):
            log_record['timestamp'] = self.formatTime(record, self.datefmt)
        if not log_record.get('level'):
            log_record['level'] = record.levelname
        if not log_record.get('logger'):
            log_record['logger'] = record.name
        if record.exc_info and not log_record.get('exc_info'):
            log_record['exc_info'] = self.formatException(record.exc_info)


def _formatter(format_type: str) -> logging.Formatter:
    if format_type == 'json':
        return RunJsonFormatter(JSON_FORMAT)
    return logging.Formatter(fmt=TEXT_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')


def _file_handler(path: Path, max_bytes: int, backup_count: int) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    return logging.handlers.RotatingFileHandler(
        filename=str(path),
        maxBytes=max_bytes,
        backupCount=backup_count,
        encoding='utf-8',
    )


def setup_logging(config: LoggingConfig, command: str = '', source: str = '') -> None:
    """Configure the root logger for one run.

    Reports go to stdout, so console logging always uses stderr. Without a
    console or file target a ``NullHandler`` keeps the root logger silent.

    Args:
        config: Level, format and targets
        command: Command name stamped on every record
        source: Source file stamped on every record
    """
    log_level = getattr(logging, config.level, logging.WARNING)
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    handlers: List[logging.Handler] = []
    if config.console:
        handlers.append(logging.StreamHandler(sys.stderr))
    if config.file:
        try:
            handlers.append(_file_handler(config.file, config.max_bytes, config.backup_count))
        except OSError as e:
            print(f"rht: cannot open log file {config.file}: {e}", file=sys.stderr)

    formatter = _formatter(config.format)
    context = RunContextFilter(command, source)
    for handler in handlers:
        handler.setLevel(log_level)
        handler.setFormatter(formatter)
        handler.addFilter(context)
        root_logger.addHandler(handler)
    if not handlers:
        root_logger.addHandler(logging.NullHandler())

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(log_level, logging.WARNING))

    root_logger.debug(f"Logging configured: level={config.level}, format={config.format}, file={config.file}")
