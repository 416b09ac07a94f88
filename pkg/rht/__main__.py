"""Command-line driver for the rational homotopy toolkit."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import configargparse
from pydantic import ValidationError

from rht import __version__
from rht.config import AppConfig
from rht.dsl import load_file
from rht.errors import InternalInvariantViolation, RhtError
from rht.logging_config import setup_logging
from rht.metrics import ComputationMetrics
from rht.reports import exit_code, render_text
from rht.runners import COMMANDS, CommandOptions, format_source, parse_degrees, run_command

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_INTERNAL = 3


def build_parser() -> configargparse.ArgParser:
    """Build the argument parser."""
    parser = configargparse.ArgParser(
        description=f'Rational homotopy toolkit v{__version__}',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        prog='rht',
        config_file_parser_class=configargparse.YAMLConfigFileParser,
    )

    # Configuration file
    parser.add('-c', '--config', required=False, is_config_file=True, help='Config file path (YAML)')

    parser.add('command', choices=COMMANDS, help='Command to run')
    parser.add('source', help='Source file (UTF-8)')
    parser.add('classes', nargs='*', help='Three degree-1 basis elements for massey')

    # Command options
    command_group = parser.add_argument_group('Command Options')
    command_group.add('--name', help='Only process the named block')
    command_group.add('--degrees', help='Degree range a..b for cohomology')
    command_group.add('--stages', type=int, default=5, env_var='RHT_STAGES', help='Stage bound for 1-minimal towers')
    command_group.add('--depth', type=int, help='Stage bound for malcev (defaults to --stages)')
    command_group.add('--ring', help='Basic ring block for sasaki')
    mode = command_group.add_mutually_exclusive_group()
    mode.add('--pipeline', dest='sasaki_mode', action='store_const', const='pipeline',
             help='sasaki: model, tower, bigrading and 1-formality')
    mode.add('--mhd', dest='sasaki_mode', action='store_const', const='mhd',
             help='sasaki: mixed-Hodge-diagram axioms and spectral pages')
    mode.add('--hodge-split', dest='sasaki_mode', action='store_const', const='hodge-split',
             help='sasaki: Deligne splittings of the model cohomology')

    # Limits
    limits_group = parser.add_argument_group('Limits')
    limits_group.add('--max-dim', type=int, default=64, env_var='RHT_MAX_DIM',
                     help='Largest ambient dimension accepted from input')
    limits_group.add('--max-generators', type=int, env_var='RHT_MAX_GENERATORS',
                     help='Cap on the total tower generator count (defaults to --max-dim)')

    # Output
    output_group = parser.add_argument_group('Output')
    output_group.add('--json', dest='json_output', action='store_true', env_var='RHT_JSON',
                     help='Write the JSON report')
    output_group.add('--assert', dest='assert_mode', action='store_true', env_var='RHT_ASSERT',
                     help='Exit 1 when a verdict is false')
    output_group.add('--metrics-file', env_var='RHT_METRICS_FILE',
                     help='Write Prometheus metrics to this textfile')

    # Logging
    logging_group = parser.add_argument_group('Logging')
    logging_group.add('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                      default='WARNING', env_var='RHT_LOG_LEVEL', help='Log level')
    logging_group.add('--log-format', choices=['standard', 'json'], default='standard',
                      env_var='RHT_LOG_FORMAT', help='Log format')
    logging_group.add('--log-file', env_var='RHT_LOG_FILE', help='Log file path')
    logging_group.add('--log-to-console', action='store_true', env_var='RHT_LOG_TO_CONSOLE',
                      help='Log to stderr')

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def _run(args: argparse.Namespace, config: AppConfig) -> int:
    limits = config.get_limits_config()
    output = config.get_output_config()
    if args.command == 'fmt':
        path = Path(args.source)
        print(format_source(path.read_text(encoding='utf-8'), str(path)))
        return 0

    options = CommandOptions(
        degrees=parse_degrees(args.degrees) if args.degrees else None,
        stages=limits.stages,
        max_generators=limits.max_generators,
        depth=args.depth,
        classes=tuple(args.classes),
        ring=args.ring,
        sasaki_mode=args.sasaki_mode or 'model',
        name=args.name,
    )
    metrics = ComputationMetrics()
    try:
        with metrics.track('load'):
            definitions = load_file(args.source, limits.max_dim)
        report = run_command(args.command, definitions, options, metrics)
    finally:
        metrics_config = config.get_metrics_config()
        if metrics_config.enabled:
            metrics.write(metrics_config.file)

    print(report.to_json() if output.json_output else render_text(report))
    return exit_code(report, output.assert_mode)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = parse_args(argv)

    try:
        config = AppConfig(**vars(args))
    except ValidationError as e:
        print(f"rht: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(config.get_logging_config(), command=args.command, source=args.source)
    logger.info(f"rht v{__version__}: {args.command} {args.source}")

    try:
        return _run(args, config)
    except InternalInvariantViolation as e:
        logger.exception(f"Internal invariant violated: {e}")
        print(f"rht: internal error: {e}", file=sys.stderr)
        return e.exit_code
    except RhtError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"rht: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid options: {e}")
        print(f"rht: invalid options: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Cannot read {args.source}: {e}")
        print(f"rht: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        print(f"rht: unexpected error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
