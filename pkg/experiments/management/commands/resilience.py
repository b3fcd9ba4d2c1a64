# experiments/management/commands/resilience.py
"""
python manage.py resilience <subcommand> [--config PATH] [--seed S]
    [--out PATH] [--format csv|json] [--set key=value ...]

Exit status: 0 on success, 1 on a config error, 2 when the noise model is
outside the regime the construction covers.
"""
import argparse
import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from experiments.runners import RUNNERS
from experiments.serializers import ExperimentConfigSerializer, apply_overrides, load_config
from utils.exceptions import ModelValidityError
from utils.output import rows_to_csv, to_json, write_text
from utils.seeding import resolve_seed
from utils.serializers import field_paths, flatten_errors

logger = logging.getLogger(__name__)

CONFIG_ERROR, MODEL_ERROR = 1, 2


def config_keys_help():
    keys = field_paths(ExperimentConfigSerializer())
    return "config keys (--config file or --set key=value):\n  " + "\n  ".join(keys)


class Command(BaseCommand):
    help = "Run one stage of the resilience analysis from a JSON experiment config."

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help="Path to the JSON experiment config.")
        common.add_argument('--seed', type=int, help="Root seed (falls back to mc.seed, then RESILIENCE_RG_SEED).")
        common.add_argument('--out', help="Write the output here instead of stdout.")
        common.add_argument('--format', choices=['csv', 'json'], help="Output format.")
        common.add_argument(
            '--set', action='append', default=[], metavar='KEY=VALUE', dest='overrides',
            help="Override a config key; repeatable.",
        )

        subparsers = parser.add_subparsers(dest='subcommand', required=True, metavar='subcommand')
        epilog = config_keys_help()
        descriptions = {
            'classify': "Classify each channel by the dimensional criterion.",
            'flow': "Integrate the coupling flow (or the KT recursion with --kt).",
            'epsilon': "Per-channel error probabilities of one hypercube.",
            'scaling-scan': "Scale the pair-correction sum with the grid size and fit its growth.",
            'coulomb': "Sample the Coulomb gas.",
            'threshold': "Threshold Monte Carlo for the [[7,1,3]] code.",
            'pipeline': "classify → couplings → error rates → threshold → phase verdict.",
        }
        for name in RUNNERS:
            sub = subparsers.add_parser(
                name, parents=[common], help=descriptions[name], description=descriptions[name],
                epilog=epilog, formatter_class=argparse.RawDescriptionHelpFormatter,
            )
            if name == 'flow':
                sub.add_argument('--kt', action='store_true', help="Run the KT recursion from the 'kt' section.")
            if name == 'pipeline':
                sub.add_argument('--target', type=float, help="Target logical rate for the level count (default 1e-15).")

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        config = self._load(options)
        try:
            seed = resolve_seed(options['seed'] if options['seed'] is not None else config.mc.get('seed'))
            report = RUNNERS[subcommand](config, seed=seed)
        except ModelValidityError as exc:
            logger.error(f"{subcommand}: {exc}")
            raise CommandError(str(exc), returncode=MODEL_ERROR)
        except ValueError as exc:
            raise CommandError(f"{subcommand}: {exc}", returncode=CONFIG_ERROR)
        self._emit(report, options, config)

    def _load(self, options):
        data = {}
        if options['config']:
            try:
                data = json.loads(Path(options['config']).read_text())
            except OSError as exc:
                raise CommandError(f"cannot read config '{options['config']}': {exc}", returncode=CONFIG_ERROR)
            except json.JSONDecodeError as exc:
                raise CommandError(f"config '{options['config']}' is not valid JSON: {exc}", returncode=CONFIG_ERROR)
            if not isinstance(data, dict):
                raise CommandError("the config must be a JSON object", returncode=CONFIG_ERROR)

        overrides = list(options['overrides'])
        if options.get('target') is not None:
            overrides.append(f"threshold.target={options['target']!r}")
        try:
            apply_overrides(data, overrides)
            if options.get('kt'):
                data.pop('noise', None)
            return load_config(data)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=CONFIG_ERROR)
        except ValidationError as exc:
            lines = flatten_errors(exc.detail)
            for line in lines:
                logger.error(line)
            raise CommandError("invalid config:\n  " + "\n  ".join(lines), returncode=CONFIG_ERROR)

    def _emit(self, report, options, config):
        fmt = options['format'] or config.output.get('format')
        out = options['out'] or config.output.get('path')
        if fmt == 'json':
            text = to_json(report.as_dict())
        elif fmt == 'csv' or not report.lines:
            text = rows_to_csv(report.header, report.rows)
        else:
            text = '\n'.join(report.lines) + '\n'

        if out is None:
            self.stdout.write(text, ending='')
            return
        path = write_text(out, text)
        if fmt != 'json' and report.summary:
            write_text(path.with_name(f"{path.stem}.summary.json"), to_json(report.summary))
