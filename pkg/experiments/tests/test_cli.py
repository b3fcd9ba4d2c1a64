# experiments/tests/test_cli.py
import argparse
import csv
import io
import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from rest_framework.exceptions import ValidationError

from experiments.management.commands.resilience import Command
from experiments.serializers import apply_overrides, load_config, parse_override

CONFIGS = Path(__file__).resolve().parent.parent / 'configs'
IRRELEVANT_X = ['--set', 'noise.z=1', '--set', 'noise.delta.x=1.5']


def run(*args):
    out = io.StringIO()
    call_command('resilience', *args, stdout=out)
    return out.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class ClassifyCommandTest(SimpleTestCase):
    def test_irrelevant_channel_line(self):
        output = run('classify', *IRRELEVANT_X)
        self.assertEqual(output, "x: Irrelevant, exponent = -1, pulses_needed = 0\n")

    def test_relevant_channel_needs_a_pulse(self):
        output = run('classify', '--set', 'noise.z=1', '--set', 'noise.delta.x=0.5')
        self.assertEqual(output, "x: Relevant, exponent = 1, pulses_needed = 1\n")

    def test_csv_format(self):
        rows = csv_rows(run('classify', *IRRELEVANT_X, '--format', 'csv'))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]['channel'], 'x')
        self.assertEqual(rows[0]['verdict'], 'Irrelevant')

    def test_missing_section(self):
        with self.assertRaises(CommandError) as ctx:
            run('classify')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("'noise'", str(ctx.exception))


class FlowCommandTest(SimpleTestCase):
    def test_free_flow_keeps_couplings_constant(self):
        output = run(
            'flow', *IRRELEVANT_X, '--set', 'noise.delta.x=1', '--set', 'noise.lambda.x=0.2',
            '--set', 'rg.ell_max=1', '--set', 'rg.step=0.1',
        )
        rows = csv_rows(output)
        self.assertEqual(len(rows), 11)
        for row in rows:
            self.assertAlmostEqual(float(row['lambda_x']), 0.2, places=12)

    def test_kt_flow_from_config(self):
        output = run('flow', '--kt', '--config', str(CONFIGS / 'kt.json'), '--format', 'json')
        self.assertEqual(json.loads(output)['phase'], 'Bound')

    def test_kt_flag_ignores_noise_section(self):
        output = run(
            'flow', '--kt', *IRRELEVANT_X, '--set', 'kt.x0=-0.5', '--set', 'kt.y0=0.1', '--format', 'json',
        )
        self.assertEqual(json.loads(output)['phase'], 'Bound')


class PipelineCommandTest(SimpleTestCase):
    def test_irrelevant_model_is_below_threshold(self):
        output = run('pipeline', '--config', str(CONFIGS / 'irrelevant.json'))
        self.assertIn("x: Irrelevant, exponent = -1", output)
        self.assertIn("phase: below threshold", output)
        self.assertIn("levels needed for 1e-15:", output)

    def test_relevant_model_exits_with_status_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('pipeline', '--config', str(CONFIGS / 'relevant.json'))
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("not provable", str(ctx.exception))

    def test_grid_above_cutoff_exits_with_status_2(self):
        with self.assertRaises(CommandError) as ctx:
            run('epsilon', *IRRELEVANT_X, '--set', 'noise.lambda.x=0.1', '--set', 'grid.delta_t=0.5')
        self.assertEqual(ctx.exception.returncode, 2)


class ConfigErrorTest(SimpleTestCase):
    def test_unknown_key_is_named(self):
        with self.assertRaises(CommandError) as ctx:
            run('classify', *IRRELEVANT_X, '--set', 'noise.temperature=3')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("noise.temperature", str(ctx.exception))

    def test_typo_in_section_name(self):
        with self.assertRaises(CommandError) as ctx:
            run('classify', *IRRELEVANT_X, '--set', 'mc.sed=4')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("mc.sed", str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            run('classify', '--config', str(CONFIGS / 'does-not-exist.json'))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'broken.json'
            path.write_text('{"noise": ')
            with self.assertRaises(CommandError) as ctx:
                run('classify', '--config', str(path))
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("not valid JSON", str(ctx.exception))

    def test_override_without_equals(self):
        with self.assertRaises(CommandError) as ctx:
            run('classify', *IRRELEVANT_X, '--set', 'noise.z')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_unknown_subcommand(self):
        with self.assertRaises(CommandError):
            run('anneal')


class ThresholdCommandTest(SimpleTestCase):
    args = ('threshold', '--set', 'threshold.p_values=[0.05, 0.1]', '--set', 'mc.samples=10000')

    def test_json_summary(self):
        payload = json.loads(run(*self.args, '--seed', '11', '--format', 'json'))
        self.assertEqual(payload['seed'], 11)
        self.assertEqual([row['p'] for row in payload['rows']], [0.05, 0.1])
        self.assertGreater(payload['c'], 0)

    def test_same_seed_same_output(self):
        self.assertEqual(run(*self.args, '--seed', '11'), run(*self.args, '--seed', '11'))

    def test_config_seed_is_used(self):
        self.assertEqual(run(*self.args, '--set', 'mc.seed=11'), run(*self.args, '--seed', '11'))

    def test_settings_seed_is_the_fallback(self):
        with override_settings(RESILIENCE={**settings.RESILIENCE, 'ROOT_SEED': 11}):
            fallback = run(*self.args)
        self.assertEqual(fallback, run(*self.args, '--seed', '11'))

    def test_out_writes_table_and_summary(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'sweep.csv'
            self.assertEqual(run(*self.args, '--seed', '3', '--out', str(path)), '')
            self.assertEqual(path.read_text().splitlines()[0], 'p,logical_rate,stderr')
            summary = json.loads((Path(tmp) / 'sweep.summary.json').read_text())
        self.assertEqual(summary['seed'], 3)


class CoulombCommandTest(SimpleTestCase):
    def test_trace_and_exact_partition(self):
        output = run(
            'coulomb', '--config', str(CONFIGS / 'coulomb.json'),
            '--set', 'mc.sweeps=50', '--set', 'coulomb.chains=1', '--format', 'json',
        )
        payload = json.loads(output)
        self.assertEqual(len(payload['rows']), 50)
        self.assertIn('exact', payload)
        self.assertIn(payload['kt_phase'], {'Bound', 'Unbound', 'Undetermined'})


class HelpTest(SimpleTestCase):
    def test_epilog_lists_config_keys(self):
        parser = Command().create_parser('manage.py', 'resilience')
        subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        text = subparsers.choices['classify'].format_help()
        for key in ('noise.delta.{x,y,z}', 'noise.lambda.{x,y,z}', 'grid.delta_t', 'mc.seed', 'coulomb.exact'):
            self.assertIn(key, text)


class OverrideTest(SimpleTestCase):
    def test_values_are_json_when_they_parse(self):
        self.assertEqual(parse_override('rg.step=0.5'), (['rg', 'step'], 0.5))
        self.assertEqual(parse_override('scan.sizes=[8, 16]'), (['scan', 'sizes'], [8, 16]))
        self.assertEqual(parse_override('scan.channel=y'), (['scan', 'channel'], 'y'))

    def test_nested_sections_are_created(self):
        data = apply_overrides({'noise': {'z': 1}}, ['noise.delta.x=1.5', 'mc.seed=4'])
        self.assertEqual(data, {'noise': {'z': 1, 'delta': {'x': 1.5}}, 'mc': {'seed': 4}})

    def test_scalar_in_the_way(self):
        with self.assertRaises(ValueError):
            apply_overrides({'noise': 3}, ['noise.z=1'])

    def test_empty_component(self):
        with self.assertRaises(ValueError):
            parse_override('noise..z=1')


class LoadConfigTest(SimpleTestCase):
    def test_defaults_are_filled(self):
        config = load_config({})
        self.assertIsNone(config.noise)
        self.assertEqual(config.rg['ell_max'], settings.RESILIENCE['RG_ELL_MAX'])
        self.assertEqual(config.threshold['target'], 1e-15)
        self.assertEqual(config.scan['sizes'], [16, 32, 64, 128, 256])
        self.assertEqual(config.comp_dim, 1)

    def test_odd_scan_size_rejected(self):
        with self.assertRaises(ValidationError):
            load_config({'scan': {'sizes': [16, 32, 63, 128]}})

    def test_sizes_are_sorted(self):
        config = load_config({'scan': {'sizes': [64, 16, 128, 32]}})
        self.assertEqual(config.scan['sizes'], [16, 32, 64, 128])

    def test_example_configs_validate(self):
        for path in sorted(CONFIGS.glob('*.json')):
            with self.subTest(config=path.name):
                load_config(json.loads(path.read_text()))


class FailFastValidationTest(SimpleTestCase):
    def test_exact_enumeration_beyond_side_limit(self):
        with self.assertRaises(CommandError) as ctx:
            run('coulomb', '--config', str(CONFIGS / 'coulomb.json'), '--set', 'coulomb.side=8')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("coulomb.side", str(ctx.exception))

    def test_exact_enumeration_beyond_pair_limit(self):
        with self.assertRaises(CommandError) as ctx:
            run('coulomb', '--config', str(CONFIGS / 'coulomb.json'), '--set', 'coulomb.max_pairs=3')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("coulomb.max_pairs", str(ctx.exception))

    def test_flip_time_outside_cycle(self):
        with self.assertRaises(CommandError) as ctx:
            run(
                'epsilon', '--config', str(CONFIGS / 'irrelevant.json'),
                '--set', 'pulses.n=1', '--set', 'pulses.schedule=[5.0]',
            )
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("pulses.schedule", str(ctx.exception))

    def test_rejected_before_anything_runs(self):
        with self.assertRaises(ValidationError):
            load_config({'grid': {'delta_t': 2.0}, 'pulses': {'n': 1, 'schedule': [5.0]}})
        with self.assertRaises(ValidationError):
            load_config({'coulomb': {'side': 8, 'coupling': 4.0, 'fugacity': 0.2, 'exact': True}})
        config = load_config({'grid': {'delta_t': 2.0}, 'pulses': {'n': 1, 'schedule': [1.0]}})
        self.assertEqual(config.pulses.schedule, (1.0,))


class ScalingScanCommandTest(SimpleTestCase):
    def test_table_columns_and_excess_summary(self):
        payload = json.loads(run('scaling-scan', '--config', str(CONFIGS / 'scan.json'), '--format', 'json'))
        self.assertEqual([sorted(row) for row in payload['rows']], [['L', 'ratio', 'sum']] * 5)
        self.assertEqual(sorted(payload['excess'], key=int), ['16', '32', '64', '128', '256'])
        self.assertEqual(payload['fit']['verdict'], 'Relevant')
