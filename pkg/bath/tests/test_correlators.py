# bath/tests/test_correlators.py
import itertools
import random

import numpy as np
from django.test import SimpleTestCase
from rest_framework import serializers

from bath.correlators import two_point
from bath.models import BathSpec, Correlator, NoiseModel
from bath.serializers import dump_noise_model, load_noise_model
from bath.wick import count_pairings, iter_pairings, wick_expand
from utils.exceptions import BudgetExceededError


class TwoPointTest(SimpleTestCase):
    def test_origin_is_one(self):
        for delta in (0.0, 0.3, 1.0, 2.5):
            self.assertEqual(two_point(Correlator.power_law(delta, 1.0), [0.0], 0.0), 1.0)

    def test_zero_dimension_is_constant(self):
        c = Correlator.power_law(0.0, 2.0)
        self.assertEqual(two_point(c, [3.0, -4.0], 17.0), 1.0)

    def test_spatial_ratio_approaches_quarter(self):
        c = Correlator.power_law(1.0, 1.0)
        ratio = two_point(c, [200.0], 0.0) / two_point(c, [100.0], 0.0)
        self.assertAlmostEqual(ratio, 0.25, delta=1e-3)

    def test_symmetric_and_monotone(self):
        c = Correlator.power_law(0.7, 1.5)
        self.assertEqual(two_point(c, [2.0, -1.0], 3.0), two_point(c, [-2.0, 1.0], -3.0))
        radii = np.linspace(0.0, 50.0, 101)
        values = two_point(c, radii[:, None], 0.0)
        self.assertTrue(np.all(values > 0))
        self.assertTrue(np.all(np.diff(values) <= 0))
        times = two_point(c, [0.0], np.linspace(0.0, 50.0, 101))
        self.assertTrue(np.all(np.diff(times) <= 0))

    def test_time_asymptotics(self):
        c = Correlator.power_law(1.0, 2.0)
        # ~ |t|^{-2δ/z} = |t|^{-1}
        ratio = two_point(c, [0.0], 2.0e4) / two_point(c, [0.0], 1.0e4)
        self.assertAlmostEqual(ratio, 0.5, delta=1e-3)

    def test_instantaneous_mode_rejects_time(self):
        c = Correlator.power_law(1.0, 0.0)
        self.assertEqual(two_point(c, [1.0], 0.0), 0.5)
        with self.assertRaises(ValueError):
            two_point(c, [1.0], 0.5)

    def test_negative_delta_rejected(self):
        with self.assertRaises(ValueError):
            Correlator.power_law(-0.1, 1.0)

    def test_user_table_vanishes_outside(self):
        c = Correlator.user_table([0.0, 1.0, 2.0], [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]], times=[0.0, 1.0])
        self.assertEqual(two_point(c, [0.0], 0.0), 1.0)
        self.assertEqual(two_point(c, [1.0], 0.0), 0.0)
        self.assertEqual(two_point(c, [0.0], 1.0), 0.0)
        self.assertEqual(two_point(c, [5.0], 0.0), 0.0)

    def test_cutoff_units(self):
        bath = BathSpec(z=1.0, v=2.0, cutoff=4.0, delta={'x': 1.0})
        x, t = bath.to_cutoff_units(3.0, 0.5)
        self.assertEqual(float(x), 6.0)
        self.assertEqual(float(t), 2.0)


class WickExpandTest(SimpleTestCase):
    def test_two_points(self):
        self.assertEqual(wick_expand(lambda p, q: 0.75, ['a', 'a']), 0.75)

    def test_coincident_points_give_double_factorial(self):
        c = 0.5
        for n in range(0, 7):
            value = wick_expand(lambda p, q: c, [0] * (2 * n))
            self.assertEqual(value, count_pairings(2 * n) * c**n)

    def test_six_points_have_fifteen_pairings(self):
        self.assertEqual(len(list(iter_pairings(range(6)))), 15)
        self.assertEqual(count_pairings(6), 15)

    def test_permutation_invariance(self):
        rng = random.Random(7)
        c = Correlator.power_law(0.8, 1.0)

        def pair_fn(p, q):
            return two_point(c, [p[0] - q[0]], p[1] - q[1])

        for _ in range(20):
            points = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(8)]
            reference = wick_expand(pair_fn, points)
            shuffled = points[:]
            rng.shuffle(shuffled)
            self.assertAlmostEqual(wick_expand(pair_fn, shuffled), reference, delta=1e-12 * abs(reference))

    def test_gaussian_fourth_moment(self):
        # <:f²::f²:> for a real field is 2C²: the 3 pairings minus the 1 self-contraction term
        values = {('a', 'b'): 0.3, ('a', 'a'): 1.0, ('b', 'b'): 1.0}

        def pair_fn(p, q):
            return values[tuple(sorted((p, q)))]

        full = wick_expand(pair_fn, ['a', 'a', 'b', 'b'])
        self.assertAlmostEqual(full - 1.0, 2 * 0.3**2)

    def test_odd_and_oversized_inputs(self):
        with self.assertRaises(ValueError):
            wick_expand(lambda p, q: 1.0, [0, 0, 0])
        with self.assertRaises(BudgetExceededError):
            wick_expand(lambda p, q: 1.0, [0] * 14)


class NoiseModelConfigTest(SimpleTestCase):
    config = {
        'z': 1.0,
        'v': 1.0,
        'cutoff': 1.0,
        'delta': {'x': 0.4, 'z': 1.5},
        'lambda': {'x': 0.1, 'z': 0.05},
        'beta_g': {'x': {'z': 0.2}},
        'beta_h': {'z': {'z': -1.0}},
    }

    def test_load_and_dump(self):
        model = load_noise_model(self.config)
        self.assertIsInstance(model, NoiseModel)
        self.assertEqual(model.channels, ('x', 'z'))
        self.assertEqual(model.h_matrix()[2, 2], -1.0)
        self.assertEqual(dump_noise_model(model), self.config)

    def test_unknown_keys_are_named(self):
        for key, value in (('lamda', {'x': 0.1}), ('delta', {'w': 1.0})):
            data = {**self.config, key: value}
            with self.assertRaises(serializers.ValidationError) as ctx:
                load_noise_model(data)
            self.assertIn('w' if key == 'delta' else 'lamda', str(ctx.exception.detail))

    def test_model_invariants(self):
        for bad in ({'delta': {'x': -1.0}}, {'lambda': {'y': 0.1}}, {'v': 0.0}, {'z': -1.0}):
            with self.assertRaises(serializers.ValidationError):
                load_noise_model({**self.config, **bad})

    def test_instantaneous_mode_accepted(self):
        model = load_noise_model({**self.config, 'z': 0})
        self.assertTrue(model.bath.instantaneous)

    def test_all_channels_as_vector(self):
        model = load_noise_model(self.config)
        np.testing.assert_array_equal(model.coupling_vector(), [0.1, 0.0, 0.05])
        self.assertEqual(list(itertools.chain(*model.g_matrix()))[2], 0.2)
