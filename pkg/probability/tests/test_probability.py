# probability/tests/test_probability.py
import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from bath.models import BathSpec, Correlator
from hypercube.models import ErrorRates, GridSpec
from probability.lattice import correction_pair_sum, minimum_image_offsets
from probability.pm import evaluate_pm, stochastic_pm, stochastic_pm_joint
from probability.scaling import (
    fit_scaling_exponent, fit_scan, scaling_scan, scan_grid, unit_pair_correlator,
)
from utils.exceptions import BudgetExceededError

SIZES = [16, 32, 64, 128, 256]


def exact_pm(eps, channel, n_cells, m):
    """C(NR, m) ε^m (1 − Σε)^{NR−m} in rational arithmetic."""
    values = {key: Fraction(value) for key, value in eps.eps.items()}
    p = sum(values.values()) if channel is None else values[channel]
    q = 1 - sum(values.values())
    return math.comb(n_cells, m) * p**m * q ** (n_cells - m)


def constant_fcorr(c):
    def fcorr(dx, dt):
        return np.full(len(dt), c)
    return fcorr


def brute_force_pair_sum(grid, fcorr, cells):
    """Double loop over ordered pairs of an explicit cell list."""
    sizes = [grid.n_cycles] + [grid.side] * grid.comp_dim
    terms = []
    for i, a in enumerate(cells):
        for j, b in enumerate(cells):
            if i == j:
                continue
            d = [((p - q + n // 2) % n) - n // 2 for p, q, n in zip(a, b, sizes)]
            terms.append(float(fcorr(np.array([d[1:]], dtype=float), np.array([float(d[0])]))[0]))
    return math.fsum(terms)


class StochasticPmTest(SimpleTestCase):
    def setUp(self):
        self.eps = ErrorRates(eps={'x': 0.02, 'y': 0.01, 'z': 0.03})

    def test_noiseless_limit(self):
        clean = ErrorRates(eps={'x': 0.0})
        self.assertEqual(stochastic_pm(clean, 'x', 4, 5, 0), 1.0)
        self.assertEqual(stochastic_pm(clean, 'x', 4, 5, 1), 0.0)
        self.assertEqual(stochastic_pm(clean, 'x', 4, 5, 20), 0.0)

    def test_single_cell(self):
        self.assertAlmostEqual(stochastic_pm(ErrorRates(eps={'x': 0.1}), 'x', 1, 1, 1), 0.1, delta=1e-15)

    def test_matches_rational_oracle(self):
        for channel in ('x', 'y', 'z', None):
            for m in range(21):
                expected = float(exact_pm(self.eps, channel, 20, m))
                value = stochastic_pm(self.eps, channel, 4, 5, m)
                self.assertAlmostEqual(value, expected, delta=1e-12 * max(expected, 1e-300) + 1e-300)

    def test_any_type_distribution_is_normalized(self):
        for N, R in ((4, 5), (8, 8), (1, 64), (3, 7)):
            total = math.fsum(stochastic_pm(self.eps, None, N, R, m) for m in range(N * R + 1))
            self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_single_type_sum(self):
        # the other channels' errors are excluded from every term
        total = math.fsum(stochastic_pm(self.eps, 'x', 4, 5, m) for m in range(21))
        self.assertAlmostEqual(total, (1 - 0.01 - 0.03) ** 20, delta=1e-12)

    def test_joint_distribution_is_normalized(self):
        terms = []
        for counts in itertools.product(range(7), repeat=3):
            if sum(counts) <= 6:
                terms.append(stochastic_pm_joint(self.eps, 2, 3, dict(zip('xyz', counts))))
        self.assertAlmostEqual(math.fsum(terms), 1.0, delta=1e-12)
        self.assertAlmostEqual(
            stochastic_pm_joint(self.eps, 2, 3, {'x': 2}),
            float(math.comb(6, 2) * Fraction(0.02) ** 2 * (1 - Fraction(0.02) - Fraction(0.01) - Fraction(0.03)) ** 4),
            delta=1e-15,
        )

    def test_out_of_range(self):
        with self.assertRaises(ValueError):
            stochastic_pm(self.eps, 'x', 2, 2, 5)
        with self.assertRaises(ValueError):
            stochastic_pm(self.eps, 'x', 2, 2, -1)
        with self.assertRaises(ValueError):
            stochastic_pm_joint(self.eps, 1, 2, {'x': 2, 'y': 1})


class PairSumTest(SimpleTestCase):
    def test_zero_correlator(self):
        grid = GridSpec(delta_t=1.0, n_cycles=4, n_qubits=16, comp_dim=2)
        self.assertEqual(correction_pair_sum(grid, constant_fcorr(0.0)), 0.0)

    def test_two_cell_grid(self):
        grid = GridSpec(delta_t=1.0, n_cycles=2, n_qubits=1)
        self.assertAlmostEqual(correction_pair_sum(grid, constant_fcorr(0.3)), 0.6, delta=1e-15)

    def test_constant_counts_ordered_pairs(self):
        grid = GridSpec(delta_t=1.0, n_cycles=3, n_qubits=27, comp_dim=3)
        self.assertAlmostEqual(correction_pair_sum(grid, constant_fcorr(1.0)), 81 * 80)

    def test_minimum_image_offsets(self):
        self.assertEqual(minimum_image_offsets(4).tolist(), [-2, -1, 0, 1])
        self.assertEqual(minimum_image_offsets(3).tolist(), [-1, 0, 1])
        self.assertEqual(minimum_image_offsets(1).tolist(), [0])

    def test_matches_brute_force_under_relabeling(self):
        grid = GridSpec(delta_t=1.0, n_cycles=3, n_qubits=16, comp_dim=2)
        fcorr = unit_pair_correlator(Correlator.power_law(0.7, 1.0))
        cells = list(itertools.product(range(3), range(4), range(4)))
        expected = correction_pair_sum(grid, fcorr)
        for seed in range(3):
            random.Random(seed).shuffle(cells)
            self.assertAlmostEqual(brute_force_pair_sum(grid, fcorr, cells), expected, delta=1e-12 * expected)

    def test_parallel_is_bit_identical(self):
        grid = GridSpec(delta_t=1.0, n_cycles=32, n_qubits=32)
        fcorr = unit_pair_correlator(Correlator.power_law(0.8, 1.0))
        sequential = correction_pair_sum(grid, fcorr, workers=1)
        with ThreadPoolExecutor(max_workers=2) as executor:
            results = list(executor.map(lambda workers: correction_pair_sum(grid, fcorr, workers=workers), (4, 8)))
        self.assertEqual(results, [sequential, sequential])

    def test_budget(self):
        grid = GridSpec(delta_t=1.0, n_cycles=100, n_qubits=100)
        with self.assertRaises(BudgetExceededError):
            correction_pair_sum(grid, constant_fcorr(1.0), max_cells=9999)
        with self.assertRaises(ValueError):
            correction_pair_sum(grid, constant_fcorr(1.0), m=3)


class EvaluatePmTest(SimpleTestCase):
    def test_uncorrelated_reduces_to_stochastic(self):
        grid = GridSpec(delta_t=1.0, n_cycles=4, n_qubits=4)
        eps = ErrorRates(eps={'x': 0.01})
        breakdown = evaluate_pm(grid, eps, constant_fcorr(0.0), 2, channel='x')
        self.assertEqual(breakdown.pair_correction, 0.0)
        self.assertEqual(breakdown.stochastic, stochastic_pm(eps, 'x', 4, 4, 2))
        self.assertEqual(breakdown.total, breakdown.stochastic)

    def test_two_cell_hand_computation(self):
        grid = GridSpec(delta_t=1.0, n_cycles=2, n_qubits=1)
        eps = ErrorRates(eps={'x': 0.05})
        breakdown = evaluate_pm(grid, eps, constant_fcorr(0.4), 2, channel='x')
        p2 = 0.05**2
        self.assertAlmostEqual(breakdown.stochastic, p2, delta=1e-15)
        self.assertAlmostEqual(breakdown.total, p2 * 1.4, delta=1e-15)
        self.assertAlmostEqual(breakdown.ratio, 0.4, delta=1e-12)

    def test_non_cubic_grid(self):
        grid = GridSpec(delta_t=1.0, n_cycles=2, n_qubits=2, comp_dim=2)
        eps = ErrorRates(eps={'x': 0.01})
        breakdown = evaluate_pm(grid, eps, constant_fcorr(1.0), 1, channel='x')
        self.assertEqual(breakdown.stochastic, stochastic_pm(eps, 'x', 2, 2, 1))
        with self.assertRaises(ValueError):
            evaluate_pm(grid, eps, constant_fcorr(1.0), 2, channel='x')

    def test_no_pair_for_single_error(self):
        grid = GridSpec(delta_t=1.0, n_cycles=4, n_qubits=4)
        breakdown = evaluate_pm(grid, ErrorRates(eps={'x': 0.01}), constant_fcorr(1.0), 1, channel='x')
        self.assertEqual(breakdown.pair_correction, 0.0)

    def test_truncation_limit(self):
        grid = GridSpec(delta_t=1.0, n_cycles=4, n_qubits=4)
        with self.assertRaises(ValueError):
            evaluate_pm(grid, ErrorRates(eps={'x': 0.01}), constant_fcorr(1.0), 5)

    def test_irrelevant_ratio_decreases(self):
        fcorr = unit_pair_correlator(Correlator.power_law(1.5, 1.0))
        eps = ErrorRates(eps={'x': 0.01})
        ratios = [evaluate_pm(scan_grid(L, 1, 1.0), eps, fcorr, 2, channel='x').ratio for L in (4, 8, 16, 32, 64)]
        self.assertTrue(all(later < earlier for earlier, later in zip(ratios, ratios[1:])), ratios)


class ScalingFitTest(SimpleTestCase):
    def test_exact_power_law(self):
        fit = fit_scaling_exponent([(L, float(L) ** 3) for L in (2, 4, 8, 16, 32)])
        self.assertAlmostEqual(fit.slope, 3.0, delta=1e-10)
        self.assertLess(fit.stderr, 1e-6)
        self.assertEqual(fit.n_points, 4)

    def test_constant(self):
        fit = fit_scaling_exponent([(L, 7.0) for L in (2, 4, 8, 16)])
        self.assertAlmostEqual(fit.slope, 0.0, delta=1e-12)

    def test_invalid_points(self):
        with self.assertRaises(ValueError):
            fit_scaling_exponent([(2, 1.0), (4, 2.0), (8, 3.0)])
        with self.assertRaises(ValueError):
            fit_scaling_exponent([(2, 1.0), (4, 0.0), (8, 3.0), (16, 4.0)])


class DimensionalCriterionTest(SimpleTestCase):
    """Excess growth of the pair sum on D = 1, z = 1 grids L × L."""

    def scan(self, delta):
        return scaling_scan(BathSpec(z=1.0, delta={'x': delta}), 'x', 1, SIZES, workers=2)

    def test_relevant_exponents(self):
        for delta in (0.6, 0.75):
            fit = fit_scan(self.scan(delta))
            self.assertAlmostEqual(fit.slope, 2 * (1 + 1 - 2 * delta), delta=0.1)
            self.assertEqual(fit.verdict, 'Relevant')

    def test_marginal_point(self):
        fit = fit_scan(self.scan(1.0))
        self.assertAlmostEqual(fit.slope, 0.0, delta=0.1)
        self.assertEqual(fit.verdict, 'Marginal')

    def test_irrelevant_sum_is_bounded(self):
        rows = self.scan(1.5)
        fit = fit_scan(rows)
        self.assertLess(fit.slope, -1.0)
        self.assertEqual(fit.verdict, 'Irrelevant')
        per_cell = [row.per_cell for row in rows]
        self.assertLess(abs(per_cell[-1] - per_cell[-2]), 1e-6 * per_cell[-1])

    def test_logarithmic_growth_at_integrability_edge(self):
        # 4δ = D + z: the per-cell sum gains a constant per doubling of L
        per_cell = [row.per_cell for row in self.scan(0.5)]
        steps = np.diff(per_cell)[1:]
        self.assertTrue(np.all(steps > 0))
        np.testing.assert_allclose(steps, steps.mean(), rtol=0.05)
        local_slopes = np.diff(np.log(per_cell)) / np.log(2.0)
        self.assertTrue(np.all(np.diff(local_slopes) < 0), local_slopes)
