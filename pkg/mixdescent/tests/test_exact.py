import math
from unittest import TestCase, mock

import numpy as np
from hypothesis import given, settings, strategies as st

from mixdescent import exact
from mixdescent.divergence import f_alpha_prime, psi_exact
from mixdescent.exact import (DiscreteProblem, apply_transform, exact_gradient, exact_one_step, is_fixed_point,
                              random_problem, random_simplex, require_admissible, run_exact)
from mixdescent.exceptions import DimensionMismatch, DomainError, InadmissibleConfig
from mixdescent.mixture import GaussianKernel
from mixdescent.targets import toy_gaussian_mixture
from mixdescent.transforms import Family, TransformConfig, validate_monotonicity

MIRROR = TransformConfig(1.0, Family.EXPONENTIAL, 1.0)
POWER = TransformConfig(0.5, Family.POWER, 1.0)


class DiscreteProblemTests(TestCase):
    def test_positive_entries(self):
        with self.assertRaises(DomainError):
            DiscreteProblem([[1.0, 0.0]], [0.5, 0.5])
        with self.assertRaises(DomainError):
            DiscreteProblem([[1.0, 1.0]], [0.5, -0.5])

    def test_shapes(self):
        with self.assertRaises(DimensionMismatch):
            DiscreteProblem([[1.0, 1.0]], [0.5, 0.3, 0.2])

    def test_random_instance(self):
        problem = DiscreteProblem.random(np.random.default_rng(0))
        self.assertTrue(2 <= problem.atom_count <= 8)
        self.assertTrue(5 <= problem.grid_count <= 50)
        np.testing.assert_allclose(problem.kernel_matrix.sum(axis=1), 1.0)
        self.assertAlmostEqual(problem.target_masses.sum(), 1.0)

    def test_random_problem_sizes(self):
        problem = random_problem(np.random.default_rng(1), atoms=3, grid=7)
        self.assertEqual((problem.atom_count, problem.grid_count), (3, 7))
        self.assertEqual(repr(problem), '<DiscreteProblem J=3 I=7>')

    def test_from_grid(self):
        grid = np.linspace(-10, 10, 2001)[:, None]
        problem = DiscreteProblem.from_grid(np.array([[0.0], [1.0]]), GaussianKernel(1.0), toy_gaussian_mixture(1),
                                            grid, grid[1, 0] - grid[0, 0])
        # the kernel integrates to one and the toy target to Z = 2
        np.testing.assert_allclose(problem.kernel_matrix.sum(axis=1), 1.0, rtol=1e-6)
        self.assertAlmostEqual(problem.target_masses.sum(), 2.0, places=6)


class GradientTests(TestCase):
    def test_zero_when_mixture_equals_target(self):
        masses = np.array([0.1, 0.6, 0.3])
        problem = DiscreteProblem([masses, masses], masses)
        np.testing.assert_allclose(exact_gradient(problem, [0.3, 0.7], 1.0), 0.0, atol=1e-12)

    def test_single_atom(self):
        problem = DiscreteProblem([[0.2, 0.5, 0.3]], [0.4, 0.4, 0.2])
        expected = sum(k * f_alpha_prime(k / p, 0.5) for k, p in zip([0.2, 0.5, 0.3], [0.4, 0.4, 0.2]))
        self.assertAlmostEqual(exact_gradient(problem, [1.0], 0.5)[0], expected, places=14)

    def test_double_loop(self):
        rng = np.random.default_rng(8)
        kernel = rng.uniform(0.1, 2.0, size=(2, 3))
        target = rng.uniform(0.1, 2.0, size=3)
        weights = np.array([0.35, 0.65])
        problem = DiscreteProblem(kernel, target)

        expected = []
        for j in range(2):
            total = 0.0
            for i in range(3):
                mixture = math.fsum(weights[l] * kernel[l, i] for l in range(2))
                total += kernel[j, i] * ((mixture / target[i]) ** -0.5 - 1) / -0.5
            expected.append(total)
        np.testing.assert_allclose(exact_gradient(problem, weights, 0.5), expected, rtol=1e-12)


class UpdateTests(TestCase):
    def test_hand_example(self):
        updated = apply_transform([0.5, 0.5], [0.0, 1.0], MIRROR, 1.0)
        e = math.exp(-1)
        np.testing.assert_allclose(updated, [1 / (1 + e), e / (1 + e)], rtol=1e-15)

    def test_constant_gradient(self):
        weights = np.array([0.2, 0.3, 0.5])
        np.testing.assert_allclose(apply_transform(weights, [0.7, 0.7, 0.7], POWER, 1.0), weights, rtol=1e-15)

    def test_zero_weights_stay_zero(self):
        updated = apply_transform([0.0, 0.4, 0.6], [-1.0, 0.0, 1.0], POWER, 1.0)
        self.assertEqual(updated[0], 0.0)
        self.assertAlmostEqual(updated.sum(), 1.0)

    def test_fixed_point(self):
        self.assertTrue(is_fixed_point([0.5, 0.5], [0.5, 0.5]))
        self.assertFalse(is_fixed_point([0.5, 0.5], [0.5 + 1e-9, 0.5 - 1e-9]))


class RunExactTests(TestCase):
    def test_no_steps(self):
        problem = DiscreteProblem.random(np.random.default_rng(1))
        weights = random_simplex(np.random.default_rng(2), problem.atom_count)
        trace = run_exact(problem, weights, POWER, 0)
        self.assertEqual(len(trace), 1)
        np.testing.assert_array_equal(trace[0].weights, weights)
        self.assertIsNone(trace[0].eta)

    def test_fixed_point_input(self):
        row = np.array([0.2, 0.3, 0.5])
        problem = DiscreteProblem([row, row, row], [0.1, 0.5, 0.4])
        trace = run_exact(problem, [0.2, 0.3, 0.5], POWER, 5)
        for weights in trace.weights:
            np.testing.assert_allclose(weights, [0.2, 0.3, 0.5], rtol=1e-14)

    def test_stops_updating_at_fixed_point(self):
        row = np.array([0.2, 0.3, 0.5])
        problem = DiscreteProblem([row, row, row], [0.1, 0.5, 0.4])
        with mock.patch('mixdescent.exact.exact_one_step', wraps=exact.exact_one_step) as step:
            trace = run_exact(problem, [0.2, 0.3, 0.5], POWER, 5)
        self.assertEqual(step.call_count, 1)
        self.assertEqual(len(trace), 6)
        for weights in trace.weights:
            np.testing.assert_array_equal(weights, [0.2, 0.3, 0.5])
        self.assertEqual(len(set(trace.metric('psi'))), 1)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2 ** 32 - 1),
           config=st.sampled_from([MIRROR, POWER, TransformConfig(2.0, Family.POWER, 0.5, 0.5),
                                   TransformConfig(-1.0, Family.POWER, 1.0, -0.5)]))
    def test_monotone(self, seed, config):
        rng = np.random.default_rng(seed)
        problem = DiscreteProblem.random(rng)
        trace = run_exact(problem, random_simplex(rng, problem.atom_count), config, 30)
        self.assertLessEqual(np.max(np.diff(trace.metric('psi'))), 1e-10)

    def test_reaches_minimum(self):
        rng = np.random.default_rng(2024)
        problem = DiscreteProblem.random(rng, atoms=5, grid=20)
        trace = run_exact(problem, np.full(5, 0.2), POWER, 200)

        search = np.array([psi_exact(problem, w, 0.5) for w in random_simplex(rng, 5, count=10_000)])
        self.assertLessEqual(trace.metric('psi')[-1], search.min() + 1e-6)

    def test_decrease_vanishes_only_at_fixed_points(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            problem = DiscreteProblem.random(rng)
            weights = random_simplex(rng, problem.atom_count)
            updated = exact_one_step(problem, weights, POWER, 1.0)
            decrease = psi_exact(problem, weights, 0.5) - psi_exact(problem, updated, 0.5)
            self.assertEqual(is_fixed_point(weights, updated), abs(decrease) <= 1e-12)

    def test_inadmissible(self):
        problem = DiscreteProblem.random(np.random.default_rng(1))
        weights = np.full(problem.atom_count, 1 / problem.atom_count)
        with self.assertRaises(InadmissibleConfig):
            run_exact(problem, weights, TransformConfig(0.5, Family.POWER, 1.0, 0.1), 3)


class AdmissibleTests(TestCase):
    def test_override_warns(self):
        report = validate_monotonicity(TransformConfig(0.5, Family.POWER, 1.0, 0.1))
        with self.assertLogs('mixdescent.exact', level='WARNING'):
            require_admissible(report, override=True)

    def test_conditional_passes(self):
        report = validate_monotonicity(TransformConfig(0.5, Family.EXPONENTIAL, 0.5))
        require_admissible(report)
