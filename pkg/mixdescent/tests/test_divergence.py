import math
from unittest import TestCase

import numpy as np
from hypothesis import given, settings, strategies as st

from mixdescent.divergence import (check_simplex, elbo_renyi_bound, f_alpha, f_alpha_prime, f_alpha_second,
                                   f_alpha_tilde, psi_exact, psi_lower_bound)
from mixdescent.exact import DiscreteProblem, exact_gradient, random_simplex
from mixdescent.exceptions import BoundUndefined, DimensionMismatch, DomainError, SimplexError

alphas = st.sampled_from([-1.0, 0.0, 0.3, 0.5, 1.0, 1.7, 2.0, 3.0])


class FAlphaTests(TestCase):
    def test_zero_at_one(self):
        self.assertEqual(f_alpha(1.0, 0.5), 0.0)
        self.assertEqual(f_alpha(1.0, 0.0), 0.0)
        self.assertEqual(f_alpha(1.0, 1.0), 0.0)

    def test_closed_forms(self):
        self.assertAlmostEqual(f_alpha(2.0, 2.0), 0.5, places=15)
        self.assertAlmostEqual(f_alpha(2.0, 0.0), 1 - math.log(2), places=15)
        self.assertAlmostEqual(f_alpha(2.0, 1.0), 1 - 2 + 2 * math.log(2), places=15)

    def test_continuity_at_limits(self):
        self.assertAlmostEqual(f_alpha(3.0, 1e-8), f_alpha(3.0, 0.0), delta=1e-6)
        self.assertAlmostEqual(f_alpha(3.0, 1 - 1e-8), f_alpha(3.0, 1.0), delta=1e-6)
        self.assertAlmostEqual(f_alpha(3.0, 1 + 1e-8), f_alpha(3.0, 1.0), delta=1e-6)

    def test_array_input(self):
        values = f_alpha(np.array([0.5, 1.0, 2.0]), 2.0)
        np.testing.assert_allclose(values, [0.125, 0.0, 0.5])

    def test_non_positive_argument(self):
        with self.assertRaises(DomainError):
            f_alpha(0.0, 0.5)
        with self.assertRaises(DomainError):
            f_alpha(np.array([1.0, -2.0]), 2.0)

    def test_derivative_examples(self):
        self.assertEqual(f_alpha_prime(1.0, 1.0), 0.0)
        self.assertAlmostEqual(f_alpha_prime(2.0, 0.0), 0.5, places=15)
        self.assertAlmostEqual(f_alpha_prime(4.0, 0.5), 1.0, places=15)

    # orders within 1e-2 of one lose digits to cancellation in the closed form
    @settings(max_examples=200, deadline=None)
    @given(u=st.floats(0.1, 10.0), alpha=st.one_of(st.floats(-2.0, 0.99), st.floats(1.01, 3.0), st.just(1.0)))
    def test_derivative_matches_finite_difference(self, u, alpha):
        step = 1e-6 * u
        numeric = (f_alpha(u + step, alpha) - f_alpha(u - step, alpha)) / (2 * step)
        exact = f_alpha_prime(u, alpha)
        self.assertLessEqual(abs(numeric - exact), 1e-6 * max(abs(exact), 1.0))

    def test_second_derivative(self):
        self.assertAlmostEqual(f_alpha_second(2.0, 0.0), 0.25)
        self.assertAlmostEqual(f_alpha_second(3.0, 2.0), 1.0)

    def test_tilde_is_perspective(self):
        self.assertAlmostEqual(f_alpha_tilde(1.0, 0.5), 0.0)
        self.assertAlmostEqual(f_alpha_tilde(2.0, 0.0), 2 * f_alpha(0.5, 0.0))


class SimplexTests(TestCase):
    def test_valid(self):
        np.testing.assert_array_equal(check_simplex([0.25, 0.75]), [0.25, 0.75])

    def test_not_normalized(self):
        with self.assertRaises(SimplexError):
            check_simplex([0.5, 0.6])

    def test_negative(self):
        with self.assertRaises(SimplexError):
            check_simplex([1.5, -0.5])

    def test_length(self):
        with self.assertRaises(DimensionMismatch):
            check_simplex([0.5, 0.5], 3)


class PsiTests(TestCase):
    def test_zero_when_mixture_equals_target(self):
        masses = np.array([0.2, 0.3, 0.5])
        problem = DiscreteProblem([masses], masses)
        self.assertAlmostEqual(psi_exact(problem, [1.0], 0.5), 0.0, places=15)

    def test_chi_square_closed_form(self):
        rng = np.random.default_rng(3)
        kernel = rng.uniform(0.1, 1.0, size=(2, 3))
        target = rng.uniform(0.1, 1.0, size=3)
        problem = DiscreteProblem(kernel, target)
        mixture = 0.5 * kernel[0] + 0.5 * kernel[1]
        expected = 0.5 * np.sum((mixture - target) ** 2 / target)
        self.assertAlmostEqual(psi_exact(problem, [0.5, 0.5], 2.0), expected, places=12)

    def test_large_ratio_not_truncated(self):
        # log ratio of about 702 at the first grid point
        problem = DiscreteProblem([[1.0, 1.0]], [1e-305, 1.0])
        self.assertAlmostEqual(psi_exact(problem, [1.0], 1.0), 305 * math.log(10) - 1, places=6)

    def test_unrepresentable_ratio(self):
        problem = DiscreteProblem([[1.0, 1.0]], [1e-310, 1.0])
        with self.assertRaises(DomainError) as context:
            psi_exact(problem, [1.0], 0.5)
        self.assertIn("grid point 0", str(context.exception))

    def test_overflow(self):
        problem = DiscreteProblem([[1.0, 1.0]], [1e-300, 1.0])
        with self.assertRaises(DomainError):
            psi_exact(problem, [1.0], 3.0)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2 ** 32 - 1), alpha=alphas, scale=st.floats(0.05, 20.0))
    def test_lower_bound(self, seed, alpha, scale):
        rng = np.random.default_rng(seed)
        base = DiscreteProblem.random(rng)
        problem = DiscreteProblem(base.kernel_matrix, base.target_masses * scale)
        weights = random_simplex(rng, problem.atom_count)
        self.assertGreaterEqual(psi_exact(problem, weights, alpha), psi_lower_bound(problem, alpha) - 1e-12)


class BoundTests(TestCase):
    def test_elbo_of_constant_gradient(self):
        self.assertAlmostEqual(elbo_renyi_bound([0.1, 0.9], [2.5, 2.5], 1.0), -2.5)

    def test_renyi_zero(self):
        self.assertEqual(elbo_renyi_bound([0.5, 0.5], [-1.0, 1.0], 0.5), 0.0)

    def test_undefined(self):
        with self.assertRaises(BoundUndefined):
            elbo_renyi_bound([0.5, 0.5], [5.0, 5.0], 0.5)

    def test_renyi_integrand(self):
        rng = np.random.default_rng(11)
        for alpha in (0.0, 0.5, 2.0):
            problem = DiscreteProblem.random(rng)
            weights = random_simplex(rng, problem.atom_count)
            bound = elbo_renyi_bound(weights, exact_gradient(problem, weights, alpha), alpha)

            mixture = weights @ problem.kernel_matrix
            direct = np.sum((problem.target_masses / mixture) ** (1 - alpha) * mixture)
            self.assertAlmostEqual(math.exp((1 - alpha) * bound) / direct, 1.0, delta=1e-10)
