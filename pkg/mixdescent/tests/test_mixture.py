import math
from unittest import TestCase

import numpy as np

from mixdescent.exceptions import DimensionMismatch, DomainError, SimplexError
from mixdescent.mixture import (GaussianKernel, ParticleMixture, kernel_log_density, kernel_log_matrix,
                                log_mixture_density, sample_mixture, select_atoms)


class KernelTests(TestCase):
    def test_at_center(self):
        self.assertAlmostEqual(kernel_log_density([0.0], [0.0], GaussianKernel(1.0)), -0.5 * math.log(2 * math.pi))

    def test_offset(self):
        self.assertAlmostEqual(kernel_log_density(0.0, 2.0, GaussianKernel(1.0)), -2 - 0.5 * math.log(2 * math.pi))

    def test_two_dimensions(self):
        self.assertAlmostEqual(kernel_log_density([0.0, 0.0], [0.0, 0.0], GaussianKernel(2.0)),
                               -math.log(8 * math.pi))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            kernel_log_density([0.0, 0.0], [1.0], GaussianKernel(1.0))

    def test_bandwidth_positive(self):
        with self.assertRaises(DomainError):
            GaussianKernel(0.0)

    def test_matrix_shape(self):
        atoms = np.zeros((3, 2))
        ys = np.ones((5, 2))
        self.assertEqual(kernel_log_matrix(atoms, ys, GaussianKernel(1.0)).shape, (5, 3))


class MixtureTests(TestCase):
    def test_weights_validated(self):
        with self.assertRaises(SimplexError):
            ParticleMixture([[0.0], [1.0]], [0.5, 0.6])

    def test_one_dimensional_atoms(self):
        mix = ParticleMixture.uniform(np.array([0.0, 1.0, 2.0]))
        self.assertEqual((mix.size, mix.dim), (3, 1))

    def test_single_atom(self):
        kernel = GaussianKernel(0.7)
        mix = ParticleMixture([[0.3, -1.0]], [1.0])
        y = np.array([1.0, 2.0])
        self.assertAlmostEqual(log_mixture_density(mix, kernel, y), kernel_log_density([0.3, -1.0], y, kernel),
                               places=12)

    def test_identical_atoms(self):
        kernel = GaussianKernel(1.3)
        mix = ParticleMixture([[0.5], [0.5]], [0.2, 0.8])
        self.assertAlmostEqual(log_mixture_density(mix, kernel, [2.0]), kernel_log_density(0.5, 2.0, kernel),
                               places=12)

    def test_direct_summation(self):
        rng = np.random.default_rng(5)
        kernel = GaussianKernel(0.9)
        atoms = rng.standard_normal((3, 2))
        weights = rng.dirichlet(np.ones(3))
        ys = rng.standard_normal((4, 2))
        mix = ParticleMixture(atoms, weights)

        expected = [math.log(math.fsum(w * math.exp(kernel_log_density(a, y, kernel)) for a, w in zip(atoms, weights)))
                    for y in ys]
        np.testing.assert_allclose(log_mixture_density(mix, kernel, ys), expected, rtol=0, atol=1e-12)


class SamplingTests(TestCase):
    def test_degenerate_weights(self):
        mix = ParticleMixture([[1.0, -2.0], [5.0, 5.0]], [1.0, 0.0])
        kernel = GaussianKernel(0.5)
        count = 100_000
        samples = sample_mixture(mix, kernel, count, np.random.default_rng(0))
        standard_error = kernel.bandwidth / math.sqrt(count)
        self.assertTrue(np.all(np.abs(samples.mean(axis=0) - [1.0, -2.0]) < 4 * standard_error))

    def test_deterministic(self):
        mix = ParticleMixture.uniform(np.arange(6.0).reshape(3, 2))
        kernel = GaussianKernel(1.0)
        first = sample_mixture(mix, kernel, 50, np.random.default_rng(42))
        second = sample_mixture(mix, kernel, 50, np.random.default_rng(42))
        np.testing.assert_array_equal(first, second)

    def test_selection_frequencies(self):
        weights = np.array([0.1, 0.2, 0.3, 0.4])
        count = 100_000
        counts = np.bincount(select_atoms(weights, count, np.random.default_rng(1)), minlength=4)
        tolerance = 4 * np.sqrt(weights * (1 - weights) / count)
        self.assertTrue(np.all(np.abs(counts / count - weights) < tolerance))

    def test_indices_returned(self):
        mix = ParticleMixture.uniform(np.zeros((2, 1)))
        samples, indices = sample_mixture(mix, GaussianKernel(1.0), 10, np.random.default_rng(3), return_indices=True)
        self.assertEqual(samples.shape, (10, 1))
        self.assertTrue(set(indices) <= {0, 1})

    def test_sample_count(self):
        with self.assertRaises(ValueError):
            sample_mixture(ParticleMixture.uniform(np.zeros((2, 1))), GaussianKernel(1.0), 0, np.random.default_rng())
