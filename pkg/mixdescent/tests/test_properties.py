from unittest import TestCase

import pytest

from mixdescent import properties, registry
from mixdescent.properties import (FAIL, PASS, Admissibility, Convexity, ExponentialShiftInvariance, FirstVariation,
                                   Monotonicity, OracleProperty, PmcEquivalence, PsiLowerBound, RefinedDecrease,
                                   TvConvergence, Unbiasedness, admissible_configs, inadmissible_configs,
                                   run_suite)
from mixdescent.transforms import validate_monotonicity

SMALL = {'instances': 3, 'steps': 10}


class AlwaysFails(OracleProperty):
    """
    Reports a violation whatever the instances
    """
    name = 'always_fails'
    tolerance = 0.0

    def run(self):
        return [self.result(1, 1.0)]


class RegistryTests(TestCase):
    def test_families_registered(self):
        names = [p.name for p in registry.PROPERTIES]
        self.assertGreaterEqual(len(names), 6)
        self.assertEqual(len(names), len(set(names)))
        self.assertIs(registry.get_property('monotonicity'), Monotonicity)

    def test_loaded_properties(self):
        with registry.loaded_properties(AlwaysFails):
            self.assertIn(AlwaysFails, registry.PROPERTIES)
        self.assertNotIn(AlwaysFails, registry.PROPERTIES)

    def test_register_checks_type(self):
        with self.assertRaises(ValueError):
            registry.register(TestCase)

    def test_unknown(self):
        with self.assertRaises(KeyError):
            registry.get_property('nothing')


class CatalogueTests(TestCase):
    def test_admissible(self):
        for config in admissible_configs():
            with self.subTest(config=str(config)):
                self.assertTrue(validate_monotonicity(config).ok)

    def test_inadmissible(self):
        for config in inadmissible_configs():
            with self.subTest(config=str(config)):
                self.assertTrue(validate_monotonicity(config).violated)


class PropertyTests(TestCase):
    def check(self, property_class, options=SMALL, seed=0):
        results = property_class(options, seed).run()
        for result in results:
            self.assertEqual(result.verdict, PASS, msg=str(result))
        return results

    def test_monotonicity(self):
        self.check(Monotonicity)

    def test_refined_decrease(self):
        self.check(RefinedDecrease, {'instances': 2, 'steps': 5})

    def test_first_variation(self):
        self.check(FirstVariation)

    def test_convexity(self):
        self.check(Convexity, {'instances': 20})

    def test_psi_lower_bound(self):
        self.check(PsiLowerBound, {'instances': 20})

    def test_pmc_equivalence(self):
        self.check(PmcEquivalence, {'instances': 10})

    def test_exponential_shift_invariance(self):
        self.check(ExponentialShiftInvariance)

    def test_admissibility(self):
        self.check(Admissibility)

    def test_reproducible(self):
        first = Monotonicity(SMALL, 7).run()
        second = Monotonicity(SMALL, 7).run()
        self.assertEqual([r.as_row() for r in first], [r.as_row() for r in second])

    def test_seed_depends_on_name(self):
        self.assertNotEqual(Monotonicity(SMALL).seed.entropy, Convexity(SMALL).seed.entropy)

    @pytest.mark.slow
    def test_unbiasedness(self):
        self.check(Unbiasedness, {'unbiasedness_replicates': 10_000})

    @pytest.mark.slow
    def test_tv_convergence(self):
        self.check(TvConvergence, {'tv_seeds': 20})


class InjectionTests(TestCase):
    def test_injected_violation_reported(self):
        options = dict(SMALL, inject=[{'family': 'power', 'alpha': 0.5, 'eta0': 1.0, 'kappa': 0.1}])
        results = Admissibility(options).run()
        self.assertEqual(len(results), 2)
        self.assertEqual(results[0].verdict, PASS)
        self.assertEqual(results[1].verdict, FAIL)
        self.assertTrue(results[1].name.startswith('admissibility['))

    def test_injected_admissible_config(self):
        options = dict(SMALL, inject=[{'family': 'exponential', 'alpha': 1.0, 'eta0': 0.5}])
        results = Admissibility(options).run()
        self.assertEqual(results[1].verdict, PASS)
        self.assertLessEqual(results[1].worst_violation, 1e-10)

    def test_suite_reports_failures(self):
        with registry.loaded_properties(AlwaysFails):
            saved = list(registry.PROPERTIES)
            registry.PROPERTIES[:] = [AlwaysFails]
            try:
                results = run_suite(SMALL)
            finally:
                registry.PROPERTIES[:] = saved
        self.assertEqual([(r.name, r.verdict) for r in results], [('always_fails', FAIL)])

    @pytest.mark.slow
    def test_full_suite(self):
        results = properties.run_suite({'instances': 5, 'steps': 20, 'tv_seeds': 10})
        self.assertTrue(all(r.passed for r in results), msg=[r.as_row() for r in results if not r.passed])
