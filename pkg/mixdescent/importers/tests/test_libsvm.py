import os
import tempfile
import unittest

import numpy as np

from mixdescent.exceptions import LibsvmFormatError
from mixdescent.importers import SIGNED_LABELS, LibsvmImporter, load_libsvm, standardize_features, write_libsvm
from mixdescent.targets import BlrData


class TestLibsvmImporter(unittest.TestCase):
    @staticmethod
    def fixture(name: str):
        return os.path.join(os.path.dirname(os.path.abspath(__file__)), 'libsvm', name)

    def test_load(self):
        data = load_libsvm(self.fixture('covtype_head.libsvm'), standardize=False)

        self.assertEqual(data.features.shape, (4, 43))
        np.testing.assert_array_equal(data.labels, [1, 1, -1, -1])
        self.assertEqual(data.features[1, 4], -6)
        self.assertEqual(data.features[0, 4], 0, "Missing entries are zeros")
        self.assertEqual(data.features[3, 30], 1)
        self.assertIsNone(data.standardization)

    def test_line_format(self):
        features, labels = LibsvmImporter().parse(["1 1:0.5 3:2", "2"], feature_count=3)
        np.testing.assert_array_equal(features, [[0.5, 0, 2], [0, 0, 0]])
        np.testing.assert_array_equal(labels, [-1, 1])

    def test_declared_feature_count(self):
        data = load_libsvm(self.fixture('covtype_head.libsvm'), feature_count=54, standardize=False)
        self.assertEqual(data.feature_count, 54)

        with self.assertRaises(LibsvmFormatError):
            load_libsvm(self.fixture('covtype_head.libsvm'), feature_count=40)

    def test_standardized(self):
        data = load_libsvm(self.fixture('covtype_head.libsvm'))
        means, stds = data.standardization
        self.assertAlmostEqual(means[0], 2693.75)
        np.testing.assert_allclose(data.features.mean(axis=0), 0, atol=1e-12)
        # constant feature 11 is centered only
        self.assertEqual(stds[10], 1.0)
        np.testing.assert_array_equal(data.features[:, 10], 0)

    def test_malformed_entry(self):
        with self.assertRaises(LibsvmFormatError) as context:
            load_libsvm(self.fixture('malformed.libsvm'))
        self.assertEqual(context.exception.line_number, 2)
        self.assertIn("two:3", str(context.exception))

    def test_unmapped_label(self):
        with self.assertRaises(LibsvmFormatError) as context:
            LibsvmImporter().parse(["3 1:1"])
        self.assertIn("label map", str(context.exception))

    def test_label_map(self):
        importer = LibsvmImporter({'0': -1, '1': 1})
        _, labels = importer.parse(["0 1:1", "1.0 2:1"])
        np.testing.assert_array_equal(labels, [-1, 1])

    def test_signed_labels_need_their_map(self):
        for token in ('-1', '+1'):
            with self.assertRaises(LibsvmFormatError) as context:
                LibsvmImporter().parse(["1 1:1", token + " 1:1"])
            self.assertEqual(context.exception.line_number, 2)

    def test_signed_labels(self):
        _, labels = LibsvmImporter(SIGNED_LABELS).parse(["1 1:1", "-1 1:1", "+1 2:1", "-1.0 1:2"])
        np.testing.assert_array_equal(labels, [1, -1, 1, -1])

    def test_zero_index(self):
        with self.assertRaises(LibsvmFormatError):
            LibsvmImporter().parse(["2 0:1"])

    def test_written_file_reads_back(self):
        rng = np.random.default_rng(1)
        features = rng.standard_normal((6, 4))
        features[2, 1] = 0
        data = BlrData(features, [1, -1, 1, 1, -1, -1])

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'data.libsvm')
            write_libsvm(path, data)
            with self.assertRaises(LibsvmFormatError):
                load_libsvm(path, feature_count=4, standardize=False)
            loaded = load_libsvm(path, SIGNED_LABELS, feature_count=4, standardize=False)

        np.testing.assert_array_equal(loaded.features, data.features)
        np.testing.assert_array_equal(loaded.labels, data.labels)


class TestStandardize(unittest.TestCase):
    def test_unit_variance(self):
        features, (means, stds) = standardize_features(np.array([[1.0, 5.0], [3.0, 5.0], [5.0, 5.0]]))
        np.testing.assert_allclose(features[:, 0], [-1.224744871391589, 0, 1.224744871391589])
        np.testing.assert_array_equal(means, [3.0, 5.0])
        np.testing.assert_allclose(stds, [np.sqrt(8 / 3), 1.0])
