import logging
import re
from abc import abstractmethod
from typing import Dict, Iterable, List, Tuple

import numpy as np

from mixdescent.exceptions import LibsvmFormatError
from mixdescent.plugins import Interface
from mixdescent.settings import BLR
from mixdescent.targets import BlrData

logger = logging.getLogger(__name__)

# label map of files written with -1/+1 classes
SIGNED_LABELS = {'-1': -1, '+1': 1}


class DatasetImporter(Interface):
    slug_suffix = 'Importer'

    @abstractmethod
    def load(self, path: str, **options) -> BlrData:
        pass


class LibsvmImporter(DatasetImporter):
    """
    Sparse text format, one example per line: `label index:value index:value ...` with 1-based indices
    """

    entry_re = re.compile(r'^(\d+):(\S+)$')

    def __init__(self, label_map: Dict[str, int] = None):
        self.label_map = {str(k): int(v) for k, v in (label_map or BLR['label_map']).items()}

    def map_label(self, token: str, line_number: int) -> int:
        candidates = [token]
        try:
            number = float(token)
            if number.is_integer():
                candidates.append('{:+d}'.format(int(number)))
                # a signed token never falls back to an unsigned key
                if token[0] not in '+-':
                    candidates.append(str(int(number)))
        except ValueError:
            pass

        for candidate in candidates:
            if candidate in self.label_map:
                return self.label_map[candidate]
        raise LibsvmFormatError(line_number, "label {!r} is not in the label map".format(token))

    def parse_line(self, line: str, line_number: int) -> Tuple[int, List[Tuple[int, float]]]:
        tokens = line.split()
        label = self.map_label(tokens[0], line_number)
        entries = []
        for token in tokens[1:]:
            match = self.entry_re.match(token)
            if match is None:
                raise LibsvmFormatError(line_number, "malformed entry {!r}".format(token))
            index = int(match.group(1))
            if index < 1:
                raise LibsvmFormatError(line_number, "feature indices are 1-based, got {}".format(index))
            try:
                value = float(match.group(2))
            except ValueError:
                raise LibsvmFormatError(line_number, "malformed value {!r}".format(match.group(2)))
            entries.append((index, value))
        return label, entries

    def parse(self, lines: Iterable[str], feature_count: int = None):
        labels = []
        rows = []
        for line_number, line in enumerate(lines, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            label, entries = self.parse_line(line, line_number)
            labels.append(label)
            rows.append(entries)

        width = max((index for entries in rows for index, _ in entries), default=0)
        if feature_count is not None:
            if width > feature_count:
                raise LibsvmFormatError(len(rows), "feature index {} above the declared {} features".format(
                    width, feature_count))
            width = feature_count

        features = np.zeros((len(rows), width))
        for i, entries in enumerate(rows):
            for index, value in entries:
                features[i, index - 1] = value
        return features, np.array(labels, dtype=float)

    def load(self, path, feature_count: int = None, standardize: bool = True, **options) -> BlrData:
        with open(path, 'r', encoding='utf-8') as source:
            features, labels = self.parse(source, feature_count)
        logger.info("Loaded %d examples with %d features from %s", features.shape[0], features.shape[1], path)

        standardization = None
        if standardize:
            features, standardization = standardize_features(features)
        return BlrData(features, labels, standardization)


def standardize_features(features: np.ndarray):
    """
    Scale every feature to mean 0 and variance 1; constant features are only centered

    :return: (standardized features, (means, stds))
    """
    means = features.mean(axis=0)
    stds = features.std(axis=0)
    stds = np.where(stds > 0, stds, 1.0)
    return (features - means) / stds, (means, stds)


def load_libsvm(path: str, label_map: Dict[str, int] = None, feature_count: int = None,
                standardize: bool = True) -> BlrData:
    return LibsvmImporter(label_map).load(path, feature_count=feature_count, standardize=standardize)


def write_libsvm(path: str, data: BlrData, label_names: Dict[int, str] = None):
    """
    Writes non-zero entries with 17 significant digits so that reading the file back is exact.
    Classes are written as -1/+1 unless `label_names` says otherwise; read them with SIGNED_LABELS.
    """
    label_names = label_names or {v: k for k, v in SIGNED_LABELS.items()}
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        for row, label in zip(data.features, data.labels):
            entries = ' '.join('{}:{:.17g}'.format(i + 1, v) for i, v in enumerate(row) if v != 0)
            output.write('{} {}'.format(label_names[int(label)], entries).rstrip() + '\n')
