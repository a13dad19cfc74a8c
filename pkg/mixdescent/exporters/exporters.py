import os
from abc import ABC, abstractmethod
from typing import Dict, Iterator, Tuple

import pandas as pd

from mixdescent.plugins import Interface
from mixdescent.settings import MIXDESCENT


class Exporter(Interface):
    slug_suffix = 'Exporter'

    def __init__(self, frames: Dict[str, pd.DataFrame]):
        """
        :param frames: tables to export keyed by slug, ie. `power_d8` or `summary`
        """
        self.frames = frames

    def data_frames(self) -> Iterator[Tuple[str, pd.DataFrame]]:
        # sorted so that the output does not depend on the order results came in
        for slug in sorted(self.frames):
            yield slug, self.frames[slug]


class FileExporter(Exporter, ABC):
    @abstractmethod
    def export(self, output: str, **options):
        """
        :param output: directory the files are written to
        """


class PandasExporter(FileExporter, ABC):
    """
    Base class to write exporters building on Pandas library
    """

    @staticmethod
    def write_csv(data_frame: pd.DataFrame, path: str):
        # \n line endings and round-trip exact floats so that reruns are byte-identical
        data_frame.to_csv(path, index=False, float_format=MIXDESCENT['FLOAT_FORMAT'], lineterminator='\n',
                          encoding='utf-8')


class CsvExporter(PandasExporter):
    def export(self, output, **options):
        os.makedirs(output, exist_ok=True)
        paths = []
        for slug, data_frame in self.data_frames():
            path = os.path.join(output, slug + '.csv')
            self.write_csv(data_frame, path)
            paths.append(path)
        return paths
