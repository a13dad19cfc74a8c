import json
import os
import tempfile
from unittest import TestCase

import numpy as np
import pandas as pd

from mixdescent.exporters import CsvExporter, FileExporter, FrictionlessExporter, XlsxExporter


def frames():
    return {
        'power_alpha0.5_d2': pd.DataFrame({'replicate': [0, 0], 't': [0, 1], 'renyi_bound': [0.1, 1 / 3],
                                           'wall_ms': [np.nan, np.nan]}),
        'summary': pd.DataFrame({'run': ['power_alpha0.5_d2'], 't': [0], 'renyi_bound': [0.1]}),
    }


class ExporterTests(TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.output = os.path.join(self.directory.name, 'out')

    def test_implementations(self):
        self.assertEqual(FileExporter.implementations(), {
            'csv': CsvExporter,
            'xlsx': XlsxExporter,
            'frictionless': FrictionlessExporter,
        })

    def test_csv(self):
        paths = CsvExporter(frames()).export(self.output)
        self.assertEqual([os.path.basename(p) for p in paths], ['power_alpha0.5_d2.csv', 'summary.csv'])
        with open(paths[0], 'rb') as f:
            content = f.read()
        self.assertNotIn(b'\r\n', content)
        self.assertEqual(content.splitlines()[0], b'replicate,t,renyi_bound,wall_ms')
        # 17 significant digits read back exactly
        self.assertEqual(pd.read_csv(paths[0])['renyi_bound'][1], 1 / 3)

    def test_xlsx(self):
        paths = XlsxExporter(frames()).export(self.output)
        self.assertEqual(paths, [os.path.join(self.output, 'traces.xlsx')])
        sheets = pd.read_excel(paths[0], sheet_name=None)
        self.assertEqual(list(sheets), ['power_alpha0.5_d2', 'summary'])
        self.assertEqual(sheets['summary']['run'].tolist(), ['power_alpha0.5_d2'])

    def test_xlsx_sheet_names_truncated(self):
        paths = XlsxExporter({'x' * 40: pd.DataFrame({'a': [1]})}).export(self.output)
        self.assertEqual(list(pd.read_excel(paths[0], sheet_name=None)), ['x' * 31])

    def test_frictionless(self):
        paths = FrictionlessExporter(frames()).export(self.output)
        self.assertEqual(os.path.basename(paths[-1]), 'datapackage.json')
        with open(paths[-1], encoding='utf-8') as f:
            package = json.load(f)

        self.assertEqual(package['profile'], 'tabular-data-package')
        self.assertEqual([r['name'] for r in package['resources']], ['power_alpha0.5_d2', 'summary'])
        fields = package['resources'][0]['schema']['fields']
        self.assertEqual({f['name']: f['type'] for f in fields},
                         {'replicate': 'integer', 't': 'integer', 'renyi_bound': 'number', 'wall_ms': 'number'})
        self.assertEqual(package['resources'][1]['schema']['fields'][0], {'name': 'run', 'type': 'string'})

    def test_type_not_mapped(self):
        with self.assertLogs('mixdescent.exporters.frictionless_data', level='WARNING'):
            self.assertEqual(FrictionlessExporter.type_from_pandas(np.dtype('datetime64[ns]')), 'any')
