import json
import logging
import os

from mixdescent.exporters.exporters import PandasExporter
from mixdescent.settings import MIXDESCENT

logger = logging.getLogger(__name__)


class FrictionlessExporter(PandasExporter):
    """
    Frictionless Data exporter

    Frictionless Data (https://frictionlessdata.io/) is basically a folder containing csv data files
    along with some metadata about them.
    """

    label = "Frictionless"

    @staticmethod
    def type_from_pandas(type):
        """
        :param type:
        :return: http://frictionlessdata.io/specs/table-schema/
        """
        kind = getattr(type, 'kind', None)
        if kind in ('i', 'u'):
            return 'integer'
        if kind == 'f':
            return 'number'
        if kind == 'b':
            return 'boolean'
        if kind in ('O', 'U', 'S'):
            return 'string'

        logger.warning("Type not mapped: %s", type)
        return 'any'

    def export(self, output, name='mixdescent-traces', **options):
        os.makedirs(output, exist_ok=True)
        datapackage = {
            "name": name,
            "version": MIXDESCENT['CODE_VERSION'],
            "profile": "tabular-data-package",
            "resources": []
        }

        paths = []
        for slug, data_frame in self.data_frames():
            fname = slug + '.csv'
            self.write_csv(data_frame, os.path.join(output, fname))
            paths.append(os.path.join(output, fname))

            datapackage['resources'].append({
                "name": slug,
                "path": fname,
                "profile": "tabular-data-resource",
                "schema": {
                    "fields": [{
                        "name": fld,
                        "type": FrictionlessExporter.type_from_pandas(ftype)
                    } for fld, ftype in data_frame.dtypes.items()]
                }
            })

        path = os.path.join(output, 'datapackage.json')
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(json.dumps(datapackage, indent=2))
        return paths + [path]
