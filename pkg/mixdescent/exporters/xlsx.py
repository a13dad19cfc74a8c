import os

import pandas as pd

from mixdescent.exporters.exporters import PandasExporter


class XlsxExporter(PandasExporter):
    """
    All tables in one workbook, one sheet per table
    """

    def export(self, output, filename='traces.xlsx', **options):
        os.makedirs(output, exist_ok=True)
        path = os.path.join(output, filename)
        with pd.ExcelWriter(path, engine='openpyxl') as writer:
            for slug, data_frame in self.data_frames():
                # sheet names are limited to 31 characters
                data_frame.to_excel(writer, sheet_name=slug[:31], index=False)
        return [path]
