from .exporters import CsvExporter, Exporter, FileExporter, PandasExporter
from .frictionless_data import FrictionlessExporter
from .xlsx import XlsxExporter
