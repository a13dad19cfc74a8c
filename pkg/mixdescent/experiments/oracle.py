import logging
from typing import List

import pandas as pd

from mixdescent import properties
from mixdescent.experiments import Experiment
from mixdescent.exporters import FileExporter

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['name', 'instances', 'worst_violation', 'verdict']


class OracleExperiment(Experiment):
    """
    Runs every registered property family; failures are report lines, not errors
    """

    def tasks(self):
        return []

    def options(self) -> dict:
        return {key: self.config.get(key) for key in ('instances', 'steps', 'tv_seeds', 'inject')
                if self.config.get(key) is not None}

    def run(self) -> List[str]:
        self.results = properties.run_suite(self.options(), self.config.master_seed)
        failed = [r.name for r in self.results if not r.passed]
        self.meta['properties'] = len(self.results)
        self.meta['failed'] = ', '.join(failed) or 'none'
        for result in self.results:
            logger.info("%s: %s over %d instances, worst violation %.3g", result.name, result.verdict,
                        result.instances, result.worst_violation)
        return self.export()

    def export(self):
        frame = pd.DataFrame([r.as_row() for r in self.results], columns=REPORT_COLUMNS)
        paths = FileExporter.get(self.config.export_format)({'oracle_report': frame}).export(self.config.output_dir)
        paths.append(self.write_meta(self.config.output_dir))
        return paths
