# "src/analysis/report_export.py"

## The ReportExporter class turns TheoremReports into files:
## 1. A flat pandas table with one row per (theorem, cfg, scale) and fixed columns
## 2. A per-report summary table (status, trends, finest constant and ratio)
## 3. CSV output of either table
## 4. A JSON document with sorted keys; the export timestamp sits outside every report body,
##    so report content hashes do not depend on when they were written

import json
import logging
from datetime import datetime

import pandas as pd

from ..verify.report import CSV_COLUMNS, SCHEMA_VERSION

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ("theorem", "status", "condition_trend", "ratio_trend", "constant", "ratio", "hash")


class ReportExporter:
    def __init__(self, reports):
        self.reports = list(reports)

    def rows_table(self):
        rows = [row for report in self.reports for row in report.csv_rows()]
        return pd.DataFrame(rows, columns=list(CSV_COLUMNS))

    def summary_table(self):
        summary = [
            {
                "theorem": report.theorem,
                "status": report.status,
                "condition_trend": report.condition_trend,
                "ratio_trend": report.ratio_trend,
                "constant": report.constant,
                "ratio": report.ratio,
                "hash": report.content_hash()[:12],
            }
            for report in self.reports
        ]
        return pd.DataFrame(summary, columns=list(SUMMARY_COLUMNS))

    def to_csv(self, output_path, summary=False):
        table = self.summary_table() if summary else self.rows_table()
        table.to_csv(output_path, index=False, na_rep="")
        logger.info("wrote %d rows to %s", len(table), output_path)
        return output_path

    def to_document(self, timestamp=None):
        return {
            "schema": SCHEMA_VERSION,
            "generated": timestamp or datetime.now().isoformat(timespec="seconds"),
            "reports": [
                {"content_hash": report.content_hash(), **report.to_dict()} for report in self.reports
            ],
        }

    def to_json(self, output_path, timestamp=None):
        with open(output_path, "w", encoding="utf-8") as handle:
            json.dump(self.to_document(timestamp), handle, indent=2, sort_keys=True)
            handle.write("\n")
        logger.info("wrote %d reports to %s", len(self.reports), output_path)
        return output_path


# Example use case
if __name__ == "__main__":
    from ..verify.steinweiss import section10_example

    exporter = ReportExporter([section10_example(0.0, 0.0, 4.0, 4.0, level=3)])
    print(exporter.rows_table())
    print(exporter.summary_table())
