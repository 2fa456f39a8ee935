# "src/db/database.py"

## The ReportArchive class keeps verification results across runs:
## - Creating and connecting to an SQLite database
## - Saving and retrieving TheoremReports (JSON documents keyed by their content hash)
## - Saving and retrieving run records (subcommand, config text, exit code, report ids)

import json
import logging
import sqlite3
from datetime import datetime

logger = logging.getLogger(__name__)


class ReportArchive:
    def __init__(self, db_file):
        self.conn = sqlite3.connect(db_file)
        self.cursor = self.conn.cursor()
        self.create_tables()
        self.check_and_update_schema()

    def create_tables(self):
        self.cursor.execute('''
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY,
                theorem TEXT,
                status TEXT,
                content_hash TEXT UNIQUE,
                document TEXT
            )
        ''')
        self.cursor.execute('''
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY,
                command TEXT,
                config TEXT,
                exit_code INTEGER,
                report_ids TEXT,
                timestamp TIMESTAMP
            )
        ''')
        self.conn.commit()

    def check_and_update_schema(self):
        self.cursor.execute("PRAGMA table_info(reports)")
        columns = [col[1] for col in self.cursor.fetchall()]
        if 'status' not in columns:
            self.cursor.execute("ALTER TABLE reports ADD COLUMN status TEXT")
            self.conn.commit()

    def save_report(self, report):
        """Store a TheoremReport; an identical report already archived keeps its id."""
        digest = report.content_hash()
        self.cursor.execute('SELECT id FROM reports WHERE content_hash = ?', (digest,))
        row = self.cursor.fetchone()
        if row:
            logger.debug("report %s already archived as %d", digest[:12], row[0])
            return row[0]
        self.cursor.execute('''
            INSERT INTO reports (theorem, status, content_hash, document)
            VALUES (?, ?, ?, ?)
        ''', (report.theorem, report.status, digest, report.to_json()))
        self.conn.commit()
        logger.info("archived %s report %s", report.theorem, digest[:12])
        return self.cursor.lastrowid

    def _report_row(self, row):
        return {
            'id': row[0],
            'theorem': row[1],
            'status': row[2],
            'content_hash': row[3],
            'report': json.loads(row[4]),
        }

    def get_report(self, report_id):
        self.cursor.execute('SELECT * FROM reports WHERE id = ?', (report_id,))
        row = self.cursor.fetchone()
        return self._report_row(row) if row else None

    def list_reports(self, theorem=None):
        if theorem is None:
            self.cursor.execute('SELECT * FROM reports ORDER BY id')
        else:
            self.cursor.execute('SELECT * FROM reports WHERE theorem = ? ORDER BY id', (theorem,))
        return [self._report_row(row) for row in self.cursor.fetchall()]

    def save_run(self, command, config_text, exit_code, report_ids=()):
        self.cursor.execute('''
            INSERT INTO runs (command, config, exit_code, report_ids, timestamp)
            VALUES (?, ?, ?, ?, ?)
        ''', (command, config_text, exit_code, json.dumps(list(report_ids)), datetime.now().isoformat()))
        self.conn.commit()
        return self.cursor.lastrowid

    def get_runs(self):
        self.cursor.execute('SELECT * FROM runs ORDER BY id')
        runs = []
        for row in self.cursor.fetchall():
            runs.append({
                'id': row[0],
                'command': row[1],
                'config': row[2],
                'exit_code': row[3],
                'report_ids': json.loads(row[4]),
                'timestamp': row[5],
            })
        return runs

    def close(self):
        self.conn.close()


# Example use case
if __name__ == "__main__":
    from ..verify.steinweiss import section10_example

    archive = ReportArchive(":memory:")
    report_id = archive.save_report(section10_example(0.0, 0.0, 4.0, 4.0, level=3))
    archive.save_run("verify", "[experiment]\ntheorem = section10-example\n", 0, [report_id])
    print(archive.get_report(report_id)["status"], archive.get_runs())
    archive.close()
