"""
Run Ledger
SQLite database recording every run report produced by the CLI or the API
"""
import json
import logging
import sqlite3
import uuid
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union

from .config import Config

logger = logging.getLogger(__name__)


class RunLedger:
    """Stores run reports in a SQLite database"""

    def __init__(self, db_path: Optional[Union[str, Path]] = None):
        """
        Initialize the ledger

        Args:
            db_path: Path to SQLite database file
        """
        self.db_path = Path(db_path or Config.LEDGER_PATH)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._init_database()

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        return conn

    def _init_database(self):
        """Initialize database schema"""
        conn = self._connect()
        cursor = conn.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                run_id TEXT NOT NULL UNIQUE,
                command TEXT NOT NULL,
                inputs TEXT,
                results TEXT,
                counters TEXT,
                wall_time_seconds REAL,
                exit_code INTEGER NOT NULL DEFAULT 0,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        """)

        cursor.execute("CREATE INDEX IF NOT EXISTS idx_runs_command ON runs(command)")
        cursor.execute("CREATE INDEX IF NOT EXISTS idx_runs_created_at ON runs(created_at)")

        conn.commit()
        conn.close()

    def log_run(self, report: Dict, exit_code: int = 0) -> str:
        """
        Record one run report

        Args:
            report: RunReport dict (command, inputs, results, counters, wall_time_seconds)
            exit_code: Process exit code of the run

        Returns:
            Generated run ID
        """
        run_id = str(uuid.uuid4())
        conn = self._connect()
        cursor = conn.cursor()

        cursor.execute("""
            INSERT INTO runs (run_id, command, inputs, results, counters, wall_time_seconds, exit_code)
            VALUES (?, ?, ?, ?, ?, ?, ?)
        """, (
            run_id,
            report.get('command', ''),
            json.dumps(report.get('inputs', {})),
            json.dumps(report.get('results', {})),
            json.dumps(report.get('counters', {})),
            report.get('wall_time_seconds'),
            exit_code,
        ))

        conn.commit()
        conn.close()
        return run_id

    @staticmethod
    def _decode(row: sqlite3.Row) -> Dict:
        record = dict(row)
        for field in ('inputs', 'results', 'counters'):
            if record.get(field):
                record[field] = json.loads(record[field])
        return record

    def get_run(self, run_id: str) -> Optional[Dict]:
        conn = self._connect()
        cursor = conn.cursor()
        cursor.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,))
        row = cursor.fetchone()
        conn.close()
        return self._decode(row) if row else None

    def get_runs(self, limit: int = 100, command: Optional[str] = None) -> List[Dict]:
        """
        Most recent runs first

        Args:
            limit: Maximum number of runs
            command: Only runs of this subcommand

        Returns:
            List of decoded run records
        """
        conn = self._connect()
        cursor = conn.cursor()

        if command:
            cursor.execute("""
                SELECT * FROM runs WHERE command = ?
                ORDER BY id DESC LIMIT ?
            """, (command, limit))
        else:
            cursor.execute("SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,))

        rows = cursor.fetchall()
        conn.close()
        return [self._decode(row) for row in rows]

    def get_statistics(self) -> Dict:
        """Run counts, failures and mean wall time per command"""
        conn = self._connect()
        cursor = conn.cursor()

        stats = {}
        cursor.execute("SELECT COUNT(*) FROM runs")
        stats['total_runs'] = cursor.fetchone()[0]

        cursor.execute("SELECT command, COUNT(*) FROM runs GROUP BY command")
        stats['by_command'] = {row[0]: row[1] for row in cursor.fetchall()}

        cursor.execute("SELECT COUNT(*) FROM runs WHERE exit_code != 0")
        stats['failed_runs'] = cursor.fetchone()[0]

        cursor.execute("""
            SELECT command, AVG(wall_time_seconds)
            FROM runs
            GROUP BY command
        """)
        stats['avg_wall_time_by_command'] = {row[0]: round(row[1] or 0, 6) for row in cursor.fetchall()}

        conn.close()
        return stats

    def export_to_json(self, output_path: Union[str, Path]) -> Path:
        """Export all runs and statistics to JSON"""
        output_path = Path(output_path)
        data = {
            'runs': self.get_runs(limit=100000),
            'statistics': self.get_statistics(),
            'exported_at': datetime.now().isoformat()
        }

        with open(output_path, 'w') as f:
            json.dump(data, f, indent=2, default=str)

        logger.info("run ledger exported", extra={"path": str(output_path)})
        return output_path

    def clear(self):
        """Delete every recorded run"""
        conn = self._connect()
        conn.execute("DELETE FROM runs")
        conn.commit()
        conn.close()
