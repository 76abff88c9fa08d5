import sqlite3
import json
import logging
from pathlib import Path
from typing import Dict, Any, Optional, List, Union

COMMANDS = ('eig', 'sweep', 'horoconvex', 'verify')


class ResultRepository:
    """
    Archives command runs (parameters and results) in a SQLite database.
    """

    def __init__(self, db_path: Union[str, Path]):
        """
        Initialize result repository.

        Args:
            db_path: Path to SQLite database file
        """
        self.logger = logging.getLogger('ResultRepository')
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)

        self._init_db()

    def _init_db(self) -> None:
        """Initialize SQLite database with required tables."""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()

                cursor.execute("""
                    CREATE TABLE IF NOT EXISTS runs (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        command TEXT NOT NULL,
                        created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                        parameters TEXT,
                        payload TEXT,
                        passed INTEGER
                    )
                """)
                cursor.execute("""
                    CREATE INDEX IF NOT EXISTS runs_command ON runs (command)
                """)

                conn.commit()

        except sqlite3.Error as e:
            self.logger.error(f"Database initialization error: {e}")
            raise

    def store_run(self,
                  command: str,
                  parameters: Dict[str, Any],
                  payload: Any,
                  passed: Optional[bool] = None) -> int:
        """
        Store a run with its parameters and results.

        Args:
            command: Subcommand name
            parameters: Arguments the run was made with
            payload: JSON-serializable results
            passed: Outcome for verify runs, None otherwise

        Returns:
            ID of stored run record

        Raises:
            ValueError: If the command is unknown
            sqlite3.Error: If the insert fails
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}")

        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute("""
                    INSERT INTO runs (command, parameters, payload, passed)
                    VALUES (?, ?, ?, ?)
                """, (
                    command,
                    json.dumps(parameters, sort_keys=True),
                    json.dumps(payload),
                    None if passed is None else int(passed)
                ))
                conn.commit()
                return cursor.lastrowid

        except sqlite3.Error as e:
            self.logger.error(f"Error storing run: {e}")
            raise

    @staticmethod
    def _row_to_dict(row: tuple, include_payload: bool) -> Dict[str, Any]:
        record = {
            'id': row[0],
            'command': row[1],
            'created_at': row[2],
            'parameters': json.loads(row[3]) if row[3] else {},
            'passed': None if row[5] is None else bool(row[5]),
        }
        if include_payload:
            record['payload'] = json.loads(row[4]) if row[4] else None
        return record

    def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        """
        Retrieve a run by ID.

        Args:
            run_id: Run record ID

        Returns:
            Dictionary with parameters and payload, None if absent or unreadable
        """
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute("""
                    SELECT id, command, created_at, parameters, payload, passed
                    FROM runs WHERE id = ?
                """, (run_id,))

                row = cursor.fetchone()
                if not row:
                    return None
                return self._row_to_dict(row, include_payload=True)

        except (sqlite3.Error, json.JSONDecodeError) as e:
            self.logger.error(f"Error retrieving run: {e}")
            return None

    def list_runs(self, command: Optional[str] = None, limit: int = 20) -> List[Dict[str, Any]]:
        """
        List the most recent runs, newest first, without payloads.

        Args:
            command: Only runs of this subcommand
            limit: Maximum number of records

        Returns:
            List of run records
        """
        query = "SELECT id, command, created_at, parameters, payload, passed FROM runs"
        args: List[Any] = []
        if command:
            query += " WHERE command = ?"
            args.append(command)
        query += " ORDER BY id DESC LIMIT ?"
        args.append(limit)

        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute(query, args)
                return [self._row_to_dict(row, include_payload=False)
                        for row in cursor.fetchall()]

        except sqlite3.Error as e:
            self.logger.error(f"Error listing runs: {e}")
            return []

    def delete_run(self, run_id: int) -> bool:
        """
        Delete a run.

        Args:
            run_id: ID of run to delete

        Returns:
            True if a record was deleted, False otherwise
        """
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute("DELETE FROM runs WHERE id = ?", (run_id,))
                conn.commit()
                return cursor.rowcount > 0

        except sqlite3.Error as e:
            self.logger.error(f"Error deleting run: {e}")
            return False
