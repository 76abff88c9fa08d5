"""
Core file management functionality for results and reports.
Handles output paths, atomic writes, and cleanup of partial files.
"""

from pathlib import Path
from typing import Union, Optional, List, TextIO
import tempfile
import os
import sys
import logging


class FileManager:
    """Manages result files written by the command line tools."""

    def __init__(self, output_dir: Optional[Union[str, Path]] = None):
        """
        Initialize file manager.

        Args:
            output_dir: Directory that relative output paths resolve against
                (defaults to the working directory)
        """
        self.logger = logging.getLogger('FileManager')
        self.output_dir = Path(output_dir) if output_dir else Path.cwd()
        self.temp_files: List[Path] = []

    def resolve(self, path: Union[str, Path]) -> Path:
        """Absolute output path; relative paths resolve against output_dir."""
        path = Path(path)
        return path if path.is_absolute() else self.output_dir / path

    def write_text(self, path: Union[str, Path], content: str) -> Path:
        """
        Write text atomically: into a temporary file in the same directory,
        then renamed over the target.

        Args:
            path: Output path
            content: Text to write

        Returns:
            Path written

        Raises:
            OSError: If the directory cannot be created or the file written
        """
        output_path = self.resolve(path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        handle = tempfile.NamedTemporaryFile(
            mode='w',
            prefix=f".{output_path.name}.",
            suffix='.tmp',
            dir=output_path.parent,
            delete=False,
            newline='',
            encoding='utf-8'
        )
        temp_path = Path(handle.name)
        self.temp_files.append(temp_path)

        try:
            with handle:
                handle.write(content)
            os.replace(temp_path, output_path)
            self.temp_files.remove(temp_path)
        except OSError as e:
            self.logger.error(f"Error writing {output_path}: {e}")
            self.cleanup_temp_file(temp_path)
            raise

        self.logger.debug(f"Wrote {len(content)} characters to {output_path}")
        return output_path

    def emit(self, content: str, path: Optional[Union[str, Path]] = None,
             stream: Optional[TextIO] = None) -> Optional[Path]:
        """
        Write content to a file when a path is given, else to the stream
        (standard output by default).
        """
        if path is not None:
            return self.write_text(path, content)
        stream = stream or sys.stdout
        stream.write(content)
        if content and not content.endswith('\n'):
            stream.write('\n')
        stream.flush()
        return None

    def cleanup_temp_file(self, path: Union[str, Path]) -> None:
        """
        Delete a specific temporary file.

        Args:
            path: Path to file to delete
        """
        try:
            path = Path(path)
            if path.exists():
                path.unlink()
            if path in self.temp_files:
                self.temp_files.remove(path)

        except OSError as e:
            self.logger.error(f"Error cleaning up file {path}: {e}")

    def cleanup_all(self) -> None:
        """Remove partial files left by interrupted writes."""
        for temp_file in self.temp_files[:]:
            self.cleanup_temp_file(temp_file)
