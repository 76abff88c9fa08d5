from .command_parser import CommandParser, ParsedCommand
from .report_formatter import ReportFormatter

__all__ = [
    'CommandParser',
    'ParsedCommand',
    'ReportFormatter'
]
