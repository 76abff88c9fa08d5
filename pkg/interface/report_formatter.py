"""
Rendering of results as text tables, CSV and JSON.
"""

from typing import Dict, Any, List, Optional
import csv
import io
import json
import logging

from config.config import OutputConfig
from core.bounds import BoundReport
from core.eigensolve import EigenResult
from core.horoconvex import GapCertificate
from core.verify import CheckResult, report_to_json


class ReportFormatter:
    """Formats solver results, sweeps, certificates and check reports."""

    def __init__(self, output: Optional[OutputConfig] = None):
        self.output = output or OutputConfig()
        self.logger = logging.getLogger('ReportFormatter')

    def number(self, value: Any) -> str:
        """Fixed 12-significant-digit rendering; booleans as true/false."""
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, float):
            return self.output.float_format % value
        if value is None:
            return ''
        return str(value)

    @staticmethod
    def eig_payload(first: EigenResult, second: EigenResult,
                    bounds: List[BoundReport]) -> Dict[str, Any]:
        spec = first.spec
        return {
            'n': spec.n,
            'k': spec.k,
            'r': spec.r,
            'lambda1': first.eigenvalue,
            'lambda1_error': first.error_estimate,
            'lambda2': second.eigenvalue,
            'lambda2_error': second.error_estimate,
            'gap': second.eigenvalue - first.eigenvalue,
            'gap_error': first.error_estimate + second.error_estimate,
            'bounds': [bound.to_dict() for bound in bounds],
        }

    def format_eig(self, payload: Dict[str, Any], fmt: str = 'text') -> str:
        """
        Render eigenvalues, gap and bounds.

        Raises:
            ValueError: If the format is not text or json
        """
        if fmt == 'json':
            return json.dumps(payload, indent=2)
        if fmt != 'text':
            raise ValueError(f"Unsupported format for eig: {fmt}")

        lines = [
            f"Ball n={payload['n']} k={self.number(payload['k'])} r={self.number(payload['r'])}",
            "",
            f"  lambda1 = {self.number(payload['lambda1'])}  (+/- {payload['lambda1_error']:.1e})",
            f"  lambda2 = {self.number(payload['lambda2'])}  (+/- {payload['lambda2_error']:.1e})",
            f"  gap     = {self.number(payload['gap'])}  (+/- {payload['gap_error']:.1e})",
            "",
            "Bounds:",
        ]
        width = max(len(bound['name']) for bound in payload['bounds'])
        for bound in payload['bounds']:
            status = '' if bound['valid'] else '  (outside its range)'
            lines.append(f"  {bound['name']:<{width}}  {bound['kind']:<5}  "
                         f"{self.number(bound['value'])}{status}")
        return "\n".join(lines)

    def sweep_csv(self, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        """CSV with a header line, '.' decimals and '\\n' line endings."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([self.number(row[column]) for column in columns])
        return buffer.getvalue()

    def format_sweep(self, columns: List[str], rows: List[Dict[str, Any]], fmt: str = 'csv') -> str:
        if fmt == 'json':
            return json.dumps([{column: row[column] for column in columns} for row in rows], indent=2)
        if fmt != 'csv':
            raise ValueError(f"Unsupported format for sweep: {fmt}")
        return self.sweep_csv(columns, rows)

    def format_certificate(self, certificate: GapCertificate, fmt: str = 'text') -> str:
        if fmt == 'json':
            return json.dumps(certificate.to_dict(), indent=2)
        if fmt != 'text':
            raise ValueError(f"Unsupported format for horoconvex: {fmt}")

        reference = certificate.reference_numeric_gap
        lines = [
            f"Horoconvex domain n={certificate.n} D={self.number(certificate.D)}",
            "",
            f"  certified gap bound  = {self.number(certificate.certified_bound)}"
            f"  (64 C(n) / D^3, C(n) = {self.number(certificate.C_n)})",
            f"  inscribed ball floor = {self.number(certificate.ball_radius_floor)}",
            f"  reference ball gap   = "
            f"{'not computed' if reference is None else self.number(reference)}"
            f"  (informational, not certified)",
            "",
            "Assumptions:",
        ]
        lines.extend(f"  - {assumption}" for assumption in certificate.assumptions)
        return "\n".join(lines)

    def format_checks(self, results: List[CheckResult], fmt: str = 'json') -> str:
        if fmt == 'json':
            return report_to_json(results)
        if fmt != 'text':
            raise ValueError(f"Unsupported format for verify: {fmt}")

        width = max(len(result.check_name) for result in results)
        lines = []
        for result in results:
            status = 'PASS' if result.passed else 'FAIL'
            lines.append(f"{status}  {result.check_name:<{width}}  "
                         f"margin={result.margin:.3e}  at {result.worst_case}")
            if result.error:
                lines.append(f"      error: {result.error}")
        passed = sum(result.passed for result in results)
        lines.append(f"{passed}/{len(results)} checks passed")
        return "\n".join(lines)

    def format_history(self, runs: List[Dict[str, Any]], fmt: str = 'text') -> str:
        if fmt == 'json':
            return json.dumps(runs, indent=2)
        if not runs:
            return "No archived runs"
        lines = []
        for run in runs:
            outcome = '' if run['passed'] is None else ('  passed' if run['passed'] else '  FAILED')
            params = ' '.join(f"{key}={value}" for key, value in sorted(run['parameters'].items())
                              if value is not None)
            lines.append(f"#{run['id']}  {run['created_at']}  {run['command']}  {params}{outcome}")
        return "\n".join(lines)
