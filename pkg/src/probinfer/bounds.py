"""
Anytime bounds and their traces
"""
import time
from typing import Dict, List, Optional

import pandas as pd

TRACE_COLUMNS = ["step", "lower", "upper", "elapsed"]


class AnytimeBounds:
    """
    Bracket on P(target | evidence) from partially processed mass.

    `found` is the processed mass consistent with target and evidence,
    `processed` the processed mass consistent with evidence and `residual`
    the mass not yet resolved (unprocessed plus pruned). The bracket is
    [found / (processed + residual), (found + residual) / (processed + residual)].
    """

    def __init__(self, found: float, processed: float, residual: float, steps: int = 0):
        self.found = float(found)
        self.processed = float(processed)
        self.residual = max(float(residual), 0.0)
        self.steps = steps

    @property
    def mass(self) -> float:
        return self.processed + self.residual

    @property
    def lower(self) -> float:
        if self.mass <= 0.0:
            return 0.0
        return min(self.found / self.mass, 1.0)

    @property
    def upper(self) -> float:
        if self.mass <= 0.0:
            return 1.0
        return min((self.found + self.residual) / self.mass, 1.0)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def residual_share(self) -> float:
        """Unresolved mass as a share of the evidence mass still in play"""
        if self.mass <= 0.0:
            return 1.0
        return self.residual / self.mass

    def to_dict(self) -> Dict:
        return {
            'lower': self.lower,
            'upper': self.upper,
            'processed': self.steps,
            'residual': self.residual_share,
        }

    def __repr__(self) -> str:
        return f"AnytimeBounds([{self.lower:.6g}, {self.upper:.6g}], steps={self.steps})"


class TraceRecorder:
    """Collects one (step, lower, upper, elapsed) row per anytime step"""

    def __init__(self, record_timing: bool = True):
        self.record_timing = record_timing
        self.started = time.perf_counter()
        self.rows: List[Dict] = []

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    def record(self, bounds: AnytimeBounds):
        self.rows.append({
            'step': bounds.steps,
            'lower': bounds.lower,
            'upper': bounds.upper,
            'elapsed': self.elapsed if self.record_timing else 0.0,
        })

    def out_of_time(self, time_limit: Optional[float]) -> bool:
        return time_limit is not None and self.elapsed >= time_limit

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=TRACE_COLUMNS)


def write_trace(trace: pd.DataFrame, path) -> None:
    """CSV with a header row, comma separated, LF line endings"""
    trace.to_csv(path, index=False, lineterminator="\n")
