"""Report models and CSV/JSON emission."""

import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from utils.errors import EmitError

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 9
SWEEP_COLUMNS = ["axis_value", "algorithm", "mean_rate", "stderr", "mean_tau", "trials"]
TRIAL_COLUMNS = ["seed", "interval", "algorithm", "rate", "rate_with_overhead", "tau",
                 "evaluations", "stable"]


class AlgorithmResult(BaseModel):
    algorithm: str
    pairs: List[List[int]]
    tau: int
    evaluations: int
    rate: float = Field(ge=0)
    rate_with_overhead: float = Field(ge=0)
    stable: bool


class TrialReport(BaseModel):
    """Everything one coherence interval of one trial produced."""
    seed: int
    interval: int = 0
    topology: Dict[str, List[List[float]]]
    ul_sums: List[float]
    dl_sums: List[float]
    ul_realized_sums: List[float]
    ul_sinrs: List[List[float]]
    dl_sinrs: List[List[float]]
    powers: List[List[float]]
    power_converged: List[bool]
    power_iterations: List[int]
    results: List[AlgorithmResult]
    elapsed_s: float = Field(default=0.0, exclude=True)

    def result(self, algorithm: str) -> Optional[AlgorithmResult]:
        return next((r for r in self.results if r.algorithm == algorithm), None)

    def csv_header(self) -> List[str]:
        return list(TRIAL_COLUMNS)

    def csv_rows(self) -> List[List[Any]]:
        return [[self.seed, self.interval, r.algorithm, r.rate, r.rate_with_overhead, r.tau,
                 r.evaluations, r.stable] for r in self.results]


class TrajectoryReport(BaseModel):
    seed: int
    steps: int
    intervals: List[TrialReport]

    def csv_header(self) -> List[str]:
        return list(TRIAL_COLUMNS)

    def csv_rows(self) -> List[List[Any]]:
        return [row for report in self.intervals for row in report.csv_rows()]


class SweepRow(BaseModel):
    axis_value: float
    algorithm: str
    mean_rate: float
    stderr: float = Field(ge=0)
    mean_tau: float
    trials: int


class SweepTable(BaseModel):
    axis: str
    unit: str = "bit/s/Hz"
    values: List[float]
    rows: List[SweepRow]

    def csv_header(self) -> List[str]:
        return list(SWEEP_COLUMNS)

    def csv_rows(self) -> List[List[Any]]:
        return [[getattr(row, col) for col in SWEEP_COLUMNS] for row in self.rows]

    def series(self, algorithm: str) -> List[float]:
        """Mean rates of one algorithm in axis order."""
        return [row.mean_rate for row in self.rows if row.algorithm == algorithm]


class ComplexityRow(BaseModel):
    irs: int
    es_evaluations: Optional[float] = None
    gs_proposals: float
    trials: int


class ComplexityTable(BaseModel):
    rows: List[ComplexityRow]
    gs_exponent: Optional[float] = None

    def csv_header(self) -> List[str]:
        return ["irs", "es_evaluations", "gs_proposals", "trials"]

    def csv_rows(self) -> List[List[Any]]:
        return [[r.irs, r.es_evaluations, r.gs_proposals, r.trials] for r in self.rows]


Emittable = Union[TrialReport, TrajectoryReport, SweepTable, ComplexityTable]


def _round(value: Any) -> Any:
    """Round every float in a JSON-ready structure to the emitted precision."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if value is None:
        return ""
    return str(value)


def render(obj: Emittable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_round(obj.model_dump(mode="json")), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(obj.csv_header())
        for row in obj.csv_rows():
            writer.writerow([_cell(v) for v in row])
        return buffer.getvalue()
    raise ValueError(f"unknown output format '{fmt}', expected csv or json")


def emit(obj: Emittable, fmt: str, path: Union[str, Path, None] = None) -> str:
    """Render `obj` and write it atomically to `path` ("-" or None for stdout)."""
    text = render(obj, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return text

    path = Path(path)
    temp_file = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(temp_file, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        temp_file.replace(path)
    except OSError as e:
        raise EmitError(path, e.strerror or str(e)) from e
    logger.info(f"Wrote {fmt} output to {path}")
    return text


def load_report(path: Union[str, Path]) -> Emittable:
    """Read back a JSON artifact written by `emit`."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise EmitError(path, e.strerror or str(e)) from e
    for model in (SweepTable, TrajectoryReport, ComplexityTable, TrialReport):
        if set(model.model_fields) >= set(data) and all(
                name in data for name, f in model.model_fields.items()
                if f.is_required()):
            return model.model_validate(data)
    raise EmitError(path, "not a recognised report")
