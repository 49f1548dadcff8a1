"""Pearson correlation matrices and plot-ready scatter data."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .cohorts import CountryRow
from .errors import ConstantVector, LengthMismatch, NonPositiveForLog, TooFewPoints, UnknownVariable

# canonical name -> CountryRow attribute
VARIABLES = {
    "N": "N",
    "C": "C",
    "X": "X",
    "E": "E",
    "S": "S",
    "GDP": "gdp_busd",
    "i": "i",
    "eta": "eta",
}
TABLE_VARIABLES = ("N", "C", "X", "E", "GDP", "i", "eta")
FIGURE_SLOPES = (1.0, 1.5, 2.0)

_ALIASES = {k.lower(): k for k in VARIABLES}
_ALIASES.update({"gdp_busd": "GDP", "η": "eta"})


def canonical_variable(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise UnknownVariable(f"unknown variable {name!r}; expected one of {', '.join(VARIABLES)}") from None


def value_of(row: CountryRow, variable: str) -> float | None:
    value = getattr(row, VARIABLES[canonical_variable(variable)], None)
    return None if value is None else float(value)


def _centered(values: Sequence[float]) -> list[float]:
    # shifting by the first value first keeps constant input at exactly zero
    anchor = values[0]
    shifted = [v - anchor for v in values]
    mean = math.fsum(shifted) / len(shifted)
    return [v - mean for v in shifted]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation, clamped to [-1, 1]."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"vectors have lengths {len(xs)} and {len(ys)}")
    if len(xs) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(xs)}")
    dx, dy = _centered(xs), _centered(ys)
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise ConstantVector("correlation is undefined for a constant vector")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    denom = math.sqrt(sxx * syy)
    if math.isinf(denom):
        denom = math.sqrt(sxx) * math.sqrt(syy)
    r = sxy / denom
    return max(-1.0, min(1.0, r))


def ols_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise LengthMismatch(f"vectors have lengths {len(xs)} and {len(ys)}")
    if len(xs) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(xs)}")
    dx, dy = _centered(xs), _centered(ys)
    sxx = math.fsum(d * d for d in dx)
    if sxx == 0:
        raise ConstantVector("slope is undefined when every x is equal")
    return math.fsum(a * b for a, b in zip(dx, dy)) / sxx


def _log10(value: float, variable: str, country: str) -> float:
    if not value > 0:
        raise NonPositiveForLog(f"{variable} for {country} is {value!r}; log scale needs positive values")
    return math.log10(value)


def complete_rows(rows: Iterable[CountryRow], variables: Sequence[str]) -> tuple[list[CountryRow], int]:
    """Rows with every listed variable present, plus how many were dropped."""
    keep, dropped = [], 0
    for row in rows:
        if all(value_of(row, v) is not None for v in variables):
            keep.append(row)
        else:
            dropped += 1
    return keep, dropped


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    n_rows: int = 0
    dropped: int = 0

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return self.values[self.labels.index(a)][self.labels.index(b)]


def correlation_matrix(
    rows: Sequence[CountryRow], variables: Sequence[str] = TABLE_VARIABLES, log: bool = False
) -> CorrelationMatrix:
    """Pairwise Pearson correlations over one common set of complete rows.

    Rows missing any selected variable are dropped before anything is computed
    (listwise deletion). ``log`` correlates base-10 logarithms instead.
    """
    labels = tuple(canonical_variable(v) for v in variables)
    usable, dropped = complete_rows(rows, labels)
    if len(usable) < 3:
        raise TooFewPoints(f"only {len(usable)} complete rows (dropped {dropped}); need at least 3")
    columns = []
    for v in labels:
        col = [value_of(r, v) for r in usable]
        if log:
            col = [_log10(x, v, r.country) for x, r in zip(col, usable)]
        columns.append(col)
    k = len(labels)
    grid = [[1.0] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            try:
                grid[a][b] = grid[b][a] = pearson(columns[a], columns[b])
            except ConstantVector:
                raise ConstantVector(f"cannot correlate {labels[a]} with {labels[b]}: constant column") from None
    return CorrelationMatrix(labels, tuple(tuple(r) for r in grid), len(usable), dropped)


def write_correlation(matrix: CorrelationMatrix, stream: TextIO, precision: str = "display", format: str = "csv") -> None:
    fmt = (lambda v: f"{v:.2f}") if precision == "display" else repr
    if format == "json":
        data = {
            "labels": list(matrix.labels),
            "values": [[float(fmt(v)) if precision == "display" else v for v in row] for row in matrix.values],
            "n_rows": matrix.n_rows,
            "dropped": matrix.dropped,
        }
        json.dump(data, stream, indent=2)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("variable", *matrix.labels))
    for label, row in zip(matrix.labels, matrix.values):
        writer.writerow((label, *(fmt(v) for v in row)))


@dataclass(frozen=True)
class ReferenceLine:
    slope: float
    start: tuple[float, float]
    end: tuple[float, float]


@dataclass(frozen=True)
class ScatterSeries:
    x_label: str
    y_label: str
    points: tuple[tuple[str, float, float], ...]
    reference_slopes: tuple[float, ...] = ()
    log_space: bool = True
    lines: tuple[ReferenceLine, ...] = field(default=())


def scatter_dataset(
    rows: Sequence[CountryRow],
    x_var: str,
    y_var: str,
    log_space: bool = True,
    slopes: Sequence[float] = FIGURE_SLOPES,
) -> ScatterSeries:
    """Points for every complete row plus one reference line per slope.

    Each reference line passes through the centroid of the point cloud (in
    log space when ``log_space``) and spans the observed x-range.
    """
    x_var, y_var = canonical_variable(x_var), canonical_variable(y_var)
    usable, _ = complete_rows(rows, (x_var, y_var))
    points = []
    for r in usable:
        x, y = value_of(r, x_var), value_of(r, y_var)
        if log_space:
            x, y = _log10(x, x_var, r.country), _log10(y, y_var, r.country)
        points.append((r.country, x, y))
    lines = []
    if points and slopes:
        xs = [p[1] for p in points]
        ys = [p[2] for p in points]
        cx, cy = math.fsum(xs) / len(xs), math.fsum(ys) / len(ys)
        lo, hi = min(xs), max(xs)
        for s in slopes:
            lines.append(ReferenceLine(float(s), (lo, cy + s * (lo - cx)), (hi, cy + s * (hi - cx))))
    return ScatterSeries(x_var, y_var, tuple(points), tuple(float(s) for s in slopes), log_space, tuple(lines))


def loglog_slope(rows: Sequence[CountryRow], x_var: str, y_var: str) -> float:
    """Least-squares slope of log10(y) against log10(x)."""
    series = scatter_dataset(rows, x_var, y_var, log_space=True, slopes=())
    return ols_slope([p[1] for p in series.points], [p[2] for p in series.points])


def write_scatter(series: ScatterSeries, stream: TextIO, format: str = "csv") -> None:
    """CSV output uses ``# points`` and ``# line slope=...`` section markers."""
    if format == "json":
        data = {
            "x": series.x_label,
            "y": series.y_label,
            "log_space": series.log_space,
            "points": [{"country": c, "x": x, "y": y} for c, x, y in series.points],
            "lines": [{"slope": ln.slope, "start": list(ln.start), "end": list(ln.end)} for ln in series.lines],
        }
        json.dump(data, stream, indent=2)
        stream.write("\n")
        return
    scale = "log10" if series.log_space else "linear"
    stream.write(f"# x={series.x_label} y={series.y_label} scale={scale}\n")
    writer = csv.writer(stream, lineterminator="\n")
    stream.write("# points\n")
    writer.writerow(("country", "x", "y"))
    for c, x, y in series.points:
        writer.writerow((c, repr(x), repr(y)))
    for ln in series.lines:
        stream.write(f"# line slope={ln.slope!r}\n")
        writer.writerow(("x", "y"))
        writer.writerow((repr(ln.start[0]), repr(ln.start[1])))
        writer.writerow((repr(ln.end[0]), repr(ln.end[1])))
