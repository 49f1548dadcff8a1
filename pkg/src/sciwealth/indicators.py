"""Size-dependent and size-independent indicators for groups of institutions.

For a group of N institutions with citation counts c_1..c_N:

    C   = sum(c)            first-order output
    i   = C / N             average impact
    X   = i * C = C**2 / N  exergy
    E   = sum(c**2)         energy
    S   = E - X             entropy (N times the population variance)
    eta = X / E             evenness; 1 for a perfectly even group, smaller
                            when citations concentrate in a few institutions

C and N stay integers until a division happens. Squares are summed in
descending order of magnitude so that results are reproducible bit for bit.
"""
from __future__ import annotations

import csv
import json
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence, TextIO

from .errors import EmptyGroup, MalformedTable, NegativeEntropy, NonPositiveEnergy, ZeroInstitutions, ZeroWorldValue
from .ingest import InstitutionRecord

WORLD = "WORLD"
FIELDS = ("country", "N", "C", "i", "X", "E", "S", "eta")
# relative slack allowed for X exceeding E through rounding
_REL_TOL = 1e-12


class Aggregate(NamedTuple):
    N: int
    C: int
    citations: list[int]


@dataclass(frozen=True)
class CountryIndicators:
    country: str
    N: int
    C: int
    i: float
    X: float
    E: float
    S: float
    eta: float

    def display(self) -> dict[str, str]:
        """Values rounded the way the published tables show them."""
        return {
            "country": self.country,
            "N": str(self.N),
            "C": str(self.C),
            "i": f"{self.i:.2f}",
            "X": f"{self.X:.2E}",
            "E": f"{self.E:.2E}",
            "S": f"{self.S:.2E}",
            "eta": f"{self.eta:.3f}",
        }

    def full(self) -> dict[str, str]:
        return {k: v if isinstance(v, str) else repr(v) for k, v in asdict(self).items()}


def aggregate(records: Sequence[InstitutionRecord]) -> Aggregate:
    if not records:
        raise EmptyGroup("cannot aggregate an empty group")
    citations = sorted((r.citations for r in records), reverse=True)
    return Aggregate(len(citations), sum(citations), citations)


def _check_n(N: int) -> None:
    if N < 1:
        raise ZeroInstitutions(f"institution count must be >= 1, got {N}")


def impact(C: int, N: int) -> float:
    _check_n(N)
    return C / N


def exergy(C: int, N: int) -> float:
    _check_n(N)
    # exact integer square, one correctly rounded division
    return C * C / N


def energy(citations: Iterable[float]) -> float:
    values = sorted(citations, key=abs, reverse=True)
    if not values:
        raise EmptyGroup("energy of an empty group")
    total = 0
    for c in values:
        total += c * c
    return float(total)


def eta(X: float, E: float) -> float:
    if not E > 0:
        raise NonPositiveEnergy(f"energy must be positive, got {E!r}")
    if not X > 0:
        raise NonPositiveEnergy(f"exergy must be positive, got {X!r}")
    if X > E * (1 + _REL_TOL):
        raise NonPositiveEnergy(f"exergy {X!r} exceeds energy {E!r}")
    return min(X / E, 1.0)


def entropy(E: float, X: float) -> float:
    if E < X * (1 - _REL_TOL):
        raise NegativeEntropy(f"energy {E!r} is below exergy {X!r}")
    return max(E - X, 0.0)


def indicators_for(label: str, records: Sequence[InstitutionRecord]) -> CountryIndicators:
    N, C, citations = aggregate(records)
    X = exergy(C, N)
    E = energy(citations)
    return CountryIndicators(
        country=label, N=N, C=C, i=impact(C, N), X=X, E=E, S=entropy(E, X), eta=eta(X, E)
    )


def group_by_country(records: Iterable[InstitutionRecord]) -> dict[str, list[InstitutionRecord]]:
    groups: dict[str, list[InstitutionRecord]] = defaultdict(list)
    for r in records:
        groups[r.country].append(r)
    return dict(groups)


def country_indicators(
    groups: Mapping[str, Sequence[InstitutionRecord]] | Iterable[InstitutionRecord],
) -> list[CountryIndicators]:
    """One indicator row per country, largest C first (ties broken by code).

    Accepts either a ``{country: records}`` mapping or a flat record list.
    """
    if not isinstance(groups, Mapping):
        groups = group_by_country(groups)
    rows = [indicators_for(country, recs) for country, recs in groups.items()]
    rows.sort(key=lambda r: (-r.C, r.country))
    return rows


def world_indicators(records: Sequence[InstitutionRecord]) -> CountryIndicators:
    return indicators_for(WORLD, records)


def share_of_world(country_value: float, world_value: float) -> float:
    """Percentage of the world value contributed by one country."""
    if not world_value > 0:
        raise ZeroWorldValue(f"world value must be positive, got {world_value!r}")
    return 100 * country_value / world_value


def write_indicators(
    rows: Iterable[CountryIndicators], stream: TextIO, precision: str = "full", format: str = "csv"
) -> None:
    """Write indicator rows. ``precision='display'`` applies table rounding."""
    if precision not in ("full", "display"):
        raise ValueError(f"unknown precision {precision!r}")
    if format == "json":
        if precision == "display":
            data = [r.display() for r in rows]
        else:
            data = [asdict(r) for r in rows]
        json.dump(data, stream, indent=2)
        stream.write("\n")
    elif format == "csv":
        writer = csv.DictWriter(stream, fieldnames=FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r.display() if precision == "display" else r.full())
    else:
        raise ValueError(f"unknown format {format!r}")


def read_indicators(stream: TextIO, format: str = "csv") -> list[CountryIndicators]:
    """Read rows written by :func:`write_indicators` (either precision)."""
    if format == "json":
        raw = json.load(stream)
    else:
        raw = list(csv.DictReader(line for line in stream if not line.startswith("#")))
    rows = []
    for item in raw:
        try:
            rows.append(
                CountryIndicators(
                    country=str(item["country"]).strip().upper(),
                    N=int(item["N"]),
                    C=int(item["C"]),
                    **{k: float(item[k]) for k in ("i", "X", "E", "S", "eta")},
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTable(f"bad indicator row {item!r}: {exc}") from None
    return rows
