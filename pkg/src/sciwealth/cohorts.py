"""Country cohorts, GDP joining and cohort selection.

Cohort definitions and the GDP table are data files. The shipped defaults
live in ``sciwealth/data``: ``cohorts.json`` (Top 12, Islamic, Iberia &
Latin America), ``gdp.csv`` (nominal GDP, billions of USD) and
``countries.json`` (ISO 3166-1 alpha-2 codes with display names).
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple, Sequence, TextIO

from .errors import BadConfig, DuplicateGdpEntry, EmptyCohort, MalformedTable
from .indicators import CountryIndicators

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def country_names() -> dict[str, str]:
    with resources.files("sciwealth.data").joinpath("countries.json").open(encoding="utf-8") as fh:
        return json.load(fh)


def display_name(code: str) -> str:
    return country_names().get(code, code)


def is_known_country(code: str) -> bool:
    return code in country_names()


@dataclass(frozen=True)
class Cohort:
    name: str
    members: tuple[str, ...]

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise BadConfig("cohort name is empty")
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise EmptyCohort(f"cohort {self.name!r} has no members")
        seen = set()
        for code in self.members:
            if not is_known_country(code):
                raise BadConfig(f"cohort {self.name!r}: unknown country code {code!r}")
            if code in seen:
                raise BadConfig(f"cohort {self.name!r}: {code} listed twice")
            seen.add(code)

    def __contains__(self, code: str) -> bool:
        return code in self.members


@dataclass(frozen=True)
class GdpEntry:
    country: str
    gdp_busd: float

    def __post_init__(self):
        if not is_known_country(self.country):
            raise BadConfig(f"unknown country code {self.country!r} in GDP table")
        if not (math.isfinite(self.gdp_busd) and self.gdp_busd > 0):
            raise BadConfig(f"GDP for {self.country} must be positive, got {self.gdp_busd!r}")


@dataclass(frozen=True)
class CountryRow(CountryIndicators):
    """An indicator row with GDP and cohort membership attached."""

    gdp_busd: float | None = None
    cohorts: frozenset[str] = field(default_factory=frozenset)


class GdpJoin(NamedTuple):
    rows: list[CountryRow]
    missing: list[str]


def load_cohorts(stream: TextIO) -> list[Cohort]:
    """Parse a ``{name: [codes]}`` JSON object; cohorts keep file order."""
    try:
        raw = json.load(stream)
    except json.JSONDecodeError as exc:
        raise BadConfig(f"cohort config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise BadConfig("cohort config must be a JSON object mapping names to code lists")
    cohorts = []
    for name, codes in raw.items():
        if not isinstance(codes, list) or not all(isinstance(c, str) for c in codes):
            raise BadConfig(f"cohort {name!r} must map to a list of country codes")
        cohorts.append(Cohort(name, tuple(c.strip().upper() for c in codes)))
    return cohorts


def default_cohorts() -> list[Cohort]:
    with resources.files("sciwealth.data").joinpath("cohorts.json").open(encoding="utf-8") as fh:
        return load_cohorts(fh)


def load_gdp(stream: TextIO) -> list[GdpEntry]:
    """Read a ``country,gdp_busd`` CSV table. ``#`` lines carry snapshot notes."""
    reader = csv.DictReader(line for line in stream if line.strip() and not line.lstrip().startswith("#"))
    if reader.fieldnames is None or not {"country", "gdp_busd"} <= {f.strip() for f in reader.fieldnames}:
        raise MalformedTable("GDP table needs columns country, gdp_busd")
    entries = []
    for row in reader:
        row = {k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
        try:
            value = float(row["gdp_busd"])
        except ValueError:
            raise BadConfig(f"GDP value for {row['country']!r} is not a number: {row['gdp_busd']!r}") from None
        entries.append(GdpEntry(row["country"].upper(), value))
    return entries


def default_gdp() -> list[GdpEntry]:
    with resources.files("sciwealth.data").joinpath("gdp.csv").open(encoding="utf-8") as fh:
        return load_gdp(fh)


def write_gdp(entries: Iterable[GdpEntry], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("country", "gdp_busd"))
    for e in entries:
        writer.writerow((e.country, repr(e.gdp_busd)))


def join_gdp(
    rows: Sequence[CountryIndicators],
    gdp: Iterable[GdpEntry],
    cohorts: Sequence[Cohort] = (),
) -> GdpJoin:
    """Left-join GDP onto indicator rows, keeping row order.

    Countries without a GDP entry get ``gdp_busd=None`` and are listed in
    ``missing``. If ``cohorts`` are given, each row records which it belongs to.
    """
    table: dict[str, float] = {}
    for entry in gdp:
        if entry.country in table:
            raise DuplicateGdpEntry(f"GDP table lists {entry.country} more than once")
        table[entry.country] = entry.gdp_busd
    joined, missing = [], []
    for row in rows:
        base = {k: v for k, v in asdict(row).items() if k in CountryIndicators.__dataclass_fields__}
        member_of = frozenset(c.name for c in cohorts if row.country in c)
        value = table.get(row.country)
        if value is None:
            missing.append(row.country)
        joined.append(CountryRow(**base, gdp_busd=value, cohorts=member_of))
    if missing:
        log.warning("no GDP entry for %d countries: %s", len(missing), ", ".join(missing))
    return GdpJoin(joined, missing)


def missing_members(rows: Iterable[CountryIndicators], cohort: Cohort) -> list[str]:
    present = {r.country for r in rows}
    return [c for c in cohort.members if c not in present]


def select_cohort(rows: Sequence[CountryRow], cohort: Cohort) -> list[CountryRow]:
    """Rows belonging to ``cohort``, in the cohort's member order."""
    by_country = {r.country: r for r in rows}
    absent = [c for c in cohort.members if c not in by_country]
    if absent:
        log.warning("cohort %r: no data for %s", cohort.name, ", ".join(absent))
    return [by_country[c] for c in cohort.members if c in by_country]


def cohort_union(rows: Sequence[CountryRow], cohorts: Sequence[Cohort]) -> list[CountryRow]:
    """Rows belonging to any cohort, each once, ordered by first cohort appearance."""
    by_country = {r.country: r for r in rows}
    out, seen = [], set()
    for cohort in cohorts:
        for code in cohort.members:
            if code in by_country and code not in seen:
                seen.add(code)
                out.append(by_country[code])
    return out
