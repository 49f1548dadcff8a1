"""Ranking-file ingestion: parsing, threshold filtering and country exclusion.

A ranking file is UTF-8 CSV or TSV with a header naming (case-insensitively)
the columns ``rank``, ``institution``, ``country`` and ``citations``. Extra
columns are ignored, blank lines and lines starting with ``#`` are skipped.
"""
from __future__ import annotations

import csv
import json
import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

from .errors import DuplicateRecord, EmptyInput, InvalidRecord, MalformedRow, MissingColumn

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("rank", "institution", "country", "citations")
DEFAULT_THRESHOLD = 1000
DEFAULT_EXCLUDED = frozenset({"CN", "RU"})
DEDUPE_POLICIES = ("keep-first", "sum", "fail")

_COUNTRY_RE = re.compile(r"[A-Z]{2}")
_DIGITS_RE = re.compile(r"[0-9]+")
# comma, space, no-break space, thin space, narrow no-break space
_SEPARATORS = str.maketrans("", "", ", \u00a0\u2009\u202f")
_DELIMITERS = {"csv": ",", "tsv": "\t"}


def is_country_code(code: str) -> bool:
    return bool(_COUNTRY_RE.fullmatch(code))


@dataclass(frozen=True)
class InstitutionRecord:
    """One ranked institution and its total citation count."""

    rank: int
    name: str
    country: str
    citations: int

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 1:
            raise InvalidRecord(f"rank must be a positive integer, got {self.rank!r}")
        if not isinstance(self.name, str) or not self.name.strip():
            raise InvalidRecord("institution name is empty")
        if not isinstance(self.country, str) or not is_country_code(self.country):
            raise InvalidRecord(f"country must be two uppercase letters, got {self.country!r}")
        if isinstance(self.citations, bool) or not isinstance(self.citations, int) or self.citations < 0:
            raise InvalidRecord(f"citations must be a nonnegative integer, got {self.citations!r}")


@dataclass(frozen=True)
class IngestConfig:
    threshold: int = DEFAULT_THRESHOLD
    excluded_countries: frozenset[str] = DEFAULT_EXCLUDED
    strict: bool = False

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        codes = frozenset(self.excluded_countries)
        bad = sorted(c for c in codes if not is_country_code(c))
        if bad:
            raise ValueError(f"invalid country codes in exclusion list: {bad}")
        object.__setattr__(self, "excluded_countries", codes)


@dataclass
class ValidationReport:
    """Anomalies found in a record list. Nothing here mutates the records."""

    duplicates: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    zero_citation: list[InstitutionRecord] = field(default_factory=list)
    per_country: dict[str, int] = field(default_factory=dict)

    @property
    def is_clean(self) -> bool:
        return not self.duplicates and not self.zero_citation

    def to_dict(self) -> dict:
        return {
            "duplicates": [
                {"institution": name, "country": country, "ranks": ranks}
                for (name, country), ranks in self.duplicates.items()
            ],
            "zero_citation": [
                {"rank": r.rank, "institution": r.name, "country": r.country}
                for r in self.zero_citation
            ],
            "per_country": self.per_country,
        }


class _LineTracker:
    """Feeds non-comment lines to csv.reader and remembers the physical line number."""

    def __init__(self, stream: Iterable[str]):
        self._lines = enumerate(stream, start=1)
        self.lineno = 0

    def __iter__(self) -> Iterator[str]:
        for lineno, line in self._lines:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.lineno = lineno
            yield line


def _parse_int(text: str, what: str, lineno: int) -> int:
    cleaned = text.translate(_SEPARATORS)
    if not _DIGITS_RE.fullmatch(cleaned):
        raise MalformedRow(f"{what} is not a nonnegative integer: {text!r}", lineno)
    return int(cleaned)


def _parse_row(cells: list[str], index: dict[str, int], lineno: int) -> InstitutionRecord:
    width = max(index.values()) + 1
    if len(cells) < width:
        raise MalformedRow(f"expected at least {width} fields, got {len(cells)}", lineno)
    get = lambda col: cells[index[col]].strip()  # noqa: E731
    name = get("institution")
    if not name:
        raise MalformedRow("empty institution name", lineno)
    rank = _parse_int(get("rank"), "rank", lineno)
    citations = _parse_int(get("citations"), "citations", lineno)
    try:
        return InstitutionRecord(rank=rank, name=name, country=get("country").upper(), citations=citations)
    except InvalidRecord as exc:
        raise MalformedRow(str(exc), lineno) from None


def parse_ranking(stream: Iterable[str], format: str = "tsv", strict: bool = False) -> list[InstitutionRecord]:
    """Parse a ranking file into records, in file order.

    Malformed rows raise :class:`MalformedRow` when ``strict`` is set and are
    logged and skipped otherwise.
    """
    if format not in _DELIMITERS:
        raise ValueError(f"unknown format {format!r}; expected one of {sorted(_DELIMITERS)}")
    lines = _LineTracker(stream)
    reader = csv.reader(lines, delimiter=_DELIMITERS[format])
    header = next(reader, None)
    if header is None:
        raise EmptyInput("input has no header row")
    names = [h.strip().lower() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in names]
    if missing:
        raise MissingColumn(f"header lacks required column(s): {', '.join(missing)}")
    index = {c: names.index(c) for c in REQUIRED_COLUMNS}

    records = []
    for cells in reader:
        try:
            records.append(_parse_row(cells, index, lines.lineno))
        except MalformedRow as exc:
            if strict:
                raise
            log.warning("skipping malformed row: %s", exc)
    if not records:
        raise EmptyInput("input has no data rows")
    return records


def write_ranking(records: Iterable[InstitutionRecord], stream: TextIO, format: str = "csv") -> None:
    """Write records in the canonical ranking layout read by :func:`parse_ranking`."""
    writer = csv.writer(stream, delimiter=_DELIMITERS[format], lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for r in records:
        writer.writerow((r.rank, r.name, r.country, r.citations))


def records_to_json(records: Iterable[InstitutionRecord], stream: TextIO) -> None:
    data = [{"rank": r.rank, "institution": r.name, "country": r.country, "citations": r.citations} for r in records]
    json.dump(data, stream, indent=2, ensure_ascii=False)
    stream.write("\n")


def records_from_json(stream: TextIO) -> list[InstitutionRecord]:
    try:
        raw = json.load(stream)
        records = [InstitutionRecord(int(d["rank"]), d["institution"], d["country"], int(d["citations"])) for d in raw]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedRow(f"bad institution JSON: {exc}") from None
    if not records:
        raise EmptyInput("input has no records")
    return records


def filter_threshold(records: Iterable[InstitutionRecord], threshold: int = DEFAULT_THRESHOLD) -> list[InstitutionRecord]:
    """Keep records with strictly more than ``threshold`` citations."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    return [r for r in records if r.citations > threshold]


def exclude_countries(records: Iterable[InstitutionRecord], codes: Iterable[str]) -> list[InstitutionRecord]:
    codes = frozenset(codes)
    return [r for r in records if r.country not in codes]


def apply_config(records: Iterable[InstitutionRecord], config: IngestConfig) -> list[InstitutionRecord]:
    return exclude_countries(filter_threshold(records, config.threshold), config.excluded_countries)


def validate(records: Sequence[InstitutionRecord]) -> ValidationReport:
    ranks_by_key: dict[tuple[str, str], list[int]] = defaultdict(list)
    for r in records:
        ranks_by_key[(r.name, r.country)].append(r.rank)
    return ValidationReport(
        duplicates={k: v for k, v in ranks_by_key.items() if len(v) > 1},
        zero_citation=[r for r in records if r.citations == 0],
        per_country=dict(sorted(Counter(r.country for r in records).items())),
    )


def dedupe(records: Sequence[InstitutionRecord], policy: str = "keep-first") -> list[InstitutionRecord]:
    """Collapse records sharing (name, country).

    ``keep-first`` keeps the earliest row, ``sum`` adds citation counts into
    the earliest row, ``fail`` raises :class:`DuplicateRecord`.
    """
    if policy not in DEDUPE_POLICIES:
        raise ValueError(f"unknown dedupe policy {policy!r}; expected one of {DEDUPE_POLICIES}")
    merged: dict[tuple[str, str], InstitutionRecord] = {}
    for r in records:
        key = (r.name, r.country)
        first = merged.get(key)
        if first is None:
            merged[key] = r
        elif policy == "fail":
            raise DuplicateRecord(f"duplicate institution {r.name!r} ({r.country}) at ranks {first.rank} and {r.rank}")
        elif policy == "sum":
            merged[key] = InstitutionRecord(first.rank, first.name, first.country, first.citations + r.citations)
    return list(merged.values())
