"""Command-line front end.

Each subcommand reads files named by flags and writes files named by flags;
stdout gets a short human-readable summary, stderr gets diagnostics.
Exit codes: 0 success, 1 usage or I/O error, 2 data or validation error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence, TextIO

from . import cohorts as coh
from . import indicators as ind
from . import ingest
from . import stats
from .errors import DataError, UnknownCountry
from .sample import synthetic_ranking

log = logging.getLogger("sciwealth")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
SHARE_FIELDS = ("N", "C", "X", "E", "S")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers ---------------------------------------------------------

def _codes(text: str) -> frozenset[str]:
    codes = frozenset(c.strip().upper() for c in text.split(",") if c.strip())
    bad = sorted(c for c in codes if not ingest.is_country_code(c))
    if bad:
        raise argparse.ArgumentTypeError(f"invalid country code(s): {', '.join(bad)}")
    return codes


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _sniff_format(path: Path, explicit: str | None) -> str:
    if explicit:
        return explicit
    suffix = path.suffix.lower()
    return {".csv": "csv", ".json": "json"}.get(suffix, "tsv")


@contextmanager
def _open_in(path: Path) -> Iterator[TextIO]:
    try:
        fh = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot read {str(path)!r}: {exc.strerror or exc}") from None
    with fh:
        yield fh


@contextmanager
def _open_out(path: Path) -> Iterator[TextIO]:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fh = path.open("w", encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {str(path)!r}: {exc.strerror or exc}") from None
    with fh:
        yield fh


def _load_records(path: Path, fmt: str | None, strict: bool = False) -> list[ingest.InstitutionRecord]:
    fmt = _sniff_format(path, fmt)
    with _open_in(path) as fh:
        if fmt == "json":
            return ingest.records_from_json(fh)
        return ingest.parse_ranking(fh, fmt, strict=strict)


def _load_rows(args) -> list[coh.CountryRow]:
    with _open_in(args.indicators) as fh:
        rows = ind.read_indicators(fh, _sniff_format(args.indicators, None))
    if args.gdp:
        with _open_in(args.gdp) as fh:
            gdp = coh.load_gdp(fh)
    else:
        gdp = coh.default_gdp()
    if args.cohorts:
        with _open_in(args.cohorts) as fh:
            cohorts = coh.load_cohorts(fh)
    else:
        cohorts = coh.default_cohorts()
    joined = coh.join_gdp(rows, gdp, cohorts)
    args.cohort_list = cohorts
    return joined.rows


def _split_world(args, records):
    """Threshold-filter, then return (world records, per-country records)."""
    kept = ingest.filter_threshold(records, args.threshold)
    countries = ingest.exclude_countries(kept, args.exclude)
    world = countries if args.world_after_exclusion else kept
    return world, countries


# -- subcommands --------------------------------------------------------------

def cmd_ingest(args) -> int:
    if args.seed_sample is not None:
        raw = synthetic_ranking(args.seed_sample)
        source = f"synthetic sample (seed {args.seed_sample})"
    elif args.input is not None:
        raw = _load_records(args.input, args.input_format, strict=args.strict)
        source = str(args.input)
    else:
        raise UsageError("one of --input or --seed-sample is required")
    config = ingest.IngestConfig(args.threshold, args.exclude, args.strict)
    records = ingest.apply_config(raw, config)
    report = ingest.validate(records)
    if args.report:
        with _open_out(args.report) as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    if not report.is_clean:
        print(
            f"validation: {len(report.duplicates)} duplicate (name, country) pairs, "
            f"{len(report.zero_citation)} zero-citation records",
            file=sys.stderr,
        )
        if args.strict:
            return EXIT_DATA
    if args.dedupe != "none":
        records = ingest.dedupe(records, args.dedupe)
    with _open_out(args.output) as fh:
        if args.format == "json":
            ingest.records_to_json(records, fh)
        else:
            ingest.write_ranking(records, fh, "csv")
    excluded = ",".join(sorted(config.excluded_countries)) or "none"
    print(
        f"{source}: kept {len(records)} of {len(raw)} institutions "
        f"(citations > {config.threshold}, excluded: {excluded}) -> {args.output}"
    )
    return EXIT_OK


def cmd_indicators(args) -> int:
    records = _load_records(args.input, args.input_format)
    world, countries = _split_world(args, records)
    rows = ind.country_indicators(countries)
    if args.with_world:
        rows.append(ind.world_indicators(world))
    with _open_out(args.output) as fh:
        ind.write_indicators(rows, fh, args.precision, args.format)
    print(f"{len(rows)} indicator rows from {len(countries)} institutions -> {args.output}")
    return EXIT_OK


def report_table(world: ind.CountryIndicators, countries: Sequence[ind.CountryIndicators], precision: str = "display"):
    """Indicator-by-column layout: WORLD, each country, then each country's share of WORLD."""
    header = ["indicator", ind.WORLD]
    for c in countries:
        header.append(c.country)
    for c in countries:
        header.append(f"{c.country} % of {ind.WORLD}")
    cells = {r.country: (r.display() if precision == "display" else r.full()) for r in (world, *countries)}
    table = [header]
    for name in ind.FIELDS[1:]:
        line = [name, cells[ind.WORLD][name]]
        line += [cells[c.country][name] for c in countries]
        for c in countries:
            if name in SHARE_FIELDS:
                share = ind.share_of_world(getattr(c, name), getattr(world, name))
                line.append(f"{share:.1f}" if precision == "display" else repr(share))
            else:
                line.append("-")
        table.append(line)
    return table


def cmd_report(args) -> int:
    records = _load_records(args.input, args.input_format)
    world_records, country_records = _split_world(args, records)
    groups = ind.group_by_country(country_records)
    wanted = []
    for code in (c.upper() for c in args.countries):
        if code not in groups:
            why = "excluded" if code in args.exclude else "not present after filtering"
            raise UnknownCountry(f"country {code} is {why} in {args.input}")
        wanted.append(ind.indicators_for(code, groups[code]))
    world = ind.world_indicators(world_records)
    table = report_table(world, wanted, args.precision)

    widths = [max(len(row[k]) for row in table) for k in range(len(table[0]))]
    for row in table:
        print("  ".join(cell.rjust(w) if k else cell.ljust(w) for k, (cell, w) in enumerate(zip(row, widths))))
    if args.output:
        with _open_out(args.output) as fh:
            if args.format == "json":
                keys = table[0]
                json.dump([dict(zip(keys, row)) for row in table[1:]], fh, indent=2)
                fh.write("\n")
            else:
                csv.writer(fh, lineterminator="\n").writerows(table)
    return EXIT_OK


def cmd_correlate(args) -> int:
    rows = _load_rows(args)
    union = coh.cohort_union(rows, args.cohort_list)
    for cohort in args.cohort_list:
        absent = coh.missing_members(rows, cohort)
        if absent:
            print(f"cohort {cohort.name!r}: no indicator row for {', '.join(absent)}", file=sys.stderr)
    matrix = stats.correlation_matrix(union, args.variables, log=args.log)
    print(
        f"correlation over {matrix.n_rows} countries ({matrix.dropped} dropped for missing values)",
        file=sys.stderr,
    )
    with _open_out(args.output) as fh:
        stats.write_correlation(matrix, fh, args.precision, args.format)
    print(f"{len(matrix.labels)}x{len(matrix.labels)} correlation matrix over {matrix.n_rows} countries -> {args.output}")
    return EXIT_OK


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def cmd_scatter(args) -> int:
    rows = _load_rows(args)
    log_space = not args.no_log
    jobs = []  # (filename stem, rows, x, y, slopes)
    if args.preset and (args.x or args.y):
        raise UsageError("--preset cannot be combined with --x/--y")
    if args.preset == "figure1":
        union = coh.cohort_union(rows, args.cohort_list)
        slopes = stats.FIGURE_SLOPES if args.slopes is None else args.slopes
        for y in ("N", "C", "X", "E"):
            jobs.append((f"figure1_{y}_vs_GDP", union, "GDP", y, slopes))
    elif args.preset == "figure2":
        slopes = () if args.slopes is None else args.slopes
        for cohort in args.cohort_list:
            subset = coh.select_cohort(rows, cohort)
            for x in ("X", "E"):
                jobs.append((f"figure2_{_slug(cohort.name)}_eta_vs_{x}", subset, x, "eta", slopes))
    else:
        if not (args.x and args.y):
            raise UsageError("give --preset, or both --x and --y")
        if args.cohort:
            matches = [c for c in args.cohort_list if c.name == args.cohort]
            if not matches:
                raise UsageError(f"no cohort named {args.cohort!r}")
            subset = coh.select_cohort(rows, matches[0])
        else:
            subset = coh.cohort_union(rows, args.cohort_list)
        x, y = stats.canonical_variable(args.x), stats.canonical_variable(args.y)
        slopes = stats.FIGURE_SLOPES if args.slopes is None else args.slopes
        jobs.append((f"{y}_vs_{x}", subset, x, y, slopes))

    suffix = ".json" if args.format == "json" else ".csv"
    for stem, subset, x, y, slopes in jobs:
        series = stats.scatter_dataset(subset, x, y, log_space=log_space, slopes=slopes)
        path = args.output_dir / f"{stem}{suffix}"
        with _open_out(path) as fh:
            stats.write_scatter(series, fh, args.format)
        note = ""
        if log_space and len(series.points) >= 3:
            note = f", log-log slope {stats.ols_slope([p[1] for p in series.points], [p[2] for p in series.points]):.3f}"
        print(f"{path}: {len(series.points)} points, {len(series.lines)} reference lines{note}")
    return EXIT_OK


def cmd_sample(args) -> int:
    records = synthetic_ranking(args.seed)
    fmt = _sniff_format(args.output, args.format)
    with _open_out(args.output) as fh:
        if fmt == "json":
            ingest.records_to_json(records, fh)
        else:
            ingest.write_ranking(records, fh, fmt)
    print(f"{len(records)} synthetic institutions (seed {args.seed}) -> {args.output}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_filters(p):
    p.add_argument("--threshold", type=_nonnegative, default=ingest.DEFAULT_THRESHOLD,
                   help="keep institutions with strictly more citations than this (default 1000)")
    p.add_argument("--exclude", type=_codes, default=ingest.DEFAULT_EXCLUDED,
                   help="comma-separated country codes to drop (default CN,RU; '' for none)")


def _add_world_scope(p):
    p.add_argument("--world-after-exclusion", action="store_true",
                   help="compute WORLD after dropping excluded countries (default: before)")


def _add_joined_inputs(p):
    p.add_argument("--indicators", type=Path, required=True, help="indicator file from the indicators command")
    p.add_argument("--gdp", type=Path, help="GDP table CSV (default: shipped snapshot)")
    p.add_argument("--cohorts", type=Path, help="cohort config JSON (default: shipped cohorts)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sciwealth", description="National citation-wealth and inequality indicators.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse, filter and validate a ranking file")
    p.add_argument("--input", type=Path, help="ranking file (TSV or CSV)")
    p.add_argument("--seed-sample", type=int, metavar="SEED", help="use a synthetic ranking instead of --input")
    p.add_argument("--input-format", choices=("tsv", "csv", "json"))
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_filters(p)
    p.add_argument("--strict", action="store_true", help="fail on malformed rows and validation anomalies")
    p.add_argument("--dedupe", choices=("none", *ingest.DEDUPE_POLICIES), default="none")
    p.add_argument("--report", type=Path, help="write the validation report as JSON")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("indicators", help="per-country indicator table")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--input-format", choices=("tsv", "csv", "json"))
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--precision", choices=("full", "display"), default="full")
    _add_filters(p)
    _add_world_scope(p)
    p.add_argument("--with-world", action="store_true", help="append a WORLD row")
    p.set_defaults(func=cmd_indicators)

    p = sub.add_parser("report", help="WORLD vs country summary table")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--input-format", choices=("tsv", "csv", "json"))
    p.add_argument("--countries", type=_names, default=(), help="comma-separated country codes")
    p.add_argument("--output", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--precision", choices=("full", "display"), default="display")
    _add_filters(p)
    _add_world_scope(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("correlate", help="Pearson matrix over the cohort countries")
    _add_joined_inputs(p)
    p.add_argument("--variables", type=_names, default=stats.TABLE_VARIABLES)
    p.add_argument("--log", action="store_true", help="correlate log10 values")
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--precision", choices=("full", "display"), default="display")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("scatter", help="plot-ready scatter data with reference slopes")
    _add_joined_inputs(p)
    p.add_argument("--output-dir", type=Path, required=True)
    p.add_argument("--preset", choices=("figure1", "figure2"))
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--cohort", help="restrict a custom pair to one cohort (default: union)")
    p.add_argument("--no-log", action="store_true", help="keep linear coordinates")
    p.add_argument("--slopes", type=_floats, help="reference slopes, e.g. 1,1.5,2")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("sample", help="write a synthetic ranking file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--format", choices=("tsv", "csv", "json"))
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sciwealth {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"sciwealth {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
