import io
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sciwealth import stats
from sciwealth.cohorts import CountryRow
from sciwealth.errors import ConstantVector, LengthMismatch, NonPositiveForLog, TooFewPoints, UnknownVariable

from oracles import naive_pearson


def row(country, gdp=None, **kw):
    base = dict(N=1, C=1, i=1.0, X=1.0, E=1.0, S=0.0, eta=1.0)
    base.update(kw)
    return CountryRow(country=country, gdp_busd=gdp, **base)


# -- pearson -------------------------------------------------------------------

def test_pearson_perfect():
    assert stats.pearson([1, 2, 3], [2, 4, 6]) == 1.0
    assert stats.pearson([1, 2, 3], [6, 4, 2]) == -1.0


def test_pearson_hand_value():
    # covariance 1/3, both variances 2/3
    assert stats.pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize(
    "xs, ys, err",
    [([1, 2, 3], [1, 2], LengthMismatch), ([1, 2], [1, 2], TooFewPoints), ([1, 1, 1], [1, 2, 3], ConstantVector)],
)
def test_pearson_errors(xs, ys, err):
    with pytest.raises(err):
        stats.pearson(xs, ys)


vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=25)


def spread(v):
    return max(v) - min(v)


@given(vectors, st.data())
def test_pearson_matches_exact_oracle(xs, data):
    ys = data.draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=len(xs), max_size=len(xs)))
    assume(spread(xs) > 1e-3 and spread(ys) > 1e-3)
    assert stats.pearson(xs, ys) == pytest.approx(naive_pearson(xs, ys), abs=1e-12)


@given(vectors, st.data(), st.floats(0.01, 100), st.floats(-1e3, 1e3))
def test_pearson_affine(xs, data, a, b):
    ys = data.draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=len(xs), max_size=len(xs)))
    assume(spread(xs) > 1e-2 and spread(ys) > 1e-2)
    r = stats.pearson(xs, ys)
    assert abs(stats.pearson([a * x + b for x in xs], ys) - r) <= 1e-12
    assert abs(stats.pearson([-a * x + b for x in xs], ys) + r) <= 1e-12


# -- correlation matrix ----------------------------------------------------------

def test_matrix_identical_columns():
    rows = [row(c, gdp=g, C=g * 2, N=n) for c, g, n in [("US", 10, 3), ("GB", 20, 1), ("FR", 35, 7)]]
    m = stats.correlation_matrix(rows, ["C", "GDP", "N"])
    assert m["C", "GDP"] == pytest.approx(1.0, abs=1e-15)
    assert m.labels == ("C", "GDP", "N")
    assert all(m.values[k][k] == 1.0 for k in range(3))


def test_matrix_listwise_deletion():
    rows = [row("US", 1, C=1), row("GB", 2, C=3), row("FR", None, C=9), row("DE", 4, C=4)]
    m = stats.correlation_matrix(rows, ["C", "GDP"])
    assert (m.n_rows, m.dropped) == (3, 1)
    assert m["C", "GDP"] == pytest.approx(naive_pearson([1, 3, 4], [1, 2, 4]))


def test_matrix_too_few_rows():
    with pytest.raises(TooFewPoints):
        stats.correlation_matrix([row("US", 1), row("GB", None)], ["C", "GDP"])


def test_matrix_unknown_variable():
    with pytest.raises(UnknownVariable):
        stats.correlation_matrix([row("US", 1)] * 3, ["C", "h_index"])


def test_matrix_log_option():
    rows = [row("US", 10, C=100), row("GB", 100, C=10_000), row("FR", 1000, C=1_000_000)]
    assert stats.correlation_matrix(rows, ["C", "GDP"], log=True)["C", "GDP"] == pytest.approx(1.0)


def test_variable_aliases():
    assert stats.canonical_variable("gdp") == "GDP"
    assert stats.canonical_variable("ETA") == "eta"
    assert stats.canonical_variable("η") == "eta"


@pytest.mark.parametrize("precision, cell", [("display", "0.50"), ("full", repr(stats.pearson([1, 2, 3], [1, 3, 2])))])
def test_write_correlation(precision, cell):
    rows = [row("US", 1, C=1), row("GB", 2, C=3), row("FR", 3, C=2)]
    buf = io.StringIO()
    stats.write_correlation(stats.correlation_matrix(rows, ["GDP", "C"]), buf, precision)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "variable,GDP,C"
    assert lines[1].split(",")[2] == cell


# -- scatter -----------------------------------------------------------------------

def power_rows(k, s, xs):
    return [row(f"A{chr(65 + j)}", gdp=x, C=1, X=k * x ** s) for j, x in enumerate(xs)]


def test_scatter_reference_lines_through_centroid():
    rows = power_rows(3.0, 1.2, [10, 200, 3000, 45000])
    series = stats.scatter_dataset(rows, "GDP", "X", log_space=True, slopes=[1.0, 1.5, 2.0])
    assert len(series.points) == 4 and len(series.lines) == 3
    xs = [p[1] for p in series.points]
    ys = [p[2] for p in series.points]
    cx, cy = sum(xs) / 4, sum(ys) / 4
    for line in series.lines:
        (x0, y0), (x1, y1) = line.start, line.end
        assert (x0, x1) == (min(xs), max(xs))
        assert (y1 - y0) / (x1 - x0) == pytest.approx(line.slope)
        assert y0 + line.slope * (cx - x0) == pytest.approx(cy)


def test_scatter_log_coordinates_recover_inputs():
    rows = power_rows(7.0, 1.5, [3, 17, 250, 999])
    series = stats.scatter_dataset(rows, "GDP", "X")
    for (country, lx, ly), r in zip(series.points, rows):
        assert math.isclose(10 ** lx, r.gdp_busd, rel_tol=1e-12)
        assert math.isclose(10 ** ly, r.X, rel_tol=1e-12)


def test_scatter_non_positive_for_log():
    rows = [row("US", 0.0), row("GB", 2.0)]
    with pytest.raises(NonPositiveForLog):
        stats.scatter_dataset(rows, "GDP", "C")


def test_scatter_no_slopes_and_linear():
    rows = [row("US", 0.0, eta=0.5), row("GB", 2.0, eta=0.2), row("FR", None)]
    series = stats.scatter_dataset(rows, "gdp", "eta", log_space=False, slopes=[])
    assert series.lines == ()
    assert series.points == (("US", 0.0, 0.5), ("GB", 2.0, 0.2))


def test_write_scatter_sections():
    series = stats.scatter_dataset(power_rows(1.0, 2.0, [1, 10, 100]), "GDP", "X")
    buf = io.StringIO()
    stats.write_scatter(series, buf)
    lines = buf.getvalue().splitlines()
    assert lines[1] == "# points"
    assert sum(1 for ln in lines if ln.startswith("# line slope=")) == 3
    assert len(lines) == 1 + 2 + 3 + 3 * 4


# -- log-log slope -------------------------------------------------------------------

def test_loglog_slope_square():
    assert stats.loglog_slope(power_rows(1.0, 2.0, [1, 2, 5, 10]), "GDP", "X") == pytest.approx(2.0, abs=1e-9)


def test_loglog_slope_synthetic_generator():
    assert stats.loglog_slope(power_rows(7.0, 1.5, [2, 5, 11, 130, 4000]), "GDP", "X") == pytest.approx(1.5, abs=1e-9)


def test_loglog_slope_constant():
    rows = [row(c, g, X=42.0) for c, g in [("US", 1), ("GB", 10), ("FR", 100)]]
    assert stats.loglog_slope(rows, "GDP", "X") == 0.0


@given(st.floats(1e-3, 1e3), st.floats(-3, 3), st.lists(st.floats(1e-2, 1e6), min_size=3, max_size=12, unique=True))
def test_loglog_slope_recovers_exponent(k, s, xs):
    assume(max(xs) / min(xs) > 1.5)
    assert stats.loglog_slope(power_rows(k, s, xs), "GDP", "X") == pytest.approx(s, abs=1e-9)
