"""Synthetic ranking data for running the pipeline without the real snapshot.

Each country gets a number of institutions roughly proportional to its GDP
and Pareto-distributed citation counts whose tail gets heavier as the
economy grows, so larger systems are also more concentrated. Some draws
land below the default 1000-citation cut on purpose.
"""
from __future__ import annotations

import math
import random
from typing import Sequence

from .cohorts import GdpEntry, default_gdp, display_name
from .ingest import InstitutionRecord

# countries outside the GDP table still worth having in a sample
EXTRA_GDP = {"CN": 11200.0, "RU": 1280.0, "CU": 91.0, "SY": 20.0, "CH": 669.0, "NZ": 185.0}

INSTITUTIONS_PER_BUSD = 0.05
MIN_CITATIONS = 800
MAX_CITATIONS = 5_000_000


def tail_exponent(gdp_busd: float) -> float:
    """Pareto exponent for a country; smaller means a heavier tail."""
    return max(1.05, 2.6 - 0.35 * math.log10(gdp_busd))


def synthetic_ranking(seed: int = 0, gdp: Sequence[GdpEntry] | None = None) -> list[InstitutionRecord]:
    rng = random.Random(seed)
    sizes = {e.country: e.gdp_busd for e in (default_gdp() if gdp is None else gdp)}
    for code, value in EXTRA_GDP.items():
        sizes.setdefault(code, value)

    rows = []
    for code in sorted(sizes):
        size = sizes[code]
        alpha = tail_exponent(size)
        count = max(1, round(INSTITUTIONS_PER_BUSD * size))
        name = display_name(code)
        for k in range(count):
            u = 1.0 - rng.random()  # (0, 1]
            cites = min(MAX_CITATIONS, int(MIN_CITATIONS * u ** (-1.0 / alpha)))
            rows.append((cites, code, f"{name} Institute {k + 1:04d}"))

    rows.sort(key=lambda t: (-t[0], t[1], t[2]))
    return [InstitutionRecord(rank, name, code, cites) for rank, (cites, code, name) in enumerate(rows, start=1)]
