"""National citation-wealth and inequality indicators from institutional ranking data."""
from .cohorts import Cohort, CountryRow, GdpEntry, join_gdp, load_cohorts, select_cohort
from .indicators import CountryIndicators, country_indicators, world_indicators
from .ingest import IngestConfig, InstitutionRecord, exclude_countries, filter_threshold, parse_ranking, validate
from .stats import CorrelationMatrix, ScatterSeries, correlation_matrix, loglog_slope, pearson, scatter_dataset

__version__ = "0.1.0"
