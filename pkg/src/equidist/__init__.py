"""Residue-class statistics of partition-type q-series: exact expansions and asymptotics."""

from .families import Family, FamilyError, FamilySpec, density, equidist_factor, parse_family
from .series import (
    CapacityError,
    ResidueClassSeries,
    SeriesError,
    coarsen,
    extract,
    family_series,
    grs_invert,
    grs_mul,
    grs_one,
    mul_factor_pow,
    row_sum,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Family",
    "FamilyError",
    "FamilySpec",
    "ResidueClassSeries",
    "SeriesError",
    "coarsen",
    "density",
    "equidist_factor",
    "extract",
    "family_series",
    "grs_invert",
    "grs_mul",
    "grs_one",
    "mul_factor_pow",
    "parse_family",
    "row_sum",
]
