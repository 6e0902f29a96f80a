"""Generating-function families and their command-line names."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction


class Family(enum.Enum):
    RANK = "rank"
    CRANK = "crank"
    RESIDUAL_CRANK = "residual-crank"
    PP_TRACE = "pp-trace"
    BETTI_X1 = "betti-x1"
    BETTI_X2 = "betti-x2"
    BETTI_X3 = "betti-x3"
    BETTI_X4 = "betti-x4"
    GOETTSCHE_CELLS = "goettsche-cells"

    @property
    def is_betti(self) -> bool:
        return self in BETTI_FAMILIES


BETTI_FAMILIES = frozenset(
    {Family.BETTI_X1, Family.BETTI_X2, Family.BETTI_X3, Family.BETTI_X4}
)
FAMILY_NAMES = tuple(f.value for f in Family)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """A family together with its modulus ``b`` (and ``m`` for betti-x4)."""

    family: Family
    b: int
    m: int | None = None

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", parse_family(self.family))
        if self.b < 2:
            raise FamilyError(f"modulus must be >= 2, got {self.b}")
        if self.family is Family.BETTI_X4:
            if self.m is None or self.m < 1:
                raise FamilyError("betti-x4 requires m >= 1")
        elif self.m is not None:
            raise FamilyError(f"m is only meaningful for betti-x4, not {self.family.value}")

    @property
    def name(self) -> str:
        if self.family is Family.BETTI_X4:
            return f"{self.family.value}(m={self.m})"
        return self.family.value


def parse_family(name: str | Family) -> Family:
    if isinstance(name, Family):
        return name
    try:
        return Family(name)
    except ValueError:
        raise FamilyError(
            f"unknown family {name!r}; valid names: {', '.join(FAMILY_NAMES)}"
        ) from None


def density(a: int, b: int) -> Fraction:
    """Limiting share d(a, b) of Betti mass in the class a mod b.

    All Betti generating functions only carry even powers of the grading
    variable, so for even b the odd classes vanish and the even ones split
    the mass b/2 ways.
    """
    if b % 2:
        return Fraction(1, b)
    if a % 2 == 0:
        return Fraction(2, b)
    return Fraction(0)


def equidist_factor(family: Family, a: int, b: int) -> Fraction:
    if family in BETTI_FAMILIES:
        return density(a, b)
    return Fraction(1, b)
