"""Brute-force ground truth: enumerate the objects and bin their statistics.

Nothing here touches the group-ring engine.  Univariate totals are produced
by the Euler-transform recurrence on integer lists, a separate path from
the factor folding in :mod:`equidist.series`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .families import Family

PARTITION_GUARD = 80
OVERPARTITION_GUARD = 40
PLANE_PARTITION_GUARD = 25


class GuardError(ValueError):
    """Enumeration size beyond the configured guard."""


def _guard(n: int, limit: int, what: str):
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > limit:
        raise GuardError(f"{what} enumeration guard is {limit}, asked for n={n}")


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True)
class Overpartition:
    parts: tuple[int, ...]
    overlined: tuple[bool, ...]

    @property
    def size(self) -> int:
        return sum(self.parts)

    def plain_parts(self) -> tuple[int, ...]:
        return tuple(p for p, o in zip(self.parts, self.overlined) if not o)


@dataclass(frozen=True)
class PlanePartition:
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return sum(map(sum, self.rows))


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int, guard: int = PARTITION_GUARD) -> Iterator[Partition]:
    _guard(n, guard, "partition")
    for parts in _partitions(n, n):
        yield Partition(parts)


def enumerate_overpartitions(n: int, guard: int = OVERPARTITION_GUARD) -> Iterator[Overpartition]:
    _guard(n, guard, "overpartition")
    for parts in _partitions(n, n):
        firsts = [i for i, p in enumerate(parts) if i == 0 or parts[i - 1] != p]
        for mask in range(1 << len(firsts)):
            flags = [False] * len(parts)
            for bit, i in enumerate(firsts):
                if mask >> bit & 1:
                    flags[i] = True
            yield Overpartition(parts, tuple(flags))


def _plane(n: int, above: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    # next row: non-increasing, entrywise <= the row above, nonzero entries only
    if n == 0:
        yield ()
        return

    def rows(remaining, col, cap):
        yield ()
        if col == len(above) or remaining == 0:
            return
        hi = min(cap, above[col], remaining)
        for v in range(hi, 0, -1):
            for tail in rows(remaining - v, col + 1, v):
                yield (v,) + tail

    for row in rows(n, 0, n):
        if not row:
            continue
        for rest in _plane(n - sum(row), row):
            yield (row,) + rest


def enumerate_plane_partitions(n: int, guard: int = PLANE_PARTITION_GUARD) -> Iterator[PlanePartition]:
    _guard(n, guard, "plane partition")
    for rows in _plane(n, (n,) * n if n else ()):
        yield PlanePartition(rows)


def rank_of(lam: Partition) -> int:
    if not lam.parts:
        return 0
    return lam.parts[0] - len(lam.parts)


def crank_of(lam: Partition) -> int:
    ones = lam.parts.count(1)
    if ones == 0:
        return lam.parts[0] if lam.parts else 0
    return sum(1 for p in lam.parts if p > ones) - ones


def trace_of(pp: PlanePartition) -> int:
    return sum(row[i] for i, row in enumerate(pp.rows) if i < len(row))


@lru_cache(maxsize=None)
def _crank_table(n: int, guard: int) -> dict[int, int]:
    """Crank counts M(m, n), with the n = 1 entry replaced by the product's t + 1/t - 1."""
    if n == 1:
        return {1: 1, -1: 1, 0: -1}
    table: dict[int, int] = {}
    for lam in enumerate_partitions(n, guard):
        c = crank_of(lam)
        table[c] = table.get(c, 0) + 1
    return table


@lru_cache(maxsize=None)
def _distinct_count(n: int, guard: int) -> int:
    return sum(1 for lam in enumerate_partitions(n, guard) if len(set(lam.parts)) == len(lam.parts))


def count_statistic(family: Family | str, a: int, b: int, n: int, guard: int | None = None) -> int:
    """Number of objects of size ``n`` whose statistic is ``a`` mod ``b``."""
    family = Family(family)
    if not 0 <= a < b:
        raise ValueError(f"residue {a} outside 0..{b - 1}")
    if family is Family.RANK:
        return sum(1 for lam in enumerate_partitions(n, guard or PARTITION_GUARD) if rank_of(lam) % b == a)
    if family is Family.CRANK:
        return sum(1 for lam in enumerate_partitions(n, guard or PARTITION_GUARD) if crank_of(lam) % b == a)
    if family is Family.PP_TRACE:
        return sum(
            1 for pp in enumerate_plane_partitions(n, guard or PLANE_PARTITION_GUARD) if trace_of(pp) % b == a
        )
    if family is Family.RESIDUAL_CRANK:
        g = guard or OVERPARTITION_GUARD
        _guard(n, g, "overpartition")
        total = 0
        for k in range(n + 1):
            d = _distinct_count(k, g)
            if d:
                total += d * sum(v for m, v in _crank_table(n - k, g).items() if m % b == a)
        return total
    raise ValueError(f"no enumeration oracle for {family.value}")


def residual_crank_of(op: Overpartition) -> int:
    return crank_of(Partition(op.plain_parts()))


def pentagonal_p(n: int) -> int:
    return pentagonal_table(n)[n]


def pentagonal_table(N: int) -> list[int]:
    """p(0..N) by Euler's pentagonal-number recurrence."""
    if N < 0:
        raise ValueError("N must be >= 0")
    p = [0] * (N + 1)
    p[0] = 1
    for n in range(1, N + 1):
        acc = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            acc += sign * p[n - g1]
            g2 = g1 + k
            if g2 <= n:
                acc += sign * p[n - g2]
            k += 1
        p[n] = acc
    return p


def euler_transform(exponent, N: int) -> list[int]:
    """Coefficients of prod_k (1 - q**k)**(-exponent(k)) to q**N.

    Uses n c(n) = sum_{j=1..n} s(j) c(n - j) with s(j) = sum_{d | j} d exponent(d).
    """
    a = [0] + [exponent(k) for k in range(1, N + 1)]
    s = [0] * (N + 1)
    for d in range(1, N + 1):
        if a[d]:
            for j in range(d, N + 1, d):
                s[j] += d * a[d]
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, N + 1):
        acc = sum(s[j] * c[n - j] for j in range(1, n + 1))
        c[n], rem = divmod(acc, n)
        if rem:
            raise ArithmeticError("Euler transform produced a non-integer coefficient")
    return c


def _times_poly(c: list[int], poly: dict[int, int]) -> list[int]:
    out = [0] * len(c)
    for k, v in poly.items():
        for n in range(k, len(c)):
            out[n] += v * c[n - k]
    return out


def _divide_one_minus(c: list[int], k: int) -> list[int]:
    out = list(c)
    for n in range(k, len(c)):
        out[n] += out[n - k]
    return out


def univariate_total(family: Family | str, N: int, m: int | None = None) -> list[int]:
    """Coefficients of the family's generating function with the grading variable set to 1."""
    family = Family(family)
    if family in (Family.RANK, Family.CRANK, Family.GOETTSCHE_CELLS):
        return pentagonal_table(N)
    if family is Family.PP_TRACE:
        return euler_transform(lambda k: k, N)
    if family is Family.RESIDUAL_CRANK:
        # (q^2;q^2)/(q;q)^2 = prod (1-q^k)^-2 over odd k, ^-1 over even k
        return euler_transform(lambda k: 2 if k % 2 else 1, N)
    base = pentagonal_table(N)
    if family is Family.BETTI_X4:
        if m is None or m < 1:
            raise ValueError("betti-x4 requires m >= 1")
        for j in range(1, m + 1):
            base = _divide_one_minus(base, j)
        return base
    base = _divide_one_minus(_divide_one_minus(base, 1), 2)
    if family is Family.BETTI_X1:
        return _times_poly(base, {0: 2})
    if family is Family.BETTI_X2:
        return _times_poly(base, {0: 2, 1: -1})
    return base
