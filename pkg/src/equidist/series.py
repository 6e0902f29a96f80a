"""Truncated q-series with coefficients in the group ring Z[Z/bZ].

A series is stored as an ``(N + 1) x b`` object array of Python ints: entry
``[n, r]`` is the coefficient of ``t**r q**n`` with ``t**b == 1``.  Because
the grading variable is reduced modulo ``b`` *before* anything is summed,
the count c(a, b; n) of objects with statistic congruent to ``a`` is just
the entry ``[n, a]`` -- no roots of unity, no rounding.

Products of factors ``(1 - t**e q**k)**s`` are folded in directly
(``O(N b)`` per geometric factor), so expanding a whole family to ``q**N``
costs ``O(N**2 b)`` big-integer additions.
"""

from __future__ import annotations

import csv
import io
from math import comb
from typing import Iterable

import numpy as np

from .families import Family, FamilySpec

MAX_LIMIT = 20000


class SeriesError(ValueError):
    pass


class CapacityError(SeriesError):
    """Requested truncation exceeds what the engine is configured to build."""


def _zeros(N: int, b: int) -> np.ndarray:
    out = np.empty((N + 1, b), dtype=object)
    out.fill(0)
    return out


class ResidueClassSeries:
    __slots__ = ("b", "N", "coeffs")

    def __init__(self, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.ndim != 2 or coeffs.shape[0] < 1 or coeffs.shape[1] < 1:
            raise SeriesError(f"coefficient table must be (N+1) x b, got shape {coeffs.shape}")
        coeffs.flags.writeable = False
        self.coeffs = coeffs
        self.N = coeffs.shape[0] - 1
        self.b = coeffs.shape[1]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "ResidueClassSeries":
        rows = [[int(v) for v in row] for row in rows]
        arr = _zeros(len(rows) - 1, len(rows[0]))
        for n, row in enumerate(rows):
            arr[n, :] = row
        return cls(arr)

    def __repr__(self):
        return f"ResidueClassSeries(b={self.b}, N={self.N})"

    def __eq__(self, other):
        if not isinstance(other, ResidueClassSeries):
            return NotImplemented
        return self.b == other.b and self.N == other.N and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __mul__(self, other):
        return grs_mul(self, other)

    def row(self, n: int) -> tuple[int, ...]:
        return tuple(self.coeffs[n])

    def extract(self, a: int, n: int) -> int:
        return extract(self, a, n)

    def row_sum(self, n: int) -> int:
        return row_sum(self, n)

    def totals(self) -> list[int]:
        return [sum(self.coeffs[n]) for n in range(self.N + 1)]

    def to_csv(self, stream=None) -> str | None:
        """Write ``n,r0,...,r{b-1},total`` rows; return the text if no stream is given."""
        own = stream is None
        if own:
            stream = io.StringIO()
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["n", *(f"r{r}" for r in range(self.b)), "total"])
        for n in range(self.N + 1):
            row = list(self.coeffs[n])
            writer.writerow([n, *row, sum(row)])
        return stream.getvalue() if own else None

    @classmethod
    def from_csv(cls, text: str) -> "ResidueClassSeries":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        b = len(header) - 2
        if header[0] != "n" or header[-1] != "total" or b < 1:
            raise SeriesError(f"bad header: {header}")
        rows = []
        for n, rec in enumerate(reader):
            if int(rec[0]) != n:
                raise SeriesError(f"row {n} labelled {rec[0]}")
            vals = [int(v) for v in rec[1:-1]]
            if sum(vals) != int(rec[-1]):
                raise SeriesError(f"row {n}: total column disagrees with residues")
            rows.append(vals)
        return cls.from_rows(rows)


def _check_shape(b: int, N: int):
    if b < 1:
        raise SeriesError(f"modulus must be >= 1, got {b}")
    if N < 0:
        raise SeriesError(f"truncation must be >= 0, got {N}")
    if N > MAX_LIMIT:
        raise CapacityError(f"truncation {N} exceeds engine capacity {MAX_LIMIT}")


def grs_one(b: int, N: int) -> ResidueClassSeries:
    _check_shape(b, N)
    arr = _zeros(N, b)
    arr[0, 0] = 1
    return ResidueClassSeries(arr)


def _same_ring(A: ResidueClassSeries, B: ResidueClassSeries):
    if A.b != B.b:
        raise SeriesError(f"modulus mismatch: {A.b} vs {B.b}")
    if A.N != B.N:
        raise SeriesError(f"truncation mismatch: {A.N} vs {B.N}")


def grs_mul(A: ResidueClassSeries, B: ResidueClassSeries) -> ResidueClassSeries:
    _same_ring(A, B)
    N, b = A.N, A.b
    out = _zeros(N, b)
    Bc = B.coeffs
    for n1 in range(N + 1):
        for r1 in range(b):
            c = A.coeffs[n1, r1]
            if c:
                out[n1:] += c * np.roll(Bc[: N + 1 - n1], r1, axis=1)
    return ResidueClassSeries(out)


def _ring_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of two group-ring elements (length-b vectors)."""
    b = len(x)
    out = np.empty(b, dtype=object)
    out.fill(0)
    for r in range(b):
        if x[r]:
            out += x[r] * np.roll(y, r)
    return out


def grs_invert(A: ResidueClassSeries) -> ResidueClassSeries:
    N, b = A.N, A.b
    if A.coeffs[0, 0] != 1 or any(A.coeffs[0, 1:]):
        raise SeriesError("series is not invertible here: constant term must be exactly 1")
    X = _zeros(N, b)
    X[0, 0] = 1
    Ac = A.coeffs
    for n in range(1, N + 1):
        # X[n] = -sum_{k=1..n} A[k] * X[n-k]
        acc = np.empty(b, dtype=object)
        acc.fill(0)
        prev = X[n - 1 :: -1] if n - 1 >= 0 else X[:0]
        for r in range(b):
            col = Ac[1 : n + 1, r]
            if not any(col):
                continue
            acc += np.roll(col @ prev[:n], r)
        X[n] = -acc
    return ResidueClassSeries(X)


def _geometric_coeffs(s: int, count: int) -> list[int]:
    """Coefficients of x**j, j = 1..count, in (1 - x)**s."""
    if s > 0:
        return [(-1) ** j * comb(s, j) for j in range(1, count + 1)]
    s = -s
    return [comb(s + j - 1, j) for j in range(1, count + 1)]


def _fold(arr: np.ndarray, e: int, k: int, s: int) -> np.ndarray:
    """Multiply the raw table by (1 - t**e q**k)**s; returns a new array."""
    N = arr.shape[0] - 1
    b = arr.shape[1]
    e %= b
    out = arr.copy()
    if s == 0 or k > N:
        return out
    if s == -1:
        # X[n] = S[n] + t**e X[n-k]; a block of k rows only reads finished rows
        for start in range(k, N + 1, k):
            stop = min(start + k, N + 1)
            out[start:stop] += np.roll(out[start - k : stop - k], e, axis=1)
        return out
    if s == 1:
        out[k:] -= np.roll(arr[: N + 1 - k], e, axis=1)
        return out
    coeffs = _geometric_coeffs(s, N // k)
    for j, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        shift = j * k
        out[shift:] += c * np.roll(arr[: N + 1 - shift], (j * e) % b, axis=1)
    return out


def mul_factor_pow(S: ResidueClassSeries, e: int, k: int, s: int) -> ResidueClassSeries:
    """Return ``S * (1 - t**e q**k)**s`` truncated at ``q**S.N``."""
    if k < 1:
        raise SeriesError(f"q-exponent of a factor must be >= 1, got {k}")
    return ResidueClassSeries(_fold(S.coeffs, e, k, s))


def _mul_poly(arr: np.ndarray, terms: Iterable[tuple[int, int, int]]) -> np.ndarray:
    """Multiply by a finite sum of ``c * t**e * q**k`` given as (c, e, k) triples."""
    N, b = arr.shape[0] - 1, arr.shape[1]
    out = _zeros(N, b)
    for c, e, k in terms:
        if k > N:
            continue
        out[k:] += c * np.roll(arr[: N + 1 - k], e % b, axis=1)
    return out


def _f3_fold(arr: np.ndarray, step: int, s: int) -> np.ndarray:
    # prod_n (1 - t**(step*(n-1)) q**n)**s, i.e. F_3(t**step; q)**s
    N = arr.shape[0] - 1
    for n in range(1, N + 1):
        arr = _fold(arr, step * (n - 1), n, s)
    return arr


def f1_series(b: int, N: int) -> ResidueClassSeries:
    """prod_{n>=1} (1 - t q**n) truncated at q**N."""
    arr = grs_one(b, N).coeffs.copy()
    for n in range(1, N + 1):
        arr = _fold(arr, 1, n, 1)
    return ResidueClassSeries(arr)


def f3_series(b: int, N: int) -> ResidueClassSeries:
    """prod_{n>=1} (1 - t**(n-1) q**n) truncated at q**N."""
    arr = grs_one(b, N).coeffs.copy()
    return ResidueClassSeries(_f3_fold(arr, 1, 1))


def _rank(b: int, N: int) -> np.ndarray:
    # R(t;q) = sum_k q**(k*k) / ((tq;q)_k (t^-1 q;q)_k)
    total = _zeros(N, b)
    term = grs_one(b, N).coeffs.copy()
    k = 0
    while k * k <= N:
        if k:
            term = _fold(term, 1, k, -1)
            term = _fold(term, -1, k, -1)
        sq = k * k
        total[sq:] += term[: N + 1 - sq]
        k += 1
    return total


def _crank_like(b: int, N: int, step: int) -> np.ndarray:
    # (q**step; q**step)_inf / (F_1(t;q) F_1(t^-1;q))
    arr = grs_one(b, N).coeffs.copy()
    for n in range(1, N + 1):
        arr = _fold(arr, 1, n, -1)
        arr = _fold(arr, -1, n, -1)
        if step * n <= N:
            arr = _fold(arr, 0, step * n, 1)
    return arr


def _betti_prefix(arr: np.ndarray, family: Family, m: int | None) -> np.ndarray:
    if family is Family.BETTI_X4:
        for j in range(1, m + 1):
            arr = _fold(arr, 2 * j, j, -1)
        return arr
    arr = _fold(arr, 2, 1, -1)
    arr = _fold(arr, 4, 2, -1)
    if family is Family.BETTI_X1:
        return _mul_poly(arr, [(1, 0, 0), (1, 2, 0)])
    if family is Family.BETTI_X2:
        return _mul_poly(arr, [(1, 0, 0), (1, 2, 0), (-1, 2, 1)])
    return arr


def build_family(family: Family, b: int, N: int, m: int | None = None) -> ResidueClassSeries:
    """Expand a family's bivariate generating function; ``b = 1`` gives the plain total."""
    _check_shape(b, N)
    if family is Family.RANK:
        return ResidueClassSeries(_rank(b, N))
    if family is Family.CRANK:
        return ResidueClassSeries(_crank_like(b, N, 1))
    if family is Family.RESIDUAL_CRANK:
        return ResidueClassSeries(_crank_like(b, N, 2))
    arr = grs_one(b, N).coeffs.copy()
    if family is Family.PP_TRACE:
        for n in range(1, N + 1):
            arr = _fold(arr, 1, n, -n)
        return ResidueClassSeries(arr)
    if family is Family.GOETTSCHE_CELLS:
        return ResidueClassSeries(_f3_fold(arr, 1, -1))
    arr = _f3_fold(arr, 2, -1)
    return ResidueClassSeries(_betti_prefix(arr, family, m))


def family_series(spec: FamilySpec, N: int) -> ResidueClassSeries:
    return build_family(spec.family, spec.b, N, spec.m)


def extract(S: ResidueClassSeries, a: int, n: int) -> int:
    if not 0 <= a < S.b:
        raise SeriesError(f"residue {a} outside 0..{S.b - 1}")
    if not 0 <= n <= S.N:
        raise SeriesError(f"index {n} outside 0..{S.N}")
    return S.coeffs[n, a]


def row_sum(S: ResidueClassSeries, n: int) -> int:
    if not 0 <= n <= S.N:
        raise SeriesError(f"index {n} outside 0..{S.N}")
    return sum(S.coeffs[n])


def coarsen(S: ResidueClassSeries, b_new: int) -> ResidueClassSeries:
    """Merge residue classes modulo a divisor ``b_new`` of ``S.b``."""
    if b_new < 1 or S.b % b_new:
        raise SeriesError(f"{b_new} does not divide {S.b}")
    arr = _zeros(S.N, b_new)
    for r in range(S.b):
        arr[:, r % b_new] += S.coeffs[:, r]
    return ResidueClassSeries(arr)
