"""Special functions used by the asymptotic main terms.

Gamma, digamma, Hurwitz zeta and the polylogarithm come from scipy/mpmath;
the Bernoulli machinery and zeta'(-1) are computed here.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from scipy import special as _sp

EULER_GAMMA = 0.57721566490153286061
ZETA3 = 1.2020569031595942854

BERNOULLI_LIMIT = 60


def gamma_real(x: float) -> float:
    if x <= 0:
        raise ValueError(f"gamma_real needs x > 0, got {x}")
    return math.gamma(x)


def digamma(x: float) -> float:
    if x <= 0:
        raise ValueError(f"digamma needs x > 0, got {x}")
    return float(_sp.psi(x))


def hurwitz_zeta(s: float, a: float) -> float:
    """sum_{n>=0} (n + a)**-s for real s > 1 and a > 0."""
    if a <= 0:
        raise ValueError(f"hurwitz_zeta needs a > 0, got {a}")
    if s <= 1:
        raise ValueError(f"hurwitz_zeta needs s > 1, got {s}")
    return float(_sp.zeta(s, a))


def polylog(s: int, w: complex) -> complex:
    w = complex(w)
    if abs(w) > 1 + 1e-15:
        raise ValueError(f"polylog only on the closed unit disc, |w| = {abs(w)}")
    if s <= 2 and w == 1:
        raise ValueError("Li_s(1) diverges or is a constant for s <= 2; use zeta(s) directly")
    return complex(mpmath.polylog(s, w))


def lerch_phi_2_1(w: complex) -> complex:
    """Phi(w, 2, 1) = sum_{n>=0} w**n / (n + 1)**2 = Li_2(w) / w."""
    w = complex(w)
    if w == 0:
        return 1.0 + 0j
    return polylog(2, w) / w


@lru_cache(maxsize=None)
def _bernoulli_table(K: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for n in range(1, K + 1):
        acc = sum(math.comb(n + 1, k) * B[k] for k in range(n))
        B.append(-acc / (n + 1))
    return tuple(B)


def bernoulli_numbers(K: int) -> list[Fraction]:
    """B_0..B_K with the B_1 = -1/2 convention."""
    if not 0 <= K <= BERNOULLI_LIMIT:
        raise ValueError(f"Bernoulli table limited to 0..{BERNOULLI_LIMIT}")
    return list(_bernoulli_table(K))


def bernoulli_poly(n: int, x: float | Fraction):
    B = _bernoulli_table(n)
    if isinstance(x, Fraction):
        return sum(math.comb(n, k) * B[k] * x ** (n - k) for k in range(n + 1))
    return math.fsum(math.comb(n, k) * float(B[k]) * x ** (n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def log_glaisher() -> float:
    """log of the Glaisher-Kinkelin constant from an Euler-Maclaurin corrected partial sum.

    sum_{k<=n} k log k = (n^2/2 + n/2 + 1/12) log n - n^2/4 + log A
                         - sum_{j>=2} B_{2j} n^(2-2j) / ((2j)(2j-1)(2j-2))
    """
    n = 20
    B = _bernoulli_table(16)
    partial = math.fsum(k * math.log(k) for k in range(2, n + 1))
    main = (n * n / 2 + n / 2 + 1 / 12) * math.log(n) - n * n / 4
    tail = math.fsum(
        float(B[2 * j]) * n ** (2 - 2 * j) / ((2 * j) * (2 * j - 1) * (2 * j - 2)) for j in range(2, 8)
    )
    return partial - main + tail


def zeta_prime_minus1() -> float:
    return 1 / 12 - log_glaisher()


def principal_log(w: complex) -> complex:
    return cmath.log(w)
