"""Wright circle method evaluator, cusp expansions and numeric probes.

Conventions: ``q = exp(-z)`` with ``Re z > 0``; a generating function whose
cusp behaviour is ``z**B exp(A/z) sum_j alpha_j z**j`` has coefficients

    c(n) ~ n**((-2B - 3)/4) exp(2 sqrt(A n)) sum_r p_r n**(-r/2),
    p_r  = sum_{j<=r} alpha_j c_{j, r-j}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from . import special as sf
from .families import Family, FamilySpec, equidist_factor

PI = math.pi
PRODUCT_CAP = 2_000_000


class UnsupportedFamilyError(ValueError):
    pass


class ConeError(ValueError):
    """Evaluation point outside the region an expansion or bound is stated for."""


class TailError(ValueError):
    """Truncated product cannot reach the requested tail accuracy."""


# --- Wright circle method -------------------------------------------------


@dataclass(frozen=True)
class WrightParams:
    A: float
    B: float
    alphas: tuple[complex, ...]
    equidist_factor: float = 1.0
    kappa: float | None = None
    M: float = 1.0

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A}")
        if not self.alphas:
            raise ValueError("need at least alpha_0")


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    value: float
    terms: int


def _gamma_ratio(x: float, r: int) -> float:
    # Gamma(x + r) / Gamma(x - r) as a product, finite at the poles of Gamma(x - r)
    out = 1.0
    for i in range(2 * r):
        out *= x - r + i
    return out


def wright_coeff(j: int, r: int, A: float, B: float) -> float:
    x = j + B + 1.5
    return (
        (-1 / (4 * math.sqrt(A))) ** r
        * math.sqrt(A) ** (j + B + 0.5)
        / (2 * math.sqrt(PI))
        * _gamma_ratio(x, r)
        / math.factorial(r)
    )


def wright_p(r: int, params: WrightParams) -> complex:
    if r >= len(params.alphas):
        raise ValueError(f"p_{r} needs alpha_0..alpha_{r}; only {len(params.alphas)} available")
    return sum(params.alphas[j] * wright_coeff(j, r - j, params.A, params.B) for j in range(r + 1))


def wright_main(params: WrightParams, n: int, R: int = 1) -> AsymptoticEstimate:
    if R < 1 or R > len(params.alphas):
        raise ValueError(f"R={R} exceeds the {len(params.alphas)} available alpha coefficients")
    if params.equidist_factor == 0:
        return AsymptoticEstimate(n, 0.0, R)
    series = sum(wright_p(r, params) * n ** (-r / 2) for r in range(R))
    value = (
        params.equidist_factor
        * n ** ((-2 * params.B - 3) / 4)
        * math.exp(2 * math.sqrt(params.A * n))
        * series
    )
    return AsymptoticEstimate(n, float(np.real(value)), R)


def hardy_ramanujan(n: int) -> float:
    return math.exp(PI * math.sqrt(2 * n / 3)) / (4 * math.sqrt(3) * n)


# rational power series in z, truncated to K terms


def _smul(a: list[Fraction], b: list[Fraction], K: int) -> list[Fraction]:
    out = [Fraction(0)] * K
    for i, x in enumerate(a[:K]):
        if x:
            for j, y in enumerate(b[: K - i]):
                out[i + j] += x * y
    return out


def _exp_series(c: Fraction, K: int) -> list[Fraction]:
    return [c**n / math.factorial(n) for n in range(K)]


def _g_series(k: int, K: int) -> list[Fraction]:
    # w / (1 - exp(-w)) at w = k z
    B = sf.bernoulli_numbers(max(K, 1))
    return [(-1) ** n * B[n] * Fraction(k) ** n / math.factorial(n) for n in range(K)]


def _cusp_data(family: Family, m: int | None, K: int) -> tuple[float, float, float, list[Fraction]]:
    """(A, B, constant, rational series) with alpha_j = constant * series[j]."""
    eta = _exp_series(Fraction(-1, 24), K)  # (q;q)^-1 = sqrt(z/2pi) exp(pi^2/6z - z/24)
    inv_sqrt_2pi = 1 / math.sqrt(2 * PI)
    if family in (Family.RANK, Family.CRANK, Family.GOETTSCHE_CELLS):
        return PI**2 / 6, 0.5, inv_sqrt_2pi, eta
    if family is Family.RESIDUAL_CRANK:
        return PI**2 / 4, 0.5, 1 / (2 * math.sqrt(PI)), [Fraction(1)] + [Fraction(0)] * (K - 1)
    if family is Family.BETTI_X4:
        series = eta
        for j in range(1, m + 1):
            series = _smul(series, _g_series(j, K), K)
        return PI**2 / 6, 0.5 - m, inv_sqrt_2pi / math.factorial(m), series
    # 1/((1 - e^-z)(1 - e^-2z)) = z^-2 g(z) g(2z) / 2
    series = _smul(_smul(eta, _g_series(1, K), K), _g_series(2, K), K)
    if family is Family.BETTI_X1:
        prefix = [Fraction(1)] + [Fraction(0)] * (K - 1)  # (1 + 1) / 2
    elif family is Family.BETTI_X2:
        # (2 - e^-z) / 2
        prefix = [Fraction(1, 2) - e / 2 for e in _exp_series(Fraction(-1), K)]
        prefix[0] = Fraction(1, 2)
    else:
        prefix = [Fraction(1, 2)] + [Fraction(0)] * (K - 1)
    return PI**2 / 6, -1.5, inv_sqrt_2pi, _smul(series, prefix, K)


def family_wright_params(spec: FamilySpec, a: int, terms: int = 4) -> WrightParams:
    if spec.family is Family.PP_TRACE:
        raise UnsupportedFamilyError(
            "pp-trace has an exp(A/z^2) cusp, outside the exp(A/z) circle-method template; use pp_asymptotic"
        )
    if not 0 <= a < spec.b:
        raise ValueError(f"residue {a} outside 0..{spec.b - 1}")
    A, B, const, series = _cusp_data(spec.family, spec.m, terms)
    alphas = tuple(const * float(s) for s in series)
    return WrightParams(A=A, B=B, alphas=alphas, equidist_factor=float(equidist_factor(spec.family, a, spec.b)))


def pp_asymptotic(n: int, variant: str = "classical") -> float:
    """Wright's plane-partition main term; ``variant`` picks the zeta(3) exponent 7/36 or 7/56."""
    if n < 1:
        raise ValueError("n must be >= 1")
    exps = {"classical": 7 / 36, "printed": 7 / 56, "as_printed": 7 / 56}
    if variant not in exps:
        raise ValueError(f"variant must be one of {sorted(exps)}")
    h = n / 2
    return (
        sf.ZETA3 ** exps[variant]
        / math.sqrt(12 * PI)
        * h ** (-25 / 36)
        * math.exp(3 * sf.ZETA3 ** (1 / 3) * h ** (2 / 3) + sf.zeta_prime_minus1())
    )


# --- Euler-Maclaurin for the plane-partition log ---------------------------


def em_function(u):
    """F(u) = exp(-u) / (u (1 - exp(-u))**2), i.e. -B'(u)/u."""
    e = np.exp(-u)
    return e / (u * (1 - e) ** 2)


def em_coefficient(n: int) -> Fraction:
    """Laurent coefficient c_n of F at 0, n >= -3."""
    if n < -3:
        raise ValueError("F has a pole of order 3")
    B = sf.bernoulli_numbers(n + 3)
    return -(n + 2) * B[n + 3] / math.factorial(n + 3)


def _near_zero_integrand_coeffs(order: int = 30) -> list[float]:
    # integrand near 0 as a power series: sum_n c_n u^n + (exp(-u) - 1)/(12 u)
    out = [float(em_coefficient(n)) for n in range(order)]
    for k in range(1, order + 1):
        out[k - 1] += (-1) ** k / (12 * math.factorial(k))
    return out


@lru_cache(maxsize=None)
def i_star(method: str = "mpmath") -> float:
    """Regularised integral of F(u) - u^-3 + exp(-u)/(12u) over (0, inf).

    Close to 0 the three pieces cancel to ~u^-3 relative precision, so [0, cut]
    is handled through the Laurent expansion of the integrand instead.
    """
    cut = 0.5
    coeffs = _near_zero_integrand_coeffs()
    if method == "mpmath":
        near = math.fsum(c * cut ** (n + 1) / (n + 1) for n, c in enumerate(coeffs))
        with mpmath.workdps(30):
            f = lambda u: mpmath.exp(-u) / (u * (1 - mpmath.exp(-u)) ** 2) - u**-3 + mpmath.exp(-u) / (12 * u)
            far = mpmath.quad(f, [cut, 2, 10, 40, mpmath.inf])
        return near + float(far)
    if method == "scipy":
        poly = np.polynomial.Polynomial(coeffs)

        def far(u):
            return float(em_function(u)) - u**-3 + math.exp(-u) / (12 * u)

        lo, _ = integrate.quad(poly, 0, cut, epsabs=1e-14, epsrel=1e-13)
        mid, _ = integrate.quad(far, cut, 40, epsabs=1e-14, epsrel=1e-13, limit=200)
        hi, _ = integrate.quad(far, 40, np.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
        return lo + mid + hi
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class EMExpansion:
    j: int
    b: int
    K: int
    I_star: float
    coefficients: dict = field(default_factory=dict)

    @classmethod
    def build(cls, j: int, b: int, K: int) -> "EMExpansion":
        return cls(j, b, K, i_star(), {n: em_coefficient(n) for n in range(-3, K)})


def _cone_check(z: complex, theta: float):
    if z.real <= 0:
        raise ConeError(f"need Re z > 0, got {z}")
    if abs(cmath.phase(z)) > theta:
        raise ConeError(f"|arg z| = {abs(cmath.phase(z)):.4f} exceeds cone angle {theta}")


def em_fsum(j: int, b: int, z: complex, K: int, theta: float = 1.3) -> complex:
    """Asymptotic expansion of sum_{m>=0} F((m + j/b) b z) through (bz)**(K-1)."""
    z = complex(z)
    _cone_check(z, theta)
    if not 1 <= j <= b:
        raise ValueError(f"need 1 <= j <= b, got j={j}, b={b}")
    if not 0 <= K <= 20:
        raise ValueError("K must lie in 0..20")
    a = j / b
    w = b * z
    head = (
        sf.hurwitz_zeta(3, a) / w**3
        + i_star() / w
        + (cmath.log(w) + sf.digamma(a) + sf.EULER_GAMMA) / (12 * w)
    )
    tail = 0j
    for n in range(K):
        c = em_coefficient(n)
        if c:
            tail += float(c) * sf.bernoulli_poly(n + 1, a) / (n + 1) * w**n
    return head - tail


def fsum_direct(j: int, b: int, z: complex, cap: int = 5_000_000) -> complex:
    z = complex(z)
    if z.real <= 0:
        raise ConeError(f"need Re z > 0, got {z}")
    w = b * z
    # |F(u)| ~ exp(-Re u)/|u|; stop once exp(-Re u) is below 1e-40
    count = int(math.ceil(95 / w.real)) + 10
    if count > cap:
        raise TailError(f"direct sum would need {count} terms (cap {cap}); Re z too small")
    m = np.arange(count, dtype=float)
    terms = em_function((m + j / b) * w)
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))


# --- truncated products and major-arc main terms ---------------------------


def _terms_needed(x: float, weight: float = 1.0, tol: float = 1e-17) -> int:
    # smallest n0 with weight * n * exp(-n x) / (1 - exp(-x)) < tol for n >= n0
    if x <= 0:
        raise ConeError("need Re z > 0")
    n = max(1, int((math.log(weight / tol) + math.log(1 / x) + 2) / x))
    while weight * n * math.exp(-n * x) / -math.expm1(-x) > tol:
        n = int(n * 1.2) + 1
    if n > PRODUCT_CAP:
        raise TailError(f"product needs {n} factors at Re z = {x} (cap {PRODUCT_CAP})")
    return n


def log_qprod(coef_exponents, z: complex, powers=None) -> complex:
    """sum_n s_n Log(1 - w_n q**n) for n = 1..len; coefficients w_n given as an array."""
    z = complex(z)
    w = np.asarray(coef_exponents, dtype=complex)
    n = np.arange(1, len(w) + 1)
    terms = np.log1p(-w * np.exp(-n * z))
    if powers is not None:
        terms = terms * powers
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))


def log_f1(w: complex, z: complex) -> complex:
    n = _terms_needed(complex(z).real)
    return log_qprod(np.full(n, complex(w)), z)


def log_f3(w: complex, z: complex) -> complex:
    n = _terms_needed(complex(z).real)
    k = np.arange(n)
    return log_qprod(complex(w) ** k, z)


def log_euler(z: complex, step: int = 1) -> complex:
    """Log (q**step; q**step)_inf."""
    z = complex(z) * step
    return log_f1(1.0, z)


def _check_root(w: complex):
    if abs(w - 1) < 1e-12:
        raise ValueError("main term is only stated for roots of unity w != 1")


def f1_major(w: complex, z: complex) -> complex:
    w = complex(w)
    _check_root(w)
    return (1 - w) ** -0.5 * cmath.exp(-w * sf.lerch_phi_2_1(w) / complex(z))


def f3_major(w: complex, b: int, z: complex) -> complex:
    w = complex(w)
    z = complex(z)
    _check_root(w)
    pref = math.sqrt(2 * PI) * (b * b * z) ** (0.5 - 1 / b) / sf.gamma_real(1 / b)
    for j in range(1, b):
        pref *= (1 - w**j) ** (-j / b)
    return pref * cmath.exp(-(PI**2) / (6 * b * b * z))


def eta_transform_residual(z: complex) -> float:
    """|(q;q) - (2pi/z)^(1/2) exp(pi/12 (z/2pi - 2pi/z)) (q';q')| with q = e^-z, q' = e^(-4pi^2/z)."""
    z = complex(z)
    if z.real <= 0:
        raise ConeError("need Re z > 0")
    s = 2 * PI / z
    lhs = cmath.exp(log_euler(z))
    rhs = cmath.sqrt(s) * cmath.exp(PI / 12 * (z / (2 * PI) - s)) * cmath.exp(log_euler(2 * PI * s))
    return abs(lhs - rhs)


def minor_arc_bound_probe(z: complex, M: float) -> tuple[float, float]:
    """(|P(e^-z)|, sqrt(v) exp[(pi/12 - (1 - 1/sqrt(1+M^2))/(2pi))/v]) with v = Re z / 2pi.

    The bound is stated in the upper-half-plane variable tau = i z / 2pi, so the
    cone M v <= |u| is M x <= |y|; the implied absolute constant is not included.
    """
    z = complex(z)
    x, y = z.real, z.imag
    if x <= 0:
        raise ConeError("need Re z > 0")
    if not (M * x <= abs(y) < PI):
        raise ConeError(f"z = {z} is not on the minor arc M x <= |y| < pi for M = {M}")
    lhs = math.exp(-log_euler(z).real)
    v = x / (2 * PI)
    gap = (1 - 1 / math.sqrt(1 + M * M)) / (2 * PI)
    rhs = math.sqrt(v) * math.exp((PI / 12 - gap) / v)
    return lhs, rhs


def crank_phi(j: int, b: int) -> tuple[complex, complex]:
    """(zeta Phi(zeta,2,1), zeta^-1 Phi(zeta^-1,2,1)) for zeta = exp(2 pi i j / b)."""
    w = cmath.exp(2j * PI * j / b)
    return w * sf.lerch_phi_2_1(w), w.conjugate() * sf.lerch_phi_2_1(w.conjugate())


# --- numeric generating functions H(w; e^-z) ------------------------------


def _log_rank(w: complex, z: complex) -> complex:
    x = z.real
    n = _terms_needed(x)
    idx = np.arange(1, n + 1)
    qn = np.exp(-idx * z)
    cum = np.cumsum(np.log1p(-w * qn) + np.log1p(-qn / w))
    logs = [0j]
    k = 1
    best = 0.0
    while k <= n:
        t = -k * k * z - cum[k - 1]
        logs.append(t)
        best = max(best, t.real)
        if k * k * x > 60 and t.real < best - 60:
            break
        k += 1
    logs = np.array(logs)
    shift = logs.real.max()
    return shift + cmath.log(np.sum(np.exp(logs - shift)))


def log_generating_function(family: Family, w: complex, z: complex, m: int | None = None) -> complex:
    """A logarithm of H(w; e^-z) for the family's bivariate generating function."""
    w = complex(w)
    z = complex(z)
    if z.real <= 0:
        raise ConeError("need Re z > 0")
    if family is Family.RANK:
        return _log_rank(w, z)
    if family is Family.CRANK:
        return log_euler(z) - log_f1(w, z) - log_f1(1 / w, z)
    if family is Family.RESIDUAL_CRANK:
        return log_euler(z, 2) - log_f1(w, z) - log_f1(1 / w, z)
    if family is Family.PP_TRACE:
        n = _terms_needed(z.real, weight=_terms_needed(z.real))
        return -log_qprod(np.full(n, w), z, powers=np.arange(1, n + 1))
    if family is Family.GOETTSCHE_CELLS:
        return -log_f3(w, z)
    w2 = w * w
    base = -log_f3(w2, z)
    q = cmath.exp(-z)
    if family is Family.BETTI_X4:
        for j in range(1, m + 1):
            base -= cmath.log(1 - w2**j * q**j)
        return base
    base -= cmath.log(1 - w2 * q) + cmath.log(1 - w2 * w2 * q * q)
    if family is Family.BETTI_X1:
        return base + _safe_log(1 + w2)
    if family is Family.BETTI_X2:
        return base + _safe_log(1 + w2 - w2 * q)
    return base


def _safe_log(v: complex) -> complex:
    # the X1 prefactor 1 + w^2 vanishes at w^2 = -1
    if abs(v) < 1e-300:
        return complex(-math.inf, 0.0)
    return cmath.log(v)
