"""Runnable versions of the equidistribution, convexity and log-concavity claims."""

from __future__ import annotations

import cmath
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import asymptotics as asy
from .families import Family, FamilySpec, equidist_factor
from .oracles import euler_transform
from .series import ResidueClassSeries, family_series


_SERIES_CACHE: dict[FamilySpec, ResidueClassSeries] = {}
_CACHE_LOCK = threading.Lock()


def series_for(spec: FamilySpec, N: int) -> ResidueClassSeries:
    """Family series truncated at N; reuses a longer cached expansion when one exists."""
    with _CACHE_LOCK:
        S = _SERIES_CACHE.get(spec)
        if S is None or S.N < N:
            S = family_series(spec, N)
            _SERIES_CACHE[spec] = S
    if S.N == N:
        return S
    return ResidueClassSeries(S.coeffs[: N + 1])


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class EquidistRow:
    n: int
    counts: tuple[int, ...]
    total: int
    deviation: Fraction | None

    def to_dict(self):
        return {
            "n": self.n,
            "counts": list(self.counts),
            "total": self.total,
            "deviation": None if self.deviation is None else _fmt(self.deviation),
        }


@dataclass
class EquidistReport:
    spec: FamilySpec
    rows: list[EquidistRow]

    def deviation(self, n: int) -> Fraction | None:
        return self.rows[n].deviation


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _deviation(spec: FamilySpec, counts: Sequence[int], total: int) -> Fraction | None:
    if total == 0:
        return None
    worst = Fraction(0)
    for a, c in enumerate(counts):
        d = equidist_factor(spec.family, a, spec.b)
        if d == 0:
            continue  # identically vanishing Betti class
        worst = max(worst, abs(Fraction(c) / (d * total) - 1))
    return worst


def equidist_table(spec: FamilySpec, N: int) -> EquidistReport:
    S = series_for(spec, N)
    rows = []
    for n in range(N + 1):
        counts = tuple(S.coeffs[n])
        total = sum(counts)
        rows.append(EquidistRow(n, counts, total, _deviation(spec, counts, total)))
    return EquidistReport(spec, rows)


@dataclass
class ScanResult:
    kind: str
    window: tuple[int, int]
    violations: list[tuple[int, ...]] = field(default_factory=list)
    threshold: int | None = None
    checked: int = 0

    def to_dict(self):
        return {
            "kind": self.kind,
            "window": list(self.window),
            "checked": self.checked,
            "violations": [list(v) for v in self.violations],
            "threshold": self.threshold,
        }


def convexity_scan(spec: FamilySpec, a: int, window: tuple[int, int], workers: int = 1) -> ScanResult:
    """Check c(n1) c(n2) > c(n1 + n2) for n_min <= n1 <= n2, n1 + n2 <= n_max."""
    n_min, n_max = window
    result = ScanResult("convexity", (n_min, n_max))
    if n_min > n_max or 2 * n_min > n_max:
        return result
    S = series_for(spec, n_max)
    c = [S.coeffs[n, a] for n in range(n_max + 1)]

    def scan_row(n1):
        bad = [(n1, n2) for n2 in range(n1, n_max - n1 + 1) if not c[n1] * c[n2] > c[n1 + n2]]
        return bad, n_max - 2 * n1 + 1

    for bad, count in _map(scan_row, range(n_min, n_max // 2 + 1), workers):
        result.violations.extend(bad)
        result.checked += count
    result.threshold = max((v[0] for v in result.violations), default=n_min - 1) + 1
    if result.threshold > n_max // 2:
        result.threshold = None
    return result


def logconcavity_scan(spec: FamilySpec, a: int, window: tuple[int, int], workers: int = 1) -> ScanResult:
    """Check c(n)^2 >= c(n-1) c(n+1) for n_min <= n <= n_max."""
    n_min, n_max = window
    result = ScanResult("log-concavity", (n_min, n_max))
    if n_min > n_max:
        return result
    n_min = max(n_min, 1)
    S = series_for(spec, n_max + 1)
    c = [S.coeffs[n, a] for n in range(n_max + 2)]
    chunks = [range(lo, min(lo + 64, n_max + 1)) for lo in range(n_min, n_max + 1, 64)]

    def scan_chunk(ns):
        return [(n,) for n in ns if not c[n] * c[n] >= c[n - 1] * c[n + 1]]

    for bad in _map(scan_chunk, chunks, workers):
        result.violations.extend(bad)
    result.checked = n_max - n_min + 1
    result.threshold = max((v[0] for v in result.violations), default=n_min - 1) + 1
    if result.threshold > n_max:
        result.threshold = None
    return result


@dataclass
class AsymRow:
    n: int
    exact: int
    estimate: float
    ratio: float | None

    def to_dict(self):
        return {
            "n": self.n,
            "exact": self.exact,
            "estimate": _fmt(self.estimate),
            "ratio": None if self.ratio is None else _fmt(self.ratio),
        }


def _ratio(exact: int, estimate: float) -> float | None:
    if estimate == 0:
        return None
    # exact may be far beyond float range; divide via logs
    return math.exp(math.log(exact) - math.log(estimate)) if exact > 0 else 0.0


def asym_vs_exact(
    spec: FamilySpec, a: int, ns: Sequence[int], R: int = 1, variant: str = "classical"
) -> list[AsymRow]:
    ns = sorted(ns)
    S = series_for(spec, ns[-1])
    rows = []
    if spec.family is Family.PP_TRACE:
        for n in ns:
            est = asy.pp_asymptotic(n, variant) / spec.b
            exact = S.coeffs[n, a]
            rows.append(AsymRow(n, exact, est, _ratio(exact, est)))
        return rows
    params = asy.family_wright_params(spec, a, terms=max(R, 1))
    for n in ns:
        est = asy.wright_main(params, n, R).value
        exact = S.coeffs[n, a]
        rows.append(AsymRow(n, exact, est, _ratio(exact, est)))
    return rows


def pp_variant_support(ns: Sequence[int] = (250, 500, 1000, 2000)) -> dict:
    """Which zeta(3) exponent in Wright's pp(n) formula the exact counts support.

    Ratios exact/main-term are extrapolated to n = inf assuming the leading
    correction decays like n^(-2/3) (the next term of the saddle expansion).
    """
    ns = sorted(ns)
    pp = euler_transform(lambda k: k, ns[-1])
    out = {"ns": list(ns)}
    for variant in ("classical", "printed"):
        ratios = [_ratio(pp[n], asy.pp_asymptotic(n, variant)) for n in ns]
        n1, n2 = ns[-2], ns[-1]
        r1, r2 = ratios[-2], ratios[-1]
        w1, w2 = n1 ** (-2 / 3), n2 ** (-2 / 3)
        limit = (r2 * w1 - r1 * w2) / (w1 - w2)
        out[variant] = {"ratios": ratios, "extrapolated_limit": limit}
    out["supported"] = min(("classical", "printed"), key=lambda v: abs(out[v]["extrapolated_limit"] - 1))
    return out


@dataclass
class ArcRow:
    x: float
    y: float
    arc: str
    j: int
    log_ratio: float
    log_ratio_to_peak: float

    def to_dict(self):
        d = asdict(self)
        for k in ("x", "y", "log_ratio", "log_ratio_to_peak"):
            v = d[k]
            d[k] = None if math.isinf(v) else _fmt(v)
        return d


def arc_points(x: float, M: float) -> list[tuple[str, float]]:
    return [("major", 0.0), ("major", M * x / 2), ("minor", 2 * M * x), ("minor", 0.95 * math.pi)]


def arc_dominance_probe(
    spec: FamilySpec, xs: Sequence[float], M: float = 1.0, theta: float | None = None, workers: int = 1
) -> list[ArcRow]:
    """log |H(zeta_b^j; e^-z)| - log |H(1; e^-z)| on major and minor arc samples.

    ``log_ratio_to_peak`` compares against H(1; e^-x), the size of the
    generating function at the centre of the major arc.
    """
    if theta is None:
        theta = math.atan(M)
    fam, b = spec.family, spec.b

    def one_x(x):
        rows = []
        peak = asy.log_generating_function(fam, 1.0, x, spec.m).real
        for arc, y in arc_points(x, M):
            z = complex(x, y)
            if arc == "major" and abs(cmath.phase(z)) > theta + 1e-12:
                continue
            base = asy.log_generating_function(fam, 1.0, z, spec.m).real
            for j in range(b):
                w = cmath.exp(2j * math.pi * j / b)
                val = base if j == 0 else asy.log_generating_function(fam, w, z, spec.m).real
                rows.append(ArcRow(x, y, arc, j, val - base, val - peak))
        return rows

    out = []
    for rows in _map(one_x, xs, workers):
        out.extend(rows)
    return out


@dataclass
class IdentityCheck:
    name: str
    params: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {
            "name": self.name,
            "params": self.params,
            "value": format(self.value, ".6e"),
            "tolerance": format(self.tolerance, ".1e"),
            "passed": self.passed,
        }


EM_LADDER = (0.2, 0.1, 0.05)
EM_CASES = ((1, 2, 2), (1, 2, 4), (1, 3, 4), (2, 5, 4), (3, 3, 4))


def em_ladder_errors(j: int, b: int, K: int, xs=EM_LADDER, direction: complex = 1 + 0.5j) -> list[float]:
    """|em_fsum - fsum_direct| along z = x * direction."""
    return [abs(asy.em_fsum(j, b, x * direction, K) - asy.fsum_direct(j, b, x * direction)) for x in xs]


def identity_suite(max_modulus: int = 12, tol: float = 1e-10) -> list[IdentityCheck]:
    from . import special as sf

    checks: list[IdentityCheck] = []

    def add(name, params, value, tolerance=tol):
        checks.append(IdentityCheck(name, params, float(value), tolerance, bool(value <= tolerance)))

    for b in range(2, max_modulus + 1):
        for a in range(1, b):
            w = cmath.exp(2j * math.pi * a / b)
            roots = [w**j for j in range(1, b + 1)]
            dig = sum(r * sf.digamma(j / b) for j, r in enumerate(roots, 1))
            add("digamma-root-sum", f"b={b},a={a}", abs(dig - b * cmath.log(1 - w)))
            hz = [r * sf.hurwitz_zeta(3, j / b) for j, r in enumerate(roots, 1)]
            li3 = b**3 * sf.polylog(3, w)
            add("polylog-root-sum", f"b={b},a={a}", abs(sum(hz) - li3))
            # the j <= b-1 form misses exactly the j = b term, zeta(3)
            add("polylog-as-printed-gap", f"b={b},a={a}", abs(abs(sum(hz[:-1]) - li3) - sf.ZETA3))
            phi, phi_c = asy.crank_phi(a, b)
            closed = math.pi**2 / 6 - math.pi**2 * (a / b) * (1 - a / b)
            add("crank-phi1-closed-form", f"b={b},j={a}", abs(phi.real - closed))
            add("crank-phi1-conjugate", f"b={b},j={a}", abs(phi.real - phi_c.real))
            add("crank-phi2-cancel", f"b={b},j={a}", abs(phi.imag + phi_c.imag))

    for z in (1.0, 0.5 + 0.3j, 2 * math.pi):
        r = asy.eta_transform_residual(z)
        add("eta-transformation", f"z={z}", r, 0.0 if z == 2 * math.pi else tol)

    for j, b, K in EM_CASES:
        errs = em_ladder_errors(j, b, K)
        C = errs[0] / EM_LADDER[0] ** K
        worst = 0.0
        for x, e in zip(EM_LADDER, errs):
            floor = 1e-14 * abs(asy.fsum_direct(j, b, x * (1 + 0.5j)))
            worst = max(worst, e - (C * x**K + floor))
        add("euler-maclaurin-vs-direct", f"j={j},b={b},K={K}", max(worst, 0.0), 0.0)
    return checks
