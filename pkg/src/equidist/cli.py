"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 capacity or
enumeration-guard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import asymptotics as asy
from . import experiments as ex
from . import oracles
from .families import FAMILY_NAMES, Family, FamilyError, FamilySpec
from .series import MAX_LIMIT, CapacityError, SeriesError

SCHEMA_VERSION = 1
THREADS_ENV = "EQUIDIST_THREADS"
DEFAULT_LIMIT = 500

ORACLE_FAMILIES = {
    Family.RANK: 30,
    Family.CRANK: 30,
    Family.PP_TRACE: 20,
    Family.RESIDUAL_CRANK: 30,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: Family | None = None
    modulus: int | None = None
    residue: int = 0
    limit: int | None = None
    m: int | None = None
    samples: list = field(default_factory=list)
    terms: int = 1
    tolerance: float = 1e-10
    fmt: str = "csv"
    output: str | None = None
    threads: int = 1
    guard: int | None = None
    variant: str = "classical"
    kind: str = "convexity"
    window: tuple[int, int] = (50, 400)
    slope: float = 1.0

    def spec(self) -> FamilySpec:
        if self.family is None:
            raise UsageError("--family is required")
        if self.modulus is None:
            raise UsageError("--modulus is required")
        try:
            return FamilySpec(self.family, self.modulus, self.m)
        except FamilyError as exc:
            raise UsageError(str(exc)) from None

    def public(self) -> dict:
        # echoed into JSON output; thread count and output path deliberately excluded
        out = {
            "family": self.family.value if self.family else None,
            "modulus": self.modulus,
            "residue": self.residue,
            "limit": self.limit,
            "m": self.m,
        }
        if self.command in ("asym", "arcs"):
            out["samples"] = [str(s) for s in self.samples]
        if self.command == "asym":
            out.update(terms=self.terms, variant=self.variant)
        if self.command == "scan":
            out.update(kind=self.kind, window=list(self.window))
        if self.command == "identities":
            out.update(tolerance=self.tolerance)
        if self.command == "arcs":
            out.update(slope=self.slope)
        return out


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _window(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("window is n_min,n_max")
    return vals[0], vals[1]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equidist",
        description="Exact expansions and asymptotics for partition statistics on arithmetic progressions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True, residue=False, limit=True):
        if family:
            p.add_argument("--family", choices=FAMILY_NAMES, help="generating-function family")
            p.add_argument("--m", type=int, help="parameter m for betti-x4")
        p.add_argument("--modulus", "-b", type=int, help="modulus b >= 2 (no default)")
        if residue:
            p.add_argument("--residue", "-a", type=int, default=0)
        if limit:
            p.add_argument("--limit", "-N", type=int, help=f"truncation N (default {DEFAULT_LIMIT})")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="write here instead of stdout")
        p.add_argument("--threads", type=int, help=f"worker threads (env {THREADS_ENV})")

    p = sub.add_parser("expand", help="coefficient table n,r0..r{b-1},total")
    common(p)
    p = sub.add_parser("table", help="equidistribution deviation table")
    common(p)
    p = sub.add_parser("oracle", help="series engine vs brute-force enumeration")
    common(p)
    p.add_argument("--guard", type=int, help="override the enumeration guard")
    p = sub.add_parser("asym", help="exact coefficients vs asymptotic main term")
    common(p, residue=True, limit=False)
    p.add_argument("--samples", type=_int_list, default=[500, 1000, 2000])
    p.add_argument("--terms", "-R", type=int, default=1)
    p.add_argument("--variant", choices=("classical", "printed"), default="classical")
    p = sub.add_parser("scan", help="convexity / log-concavity scan")
    common(p, residue=True, limit=False)
    p.add_argument("--kind", choices=("convexity", "log-concavity"), default="convexity")
    p.add_argument("--window", type=_window, default=(50, 400))
    p = sub.add_parser("identities", help="numeric identity suite")
    common(p, family=False, limit=False)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p = sub.add_parser("arcs", help="major/minor arc dominance probe")
    common(p, limit=False)
    p.add_argument("--samples", type=_float_list, default=[0.1, 0.05, 0.025])
    p.add_argument("--slope", "-M", type=float, default=1.0)
    return parser


def config_from_args(args) -> RunConfig:
    env_threads = os.environ.get(THREADS_ENV)
    threads = args.threads
    if threads is None:
        try:
            threads = int(env_threads) if env_threads else 1
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env_threads!r}") from None
    if threads < 1:
        raise UsageError("thread count must be >= 1")
    cfg = RunConfig(command=args.command, fmt=args.fmt, output=args.output, threads=threads)
    if getattr(args, "family", None):
        cfg.family = Family(args.family)
    cfg.m = getattr(args, "m", None)
    cfg.modulus = args.modulus
    if cfg.modulus is not None and cfg.modulus < 2:
        raise UsageError(f"modulus must be >= 2, got {cfg.modulus}")
    for name in ("residue", "limit", "samples", "terms", "variant", "kind", "window", "tolerance", "guard", "slope"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if cfg.modulus is not None and not 0 <= cfg.residue < cfg.modulus:
        raise UsageError(f"residue must lie in 0..{cfg.modulus - 1}")
    if cfg.limit is not None and cfg.limit < 0:
        raise UsageError("limit must be >= 0")
    if cfg.limit is not None and cfg.limit > MAX_LIMIT:
        raise CapacityError(f"limit {cfg.limit} exceeds engine capacity {MAX_LIMIT}")
    return cfg


# --- output ----------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(cfg: RunConfig, results) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.public(), "results": results}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands --------------------------------------------------------------


def cmd_expand(cfg: RunConfig) -> int:
    spec = cfg.spec()
    S = ex.series_for(spec, DEFAULT_LIMIT if cfg.limit is None else cfg.limit)
    if cfg.fmt == "csv":
        _emit(cfg, S.to_csv())
    else:
        rows = [{"n": n, "residues": list(S.coeffs[n]), "total": sum(S.coeffs[n])} for n in range(S.N + 1)]
        _emit(cfg, _json(cfg, rows))
    return 0


def cmd_table(cfg: RunConfig) -> int:
    spec = cfg.spec()
    rep = ex.equidist_table(spec, DEFAULT_LIMIT if cfg.limit is None else cfg.limit)
    if cfg.fmt == "csv":
        header = ["n", *(f"r{r}" for r in range(spec.b)), "total", "deviation"]
        rows = [[r.n, *r.counts, r.total, r.to_dict()["deviation"] or ""] for r in rep.rows]
        _emit(cfg, _csv(header, rows))
    else:
        _emit(cfg, _json(cfg, [r.to_dict() for r in rep.rows]))
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    if cfg.modulus is None:
        raise UsageError("--modulus is required")
    if cfg.family is not None and cfg.family not in ORACLE_FAMILIES:
        raise UsageError(
            f"no enumeration oracle for {cfg.family.value}; choose from "
            + ", ".join(f.value for f in ORACLE_FAMILIES)
        )
    families = [cfg.family] if cfg.family else list(ORACLE_FAMILIES)
    b = cfg.modulus
    jobs = []
    for fam in families:
        N = ORACLE_FAMILIES[fam] if cfg.limit is None else cfg.limit
        guard = cfg.guard or {
            Family.PP_TRACE: oracles.PLANE_PARTITION_GUARD,
            Family.RESIDUAL_CRANK: oracles.OVERPARTITION_GUARD,
        }.get(fam, oracles.PARTITION_GUARD)
        if N > guard:
            raise oracles.GuardError(f"{fam.value}: limit {N} exceeds enumeration guard {guard}")
        jobs.append((fam, N, guard))

    def run(job):
        fam, N, guard = job
        S = ex.series_for(FamilySpec(fam, b), N)
        mismatches, notices = [], []
        for n in range(N + 1):
            for a in range(b):
                got = S.coeffs[n, a]
                want = oracles.count_statistic(fam, a, b, n, guard=guard)
                if got != want:
                    if fam is Family.CRANK and n == 1:
                        notices.append((n, a, got, want))
                    else:
                        mismatches.append((n, a, got, want))
        return fam, N, mismatches, notices

    results = ex._map(run, jobs, cfg.threads)
    rows = []
    failed = False
    for fam, N, mismatches, notices in results:
        if notices:
            sys.stderr.write(
                f"notice: crank n=1 differs from the product's t + 1/t - 1 in {len(notices)} classes (expected)\n"
            )
        failed |= bool(mismatches)
        rows.append(
            {
                "family": fam.value,
                "modulus": b,
                "limit": N,
                "checked": (N + 1) * b,
                "mismatches": [list(m) for m in mismatches],
                "notices": len(notices),
            }
        )
    if cfg.fmt == "csv":
        _emit(
            cfg,
            _csv(
                ["family", "modulus", "limit", "checked", "mismatches", "notices"],
                [[r["family"], r["modulus"], r["limit"], r["checked"], len(r["mismatches"]), r["notices"]] for r in rows],
            ),
        )
    else:
        _emit(cfg, _json(cfg, rows))
    return 1 if failed else 0


def cmd_asym(cfg: RunConfig) -> int:
    spec = cfg.spec()
    if not cfg.samples:
        raise UsageError("--samples must name at least one n")
    if max(cfg.samples) > MAX_LIMIT:
        raise CapacityError(f"sample {max(cfg.samples)} exceeds engine capacity {MAX_LIMIT}")
    try:
        rows = ex.asym_vs_exact(spec, cfg.residue, cfg.samples, cfg.terms, cfg.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.fmt == "csv":
        _emit(cfg, _csv(["n", "exact", "estimate", "ratio"], [list(r.to_dict().values()) for r in rows]))
    else:
        _emit(cfg, _json(cfg, [r.to_dict() for r in rows]))
    return 0


def cmd_scan(cfg: RunConfig) -> int:
    spec = cfg.spec()
    if cfg.window[1] + 1 > MAX_LIMIT:
        raise CapacityError(f"window end {cfg.window[1]} exceeds engine capacity {MAX_LIMIT}")
    scan = ex.convexity_scan if cfg.kind == "convexity" else ex.logconcavity_scan
    res = scan(spec, cfg.residue, cfg.window, workers=cfg.threads)
    if cfg.fmt == "csv":
        _emit(
            cfg,
            _csv(
                ["kind", "n_min", "n_max", "checked", "violations", "threshold"],
                [[res.kind, *res.window, res.checked, len(res.violations), "" if res.threshold is None else res.threshold]],
            ),
        )
    else:
        _emit(cfg, _json(cfg, res.to_dict()))
    return 0


def cmd_identities(cfg: RunConfig) -> int:
    bmax = cfg.modulus or 12
    checks = ex.identity_suite(bmax, cfg.tolerance)
    if cfg.fmt == "csv":
        _emit(cfg, _csv(["name", "params", "value", "tolerance", "passed"], [list(c.to_dict().values()) for c in checks]))
    else:
        _emit(cfg, _json(cfg, [c.to_dict() for c in checks]))
    return 0 if all(c.passed for c in checks) else 1


def cmd_arcs(cfg: RunConfig) -> int:
    spec = cfg.spec()
    if not cfg.samples or min(cfg.samples) <= 0:
        raise UsageError("--samples must be positive x values")
    rows = ex.arc_dominance_probe(spec, cfg.samples, cfg.slope, workers=cfg.threads)
    if cfg.fmt == "csv":
        header = ["x", "y", "arc", "j", "log_ratio", "log_ratio_to_peak"]
        _emit(cfg, _csv(header, [[r.to_dict()[k] if r.to_dict()[k] is not None else "-inf" for k in header] for r in rows]))
    else:
        _emit(cfg, _json(cfg, [r.to_dict() for r in rows]))
    return 0


COMMANDS = {
    "expand": cmd_expand,
    "table": cmd_table,
    "oracle": cmd_oracle,
    "asym": cmd_asym,
    "scan": cmd_scan,
    "identities": cmd_identities,
    "arcs": cmd_arcs,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"equidist: error: {exc}\n")
        return 2
    except (CapacityError, oracles.GuardError, asy.TailError) as exc:
        sys.stderr.write(f"equidist: capacity: {exc}\n")
        return 3
    except (FamilyError, SeriesError, asy.ConeError) as exc:
        sys.stderr.write(f"equidist: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
