"""Command-line front end.

    hybrid-csit list-schemes
    hybrid-csit verify pdd23 --trials 100 --seed 0
    hybrid-csit sweep ppd33 --grid 1e4,1e6,1e8 --trials 50 --out ppd33.csv
    hybrid-csit region 1/2 1/4 1/2

Exit codes: 0 pass, 1 property failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import HybridCsitError, InvalidInput, Unsupported
from .lab import (DEFAULT_GRID, SLOPE_TOL, check_trial, degenerate_realization, fit_dof, region_check,
                  verify_trials)
from .schemes import SCHEMES, VARIANTS, get_scheme, list_schemes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    scheme: str
    mode: str = "exact"
    trials: int = 100
    seed0: int = 0
    grid: tuple[float, ...] = DEFAULT_GRID
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    inject_degenerate: bool = False

    def validate(self) -> None:
        if self.scheme not in SCHEMES and self.scheme not in VARIANTS:
            raise Unsupported(f"unknown scheme {self.scheme!r}")
        if self.mode not in ("exact", "float"):
            raise InvalidInput(f"mode must be exact or float, got {self.mode!r}")
        if self.trials < 1:
            raise InvalidInput("--trials must be at least 1")
        if self.workers < 1:
            raise InvalidInput("--workers must be at least 1")
        if self.format not in ("csv", "json"):
            raise InvalidInput("--format must be csv or json")
        if self.mode == "float":
            if len(self.grid) < 3:
                raise InvalidInput("the slope fit needs at least 3 grid points")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])) or min(self.grid) <= 0:
                raise InvalidInput("grid must be positive and strictly increasing")
        get_scheme(self.scheme)

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInput(f"unknown RunConfig keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "grid" in data:
            data["grid"] = tuple(float(x) for x in data["grid"])
        return cls(**data)


def _grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_list_schemes(args=None) -> int:
    rows = list_schemes()
    header = f"{'name':<18} {'(M,K)':<6} {'CSIT':<5} {'T':>3}  DoF"
    print(header)
    for r in rows:
        dof = str(r["dof"])
        if r["order"] > 1:
            dof += f" (order {r['order']})"
        print(f"{r['name']:<18} {'(%d,%d)' % (r['M'], r['K']):<6} {r['csit']:<5} {r['T']:>3}  {dof}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    """Exact decodability, oracle agreement and CSIT audit over seeded trials."""
    cfg.validate()
    if cfg.mode != "exact":
        raise InvalidInput("verify runs in exact mode")
    scheme = get_scheme(cfg.scheme)
    checks = []
    lines = []
    first = 0
    if cfg.inject_degenerate:
        real = degenerate_realization(scheme, cfg.seed0)
        checks.append(check_trial(scheme, cfg.seed0, real))
        dst, src, t = scheme.descriptor.degenerate
        lines.append(f"injected degenerate channel at seed {cfg.seed0}: h_{dst}({t}) := h_{src}({t})")
        first = 1
    if cfg.trials - first > 0:
        checks += verify_trials(cfg.scheme, cfg.trials - first, cfg.seed0 + first, cfg.workers)

    passed = sum(c.decodable for c in checks)
    agree = sum(c.agrees for c in checks)
    clean = sum(c.audit_clean for c in checks)
    n = len(checks)
    lines += [
        f"scheme {cfg.scheme}: {n} exact trials from seed {cfg.seed0}",
        f"decodable   {passed}/{n}",
        f"oracle==targets {agree}/{n}",
        f"audit clean {clean}/{n}",
    ]
    bad = next((c for c in checks if not c.ok), None)
    if bad is not None:
        why = bad.error or (
            f"receiver(s) {', '.join(map(str, bad.failing))} cannot decode their targets" if bad.failing
            else ("oracle set differs from declared targets" if not bad.agrees else "CSIT audit violation")
        )
        lines.append(f"FAIL: first failing seed {bad.seed}: {why}")
    else:
        lines.append("PASS")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    _emit(report, cfg.out)
    return EXIT_OK if bad is None else EXIT_FAIL


def cmd_sweep(cfg: RunConfig) -> int:
    """Float-mode SNR sweep; passes when the slope matches the counted DoF."""
    cfg.validate()
    res = fit_dof(cfg.scheme, cfg.grid, cfg.trials, cfg.seed0, cfg.workers)
    text = res.to_csv() if cfg.format == "csv" else res.to_json()
    if cfg.out:
        _emit(text, cfg.out)
    else:
        sys.stdout.write(text)
    status = "PASS" if res.passed else "FAIL"
    print(
        f"{status}: {cfg.scheme} slope {res.slope:.4f} vs {res.expected} "
        f"(tol {SLOPE_TOL}), {res.trials} trials, excluded {res.excluded}",
        file=sys.stderr if not cfg.out else sys.stdout,
    )
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_region(values) -> int:
    res = region_check([Fraction(v) for v in values])
    names = {1: "d12+d13<=1", 2: "2(d12+d23)+d13<=2", 3: "d12+2(d23+d13)<=2"}
    print("inside" if res.inside else "outside")
    for i in (1, 2, 3):
        state = "violated" if i in res.violated else ("tight" if i in res.tight else "slack")
        print(f"  ({i}) {names[i]}: lhs={res.lhs[i - 1]} {state}")
    return EXIT_OK if res.inside else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybrid-csit", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list-schemes", help="list the shipped schemes")

    v = sub.add_parser("verify", help="exact decodability and CSIT audit")
    v.add_argument("scheme", nargs="?")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, dest="seed0")
    v.add_argument("--workers", type=int)
    v.add_argument("--inject-degenerate", action="store_true", default=None)
    v.add_argument("--out")
    v.add_argument("--config")

    s = sub.add_parser("sweep", help="float SNR sweep and slope fit")
    s.add_argument("scheme", nargs="?")
    s.add_argument("--grid", type=_grid)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int, dest="seed0")
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--config")

    r = sub.add_parser("region", help="order-2 DoF region membership")
    r.add_argument("values", nargs=3, metavar="d")
    return p


def _run_config(args, mode: str, trials: int) -> RunConfig:
    overrides = {
        k: getattr(args, k, None)
        for k in ("scheme", "trials", "seed0", "workers", "out", "grid", "format", "inject_degenerate")
    }
    if args.config:
        cfg = RunConfig.from_file(args.config, **overrides)
        cfg.mode = mode
        return cfg
    if not args.scheme:
        raise InvalidInput("a scheme name is required")
    base = RunConfig(args.scheme, mode=mode, trials=trials)
    for k, v in overrides.items():
        if v is not None:
            setattr(base, k, v)
    return base


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-schemes":
            return cmd_list_schemes(args)
        if args.command == "verify":
            return cmd_verify(_run_config(args, "exact", 100))
        if args.command == "sweep":
            return cmd_sweep(_run_config(args, "float", 50))
        if args.command == "region":
            return cmd_region(args.values)
    except (Unsupported, InvalidInput, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HybridCsitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
