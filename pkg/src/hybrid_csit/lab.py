"""Monte-Carlo verification campaigns, SNR sweeps and DoF arithmetic."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import ChannelRealization, draw_channel
from .core import Scheme, Transcript, run_scheme
from .decoding import decodable_set, targets_decodable, zf_rate
from .errors import DegenerateProjector, InfeasibleZeroForcer, InvalidInput, Unsupported
from .numerics import Mode
from .schemes import get_scheme

log = logging.getLogger(__name__)

#: Default SNR grid and slope tolerance for sweeps.
DEFAULT_GRID = (1e4, 1e6, 1e8)
SLOPE_TOL = 0.05


def _scheme(scheme: Scheme | str) -> Scheme:
    return get_scheme(scheme) if isinstance(scheme, str) else scheme


def degenerate_realization(scheme: Scheme | str, seed: int) -> ChannelRealization:
    """An exact draw with one channel copied onto another (measure-zero event)."""
    d = _scheme(scheme).descriptor
    real = draw_channel(seed, d.M, d.K, d.T, Mode.EXACT)
    dst, src, t = d.degenerate
    return real.with_vector(dst, t, real.vector(src, t))


# -- exact verification ------------------------------------------------------


@dataclass
class TrialCheck:
    """Outcome of one exact-mode run."""

    seed: int
    decodable: bool
    agrees: bool
    audit_clean: bool
    failing: list[int] = field(default_factory=list)
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.decodable and self.agrees and self.audit_clean and not self.error


def check_transcript(tr: Transcript, seed: int) -> TrialCheck:
    failing, agrees = [], True
    for k in range(1, tr.K + 1):
        if not targets_decodable(tr, k):
            failing.append(k)
        if decodable_set(tr, k) != tr.targets[k]:
            agrees = False
    return TrialCheck(seed, not failing, agrees, tr.audit.clean, failing)


def check_trial(scheme: Scheme | str, seed: int, realization: ChannelRealization | None = None) -> TrialCheck:
    """Run ``scheme`` on one exact draw and apply every exact check."""
    sc = _scheme(scheme)
    d = sc.descriptor
    real = realization if realization is not None else draw_channel(seed, d.M, d.K, d.T, Mode.EXACT)
    try:
        tr = run_scheme(sc, real)
    except (DegenerateProjector, ZeroDivisionError) as exc:
        return TrialCheck(seed, False, False, True, list(range(1, d.K + 1)), f"degenerate channel: {exc}")
    return check_transcript(tr, seed)


def _check_worker(args) -> TrialCheck:
    name, seed = args
    return check_trial(name, seed)


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def verify_trials(scheme: Scheme | str, trials: int, seed0: int = 0, workers: int = 1) -> list[TrialCheck]:
    """Exact checks on seeds ``seed0 .. seed0 + trials - 1``, in seed order."""
    if trials < 1:
        raise InvalidInput("trials must be at least 1")
    if workers > 1 and not isinstance(scheme, str):
        scheme = scheme.name
    seeds = range(seed0, seed0 + trials)
    if isinstance(scheme, str):
        return _map(_check_worker, [(scheme, s) for s in seeds], workers)
    return [check_trial(scheme, s) for s in seeds]


def verify_decodability(scheme: Scheme | str, trials: int, seed0: int = 0, workers: int = 1) -> int:
    """Number of seeds on which every receiver's targets are oracle-decodable."""
    return sum(c.decodable for c in verify_trials(scheme, trials, seed0, workers))


# -- float sweeps ------------------------------------------------------------


@dataclass
class SweepResult:
    scheme: str
    grid: tuple[float, ...]
    K: int
    rates: np.ndarray            # (len(grid), K) mean per-receiver rates
    trials: int
    excluded: list[int]
    slope: float
    residual: float
    receiver_slopes: tuple[float, ...]
    expected: Fraction

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise InvalidInput("grid must be strictly increasing")
        if self.trials < 1:
            raise InvalidInput("no usable trials")

    @property
    def sum_rates(self) -> np.ndarray:
        return self.rates.sum(axis=1)

    @property
    def passed(self) -> bool:
        return abs(self.slope - float(self.expected)) <= SLOPE_TOL

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scheme", "P_T", "trial_mean_sum_rate", "r1", "r2", "r3", "slope_fit"])
        for i, P in enumerate(self.grid):
            per = [repr(float(x)) for x in self.rates[i]] + [""] * max(0, 3 - self.K)
            w.writerow([self.scheme, repr(float(P)), repr(float(self.sum_rates[i])), *per[:3],
                        repr(float(self.slope))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "P_T": [float(p) for p in self.grid],
            "trial_mean_sum_rate": [float(x) for x in self.sum_rates],
            "rates": [[float(x) for x in row] for row in self.rates],
            "trials": self.trials,
            "excluded_seeds": self.excluded,
            "slope_fit": float(self.slope),
            "residual": float(self.residual),
            "receiver_slopes": [float(x) for x in self.receiver_slopes],
            "expected_slope": str(self.expected),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def trial_rates(scheme: Scheme | str, seed: int, grid: Sequence[float]) -> np.ndarray | None:
    """``(len(grid), K)`` ZF rates on one float draw, or ``None`` if infeasible."""
    sc = _scheme(scheme)
    d = sc.descriptor
    real = draw_channel(seed, d.M, d.K, d.T, Mode.FLOAT)
    try:
        tr = run_scheme(sc, real)
        return np.array([[zf_rate(tr, k, P) for k in range(1, d.K + 1)] for P in grid])
    except (InfeasibleZeroForcer, DegenerateProjector, np.linalg.LinAlgError) as exc:
        log.warning("%s seed %d excluded: %s", d.name, seed, exc)
        return None


def _rate_worker(args):
    name, seed, grid = args
    return trial_rates(name, seed, grid)


def fit_slope(grid: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of ``values`` against ``log2(grid)`` and RMS residual."""
    x = np.log2(np.asarray(grid, dtype=float))
    y = np.asarray(values, dtype=float)
    slope, icpt = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return float(slope), resid


def fit_dof(scheme: Scheme | str, grid: Sequence[float] = DEFAULT_GRID, trials: int = 50,
            seed0: int = 0, workers: int = 1) -> SweepResult:
    """Fit the high-SNR slope of the trial-mean sum rate.

    Trials use float draws with seeds ``seed0 + i``.  Results are combined in
    seed order, so the output does not depend on ``workers``.
    """
    grid = tuple(float(p) for p in grid)
    if len(grid) < 3:
        raise InvalidInput("slope fitting needs at least 3 grid points")
    if any(p <= 0 for p in grid):
        raise InvalidInput("grid powers must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInput("grid must be strictly increasing")
    if trials < 1:
        raise InvalidInput("trials must be at least 1")
    sc = _scheme(scheme)
    d = sc.descriptor
    seeds = list(range(seed0, seed0 + trials))
    if workers > 1:
        results = _map(_rate_worker, [(d.name, s, grid) for s in seeds], workers)
    else:
        results = [trial_rates(sc, s, grid) for s in seeds]
    excluded = [s for s, r in zip(seeds, results) if r is None]
    used = [r for r in results if r is not None]
    if not used:
        raise InvalidInput(f"{d.name}: every trial was infeasible")
    total = np.zeros((len(grid), d.K))
    for r in used:
        total = total + r
    mean = total / len(used)
    slope, resid = fit_slope(grid, mean.sum(axis=1))
    per = tuple(fit_slope(grid, mean[:, k])[0] for k in range(d.K))
    return SweepResult(d.name, grid, d.K, mean, len(used), excluded, slope, resid, per, d.rate_slope())


# -- DoF arithmetic ----------------------------------------------------------


@dataclass(frozen=True)
class RegionResult:
    inside: bool
    tight: tuple[int, ...]
    violated: tuple[int, ...]
    lhs: tuple[Fraction, ...]


#: Order-2 region constraints for (d12, d23, d13): coefficients and bound.
REGION = (
    ((1, 0, 1), 1),   # d12 + d13 <= 1
    ((2, 2, 1), 2),   # 2(d12 + d23) + d13 <= 2
    ((1, 2, 2), 2),   # d12 + 2(d23 + d13) <= 2
)


def region_check(d: Sequence) -> RegionResult:
    """Membership of an order-2 triple ``(d12, d23, d13)`` in the PDD region."""
    if len(d) != 3:
        raise InvalidInput("expected three values (d12, d23, d13)")
    d = tuple(Fraction(x) for x in d)
    if any(x < 0 for x in d):
        raise InvalidInput("order-2 DoF values must be nonnegative")
    lhs = tuple(sum((c * x for c, x in zip(coef, d)), Fraction(0)) for coef, _ in REGION)
    tight = tuple(i + 1 for i, (v, (_, b)) in enumerate(zip(lhs, REGION)) if v == b)
    violated = tuple(i + 1 for i, (v, (_, b)) in enumerate(zip(lhs, REGION)) if v > b)
    return RegionResult(not violated, tight, violated, lhs)


#: Sum-DoF ceilings: optimal values where known, otherwise the stated upper bound.
UPPER_BOUNDS: dict[tuple[str, int, int], Fraction] = {
    ("PDD", 2, 3): Fraction(5, 3),
    ("PDD", 3, 3): Fraction(17, 9),
    ("PPD", 3, 3): Fraction(7, 3),
    ("PD", 2, 2): Fraction(3, 2),
    ("PPP", 3, 3): Fraction(3),
}


@dataclass(frozen=True)
class BoundCheck:
    ok: bool
    bound: Fraction
    value: Fraction


def parse_config_key(config) -> tuple[str, int, int]:
    """Accept ``"PDD(2,3)"`` or ``("PDD", 2, 3)``."""
    if isinstance(config, str):
        text = config.replace(" ", "")
        try:
            csit, rest = text.split("(", 1)
            M, K = (int(x) for x in rest.rstrip(")").split(","))
        except ValueError:
            raise Unsupported(f"cannot parse configuration {config!r}") from None
        return csit.upper(), M, K
    csit, M, K = config
    return str(csit).upper(), int(M), int(K)


def bound_check(config, sum_dof) -> BoundCheck:
    """Compare an achieved sum DoF with the known ceiling for ``config``."""
    key = parse_config_key(config)
    if key not in UPPER_BOUNDS:
        raise Unsupported(f"no known bound for {key[0]}({key[1]},{key[2]})")
    value = Fraction(sum_dof)
    bound = UPPER_BOUNDS[key]
    return BoundCheck(value <= bound, bound, value)

