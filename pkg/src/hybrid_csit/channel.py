"""Channel realizations, hybrid CSIT configurations and causality-gated views.

Receivers are numbered from 1 (receiver 1 is the one whose CSIT is always
instantaneous in the shipped schemes); time slots are numbered from 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import CsitViolation, InvalidInput
from .numerics import CRational, Mode, rank

#: Exact draws: numerator magnitude bound and common denominator.
EXACT_NUM_BOUND = 2**16
EXACT_DEN = 2**8


@dataclass(frozen=True)
class CsitConfig:
    """Per-receiver CSIT state, e.g. ``CsitConfig.parse("PDD")``."""

    states: tuple[str, ...]

    def __post_init__(self):
        if not self.states:
            raise InvalidInput("CSIT configuration needs at least one receiver")
        bad = [s for s in self.states if s not in ("P", "D")]
        if bad:
            raise InvalidInput(f"CSIT states must be P or D, got {bad}")

    @classmethod
    def parse(cls, text: str) -> "CsitConfig":
        return cls(tuple(text.strip().upper()))

    @property
    def K(self) -> int:
        return len(self.states)

    def state(self, k: int) -> str:
        return self.states[k - 1]

    def __str__(self) -> str:
        return "".join(self.states)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel vectors ``h_k(t)`` for receivers ``1..K`` and slots ``0..T-1``.

    ``h`` has shape ``(K, T, M)``; exact realizations hold
    :class:`~hybrid_csit.numerics.CRational` entries.
    """

    M: int
    K: int
    T: int
    h: np.ndarray
    mode: Mode
    seed: int | None = None

    def __post_init__(self):
        if self.h.shape != (self.K, self.T, self.M):
            raise InvalidInput(f"h has shape {self.h.shape}, expected {(self.K, self.T, self.M)}")
        self.h.flags.writeable = False

    def vector(self, k: int, t: int) -> np.ndarray:
        """Ungated access to ``h_k(t)`` (receivers have full CSIR)."""
        if not (1 <= k <= self.K and 0 <= t < self.T):
            raise InvalidInput(f"no channel h_{k}({t}) in a K={self.K}, T={self.T} realization")
        return self.h[k - 1, t]

    def slot_matrix(self, t: int) -> np.ndarray:
        """The ``K x M`` channel matrix of slot ``t``."""
        return self.h[:, t, :]

    def with_vector(self, k: int, t: int, value) -> "ChannelRealization":
        """Copy with ``h_k(t)`` replaced (used to inject degenerate channels)."""
        h = self.h.copy()
        h[k - 1, t] = np.asarray(value)
        return ChannelRealization(self.M, self.K, self.T, h, self.mode, self.seed)

    def to_dict(self) -> dict:
        if self.mode is Mode.EXACT:
            enc = lambda x: [str(x.re), str(x.im)]  # noqa: E731
        else:
            enc = lambda x: [float(x.real), float(x.imag)]  # noqa: E731
        return {
            "M": self.M,
            "K": self.K,
            "T": self.T,
            "seed": self.seed,
            "mode": self.mode.value,
            "h": [[[enc(x) for x in self.h[k, t]] for t in range(self.T)] for k in range(self.K)],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelRealization":
        mode = Mode(d["mode"])
        M, K, T = d["M"], d["K"], d["T"]
        if mode is Mode.EXACT:
            h = np.empty((K, T, M), dtype=object)
            for idx in np.ndindex(h.shape):
                re, im = d["h"][idx[0]][idx[1]][idx[2]]
                h[idx] = CRational(Fraction(re), Fraction(im))
        else:
            raw = np.asarray(d["h"], dtype=float)
            h = raw[..., 0] + 1j * raw[..., 1]
        return cls(M, K, T, h, mode, d.get("seed"))

    @classmethod
    def from_json(cls, text: str) -> "ChannelRealization":
        return cls.from_dict(json.loads(text))


def _exact_parts(rng: np.random.Generator, n: int) -> np.ndarray:
    mags = rng.integers(1, EXACT_NUM_BOUND, size=n, endpoint=True)
    signs = rng.choice((-1, 1), size=n)
    return mags * signs


def _draw_exact(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    n = int(np.prod(shape))
    re = _exact_parts(rng, n)
    im = _exact_parts(rng, n)
    flat = [CRational(Fraction(int(a), EXACT_DEN), Fraction(int(b), EXACT_DEN)) for a, b in zip(re, im)]
    out = np.empty(n, dtype=object)
    out[:] = flat
    return out.reshape(shape)


def draw_channel(seed: int, M: int, K: int, T: int, mode: Mode | str = Mode.EXACT) -> ChannelRealization:
    """Draw an i.i.d. channel realization, deterministic in ``seed``.

    Float mode draws standard circularly-symmetric complex Gaussians.  Exact
    mode draws real and imaginary parts as ``n / 256`` with ``n`` uniform on
    ``[-2^16, 2^16]`` minus zero, and redraws any slot whose ``K x M`` matrix
    is rank deficient.
    """
    mode = Mode(mode)
    if min(M, K, T) < 1:
        raise InvalidInput("M, K and T must all be at least 1")
    rng = np.random.default_rng(seed)
    if mode is Mode.FLOAT:
        g = rng.standard_normal((K, T, M, 2))
        h = (g[..., 0] + 1j * g[..., 1]) / np.sqrt(2.0)
        return ChannelRealization(M, K, T, h, mode, seed)
    h = np.empty((K, T, M), dtype=object)
    full = min(K, M)
    for t in range(T):
        while True:
            slot = _draw_exact(rng, (K, M))
            if rank(slot) == full:
                break
        h[:, t, :] = slot
    return ChannelRealization(M, K, T, h, mode, seed)


@dataclass(frozen=True)
class Access:
    k: int
    tau: int
    now: int
    allowed: bool


@dataclass
class AuditLog:
    """Record of every channel read a scheme made while being built."""

    entries: list[Access] = field(default_factory=list)

    def __iter__(self) -> Iterator[Access]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def violations(self) -> list[Access]:
        return [a for a in self.entries if not a.allowed]

    @property
    def clean(self) -> bool:
        return not self.violations


class CsitView:
    """What the transmitter may know about the channel at slot ``now``.

    ``get(k, tau)`` succeeds when receiver ``k`` supplies instantaneous CSIT
    and ``tau <= now``, or delayed CSIT and ``tau < now``.  Every request is
    logged; a forbidden one is logged and then raises :class:`CsitViolation`.
    """

    def __init__(self, realization: ChannelRealization, config: CsitConfig, now: int,
                 log: AuditLog | None = None):
        if config.K != realization.K:
            raise InvalidInput(f"config has {config.K} receivers, realization has {realization.K}")
        if not 0 <= now < realization.T:
            raise InvalidInput(f"slot {now} outside 0..{realization.T - 1}")
        self.realization = realization
        self.config = config
        self.now = now
        self.log = log if log is not None else AuditLog()

    def allowed(self, k: int, tau: int) -> bool:
        state = self.config.state(k)
        return tau <= self.now if state == "P" else tau < self.now

    def get(self, k: int, tau: int) -> np.ndarray:
        if not (1 <= k <= self.config.K and 0 <= tau < self.realization.T):
            raise InvalidInput(f"no channel h_{k}({tau})")
        ok = self.allowed(k, tau)
        self.log.entries.append(Access(k, tau, self.now, ok))
        if not ok:
            raise CsitViolation(
                f"slot {self.now}: h_{k}({tau}) is not available under "
                f"{self.config} (receiver {k} supplies {self.config.state(k)} CSIT)"
            )
        return self.realization.vector(k, tau)


def view(real: ChannelRealization, cfg: CsitConfig, t: int, log: AuditLog | None = None) -> CsitView:
    return CsitView(real, cfg, t, log)
