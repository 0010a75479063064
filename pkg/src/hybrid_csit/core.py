"""Linear transmission schemes: ledgers, slot plans, transcripts, DoF counting.

A scheme transmits ``x(t) = B(t) s`` where ``s`` stacks its fresh symbols.
Anything the transmitter "reconstructs" (an overheard combination, an
order-2 symbol built from earlier outputs) is folded into ``B(t)`` as a
channel-dependent row over the fresh symbols, so every receiver's noiseless
observations are ``G_k s`` for one fixed vector ``s``.

Schemes are written as generators: :func:`run_scheme` advances the slot
clock, hands the scheme a :class:`SchemeContext` whose channel reads go
through a :class:`~hybrid_csit.channel.CsitView`, and collects one ``B(t)``
per ``yield``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import numerics as nx
from .channel import AuditLog, ChannelRealization, CsitConfig, CsitView
from .errors import ConfigMismatch, DimensionMismatch, InvalidInput
from .numerics import Mode


@dataclass(frozen=True)
class Symbol:
    """An information symbol; its order is the size of its audience."""

    name: str
    audience: frozenset[int]
    origin: str = "fresh"

    def __post_init__(self):
        if not 1 <= len(self.audience) <= 3:
            raise InvalidInput(f"symbol {self.name} must have 1 to 3 intended receivers")
        if self.origin not in ("fresh", "reconstructed"):
            raise InvalidInput(f"unknown symbol origin {self.origin!r}")

    @property
    def order(self) -> int:
        return len(self.audience)


def fresh(name: str, *audience: int) -> Symbol:
    return Symbol(name, frozenset(audience))


@dataclass(frozen=True)
class DofTuple:
    """Exact per-receiver (or per-receiver-group) DoF values."""

    labels: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise InvalidInput("DoF values are nonnegative")

    @property
    def sum(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self) -> str:
        inner = ", ".join(f"{l}={v}" for l, v in zip(self.labels, self.values))
        return f"({inner}; sum={self.sum})"


@dataclass(frozen=True)
class SchemeDescriptor:
    """Static facts about a scheme: shape, CSIT, ledger, targets, claims."""

    name: str
    M: int
    K: int
    csit: CsitConfig
    T: int
    symbols: tuple[Symbol, ...]
    targets: Mapping[int, frozenset[str]]
    order: int = 1
    claimed: DofTuple | None = None
    #: (receiver, copied-from receiver, slot) used to build a degenerate channel
    degenerate: tuple[int, int, int] = (2, 1, 0)
    note: str = ""

    @property
    def S(self) -> int:
        return len(self.symbols)

    @property
    def symbol_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)

    def rate_slope(self) -> Fraction:
        """Expected high-SNR slope of the summed receiver rates."""
        return Fraction(sum(len(v) for v in self.targets.values()), self.T)


class Scheme:
    """Base class; subclasses set ``descriptor`` and implement :meth:`plan`."""

    descriptor: SchemeDescriptor

    def plan(self, ctx: "SchemeContext") -> Iterator[np.ndarray]:
        raise NotImplementedError

    @property
    def name(self) -> str:
        return self.descriptor.name

    def __repr__(self) -> str:
        d = self.descriptor
        return f"<{type(self).__name__} {d.name} ({d.M},{d.K}) {d.csit} T={d.T}>"


@dataclass(frozen=True)
class SlotPlan:
    """``x(t) = B(t) s``; ``power_split`` gives each beam's energy share."""

    t: int
    B: np.ndarray
    power_split: tuple[float, ...] = ()

    @property
    def energy(self) -> float:
        """``E|x(t)|^2`` for unit-power, independent symbols."""
        return nx.frobenius2(self.B)


class SchemeContext:
    """The transmitter's toolbox while a scheme is being built.

    Channel reads (:meth:`h`, :meth:`perp`, :meth:`received`) go through the
    current slot's gated view; everything else is bookkeeping.
    """

    def __init__(self, realization: ChannelRealization, config: CsitConfig,
                 descriptor: SchemeDescriptor, log: AuditLog):
        self.realization = realization
        self.config = config
        self.descriptor = descriptor
        self.log = log
        self.mode = realization.mode
        self.M = realization.M
        self.S = descriptor.S
        self.now = -1
        self.view: CsitView | None = None
        self.plans: list[SlotPlan] = []
        self.reconstructed: dict[str, np.ndarray] = {}
        self._pending_split: tuple[float, ...] = ()
        self._index = {name: j for j, name in enumerate(descriptor.symbol_names)}

    def _enter(self, t: int) -> None:
        self.now = t
        self.view = CsitView(self.realization, self.config, t, self.log)

    # -- channel knowledge -------------------------------------------------

    def h(self, k: int, tau: int | None = None) -> np.ndarray:
        """``h_k(tau)`` (defaults to the current slot), if CSIT allows it."""
        return self.view.get(k, self.now if tau is None else tau)

    def perp(self, *receivers: int, tau: int | None = None) -> np.ndarray:
        """Projector orthogonal to ``h_k(tau)`` for every listed receiver."""
        return nx.orth_projector([self.h(k, tau) for k in receivers], self.M)

    def received(self, k: int, tau: int) -> np.ndarray:
        """Receiver ``k``'s noiseless output at slot ``tau`` as a symbol row."""
        return self.h(k, tau) @ self.plans[tau].B

    # -- symbol rows ---------------------------------------------------------

    def zero_row(self) -> np.ndarray:
        return nx.zeros(self.S, self.mode)

    def sym(self, name: str) -> np.ndarray:
        row = self.zero_row()
        row[self._index[name]] = nx.ONE if self.mode is Mode.EXACT else 1.0
        return row

    def syms(self, *names: str) -> list[np.ndarray]:
        return [self.sym(n) for n in names]

    def stack(self, *rows) -> np.ndarray:
        """``M x S`` matrix with the given rows on the leading antennas.

        ``None`` leaves an antenna silent; missing trailing rows are zero.
        """
        if len(rows) > self.M:
            raise DimensionMismatch(f"{len(rows)} rows for {self.M} antennas")
        X = nx.zeros((self.M, self.S), self.mode)
        for i, r in enumerate(rows):
            if r is not None:
                X[i] = r
        return X

    def record(self, name: str, row: np.ndarray) -> np.ndarray:
        """Remember a reconstructed combination for later inspection."""
        self.reconstructed[name] = row
        return row

    def transmit(self, *terms) -> np.ndarray:
        """Sum of ``(precoder, X)`` terms; a ``None`` precoder means identity.

        Each nonzero row ``i`` of ``X`` is one beam travelling along column
        ``i`` of the precoder.
        """
        B = nx.zeros((self.M, self.S), self.mode)
        energies = []
        for P, X in terms:
            for i in range(self.M):
                if nx.is_zero(X[i]):
                    continue
                gain = 1.0 if P is None else nx.frobenius2(P[:, i:i + 1])
                energies.append(gain * nx.frobenius2(X[i:i + 1]))
            B = B + (X if P is None else P @ X)
        self._pending_split = _shares(energies)
        return B


def _shares(energies: Sequence[float]) -> tuple[float, ...]:
    total = float(sum(energies))
    if total == 0.0:
        return tuple(0.0 for _ in energies)
    return tuple(float(e) / total for e in energies)


@dataclass(frozen=True, eq=False)
class Transcript:
    """Everything every receiver observes, as linear maps of the symbols.

    ``G[k]`` is receiver ``k``'s ``T x S`` observation matrix: row ``t`` is
    ``h_k(t) B(t)``.
    """

    scheme: str
    M: int
    K: int
    T: int
    mode: Mode
    symbols: tuple[Symbol, ...]
    targets: Mapping[int, frozenset[str]]
    G: Mapping[int, np.ndarray]
    plans: tuple[SlotPlan, ...]
    reconstructed: Mapping[str, np.ndarray] = field(default_factory=dict)
    audit: AuditLog = field(default_factory=AuditLog)
    slots: tuple[int, ...] = ()

    @property
    def symbol_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)

    def columns(self, names) -> list[int]:
        index = {n: j for j, n in enumerate(self.symbol_names)}
        return [index[n] for n in names]

    def drop_slots(self, *slots: int) -> "Transcript":
        """The same run with the listed slots never transmitted."""
        keep = [i for i, t in enumerate(self.slots) if t not in set(slots)]
        return Transcript(
            self.scheme, self.M, self.K, len(keep), self.mode, self.symbols, self.targets,
            {k: g[keep] for k, g in self.G.items()},
            tuple(self.plans[i] for i in keep), self.reconstructed, self.audit,
            tuple(self.slots[i] for i in keep),
        )

    def to_dict(self) -> dict:
        enc = _encoder(self.mode)
        return {
            "scheme": self.scheme,
            "M": self.M,
            "K": self.K,
            "T": self.T,
            "mode": self.mode.value,
            "slots": list(self.slots),
            "ledger": [
                {"name": s.name, "audience": sorted(s.audience), "order": s.order, "origin": s.origin}
                for s in self.symbols
            ],
            "targets": {str(k): sorted(v) for k, v in self.targets.items()},
            "G": {str(k): [[enc(x) for x in row] for row in g] for k, g in self.G.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _encoder(mode: Mode):
    if mode is Mode.EXACT:
        return lambda x: [str(x.re), str(x.im)]
    return lambda x: [float(x.real), float(x.imag)]


def run_scheme(scheme: Scheme, real: ChannelRealization, cfg: CsitConfig | str | None = None) -> Transcript:
    """Build ``scheme`` slot by slot over ``real`` under CSIT ``cfg``.

    Raises
    ------
    ConfigMismatch
        ``cfg`` is not the configuration the scheme was designed for.
    DimensionMismatch
        The realization's ``(M, K, T)`` does not match the scheme.
    CsitViolation
        The scheme read a channel its CSIT does not provide.
    """
    d = scheme.descriptor
    cfg = d.csit if cfg is None else (CsitConfig.parse(cfg) if isinstance(cfg, str) else cfg)
    if cfg != d.csit:
        raise ConfigMismatch(f"{d.name} needs CSIT {d.csit}, got {cfg}")
    if (real.M, real.K) != (d.M, d.K) or real.T < d.T:
        raise DimensionMismatch(
            f"{d.name} needs (M, K) = ({d.M}, {d.K}) and T >= {d.T}; "
            f"realization has ({real.M}, {real.K}) and T = {real.T}"
        )
    log = AuditLog()
    ctx = SchemeContext(real, cfg, d, log)
    gen = scheme.plan(ctx)
    for t in range(d.T):
        ctx._enter(t)
        ctx._pending_split = ()
        try:
            B = next(gen)
        except StopIteration:
            raise DimensionMismatch(f"{d.name} stopped after {t} of {d.T} slots") from None
        B = np.asarray(B)
        if B.shape != (d.M, d.S):
            raise DimensionMismatch(f"{d.name} slot {t}: B has shape {B.shape}, expected {(d.M, d.S)}")
        if nx.mode_of(B) is not real.mode:
            raise InvalidInput(f"{d.name} slot {t}: B mode differs from the realization mode")
        ctx.plans.append(SlotPlan(t, B, ctx._pending_split))
    ctx._enter(d.T - 1)
    if next(gen, None) is not None:
        raise DimensionMismatch(f"{d.name} produced more than {d.T} slots")

    G = {}
    for k in range(1, d.K + 1):
        rows = [real.vector(k, p.t) @ p.B for p in ctx.plans]
        G[k] = np.vstack(rows)
    return Transcript(
        d.name, d.M, d.K, d.T, real.mode, d.symbols, d.targets, G, tuple(ctx.plans),
        dict(ctx.reconstructed), log, tuple(range(d.T)),
    )


def simulate_outputs(tr: Transcript, real: ChannelRealization, s: np.ndarray) -> dict[int, np.ndarray]:
    """Noiseless outputs ``y_k(t) = h_k(t) (B(t) s)`` computed slot by slot."""
    out = {}
    for k in range(1, tr.K + 1):
        out[k] = np.array([real.vector(k, p.t) @ (p.B @ s) for p in tr.plans], dtype=s.dtype)
    return out


def counting_dof(scheme: Scheme | SchemeDescriptor) -> DofTuple:
    """DoF by counting fresh symbols per audience over the scheme length."""
    d = scheme.descriptor if isinstance(scheme, Scheme) else scheme
    T = d.T
    if d.order == 1:
        groups = [frozenset({k}) for k in range(1, d.K + 1)]
        labels = tuple(f"d{k}" for k in range(1, d.K + 1))
    elif d.order == 2:
        groups = [frozenset(p) for p in ((1, 2), (2, 3), (1, 3))]
        labels = ("d12", "d23", "d13")
    else:
        groups = [frozenset(range(1, d.K + 1))]
        labels = ("d" + "".join(str(k) for k in range(1, d.K + 1)),)
    values = tuple(
        Fraction(sum(1 for s in d.symbols if s.origin == "fresh" and s.audience == g), T) for g in groups
    )
    return DofTuple(labels, values)
