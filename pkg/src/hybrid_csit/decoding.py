"""Decodability oracle and zero-forcing rates over transcripts.

A receiver with observation matrix ``G`` can linearly isolate the symbol
set ``D`` (from noiseless observations, treating every other symbol as
unknown interference) exactly when

    rank(G) == rank(G without the D columns) + |D|.

Because the union of individually isolable symbols is jointly isolable,
the largest decodable set is simply the set of symbols passing the test
one at a time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .core import Transcript
from .errors import InfeasibleZeroForcer, InvalidInput
from .numerics import Mode


def _rank0(m: np.ndarray, tol_rel: float, scale: float | None) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0 or nx.is_zero(m):
        return 0
    return nx.rank(m, tol_rel, scale)


def _scale(G: np.ndarray) -> float | None:
    # float submatrix ranks are judged against the whole observation matrix
    return None if G.dtype == object else nx.spectral_norm(G)


def separable(G: np.ndarray, cols, tol_rel: float = nx.TOL_REL) -> bool:
    """The rank criterion for isolating columns ``cols`` of ``G``."""
    cols = set(cols)
    rest = [j for j in range(G.shape[1]) if j not in cols]
    sc = _scale(G)
    return _rank0(G, tol_rel, sc) == _rank0(G[:, rest], tol_rel, sc) + len(cols)


def decodable_set(tr: Transcript, k: int, tol_rel: float = nx.TOL_REL) -> frozenset[str]:
    """Symbols receiver ``k`` can isolate (either mode)."""
    G = tr.G[k]
    if G.shape[0] == 0:
        return frozenset()
    sc = _scale(G)
    full = _rank0(G, tol_rel, sc)
    names = tr.symbol_names
    out = set()
    for j, name in enumerate(names):
        rest = [i for i in range(len(names)) if i != j]
        if full == _rank0(G[:, rest], tol_rel, sc) + 1:
            out.add(name)
    return frozenset(out)


def oracle_decodable(tr: Transcript, k: int) -> frozenset[str]:
    """Exact generic-decodability certificate for receiver ``k``.

    Returns every ledger symbol receiver ``k`` can isolate.  Compare with
    ``tr.targets[k]``: equality means the receiver gets all it was promised
    and nothing it was not.
    """
    if tr.mode is not Mode.EXACT:
        raise InvalidInput("the oracle needs an exact-mode transcript")
    return decodable_set(tr, k)


def targets_decodable(tr: Transcript, k: int, tol_rel: float = nx.TOL_REL) -> bool:
    """Joint rank criterion on receiver ``k``'s declared target set."""
    return separable(tr.G[k], tr.columns(sorted(tr.targets[k])), tol_rel)


def scaled_observations(tr: Transcript, P_T: float) -> dict[int, np.ndarray]:
    """Float ``G_k`` with slot ``t`` scaled so that ``E|x(t)|^2 = P_T``."""
    scale = np.array([math.sqrt(P_T / e) if e > 0 else 0.0 for e in (p.energy for p in tr.plans)])
    return {k: scale[:, None] * np.asarray(g, dtype=complex) for k, g in tr.G.items()}


def zf_streams(tr: Transcript, k: int, P_T: float) -> np.ndarray:
    """Per-target SINRs of the zero-forcing receiver (unit noise per slot)."""
    if tr.mode is not Mode.FLOAT:
        raise InvalidInput("rates need a float-mode transcript")
    if P_T < 0:
        raise InvalidInput("power must be nonnegative")
    targets = sorted(tr.targets[k])
    if P_T == 0:
        return np.zeros(len(targets))
    G = scaled_observations(tr, P_T)[k]
    W = nx.solve_zero_forcer(G, tr.columns(targets))
    if W is None:
        raise InfeasibleZeroForcer(f"{tr.scheme}: receiver {k} cannot isolate its targets")
    return 1.0 / np.sum(np.abs(W) ** 2, axis=1)


def zf_rate(tr: Transcript, k: int, P_T: float) -> float:
    """Receiver ``k``'s zero-forcing rate in bits per slot."""
    sinr = zf_streams(tr, k, P_T)
    return float(np.sum(np.log2(1.0 + sinr)) / tr.T)


@dataclass
class ReceiverReport:
    receiver: int
    targets: frozenset[str]
    decodable: frozenset[str]
    targets_ok: bool
    sinr: list[float] = field(default_factory=list)
    rate: float | None = None

    @property
    def agrees(self) -> bool:
        return self.decodable == self.targets


@dataclass
class DecodeReport:
    scheme: str
    mode: Mode
    receivers: dict[int, ReceiverReport]
    P_T: float | None = None

    @property
    def ok(self) -> bool:
        return all(r.targets_ok for r in self.receivers.values())

    @property
    def agrees(self) -> bool:
        return all(r.agrees for r in self.receivers.values())

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "mode": self.mode.value,
            "P_T": self.P_T,
            "ok": self.ok,
            "receivers": {
                str(k): {
                    "targets": sorted(r.targets),
                    "decodable": sorted(r.decodable),
                    "targets_ok": r.targets_ok,
                    "sinr": r.sinr,
                    "rate": r.rate,
                }
                for k, r in self.receivers.items()
            },
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def decode_report(tr: Transcript, P_T: float | None = None) -> DecodeReport:
    """Decodability for every receiver, plus ZF rates when ``P_T`` is given."""
    receivers = {}
    for k in range(1, tr.K + 1):
        dec = decodable_set(tr, k)
        rep = ReceiverReport(k, tr.targets.get(k, frozenset()), dec, targets_decodable(tr, k))
        if P_T is not None and tr.mode is Mode.FLOAT and rep.targets_ok:
            s = zf_streams(tr, k, P_T)
            rep.sinr = [float(x) for x in s]
            rep.rate = float(np.sum(np.log2(1.0 + s)) / tr.T)
        receivers[k] = rep
    return DecodeReport(tr.scheme, tr.mode, receivers, P_T)
