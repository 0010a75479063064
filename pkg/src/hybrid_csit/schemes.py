"""The concrete transmission schemes.

=================  =====  =====  ==  ===============
name               (M,K)  CSIT   T   sum DoF
=================  =====  =====  ==  ===============
pd22               (2,2)  PD     2   3/2
order2_delivery    (2,3)  PDD    4   5/4 (order 2)
pdd23              (2,3)  PDD    12  5/3
pdd33              (3,3)  PDD    10  9/5
ppd33              (3,3)  PPD    4   9/4
ppp_zf             (3,3)  PPP    1   3
order3_broadcast   (2,3)  DDD    1   1 (order 3)
=================  =====  =====  ==  ===============

Slots are numbered from 0 in code; comments use the same numbering.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import numerics as nx
from .channel import CsitConfig
from .core import Scheme, SchemeContext, SchemeDescriptor, counting_dof, fresh
from .errors import DegenerateProjector, Unsupported


def _targets(symbols) -> dict[int, frozenset[str]]:
    out: dict[int, set[str]] = {}
    for s in symbols:
        for k in s.audience:
            out.setdefault(k, set()).add(s.name)
    return {k: frozenset(v) for k, v in sorted(out.items())}


def _describe(name, M, K, csit, T, symbols, order=1, **kw) -> SchemeDescriptor:
    symbols = tuple(symbols)
    d = SchemeDescriptor(name, M, K, CsitConfig.parse(csit), T, symbols, _targets(symbols), order, **kw)
    return SchemeDescriptor(**{**d.__dict__, "claimed": counting_dof(d)})


def order3_broadcast(ctx: SchemeContext, row: np.ndarray) -> np.ndarray:
    """One slot carrying an order-3 combination on antenna 1.

    Every receiver hears a nonzero multiple of ``row`` (generic channels),
    so one order-3 symbol costs exactly one slot.
    """
    return ctx.transmit((None, ctx.stack(row)))


def order2_slots(ctx: SchemeContext, ab1, ab2, ac1, ac2, bc):
    """Deliver five order-2 combinations in four slots.

    ``ab`` rows are wanted by receivers 1 and 2, ``ac`` by 1 and 3, ``bc``
    by 2 and 3.  The ``bc`` beam is steered into receiver 1's null space in
    the first two slots; the last two re-send what receiver 3 heard of the
    ``ab`` pair and what receiver 2 heard of the ``ac`` pair.
    """
    t0 = ctx.now
    X_ab = ctx.stack(ab1, ab2)
    yield ctx.transmit((None, X_ab), (ctx.perp(1), ctx.stack(bc)))
    X_ac = ctx.stack(ac1, ac2)
    yield ctx.transmit((None, X_ac), (ctx.perp(1), ctx.stack(bc)))
    # both combinations need delayed CSIT: h_3(t0), h_2(t0+1)
    L3 = ctx.record("L3(ab)", ctx.h(3, t0) @ X_ab)
    yield order3_broadcast(ctx, L3)
    F2 = ctx.record("F2(ac)", ctx.h(2, t0 + 1) @ X_ac)
    yield order3_broadcast(ctx, F2)


class PD22(Scheme):
    """Two-user scheme: two symbols to receiver 1 and one to receiver 2 in two slots."""

    descriptor = _describe(
        "pd22", 2, 2, "PD", 2, [fresh("a1", 1), fresh("a2", 1), fresh("b", 2)],
        degenerate=(2, 1, 0),
    )

    def plan(self, ctx):
        a1, a2, b = ctx.syms("a1", "a2", "b")
        X = ctx.stack(a1, a2)
        yield ctx.transmit((None, X), (ctx.perp(1), ctx.stack(b)))
        # what receiver 2 heard of (a1, a2) is wanted by both receivers
        L2 = ctx.record("L2", ctx.h(2, 0) @ X)
        yield ctx.transmit((None, ctx.stack(L2)))


class Order2Delivery(Scheme):
    """Four-slot delivery of ``ab1, ab2, ac1, ac2, bc`` (order-2 symbols)."""

    def __init__(self, M: int = 2):
        if M not in (2, 3):
            raise Unsupported("order2_delivery is defined for M = 2 or 3")
        self.descriptor = _describe(
            "order2_delivery", M, 3, "PDD", 4,
            [fresh("ab1", 1, 2), fresh("ab2", 1, 2), fresh("ac1", 1, 3), fresh("ac2", 1, 3), fresh("bc", 2, 3)],
            order=2, degenerate=(3, 1, 0),
        )

    def plan(self, ctx):
        yield from order2_slots(ctx, *ctx.syms("ab1", "ab2", "ac1", "ac2", "bc"))


class PDD23(Scheme):
    """Twelve-slot scheme for two antennas and three receivers, CSIT PDD.

    Slots 0-7 create five order-2 combinations, slots 8-11 deliver them.
    """

    descriptor = _describe(
        "pdd23", 2, 3, "PDD", 12,
        [fresh(f"a{i}", 1) for i in range(1, 13)]
        + [fresh(f"b{i}", 2) for i in range(1, 5)]
        + [fresh(f"c{i}", 3) for i in range(1, 5)],
    )

    def plan(self, ctx):
        a = dict(zip(range(1, 13), ctx.syms(*(f"a{i}" for i in range(1, 13)))))
        b = dict(zip(range(1, 5), ctx.syms(*(f"b{i}" for i in range(1, 5)))))
        c = dict(zip(range(1, 5), ctx.syms(*(f"c{i}" for i in range(1, 5)))))

        # phase bc
        X12 = ctx.stack(a[1], a[2])
        yield ctx.transmit((None, X12), (ctx.perp(1), ctx.stack(b[1])))
        A2 = ctx.record("A2", ctx.h(2, 0) @ X12)
        yield ctx.transmit((None, ctx.stack(A2)), (ctx.perp(1), ctx.stack(b[2])))
        X34 = ctx.stack(a[3], a[4])
        yield ctx.transmit((None, X34), (ctx.perp(1), ctx.stack(c[1])))
        A4 = ctx.record("A4", ctx.h(3, 2) @ X34)
        yield ctx.transmit((None, ctx.stack(A4)), (ctx.perp(1), ctx.stack(c[2])))

        # phase ab
        X56 = ctx.stack(a[5], a[6])
        yield ctx.transmit((None, X56), (ctx.perp(1), ctx.stack(b[3])))
        X78 = ctx.stack(a[7], a[8])
        yield ctx.transmit((None, X78), (ctx.perp(1), ctx.stack(b[4])))

        # phase ac
        X910 = ctx.stack(a[9], a[10])
        yield ctx.transmit((None, X910), (ctx.perp(1), ctx.stack(c[3])))
        X1112 = ctx.stack(a[11], a[12])
        yield ctx.transmit((None, X1112), (ctx.perp(1), ctx.stack(c[4])))

        # stage 2
        bc = ctx.record("bc", ctx.received(3, 1) + ctx.received(2, 3))
        ab1 = ctx.record("ab1", ctx.h(2, 4) @ X56)
        ab2 = ctx.record("ab2", ctx.h(2, 5) @ X78)
        ac1 = ctx.record("ac1", ctx.h(3, 6) @ X910)
        ac2 = ctx.record("ac2", ctx.h(3, 7) @ X1112)
        yield from order2_slots(ctx, ab1, ab2, ac1, ac2, bc)


class PDD33(Scheme):
    """Ten-slot scheme for three antennas and three receivers, CSIT PDD."""

    descriptor = _describe(
        "pdd33", 3, 3, "PDD", 10,
        [fresh(f"a{i}", 1) for i in range(1, 11)]
        + [fresh(f"b{i}", 2) for i in range(1, 5)]
        + [fresh(f"c{i}", 3) for i in range(1, 5)],
    )

    def plan(self, ctx):
        a = dict(zip(range(1, 11), ctx.syms(*(f"a{i}" for i in range(1, 11)))))
        b = dict(zip(range(1, 5), ctx.syms(*(f"b{i}" for i in range(1, 5)))))
        c = dict(zip(range(1, 5), ctx.syms(*(f"c{i}" for i in range(1, 5)))))

        # phase bc
        X1 = ctx.stack(a[1], a[2], a[3])
        yield ctx.transmit((None, X1))
        A2 = ctx.record("A2", ctx.h(2, 0) @ X1)
        yield ctx.transmit((None, ctx.stack(None, A2)), (ctx.perp(1), ctx.stack(None, b[1], b[2])))
        A3 = ctx.record("A3", ctx.h(3, 0) @ X1)
        yield ctx.transmit((None, ctx.stack(None, None, A3)), (ctx.perp(1), ctx.stack(None, c[1], c[2])))

        # phase (ab, ac)
        X4 = ctx.stack(a[4], a[5], a[6])
        yield ctx.transmit((None, X4), (ctx.perp(1), ctx.stack(None, b[3], b[4])))
        X7 = ctx.stack(a[7], a[8], a[9])
        yield ctx.transmit((None, X7), (ctx.perp(1), ctx.stack(None, c[3], c[4])))
        L4 = ctx.record("L4", ctx.received(3, 3))
        G3 = ctx.record("G3", ctx.received(2, 4))
        P5 = ctx.perp(1)
        X10 = ctx.stack(a[10])
        yield ctx.transmit((None, X10), (P5, ctx.stack(None, L4, G3)))

        # stage 2: the a-parts of what receivers 2 and 3 will isolate
        bc = ctx.record("bc", ctx.received(3, 1) + ctx.received(2, 2))
        A6 = ctx.h(3, 3) @ X4
        A8 = ctx.h(2, 4) @ X7
        ab1 = ctx.record("ab1", ctx.h(2, 3) @ X4)
        ab2 = ctx.record("ab2", ctx.h(2, 5) @ (X10 + P5 @ ctx.stack(None, A6)))
        ac1 = ctx.record("ac1", ctx.h(3, 4) @ X7)
        ac2 = ctx.record("ac2", ctx.h(3, 5) @ (X10 + P5 @ ctx.stack(None, None, A8)))
        yield from order2_slots(ctx, ab1, ab2, ac1, ac2, bc)


class PPD33(Scheme):
    """Four-slot scheme for three antennas and three receivers, CSIT PPD.

    ``c_projector`` selects the projector carrying ``c`` in slot 1:
    ``"current"`` (default) nulls ``h_1(1)`` and ``h_2(1)``; ``"printed"``
    reuses the slot-0 projector, which leaves ``c`` visible to receivers 1
    and 2 in slot 1 and breaks their decoding.
    """

    def __init__(self, c_projector: str = "current"):
        if c_projector not in ("current", "printed"):
            raise Unsupported(f"unknown c_projector {c_projector!r}")
        self.c_projector = c_projector
        self.descriptor = _describe(
            "ppd33" if c_projector == "current" else "ppd33_printed", 3, 3, "PPD", 4,
            [fresh(f"a{i}", 1) for i in range(1, 5)]
            + [fresh(f"b{i}", 2) for i in range(1, 5)]
            + [fresh("c", 3)],
        )

    def plan(self, ctx):
        a = dict(zip(range(1, 5), ctx.syms("a1", "a2", "a3", "a4")))
        b = dict(zip(range(1, 5), ctx.syms("b1", "b2", "b3", "b4")))
        Xc = ctx.stack(ctx.sym("c"))

        P2, P1, P12 = ctx.perp(2), ctx.perp(1), ctx.perp(1, 2)
        Xa, Xb = ctx.stack(a[1], a[2]), ctx.stack(b[1], b[2])
        yield ctx.transmit((P2, Xa), (P1, Xb), (P12, Xc))

        Q2, Q1 = ctx.perp(2), ctx.perp(1)
        Q12 = ctx.perp(1, 2) if self.c_projector == "current" else P12
        Xa2, Xb2 = ctx.stack(a[3], a[4]), ctx.stack(b[3], b[4])
        yield ctx.transmit((Q2, Xa2), (Q1, Xb2), (Q12, Xc))

        # receiver 3's view of the private streams, via delayed CSIT
        A2 = ctx.record("A2", ctx.h(3, 0) @ P2 @ Xa)
        B2 = ctx.record("B2", ctx.h(3, 0) @ P1 @ Xb)
        A4 = ctx.record("A4", ctx.h(3, 1) @ Q2 @ Xa2)
        B4 = ctx.record("B4", ctx.h(3, 1) @ Q1 @ Xb2)
        R2, R1 = ctx.perp(2), ctx.perp(1)
        yield ctx.transmit((R2, ctx.stack(A2)), (R1, ctx.stack(B4)))

        # receiver 3 got rho*A2 + sigma*B4 in slot 2
        rho = ctx.h(3, 2) @ R2[:, 0]
        sigma = ctx.h(3, 2) @ R1[:, 0]
        G1 = ctx.record("G1(B2,B4)", rho * B2 - sigma * B4)
        G2 = ctx.record("G2(A2,A4)", sigma * A4 - rho * A2)
        yield ctx.transmit((ctx.perp(2), ctx.stack(G2)), (ctx.perp(1), ctx.stack(G1)))


class PPPZeroForcing(Scheme):
    """One slot, one stream per receiver through the zero-forcing inverse."""

    def __init__(self, M: int = 3, K: int = 3):
        if M < K:
            raise Unsupported(f"zero-forcing needs M >= K, got M={M}, K={K}")
        if K > 26:
            raise Unsupported("at most 26 receivers")
        self.descriptor = _describe(
            "ppp_zf", M, K, "P" * K, 1,
            [fresh(f"{chr(ord('a') + k - 1)}1", k) for k in range(1, K + 1)],
        )

    def plan(self, ctx):
        d = self.descriptor
        H = np.vstack([ctx.h(k) for k in range(1, d.K + 1)])
        Hh = nx.conj_t(H)
        try:
            V = Hh @ nx.inv(H @ Hh)
        except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
            raise DegenerateProjector("slot channel matrix is rank deficient") from exc
        X = nx.zeros((d.M, d.S), ctx.mode)
        X[: d.K] = np.vstack(ctx.syms(*d.symbol_names))
        # V is M x K; pad to M x M so transmit() can count beams per column
        Vp = nx.zeros((d.M, d.M), ctx.mode)
        Vp[:, : d.K] = V
        yield ctx.transmit((Vp, X))


class Order3Broadcast(Scheme):
    """A single order-3 symbol sent on antenna 1; needs no CSIT at all."""

    def __init__(self, M: int = 2):
        self.descriptor = _describe(
            "order3_broadcast", M, 3, "DDD", 1, [fresh("abc", 1, 2, 3)], order=3, degenerate=(2, 1, 0),
        )

    def plan(self, ctx):
        yield order3_broadcast(ctx, ctx.sym("abc"))


SCHEMES: dict[str, Callable[[], Scheme]] = {
    "pd22": PD22,
    "order2_delivery": Order2Delivery,
    "pdd23": PDD23,
    "pdd33": PDD33,
    "ppd33": PPD33,
    "ppp_zf": PPPZeroForcing,
    "order3_broadcast": Order3Broadcast,
}

#: Builders not listed by default but reachable by name.
VARIANTS: dict[str, Callable[[], Scheme]] = {
    "ppd33_printed": lambda: PPD33("printed"),
    "order2_delivery_m3": lambda: Order2Delivery(3),
}


def pd22() -> Scheme:
    return PD22()


def order2_delivery(M: int = 2) -> Scheme:
    return Order2Delivery(M)


def pdd23() -> Scheme:
    return PDD23()


def pdd33() -> Scheme:
    return PDD33()


def ppd33(c_projector: str = "current") -> Scheme:
    return PPD33(c_projector)


def ppp_zf(M: int = 3, K: int = 3) -> Scheme:
    return PPPZeroForcing(M, K)


def get_scheme(name: str) -> Scheme:
    """Instantiate a scheme by registry name."""
    try:
        return {**SCHEMES, **VARIANTS}[name]()
    except KeyError:
        raise Unsupported(f"unknown scheme {name!r}; known: {', '.join(SCHEMES)}") from None


def list_schemes() -> list[dict]:
    """Metadata rows: name, (M, K), CSIT, slot count and claimed DoF."""
    rows = []
    for name in SCHEMES:
        d = get_scheme(name).descriptor
        rows.append({
            "name": d.name,
            "M": d.M,
            "K": d.K,
            "csit": str(d.csit),
            "T": d.T,
            "order": d.order,
            "dof": d.claimed.sum,
            "tuple": d.claimed.values,
        })
    return rows
