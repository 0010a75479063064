import json
from fractions import Fraction

import numpy as np
import pytest

from hybrid_csit import numerics as nx
from hybrid_csit.channel import draw_channel
from hybrid_csit.core import DofTuple, Symbol, counting_dof, fresh, run_scheme, simulate_outputs
from hybrid_csit.errors import ConfigMismatch, CsitViolation, DimensionMismatch, InvalidInput
from hybrid_csit.numerics import Mode
from hybrid_csit.schemes import SCHEMES, Order2Delivery, get_scheme, order2_slots, pd22, pdd23, ppp_zf

F = Fraction


def _run(name, seed=0, mode=Mode.EXACT):
    sc = get_scheme(name)
    d = sc.descriptor
    real = draw_channel(seed, d.M, d.K, d.T, mode)
    return sc, real, run_scheme(sc, real)


def test_symbol_order_and_validation():
    assert fresh("ab", 1, 2).order == 2
    with pytest.raises(InvalidInput):
        Symbol("x", frozenset())


def test_doftuple_sum_and_nonnegative():
    assert DofTuple(("d1", "d2"), (F(1), F(1, 2))).sum == F(3, 2)
    with pytest.raises(InvalidInput):
        DofTuple(("d1",), (F(-1),))


def test_pd22_transcript_shape():
    _, _, tr = _run("pd22")
    assert tr.symbol_names == ("a1", "a2", "b")
    assert tr.T == 2
    assert all(g.shape == (2, 3) for g in tr.G.values())


def test_ppp_zf_is_interference_free():
    _, _, tr = _run("ppp_zf", 3)
    assert tr.T == 1
    for k, own in ((1, "a1"), (2, "b1"), (3, "c1")):
        others = [n for n in tr.symbol_names if n != own]
        assert nx.is_zero(tr.G[k][:, tr.columns(others)])
        assert not nx.is_zero(tr.G[k][:, tr.columns([own])])


def test_config_mismatch():
    sc = pdd23()
    real = draw_channel(0, 2, 3, 12)
    with pytest.raises(ConfigMismatch):
        run_scheme(sc, real, "PPD")


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        run_scheme(pdd23(), draw_channel(0, 3, 3, 12))
    with pytest.raises(DimensionMismatch):
        run_scheme(pdd23(), draw_channel(0, 2, 3, 11))


class _Peeking(Order2Delivery):
    """order2_delivery that also reads receiver 2's current channel."""

    def plan(self, ctx):
        gen = order2_slots(ctx, *ctx.syms("ab1", "ab2", "ac1", "ac2", "bc"))
        B = next(gen)
        ctx.h(2)
        yield B
        yield from gen


def test_current_read_of_delayed_receiver_is_rejected():
    with pytest.raises(CsitViolation):
        run_scheme(_Peeking(), draw_channel(0, 2, 3, 4))


@pytest.mark.parametrize("name", sorted(SCHEMES))
@pytest.mark.parametrize("mode", [Mode.EXACT, Mode.FLOAT])
def test_linearity_unit_vectors(name, mode):
    _, real, tr = _run(name, 2, mode)
    S = len(tr.symbols)
    for j in range(S):
        e = nx.zeros(S, mode)
        e[j] = nx.ONE if mode is Mode.EXACT else 1.0
        out = simulate_outputs(tr, real, e)
        for k, y in out.items():
            if mode is Mode.EXACT:
                assert (y == tr.G[k][:, j]).all()
            else:
                assert np.allclose(y, tr.G[k][:, j], atol=1e-12)


def test_linearity_random_symbols():
    _, real, tr = _run("pdd23", 1, Mode.FLOAT)
    s = np.random.default_rng(0).standard_normal(len(tr.symbols)) + 0j
    for k, y in simulate_outputs(tr, real, s).items():
        assert np.allclose(y, tr.G[k] @ s)


@pytest.mark.parametrize("name", sorted(SCHEMES))
def test_plans_and_power_split(name):
    _, _, tr = _run(name)
    assert [p.t for p in tr.plans] == list(range(tr.T))
    for p in tr.plans:
        assert all(w >= 0 for w in p.power_split)
        assert sum(p.power_split) <= 1 + 1e-12
        assert p.energy > 0


def test_counting_examples():
    assert counting_dof(pdd23()).values == (1, F(1, 3), F(1, 3))
    assert counting_dof(get_scheme("pdd33")).values == (1, F(2, 5), F(2, 5))
    assert counting_dof(get_scheme("ppd33")).values == (1, 1, F(1, 4))
    assert counting_dof(pd22()).values == (1, F(1, 2))
    assert counting_dof(ppp_zf()).sum == 3


@pytest.mark.parametrize("name", sorted(SCHEMES))
def test_claimed_equals_counting(name):
    sc = get_scheme(name)
    assert sc.descriptor.claimed == counting_dof(sc)


def test_drop_slots():
    _, _, tr = _run("pdd23")
    short = tr.drop_slots(8, 10)
    assert short.T == 10
    assert short.slots == tuple(t for t in range(12) if t not in (8, 10))
    assert (short.G[1] == np.delete(tr.G[1], [8, 10], axis=0)).all()


def test_transcript_json():
    _, _, tr = _run("pd22")
    d = json.loads(tr.to_json())
    assert d["targets"] == {"1": ["a1", "a2"], "2": ["b"]}
    assert len(d["G"]["1"]) == 2 and len(d["G"]["1"][0]) == 3
    assert [s["name"] for s in d["ledger"]] == ["a1", "a2", "b"]
