import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_csit import numerics as nx
from hybrid_csit.channel import AuditLog, ChannelRealization, CsitConfig, draw_channel, view
from hybrid_csit.errors import CsitViolation, InvalidInput
from hybrid_csit.numerics import Mode


def test_config_parse():
    cfg = CsitConfig.parse("PDD")
    assert cfg.K == 3
    assert [cfg.state(k) for k in (1, 2, 3)] == ["P", "D", "D"]
    assert str(cfg) == "PDD"


@pytest.mark.parametrize("bad", ["", "PXD"])
def test_config_rejects_bad_states(bad):
    with pytest.raises(InvalidInput):
        CsitConfig.parse(bad)


def test_draw_is_deterministic():
    a = draw_channel(7, 2, 3, 12, Mode.EXACT)
    b = draw_channel(7, 2, 3, 12, Mode.EXACT)
    assert (a.h == b.h).all()


def test_distinct_seeds_differ():
    a = draw_channel(7, 2, 3, 12, Mode.EXACT)
    b = draw_channel(8, 2, 3, 12, Mode.EXACT)
    assert not (a.h == b.h).all()


def test_exact_entries_on_the_stated_lattice():
    real = draw_channel(1, 3, 3, 4, Mode.EXACT)
    for x in real.h.flat:
        for part in (x.re, x.im):
            assert 256 % part.denominator == 0
            num = part * 256
            assert num.denominator == 1 and num != 0 and abs(num) <= 2**16


def test_exact_slots_full_rank_over_100_seeds():
    for seed in range(100):
        real = draw_channel(seed, 3, 3, 1, Mode.EXACT)
        assert nx.rank(real.slot_matrix(0)) == 3


def test_float_draw_is_complex_gaussian():
    real = draw_channel(0, 3, 3, 2000, Mode.FLOAT)
    h = real.h.ravel()
    assert h.dtype == complex
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.05
    assert abs(np.mean(h)) < 0.05


def test_draw_rejects_zero_sizes():
    with pytest.raises(InvalidInput):
        draw_channel(0, 0, 3, 1)


@pytest.mark.parametrize("mode", [Mode.EXACT, Mode.FLOAT])
def test_json_round_trip(mode):
    real = draw_channel(4, 2, 3, 5, mode)
    text = real.to_json()
    back = ChannelRealization.from_json(text)
    assert (back.M, back.K, back.T, back.seed, back.mode) == (2, 3, 5, 4, mode)
    assert (back.h == real.h).all()
    d = json.loads(text)
    assert len(d["h"]) == 3 and len(d["h"][0]) == 5 and len(d["h"][0][0]) == 2
    assert len(d["h"][0][0][0]) == 2


def test_with_vector_copies():
    real = draw_channel(0, 2, 2, 2)
    dup = real.with_vector(2, 0, real.vector(1, 0))
    assert (dup.vector(2, 0) == dup.vector(1, 0)).all()
    assert not (real.vector(2, 0) == real.vector(1, 0)).all()


# -- gated views ----------------------------------------------------------------

def _view(cfg, t, T=4):
    return view(draw_channel(0, 3, len(cfg), T), CsitConfig.parse(cfg), t)


def test_pdd_slot0():
    v = _view("PDD", 0)
    v.get(1, 0)
    with pytest.raises(CsitViolation):
        v.get(2, 0)
    assert [(a.k, a.tau, a.allowed) for a in v.log] == [(1, 0, True), (2, 0, False)]


def test_pdd_slot2_past_allowed():
    v = _view("PDD", 2)
    v.get(2, 1)
    assert v.log.clean


def test_ppd_slot3():
    v = _view("PPD", 3)
    with pytest.raises(CsitViolation):
        v.get(3, 3)
    v.get(3, 2)
    assert len(v.log.violations) == 1


def test_view_rejects_out_of_range_slot():
    with pytest.raises(InvalidInput):
        _view("PDD", 4)


@settings(max_examples=100, deadline=None)
@given(st.text("PD", min_size=1, max_size=3), st.integers(0, 3), st.integers(1, 3), st.integers(0, 3))
def test_gate_rule(cfg, now, k, tau):
    k = min(k, len(cfg))
    log = AuditLog()
    v = view(draw_channel(0, 2, len(cfg), 4), CsitConfig.parse(cfg), now, log)
    expect = tau <= now if cfg[k - 1] == "P" else tau < now
    assert v.allowed(k, tau) == expect
    if expect:
        v.get(k, tau)
        assert log.clean
    else:
        with pytest.raises(CsitViolation):
            v.get(k, tau)
        assert not log.clean
