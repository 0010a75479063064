from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_csit import numerics as nx
from hybrid_csit.channel import draw_channel
from hybrid_csit.core import run_scheme
from hybrid_csit.errors import DegenerateProjector, InvalidInput
from hybrid_csit.numerics import CRational, Mode, exact_matrix
from hybrid_csit.schemes import ppd33, order2_delivery

from oracles import sympy_matrix, sympy_rank

small = st.integers(-6, 6)
entry = st.tuples(small, small)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))


# -- CRational ----------------------------------------------------------------

def test_crational_arithmetic_is_exact():
    x = CRational(Fraction(1, 3), 2)
    y = CRational(-1, Fraction(1, 7))
    assert x * y / y == x
    assert (x + y) - y == x
    assert x * x.conjugate() == CRational(x.abs2())
    assert complex(CRational(1, -1)) == 1 - 1j


def test_crational_rejects_floats():
    with pytest.raises(InvalidInput):
        nx.to_exact(0.5)


def test_mixed_modes_rejected():
    m = np.array([[CRational(1), 2.0]], dtype=object)
    with pytest.raises(InvalidInput):
        nx.mode_of(m)


# -- rank -----------------------------------------------------------------------

def test_rank_identity():
    assert nx.rank(nx.eye(2, Mode.EXACT)) == 2
    assert nx.rank(np.eye(2, dtype=complex)) == 2


def test_rank_proportional_rows():
    assert nx.rank(exact_matrix([[1, 2], [2, 4]])) == 1


def test_rank_empty_raises():
    with pytest.raises(InvalidInput):
        nx.rank(np.zeros((0, 3), dtype=object))


def test_rank_receiver3_undesired_block_fixture(oracle_rank):
    # receiver 3's interference in one exact ppd33 run: 8 private streams
    # squeezed into T - 1 = 3 dimensions, leaving one for c
    tr = run_scheme(ppd33(), draw_channel(11, 3, 3, 4, Mode.EXACT))
    undesired = [n for n in tr.symbol_names if n != "c"]
    block = tr.G[3][:, tr.columns(undesired)]
    assert block.shape == (4, 8)
    assert nx.rank(block) == oracle_rank(block) == 3
    # slots 0-2 alone already carry full-rank interference
    assert nx.rank(block[:3]) == oracle_rank(block[:3]) == 3


@settings(max_examples=60, deadline=None)
@given(matrices(4, 5))
def test_rank_matches_sympy(data):
    m = exact_matrix(data)
    assert nx.rank(m) == sympy_rank(m)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4), st.randoms(use_true_random=False),
       st.lists(st.tuples(st.integers(1, 9), st.integers(-9, 9)), min_size=4, max_size=4))
def test_rank_invariant_under_permutation_and_scaling(data, rnd, scales):
    m = exact_matrix(data)
    perm = list(range(m.shape[0]))
    rnd.shuffle(perm)
    scaled = m[perm].copy()
    for i in range(scaled.shape[0]):
        scaled[i] = scaled[i] * CRational(*scales[i])
    assert nx.rank(scaled) == nx.rank(m)
    assert nx.rank(nx.float_matrix(scaled)) == nx.rank(m)


def test_float_rank_agrees_with_exact_on_draws():
    for seed in range(10):
        real = draw_channel(seed, 3, 3, 1, Mode.EXACT)
        H = real.slot_matrix(0)
        assert nx.rank(H) == nx.rank(nx.float_matrix(H)) == 3


# -- projector ----------------------------------------------------------------

def test_projector_axis_aligned():
    P = nx.orth_projector([exact_matrix([[1, 0]])[0]], 2)
    assert (P == exact_matrix([[0, 0], [0, 1]])).all()


def test_projector_diagonal():
    P = nx.orth_projector([exact_matrix([[1, 1]])[0]], 2)
    h = Fraction(1, 2)
    assert (P == exact_matrix([[h, -h], [-h, h]])).all()


def test_projector_two_rows_in_three_dims(oracle_rank):
    real = draw_channel(3, 3, 3, 1, Mode.EXACT)
    h1, h2 = real.vector(1, 0), real.vector(2, 0)
    P = nx.orth_projector([h1, h2], 3)
    assert nx.is_zero(h1 @ P) and nx.is_zero(h2 @ P)
    assert oracle_rank(P) == 1
    # independent check: sympy's nullspace of [h1; h2] spans P's columns
    H = sympy_matrix(np.vstack([h1, h2]))
    assert len(H.nullspace()) == 1
    assert (H * sympy_matrix(P)).expand().is_zero_matrix


def test_projector_full_span_raises():
    with pytest.raises(DegenerateProjector):
        nx.orth_projector(list(exact_matrix([[1, 0], [0, 1]])), 2)


def test_projector_of_zero_row_is_identity():
    P = nx.orth_projector([exact_matrix([[0, 0, 0]])[0]], 3)
    assert (P == nx.eye(3, Mode.EXACT)).all()


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 4).flatmap(
    lambda M: st.tuples(st.just(M), st.lists(st.lists(entry, min_size=M, max_size=M), min_size=1, max_size=M - 1))))
def test_projector_properties(args):
    M, rows = args
    H = exact_matrix(rows)
    P = nx.orth_projector(list(H), M)
    assert ((P @ P) == P).all()
    assert (nx.conj_t(P) == P).all()
    assert nx.is_zero(H @ P)
    assert sympy_rank(P) == M - sympy_rank(H)


def test_float_projector_properties():
    rng = np.random.default_rng(0)
    H = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
    P = nx.orth_projector(list(H), 4)
    assert np.allclose(P @ P, P) and np.allclose(P.conj().T, P)
    assert np.abs(H @ P).max() < 1e-12


# -- zero-forcer ---------------------------------------------------------------

def test_zero_forcer_identity():
    W = nx.solve_zero_forcer(nx.eye(3, Mode.EXACT), [0, 1, 2])
    assert (W == nx.eye(3, Mode.EXACT)).all()


def test_zero_forcer_inseparable():
    assert nx.solve_zero_forcer(exact_matrix([[1, 1]]), [0]) is None


def test_zero_forcer_order2_receiver2():
    tr = run_scheme(order2_delivery(), draw_channel(5, 2, 3, 4, Mode.EXACT))
    G = tr.G[2]
    D = tr.columns(["ab1", "ab2", "bc"])
    W = nx.solve_zero_forcer(G, D)
    assert W is not None
    out = W @ G
    rest = [j for j in range(G.shape[1]) if j not in D]
    assert (out[:, D] == nx.eye(3, Mode.EXACT)).all()
    assert nx.is_zero(out[:, rest])


def _sympy_separable(G, D):
    # independent criterion: some W with W G = E_D exists iff the selector
    # rows lie in the row space of G
    A = sympy_matrix(G)
    E = sympy_matrix(nx.eye(G.shape[1], Mode.EXACT)[D])
    return A.T.rank() == A.T.row_join(E.T).rank()


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4), st.data())
def test_zero_forcer_feasibility_matches_sympy(data, draw):
    G = exact_matrix(data)
    D = draw.draw(st.lists(st.integers(0, G.shape[1] - 1), min_size=1, unique=True))
    W = nx.solve_zero_forcer(G, D)
    assert (W is not None) == _sympy_separable(G, D)
    if W is not None:
        out = W @ G
        rest = [j for j in range(G.shape[1]) if j not in D]
        assert (out[:, D] == nx.eye(len(D), Mode.EXACT)).all()
        assert nx.is_zero(out[:, rest]) if rest else True


def test_float_zero_forcer_matches_exact():
    tr = run_scheme(order2_delivery(), draw_channel(5, 2, 3, 4, Mode.EXACT))
    G = tr.G[3]
    D = tr.columns(["ac1", "ac2", "bc"])
    Gf = nx.float_matrix(G)
    W = nx.solve_zero_forcer(Gf, D)
    out = W @ Gf
    assert np.allclose(out[:, D], np.eye(3), atol=1e-9)
    rest = [j for j in range(G.shape[1]) if j not in D]
    assert np.abs(out[:, rest]).max() < 1e-9
