import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fle import (
    EdgeLengthMode,
    PolygonalCurve,
    PreconditionError,
    check_preconditions,
    decide_alt_godau,
    decide_greedy,
    fig8_counterexample_search,
    subcurve,
)
from fle.freespace import WorkCounter
from support import long_edge_pair, near_boundary

STRICT, NON_STRICT, ONE_SIDED = EdgeLengthMode.STRICT, EdgeLengthMode.NON_STRICT, EdgeLengthMode.ONE_SIDED
LINE = PolygonalCurve([(0, 0), (10, 0)])


def curve_with_edges(*lengths):
    xs = np.concatenate([[0.0], np.cumsum(lengths)])
    return PolygonalCurve([(float(x), 0.0) for x in xs])


@pytest.mark.parametrize("lp,lq,mode,expected", [
    (10, 10, STRICT, True),
    (2, 3, STRICT, False),
    (2, 3, NON_STRICT, True),
    (0.1, 5, ONE_SIDED, True),
    (0.1, 4, ONE_SIDED, False),
])
def test_check_preconditions_examples(lp, lq, mode, expected):
    assert check_preconditions(curve_with_edges(lp, 20), curve_with_edges(lq, 20), 1.0, mode) is expected


def test_decide_examples():
    yes = decide_greedy(LINE, PolygonalCurve([(0, 0.5), (10, 0.5)]), 1.0)
    assert yes.verdict and yes.witness.gammas == (1.0, 2.0)
    assert not decide_greedy(LINE, PolygonalCurve([(0, 3), (10, 3)]), 1.0).verdict


def test_precondition_violation_raises():
    short = PolygonalCurve([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(PreconditionError):
        decide_greedy(short, LINE, 1.0)


def test_nonstrict_no_means_at_least():
    dec = decide_greedy(LINE, PolygonalCurve([(0, 3), (10, 3)]), 1.0, NON_STRICT)
    assert dec.meaning == ">= eps"


@pytest.mark.parametrize("seed,mode", list(enumerate(EdgeLengthMode)))
def test_verdict_matches_oracle(seed, mode):
    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(150):
        P, Q = long_edge_pair(rng, mode, max_n=20)
        if near_boundary(P, Q, 1.0):
            continue
        checked += 1
        assert decide_greedy(P, Q, 1.0, mode).verdict == decide_alt_godau(P, Q, 1.0)
    assert checked > 100


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(EdgeLengthMode)))
def test_witness_pieces_are_valid(seed, mode):
    P, Q = long_edge_pair(np.random.default_rng(seed), mode, max_n=15)
    dec = decide_greedy(P, Q, 1.0, mode)
    if not dec.verdict:
        return
    g = dec.witness.gammas
    assert g[0] == 1.0 and g[-1] == P.n
    assert all(a <= b for a, b in zip(g, g[1:]))
    for a, b, i in dec.witness.pieces():
        assert decide_alt_godau(subcurve(P, a, b), PolygonalCurve([Q.vertex(i), Q.vertex(i + 1)]), 1.0)


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_prefixes_are_maximal(seed):
    P, Q = long_edge_pair(np.random.default_rng(seed), STRICT, max_n=15)
    dec = decide_greedy(P, Q, 1.0)
    if not dec.verdict:
        return
    for a, b, i in dec.witness.pieces():
        if b >= P.n:
            continue
        h = 1e-4 * (P.n - b)
        seg = PolygonalCurve([Q.vertex(i), Q.vertex(i + 1)])
        assert not decide_alt_godau(subcurve(P, a, b + h), seg, 1.0)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(EdgeLengthMode)))
def test_work_is_linear(seed, mode):
    P, Q = long_edge_pair(np.random.default_rng(seed), mode, max_n=40)
    counter = WorkCounter()
    decide_greedy(P, Q, 1.0, mode, counter=counter)
    assert counter.vertices <= P.n + 2 * Q.n


def test_work_at_scale():
    rng = np.random.default_rng(5)
    P, Q = long_edge_pair(rng, STRICT, max_n=3000)
    dec = decide_greedy(P, Q, 1.0)
    assert dec.work <= P.n + 2 * Q.n


def test_fig8_search_finds_mismatch():
    found = fig8_counterexample_search(1.0, 10**5, 42)
    assert found is not None
    P, Q = found
    assert decide_greedy(P, Q, 1.0, check=False).verdict != decide_alt_godau(P, Q, 1.0)
    assert not check_preconditions(P, Q, 1.0, STRICT)
    lens = [P.edge(i).length for i in range(1, P.n)] + [Q.edge(i).length for i in range(1, Q.n)]
    assert min(lens) >= 2.0 - 1e-12 and max(lens) <= 1.0 + math.sqrt(2.0) + 1e-12


def test_fig8_search_without_trials():
    assert fig8_counterexample_search(1.0, 0, 42) is None


def test_fig8_search_rejects_bad_eps():
    with pytest.raises(ValueError):
        fig8_counterexample_search(0.0, 10, 1)
