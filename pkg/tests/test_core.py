import itertools

import pytest
from hypothesis import given, settings

from spdetect import Fsa, FsaError
from spdetect.core import (
    check_assumption1,
    current_state_estimate,
    divergent_states,
    observable_reach,
    reachable_states,
    silent_lasso,
    spec_pairs,
    unobservable_reach,
)

from conftest import fsas


def naive_ur(fsa, start):
    # fixpoint by repeated sweeps over the transition list
    got = set(start)
    while True:
        more = {b for a, e, b in fsa.transitions if a in got and fsa.labels[e] is None} - got
        if not more:
            return tuple(sorted(got))
        got |= more


def naive_divergent(fsa):
    # x diverges iff a silent path of n+1 states exists from x
    n = fsa.n_states
    silent = {(a, b) for a, e, b in fsa.transitions if fsa.labels[e] is None}
    frontier = {(x,) for x in range(n)}
    for _ in range(n):
        frontier = {p + (b,) for p in frontier for a, b in silent if a == p[-1]}
    return tuple(sorted({p[0] for p in frontier}))


def test_from_names_derives_alphabet_in_order():
    fsa = Fsa.from_names(["p", "q"], {"u": "b", "v": None, "w": "a"}, ["p"], [("p", "u", "q")])
    assert fsa.alphabet == ("b", "a")
    assert fsa.labels == (0, None, 1)
    assert fsa.initial == (0,)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(states=["a", "a"], events={}, initial=["a"], transitions=[]),
        dict(states=["a"], events={}, initial=["b"], transitions=[]),
        dict(states=["a"], events={"t": "s"}, initial=["a"], transitions=[("a", "t", "a"), ("a", "t", "a")]),
        dict(states=["a"], events={"t": "s"}, initial=["a"], transitions=[("a", "u", "a")]),
        dict(states=["a b"], events={}, initial=[], transitions=[]),
    ],
)
def test_rejects_malformed(kwargs):
    with pytest.raises(FsaError):
        Fsa.from_names(**kwargs)


def test_unknown_symbol(s1):
    with pytest.raises(FsaError):
        observable_reach(s1, [0], 7)


def test_s2_estimates(s2):
    x = s2.states_of
    a = s2.symbol("a")
    assert current_state_estimate(s2, ()) == x("x0")
    assert current_state_estimate(s2, (a,)) == x("x1", "x2")
    assert current_state_estimate(s2, (a, a)) == ()


def test_spec_pairs_are_ordered(s3):
    assert spec_pairs(s3, [("x1", "x2")]) == {(1, 2)}


@settings(max_examples=150, deadline=None)
@given(fsas())
def test_unobservable_reach_is_closure(fsa):
    for k in range(fsa.n_states + 1):
        for start in itertools.combinations(range(fsa.n_states), k):
            ur = unobservable_reach(fsa, start)
            assert ur == naive_ur(fsa, start)
            assert set(start) <= set(ur)
            assert unobservable_reach(fsa, ur) == ur


@settings(max_examples=150, deadline=None)
@given(fsas())
def test_estimate_recurrence(fsa):
    words = [w for k in range(4) for w in itertools.product(range(len(fsa.alphabet)), repeat=k)]
    for w in words:
        est = current_state_estimate(fsa, w)
        for s in range(len(fsa.alphabet)):
            nxt = current_state_estimate(fsa, w + (s,))
            assert nxt == unobservable_reach(fsa, observable_reach(fsa, est, s))
            if not est:
                assert nxt == ()


@settings(max_examples=200, deadline=None)
@given(fsas())
def test_divergent_states_match_path_enumeration(fsa):
    div = divergent_states(fsa)
    assert div == naive_divergent(fsa)
    for x in range(fsa.n_states):
        lasso = silent_lasso(fsa, x)
        assert (lasso is not None) == (x in div)
        if lasso:
            walk = lasso.prefix + lasso.cycle
            assert walk[0][0] == x
            assert all(t in fsa.transitions and fsa.labels[t[1]] is None for t in walk)
            assert all(a[2] == b[0] for a, b in zip(walk, walk[1:]))
            assert lasso.cycle and lasso.cycle[0][0] == lasso.cycle[-1][2]


def test_reachable_states_skip_isolated(s3):
    extra = Fsa.from_names(
        list(s3.states) + ["x9"],
        dict(zip(s3.events, (s3.alphabet[l] for l in s3.labels))),
        ["x0"],
        [(s3.states[a], s3.events[e], s3.states[b]) for a, e, b in s3.transitions],
    )
    assert reachable_states(extra) == extra.states_of("x0", "x1", "x2")


def test_assumption1_s1(s1):
    rep = check_assumption1(s1)
    assert rep.holds
    assert (rep.deadlock_free, rep.divergence_free) == (True, True)
    assert rep.deadlock_witness is None and rep.divergence_witness is None


def test_assumption1_s2(s2):
    rep = check_assumption1(s2)
    assert (rep.deadlock_free, rep.divergence_free) == (False, False)
    assert rep.deadlock_witness == s2.state("x1")
    x2 = s2.state("x2")
    assert rep.divergence_witness == (x2, x2)


def test_assumption1_ignores_unreachable():
    fsa = Fsa.from_names(
        ["a", "b"], {"t": "s", "u": None}, ["a"], [("a", "t", "a"), ("b", "u", "b")]
    )
    assert check_assumption1(fsa).holds
