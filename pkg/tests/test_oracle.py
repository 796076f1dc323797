import ast
import random
from pathlib import Path

import pytest
from hypothesis import given, settings

import spdetect.constructions as constructions
from spdetect import Fsa
from spdetect.crosscheck import corpus
from spdetect.lemmas import check_prop5, check_prop8
from spdetect.oracle import GenConfig, NaiveResult, TooLarge, naive_spd, naive_spdd, random_fsa

from conftest import fsas


def test_naive_golden(s1, s2, s3):
    assert naive_spd(s1) == NaiveResult(False, False, True)
    assert naive_spd(s2) == NaiveResult(False, True, False)
    assert naive_spd(s3).holds is False
    assert naive_spdd(s3, frozenset({s3.states_of("x0", "x2")})).holds is True
    assert naive_spdd(s3, frozenset({s3.states_of("x1", "x2")})).holds is False
    assert naive_spdd(s2, frozenset({s2.states_of("x1", "x2")})).holds is False


def test_guard():
    big = Fsa.from_names([f"x{i}" for i in range(9)], {}, ["x0"], [])
    with pytest.raises(TooLarge):
        naive_spd(big)
    with pytest.raises(TooLarge):
        check_prop5(big)


def test_generator_is_deterministic():
    cfg = GenConfig(states=5, events=4, seed=123)
    assert random_fsa(cfg) == random_fsa(cfg)
    assert random_fsa(cfg) != random_fsa(GenConfig(states=5, events=4, seed=124))
    assert [f for _, f in corpus(20, 7)] == [f for _, f in corpus(20, 7)]


@pytest.mark.parametrize(
    "bad",
    [dict(states=-1), dict(silent_fraction=1.5), dict(density=-0.1), dict(states=2, initial=3), dict(seed=2**64)],
)
def test_generator_rejects(bad):
    with pytest.raises(ValueError):
        GenConfig(**bad)


@pytest.mark.parametrize("frac", [0.0, 0.3, 0.6, 1.0])
def test_generator_validity(frac):
    for seed in range(50):
        cfg = GenConfig(states=4, events=3, silent_fraction=frac, initial=2, seed=seed)
        fsa = random_fsa(cfg)
        assert fsa.n_states == 4 and len(fsa.events) == 3 and len(fsa.initial) == 2
        if frac == 0.0:
            assert None not in fsa.labels
        if frac == 1.0:
            assert set(fsa.labels) == {None}


def test_generator_density():
    rng = random.Random(5)
    total = 0
    for _ in range(1000):
        fsa = random_fsa(GenConfig(states=5, events=3, density=2.0, seed=rng.getrandbits(64)))
        total += len(fsa.transitions)
    mean = total / (1000 * 5)
    assert abs(mean - 2.0) <= 0.4


def test_silent_fraction_is_respected():
    labels = [lab for s in range(400) for lab in random_fsa(GenConfig(events=5, silent_fraction=0.6, seed=s)).labels]
    assert abs(labels.count(None) / len(labels) - 0.6) < 0.05


def test_oracle_is_independent():
    src = Path(__file__).parents[1] / "src" / "spdetect" / "oracle.py"
    imported = set()
    for node in ast.walk(ast.parse(src.read_text())):
        if isinstance(node, ast.ImportFrom) and node.level:
            imported.add(node.module)
    assert imported == {"core"}


@pytest.mark.parametrize("name", ["s1", "s2", "s3"])
def test_lemmas_on_fixtures(name, request):
    fsa = request.getfixturevalue(name)
    assert check_prop5(fsa).ok
    assert check_prop8(fsa).ok


@settings(max_examples=200, deadline=None)
@given(fsas())
def test_lemmas_hold(fsa):
    r5, r8 = check_prop5(fsa), check_prop8(fsa)
    assert r5.ok, r5.counterexample
    assert r8.ok, r8.counterexample


def target_only_links(fsa, pair):
    # compares target pairs and ignores which symbol leads there
    x1, x2 = pair
    if x1 == x2:
        return []
    own = {p for _, p in constructions.pair_successors(fsa, pair)}
    return [(d, d) for d in pair if any(p not in own for _, p in constructions.pair_successors(fsa, (d, d)))]


def test_lemma_check_rejects_target_only_links(monkeypatch):
    fsa = Fsa.from_names(
        ["x0", "x1"],
        {"t0": None, "t1": "c", "t2": "b"},
        ["x0", "x1"],
        [("x0", "t1", "x0"), ("x0", "t2", "x0"), ("x1", "t1", "x0")],
    )
    assert check_prop8(fsa).ok
    monkeypatch.setattr(constructions, "epsilon_links", target_only_links)
    res = check_prop8(fsa)
    assert not res.ok
    assert "{x0,x1} -b-> {x0}" in res.counterexample
