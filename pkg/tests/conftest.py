import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from spdetect import Fsa
from spdetect.fsaio import parse_fsa

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse_fsa((FIXTURES / f"{name}.fsa").read_text(), str(FIXTURES / f"{name}.fsa"))


@pytest.fixture
def s1():
    return load("s1").fsa


@pytest.fixture
def s2():
    return load("s2").fsa


@pytest.fixture
def s3():
    return load("s3").fsa


@st.composite
def fsas(draw, max_states=5, max_events=4, symbols=("a", "b")):
    """Small automata with arbitrary silent/observable mixes."""
    n = draw(st.integers(1, max_states))
    m = draw(st.integers(0, max_events))
    states = [f"x{i}" for i in range(n)]
    labels = draw(st.lists(st.sampled_from((None,) + tuple(symbols)), min_size=m, max_size=m))
    events = {f"t{i}": lab for i, lab in enumerate(labels)}
    triples = [(a, e, b) for a in states for e in events for b in states]
    trans = draw(st.lists(st.sampled_from(triples), unique=True, max_size=min(len(triples), 3 * n))) if triples else []
    initial = draw(st.lists(st.sampled_from(states), unique=True, min_size=1, max_size=min(2, n)))
    return Fsa.from_names(states, events, initial, trans)


@st.composite
def a1_fsas(draw):
    """Deadlock-free, divergence-free automata.

    Silent transitions only climb in state index; states left without moves
    get an observable self-loop.
    """
    fsa = draw(fsas())
    trans = [
        (a, e, b) for a, e, b in fsa.transitions if fsa.labels[e] is not None or a < b
    ]
    events = {e: (None if lab is None else fsa.alphabet[lab]) for e, lab in zip(fsa.events, fsa.labels)}
    events["loop"] = "a"
    busy = {a for a, _, _ in trans}
    trans += [(x, len(fsa.events), x) for x in range(fsa.n_states) if x not in busy]
    names = fsa.states
    return Fsa.from_names(
        names,
        events,
        [names[x] for x in fsa.initial],
        [(names[a], list(events)[e], names[b]) for a, e, b in trans],
    )


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
