"""Strong periodic (D-)detectability of partially observed finite automata."""

from .constructions import (
    BudgetExceeded,
    CompositionAutomaton,
    Detector,
    EmptyInitial,
    Observer,
    PairEvent,
    build_detector,
    build_epsilon_composition,
    build_observer,
    build_self_composition,
    extend_epsilon,
    one_observable_step_graph,
)
from .core import (
    Assumption1Report,
    Fsa,
    FsaError,
    check_assumption1,
    current_state_estimate,
    divergent_states,
    observable_reach,
    reachable_states,
    spec_pairs,
    unobservable_reach,
)
from .verify import (
    Verdict,
    check_spd_cc,
    check_spd_detector,
    check_spd_observer,
    check_spdd_observer,
    legacy_check_sd_detector,
    legacy_check_spd_detector,
    legacy_check_spdd_observer,
)

__version__ = "0.1.0"
