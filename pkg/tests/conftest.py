import random

import pytest
from hypothesis import strategies as st

from adicamata import adic, biminimality as bm
from adicamata.safety_automata import SafetyAutomaton, UltimatelyPeriodicWord
from adicamata.words import thue_morse_collared


@pytest.fixture(scope="session")
def collared():
    return thue_morse_collared()


@pytest.fixture(scope="session")
def diagram(collared):
    return adic.build_bratteli(collared)


@pytest.fixture(scope="session")
def A(diagram):
    return adic.build_path_automaton(diagram)


@pytest.fixture(scope="session")
def mu(diagram):
    return adic.build_adic_transducer(diagram)


@pytest.fixture(scope="session")
def system(A, mu):
    return bm.default_system(A, mu)


@pytest.fixture
def rng():
    return random.Random(1234)


# -- strategies ---------------------------------------------------------------

def up_words(alphabet, max_prefix=5, max_cycle=5):
    letters = st.sampled_from(tuple(alphabet))
    return st.builds(
        lambda p, c: UltimatelyPeriodicWord(tuple(p), tuple(c)),
        st.lists(letters, max_size=max_prefix),
        st.lists(letters, min_size=1, max_size=max_cycle),
    )


@st.composite
def small_automata(draw, alphabet=("0", "1"), max_states=4):
    n = draw(st.integers(1, max_states))
    states = tuple(f"q{i}" for i in range(n))
    trans = draw(st.sets(st.tuples(st.sampled_from(states), st.sampled_from(alphabet),
                                   st.sampled_from(states)), max_size=2 * n * len(alphabet)))
    init = draw(st.sets(st.sampled_from(states), min_size=1))
    return SafetyAutomaton(states, tuple(alphabet), frozenset(trans), frozenset(init))


def random_path(A, rng, n):
    """A uniformly-stepped random path of length n in A (start included)."""
    q = rng.choice(A.states)
    start, labels = q, []
    for _ in range(n):
        a, q = rng.choice(A.successors[q])
        labels.append(a)
    return adic.PathWord(start, tuple(labels))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
