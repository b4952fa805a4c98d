"""Λ(z,s) automata against direct iteration of μ, their identities, and the
empty-intersection result.  Also compares with the hand-drawn automata."""

import pytest
from hypothesis import given, strategies as st

from adicamata import biminimality as bm

SMALL = range(-300, 301)


# -- integer automata on their own ---------------------------------------------

@given(st.integers(-10**5, 10**5))
def test_int_word_value(n):
    w = bm.int_word(n)
    bits = "".join(w.prefix)
    v = int(bits[::-1], 2) if bits else 0
    if w.cycle == ("1",):
        v -= 1 << len(bits)
    assert v == n


def odd_multiples_of_four():
    # n ≡ 4 mod 8
    states = ["s0", "s1", "s2", "ok", "no"]
    d = {("s0", "0"): "s1", ("s0", "1"): "no", ("s1", "0"): "s2", ("s1", "1"): "no",
         ("s2", "0"): "no", ("s2", "1"): "ok", ("ok", "0"): "ok", ("ok", "1"): "ok",
         ("no", "0"): "no", ("no", "1"): "no"}
    return bm.IntegerAutomaton.build(states, d, "s0", {"ok": frozenset("01")})


def test_integer_automaton_bruteforce():
    L = odd_multiples_of_four()
    assert L.members(-40, 40) == [n for n in range(-40, 41) if n % 8 == 4]


@given(st.integers(-500, 500))
def test_negate_affine_complement(n):
    L = odd_multiples_of_four()
    assert bm.negate(L).accepts(n) == ((-n) % 8 == 4)
    assert bm.complement(L).accepts(n) == (n % 8 != 4)
    for r in (0, 1):
        assert bm.affine(L, r).accepts(n) == ((n - r) % 2 == 0 and ((n - r) // 2) % 8 == 4)


def test_negate_involution(system):
    for s in system.automaton.states:
        L = system.automaton_for("x", s)
        assert bm.language_equal(bm.negate(bm.negate(L)), L)


def test_minimize_is_canonical():
    L = odd_multiples_of_four()
    assert bm.language_equal(bm.union(L, bm.nothing()), L)
    assert bm.language_equal(bm.union(L, bm.complement(L)), bm.everything())
    assert not bm.language_equal(L, bm.nothing())


# -- the system ------------------------------------------------------------------

def test_seeds(system):
    assert system.seeds == bm.REFERENCE_SEEDS
    system.check_seeds(bm.REFERENCE_SEEDS)


def test_seed_mismatch_raises(system):
    with pytest.raises(bm.ConstructionError):
        system.check_seeds({"x": {0: "e", -1: "a"}})


def test_shift_closed(system):
    assert system.shift_names == {"x": "y", "y": "x"}


def test_oracle(system):
    res = bm.oracle_check(system, 256)
    assert res["pass"] and res["checked"] == 2 * 6 * 513


def test_orbit_oracle_direct(system, mu, A):
    orbit = bm.orbit_oracle(mu, A, system.bases["x"], 4)
    assert orbit[0] == "e" and orbit[-1] == "b"


def test_partition(system):
    assert bm.partition_identity(system, "x")
    assert bm.partition_identity(system, "y")


def test_recursion(system):
    ids = bm.recursion_identities(system)
    assert len(ids) == 12 and all(ids.values())


def test_report(system):
    rep = bm.biminimality_report(system, oracle_range=64)
    assert rep["intersection_empty"]
    assert rep["swapped_intersection_empty"]
    assert rep["sanity_nonempty"]
    assert rep["witness"] is None
    assert rep["oracle_mismatches"] == 0
    assert rep["leading_zeros"]["-Lambda(x,d)"]["odd"] and not rep["leading_zeros"]["-Lambda(x,d)"]["even"]
    assert rep["leading_zeros"]["Lambda(y,e)"]["even"] and not rep["leading_zeros"]["Lambda(y,e)"]["odd"]


def test_intersection_bruteforce(system, mu, A):
    # independent of the automata: iterate μ both ways
    ox = bm.orbit_oracle(mu, A, system.bases["x"], 200)
    oy = bm.orbit_oracle(mu, A, system.bases["y"], 200)
    assert not [n for n in range(-200, 201) if ox[n] == "d" and oy[-n] == "e"]


# -- hand-drawn automata -----------------------------------------------------------

def test_small_drawings_match(system):
    xd, ye = system.automaton_for("x", "d"), system.automaton_for("y", "e")
    assert bm.language_equal(bm.figure_lambda_xd(), xd)
    assert bm.language_equal(bm.figure_lambda_xd(swap_tails=True), bm.negate(xd))
    assert bm.language_equal(bm.figure_lambda_ye(), ye)


def test_regex_aligned(system):
    xd = system.automaton_for("x", "d")
    assert all(bm.regex_lambda_xd(n) == xd.accepts(n) for n in SMALL)


def test_regex_literal_overcounts(system):
    xd = system.automaton_for("x", "d")
    assert not xd.accepts(-6) and bm.regex_lambda_xd(-6, aligned=False)


@pytest.mark.parametrize("which", ["x", "y"])
def test_large_drawing_differs_only_at_seeds(system, which):
    for s in system.automaton.states:
        F, L = bm.figure_automaton(which, s), system.automaton_for(which, s)
        bad = {n for n in SMALL if F.accepts(n) != L.accepts(n)}
        assert bad <= {0, -1}
