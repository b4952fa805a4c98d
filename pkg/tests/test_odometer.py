"""2-adic arithmetic against exact rationals, the factor map, fibres against
a finite path count, the cocycle conjugacy, and M / D."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adicamata import odometer as od
from adicamata.adic import PathWord
from adicamata.pipeline import random_non_integer
from adicamata.safety_automata import UltimatelyPeriodicWord, language_equal
from adicamata import transducers as T

from conftest import up_words

U = UltimatelyPeriodicWord
Dy = od.DyadicWord


def dyadics():
    return up_words("01", 5, 5).map(Dy)


# -- arithmetic ------------------------------------------------------------------

def test_parse_three():
    assert Dy.parse("110(0)").to_int() == 3


@pytest.mark.parametrize("n", [0, 1, -1, 2, -2, 5, -6, 1023, -1024])
def test_from_int_roundtrip(n):
    assert Dy.from_int(n).to_int() == n


@given(st.integers(-10**6, 10**6))
def test_from_int_roundtrip_hyp(n):
    x = Dy.from_int(n)
    assert x.is_integer and x.to_int() == n and x.to_fraction() == n


@given(dyadics())
def test_add_one_exact(x):
    assert od.add_one(x).to_fraction() == x.to_fraction() + 1


@given(dyadics())
def test_subtract_inverts_add(x):
    assert od.subtract_one(od.add_one(x)) == x


@given(dyadics())
def test_double_and_negate(x):
    assert od.double(x).to_fraction() == 2 * x.to_fraction()
    assert od.negate_dyadic(x).to_fraction() == -x.to_fraction()


def test_one_third():
    # (10)^ω = 1 + 4 + 16 + … = -1/3
    assert Dy.parse("(10)").to_fraction() == Fraction(-1, 3)


def test_leading_zeros():
    assert Dy.parse("001(0)").leading_zeros() == 2
    assert Dy.parse("(0)").leading_zeros() is None


def test_bad_bits():
    with pytest.raises(ValueError):
        Dy(U((), ("2",)))


# -- ℬ and the factor map ---------------------------------------------------------

def test_B_tau_is_add_one():
    tau = od.build_B_tau()
    for x in ["(0)", "(1)", "1(0)", "11(0)", "(01)", "0(110)"]:
        d = Dy.parse(x)
        assert T.apply(tau, d.bits) == od.add_one(d).bits


@settings(max_examples=60, deadline=None)
@given(dyadics())
def test_B_tau_random(x):
    assert T.apply(od.build_B_tau(), x.bits) == od.add_one(x).bits


@settings(max_examples=60, deadline=None)
@given(dyadics())
def test_B_zeta_is_doubling(x):
    assert T.apply(od.build_B_zeta(), x.bits) == od.double(x).bits


def test_factor(A, mu):
    res = od.check_factor(A, mu)
    assert res == {"morphism_A_B": True, "morphism_mu_tau": True, "tau_pi": True,
                   "zeta_pi": True, "pass": True}


def test_find_morphism_negative():
    # a 2-cycle over 0 has no morphism to a single 1-loop
    from adicamata.safety_automata import from_edges
    A = from_edges([("p", "0", "q"), ("q", "0", "p")])
    B = from_edges([("s", "1", "s")], alphabet=("0", "1"))
    assert od.find_morphism(A, B) is None


# -- fibres ------------------------------------------------------------------------

def finite_fiber(A, x, n=24, lookahead=24):
    """Length-n paths with bits x[:n] that extend for ``lookahead`` more bits."""
    F = od.forget_decorations(A)
    bits = x.bits.take(n + lookahead)
    count = 0
    for q0 in F.states:
        layer = {q0: 1}
        for i in range(n):
            nxt = {}
            for q, c in layer.items():
                for r in F.delta.get((q, bits[i]), ()):
                    nxt[r] = nxt.get(r, 0) + c
            layer = nxt
        for q, c in layer.items():
            S = {q}
            for i in range(n, n + lookahead):
                S = {r for p in S for r in F.delta.get((p, bits[i]), ())}
            if S:
                count += c
    return count


@pytest.mark.parametrize("x", ["(0)", "(1)", "1(0)", "0(1)", "101(0)"])
def test_integer_fibers(A, x):
    d = Dy.parse(x)
    assert od.fiber_size(A, d) == 4 == finite_fiber(A, d)


def test_non_integer_fibers(A):
    rng = random.Random(7)
    for _ in range(120):
        x = random_non_integer(rng)
        assert od.fiber_size(A, x) == 2 == finite_fiber(A, x), str(x)


# -- Z̃₂ and the cocycle ------------------------------------------------------------

def test_tilde_requires_branch_on_integers():
    with pytest.raises(ValueError):
        od.TildeDyadic(Dy.parse("(0)"))
    with pytest.raises(ValueError):
        od.TildeDyadic(Dy.parse("(01)"), 0)


def test_phi_values():
    assert od.phi(od.TildeDyadic(Dy.parse("1(01)"))) == 1  # no leading zeros
    assert od.phi(od.TildeDyadic(Dy.parse("01(01)"))) == 0
    assert od.phi(od.TildeDyadic(Dy.parse("(0)"), 0)) == 1
    assert od.phi(od.TildeDyadic(Dy.parse("(0)"), 1)) == 0


def test_zeta_tilde_flips_branch():
    z = od.TildeDyadic(Dy.parse("1(0)"), 0)
    assert od.zeta_tilde(z) == od.TildeDyadic(Dy.parse("01(0)"), 1)


def test_cocycle_conjugacy(A, mu):
    res = od.check_cocycle_conjugacy(A, mu, depth=10)
    assert res["pass"] and res["extremal"] == 8 and not res["mismatches"]


def test_cocycle_is_not_trivial(A):
    # the symmetry bit really does change along μ, both ways
    from adicamata.adic import path_from_labels, vershik_successor
    flips = set()
    for labels in [("0_c",), ("1_c", "0_f"), ("1_a", "1_b", "0_c"), ("0_b", "0_c")]:
        z = path_from_labels(A, labels)
        w = vershik_successor(A, z)
        flips.add(od.symmetry_bit(z) != od.symmetry_bit(w))
    assert flips == {True, False}


def test_symmetric_point_of_x(A):
    x = PathWord("e", U((), ("0_d", "0_e")))
    p = od.symmetric_point(x)
    assert p.s == 0 and p.z.value == Dy.parse("(0)")


# -- M and D ------------------------------------------------------------------------

def test_tau_D_DM():
    assert od.check_tau_D_DM()


def test_literal_M_figure_fails():
    tau, D = od.build_B_tau(), od.build_D_transducer()
    lit = od.build_M_figure()
    assert not language_equal(T.compose(tau, D).underlying, T.compose(D, lit).underlying)


def test_M_ambiguity_locus():
    locus = T.ambiguity_locus(od.build_M_transducer())
    assert sorted(str(w) for w in locus) == ["(01)", "(10)"]


@settings(max_examples=80, deadline=None)
@given(up_words("01", 4, 5))
def test_D_is_difference(w):
    out = T.images(od.build_D_transducer(), w)
    n = len(w.prefix) + 2 * len(w.cycle) + 2
    assert out and all(v.take(n - 1) == tuple(od.difference("".join(w.take(n)))) for v in out)


@settings(max_examples=80, deadline=None)
@given(up_words("01", 4, 5))
def test_M_lifts_odometer(w):
    # D(M(x)) = D(x) + 1 for every image
    D = od.build_D_transducer()
    dx = Dy(T.images(D, w)[0])
    for v in T.images(od.build_M_transducer(), w):
        assert Dy(T.images(D, v)[0]) == od.add_one(dx)
