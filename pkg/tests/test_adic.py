"""The path automaton, the adic transducer and λ, against the direct
definition of the Vershik map on finite prefixes and the drawn automata."""

import pytest
from hypothesis import given, settings, strategies as st

from adicamata import adic, reference
from adicamata.adic import (
    BratteliDiagram,
    PathWord,
    build_adic_transducer,
    build_nucleus,
    build_shift_transducer,
    build_zeta_transducer,
    check_baumslag_solitar,
    lambda_decode,
    lambda_encode,
    minimal_extremal_paths,
    parse_path,
    path_from_labels,
    raw_adic_transducer,
    reverse_path,
    start_state,
    vershik_successor,
)
from adicamata.safety_automata import UltimatelyPeriodicWord, canonical_form, language_equal
from adicamata import transducers as T
from adicamata.words import WordWindow

from conftest import random_path

U = UltimatelyPeriodicWord


def test_bratteli_edges(diagram):
    # a ↦ db: minimal edge d → a, maximal edge b → a
    assert ("d", "a", 0) in diagram.edges and ("b", "a", 1) in diagram.edges
    assert len(diagram.edges) == 12
    assert diagram.incoming("a", 1) == "b"


def test_bratteli_rank_validation():
    with pytest.raises(ValueError):
        BratteliDiagram(("a",), frozenset({("a", "a", 1)}))


def test_path_automaton_matches_drawing(A):
    assert set(A.transitions) == set(reference.A_EDGES)
    assert A.states == reference.STATES
    assert A.alphabet == reference.LABELS


def test_adic_transducer_matches_drawing(mu):
    ref = reference.adic_transducer()
    assert len(mu.states) == 16 and len(mu.transitions) == 28
    assert set(mu.transitions) == set(ref.transitions)
    assert mu.initial == ref.initial
    assert canonical_form(mu.underlying) == canonical_form(ref.underlying)


def test_carries(mu):
    carries = sorted(q for q in mu.states if not adic.is_identity_state(q))
    assert tuple(carries) == reference.CARRIES


def test_raw_transducer_larger(diagram):
    raw = raw_adic_transducer(diagram)
    assert (len(raw.states), len(raw.transitions)) == (28, 40)


def test_unambiguous_and_projections(mu, A):
    assert T.is_unambiguous(mu)
    assert language_equal(T.input_projection(mu), A)
    assert language_equal(T.output_projection(mu), A)


def test_successor_of_maximal(mu):
    assert T.apply(mu, U((), ("1_a", "1_b"))) == U((), ("0_d", "0_e"))
    assert T.apply(T.invert(mu), U((), ("0_d", "0_e"))) == U((), ("1_a", "1_b"))


@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_prefix_rewrite(mu, k):
    src = ("1_a", "1_b") * k + ("0_c",)
    want = ("0_d", "0_e") * (k - 1) + ("0_d", "0_a", "1_c")
    assert T.apply_prefix(mu, src) == {want}


def test_vershik_successor_example(A):
    z = path_from_labels(A, ("1_a", "1_b", "0_c"))
    assert str(vershik_successor(A, z)) == "0_d0_a1_c@e"
    assert vershik_successor(A, path_from_labels(A, ("1_a", "1_b"))) is None


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 14), st.randoms(use_true_random=False))
def test_mu_matches_vershik_on_prefixes(A, mu, n, r):
    z = random_path(A, r, n)
    w = vershik_successor(A, z)
    if w is None:
        return
    assert T.apply_prefix(mu, z.labels) == {w.labels}
    assert start_state(A, w.labels) == w.start


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_mu_on_infinite_paths(A, mu, r):
    # a random lasso path: random prefix, then a cycle found by walking on
    z = random_path(A, r, r.randint(0, 6))
    q = z.end()
    seen, labels = {}, []
    while q not in seen:
        seen[q] = len(labels)
        a, q = r.choice(A.successors[q])
        labels.append(a)
    k = seen[q]
    word = U(z.labels + tuple(labels[:k]), tuple(labels[k:]))
    if not any(a.startswith("0") for a in word.letters()):
        return
    out = T.apply(mu, word)
    n = len(word.prefix) + 2 * len(word.cycle) + 2
    prefix = PathWord(z.start, word.take(n))
    assert out.take(n) == vershik_successor(A, prefix).labels


def test_extremal_paths(A, mu):
    lo, hi = minimal_extremal_paths(A)
    assert len(lo) == 4 and len(hi) == 4
    images = {str(T.apply(mu, z.labels)) for z in hi}
    assert images == {str(z.labels) for z in lo}


def test_zeta_prepends_minimal_edge(A, diagram):
    Z = build_zeta_transducer(A)
    w = U(("1_c",), ("0_f", "1_d", "0_a", "1_c"))
    out = T.apply(Z, w)
    # ζ(z) starts with the minimal edge into the start of z
    start = start_state(A, w)
    assert out[0] == f"0_{start}" and out.drop(1) == w


def test_shift_drops_first_edge(A):
    S = build_shift_transducer(A)
    w = U(("1_c",), ("0_f", "1_d", "0_a", "1_c"))
    assert T.images(S, w) == [w.drop(1)]


def test_baumslag_solitar(mu, A):
    assert check_baumslag_solitar(mu, build_shift_transducer(A))


def test_baumslag_solitar_negative_control(mu, A):
    # σμ ≠ μσ: the relation genuinely needs μ²
    S = build_shift_transducer(A)
    left = T.compose(S, mu)
    right = T.compose(mu, S)
    assert not language_equal(left.underlying, right.underlying)


def test_reverse_path(A):
    z = reverse_path(A, "110", "c")
    assert z.labels == ("1_a", "1_b", "0_c") and z.start == "b"


# -- λ ---------------------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(st.integers(0, 8), st.randoms(use_true_random=False))
def test_lambda_roundtrip(A, n, r):
    z = random_path(A, r, n)
    w = lambda_decode(z, with_collar=True)
    assert lambda_encode(w, n, A) == z


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_mu_is_shift_under_lambda(A, n, r):
    z = random_path(A, r, n)
    w = vershik_successor(A, z)
    if w is None:
        return
    assert lambda_decode(w) == lambda_decode(z).shift()


def test_lambda_of_uu(A):
    # u.u desubstitutes to the minimal path through d, e, d, …
    u = "0110100110010110"
    left = "10010110"  # ζ³(1), the end of the left fixed point at this level
    w = WordWindow(left + u + "10010110", -8)
    z = lambda_encode(w, 3, A)
    assert z.start == "d" and z.labels == ("0_e", "0_d", "0_e")


# -- nucleus ---------------------------------------------------------------------

def test_nucleus_size(mu):
    N = build_nucleus(mu)
    assert (len(N.automaton.states), len(N.automaton.transitions)) == (26, 44)
    assert set(N.classes.values()) == {"identity", "forward", "backward"}


def test_nucleus_absorbs_powers(mu):
    rows = T.nuclear_report(build_nucleus(mu), 3)
    assert [r["n"] for r in rows] == [2, 3, -2, -3]
    assert all(not r["missing"] for r in rows)
    assert rows[0]["recurrent"] == 14


def test_nucleus_composition(mu):
    rep = T.composition_report(build_nucleus(mu))
    assert not rep["missing"]
    # μ⁻¹μ at the recurrent carries is the identity on a smaller domain
    assert len(rep["restricted"]) == 4
    assert T.closed_under_composition(build_nucleus(mu))


def test_diagonal_is_not_a_nucleus(mu, A):
    fake = T.Nucleus(T.diagonal(A), {}, mu)
    assert not T.check_nuclear(fake)


# -- path specs -------------------------------------------------------------------

@pytest.mark.parametrize("text, start, s", [
    ("(0_e0_d)^ω", "d", "(0_e0_d)@d"),
    ("(0_d0_e)@e", "e", "(0_d0_e)@e"),
    ("1_a1_b0_c@b", "b", "1_a1_b0_c@b"),
    (" (0_e 0_d)^w @ d ", "d", "(0_e0_d)@d"),
])
def test_parse_path(A, text, start, s):
    z = parse_path(text, A)
    assert z.start == start and str(z) == s


@pytest.mark.parametrize("text", ["", "xyz", "()@a", "(0_e0_d)@a", "(0_q)", "0_e(0_d"])
def test_parse_path_errors(A, text):
    with pytest.raises(ValueError):
        parse_path(text, A)
