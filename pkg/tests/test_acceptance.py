"""The thirteen acceptance criteria, one test each.

Every test records ``criterion N: PASS|FAIL`` (with its runtime); the lines
are printed at the end of the pytest run by the hook in conftest.py, and by
``python3 tests/test_acceptance.py`` when run directly.
"""

import random
import time

import pytest

from adicamata import adic, biminimality as bm, dimension_group as dg, odometer as od
from adicamata import reference, transducers as T
from adicamata.pipeline import random_non_integer
from adicamata.safety_automata import (
    UltimatelyPeriodicWord as U,
    canonical_form,
    is_strongly_connected,
    language_equal,
)
from adicamata.words import THUE_MORSE, fixed_point_prefix, is_overlap_free, thue_morse_collared

RESULTS: dict = {}


def record(n, fn, limit=None):
    t0 = time.perf_counter()
    try:
        ok, note = fn()
    except Exception as exc:  # a crash is a failure, reported as such
        ok, note = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok, note = False, f"{note}; took {dt:.2f}s, limit {limit}s"
    RESULTS[n] = (ok, f"{dt:.2f}s", note)
    assert ok, note


@pytest.fixture(scope="module")
def built():
    B = adic.build_bratteli(thue_morse_collared())
    A = adic.build_path_automaton(B)
    return B, A


def c1(built):
    B, _ = built
    A = adic.build_path_automaton(B)
    mu = adic.build_adic_transducer(B)
    ident = [q for q in mu.states if adic.is_identity_state(q)]
    carries = sorted(q for q in mu.states if not adic.is_identity_state(q))
    ref = reference.adic_transducer()
    ok = (len(A.states) == 6 and len(A.transitions) == 12
          and set(A.transitions) == set(reference.A_EDGES)
          and len(ident) == 6 and tuple(carries) == reference.CARRIES
          and canonical_form(mu.underlying) == canonical_form(ref.underlying))
    return ok, f"A {len(A.states)}/{len(A.transitions)}, A_mu {len(ident)}+{len(carries)}"


def c2(built):
    B, A = built
    mu = adic.build_adic_transducer(B)
    ok = (T.is_unambiguous(mu) and language_equal(T.input_projection(mu), A)
          and language_equal(T.output_projection(mu), A))
    return ok, "unambiguous, both projections = L(A)"


def c3(built):
    B, _ = built
    mu = adic.build_adic_transducer(B)
    img = T.apply(mu, U((), ("1_a", "1_b")))
    ok = img == U((), ("0_d", "0_e"))
    for k in range(1, 6):
        out = T.apply_prefix(mu, ("1_a", "1_b") * k + ("0_c",))
        ok &= out == {("0_d", "0_e") * (k - 1) + ("0_d", "0_a", "1_c")}
    return ok, f"mu((1_a1_b)^w) = {img}"


def c4(built):
    B, A = built
    mu = adic.build_adic_transducer(B)
    sigma = adic.build_shift_transducer(A)
    lhs = T.compose(sigma, T.power(mu, 2))
    rhs = T.compose(mu, sigma)
    return language_equal(lhs.underlying, rhs.underlying), "sigma.mu^2 = mu.sigma"


def c5(built):
    B, A = built
    res = od.check_factor(A, adic.build_adic_transducer(B))
    return res["pass"], str(res)


def c6(built):
    _, A = built
    ints = [od.fiber_size(A, od.DyadicWord.parse(x)) for x in ("(0)", "(1)")]
    rng = random.Random(20240917)
    sizes = {od.fiber_size(A, random_non_integer(rng)) for _ in range(120)}
    return ints == [4, 4] and sizes == {2}, f"integers {ints}, 120 non-integers {sorted(sizes)}"


def c7(built):
    B, A = built
    res = od.check_cocycle_conjugacy(A, adic.build_adic_transducer(B), depth=12)
    ok = res["pass"] and res["extremal"] == 8 and not res["mismatches"]
    return ok, f"{res['checked']} prefixes, {res['extremal']} extremal, {len(res['mismatches'])} mismatches"


def c8(built):
    locus = T.ambiguity_locus(od.build_M_transducer())
    locus = sorted(str(w) for w in locus or ())
    return od.check_tau_D_DM() and locus == ["(01)", "(10)"], f"two-valued at {locus}"


def c9(built):
    B, _ = built
    N = adic.build_nucleus(adic.build_adic_transducer(B))
    rows = T.nuclear_report(N, 2)
    comp = T.composition_report(N)
    ok = all(not r["missing"] for r in rows) and not comp["missing"]
    return ok, f"|N|={len(N.automaton.states)}, N.N exact {len(comp['exact'])} restricted {len(comp['restricted'])}"


def c10(built):
    B, A = built
    S = bm.default_system(A, adic.build_adic_transducer(B))
    rep = bm.biminimality_report(S, oracle_range=1 << 10)
    lead = rep["leading_zeros"]
    ok = (rep["intersection_empty"]
          and lead["-Lambda(x,d)"]["odd"] and not lead["-Lambda(x,d)"]["even"]
          and lead["Lambda(y,e)"]["even"] and not lead["Lambda(y,e)"]["odd"]
          and all(bm.partition_identity(S, n) for n in S.bases)
          and all(bm.recursion_identities(S).values())
          and rep["oracle_range_checked"] == 1024 and rep["oracle_mismatches"] == 0)
    return ok, f"oracle |n|<=1024, {rep['oracle_mismatches']} disagreements"


def c11(built):
    return is_strongly_connected(built[1]), "strongly connected"


def c12(built):
    z4 = fixed_point_prefix(THUE_MORSE, "0", 4)
    z12 = fixed_point_prefix(THUE_MORSE, "0", 12)
    ok = z4 == "0110100110010110" and is_overlap_free(z12) and "000" not in z12 and "111" not in z12
    return ok, f"zeta^4(0) = {z4}"


def c13(built):
    M = dg.adjacency_matrix(built[1])
    rep = dg.dimension_group_report(M, 6)
    ok = rep["rank_sequence"][-2:] == [5, 5] and rep["verdict"] == "consistent with ℤ⁴×ℤ[1/2]"
    for k in range(1, 5):
        P = M ** k
        U_, S, V = dg.smith_normal_form(P)
        ok &= U_ @ P @ V == S and dg.invariant_factors(P) == dg.determinantal_divisors(P)
    return ok, rep["verdict"]


CRITERIA = [  # (number, check, runtime limit in seconds)
    (1, c1, 1), (2, c2, 1), (3, c3, None), (4, c4, 10), (5, c5, None), (6, c6, None),
    (7, c7, None), (8, c8, None), (9, c9, 30), (10, c10, 60), (11, c11, None),
    (12, c12, None), (13, c13, None),
]


@pytest.mark.parametrize("n,fn,limit", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(built, n, fn, limit):
    record(n, lambda: fn(built), limit)


def summary_lines() -> list:
    out = []
    for n in sorted(RESULTS):
        ok, dt, note = RESULTS[n]
        out.append(f"criterion {n:2}: {'PASS' if ok else 'FAIL'}  ({dt})  {note}")
    return out


if __name__ == "__main__":
    B = adic.build_bratteli(thue_morse_collared())
    data = (B, adic.build_path_automaton(B))
    for n, fn, limit in CRITERIA:
        try:
            record(n, lambda: fn(data), limit)
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    raise SystemExit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
