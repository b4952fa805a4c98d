"""Lazy construction of every object from one path automaton, and the named
checks the command line runs.

A :class:`Pipeline` starts from the collared Thue-Morse substitution, or
from a path automaton with one transition deleted (mutation testing).  All
later objects are derived from that automaton, so a mutation propagates.
"""

from __future__ import annotations

import logging
import random
import re
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from . import adic, biminimality as bm, dimension_group as dg, odometer as od, reference
from . import transducers as T
from .safety_automata import (
    SafetyAutomaton,
    UltimatelyPeriodicWord,
    canonical_form,
    is_strongly_connected,
    language_equal,
    remove_transition,
)
from .words import THUE_MORSE, fixed_point_prefix, is_overlap_free, thue_morse_collared

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240917
DEFAULT_RANGE = 1 << 10


class BuildError(RuntimeError):
    """A derived object could not be built (e.g. from a mutated automaton)."""


def parse_edge(spec: str, A: SafetyAutomaton) -> tuple:
    """``"a,1_c,c"``, ``"a-1_c->c"`` or just the label ``"1_c"``."""
    parts = [p for p in re.split(r"\s*(?:->|,|\s)\s*|-(?=\d)", spec.strip()) if p]
    if len(parts) == 1:
        hits = [t for t in A.transitions if t[1] == parts[0]]
        if len(hits) != 1:
            raise ValueError(f"label {parts[0]!r} does not name a unique edge")
        return hits[0]
    if len(parts) != 3:
        raise ValueError(f"bad edge spec {spec!r}; use SRC,LABEL,DST")
    edge = tuple(parts)
    if edge not in A.transitions:
        raise ValueError(f"no transition {edge!r}")
    return edge


class Pipeline:
    def __init__(self, mutate: str | None = None, seed: int = DEFAULT_SEED,
                 oracle_range: int = DEFAULT_RANGE):
        self.mutate = mutate
        self.seed = seed
        self.oracle_range = oracle_range

    def _build(self, what: str, fn: Callable):
        try:
            return fn()
        except (ValueError, adic.ConstructionError) as exc:
            raise BuildError(f"cannot build {what}: {exc}") from exc

    @cached_property
    def substitution(self):
        return thue_morse_collared()

    @cached_property
    def automaton(self) -> SafetyAutomaton:
        A = adic.build_path_automaton(adic.build_bratteli(self.substitution))
        if self.mutate:
            edge = parse_edge(self.mutate, A)
            log.info("mutation: deleting %s", edge)
            A = remove_transition(A, edge)
        return A

    @cached_property
    def bratteli(self):
        return self._build("Bratteli diagram",
                           lambda: adic.diagram_from_path_automaton(self.automaton))

    @cached_property
    def adic(self) -> T.Transducer:
        return self._build("adic transducer", lambda: adic.build_adic_transducer(self.bratteli))

    @cached_property
    def zeta(self) -> T.Transducer:
        return adic.build_zeta_transducer(self.automaton)

    @cached_property
    def shift(self) -> T.Transducer:
        return adic.build_shift_transducer(self.automaton)

    @cached_property
    def nucleus(self) -> T.Nucleus:
        return adic.build_nucleus(self.adic)

    @cached_property
    def system(self) -> bm.LambdaSystem:
        return self._build("Λ system", lambda: bm.default_system(self.automaton, self.adic))

    @cached_property
    def M(self) -> T.Transducer:
        return od.build_M_transducer()

    @cached_property
    def D(self) -> T.Transducer:
        return od.build_D_transducer()

    def lambda_automaton(self, name: str = "x", s: str = "d"):
        return self.system.automaton_for(name, s)

    def target(self, name: str):
        """Objects addressable by ``build``."""
        table = {
            "bratteli": lambda: self.bratteli,
            "path-automaton": lambda: self.automaton,
            "adic": lambda: self.adic,
            "zeta": lambda: self.zeta,
            "odometer": od.build_B_tau,
            "M": lambda: self.M,
            "D": lambda: self.D,
            "lambda": lambda: self.lambda_automaton().underlying,
            "nucleus": lambda: self.nucleus.automaton,
        }
        if name not in table:
            raise KeyError(name)
        return table[name]()


# -- checks ------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    anchor: str
    claim: str
    run: Callable  # Pipeline -> dict with at least "pass"


def _sizes(**objs) -> dict:
    return {k: len(v.states) for k, v in objs.items()}


def _structure(p: Pipeline) -> dict:
    A, mu = p.automaton, p.adic
    ref_A, ref_mu = reference.path_automaton(), reference.adic_transducer()
    carries = sorted(q for q in mu.states if not adic.is_identity_state(q))
    return {
        "pass": (set(A.transitions) == set(reference.A_EDGES) and len(A.states) == 6
                 and tuple(carries) == reference.CARRIES
                 and set(mu.transitions) == set(ref_mu.transitions)
                 and canonical_form(mu.underlying) == canonical_form(ref_mu.underlying)
                 and language_equal(A, ref_A)),
        "automata_sizes": {"A": len(A.states), "A_transitions": len(A.transitions),
                           "A_mu": len(mu.states), "A_mu_transitions": len(mu.transitions)},
        "carries": carries,
    }


def _functional(p: Pipeline) -> dict:
    mu, A = p.adic, p.automaton
    res = {
        "unambiguous": T.is_unambiguous(mu),
        "input_projection": language_equal(T.input_projection(mu), A),
        "output_projection": language_equal(T.output_projection(mu), A),
    }
    return {"pass": all(res.values()), **res, "automata_sizes": _sizes(A_mu=mu)}


def _successor_values(p: Pipeline) -> dict:
    mu = p.adic
    w = UltimatelyPeriodicWord((), ("1_a", "1_b"))
    image = T.apply(mu, w)
    expected = UltimatelyPeriodicWord((), ("0_d", "0_e"))
    rewrites = {}
    for k in (1, 2, 3, 4):
        src = ("1_a", "1_b") * k + ("0_c",)
        out = T.apply_prefix(mu, src)
        want = ("0_d", "0_e") * (k - 1) + ("0_d", "0_a", "1_c")
        rewrites["".join(src)] = ["".join(o) for o in sorted(out)]
        if out != {want}:
            rewrites["".join(src)].append("MISMATCH")
    ok = image == expected and not any("MISMATCH" in v for v in rewrites.values())
    return {"pass": ok, "image": str(image), "rewrites": rewrites}


def _minimality(p: Pipeline) -> dict:
    return {"pass": is_strongly_connected(p.automaton)}


def _words(p: Pipeline) -> dict:
    z4 = fixed_point_prefix(THUE_MORSE, "0", 4)
    z12 = fixed_point_prefix(THUE_MORSE, "0", 12)
    res = {
        "zeta4": z4 == "0110100110010110",
        "overlap_free_zeta12": is_overlap_free(z12),
        "no_cubes_of_letters": "000" not in z12 and "111" not in z12,
    }
    return {"pass": all(res.values()), **res}


def _factor(p: Pipeline) -> dict:
    res = od.check_factor(p.automaton, p.adic, p.zeta)
    return {**res, "automata_sizes": _sizes(A=p.automaton, A_mu=p.adic)}


def random_non_integer(rng: random.Random) -> od.DyadicWord:
    while True:
        prefix = tuple(rng.choice("01") for _ in range(rng.randint(0, 6)))
        cycle = tuple(rng.choice("01") for _ in range(rng.randint(2, 7)))
        w = UltimatelyPeriodicWord(prefix, cycle)
        if len(w.cycle) > 1:
            return od.DyadicWord(w)


def _fibers(p: Pipeline, samples: int = 120) -> dict:
    A = p.automaton
    rng = random.Random(p.seed)
    ints = {str(x): od.fiber_size(A, od.DyadicWord.parse(x)) for x in ("(0)", "(1)")}
    bad = []
    for _ in range(samples):
        x = random_non_integer(rng)
        if od.fiber_size(A, x) != 2:
            bad.append(str(x))
    ok = all(v == 4 for v in ints.values()) and not bad
    return {"pass": ok, "integer_fibers": ints, "sampled": samples, "seed": p.seed,
            "witness": bad[0] if bad else None}


def _tau_D(p: Pipeline) -> dict:
    locus = T.ambiguity_locus(p.M)
    locus_s = None if locus is None else sorted(str(w) for w in locus)
    res = {"tau_D_eq_D_M": od.check_tau_D_DM(), "ambiguity_locus": locus_s}
    res["pass"] = res["tau_D_eq_D_M"] and locus_s == ["(01)", "(10)"]
    res["automata_sizes"] = _sizes(M=p.M, D=p.D)
    return res


def _cocycle(p: Pipeline) -> dict:
    res = od.check_cocycle_conjugacy(p.automaton, p.adic, depth=12)
    return {**res, "mismatches": res["mismatches"][:10],
            "witness": res["mismatches"][0] if res["mismatches"] else None}


def _bs(p: Pipeline) -> dict:
    return {"pass": adic.check_baumslag_solitar(p.adic, p.shift),
            "automata_sizes": _sizes(A_mu=p.adic, shift=p.shift)}


def _nucleus_powers(p: Pipeline) -> dict:
    rows = T.nuclear_report(p.nucleus, 2)
    return {"pass": all(not r["missing"] for r in rows), "rows": rows,
            "automata_sizes": _sizes(N=p.nucleus.automaton)}


def _nucleus_composition(p: Pipeline) -> dict:
    rep = T.composition_report(p.nucleus)
    return {"pass": not rep["missing"],
            **{k: len(v) for k, v in rep.items()},
            "restricted_states": rep["restricted"],
            "witness": rep["missing"][0] if rep["missing"] else None}


def _biminimality(p: Pipeline) -> dict:
    rep = bm.biminimality_report(p.system, oracle_range=0)
    lead = rep["leading_zeros"]
    ok = (rep["intersection_empty"] and rep["swapped_intersection_empty"] and rep["sanity_nonempty"]
          and lead["-Lambda(x,d)"] == {"odd": True, "even": False, "zero": False}
          and lead["Lambda(y,e)"] == {"odd": False, "even": True, "zero": False})
    return {"pass": ok, **rep}


def _seeds(p: Pipeline) -> dict:
    derived = p.system.seeds
    return {"pass": derived == bm.REFERENCE_SEEDS,
            "seeds": {n: {str(k): v for k, v in d.items()} for n, d in derived.items()}}


def _partition(p: Pipeline) -> dict:
    res = {n: bm.partition_identity(p.system, n) for n in p.system.bases}
    return {"pass": all(res.values()), **res}


def _recursion(p: Pipeline) -> dict:
    res = bm.recursion_identities(p.system)
    failing = [f"{n}:{s}" for (n, s), ok in res.items() if not ok]
    return {"pass": not failing, "equations": len(res), "witness": failing[0] if failing else None}


def _oracle(p: Pipeline) -> dict:
    res = bm.oracle_check(p.system, p.oracle_range)
    return {"pass": res["pass"], "oracle_range_checked": res["range"], "checked": res["checked"],
            "witness": str(res["mismatches"][0]) if res["mismatches"] else None}


def _dimension(p: Pipeline) -> dict:
    M = dg.adjacency_matrix(p.automaton)
    rep = dg.dimension_group_report(M, 6)
    snf_ok = True
    for k in range(1, 5):
        P = M ** k
        U, S, V = dg.smith_normal_form(P)
        snf_ok &= (U @ P @ V == S and abs(dg.determinant(U)) == 1 and abs(dg.determinant(V)) == 1
                   and tuple(S.rows[i][i] for i in range(P.n)) == dg.determinantal_divisors(P))
    ok = (snf_ok and rep["rank_sequence"][-1] == 5 and dg.determinant(M) == 0
          and rep["verdict"] == "consistent with ℤ⁴×ℤ[1/2]")
    return {"pass": ok, "snf_matches_oracle": snf_ok, **rep}


CHECKS = [
    Check("path-automaton-structure", "paper-core", "figure of the path automaton",
          "the path automaton has 6 states and the 12 drawn edges", _structure),
    Check("adic-functional", "paper-core", "homeomorphism lemma",
          "the adic transducer is unambiguous with both projections equal to L(A)", _functional),
    Check("successor-values", "paper-core", "construction of the adic transducer",
          "mu((1_a1_b)^w) = (0_d0_e)^w and 1_a1_b...0_c -> 0_d0_e...0_a1_c", _successor_values),
    Check("minimality", "paper-core", "minimality via strong connectivity",
          "the path automaton is strongly connected", _minimality),
    Check("words", "paper-core", "Thue-Morse basics",
          "zeta^4(0), overlap-freeness of zeta^12(0), no 000/111", _words),
    Check("factor", "factor", "factor theorem",
          "A -> B and A_mu -> B_tau are automaton morphisms; tau.pi = pi.mu", _factor),
    Check("fibers", "factor", "fibres of the factor map",
          "4 preimages over 0^w and 1^w, 2 over non-integers", _fibers),
    Check("tau-D-DM", "factor", "difference operator",
          "tau.D = D.M, M two-valued exactly at (01)^w and (10)^w", _tau_D),
    Check("cocycle-conjugacy", "homeo", "homeomorphism with the cocycle odometer",
          "mu is conjugate to addition with the cocycle phi", _cocycle),
    Check("baumslag-solitar", "baumslag-solitar", "Baumslag-Solitar relation",
          "sigma.mu^2 = mu.sigma", _bs),
    Check("nucleus-powers", "nucleus", "nucleus of the adic transducer",
          "recurrent states of mu^2 and mu^-2 lie in N", _nucleus_powers),
    Check("nucleus-composition", "nucleus", "nucleus of the adic transducer",
          "recurrent part of N.N acts inside N", _nucleus_composition),
    Check("biminimality", "biminimality", "biminimality theorem",
          "-Lambda(x,d) and Lambda(y,e) are disjoint", _biminimality),
    Check("lambda-seeds", "biminimality", "initial values of the recursion",
          "0 in Lambda(x,e), -1 in Lambda(x,b), 0 in Lambda(y,d), -1 in Lambda(y,a)", _seeds),
    Check("lambda-partition", "biminimality", "Lambda sets partition Z",
          "for each base the six Lambda sets partition Z", _partition),
    Check("lambda-recursion", "biminimality", "recursion for the Lambda sets",
          "the twelve set equations hold", _recursion),
    Check("lambda-oracle", "biminimality", "definition of Lambda",
          "automata agree with direct iteration of mu", _oracle),
    Check("dimension-group", "dimension-group", "K-theory of the adic system",
          "rank sequence stabilizes at 5; group consistent with Z^4 x Z[1/2]", _dimension),
]

SUITES = ("paper-core", "factor", "homeo", "baumslag-solitar", "nucleus", "biminimality",
          "dimension-group", "all")


def checks_for(suite: str) -> list:
    if suite not in SUITES:
        raise KeyError(suite)
    return [c for c in CHECKS if suite == "all" or c.suite == suite]


def run_check(p: Pipeline, check: Check) -> dict:
    t0 = time.perf_counter()
    try:
        detail = check.run(p)
        ok = bool(detail.pop("pass"))
        error = None
    except (BuildError, ValueError) as exc:
        # inconsistent inputs (a mutated automaton, alphabets that no longer
        # match) fail the check; anything else is an internal error
        detail, ok, error = {}, False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    log.info("%s: %s (%.2fs)", check.name, "pass" if ok else "FAIL", dt)
    return {
        "name": check.name,
        "suite": check.suite,
        "anchor": check.anchor,
        "claim": check.claim,
        "pass": ok,
        "automata_sizes": detail.pop("automata_sizes", {}),
        "witness": detail.pop("witness", None),
        "oracle_range_checked": detail.pop("oracle_range_checked", 0),
        "error": error,
        "detail": detail,
    }


def run_suite(p: Pipeline, suite: str) -> dict:
    results = [run_check(p, c) for c in checks_for(suite)]
    return {
        "suite": suite,
        "seed": p.seed,
        "mutation": p.mutate,
        "pass": all(r["pass"] for r in results),
        "checks": results,
    }
