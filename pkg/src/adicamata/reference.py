"""Hand-transcribed reference data (drawn automata), kept apart from the
constructions so structure checks compare against something independent."""

from __future__ import annotations

from .safety_automata import SafetyAutomaton
from .transducers import Transducer

STATES = ("a", "b", "c", "d", "e", "f")

# (src, label, dst)
A_EDGES = (
    ("a", "1_c", "c"), ("c", "0_f", "f"), ("f", "1_d", "d"), ("d", "0_a", "a"),
    ("a", "1_b", "b"), ("b", "1_a", "a"), ("b", "0_c", "c"), ("c", "0_b", "b"),
    ("d", "0_e", "e"), ("e", "0_d", "d"), ("e", "1_f", "f"), ("f", "1_e", "e"),
)

# (src, "in|out", dst) for the carry part; the A edges appear as diagonal pairs
CARRY_EDGES = (
    ("mu_ca", "0_b|1_b", "b"), ("mu_ba", "0_c|1_c", "c"), ("mu_ce", "0_f|1_f", "f"),
    ("mu_df", "0_e|1_e", "e"), ("mu_ef", "0_d|1_d", "d"), ("mu_db", "0_a|1_a", "a"),
    ("mu_ad", "1_c|0_a", "mu_ca"), ("mu_ad", "1_b|0_a", "mu_ba"), ("mu_ad", "1_c|0_e", "mu_ce"),
    ("mu_fc", "1_d|0_b", "mu_db"), ("mu_fc", "1_e|0_f", "mu_ef"), ("mu_fc", "1_d|0_f", "mu_df"),
    ("mu_ad", "1_b|0_e", "mu_be"), ("mu_eb", "1_f|0_c", "mu_fc"),
    ("mu_be", "1_a|0_d", "mu_ad"), ("mu_fc", "1_e|0_b", "mu_eb"),
)

CARRIES = ("mu_ad", "mu_ba", "mu_be", "mu_ca", "mu_ce", "mu_db", "mu_df", "mu_eb", "mu_ef", "mu_fc")

LABELS = tuple(f"{i}_{j}" for i in (0, 1) for j in STATES)


def path_automaton() -> SafetyAutomaton:
    return SafetyAutomaton(STATES, LABELS, frozenset(A_EDGES), frozenset(STATES))


def adic_transducer() -> Transducer:
    edges = [(s, a, a, d) for s, a, d in A_EDGES]
    for s, sym, d in CARRY_EDGES:
        a, b = sym.split("|")
        edges.append((s, a, b, d))
    return Transducer.from_edges(edges, LABELS, LABELS, initial=CARRIES,
                                 states=STATES + CARRIES)
