"""Letter-to-letter ω-transducers, represented as safety automata whose
symbols are pairs ``(in, out)``.

Everything here is a relation; being a function is a property to check
(:func:`is_unambiguous`), not an assumption.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .safety_automata import (
    AlphabetError,
    SafetyAutomaton,
    UltimatelyPeriodicWord,
    _live,
    _positions,
    _reachable,
    canonical_form,
    language_included,
    determinize,
    display,
    relabel,
    restrict,
    strongly_connected_components,
    trim,
    with_initial,
)


class AmbiguityError(ValueError):
    """A relation was used as a function but has several outputs."""


class DomainError(ValueError):
    """An input word is not in the domain of a transducer."""


def pair_alphabet(ins: Iterable, outs: Iterable) -> tuple:
    return tuple((a, b) for a in ins for b in outs)


def pair_label(sym) -> str:
    a, b = sym
    return f"{display(a)}|{display(b)}"


@dataclass(frozen=True, eq=False)
class Transducer:
    underlying: SafetyAutomaton
    in_alphabet: tuple
    out_alphabet: tuple

    def __post_init__(self):
        ins, outs = set(self.in_alphabet), set(self.out_alphabet)
        for _, sym, _ in self.underlying.transitions:
            if not (isinstance(sym, tuple) and len(sym) == 2):
                raise AlphabetError(f"transducer symbol {sym!r} is not a pair")
            if sym[0] not in ins or sym[1] not in outs:
                raise AlphabetError(f"pair {pair_label(sym)} outside in/out alphabets")

    @classmethod
    def from_edges(cls, edges: Iterable, in_alphabet, out_alphabet, initial=None,
                   states=None) -> "Transducer":
        """Edges are ``(src, in, out, dst)``."""
        edges = [tuple(e) for e in edges]
        if states is None:
            states = []
            for s, _, _, d in edges:
                states += [s, d]
        states = tuple(dict.fromkeys(states))
        ins, outs = tuple(in_alphabet), tuple(out_alphabet)
        A = SafetyAutomaton(
            states, pair_alphabet(ins, outs),
            frozenset((s, (a, b), d) for s, a, b, d in edges),
            frozenset(states if initial is None else initial),
        )
        return cls(A, ins, outs)

    # convenience passthroughs
    @property
    def states(self):
        return self.underlying.states

    @property
    def transitions(self):
        return self.underlying.transitions

    @property
    def initial(self):
        return self.underlying.initial

    def edges(self) -> list:
        """``(src, in, out, dst)`` in deterministic order."""
        return [(q, a, b, r) for q, succ in self.underlying.successors.items()
                for (a, b), r in succ]

    def with_initial(self, initial) -> "Transducer":
        return Transducer(with_initial(self.underlying, initial), self.in_alphabet,
                          self.out_alphabet)

    def restrict(self, keep, initial=None) -> "Transducer":
        return Transducer(restrict(self.underlying, keep, initial), self.in_alphabet,
                          self.out_alphabet)

    def trim(self) -> "Transducer":
        return Transducer(trim(self.underlying), self.in_alphabet, self.out_alphabet)

    def __call__(self, w):
        return apply(self, w)

    def __repr__(self):
        return (f"Transducer({len(self.states)} states, {len(self.transitions)} transitions, "
                f"{len(self.initial)} initial)")


def diagonal(A: SafetyAutomaton) -> Transducer:
    """The identity relation on L(A): each label ``x`` becomes ``x|x``."""
    trans = frozenset((s, (a, a), d) for s, a, d in A.transitions)
    U = SafetyAutomaton(A.states, pair_alphabet(A.alphabet, A.alphabet), trans, A.initial)
    return Transducer(U, A.alphabet, A.alphabet)


def compose(S: Transducer, T: Transducer) -> Transducer:
    """S ∘ T: first T, then S.  States are pairs ``(t, s)``."""
    if set(T.out_alphabet) != set(S.in_alphabet):
        raise AlphabetError("compose: T's output alphabet must equal S's input alphabet")
    Tu, Su = T.underlying, S.underlying
    start = [(t, s) for t in Tu.ordered_initial() for s in Su.ordered_initial()]
    trans = []

    def succ(node):
        t, s = node
        for (a, b), t2 in Tu.successors[t]:
            for (b2, c), s2 in Su.successors[s]:
                if b2 == b:
                    trans.append((node, (a, c), (t2, s2)))
                    yield (t2, s2)

    states = _reachable(start, succ)
    U = SafetyAutomaton(tuple(states), pair_alphabet(T.in_alphabet, S.out_alphabet),
                        frozenset(trans), frozenset(start))
    return Transducer(trim(U), T.in_alphabet, S.out_alphabet)


def invert(T: Transducer) -> Transducer:
    trans = frozenset((s, (b, a), d) for s, (a, b), d in T.transitions)
    U = SafetyAutomaton(T.states, pair_alphabet(T.out_alphabet, T.in_alphabet), trans,
                        T.initial)
    return Transducer(U, T.out_alphabet, T.in_alphabet)


def input_projection(T: Transducer) -> SafetyAutomaton:
    return trim(relabel(T.underlying, lambda p: p[0], T.in_alphabet))


def output_projection(T: Transducer) -> SafetyAutomaton:
    return trim(relabel(T.underlying, lambda p: p[1], T.out_alphabet))


def power(T: Transducer, n: int) -> Transducer:
    """Tⁿ by repeated composition (T⁻¹ = invert(T)); T⁰ is the diagonal of
    the input projection."""
    if n == 0:
        return diagonal(input_projection(T))
    base = T if n > 0 else invert(T)
    out = base
    for _ in range(abs(n) - 1):
        out = compose(base, out)
    return out


def is_unambiguous(T: Transducer) -> bool:
    """No input labels two infinite runs with different outputs."""
    U = T.underlying
    start = [(p, q) for p in U.ordered_initial() for q in U.ordered_initial()]
    edges: dict = {}

    def succ(node):
        p, q = node
        out = []
        for (a, b), p2 in U.successors[p]:
            for (a2, c), q2 in U.successors[q]:
                if a2 == a:
                    out.append(((p2, q2), b != c))
        edges[node] = out
        return [n for n, _ in out]

    reach = _reachable(start, succ)
    live = _live(reach, lambda n: [m for m, _ in edges[n]])
    return not any(
        differ and m in live for n in live for m, differ in edges[n]
    )


def recurrent_states(A: SafetyAutomaton) -> list:
    """States in a strongly connected component containing an edge."""
    succ = A.successors
    comps = strongly_connected_components(A.states, lambda q: [r for _, r in succ[q]])
    rec = set()
    for comp in comps:
        if len(comp) > 1 or any(r == comp[0] for _, r in succ[comp[0]]):
            rec.update(comp)
    return [q for q in A.states if q in rec]


def recurrent_part(T: Transducer) -> Transducer:
    rec = recurrent_states(T.underlying)
    return T.restrict(rec, initial=rec)


def ambiguity_locus(T: Transducer):
    """Inputs with at least two distinct outputs, as a list of ultimately
    periodic words; None if that set is infinite."""
    U = T.underlying
    start = [(p, q, False) for p in U.ordered_initial() for q in U.ordered_initial()]
    trans = []

    def succ(node):
        p, q, flag = node
        for (a, b), p2 in U.successors[p]:
            for (a2, c), q2 in U.successors[q]:
                if a2 == a:
                    m = (p2, q2, flag or b != c)
                    trans.append((node, a, m))
                    yield m

    states = _reachable(start, succ)
    S = trim(SafetyAutomaton(tuple(states), T.in_alphabet, frozenset(trans), frozenset(start)))
    # unflagged nodes must lead to a flagged one
    flagged = {v for v in S.states if v[2]}
    good = set(flagged)
    changed = True
    while changed:
        changed = False
        for s, _, d in S.transitions:
            if d in good and s not in good:
                good.add(s)
                changed = True
    S = trim(restrict(S, good))
    unflagged = [v for v in S.states if not v[2]]
    if recurrent_states(restrict(S, unflagged)):
        return None
    return _deterministic_paths(determinize(S))


# -- evaluation on ultimately periodic words --------------------------------

def _deterministic_paths(D: SafetyAutomaton, limit: int | None = None):
    """All infinite paths of a trim deterministic automaton from its initial
    state, as ultimately periodic words over its alphabet.  Returns None if
    there are infinitely many (a cycle with an exit)."""
    if not D.states:
        return []
    succ = D.successors
    comps = strongly_connected_components(D.states, lambda q: [r for _, r in succ[q]])
    on_cycle = set()
    for comp in comps:
        if len(comp) > 1 or any(r == comp[0] for _, r in succ[comp[0]]):
            on_cycle.update(comp)
    if any(len(succ[q]) > 1 for q in on_cycle):
        return None
    (init,) = D.initial
    results = []

    def walk(q, prefix):
        if limit is not None and len(results) > limit:
            return
        if q in on_cycle:
            cycle, r = [], q
            while True:
                ((a, r),) = succ[r]
                cycle.append(a)
                if r == q:
                    break
            results.append(UltimatelyPeriodicWord(tuple(prefix), tuple(cycle)))
            return
        for a, r in succ[q]:
            walk(r, prefix + [a])

    walk(init, [])
    return results


def count_infinite_paths(D: SafetyAutomaton) -> float:
    """Number of infinite paths from the initial state of a deterministic
    automaton (``math.inf`` if infinite)."""
    paths = _deterministic_paths(trim(D))
    return math.inf if paths is None else len(paths)


def run_automaton(T: Transducer, w: UltimatelyPeriodicWord) -> SafetyAutomaton:
    """Output automaton of T restricted to input ``w``: states are
    ``(state, position)`` pairs, trimmed."""
    extra = w.letters() - set(T.in_alphabet)
    if extra:
        raise AlphabetError(f"symbols {sorted(map(str, extra))} not in the input alphabet")
    U = T.underlying
    _, nxt = _positions(w)
    trans = []

    def succ(node):
        q, i = node
        for (a, b), r in U.successors[q]:
            if a == w[i]:
                trans.append((node, b, (r, nxt(i))))
                yield (r, nxt(i))

    start = [(q, 0) for q in U.ordered_initial()]
    states = _reachable(start, succ)
    A = SafetyAutomaton(tuple(states), T.out_alphabet, frozenset(trans), frozenset(start))
    return trim(A)


def images(T: Transducer, w: UltimatelyPeriodicWord, limit: int = 64) -> list:
    """All outputs of T on ``w`` (sorted by string form).  Raises
    AmbiguityError if there are infinitely many or more than ``limit``."""
    D = determinize(run_automaton(T, w))
    paths = _deterministic_paths(D, limit)
    if paths is None or len(paths) > limit:
        raise AmbiguityError(f"too many images of {w}")
    return sorted(paths, key=lambda p: (len(p.prefix), len(p.cycle), str(p)))


def apply(T: Transducer, w: UltimatelyPeriodicWord) -> UltimatelyPeriodicWord:
    out = images(T, w)
    if not out:
        raise DomainError(f"{w} is not in the domain")
    if len(out) > 1:
        raise AmbiguityError(f"{w} has {len(out)} images")
    return out[0]


def apply_prefix(T: Transducer, prefix: Iterable) -> set:
    """Outputs of the finite runs over ``prefix`` that can still be extended to
    infinite runs (T must be trim).  Useful when the continuation is free."""
    U = T.underlying
    layer = {(q, ()) for q in U.initial}
    for a in prefix:
        layer = {(r, out + (b,)) for q, out in layer for (x, b), r in U.successors[q] if x == a}
    return {out for _, out in layer}


# -- nucleus -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Nucleus:
    """Candidate nucleus: a transducer whose states are labelled with a class
    ('identity', 'forward', 'backward'), together with the generator whose
    powers it should absorb."""

    automaton: Transducer
    classes: dict
    generator: Transducer

    def state_forms(self) -> set:
        U = self.automaton.underlying
        return {canonical_form(with_initial(U, [q])) for q in U.states}


def nuclear_report(N: Nucleus, powers: int) -> list[dict]:
    """For each 2 ≤ |n| ≤ powers: the recurrent states of genⁿ and whether
    each one's rooted language equals that of a state of N."""
    if powers < 2:
        raise ValueError("powers must be at least 2")
    forms = N.state_forms()
    rows = []
    for sign in (1, -1):
        base = N.generator if sign > 0 else invert(N.generator)
        P = base
        for n in range(2, powers + 1):
            P = compose(base, P)
            rec = recurrent_states(P.underlying)
            missing = [q for q in rec
                       if canonical_form(with_initial(P.underlying, [q])) not in forms]
            rows.append({"n": sign * n, "states": len(P.states), "recurrent": len(rec),
                         "missing": [display(q) for q in missing]})
    return rows


def check_nuclear(N: Nucleus, powers: int = 2) -> bool:
    return all(not r["missing"] for r in nuclear_report(N, powers))


def composition_report(N: Nucleus) -> dict:
    """Sort the recurrent states of N ∘ N by how they sit inside N.

    A composite state is ``exact`` when its rooted relation equals that of a
    state of N, ``restricted`` when it is only contained in one (e.g. μ⁻¹μ at
    a carry: the identity on the carry's domain), else ``missing``."""
    U = N.automaton.underlying
    forms = N.state_forms()
    rooted = [with_initial(U, [q]) for q in U.states]
    NN = compose(N.automaton, N.automaton).underlying
    out = {"exact": [], "restricted": [], "missing": []}
    for q in recurrent_states(NN):
        R = with_initial(NN, [q])
        if canonical_form(R) in forms:
            out["exact"].append(display(q))
        elif any(language_included(R, S) for S in rooted):
            out["restricted"].append(display(q))
        else:
            out["missing"].append(display(q))
    return out


def closed_under_composition(N: Nucleus) -> bool:
    """Every recurrent state of N ∘ N acts as a restriction of a state of N."""
    return not composition_report(N)["missing"]
