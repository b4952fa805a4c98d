"""Integer automata for the sets Λ(z,s) = {n ∈ ℤ : μⁿ(z) starts at s}.

Integers are read in binary, least significant bit first, so n ≥ 0 ends in
0^ω and n < 0 ends in 1^ω.  An :class:`IntegerAutomaton` is a complete DFA
over {0,1} whose states carry *tail marks*: the word p·c^ω (c a bit) is
accepted iff the c-orbit of δ(start, p) eventually cycles through a state
marked c.  Marks are stored closed (constant along every c-orbit), which
makes intersection and union state-wise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .adic import PathWord, label_bit, label_edges, start_state
from .safety_automata import SafetyAutomaton, UltimatelyPeriodicWord, display, is_strongly_connected
from .transducers import Transducer, apply, invert

BITS = ("0", "1")
SINK = "∅"


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IntegerAutomaton:
    states: tuple
    delta: Mapping  # (state, bit) -> state, complete
    start: object
    marks: Mapping  # state -> frozenset of bits, closed

    @classmethod
    def build(cls, states, delta, start, marks) -> "IntegerAutomaton":
        """Close the marks along bit orbits and keep the reachable part."""
        order = [start]
        seen = {start}
        queue = deque([start])
        while queue:
            q = queue.popleft()
            for b in BITS:
                r = delta[(q, b)]
                if r not in seen:
                    seen.add(r)
                    order.append(r)
                    queue.append(r)
        closed = {}
        for q in order:
            m = set()
            for b in BITS:
                # walk the b-orbit until it cycles, then test the cycle
                path, pos, r = [], {}, q
                while r not in pos:
                    pos[r] = len(path)
                    path.append(r)
                    r = delta[(r, b)]
                if any(b in marks.get(s, ()) for s in path[pos[r]:]):
                    m.add(b)
            closed[q] = frozenset(m)
        d = {(q, b): delta[(q, b)] for q in order for b in BITS}
        return cls(tuple(order), d, start, closed)

    @cached_property
    def underlying(self) -> SafetyAutomaton:
        trans = frozenset((q, b, self.delta[(q, b)]) for q in self.states for b in BITS)
        return SafetyAutomaton(self.states, BITS, trans, frozenset([self.start]))

    def run(self, bits: Iterable, q=None):
        q = self.start if q is None else q
        for b in bits:
            q = self.delta[(q, str(b))]
        return q

    def accepts_word(self, w: UltimatelyPeriodicWord) -> bool:
        if len(w.cycle) != 1:
            return False
        return w.cycle[0] in self.marks[self.run(w.prefix)]

    def accepts(self, n: int) -> bool:
        return self.accepts_word(int_word(n))

    def __contains__(self, n: int) -> bool:
        return self.accepts(n)

    def members(self, lo: int, hi: int) -> list:
        return [n for n in range(lo, hi + 1) if self.accepts(n)]

    def __repr__(self):
        return f"IntegerAutomaton({len(self.states)} states)"


def int_word(n: int) -> UltimatelyPeriodicWord:
    tail = "1" if n < 0 else "0"
    prefix = []
    while n not in (0, -1):
        prefix.append(str(n & 1))
        n >>= 1
    return UltimatelyPeriodicWord(tuple(prefix), (tail,))


def from_nfa(A: SafetyAutomaton, start: Iterable, marks: Mapping) -> IntegerAutomaton:
    """Subset construction; a subset is marked c if a member is."""
    start = frozenset(start)
    delta, seen, queue = {}, {start}, deque([start])
    while queue:
        S = queue.popleft()
        for b in BITS:
            T = frozenset(r for q in S for r in A.delta.get((q, b), ()))
            delta[(S, b)] = T
            if T not in seen:
                seen.add(T)
                queue.append(T)
    m = {S: frozenset(c for q in S for c in marks.get(q, ())) for S in seen}
    return IntegerAutomaton.build(list(seen), delta, start, m)


def everything() -> IntegerAutomaton:
    """All of ℤ."""
    return IntegerAutomaton.build(["Z"], {("Z", "0"): "Z", ("Z", "1"): "Z"}, "Z",
                                  {"Z": frozenset(BITS)})


def nothing() -> IntegerAutomaton:
    return IntegerAutomaton.build([SINK], {(SINK, "0"): SINK, (SINK, "1"): SINK}, SINK, {})


def _product(A: IntegerAutomaton, B: IntegerAutomaton, op) -> IntegerAutomaton:
    start = (A.start, B.start)
    delta, seen, queue = {}, {start}, deque([start])
    while queue:
        p, q = node = queue.popleft()
        for b in BITS:
            r = (A.delta[(p, b)], B.delta[(q, b)])
            delta[(node, b)] = r
            if r not in seen:
                seen.add(r)
                queue.append(r)
    marks = {(p, q): frozenset(c for c in BITS if op(c in A.marks[p], c in B.marks[q]))
             for p, q in seen}
    return IntegerAutomaton.build(list(seen), delta, start, marks)


def intersect(A: IntegerAutomaton, B: IntegerAutomaton) -> IntegerAutomaton:
    return _product(A, B, lambda x, y: x and y)


def union(A: IntegerAutomaton, B: IntegerAutomaton) -> IntegerAutomaton:
    return _product(A, B, lambda x, y: x or y)


def complement(A: IntegerAutomaton) -> IntegerAutomaton:
    """ℤ ∖ L(A)."""
    return IntegerAutomaton.build(A.states, A.delta, A.start,
                                  {q: frozenset(BITS) - A.marks[q] for q in A.states})


def affine(A: IntegerAutomaton, r: int) -> IntegerAutomaton:
    """{2n + r : n ∈ L(A)} for r ∈ {0, 1}."""
    new, bit = ("2x+", r), str(r)
    states = [new, SINK] + list(A.states)
    delta = dict(A.delta)
    delta[(new, bit)] = A.start
    delta[(new, str(1 - r))] = SINK
    delta[(SINK, "0")] = delta[(SINK, "1")] = SINK
    marks = dict(A.marks)
    return IntegerAutomaton.build(states, delta, new, marks)


def negate(A: IntegerAutomaton) -> IntegerAutomaton:
    """{−n : n ∈ L(A)} through the two's-complement transducer: copy up to and
    including the first 1 (mode C), then invert (mode I)."""
    states, delta, marks = [], {}, {}
    for q in A.states:
        for mode in "CI":
            states.append((q, mode))
    for q in A.states:
        delta[((q, "C"), "0")] = (A.delta[(q, "0")], "C")
        delta[((q, "C"), "1")] = (A.delta[(q, "1")], "I")
        delta[((q, "I"), "0")] = (A.delta[(q, "1")], "I")
        delta[((q, "I"), "1")] = (A.delta[(q, "0")], "I")
        marks[(q, "C")] = frozenset("0") & A.marks[q]
        marks[(q, "I")] = frozenset(str(1 - int(c)) for c in A.marks[q])
    return IntegerAutomaton.build(states, delta, (A.start, "C"), marks)


_SWAP = {"0": "1", "1": "0"}


def _swapped(marks: Mapping) -> dict:
    """Exchange 0^ω and 1^ω in base (unclosed) tail marks: the usual
    shortcut for negation."""
    return {q: frozenset(_SWAP[c] for c in m) for q, m in marks.items()}


def is_empty(A: IntegerAutomaton) -> bool:
    return not any(A.marks[q] for q in A.states)


def minimize(A: IntegerAutomaton) -> tuple:
    """Canonical form: Moore refinement starting from the mark partition,
    renumbered breadth-first.  Equal iff the integer sets are equal."""
    ids0: dict = {}
    block = {q: ids0.setdefault(A.marks[q], len(ids0)) for q in A.states}
    while True:
        ids: dict = {}
        new = {q: ids.setdefault((block[q], block[A.delta[(q, "0")]], block[A.delta[(q, "1")]]),
                                 len(ids)) for q in A.states}
        done = len(ids) == len(set(block.values()))
        block = new
        if done:
            break
    order, queue = {block[A.start]: 0}, deque([A.start])
    rep = {}
    for q in A.states:
        rep.setdefault(block[q], q)
    rows = []
    while queue:
        q = queue.popleft()
        row = [tuple(sorted(A.marks[q]))]
        for b in BITS:
            r = A.delta[(q, b)]
            if block[r] not in order:
                order[block[r]] = len(order)
                queue.append(rep[block[r]])
            row.append(order[block[r]])
        rows.append(tuple(row))
    return tuple(rows)


def language_equal(A: IntegerAutomaton, B: IntegerAutomaton) -> bool:
    return minimize(A) == minimize(B)


def leading_zero_profile(A: IntegerAutomaton) -> dict:
    """Which parities k mod 2 occur among accepted words starting 0^k 1, and
    whether 0^ω itself is accepted."""
    parities = set()
    q, k, seen = A.start, 0, {}
    while (q, k % 2) not in seen:
        seen[(q, k % 2)] = k
        if not is_empty(IntegerAutomaton.build(A.states, A.delta, A.delta[(q, "1")], A.marks)):
            parities.add(k % 2)
        q = A.delta[(q, "0")]
        k += 1
    return {"odd": 1 in parities, "even": 0 in parities, "zero": "0" in A.marks[A.start]}


# -- the Λ system ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LambdaSystem:
    """The Λ(z,s) sets for a family of minimal base paths closed under σ."""

    automaton: SafetyAutomaton  # the path automaton 𝒜
    generator: Transducer  # 𝒜_μ
    bases: Mapping  # name -> PathWord (minimal, infinite)

    def __post_init__(self):
        for name, z in self.bases.items():
            if not z.is_infinite or any(label_bit(a) for a in z.labels.letters()):
                raise ValueError(f"base point {name} must be an infinite minimal path")

    @cached_property
    def shift_names(self) -> dict:
        """name -> name of σ(base)."""
        by_word = {(z.labels, z.start): n for n, z in self.bases.items()}
        out = {}
        for n, z in self.bases.items():
            key = (z.labels.drop(1), z.vertex(1))
            if key not in by_word:
                raise ValueError(f"σ({n}) is not among the base points")
            out[n] = by_word[key]
        return out

    @cached_property
    def seeds(self) -> dict:
        """name -> {0: state of μ⁰(z), -1: state of μ⁻¹(z)}."""
        inv = invert(self.generator)
        out = {}
        for n, z in self.bases.items():
            prev = apply(inv, z.labels)
            out[n] = {0: z.start, -1: start_state(self.automaton, prev)}
        return out

    @cached_property
    def nfa(self) -> tuple:
        A = self.automaton
        trans = set()
        for n in self.bases:
            m = self.shift_names[n]
            for s, a, t in A.transitions:
                trans.add(((n, s), str(label_bit(a)), (m, t)))
        states = tuple((n, s) for n in self.bases for s in A.states)
        marks: dict = {}
        for n, sd in self.seeds.items():
            marks.setdefault((n, sd[0]), set()).add("0")
            marks.setdefault((n, sd[-1]), set()).add("1")
        N = SafetyAutomaton(states, BITS, frozenset(trans), frozenset(states))
        return N, {k: frozenset(v) for k, v in marks.items()}

    def automaton_for(self, name: str, s: str) -> IntegerAutomaton:
        """The integer automaton of Λ(name, s)."""
        N, marks = self.nfa
        if name not in self.bases:
            raise KeyError(name)
        return from_nfa(N, [(name, s)], marks)

    def check_seeds(self, expected: Mapping) -> None:
        """Raise ConstructionError unless the derived seeds match."""
        for name, sd in expected.items():
            if self.seeds[name] != sd:
                raise ConstructionError(f"seeds for {name}: derived {self.seeds[name]}, expected {sd}")


def minimal_path(A: SafetyAutomaton, start: str) -> PathWord:
    """The all-minimal path from ``start`` (must exist and be unique)."""
    labels, q, seen = [], start, {}
    while q not in seen:
        seen[q] = len(labels)
        nxt = [(a, r) for a, r in A.successors[q] if label_bit(a) == 0]
        if len(nxt) != 1:
            # prefer the branch that stays on minimal edges forever
            from .adic import minimal_extremal_paths

            mins, _ = minimal_extremal_paths(A)
            for p in mins:
                if p.start == start:
                    return p
            raise ValueError(f"no infinite minimal path from {start!r}")
        a, r = nxt[0]
        labels.append(a)
        q = r
    k = seen[q]
    return PathWord(start, UltimatelyPeriodicWord(tuple(labels[:k]), tuple(labels[k:])))


def default_system(A: SafetyAutomaton, mu: Transducer) -> LambdaSystem:
    """x = the minimal path through e,d,e,… (labels (0_d0_e)^ω from e) and
    y = the one through d,e,d,… (labels (0_e0_d)^ω from d)."""
    x = PathWord("e", UltimatelyPeriodicWord((), ("0_d", "0_e"))).validate(A)
    y = PathWord("d", UltimatelyPeriodicWord((), ("0_e", "0_d"))).validate(A)
    return LambdaSystem(A, mu, {"x": x, "y": y})


REFERENCE_SEEDS = {"x": {0: "e", -1: "b"}, "y": {0: "d", -1: "a"}}


def orbit_oracle(mu: Transducer, A: SafetyAutomaton, base: PathWord, rng: int) -> dict:
    """n -> start state of μⁿ(base) for |n| ≤ rng, by exact iteration."""
    if rng > 1 << 14:
        raise ValueError("range too large")
    out = {0: base.start}
    inv = invert(mu)
    for T, sign in ((mu, 1), (inv, -1)):
        w = base.labels
        for k in range(1, rng + 1):
            w = apply(T, w)
            out[sign * k] = start_state(A, w)
    return out


def check_minimal(A: SafetyAutomaton) -> bool:
    return is_strongly_connected(A)


def biminimality_report(system: LambdaSystem, oracle_range: int = 1 << 10) -> dict:
    neg_xd = negate(system.automaton_for("x", "d"))
    ye = system.automaton_for("y", "e")
    inter = intersect(neg_xd, ye)
    swapped = intersect(negate(system.automaton_for("y", "e")), system.automaton_for("x", "d"))
    sanity = intersect(negate(system.automaton_for("x", "e")), system.automaton_for("y", "d"))
    prof_neg = leading_zero_profile(neg_xd)
    prof_ye = leading_zero_profile(ye)
    oracle = oracle_check(system, oracle_range) if oracle_range else None
    return {
        "claim": "no n with mu^n(x) in dL(A) and mu^-n(y) in eL(A)",
        "automata_sizes": {"-Lambda(x,d)": len(neg_xd.states), "Lambda(y,e)": len(ye.states),
                           "intersection": len(inter.states)},
        "intersection_empty": is_empty(inter),
        "swapped_intersection_empty": is_empty(swapped),
        "sanity_nonempty": not is_empty(sanity) and 0 in sanity,
        "leading_zeros": {"-Lambda(x,d)": prof_neg, "Lambda(y,e)": prof_ye},
        "witness": None if is_empty(inter) else _witness(inter),
        "oracle_range_checked": oracle_range if oracle else 0,
        "oracle_mismatches": len(oracle["mismatches"]) if oracle else None,
    }


def partition_identity(system: LambdaSystem, name: str) -> bool:
    """The six Λ(name, s) are pairwise disjoint and cover ℤ."""
    Ls = [system.automaton_for(name, s) for s in system.automaton.states]
    U = nothing()
    for L in Ls:
        U = union(U, L)
    disjoint = all(is_empty(intersect(Ls[i], Ls[j])) for i in range(len(Ls)) for j in range(i))
    return disjoint and language_equal(U, everything())


def recursion_identities(system: LambdaSystem) -> dict:
    """For every base z and state s: Λ(z,s) = ⋃ 2Λ(σz,t) + r over the edges
    s → t of rank r.  Returns {(z, s): holds}."""
    A = system.automaton
    out = {}
    for name in system.bases:
        m = system.shift_names[name]
        for s in A.states:
            R = nothing()
            for src, a, t in A.transitions:
                if src == s:
                    R = union(R, affine(system.automaton_for(m, t), label_bit(a)))
            out[(name, s)] = language_equal(R, system.automaton_for(name, s))
    return out


def oracle_check(system: LambdaSystem, rng: int = 1 << 10) -> dict:
    """Compare every Λ automaton with direct iteration of μ on |n| ≤ rng."""
    A = system.automaton
    mismatches = []
    for name, z in system.bases.items():
        orbit = orbit_oracle(system.generator, A, z, rng)
        for s in A.states:
            L = system.automaton_for(name, s)
            for n, q in orbit.items():
                if L.accepts(n) != (q == s):
                    mismatches.append((name, s, n))
    return {"range": rng, "checked": len(system.bases) * len(A.states) * (2 * rng + 1),
            "mismatches": mismatches, "pass": not mismatches}


def _witness(A: IntegerAutomaton, bound: int = 1 << 12):
    for n in range(bound):
        for m in (n, -n - 1):
            if A.accepts(m):
                return m
    return None


# -- the drawn automata, for comparison --------------------------------------

def _pair_nfa(edges: Iterable, marks: Mapping, start) -> IntegerAutomaton:
    """NFA reading bits in pairs: each ``(s, "ab", t)`` goes through an
    intermediate state ``(s, "a")``."""
    trans, states = set(), set()
    for s, ab, t in edges:
        mid = (s, ab[0])
        trans.add((s, ab[0], mid))
        trans.add((mid, ab[1], t))
        states |= {s, t, mid}
    N = SafetyAutomaton(tuple(sorted(states, key=repr)), BITS, frozenset(trans), frozenset(states))
    return from_nfa(N, [start], marks)


# the large drawing: states are unions of Λ(·,s) after an even number of bits
FIGURE_EDGES = [
    ("c", "00", "c"), ("c", "01", "ade"),
    ("f", "11", "f"), ("f", "10", "ade"),
    ("de", "11", "de"), ("de", "00", "ade"), ("de", "01", "bcf"),
    ("ade", "00", "ade"), ("ade", "11", "ade"), ("ade", "10", "bcf"), ("ade", "01", "bcf"),
    ("bc", "11", "bc"), ("bc", "01", "ade"), ("bc", "00", "bcf"),
    ("e", "11", "de"), ("e", "00", "ac"),
    ("b", "11", "bc"), ("b", "00", "bf"),
    ("ac", "00", "ac"), ("ac", "11", "ade"), ("ac", "10", "bcf"),
    ("bcf", "11", "bcf"), ("bcf", "00", "bcf"), ("bcf", "10", "ade"), ("bcf", "01", "ade"),
    ("bf", "00", "bf"), ("bf", "10", "ade"), ("bf", "11", "bcf"),
    ("a", "11", "a"), ("a", "10", "bcf"),
    ("d", "00", "d"), ("d", "01", "bcf"),
]


def figure_automaton(which: str, s: str) -> IntegerAutomaton:
    """The drawn Λ automaton with the drawn tail rule: for x accept 0^ω only
    at ade and 1^ω only at bcf; for y accept both only at ade."""
    if which == "x":
        marks = {"ade": frozenset("0"), "bcf": frozenset("1")}
    elif which == "y":
        marks = {"ade": frozenset(BITS)}
    else:
        raise ValueError(which)
    return _pair_nfa(FIGURE_EDGES, marks, s)


def figure_lambda_xd(swap_tails: bool = False) -> IntegerAutomaton:
    """The small drawing of Λ(x,d); with ``swap_tails`` the drawing of
    −Λ(x,d)."""
    edges = [("L", "00", "L"), ("L", "01", "*1*"),
             ("*0*", "00", "*0*"), ("*0*", "11", "*0*"), ("*0*", "10", "*1*"), ("*0*", "01", "*1*"),
             ("*1*", "00", "*1*"), ("*1*", "11", "*1*"), ("*1*", "10", "*0*"), ("*1*", "01", "*0*")]
    marks = {"*0*": frozenset("0"), "*1*": frozenset("1")}
    return _pair_nfa(edges, _swapped(marks) if swap_tails else marks, "L")


def figure_lambda_ye() -> IntegerAutomaton:
    """The small drawing of Λ(y,e)."""
    edges = [("L", "11", "*01"), ("L", "00", "10*"),
             ("*01", "11", "*01"), ("*01", "00", "*0*"), ("*01", "01", "*1*"),
             ("10*", "00", "10*"), ("10*", "11", "*0*"), ("10*", "10", "*1*"),
             ("*0*", "00", "*0*"), ("*0*", "11", "*0*"), ("*0*", "10", "*1*"), ("*0*", "01", "*1*"),
             ("*1*", "00", "*1*"), ("*1*", "11", "*1*"), ("*1*", "10", "*0*"), ("*1*", "01", "*0*")]
    return _pair_nfa(edges, {"*0*": frozenset(BITS)}, "L")


def regex_lambda_xd(n: int, aligned: bool = True) -> bool:
    """Membership in (00)*01E1^ω ∪ (00)*010*1E0^ω, E = words with an even
    number of 1s.  With ``aligned`` the E before 1^ω must have even length
    (the drawn automaton reads bits in pairs); without it, the expression is
    taken literally, which also admits e.g. −6 = 010·1^ω."""
    import re

    w = int_word(n)
    tail = w.cycle[0]
    body = "".join(w.prefix)
    even = r"(0*10*1)*0*"
    for pad in range(0, 4):
        s = body + tail * pad
        if tail == "1":
            m = re.fullmatch(r"(00)*01(.*)", s)
            if m and re.fullmatch(even, m.group(2)) and (not aligned or len(m.group(2)) % 2 == 0):
                return True
        elif re.fullmatch(r"(00)*010*1" + even, s):
            return True
    return False
