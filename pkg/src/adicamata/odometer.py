"""The dyadic layer: ℬ, ℬ_τ, ℬ_ζ, the factor map forgetting decorations,
exact 2-adic arithmetic on ultimately periodic bit words, Z̃₂ and the
cocycle φ, and the M / D transducers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .adic import (
    PathWord,
    build_adic_transducer,
    build_bratteli,
    build_path_automaton,
    build_zeta_transducer,
    label_bit,
)
from .safety_automata import (
    SafetyAutomaton,
    UltimatelyPeriodicWord,
    _live,
    _positions,
    _reachable,
    language_equal,
    strongly_connected_components,
    trim,
)
from .transducers import Transducer, compose, diagonal, pair_alphabet
from .words import DOUBLING

BIT_ALPHABET = ("0", "1")
SYMMETRY_ZERO = frozenset("ade")
BRANCH_STATES = frozenset("be")


# -- 2-adic integers ---------------------------------------------------------

@dataclass(frozen=True)
class DyadicWord:
    """An element of ℤ₂ as an ultimately periodic LSB-first bit word."""

    bits: UltimatelyPeriodicWord

    def __post_init__(self):
        bits = self.bits
        if not isinstance(bits, UltimatelyPeriodicWord):
            bits = UltimatelyPeriodicWord.parse(bits) if isinstance(bits, str) else \
                UltimatelyPeriodicWord(*bits)
        bits = bits.map(str)
        if bits.letters() - set(BIT_ALPHABET):
            raise ValueError(f"not a bit word: {bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "DyadicWord":
        return cls(UltimatelyPeriodicWord.parse(text))

    @classmethod
    def from_int(cls, n: int) -> "DyadicWord":
        tail = "1" if n < 0 else "0"
        prefix = []
        while n not in (0, -1):
            prefix.append(str(n & 1))
            n >>= 1
        return cls(UltimatelyPeriodicWord(tuple(prefix), (tail,)))

    @property
    def is_integer(self) -> bool:
        return len(self.bits.cycle) == 1

    def to_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        n = sum(int(b) << i for i, b in enumerate(self.bits.prefix))
        if self.bits.cycle == ("1",):
            n -= 1 << len(self.bits.prefix)
        return n

    def to_fraction(self):
        """The rational number p/q represented (every ultimately periodic
        2-adic integer is rational with odd denominator)."""
        from fractions import Fraction

        k, m = len(self.bits.prefix), len(self.bits.cycle)
        a = sum(int(b) << i for i, b in enumerate(self.bits.prefix))
        c = sum(int(b) << i for i, b in enumerate(self.bits.cycle))
        return Fraction(a) + Fraction(c << k, 1 - (1 << m))

    def leading_zeros(self):
        """n with bits 0ⁿ1…, or None for 0^ω."""
        if self.bits == UltimatelyPeriodicWord((), ("0",)):
            return None
        i = 0
        while self.bits[i] == "0":
            i += 1
        return i

    def __str__(self):
        return str(self.bits)


def add_one(x: DyadicWord) -> DyadicWord:
    """Carry propagation: 1ᵏ0w ↦ 0ᵏ1w and 1^ω ↦ 0^ω."""
    bits = x.bits
    if bits == UltimatelyPeriodicWord((), ("1",)):
        return DyadicWord(UltimatelyPeriodicWord((), ("0",)))
    k = 0
    while bits[k] == "1":
        k += 1
    rest = bits.drop(k + 1)
    return DyadicWord(rest.prepend(("0",) * k + ("1",)))


def subtract_one(x: DyadicWord) -> DyadicWord:
    bits = x.bits
    if bits == UltimatelyPeriodicWord((), ("0",)):
        return DyadicWord(UltimatelyPeriodicWord((), ("1",)))
    k = 0
    while bits[k] == "0":
        k += 1
    rest = bits.drop(k + 1)
    return DyadicWord(rest.prepend(("1",) * k + ("0",)))


def double(x: DyadicWord) -> DyadicWord:
    return DyadicWord(x.bits.prepend(("0",)))


def negate_dyadic(x: DyadicWord) -> DyadicWord:
    """−x = NOT(x) + 1."""
    return add_one(DyadicWord(x.bits.map(lambda b: "1" if b == "0" else "0")))


# -- automata ------------------------------------------------------------------

def build_B() -> SafetyAutomaton:
    """ℬ: one state, loops 0 and 1."""
    return build_path_automaton(build_bratteli(DOUBLING), decorate=False)


def build_B_tau() -> Transducer:
    """ℬ_τ, the odometer, as the adic transducer of the one-vertex diagram."""
    return build_adic_transducer(build_bratteli(DOUBLING), decorate=False)


def build_B_zeta() -> Transducer:
    """ℬ_ζ: prints 0 first, then copies its input delayed by one letter."""
    return Transducer.from_edges(
        [("zeta", "0", "0", "zeta"), ("zeta", "1", "0", "s1"),
         ("s1", "1", "1", "s1"), ("s1", "0", "1", "zeta")],
        BIT_ALPHABET, BIT_ALPHABET, initial=["zeta"],
    )


def forget(label) -> str:
    """i_j ↦ i; pairs componentwise."""
    if isinstance(label, tuple):
        return tuple(forget(x) for x in label)
    return str(label).partition("_")[0]


def forget_decorations(X):
    """Relabel a path automaton or a transducer over decorated letters."""
    if isinstance(X, Transducer):
        U = X.underlying
        trans = frozenset((s, forget(a), d) for s, a, d in U.transitions)
        V = SafetyAutomaton(U.states, pair_alphabet(BIT_ALPHABET, BIT_ALPHABET), trans, U.initial)
        return Transducer(V, BIT_ALPHABET, BIT_ALPHABET)
    trans = frozenset((s, forget(a), d) for s, a, d in X.transitions)
    return SafetyAutomaton(X.states, BIT_ALPHABET, trans, X.initial)


def find_morphism(A: SafetyAutomaton, B: SafetyAutomaton):
    """A label-preserving graph morphism A → B mapping initial states to
    initial states, found by backtracking; None if there is none."""
    order = list(A.states)
    edges_from = {q: [(a, r) for a, r in A.successors[q]] for q in order}
    edges_to = {q: [(a, p) for a, p in A.predecessors[q]] for q in order}
    Bset = set(B.transitions)
    assign: dict = {}

    def consistent(q, img):
        if q in A.initial and img not in B.initial:
            return False
        for a, r in edges_from[q]:
            if r in assign and (img, a, assign[r]) not in Bset:
                return False
            if r == q and (img, a, img) not in Bset:
                return False
        for a, p in edges_to[q]:
            if p in assign and (assign[p], a, img) not in Bset:
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        q = order[i]
        for img in B.states:
            if consistent(q, img):
                assign[q] = img
                if search(i + 1):
                    return True
                del assign[q]
        return False

    return dict(assign) if search(0) else None


def projection_transducer(A: SafetyAutomaton) -> Transducer:
    """π on L(A): copies the path, printing only the bit of each label."""
    trans = frozenset((s, (a, forget(a)), d) for s, a, d in A.transitions)
    U = SafetyAutomaton(A.states, pair_alphabet(A.alphabet, BIT_ALPHABET), trans, A.initial)
    return Transducer(U, A.alphabet, BIT_ALPHABET)


def check_factor(A: SafetyAutomaton, mu: Transducer, zeta: Transducer | None = None) -> dict:
    """τ∘π = π∘μ and (doubling)∘π = π∘ζ as relations, plus the automaton
    morphisms 𝒜 → ℬ and 𝒜_μ → ℬ_τ."""
    if zeta is None:
        zeta = build_zeta_transducer(A)
    P = projection_transducer(A)
    tau, dbl = build_B_tau(), build_B_zeta()
    res = {
        "morphism_A_B": find_morphism(forget_decorations(A), build_B()) is not None,
        "morphism_mu_tau": find_morphism(forget_decorations(mu).underlying,
                                         tau.underlying) is not None,
        "tau_pi": language_equal(compose(tau, P).underlying, compose(P, mu).underlying),
        "zeta_pi": language_equal(compose(dbl, P).underlying, compose(P, zeta).underlying),
    }
    res["pass"] = all(res.values())
    return res


def count_runs(A: SafetyAutomaton, w: UltimatelyPeriodicWord) -> float:
    """Number of infinite runs of A over w (paths, not words); ``math.inf``
    when infinite."""
    _, nxt = _positions(w)
    delta = A.delta

    def succ(node):
        q, i = node
        return [(r, nxt(i)) for r in delta.get((q, w[i]), ())]

    start = [(q, 0) for q in A.ordered_initial()]
    reach = _reachable(start, succ)
    live = _live(reach, succ)
    lsucc = {v: [u for u in succ(v) if u in live] for v in live}
    comps = strongly_connected_components(sorted(live, key=repr), lambda v: lsucc[v])
    cyc = set()
    for comp in comps:
        if len(comp) > 1 or comp[0] in lsucc[comp[0]]:
            cyc.update(comp)
    if any(len(lsucc[v]) > 1 for v in cyc):
        return math.inf
    memo: dict = {}
    for comp in comps:  # reverse topological order: successors first
        for v in comp:
            memo[v] = 1 if v in cyc else sum(memo[u] for u in lsucc[v])
    return sum(memo[v] for v in start if v in live)


def fiber_size(A: SafetyAutomaton, x: DyadicWord) -> float:
    """|π⁻¹(x)| for the path automaton A."""
    return count_runs(forget_decorations(A), x.bits)


# -- Z̃₂ and the cocycle ------------------------------------------------------

@dataclass(frozen=True)
class TildeDyadic:
    value: DyadicWord
    branch: int | None = None

    def __post_init__(self):
        if self.value.is_integer and self.branch not in (0, 1):
            raise ValueError("integers in Z̃₂ carry a branch bit 0 or 1")
        if not self.value.is_integer and self.branch is not None:
            raise ValueError("non-integers carry no branch bit")

    def __str__(self):
        return str(self.value) if self.branch is None else f"({self.value},{self.branch})"


@dataclass(frozen=True)
class SymmetricPoint:
    s: int
    z: TildeDyadic

    def __str__(self):
        return f"({self.s},{self.z})"


def tau_tilde(z: TildeDyadic) -> TildeDyadic:
    return TildeDyadic(add_one(z.value), z.branch)


def zeta_tilde(z: TildeDyadic) -> TildeDyadic:
    return TildeDyadic(double(z.value), None if z.branch is None else (z.branch + 1) % 2)


def phi(z: TildeDyadic) -> int:
    n = z.value.leading_zeros()
    if n is None:
        return (z.branch + 1) % 2
    return (n + 1) % 2


def mu_tilde(p: SymmetricPoint) -> SymmetricPoint:
    z1 = tau_tilde(p.z)
    return SymmetricPoint((p.s + phi(z1)) % 2, z1)


def bits_of_path(z: PathWord) -> DyadicWord:
    return DyadicWord(z.labels.map(lambda a: str(label_bit(a))))


def symmetry_bit(z: PathWord) -> int:
    """s(z) = 0 iff z starts in {a,d,e}."""
    return 0 if z.start in SYMMETRY_ZERO else 1


def branch_bit(z: PathWord) -> int:
    """Parity of the (large) positions i at which the vertex z_i is in {b,e}."""
    w = z.labels
    k, m = len(w.prefix), len(w.cycle)
    parities = {i % 2 for i in range(k + 1, k + 2 * m + 1) if z.vertex(i) in BRANCH_STATES}
    if len(parities) != 1:
        raise ValueError(f"path {z} does not visit {{b,e}} at positions of one parity")
    return parities.pop()


def pi_tilde(z: PathWord) -> TildeDyadic:
    if not z.is_infinite:
        raise ValueError("pi_tilde needs an infinite path")
    x = bits_of_path(z)
    return TildeDyadic(x, branch_bit(z) if x.is_integer else None)


def symmetric_point(z: PathWord) -> SymmetricPoint:
    return SymmetricPoint(symmetry_bit(z), pi_tilde(z))


def _prefixes(A: SafetyAutomaton, depth: int):
    """All finite paths of length ``depth`` (every start state)."""
    layer = [(q, ()) for q in A.states]
    for _ in range(depth):
        layer = [(q0, labels + (a,)) for q0, labels in layer
                 for a, _ in A.successors[_end(A, q0, labels)]]
    return [PathWord(q, labels) for q, labels in layer]


def _end(A: SafetyAutomaton, q, labels):
    for a in labels:
        q = A.delta[(q, a)][0]
    return q


def check_cocycle_conjugacy(A: SafetyAutomaton, mu: Transducer, depth: int = 12) -> dict:
    """Compare μ with (s, z) ↦ (s + φ(z+1), z+1).

    Finite part: for every path prefix of length n ≤ ``depth`` that is not
    all-maximal, the successor prefix must have bits = bits + 1 (mod 2ⁿ) and
    symmetry bit shifted by φ, where φ is read off the position of the first
    1 (always inside the prefix).  Infinite part: the extremal paths,
    compared exactly through Z̃₂."""
    from .adic import minimal_extremal_paths, start_state, vershik_successor
    from .transducers import apply

    mismatches, checked = [], 0
    for n in range(1, depth + 1):
        for z in _prefixes(A, n):
            w = vershik_successor(A, z)
            if w is None:
                continue
            checked += 1
            x = sum(e << i for i, e in enumerate(z.epsilons()))
            y = sum(e << i for i, e in enumerate(w.epsilons()))
            lz = w.epsilons().index(1)
            s_expected = (symmetry_bit(z) + (lz + 1) % 2) % 2
            if y != (x + 1) % (1 << n) or symmetry_bit(w) != s_expected:
                mismatches.append(str(z))
    lo, hi = minimal_extremal_paths(A)
    extremal = sorted(lo | hi, key=str)
    for z in extremal:
        out = apply(mu, z.labels)
        w = PathWord(start_state(A, out), out)
        checked += 1
        if mu_tilde(symmetric_point(z)) != symmetric_point(w):
            mismatches.append(str(z))
    return {"checked": checked, "extremal": len(extremal), "mismatches": mismatches,
            "pass": not mismatches and len(extremal) == 8}


# -- M and D -------------------------------------------------------------------

_M_FIGURE_EDGES = [
    ("E", "0", "0", "E"), ("E", "1", "1", "E"),
    ("M01e", "1", "0", "M10e"), ("M10e", "0", "0", "M01e"),
    ("M01o", "1", "1", "M10o"), ("M10o", "0", "1", "M01o"),
    ("M10e", "1", "1", "E"), ("M01o", "0", "0", "E"),
]
_M_STATES = ["M01e", "M10e", "M01o", "M10o", "E"]


def build_M_figure() -> Transducer:
    """The five drawn states, with the four M states initial.  Taken
    literally this relation is multi-valued almost everywhere: the exits
    M10e→E and M01o→E copy the input when taken on the first letter."""
    return Transducer.from_edges(_M_FIGURE_EDGES, BIT_ALPHABET, BIT_ALPHABET,
                                 initial=_M_STATES[:4], states=_M_STATES)


def build_M_transducer() -> Transducer:
    """The Vershik-Solomyak machine: the five drawn states plus a start state
    ``M`` whose moves are the non-exit first moves of the four M states.
    Two-valued exactly at (01)^ω and (10)^ω; satisfies τ∘D = D∘M."""
    first = [("M", a, b, d) for s, a, b, d in _M_FIGURE_EDGES
             if s.startswith("M") and d != "E"]
    return Transducer.from_edges(_M_FIGURE_EDGES + first, BIT_ALPHABET, BIT_ALPHABET,
                                 initial=["M"], states=["M"] + _M_STATES)


def build_D_transducer() -> Transducer:
    """D(x)_i = x_i + x_{i+1} mod 2: the state guesses the next input bit."""
    return Transducer.from_edges(
        [("d0", "0", "0", "d0"), ("d0", "0", "1", "d1"),
         ("d1", "1", "0", "d1"), ("d1", "1", "1", "d0")],
        BIT_ALPHABET, BIT_ALPHABET,
    )


def difference(w: str) -> str:
    """Adjacent sums mod 2 of a finite word (length drops by one)."""
    return "".join(str((int(a) + int(b)) % 2) for a, b in zip(w, w[1:]))


def check_tau_D_DM() -> bool:
    tau, D, M = build_B_tau(), build_D_transducer(), build_M_transducer()
    return language_equal(compose(tau, D).underlying, compose(D, M).underlying)
