"""Bratteli-Vershik layer.

A stationary ordered Bratteli diagram is stored as one level of edges
``(src, dst, rank)``; a rule ``a ↦ bc`` of a length-2 substitution gives the
minimal edge ``b → a`` (rank 0) and the maximal edge ``c → a`` (rank 1).
Infinite paths are the runs of the path automaton, whose transition
``v → w`` of rank ``r`` is labelled ``r_w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .safety_automata import (
    SafetyAutomaton,
    UltimatelyPeriodicWord,
    _live,
    restrict,
    trim,
)
from .transducers import (
    Transducer,
    _deterministic_paths,
    compose,
    invert,
    is_unambiguous,
    pair_alphabet,
)
from .words import (
    IndeterminateError,
    Substitution,
    WordWindow,
    collar_letter_bits,
    desubstitute,
    iterate,
    THUE_MORSE,
    TM_COLLAR_NAMES,
)
from .safety_automata import determinize, with_initial


class ConstructionError(ValueError):
    """A diagram lies outside the supported class."""


@dataclass(frozen=True)
class BratteliDiagram:
    vertices: tuple
    edges: frozenset  # (src, dst, rank)

    def __post_init__(self):
        vertices = tuple(dict.fromkeys(self.vertices))
        edges = frozenset(tuple(e) for e in self.edges)
        known = set(vertices)
        for s, d, r in edges:
            if s not in known or d not in known:
                raise ValueError(f"edge {(s, d, r)} uses unknown vertex")
        for v in vertices:
            ranks = sorted(r for _, d, r in edges if d == v)
            if ranks != list(range(len(ranks))):
                raise ValueError(f"incoming ranks at {v!r} are {ranks}, expected 0..k-1")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

    def incoming(self, v, rank: int):
        """Source of the rank-``rank`` edge into ``v`` (None if absent)."""
        for s, d, r in self.edges:
            if d == v and r == rank:
                return s
        return None

    def sorted_edges(self) -> list:
        idx = {v: i for i, v in enumerate(self.vertices)}
        return sorted(self.edges, key=lambda e: (idx[e[0]], idx[e[1]], e[2]))

    @property
    def max_rank(self) -> int:
        return max((r for _, _, r in self.edges), default=-1)


def build_bratteli(cs: Substitution) -> BratteliDiagram:
    if not all(len(img) == 2 for img in cs.images.values()):
        raise ValueError("build_bratteli needs a constant-length-2 substitution")
    edges = set()
    for a in cs.alphabet:
        b, c = cs.images[a]
        edges.add((b, a, 0))
        edges.add((c, a, 1))
    return BratteliDiagram(cs.alphabet, frozenset(edges))


def edge_label(dst, rank: int, decorate: bool = True) -> str:
    return f"{rank}_{dst}" if decorate else str(rank)


def label_bit(label: str) -> int:
    return int(str(label)[0])


def label_state(label: str) -> str:
    return str(label).partition("_")[2]


def build_path_automaton(B: BratteliDiagram, decorate: bool = True) -> SafetyAutomaton:
    trans = {(s, edge_label(d, r, decorate), d) for s, d, r in B.edges}
    alphabet = sorted({t[1] for t in trans}, key=lambda l: (l.partition("_")[2], l))
    if decorate:
        idx = {v: i for i, v in enumerate(B.vertices)}
        alphabet = sorted(alphabet, key=lambda l: (label_bit(l), idx[label_state(l)]))
    return SafetyAutomaton(B.vertices, tuple(alphabet), frozenset(trans), frozenset(B.vertices))


def diagram_from_path_automaton(A: SafetyAutomaton) -> BratteliDiagram:
    """Inverse of build_path_automaton (ranks read from the label bit)."""
    return BratteliDiagram(A.states, frozenset((s, d, label_bit(a)) for s, a, d in A.transitions))


def label_edges(A: SafetyAutomaton) -> dict:
    """label -> (src, dst); requires every label to occur on one edge."""
    out: dict = {}
    for s, a, d in A.transitions:
        if a in out:
            raise ValueError(f"label {a!r} occurs on several edges")
        out[a] = (s, d)
    return out


# -- paths ------------------------------------------------------------------

@dataclass(frozen=True)
class PathWord:
    """A path in the path automaton with an explicit start state.  ``labels``
    is a tuple (finite prefix) or an UltimatelyPeriodicWord (infinite path)."""

    start: str
    labels: object

    def __post_init__(self):
        if not isinstance(self.labels, UltimatelyPeriodicWord):
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.labels, UltimatelyPeriodicWord)

    def __len__(self):
        if self.is_infinite:
            raise TypeError("infinite path")
        return len(self.labels)

    def label(self, i: int):
        return self.labels[i]

    def take(self, n: int) -> "PathWord":
        if self.is_infinite:
            return PathWord(self.start, self.labels.take(n))
        return PathWord(self.start, self.labels[:n])

    def epsilons(self, n: int | None = None) -> tuple:
        if n is None:
            n = len(self)
        return tuple(label_bit(self.labels[i]) for i in range(n))

    def vertex(self, i: int) -> str:
        """z_i: the vertex reached after i edges (z_0 = start)."""
        return self.start if i == 0 else label_state(self.labels[i - 1])

    def end(self) -> str:
        return self.vertex(len(self))

    def validate(self, A: SafetyAutomaton) -> "PathWord":
        n = len(self.labels.prefix) + len(self.labels.cycle) if self.is_infinite else len(self)
        q = self.start
        if q not in A.index:
            raise ValueError(f"unknown state {q!r}")
        for i in range(n + (1 if self.is_infinite else 0)):
            nxt = A.delta.get((q, self.labels[i]))
            if not nxt:
                raise ValueError(f"no edge {self.labels[i]} from {q} (position {i})")
            q = nxt[0]
        if self.is_infinite:
            # the cycle must close up on the same state
            q0 = self.start
            for i in range(len(self.labels.prefix)):
                q0 = A.delta[(q0, self.labels[i])][0]
            q1 = q0
            for a in self.labels.cycle:
                q1 = A.delta[(q1, a)][0]
            if q0 != q1:
                raise ValueError("cycle does not close up on a state")
        return self

    def __str__(self):
        if self.is_infinite:
            w = self.labels
            return "".join(map(str, w.prefix)) + "(" + "".join(map(str, w.cycle)) + ")@" + self.start
        return "".join(map(str, self.labels)) + "@" + self.start


def path_from_labels(A: SafetyAutomaton, labels) -> PathWord:
    """The start state is the source of the first label."""
    src = label_edges(A)[labels[0]][0]
    return PathWord(src, labels).validate(A)


_LABEL_RE = r"[01](?:_[A-Za-z])?"


def parse_path(text: str, A: SafetyAutomaton | None = None) -> PathWord:
    """Parse ``prefix(cycle)@state`` (cycle optional, ``^ω`` / ``^w`` after
    the cycle tolerated, ``@state`` optional when A is given)."""
    import re

    m = re.fullmatch(r"\s*([^()@]*?)(?:\(([^()@]*)\)(?:\^(?:ω|w|omega))?)?\s*(?:@\s*(\w+))?\s*",
                     text)
    if not m:
        raise ValueError(f"bad path spec {text!r}; expected prefix(cycle)@state")
    head, cycle, start = m.group(1) or "", m.group(2), m.group(3)

    def tokens(part):
        part = part.replace(" ", "")
        toks = re.findall(_LABEL_RE, part)
        if "".join(toks) != part:
            raise ValueError(f"bad labels {part!r} in path spec {text!r}")
        return tuple(toks)

    prefix = tokens(head)
    if cycle is not None:
        cyc = tokens(cycle)
        if not cyc:
            raise ValueError(f"empty cycle in path spec {text!r}")
        labels = UltimatelyPeriodicWord(prefix, cyc)
    else:
        labels = prefix
    if start is None:
        if A is None or not (prefix or cycle):
            raise ValueError(f"path spec {text!r} needs an explicit @state")
        try:
            start = start_state(A, (prefix or cyc)[:1])
        except KeyError:
            raise ValueError(f"unknown label in path spec {text!r}") from None
    z = PathWord(start, labels)
    return z.validate(A) if A is not None else z


def start_state(A: SafetyAutomaton, labels) -> str:
    return label_edges(A)[labels[0]][0]


def minimal_extremal_paths(A: SafetyAutomaton) -> tuple[set, set]:
    """(minimal paths, maximal paths): all infinite paths using only rank-0,
    resp. only rank-1, labels."""
    out = []
    for rank in (0, 1):
        sub = SafetyAutomaton(
            A.states, A.alphabet,
            frozenset(t for t in A.transitions if label_bit(t[1]) == rank), A.initial,
        )
        sub = trim(sub)
        paths = set()
        for q in sub.states:
            D = determinize(with_initial(sub, [q]))
            for w in _deterministic_paths(D) or ():
                paths.add(PathWord(q, w))
        out.append(paths)
    return out[0], out[1]


def reverse_path(A: SafetyAutomaton, w: Sequence, h) -> PathWord:
    """The unique path ending at ``h`` whose label bits are ``w`` (in path
    order), found by walking backwards."""
    B = diagram_from_path_automaton(A)
    decorate = any("_" in str(a) for a in A.alphabet)
    q = h
    labels = []
    for bit in reversed([int(b) for b in w]):
        src = B.incoming(q, bit)
        if src is None:
            raise ValueError(f"no rank-{bit} edge into {q!r}")
        labels.append(edge_label(q, bit, decorate))
        q = src
    return PathWord(q, tuple(reversed(labels)))


def vershik_successor(A: SafetyAutomaton, z: PathWord):
    """μ on a finite prefix: replace the first non-maximal edge by its
    successor and reset the edges below it to the minimal path.  Returns
    None when the whole prefix is maximal (the image is then not determined
    by the prefix).  Only rank-0/rank-1 diagrams are supported."""
    B = diagram_from_path_automaton(A)
    decorate = any("_" in str(a) for a in A.alphabet)
    eps = z.epsilons()
    try:
        n = eps.index(0)
    except ValueError:
        return None
    target = z.vertex(n + 1)
    u = B.incoming(target, 1)
    if u is None:
        raise ConstructionError(f"vertex {target!r} has no maximal incoming edge")
    labels = [edge_label(target, 1, decorate)]
    for _ in range(n):
        v = B.incoming(u, 0)
        labels.append(edge_label(u, 0, decorate))
        u = v
    labels.reverse()
    return PathWord(u, tuple(labels) + tuple(z.labels[n + 1:]))


# -- the adic transducer ----------------------------------------------------

def carry_name(j, k) -> str:
    return f"mu_{j}{k}"


def build_adic_transducer(B: BratteliDiagram, decorate: bool = True,
                          prune: bool = True) -> Transducer:
    """The transducer of the Vershik map.

    Identity states copy their input; a carry ``mu_jk`` (input at j, output
    at k) turns maximal input edges into minimal output edges and resolves on
    the first minimal input edge.  With ``prune`` (the default) carries that
    cannot reach an identity state are dropped before trimming: they only
    produce carry cycles unrelated to the successor of any path.
    """
    if B.max_rank > 1:
        raise ConstructionError("only diagrams with indegree ≤ 2 are supported")
    lab = lambda d, r: edge_label(d, r, decorate)
    out_edges = {v: [] for v in B.vertices}
    for s, d, r in B.sorted_edges():
        out_edges[s].append((d, r))
    trans = set()
    for v in B.vertices:
        for d, r in out_edges[v]:
            trans.add((v, (lab(d, r), lab(d, r)), d))
    carries = [carry_name(j, k) for j in B.vertices for k in B.vertices]
    for j in B.vertices:
        for k in B.vertices:
            c = carry_name(j, k)
            for l, r in out_edges[j]:
                if r == 1:
                    for k2, r2 in out_edges[k]:
                        if r2 == 0:
                            trans.add((c, (lab(l, 1), lab(k2, 0)), carry_name(l, k2)))
                elif B.incoming(l, 1) == k:
                    trans.add((c, (lab(l, 0), lab(l, 1)), l))
    states = tuple(B.vertices) + tuple(carries)
    A = build_path_automaton(B, decorate)
    U = SafetyAutomaton(states, pair_alphabet(A.alphabet, A.alphabet), frozenset(trans),
                        frozenset(carries))
    if prune:
        # carries with a path to an identity state
        good = set(B.vertices)
        changed = True
        while changed:
            changed = False
            for s, _, d in U.transitions:
                if d in good and s not in good:
                    good.add(s)
                    changed = True
        U = restrict(U, good)
    T = Transducer(trim(U), A.alphabet, A.alphabet)
    if not is_unambiguous(T):
        raise ConstructionError("adic transducer is ambiguous")
    return T


def raw_adic_transducer(B: BratteliDiagram, decorate: bool = True) -> Transducer:
    """All candidate carries, trimmed but not pruned (may be ambiguous)."""
    if B.max_rank > 1:
        raise ConstructionError("only diagrams with indegree ≤ 2 are supported")
    lab = lambda d, r: edge_label(d, r, decorate)
    trans = set()
    for s, d, r in B.edges:
        trans.add((s, (lab(d, r), lab(d, r)), d))
    for j in B.vertices:
        for k in B.vertices:
            for _, l, r in [e for e in B.edges if e[0] == j]:
                if r == 1:
                    for _, k2, r2 in [e for e in B.edges if e[0] == k]:
                        if r2 == 0:
                            trans.add((carry_name(j, k), (lab(l, 1), lab(k2, 0)), carry_name(l, k2)))
                elif B.incoming(l, 1) == k:
                    trans.add((carry_name(j, k), (lab(l, 0), lab(l, 1)), l))
    carries = [carry_name(j, k) for j in B.vertices for k in B.vertices]
    A = build_path_automaton(B, decorate)
    U = SafetyAutomaton(tuple(B.vertices) + tuple(carries), pair_alphabet(A.alphabet, A.alphabet),
                        frozenset(trans), frozenset(carries))
    return Transducer(trim(U), A.alphabet, A.alphabet)


def is_identity_state(name) -> bool:
    return not str(name).startswith("mu_")


def build_nucleus(mu: Transducer):
    """Candidate nucleus: μ and μ⁻¹ side by side, sharing the identity
    states, every state initial.  Carries are tagged ``f:`` / ``b:``."""
    from .transducers import Nucleus

    def tag(T, prefix):
        return {((q if is_identity_state(q) else prefix + q), sym,
                 (r if is_identity_state(r) else prefix + r))
                for q, sym, r in T.underlying.transitions}

    trans = tag(mu, "f:") | tag(invert(mu), "b:")
    states = tuple(dict.fromkeys(x for t in sorted(trans, key=repr) for x in (t[0], t[2])))
    U = SafetyAutomaton(states, mu.underlying.alphabet, frozenset(trans), frozenset(states))
    classes = {q: ("forward" if q.startswith("f:") else
                   "backward" if q.startswith("b:") else "identity") for q in states}
    return Nucleus(Transducer(U, mu.in_alphabet, mu.out_alphabet), classes, mu)


# -- ζ and the shift ---------------------------------------------------------

def build_zeta_transducer(A: SafetyAutomaton, initial_bits: Iterable[int] = (0,)) -> Transducer:
    """Delay transducer: state ``y_i`` stores the last letter; on an edge
    ``i → j`` labelled ``z_j`` it prints ``y_i`` and stores ``z_j``.

    With initial states ``0_i`` it prepends the minimal edge (this is ζ on
    paths); with ``1_i`` it prepends the maximal edge (σζ)."""
    edges = label_edges(A)
    letters = [a for a in A.alphabet if a in edges]  # unused letters carry no state
    trans = set()
    for y in letters:
        i = edges[y][1]  # the state y_i sits at i = target of label y
        for z, (src, _) in edges.items():
            if src == i:
                trans.add((y, (z, y), z))
    initial = {y for y in letters if label_bit(y) in set(initial_bits)}
    U = SafetyAutomaton(tuple(letters), pair_alphabet(A.alphabet, A.alphabet), frozenset(trans),
                        frozenset(initial))
    return Transducer(trim(U), A.alphabet, A.alphabet)


def build_shift_transducer(A: SafetyAutomaton) -> Transducer:
    """σ on paths (drop the first edge): the inverse of prepend-any-edge."""
    return invert(build_zeta_transducer(A, initial_bits=(0, 1)))


def check_baumslag_solitar(mu: Transducer, shift: Transducer) -> bool:
    """σ ∘ μ² = μ ∘ σ as relations."""
    from .safety_automata import language_equal

    left = compose(shift, compose(mu, mu))
    right = compose(mu, shift)
    return language_equal(left.underlying, right.underlying)


# -- λ -------------------------------------------------------------------------

def _bits_of(name: str) -> str:
    return collar_letter_bits(name)


def lambda_decode(z: PathWord, with_collar: bool = False, sub: Substitution = THUE_MORSE) -> WordWindow:
    """The window ζⁿ(z_n) placed at −Σ ε_i 2^i (n = len(z)).

    With ``with_collar`` the whole collared letter ˣyᶻ of z_n is expanded,
    i.e. ζⁿ(xyz) placed at −Σ ε_i 2^i − 2ⁿ: this is what determines z back.
    """
    n = len(z)
    offset = -sum(e << i for i, e in enumerate(z.epsilons()))
    bits = _bits_of(z.end())
    if with_collar:
        return WordWindow(iterate(sub, bits, n), offset - (1 << n))
    return WordWindow(iterate(sub, bits[1], n), offset)


def lambda_encode(w: WordWindow, n: int, A: SafetyAutomaton | None = None) -> PathWord:
    """Desubstitute ``w`` n times, reading off the collared letter at the
    origin and the block position of the origin at each level."""
    names = TM_COLLAR_NAMES
    cur = w
    verts, eps = [], []
    for k in range(n + 1):
        if not (cur.start <= -1 and cur.end >= 2):
            raise IndeterminateError(f"level-{k} window {cur} does not cover positions -1..1")
        block = cur.slice(-1, 2).letters
        if block not in names:
            raise ValueError(f"illegal block {block!r} at level {k}")
        verts.append(names[block])
        if k == n:
            break
        q, coarse = desubstitute(cur)
        # the origin lies in the block starting at -q, which becomes position -q
        eps.append(q)
        cur = WordWindow(coarse.letters, coarse.offset + q)
    labels = tuple(edge_label(verts[i + 1], eps[i]) for i in range(n))
    p = PathWord(verts[0], labels)
    if A is not None:
        p.validate(A)
    return p
