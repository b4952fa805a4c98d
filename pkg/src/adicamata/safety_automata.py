"""Safety ω-automata: all states final, a word is accepted iff it labels an
infinite run from an initial state.

Automata are immutable.  Every operation returns a new automaton whose state
order is deterministic (breadth-first discovery order), so serialized output
is stable across runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence


class AlphabetError(ValueError):
    """Raised when a word or automaton uses symbols outside an alphabet."""


def display(x) -> str:
    """Human-readable name for a state or symbol (tuples are flattened)."""
    if isinstance(x, str):
        return x
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(display(y) for y in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(display(y) for y in x) + ")"
    return str(x)


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    """The ω-word ``prefix · cycle^ω`` in canonical form.

    The cycle is primitive and the prefix is as short as possible, so two
    instances compare equal iff they denote the same infinite word.
    """

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        prefix, cycle = tuple(self.prefix), tuple(self.cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        cycle = _primitive_root(cycle)
        while prefix and prefix[-1] == cycle[-1]:
            prefix = prefix[:-1]
            cycle = cycle[-1:] + cycle[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def parse(cls, text: str, tokens: Callable[[str], list] | None = None):
        """Parse ``"prefix(cycle)"``; e.g. ``"110(0)"`` is the integer 3."""
        text = text.strip()
        if not text.endswith(")") or "(" not in text:
            raise ValueError(f"expected 'prefix(cycle)', got {text!r}")
        head, _, tail = text[:-1].partition("(")
        split = tokens or list
        return cls(tuple(split(head)), tuple(split(tail)))

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def take(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def drop(self, k: int) -> "UltimatelyPeriodicWord":
        """The shifted word σ^k(self)."""
        if k <= len(self.prefix):
            return UltimatelyPeriodicWord(self.prefix[k:], self.cycle)
        r = (k - len(self.prefix)) % len(self.cycle)
        return UltimatelyPeriodicWord((), self.cycle[r:] + self.cycle[:r])

    def prepend(self, letters: Sequence) -> "UltimatelyPeriodicWord":
        return UltimatelyPeriodicWord(tuple(letters) + self.prefix, self.cycle)

    def map(self, f: Callable) -> "UltimatelyPeriodicWord":
        return UltimatelyPeriodicWord(
            tuple(f(a) for a in self.prefix), tuple(f(a) for a in self.cycle)
        )

    def letters(self) -> set:
        return set(self.prefix) | set(self.cycle)

    @property
    def period_start(self) -> int:
        return len(self.prefix)

    def __len__(self):
        raise TypeError("ω-words have no length; use period_start/cycle")

    def __str__(self):
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.cycle)) + ")"


def omega(prefix: Iterable = (), cycle: Iterable = ("0",)) -> UltimatelyPeriodicWord:
    """Shorthand constructor; strings are split into characters."""
    return UltimatelyPeriodicWord(tuple(prefix), tuple(cycle))


@dataclass(frozen=True, eq=False)
class SafetyAutomaton:
    """Finite labeled digraph with initial states; every state is final."""

    states: tuple
    alphabet: tuple
    transitions: frozenset
    initial: frozenset

    def __post_init__(self):
        states = tuple(dict.fromkeys(self.states))
        alphabet = tuple(dict.fromkeys(self.alphabet))
        transitions = frozenset(tuple(t) for t in self.transitions)
        initial = frozenset(self.initial)
        known, symbols = set(states), set(alphabet)
        for src, sym, dst in transitions:
            if src not in known or dst not in known:
                raise ValueError(f"transition {(src, sym, dst)!r} uses an unknown state")
            if sym not in symbols:
                raise AlphabetError(f"symbol {sym!r} not in alphabet")
        if not initial <= known:
            raise ValueError("initial states must be states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "initial", initial)

    @cached_property
    def index(self) -> dict:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def _sym_order(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def successors(self) -> dict:
        """state -> list of (symbol, target), in a deterministic order."""
        out = {q: [] for q in self.states}
        idx, sym = self.index, self._sym_order
        for src, a, dst in sorted(
            self.transitions, key=lambda t: (idx[t[0]], sym[t[1]], idx[t[2]])
        ):
            out[src].append((a, dst))
        return out

    @cached_property
    def predecessors(self) -> dict:
        inc = {q: [] for q in self.states}
        for q, succ in self.successors.items():
            for a, r in succ:
                inc[r].append((a, q))
        return inc

    @cached_property
    def delta(self) -> dict:
        """(state, symbol) -> tuple of targets."""
        d: dict = {}
        for q, succ in self.successors.items():
            for a, r in succ:
                d.setdefault((q, a), []).append(r)
        return {k: tuple(v) for k, v in d.items()}

    def ordered_initial(self) -> list:
        return [q for q in self.states if q in self.initial]

    @property
    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(v) == 1 for v in self.delta.values())

    def __repr__(self):
        return (
            f"SafetyAutomaton({len(self.states)} states, "
            f"{len(self.transitions)} transitions, {len(self.initial)} initial)"
        )


def from_edges(edges: Iterable, initial: Iterable | None = None, alphabet=None,
               states=None) -> SafetyAutomaton:
    """Build an automaton from ``(src, symbol, dst)`` triples.

    States and alphabet default to their order of first appearance; all
    states are initial unless ``initial`` is given.
    """
    edges = [tuple(e) for e in edges]
    if states is None:
        states = []
        for s, _, d in edges:
            states += [s, d]
        if initial is not None:
            states += list(initial)
    if alphabet is None:
        alphabet = [a for _, a, _ in edges]
    states = tuple(dict.fromkeys(states))
    return SafetyAutomaton(
        states, tuple(dict.fromkeys(alphabet)), frozenset(edges),
        frozenset(states if initial is None else initial),
    )


def empty_automaton(alphabet: Iterable = ()) -> SafetyAutomaton:
    return SafetyAutomaton((), tuple(alphabet), frozenset(), frozenset())


def full_automaton(alphabet: Iterable) -> SafetyAutomaton:
    """One state with a self-loop on every symbol: recognizes Σ^ω."""
    alphabet = tuple(alphabet)
    return SafetyAutomaton(("*",), alphabet, frozenset(("*", a, "*") for a in alphabet),
                           frozenset({"*"}))


def restrict(A: SafetyAutomaton, keep: Iterable, initial: Iterable | None = None) -> SafetyAutomaton:
    """Induced sub-automaton on ``keep`` (state order preserved)."""
    keep = set(keep)
    states = tuple(q for q in A.states if q in keep)
    trans = frozenset(t for t in A.transitions if t[0] in keep and t[2] in keep)
    init = (A.initial if initial is None else frozenset(initial)) & keep
    return SafetyAutomaton(states, A.alphabet, trans, init)


def with_initial(A: SafetyAutomaton, initial: Iterable) -> SafetyAutomaton:
    return SafetyAutomaton(A.states, A.alphabet, A.transitions, frozenset(initial))


def relabel(A: SafetyAutomaton, f: Callable, alphabet: Iterable | None = None) -> SafetyAutomaton:
    """Apply ``f`` to every transition symbol."""
    if alphabet is None:
        alphabet = dict.fromkeys(f(a) for a in A.alphabet)
    trans = frozenset((s, f(a), d) for s, a, d in A.transitions)
    return SafetyAutomaton(A.states, tuple(alphabet), trans, A.initial)


def remove_transition(A: SafetyAutomaton, edge: tuple) -> SafetyAutomaton:
    edge = tuple(edge)
    if edge not in A.transitions:
        raise ValueError(f"no transition {edge!r}")
    return SafetyAutomaton(A.states, A.alphabet, A.transitions - {edge}, A.initial)


# -- graph helpers -----------------------------------------------------------

def _reachable(starts: Iterable, succ: Callable) -> list:
    seen = dict.fromkeys(starts)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for r in succ(q):
            if r not in seen:
                seen[r] = None
                queue.append(r)
    return list(seen)


def _live(nodes: Iterable, succ: Callable) -> set:
    """Nodes from which an infinite path exists (within ``nodes``)."""
    nodes = set(nodes)
    out = {q: [r for r in succ(q) if r in nodes] for q in nodes}
    inc: dict = {q: [] for q in nodes}
    for q, rs in out.items():
        for r in rs:
            inc[r].append(q)
    degree = {q: len(rs) for q, rs in out.items()}
    queue = deque(q for q, d in degree.items() if d == 0)
    dead = set()
    while queue:
        q = queue.popleft()
        if q in dead:
            continue
        dead.add(q)
        for p in inc[q]:
            degree[p] -= 1
            if degree[p] == 0:
                queue.append(p)
    return nodes - dead


def strongly_connected_components(nodes: Sequence, succ: Callable) -> list[list]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


# -- core operations ---------------------------------------------------------

def trim(A: SafetyAutomaton) -> SafetyAutomaton:
    """Drop states unreachable from an initial state or with no infinite run."""
    succ = A.successors
    reach = _reachable(A.ordered_initial(), lambda q: (r for _, r in succ[q]))
    live = _live(reach, lambda q: (r for _, r in succ[q]))
    return restrict(A, live)


def is_empty(A: SafetyAutomaton) -> bool:
    return not trim(A).states


def _check_word(A: SafetyAutomaton, w: UltimatelyPeriodicWord):
    extra = w.letters() - set(A.alphabet)
    if extra:
        raise AlphabetError(f"symbols {sorted(map(str, extra))} not in the automaton's alphabet")


def _positions(w: UltimatelyPeriodicWord):
    total = len(w.prefix) + len(w.cycle)
    return total, (lambda i: i + 1 if i + 1 < total else len(w.prefix))


def accepts(A: SafetyAutomaton, w: UltimatelyPeriodicWord) -> bool:
    """Whether an infinite run over ``w`` exists (lasso search on the product
    of ``A`` with the positions of ``w``)."""
    _check_word(A, w)
    total, nxt = _positions(w)
    delta = A.delta

    def succ(node):
        q, i = node
        return ((r, nxt(i)) for r in delta.get((q, w[i]), ()))

    reach = _reachable(((q, 0) for q in A.ordered_initial()), succ)
    return bool(_live(reach, succ))


def product(A: SafetyAutomaton, B: SafetyAutomaton) -> SafetyAutomaton:
    """Synchronous product: recognizes L(A) ∩ L(B)."""
    if set(A.alphabet) != set(B.alphabet):
        raise AlphabetError("product needs equal alphabets")
    start = [(p, q) for p in A.ordered_initial() for q in B.ordered_initial()]
    trans = []

    def succ(node):
        p, q = node
        for a, p2 in A.successors[p]:
            for q2 in B.delta.get((q, a), ()):
                trans.append((node, a, (p2, q2)))
                yield (p2, q2)

    states = _reachable(start, succ)
    return trim(SafetyAutomaton(tuple(states), A.alphabet, frozenset(trans), frozenset(start)))


def union(A: SafetyAutomaton, B: SafetyAutomaton) -> SafetyAutomaton:
    """Disjoint union (states tagged 0/1): recognizes L(A) ∪ L(B)."""
    states = tuple((0, q) for q in A.states) + tuple((1, q) for q in B.states)
    trans = {((0, s), a, (0, d)) for s, a, d in A.transitions}
    trans |= {((1, s), a, (1, d)) for s, a, d in B.transitions}
    init = {(0, q) for q in A.initial} | {(1, q) for q in B.initial}
    alphabet = tuple(dict.fromkeys(A.alphabet + B.alphabet))
    return SafetyAutomaton(states, alphabet, frozenset(trans), frozenset(init))


def determinize(A: SafetyAutomaton) -> SafetyAutomaton:
    """Subset construction on the trimmed automaton.

    Sound for safety languages: a word is accepted iff every finite prefix can
    be read, so the nonempty subsets are exactly the live configurations.
    """
    A = trim(A)
    if not A.states:
        return empty_automaton(A.alphabet)
    start = frozenset(A.initial)
    order = A._sym_order
    trans = []

    def succ(S):
        moves: dict = {}
        for q in S:
            for a, r in A.successors[q]:
                moves.setdefault(a, set()).add(r)
        for a in sorted(moves, key=order.__getitem__):
            T = frozenset(moves[a])
            trans.append((S, a, T))
            yield T

    states = _reachable([start], succ)
    return SafetyAutomaton(tuple(states), A.alphabet, frozenset(trans), frozenset([start]))


def minimize(A: SafetyAutomaton) -> SafetyAutomaton:
    """Coarsest bisimulation quotient of ``determinize(A)``; states are ints
    numbered in breadth-first order from the initial state."""
    D = determinize(A)
    if not D.states:
        return D
    block = {q: 0 for q in D.states}
    while True:
        sigs: dict = {}
        new = {}
        for q in D.states:
            sig = (block[q], tuple((a, block[r]) for a, r in D.successors[q]))
            new[q] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(set(block.values())):
            break
        block = new
    (init,) = D.initial
    order: dict = {}
    queue = deque([block[init]])
    order[block[init]] = 0
    rep = {}
    for q in D.states:
        rep.setdefault(block[q], q)
    trans = set()
    while queue:
        b = queue.popleft()
        for a, r in D.successors[rep[b]]:
            if block[r] not in order:
                order[block[r]] = len(order)
                queue.append(block[r])
            trans.add((order[b], a, order[block[r]]))
    return SafetyAutomaton(tuple(range(len(order))), D.alphabet, frozenset(trans), frozenset([0]))


def canonical_form(A: SafetyAutomaton) -> tuple:
    """A hashable invariant with ``canonical_form(A) == canonical_form(B)``
    iff ``L(A) == L(B)`` (for automata over the same alphabet)."""
    M = minimize(A)
    return tuple(sorted(M.transitions, key=lambda t: (t[0], repr(t[1]), t[2])))


def language_equal(A: SafetyAutomaton, B: SafetyAutomaton) -> bool:
    if set(A.alphabet) != set(B.alphabet):
        raise AlphabetError("language_equal needs equal alphabets")
    return canonical_form(A) == canonical_form(B)


def language_included(A: SafetyAutomaton, B: SafetyAutomaton) -> bool:
    """L(A) ⊆ L(B), via L(A ∩ B) = L(A)."""
    return language_equal(product(A, B), A)


def is_strongly_connected(A: SafetyAutomaton) -> bool:
    if not A.states:
        return False
    succ = A.successors
    comps = strongly_connected_components(A.states, lambda q: [r for _, r in succ[q]])
    return len(comps) == 1 and bool(A.transitions)


def brute_force_accepts(A: SafetyAutomaton, w: UltimatelyPeriodicWord) -> bool:
    """Independent acceptance oracle: track the set of reachable states and
    stop when (set, position) repeats.  By König's lemma a finitely branching
    automaton accepts iff every finite prefix can be read."""
    _check_word(A, w)
    total, nxt = _positions(w)
    S = frozenset(A.initial)
    i = 0
    seen = set()
    while (S, i) not in seen:
        if not S:
            return False
        seen.add((S, i))
        S = frozenset(r for q in S for r in A.delta.get((q, w[i]), ()))
        i = nxt(i)
    return bool(S)
