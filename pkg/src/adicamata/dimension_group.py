"""Integer-matrix invariants of the path automaton: adjacency matrix, Smith
normal form, and the rank / invariant-factor data of its powers.

All arithmetic is on Python ints; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .safety_automata import SafetyAutomaton

POSITIVE_CONE_NOTE = "K₀⁺ = {0} ∪ (ℤ⁴ × ℤ₊[1/2])"

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix with optional row/column labels."""

    rows: tuple
    labels: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        for r in self.rows:
            for x in r:
                if isinstance(x, float) or int(x) != x:
                    raise TypeError("entries must be integers")
        labels = tuple(self.labels) or tuple(range(n))
        if len(labels) != n:
            raise ValueError("one label per row")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        if not isinstance(i, int):
            i = self.labels.index(i)
        if not isinstance(j, int):
            j = self.labels.index(j)
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.n != other.n:
            raise ValueError("size mismatch")
        cols = list(zip(*other.rows))
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.rows), self.labels)

    def __pow__(self, k: int) -> "IntMatrix":
        if k < 0:
            raise ValueError("negative powers are not integer matrices in general")
        out, base = IntMatrix.identity(self.n), self
        out = IntMatrix(out.rows, self.labels)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)), self.labels)

    def row_sums(self) -> list:
        return [sum(r) for r in self.rows]

    def col_sums(self) -> list:
        return [sum(c) for c in zip(*self.rows)]

    def tolist(self) -> list:
        return [list(r) for r in self.rows]


def adjacency_matrix(A: SafetyAutomaton) -> IntMatrix:
    """Entry (i, j) counts transitions i → j (states in automaton order)."""
    idx = {q: k for k, q in enumerate(A.states)}
    rows = [[0] * len(A.states) for _ in A.states]
    for s, _, d in A.transitions:
        rows[idx[s]][idx[d]] += 1
    return IntMatrix(tuple(map(tuple, rows)), tuple(A.states))


# -- exact elimination ---------------------------------------------------------

def _bareiss(rows: Sequence[Sequence[int]]):
    """Fraction-free elimination; returns (rank, determinant-if-square)."""
    M = [list(r) for r in rows]
    m = len(M)
    n = len(M[0]) if M else 0
    prev, rank, sign = 1, 0, 1
    for c in range(n):
        p = next((r for r in range(rank, m) if M[r][c]), None)
        if p is None:
            continue
        if p != rank:
            M[p], M[rank] = M[rank], M[p]
            sign = -sign
        for r in range(rank + 1, m):
            for k in range(c + 1, n):
                M[r][k] = (M[r][k] * M[rank][c] - M[r][c] * M[rank][k]) // prev
            M[r][c] = 0
        prev = M[rank][c]
        rank += 1
    det = 0
    if m == n and rank == n:
        det = sign * M[n - 1][n - 1] if n else 1
    return rank, det


def rank(M: IntMatrix) -> int:
    return _bareiss(M.rows)[0]


def determinant(M: IntMatrix) -> int:
    return _bareiss(M.rows)[1]


def smith_normal_form(M: IntMatrix):
    """(U, S, V) with U·M·V = S diagonal, U and V unimodular, and each
    diagonal entry dividing the next (nonnegative, zeros last)."""
    n = M.n
    S = [list(r) for r in M.rows]
    U = [list(r) for r in IntMatrix.identity(n).rows]
    V = [list(r) for r in IntMatrix.identity(n).rows]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (S, V):
            for r in R:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        for R in (S, U):
            R[dst] = [a + k * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, k):
        for R in (S, V):
            for r in R:
                r[dst] += k * r[src]

    for t in range(n):
        # smallest nonzero entry of the remaining block as pivot
        nz = [(abs(S[i][j]), i, j) for i in range(t, n) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, n):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    wrap = lambda R: IntMatrix(tuple(map(tuple, R)))
    return wrap(U), wrap(S), wrap(V)


def invariant_factors(M: IntMatrix) -> tuple:
    _, S, _ = smith_normal_form(M)
    return tuple(S.rows[i][i] for i in range(M.n))


def determinantal_divisors(M: IntMatrix) -> tuple:
    """Invariant factors the slow way: d_k = gcd of all k×k minors, each
    minor by fraction-free elimination; s_k = d_k / d_(k-1).  Independent of
    :func:`smith_normal_form`, used to cross-check it."""
    from itertools import combinations
    from math import gcd

    n = M.n
    d = [1]
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                g = gcd(g, _bareiss([[M.rows[i][j] for j in cols] for i in rows])[1])
                if g == 1:
                    break
            if g == 1:
                break
        d.append(g)
    out = []
    for k in range(1, n + 1):
        out.append(d[k] // d[k - 1] if d[k - 1] else 0)
    return tuple(out)


# -- the report --------------------------------------------------------------------

def _two_part(x: int) -> int:
    k = 0
    while x and x % 2 == 0:
        x //= 2
        k += 1
    return k


def _odd_part_product(factors) -> int:
    p = 1
    for x in factors:
        if x:
            p *= x >> _two_part(x)
    return p


def _group_name(free_rank: int) -> str:
    if free_rank == 0:
        return "ℤ[1/2]"
    sup = "" if free_rank == 1 else str(free_rank).translate(_SUPERSCRIPTS)
    return f"ℤ{sup}×ℤ[1/2]"


def dimension_group_report(M: IntMatrix, iterations: int = 6) -> dict:
    """Ranks and invariant factors of M, M², …, M^iterations, for M and its
    transpose.  The verdict is only ever "consistent with" a group: the data
    are necessary conditions, not a computation of the direct limit."""
    if iterations < 2:
        raise ValueError("iterations must be at least 2")
    out = {}
    for name, base in (("M", M), ("M^T", M.T)):
        ranks, factors = [], []
        P = base
        for k in range(1, iterations + 1):
            if k > 1:
                P = P @ base
            ranks.append(rank(P))
            factors.append(list(invariant_factors(P)))
        out[name] = {"rank_sequence": ranks, "invariant_factors_sequence": factors}
    ranks = out["M"]["rank_sequence"]
    stable = ranks[-1]
    stabilized = ranks[-2] == ranks[-1]
    seq = out["M"]["invariant_factors_sequence"]
    twos = [sum(_two_part(x) for x in f if x) for f in seq]
    odd = [_odd_part_product(f) for f in seq]
    # the last steps must each add exactly one factor 2 and no odd torsion
    tail = range(max(0, len(twos) - 3), len(twos) - 1)
    grows = all(twos[k + 1] - twos[k] == 1 for k in tail)
    odd_stable = all(odd[k + 1] == odd[k] for k in tail)
    if stabilized and grows and stable >= 1 and odd_stable:
        verdict = f"consistent with {_group_name(stable - 1)}"
    else:
        verdict = "inconclusive"
    return {
        "matrix": M.tolist(),
        "labels": [str(x) for x in M.labels],
        "iterations": iterations,
        "rank_sequence": ranks,
        "invariant_factors_sequence": out["M"]["invariant_factors_sequence"],
        "two_adic_valuation_sequence": twos,
        "transpose": out["M^T"],
        "stable_rank": stable,
        "verdict": verdict,
        "positive_cone": POSITIVE_CONE_NOTE if verdict == "consistent with ℤ⁴×ℤ[1/2]" else None,
    }
