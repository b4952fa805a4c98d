"""Adjacency matrix, Smith normal form (checked against sympy and the
determinantal divisors), and the dimension-group report."""

import pytest
from hypothesis import given, settings, strategies as st

from adicamata import dimension_group as dg
from adicamata import reference

sympy = pytest.importorskip("sympy")


@pytest.fixture(scope="module")
def M(A):
    return dg.adjacency_matrix(A)


def matrices(n_max=4, lo=-6, hi=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=n, max_size=n)).map(lambda r: dg.IntMatrix(tuple(map(tuple, r))))


def test_adjacency_structure(M):
    assert M.row_sums() == [2] * 6 and M.col_sums() == [2] * 6
    assert sum(M.row_sums()) == 12
    assert M["a", "c"] == 1 and M["a", "d"] == 0
    assert M.tolist() == [[0, 1, 1, 0, 0, 0], [1, 0, 1, 0, 0, 0], [0, 1, 0, 0, 0, 1],
                          [1, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 1], [0, 0, 0, 1, 1, 0]]


def test_adjacency_independent_of_construction(M):
    assert M == dg.adjacency_matrix(reference.path_automaton())


def test_rank_det(M):
    assert dg.rank(M) == 5 and dg.determinant(M) == 0
    S = sympy.Matrix(M.tolist())
    assert S.rank() == 5 and S.det() == 0


def test_eigenvalues(M):
    ev = sympy.Matrix(M.tolist()).eigenvals()
    assert ev == {2: 1, 1: 1, -1: 3, 0: 1}


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_snf_certificate(X):
    U, S, V = dg.smith_normal_form(X)
    assert U @ X @ V == S
    assert abs(dg.determinant(U)) == 1 and abs(dg.determinant(V)) == 1
    d = [S.rows[i][i] for i in range(X.n)]
    assert all(S.rows[i][j] == 0 for i in range(X.n) for j in range(X.n) if i != j)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_vs_oracles(X):
    ours = dg.invariant_factors(X)
    assert ours == dg.determinantal_divisors(X)
    from sympy.matrices.normalforms import smith_normal_form
    S = smith_normal_form(sympy.Matrix(X.tolist()), domain=sympy.ZZ)
    assert ours == tuple(abs(int(S[i, i])) for i in range(X.n))


@settings(max_examples=60, deadline=None)
@given(matrices(), matrices())
def test_matmul_vs_sympy(X, Y):
    if X.n != Y.n:
        with pytest.raises(ValueError):
            X @ Y
        return
    assert (X @ Y).tolist() == (sympy.Matrix(X.tolist()) * sympy.Matrix(Y.tolist())).tolist()


def test_identity_snf():
    assert dg.invariant_factors(dg.IntMatrix.identity(5)) == (1,) * 5


def test_powers(M):
    for k in range(1, 6):
        assert dg.invariant_factors(M ** k) == (1, 1, 1, 1, 2 ** (k - 1), 0)
    assert M ** 0 == dg.IntMatrix(dg.IntMatrix.identity(6).rows, M.labels)


def test_report(M):
    rep = dg.dimension_group_report(M)
    assert rep["verdict"] == "consistent with ℤ⁴×ℤ[1/2]"
    assert rep["rank_sequence"] == [5] * 6
    assert rep["two_adic_valuation_sequence"] == list(range(6))
    assert rep["transpose"]["rank_sequence"] == [5] * 6
    assert rep["positive_cone"] == dg.POSITIVE_CONE_NOTE
    assert rep["stable_rank"] == 5


def test_report_scalar():
    rep = dg.dimension_group_report(dg.IntMatrix(((2,),)))
    assert rep["verdict"] == "consistent with ℤ[1/2]" and rep["positive_cone"] is None


def test_report_inconclusive():
    # odd growth: ℤ[1/3]
    assert dg.dimension_group_report(dg.IntMatrix(((3,),)))["verdict"] == "inconclusive"
    # no growth at all
    assert dg.dimension_group_report(dg.IntMatrix.identity(3))["verdict"] == "inconclusive"


def test_bad_input():
    with pytest.raises(TypeError):
        dg.IntMatrix(((1.5, 0), (0, 1)))
    with pytest.raises(ValueError):
        dg.IntMatrix(((1, 0),))
    with pytest.raises(ValueError):
        dg.dimension_group_report(dg.IntMatrix(((2,),)), iterations=1)
    with pytest.raises(ValueError):
        dg.IntMatrix(((2,),)) ** -1
