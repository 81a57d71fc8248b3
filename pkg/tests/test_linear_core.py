import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isocap import (SingularMatrixError, SymMatrix, WeightedGraph,
                    mass_vector, schur_complement, solve_spd,
                    stiffness_matrix, sym_eig_generalized)
from isocap.infinite_families import path_graph
from isocap.linear_core import jacobi_eigenvalues, jacobi_generalized_eigenvalues

TOL = 1e-12


def test_stiffness_quadratic_form_is_energy():
    g = WeightedGraph("abc", {v: 2.0 for v in "abc"},
                      [("a", "b", 3.0), ("b", "c", 5.0)])
    K = stiffness_matrix(g)
    x = np.array([1.0, 4.0, 6.0])
    # energy = 3*(4-1)^2 + 5*(6-4)^2
    assert x @ K.a @ x == pytest.approx(3 * 9 + 5 * 4, rel=TOL)
    assert mass_vector(g).tolist() == [2.0, 2.0, 2.0]


def test_stiffness_respects_order():
    g = path_graph(2)
    K = stiffness_matrix(g, order=(2, 0, 1))
    expect = np.array([[1.0, 0.0, -1.0], [0.0, 1.0, -1.0], [-1.0, -1.0, 2.0]])
    assert np.allclose(K.a, expect)


def test_path_dirichlet_eigenvalues_closed_form():
    # unit path 0..n, interior Dirichlet spectrum: 2 - 2 cos(j pi / n)
    for n in (2, 3, 5, 8):
        g = path_graph(n)
        order = tuple(range(1, n)) + (0, n)
        full = stiffness_matrix(g, order=order).a
        K = SymMatrix(full[: n - 1, : n - 1])
        res = sym_eig_generalized(K, np.ones(n - 1), vertex_order=order[: n - 1])
        expect = [2 - 2 * math.cos(j * math.pi / n) for j in range(1, n)]
        assert np.allclose(res.eigenvalues, expect, atol=1e-12)
        assert res.residual_norm <= 1e-12


def test_eigenvectors_m_orthonormal_and_deterministic():
    g = path_graph(5)
    K = stiffness_matrix(g)
    m = mass_vector(g) * 2.0
    res = sym_eig_generalized(K, m, vertex_order=g.vertices)
    gram = res.vectors.T @ np.diag(m) @ res.vectors
    assert np.allclose(gram, np.eye(6), atol=1e-10)
    again = sym_eig_generalized(K, m, vertex_order=g.vertices)
    assert np.array_equal(res.vectors, again.vectors)
    f0 = res.eigenfunction(0)
    assert set(f0) == set(g.vertices)


def test_trace_identity():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(7, 7))
    K = SymMatrix((a + a.T) / 2 + 7 * np.eye(7))
    m = np.exp(rng.normal(size=7))
    res = sym_eig_generalized(K, m)
    # sum of generalized eigenvalues = trace of M^{-1} K
    assert res.eigenvalues.sum() == pytest.approx(np.trace(K.a / m[:, None]), rel=1e-10)


def test_solve_spd_and_singular_rejection():
    a = np.array([[4.0, 1.0], [1.0, 3.0]])
    b = np.array([1.0, 2.0])
    x = solve_spd(SymMatrix(a), b)
    assert np.allclose(a @ x, b, atol=1e-13)
    with pytest.raises(SingularMatrixError):
        solve_spd(SymMatrix(np.array([[1.0, 2.0], [2.0, 1.0]])), b)  # indefinite


def test_schur_complement_energy_minimization():
    # eliminating the middle of a path composes series conductances
    g = path_graph(2)
    K = stiffness_matrix(g)  # order 0,1,2
    S = schur_complement(K, eliminate=[1])
    assert np.allclose(S.a, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-14)


def test_schur_complement_matches_block_formula():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(6, 6))
    spd = a @ a.T + 6 * np.eye(6)
    S = schur_complement(SymMatrix(spd), eliminate=[0, 2, 4])
    keep = [1, 3, 5]
    el = [0, 2, 4]
    expect = spd[np.ix_(keep, keep)] - spd[np.ix_(keep, el)] @ np.linalg.solve(
        spd[np.ix_(el, el)], spd[np.ix_(el, keep)])
    assert np.allclose(S.a, expect, atol=1e-11)


def test_jacobi_matches_eigh():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(6, 6))
    sym = (a + a.T) / 2
    assert np.allclose(jacobi_eigenvalues(sym), np.linalg.eigvalsh(sym), atol=1e-10)


def test_jacobi_generalized_oracle():
    g = path_graph(4)
    K = stiffness_matrix(g)
    m = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    res = sym_eig_generalized(K, m)
    other = jacobi_generalized_eigenvalues(K, m)
    assert np.allclose(res.eigenvalues, other, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=7),
       st.integers(min_value=0, max_value=10 ** 6))
def test_courant_fischer_bottom(masses, salt):
    """lambda_0 = min Rayleigh quotient; any vector gives an upper bound."""
    n = len(masses)
    rng = np.random.default_rng(salt)
    a = rng.normal(size=(n, n))
    K = SymMatrix(a @ a.T + n * np.eye(n))
    m = np.array(masses)
    res = sym_eig_generalized(K, m)
    probe = rng.normal(size=n)
    rayleigh = probe @ K.a @ probe / (probe @ (m * probe))
    assert res.eigenvalues[0] <= rayleigh + 1e-9 * max(1.0, abs(rayleigh))
    assert res.eigenvalues[-1] >= rayleigh - 1e-9 * max(1.0, abs(rayleigh))
