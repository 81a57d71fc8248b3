"""Dense symmetric kernels: SPD solves, generalized eigenproblems, Schur complements.

Everything is dense double precision with direct methods; instances are
desk-scale (at most a few thousand vertices).  The generalized problem
K v = lambda M v with diagonal positive M is reduced to standard form by the
M^{-1/2} scaling.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InputError, SingularMatrixError


class SymMatrix:
    """Dense symmetric matrix; symmetry is exact by construction (the lower
    triangle is mirrored from the upper on build)."""

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError("SymMatrix needs a square array")
        upper = np.triu(a)
        self.a = upper + np.triu(a, 1).T
        self.a.setflags(write=False)
        self.dim = a.shape[0]

    def __repr__(self):
        return "SymMatrix(dim=%d)" % self.dim


def stiffness_matrix(graph, order=None):
    """Stiffness K of a graph: K_xy = -w(x,y), K_xx = sum_y w(x,y).

    This is the matrix of m * L; quadratic form f^T K f equals the energy.
    `order` defaults to graph.vertices.
    """
    order = tuple(order) if order is not None else graph.vertices
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    k = np.zeros((n, n))
    for u, v, w in graph.edges:
        i, j = idx[u], idx[v]
        k[i, j] -= w
        k[j, i] -= w
        k[i, i] += w
        k[j, j] += w
    return SymMatrix(k)


def mass_vector(graph, order=None):
    order = tuple(order) if order is not None else graph.vertices
    return np.array([graph.mass[v] for v in order])


@dataclass
class SpectralResult:
    """Ascending eigenvalues of K v = lambda M v with M-orthonormal vectors.

    vectors holds the problem-space eigenvectors as columns, aligned with
    vertex_order; fields (when set) are the eigenfunctions extended to their
    natural support (e.g. harmonic extensions), one dict per eigenvalue.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    mass: np.ndarray
    residual_norm: float
    vertex_order: tuple = None
    fields: list = field(default_factory=list)

    def eigenfunction(self, j):
        if self.fields:
            return dict(self.fields[j])
        return {v: self.vectors[i, j] for i, v in enumerate(self.vertex_order)}


def _fix_signs(vectors):
    # deterministic orientation: first coordinate that is clearly nonzero is positive
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        big = np.abs(col) > 1e-12 * max(np.abs(col).max(), 1e-300)
        if big.any():
            lead = col[np.argmax(big)]
            if lead < 0:
                vectors[:, j] = -col
    return vectors


def _residual(k, m, eigenvalues, vectors):
    if len(eigenvalues) == 0:
        return 0.0
    kn = np.linalg.norm(k, "fro")
    worst = 0.0
    for j, lam in enumerate(eigenvalues):
        v = vectors[:, j]
        mv = m * v
        num = np.linalg.norm(k @ v - lam * mv)
        den = kn * np.linalg.norm(v) + abs(lam) * np.linalg.norm(mv)
        if den == 0.0:
            continue
        worst = max(worst, num / den)
    return worst


def sym_eig_generalized(K, mass, vertex_order=None):
    """All eigenpairs of K v = lambda M v, M = diag(mass) > 0, ascending.

    Vectors are M-orthonormal with a deterministic sign; residual_norm is the
    worst scaled eigen-residual over the returned pairs.
    """
    k = K.a
    m = np.asarray(mass, dtype=float)
    if not np.all(np.isfinite(k)) or not np.all(np.isfinite(m)):
        raise InputError("non-finite entries in eigenproblem")
    if np.any(m <= 0):
        raise InputError("mass matrix must be strictly positive")
    d = 1.0 / np.sqrt(m)
    s = d[:, None] * k * d[None, :]
    s = 0.5 * (s + s.T)
    w, u = np.linalg.eigh(s)
    vectors = _fix_signs(d[:, None] * u)
    return SpectralResult(
        eigenvalues=w,
        vectors=vectors,
        mass=m,
        residual_norm=_residual(k, m, w, vectors),
        vertex_order=tuple(vertex_order) if vertex_order is not None else None,
    )


def solve_spd(K, b):
    """Solve K x = b for symmetric positive definite K by Cholesky."""
    a = K.a if isinstance(K, SymMatrix) else np.asarray(K)
    try:
        c, low = scipy.linalg.cho_factor(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    return scipy.linalg.cho_solve((c, low), b, check_finite=False)


def schur_complement(K, eliminate):
    """K_RR - K_RE (K_EE)^{-1} K_ER on the retained indices (original order).

    The eliminated principal block must be SPD; PSD input gives PSD output
    with preserved zero row sums (harmonic extension keeps constants).
    """
    a = K.a
    n = K.dim
    elim = sorted(set(eliminate))
    for i in elim:
        if not 0 <= i < n:
            raise InputError("eliminate index %d out of range" % i)
    if not elim:
        return SymMatrix(a)
    keep = [i for i in range(n) if i not in set(elim)]
    kee = a[np.ix_(elim, elim)]
    ker = a[np.ix_(elim, keep)]
    krr = a[np.ix_(keep, keep)]
    try:
        c, low = scipy.linalg.cho_factor(kee, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("eliminated block is not SPD") from exc
    s = krr - ker.T @ scipy.linalg.cho_solve((c, low), ker, check_finite=False)
    return SymMatrix(0.5 * (s + s.T))


def jacobi_eigenvalues(a, tol=1e-13, max_sweeps=60):
    """Cyclic Jacobi eigenvalues of a dense symmetric matrix, ascending.

    Independent cross-check oracle for the eigh route; intended for dim <= 12.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a[0:1, 0].copy()
    scale = np.abs(a).max() or 1.0
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
                if abs(a[p, q]) <= tol * scale:
                    continue
                # classic 2x2 rotation zeroing a[p, q]
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
        if off <= tol * scale:
            break
    return np.sort(np.diag(a))


def jacobi_generalized_eigenvalues(K, mass, tol=1e-13):
    """Generalized variant of the Jacobi oracle via the same diagonal scaling."""
    m = np.asarray(mass, dtype=float)
    d = 1.0 / np.sqrt(m)
    a = K.a if isinstance(K, SymMatrix) else np.asarray(K)
    return jacobi_eigenvalues(d[:, None] * a * d[None, :], tol=tol)
