"""Dirichlet, Neumann, and Steklov (DtN) eigenvalue problems on finite domains.

Neumann and Steklov problems are solved by exact block elimination (Schur
complements) of the induced stiffness; the vanishing-vertex-weight sequences
of rescaled graphs G^(k) are an independent verification route whose first
non-trivial eigenvalue converges to the same quantities.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .graph_core import make_domain
from .infinity import INFINITE
from .linear_core import (
    SpectralResult,
    SymMatrix,
    schur_complement,
    solve_spd,
    stiffness_matrix,
    sym_eig_generalized,
)


@dataclass
class DtnOperator:
    """The Dirichlet-to-Neumann form on delta Omega.

    form is the Schur complement of the induced stiffness eliminating the
    interior; applying it to boundary values f gives m(z) * du_f/dn(z).
    """

    boundary: tuple
    form: SymMatrix
    mass: np.ndarray

    def apply(self, f):
        vec = np.array([f[z] for z in self.boundary])
        out = self.form.a @ vec
        return {z: float(out[i]) for i, z in enumerate(self.boundary)}


@dataclass
class WeightSchedule:
    """Strictly increasing rescale factors k for the G^(k) construction."""

    k_values: tuple

    def __post_init__(self):
        ks = tuple(self.k_values)
        if not ks or any(k <= 0 for k in ks):
            raise InputError("schedule values must be positive")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise InputError("schedule must be strictly increasing")
        object.__setattr__(self, "k_values", ks)


def default_schedule(max_power=14):
    """Powers of two up to 2^14: large enough for the observed O(1/k) gap."""
    return WeightSchedule(tuple(2**p for p in range(max_power + 1)))


def _slice(result, count):
    result.eigenvalues = result.eigenvalues[:count]
    result.vectors = result.vectors[:, :count]
    if result.fields:
        result.fields = result.fields[:count]
    return result


def dirichlet_spectrum(graph, interior, count=None):
    """First eigenvalues of K_II v = lambda M_II v (zero boundary values).

    Eigenfunctions are extended by 0 to the boundary.
    """
    domain = make_domain(graph, interior)
    n = len(domain.interior)
    count = n if count is None else count
    if not 1 <= count <= n:
        raise InputError("count must be in 1..|interior|")
    k = stiffness_matrix(domain.induced).a[:n, :n]
    mass = np.array([graph.mass[v] for v in domain.interior])
    res = sym_eig_generalized(SymMatrix(k), mass, vertex_order=domain.interior)
    res.fields = [
        {v: (float(res.vectors[domain.interior_index[v], j]) if v in domain.interior_index else 0.0)
         for v in domain.closure}
        for j in range(count)
    ]
    return _slice(res, count)


def neumann_spectrum(domain, count=None):
    """Eigenvalues of L f = lambda f on Omega with zero normal derivative.

    Realized by eliminating the (diagonal, positive) boundary block of the
    induced stiffness: (K_II - K_IB K_BB^{-1} K_BI) v = lambda M_I v.
    lambda_0 = 0 with constant eigenfunction.
    """
    n = len(domain.interior)
    count = n if count is None else count
    if count > n:
        raise InputError("count exceeds |Omega|")
    if count >= 2 and n < 2:
        raise InputError("a non-trivial Neumann eigenvalue needs |Omega| >= 2")
    if count < 1:
        raise InputError("count must be positive")
    k = stiffness_matrix(domain.induced).a
    kii = k[:n, :n]
    if domain.boundary:
        kib = k[:n, n:]
        dbb = np.diag(k[n:, n:])  # diagonal: boundary-boundary edges are removed
        khat = kii - (kib / dbb[None, :]) @ kib.T
    else:
        khat = kii
    mass = np.array([domain.graph.mass[v] for v in domain.interior])
    res = sym_eig_generalized(SymMatrix(khat), mass, vertex_order=domain.interior)
    fields = []
    for j in range(count):
        v = res.vectors[:, j]
        f = {x: float(v[domain.interior_index[x]]) for x in domain.interior}
        if domain.boundary:
            # zero flux determines boundary values: weighted neighbor average
            fb = -(kib.T @ v) / dbb
            for z in domain.boundary:
                f[z] = float(fb[domain.boundary_index[z]])
        fields.append(f)
    res.fields = fields
    return _slice(res, count)


def dtn_operator(domain):
    """Lambda_Omega as a matrix: Schur complement onto the boundary."""
    if not domain.boundary:
        raise InputError("domain has no boundary")
    k = stiffness_matrix(domain.induced)
    form = schur_complement(k, range(len(domain.interior)))
    mass = np.array([domain.graph.mass[z] for z in domain.boundary])
    return DtnOperator(boundary=domain.boundary, form=form, mass=mass)


def harmonic_extension(domain, boundary_values):
    """Extend boundary data into Omega harmonically (w.r.t. G_Omega)."""
    n = len(domain.interior)
    k = stiffness_matrix(domain.induced).a
    vec = np.array([boundary_values[z] for z in domain.boundary])
    out = {z: float(boundary_values[z]) for z in domain.boundary}
    if n:
        u = solve_spd(k[:n, :n], -k[:n, n:] @ vec)
        for x in domain.interior:
            out[x] = float(u[domain.interior_index[x]])
    return out


def steklov_spectrum(domain, count=None):
    """Steklov eigenvalues: form v = sigma M_B v; sigma_0 = 0.

    Eigenfunctions are returned with their harmonic extensions.
    """
    op = dtn_operator(domain)
    nb = len(domain.boundary)
    count = nb if count is None else count
    if count > nb:
        raise InputError("count exceeds |boundary|")
    if count >= 2 and nb < 2:
        raise InputError("a non-trivial Steklov eigenvalue needs |boundary| >= 2")
    if count < 1:
        raise InputError("count must be positive")
    res = sym_eig_generalized(op.form, op.mass, vertex_order=domain.boundary)
    res.fields = [
        harmonic_extension(
            domain, {z: res.vectors[i, j] for i, z in enumerate(domain.boundary)}
        )
        for j in range(count)
    ]
    return _slice(res, count)


def vanishing_weight_spectrum(domain, mode, schedule=None, count=2):
    """Spectra of the rescaled graphs G^(k) along a schedule.

    steklov mode: m^(k) = m on the boundary and m/k on Omega; the first
    non-trivial eigenvalue increases to sigma_1(Omega).  neumann mode: m on
    Omega and m/k on the boundary; the limit is lambda_1^N(Omega).
    """
    if mode not in ("neumann", "steklov"):
        raise InputError("mode must be 'neumann' or 'steklov'")
    if mode == "steklov" and not domain.boundary:
        raise InputError("steklov mode needs a nonempty boundary")
    schedule = schedule or default_schedule()
    n = len(domain.interior)
    total = len(domain.closure)
    if not 1 <= count <= total:
        raise InputError("count must be in 1..|closure|")
    k = stiffness_matrix(domain.induced)
    base = np.array([domain.graph.mass[v] for v in domain.closure])
    results = []
    for kk in schedule.k_values:
        mass = base.copy()
        if mode == "steklov":
            mass[:n] /= kk
        else:
            mass[n:] /= kk
        res = sym_eig_generalized(k, mass, vertex_order=domain.closure)
        results.append(_slice(res, count))
    return results


def grounded_dtn_spectrum(domain, W, count=None):
    """Eigenvalues of the DtN operator Lambda_W on W cap deltaU.

    Every closure vertex outside W is grounded (value 0); W cap U is
    eliminated.  All eigenvalues are strictly positive (grounding removes the
    constant kernel).  Returns INFINITE when W cap deltaU is empty (the
    min-max over an empty space is vacuous).
    """
    domain.induced.check_vertices(W, "W")
    wset = set(W)
    w_int = [v for v in domain.interior if v in wset]
    w_bnd = [z for z in domain.boundary if z in wset]
    if not w_bnd:
        return INFINITE
    dim = len(w_bnd)
    count = dim if count is None else count
    if not 1 <= count <= dim:
        raise InputError("count must be in 1..|W cap boundary|")
    k = stiffness_matrix(domain.induced).a
    order = w_int + w_bnd
    pos = [domain.closure_index[v] for v in order]
    kw = k[np.ix_(pos, pos)]  # diagonal keeps weights of edges leaving W
    form = schur_complement(SymMatrix(kw), range(len(w_int)))
    mass = np.array([domain.graph.mass[z] for z in w_bnd])
    res = sym_eig_generalized(form, mass, vertex_order=tuple(w_bnd))
    fields = []
    for j in range(count):
        v = res.vectors[:, j]
        f = {z: float(v[i]) for i, z in enumerate(w_bnd)}
        if w_int:
            kii = kw[: len(w_int), : len(w_int)]
            u = solve_spd(kii, -kw[: len(w_int), len(w_int):] @ v)
            for i, x in enumerate(w_int):
                f[x] = float(u[i])
        fields.append(f)
    res.fields = fields
    return _slice(res, count)


def _connected(graph):
    start = graph.vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y, _ in graph.adjacency[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(graph.vertices)


def hm_dtn_spectrum(graph, omega, count=None):
    """The variant DtN operator S_Omega: full-graph harmonic extension.

    No edges are removed inside Omega; the form is the Schur complement of
    the full stiffness keeping Omega.  sigma_0^S = 0.
    """
    graph.check_vertices(omega, "Omega")
    oset = set(omega)
    if not oset or len(oset) == len(graph.vertices):
        raise InputError("Omega must be a proper nonempty subset")
    if not _connected(graph):
        raise DomainError("graph is not connected")
    keep = [v for v in graph.vertices if v in oset]
    drop = [v for v in graph.vertices if v not in oset]
    n = len(keep)
    count = n if count is None else count
    if not 1 <= count <= n:
        raise InputError("count must be in 1..|Omega|")
    k = stiffness_matrix(graph).a
    order = keep + drop
    pos = [graph.index[v] for v in order]
    kw = k[np.ix_(pos, pos)]
    form = schur_complement(SymMatrix(kw), range(n, len(order)))
    mass = np.array([graph.mass[v] for v in keep])
    res = sym_eig_generalized(form, mass, vertex_order=tuple(keep))
    fields = []
    kee = kw[n:, n:]
    keo = kw[n:, :n]
    for j in range(count):
        v = res.vectors[:, j]
        f = {x: float(v[i]) for i, x in enumerate(keep)}
        if drop:
            u = solve_spd(kee, -keo @ v)
            for i, x in enumerate(drop):
                f[x] = float(u[i])
        fields.append(f)
    res.fields = fields
    return _slice(res, count)
