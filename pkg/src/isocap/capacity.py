"""Equilibrium potentials, capacities, exhaustion limits, and the co-area sum.

Cap_Omega(A, B) = inf { E(f,f) : f|_A = 1, f|_B = 0 } over the induced graph
G_Omega; the minimizer is harmonic at free interior vertices and has zero
normal derivative at free boundary vertices, i.e. the free block solves the
grounded linear system.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, InputError
from .graph_core import energy
from .linear_core import solve_spd, stiffness_matrix


@dataclass
class CapacityResult:
    value: float
    potential: dict
    source: frozenset
    sink: frozenset


@dataclass
class CapacitySequence:
    indices: list
    values: list
    limit_estimate: float
    error_bar: float
    monotone: bool


def _check_sets(domain, A, B):
    if not A or not B:
        raise InputError("source and sink must be nonempty")
    domain.induced.check_vertices(A, "source")
    domain.induced.check_vertices(B, "sink")
    if set(A) & set(B):
        raise InfeasibleError("source and sink overlap")


def equilibrium_potential(domain, A, B):
    """The capacity minimizer: 1 on A, 0 on B, grounded solve elsewhere."""
    _check_sets(domain, A, B)
    order = domain.closure
    idx = domain.closure_index
    n = len(order)
    f = np.zeros(n)
    a_idx = np.array(sorted(idx[v] for v in set(A)), dtype=int)
    b_idx = np.array(sorted(idx[v] for v in set(B)), dtype=int)
    f[a_idx] = 1.0
    pinned = np.zeros(n, dtype=bool)
    pinned[a_idx] = True
    pinned[b_idx] = True
    free = np.flatnonzero(~pinned)
    if free.size:
        k = stiffness_matrix(domain.induced).a
        b = -k[np.ix_(free, a_idx)].sum(axis=1)
        f[free] = solve_spd(k[np.ix_(free, free)], b)
    # exact minimizer obeys the maximum principle; clip float noise
    np.clip(f, 0.0, 1.0, out=f)
    return {v: float(f[idx[v]]) for v in order}


def cap(domain, A, B):
    """Cap_Omega(A, B) with its equilibrium potential."""
    f = equilibrium_potential(domain, A, B)
    return CapacityResult(
        value=energy(domain, f, f),
        potential=f,
        source=frozenset(A),
        sink=frozenset(B),
    )


def cap_to_boundary(domain, A):
    """Cap_Omega(A) = Cap_Omega(A, delta Omega); A must lie inside Omega."""
    if not A:
        raise InputError("source must be nonempty")
    domain.induced.check_vertices(A, "source")
    if any(v in domain.boundary_index for v in A):
        raise InfeasibleError("source meets the boundary")
    if not domain.boundary:
        raise InputError("domain has no boundary to ground")
    return cap(domain, A, domain.boundary)


def cap_exhaustion(steps, A):
    """Capacity of A against each truncation's sink; monotone non-increasing.

    steps: iterable of objects with .index, .domain, .sink and .W (the
    truncation set); see infinite_families.  Non-increase is an exhaustion
    property, so a violation beyond float slack means the steps are not
    nested and is raised.
    """
    steps = list(steps)
    if not steps:
        raise InputError("no exhaustion steps")
    if not set(A) <= set(steps[0].W):
        raise InputError("source escapes the first truncation")
    indices, values = [], []
    for step in steps:
        indices.append(step.index)
        values.append(cap(step.domain, A, step.sink).value)
    for prev, cur in zip(values, values[1:]):
        if cur > prev + 1e-12 * max(1.0, abs(prev)):
            raise InputError(
                "capacity increased along the exhaustion; steps are not nested"
            )
    error_bar = abs(values[-1] - values[-2]) if len(values) > 1 else 0.0
    return CapacitySequence(
        indices=indices,
        values=values,
        limit_estimate=values[-1],
        error_bar=error_bar,
        monotone=True,
    )


def coarea_value(domain, f):
    """The level-set integral int_0^inf t Cap_Omega({f>t}, {f<=0}) dt, exactly.

    The capacity is piecewise constant between consecutive distinct positive
    values of f, so the integral is a finite sum of Cap * (t_j^2 - t_{j-1}^2)/2
    terms; no quadrature tolerance is involved.
    """
    for v in domain.closure:
        if v not in f:
            raise InputError("field missing value at %r" % (v,))
    sink = [v for v in domain.closure if f[v] <= 0.0]
    levels = sorted({f[v] for v in domain.closure if f[v] > 0.0})
    if not levels:
        return 0.0
    if not sink:
        raise InfeasibleError("no vertex with f <= 0: capacity sink is empty")
    total = 0.0
    prev = 0.0
    for t in levels:
        above = [v for v in domain.closure if f[v] >= t]
        c = cap(domain, above, sink).value
        total += c * (t * t - prev * prev) / 2.0
        prev = t
    return total


def capacity_by_descent(domain, A, B, tol=1e-13, max_sweeps=200000):
    """Independent oracle: coordinate descent on the energy to stationarity.

    Each sweep sets every free vertex to the weighted average of its
    neighbors (the exact single-coordinate minimizer).  Intended for
    instances with at most ~12 vertices.
    """
    _check_sets(domain, A, B)
    aset, bset = set(A), set(B)
    f = {v: 1.0 if v in aset else 0.0 for v in domain.closure}
    free = [v for v in domain.closure if v not in aset and v not in bset]
    for _ in range(max_sweeps):
        delta = 0.0
        for x in free:
            num = 0.0
            den = 0.0
            for y, w in domain.induced.adjacency[x]:
                num += w * f[y]
                den += w
            new = num / den
            delta = max(delta, abs(new - f[x]))
            f[x] = new
        if delta <= tol:
            break
    return energy(domain, f, f)
