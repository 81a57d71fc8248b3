"""Parameterized graph families and their nested truncations.

Each family produces a sequence of finite snapshots: an ambient graph that
extends one layer beyond the window W, a Steklov marking of that graph, the
window itself, and the sink ring that separates the window from everything
that was cut off.  Capacities and grounded spectra evaluated on a snapshot
agree exactly with the values in the full infinite graph, because all the
relevant potentials are supported inside the window's closure.

Where a family has enough symmetry, a reduced model is available: the binary
tree collapses to a weighted path indexed by generation, and lattice boxes
collapse to orbits of coordinate permutations and sign flips.  The reduced
models carry aggregated masses and edge multiplicities, so capacities of
symmetric sets and bottom eigenvalues transfer exactly.
"""

import itertools
from collections import namedtuple
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InputError
from .graph_core import WeightedGraph, make_domain

FamilyStep = namedtuple("FamilyStep", "index graph domain W sink")

KINDS = ("path_segment", "t3", "binary_tree", "lattice_box", "half_space")

# Kinds that admit a symmetry-reduced model.
_REDUCIBLE = ("binary_tree", "lattice_box")


@dataclass(frozen=True)
class FamilySpec:
    """Recipe for one family; the step index is supplied to generate()."""

    kind: str
    dim: int = 1
    quotient: bool = False
    mass_rule: Optional[Callable] = None
    weight_rule: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError("unknown family kind %r; known: %s" % (self.kind, ", ".join(KINDS)))
        if self.kind in ("lattice_box", "half_space") and self.dim < 1:
            raise InputError("dimension must be >= 1")
        if self.quotient and self.kind not in _REDUCIBLE:
            raise InputError("no reduced model for kind %r" % self.kind)

    def mass(self, v):
        return 1.0 if self.mass_rule is None else float(self.mass_rule(v))

    def weight(self, u, v):
        return 1.0 if self.weight_rule is None else float(self.weight_rule(u, v))


def path_graph(n, weight_rule=None, mass_rule=None):
    """Path on vertices 0..n with unit weights and masses by default."""
    if n < 1:
        raise InputError("path needs n >= 1")
    spec = FamilySpec("path_segment", mass_rule=mass_rule, weight_rule=weight_rule)
    vertices = list(range(n + 1))
    masses = {v: spec.mass(v) for v in vertices}
    edges = [(v, v + 1, spec.weight(v, v + 1)) for v in range(n)]
    return WeightedGraph(vertices, masses, edges)


def line_domain(n, weight_rule=None, mass_rule=None):
    """Path 0..n marked with interior {1..n-1}; endpoints are the boundary."""
    if n < 2:
        raise InputError("interior needs n >= 2")
    graph = path_graph(n, weight_rule, mass_rule)
    return graph, make_domain(graph, range(1, n))


_T3_EDGES = (
    ("x1", "x2"), ("x1", "x3"), ("x1", "x4"),
    ("x2", "x5"), ("x2", "x6"),
    ("x3", "x7"), ("x3", "x8"),
    ("x4", "x9"), ("x4", "x10"),
)


def t3_example():
    """Ten-vertex tree: root x1, its three children, six leaves; omega is the
    root plus children."""
    vertices = ["x%d" % k for k in range(1, 11)]
    masses = {v: 1.0 for v in vertices}
    edges = [(u, v, 1.0) for u, v in _T3_EDGES]
    graph = WeightedGraph(vertices, masses, edges)
    return graph, make_domain(graph, ("x1", "x2", "x3", "x4"))


def _tree_level(label):
    # label 1 sits at generation 0; generation j >= 1 holds labels 2^(j-1)+1 .. 2^j
    return 0 if label == 1 else (label - 1).bit_length()


def _binary_tree_step(spec, i):
    if i < 1:
        raise InputError("tree step needs i >= 1")
    top = 2 ** (i + 1)
    # stem 1-2, then label k has children 2k-1 and 2k
    full_edges = [(1, 2)] + [(k, 2 * k - 1) for k in range(2, 2 ** i + 1)] \
        + [(k, 2 * k) for k in range(2, 2 ** i + 1)]
    if spec.quotient:
        masses = {}
        for k in range(1, top + 1):
            lvl = _tree_level(k)
            masses[lvl] = masses.get(lvl, 0.0) + spec.mass(k)
        weights = {}
        for a, b in full_edges:
            lvl = _tree_level(a)
            weights[lvl] = weights.get(lvl, 0.0) + spec.weight(a, b)
        vertices = list(range(i + 2))
        edges = [(j, j + 1, weights[j]) for j in range(i + 1)]
        graph = WeightedGraph(vertices, masses, edges)
        domain = make_domain(graph, range(1, i + 2))
        return FamilyStep(i, graph, domain, tuple(range(i + 1)), (i + 1,))
    vertices = list(range(1, top + 1))
    masses = {v: spec.mass(v) for v in vertices}
    edges = [(a, b, spec.weight(a, b)) for a, b in full_edges]
    graph = WeightedGraph(vertices, masses, edges)
    domain = make_domain(graph, range(2, top + 1))
    window = tuple(range(1, 2 ** i + 1))
    sink = tuple(range(2 ** i + 1, top + 1))
    return FamilyStep(i, graph, domain, window, sink)


def _orbit(point):
    return tuple(sorted(abs(c) for c in point))


def _box_points(dim, radius):
    return itertools.product(range(-radius, radius + 1), repeat=dim)


def _lattice_box_step(spec, r):
    if r < 1:
        raise InputError("box step needs r >= 1")
    dim = spec.dim
    outer = r + 1
    if spec.quotient:
        masses = {}
        weights = {}
        for x in _box_points(dim, outer):
            ox = _orbit(x)
            masses[ox] = masses.get(ox, 0.0) + spec.mass(x)
            for axis in range(dim):
                if x[axis] + 1 > outer:
                    continue
                y = x[:axis] + (x[axis] + 1,) + x[axis + 1:]
                oy = _orbit(y)
                if ox == oy:
                    continue
                key = (ox, oy) if ox < oy else (oy, ox)
                weights[key] = weights.get(key, 0.0) + spec.weight(x, y)
        vertices = sorted(masses)
        edges = [(a, b, w) for (a, b), w in sorted(weights.items())]
        graph = WeightedGraph(vertices, masses, edges)
        window = tuple(v for v in vertices if v[-1] <= r)
    else:
        vertices = sorted(_box_points(dim, outer))
        masses = {x: spec.mass(x) for x in vertices}
        edges = []
        for x in vertices:
            for axis in range(dim):
                if x[axis] + 1 > outer:
                    continue
                y = x[:axis] + (x[axis] + 1,) + x[axis + 1:]
                edges.append((x, y, spec.weight(x, y)))
        graph = WeightedGraph(vertices, masses, edges)
        window = tuple(x for x in vertices if max(abs(c) for c in x) <= r)
    domain = make_domain(graph, window)
    return FamilyStep(r, graph, domain, window, domain.boundary)


def _half_space_step(spec, R):
    if R < 1:
        raise InputError("slab step needs R >= 1")
    dim = spec.dim
    outer = R + 1
    lateral = range(-outer, outer + 1)
    vertices = sorted(itertools.product(*([lateral] * (dim - 1) + [range(outer + 1)])))
    masses = {x: spec.mass(x) for x in vertices}
    edges = []
    for x in vertices:
        for axis in range(dim):
            if x[axis] + 1 > outer:
                continue
            y = x[:axis] + (x[axis] + 1,) + x[axis + 1:]
            edges.append((x, y, spec.weight(x, y)))
    graph = WeightedGraph(vertices, masses, edges)
    interior = [x for x in vertices if x[-1] >= 1]
    domain = make_domain(graph, interior)
    window = tuple(x for x in vertices if max(abs(c) for c in x) <= R)
    wset = set(window)
    adjacency = domain.induced.adjacency
    sink = tuple(v for v in domain.closure
                 if v not in wset and any(y in wset for y, _ in adjacency[v]))
    return FamilyStep(R, graph, domain, window, sink)


_BUILDERS = {
    "binary_tree": _binary_tree_step,
    "lattice_box": _lattice_box_step,
    "half_space": _half_space_step,
}


def generate(spec, step=None):
    """The step-indexed snapshot of the family.

    Trees are indexed by generation depth, boxes and slabs by window radius,
    paths by segment length.  The t3 example has a single snapshot and
    ignores the index.
    """
    if spec.kind == "t3":
        graph, domain = t3_example()
        return FamilyStep(0, graph, domain, domain.interior, domain.boundary)
    if step is None:
        raise InputError("family kind %r needs a step index" % spec.kind)
    if spec.kind == "path_segment":
        if step < 2:
            raise InputError("path step needs n >= 2")
        graph, domain = line_domain(step, spec.weight_rule, spec.mass_rule)
        return FamilyStep(step, graph, domain, domain.interior, domain.boundary)
    return _BUILDERS[spec.kind](spec, step)


def generate_steps(spec, indices):
    """Snapshots for an increasing index sequence, validated as such."""
    indices = [int(i) for i in indices]
    if not indices:
        raise InputError("empty index sequence")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise InputError("step indices must be strictly increasing")
    return [generate(spec, i) for i in indices]


def default_source(spec):
    """A canonical small source set for capacity runs over the family."""
    if spec.kind == "path_segment":
        return (0,)
    if spec.kind == "t3":
        return ("x1",)
    if spec.kind == "binary_tree":
        return (0,) if spec.quotient else (1,)
    zero = (0,) * spec.dim
    if spec.kind == "lattice_box" and spec.quotient:
        return (zero,)
    return (zero,)


def half_space_test_field(N, r0, R):
    """Radial comparison field on the slab snapshot of radius R.

    The field is 1 on the ball of radius r0 intersected with the closed half
    space and decays like (r0/r)^(N-2) outward.  It is shifted and rescaled
    so that it hits zero exactly at radius R+1 while keeping value 1 on the
    source ball; clipping at zero truncates the support without breaking
    admissibility.  Keys cover the whole radius-R slab snapshot, so the dict
    plugs directly into the snapshot's energy form.
    """
    if N < 3:
        raise InputError("radial decay needs N >= 3")
    if not 1 <= r0 < R:
        raise InputError("need 1 <= r0 < R")
    floor = (r0 / (R + 1.0)) ** (N - 2)
    out = {}
    lateral = range(-(R + 1), R + 2)
    for x in sorted(itertools.product(*([lateral] * (N - 1) + [range(R + 2)]))):
        rad = max(abs(c) for c in x)
        raw = 1.0 if rad <= r0 else (r0 / rad) ** (N - 2)
        out[x] = max(0.0, (raw - floor) / (1.0 - floor))
    return out


def half_space_capacity_bound(N, r0, R):
    """Energy of the radial comparison field divided by the source mass.

    This is a certified upper bound for the relative capacity of the ball
    Q_r0 in the half space: the field is admissible and finitely supported.
    Vectorized; edges inside the floor hyperplane carry no energy and are
    skipped.
    """
    if N < 3:
        raise InputError("radial decay needs N >= 3")
    if not 1 <= r0 < R:
        raise InputError("need 1 <= r0 < R")
    axes = [np.arange(-(R + 1), R + 2)] * (N - 1) + [np.arange(0, R + 2)]
    grids = np.meshgrid(*axes, indexing="ij")
    rad = np.maximum.reduce([np.abs(g) for g in grids])
    floor = (r0 / (R + 1.0)) ** (N - 2)
    raw = np.where(rad <= r0, 1.0, (r0 / np.maximum(rad, 1.0)) ** (N - 2))
    field = np.clip((raw - floor) / (1.0 - floor), 0.0, None)
    height = grids[-1]
    total = 0.0
    for axis in range(N):
        diff = np.diff(field, axis=axis)
        if axis < N - 1:
            cut = [slice(None)] * N
            cut[axis] = slice(0, -1)
            total += float((diff ** 2 * (height[tuple(cut)] > 0)).sum())
        else:
            total += float((diff ** 2).sum())
    return total / (2 * r0 + 1) ** (N - 1)
