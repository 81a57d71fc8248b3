"""Isocapacitary constants by exact subset and tuple enumeration.

Single-set constants (alpha_D, alpha_DS) minimize a grounded capacity over
mass; pair constants (alpha_N, alpha_S, beta_S) minimize a two-set capacity
over the smaller mass; tuple constants (gamma-tilde, Gamma_k, kappa, beta_k+1)
are min-max packings of disjoint parts.  All enumerators are exhaustive within
the budget and reduce by (value, lexicographic witness), so results do not
depend on evaluation order or chunking.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, InputError
from .infinity import INFINITE, is_infinite
from .linear_core import stiffness_matrix
from .spectra import dirichlet_spectrum, hm_dtn_spectrum, neumann_spectrum, steklov_spectrum

_CHUNK = 4096


@dataclass
class Budget:
    """Enumeration limits: subsets of a universe (single), unions for pairs,
    tuple universes with an optional per-part size cap."""

    single: int = 20
    pair: int = 16
    tuples: int = 12
    part_cap: int = None


DEFAULT_BUDGET = Budget()


@dataclass
class ConstantResult:
    value: object  # float or INFINITE
    witness: tuple
    evaluations: int
    heuristic: bool = False


@dataclass
class LimitReport:
    indices: list
    values: list
    limit_estimate: object
    error_bar: object
    monotone: bool
    heuristic: bool = False


def _grounded_values(k_amb, combos):
    """Energies of the minimizers with f = 1 on each combo, free elsewhere.

    Vertices absent from k_amb's index set are grounded implicitly: their
    edges only contribute to the retained diagonal.  combos is an (N, s)
    array of row indices; one batched solve per call.
    """
    n, s = combos.shape
    d_amb = k_amb.shape[0]
    kaa = k_amb[combos[:, :, None], combos[:, None, :]]
    tops = kaa.sum(axis=(1, 2))
    d = d_amb - s
    if d == 0:
        return tops
    mask = np.ones((n, d_amb), dtype=bool)
    mask[np.arange(n)[:, None], combos] = False
    free = np.nonzero(mask)[1].reshape(n, d)
    kfa = k_amb[free[:, :, None], combos[:, None, :]]
    c = kfa.sum(axis=2)
    kff = k_amb[free[:, :, None], free[:, None, :]]
    x = np.linalg.solve(kff, c[..., None])[..., 0]
    return tops - np.einsum("nd,nd->n", c, x)


def _grounded_value(k_amb, positions):
    return float(_grounded_values(k_amb, np.array([positions], dtype=int))[0])


def _better(best, value, key):
    if best is None or value < best[0] or (value == best[0] and key < best[1]):
        return (value, key)
    return best


def _min_single(k_amb, universe, masses, rng=None):
    """Exact min over nonempty A of grounded-energy(A)/mass(A).

    universe: ascending row indices of k_amb that A may use; masses aligns
    with universe.  Returns (value, witness slots into universe, count).
    Ties go to the lexicographically smallest slot tuple; a shuffled pass
    performs identical per-candidate arithmetic, so values match exactly.
    """
    p = len(universe)
    universe = np.asarray(universe, dtype=int)
    masses = np.asarray(masses, dtype=float)
    best = None
    examined = 0
    sizes = list(range(1, p + 1))
    if rng is not None:
        rng.shuffle(sizes)
    for s in sizes:
        combos = np.array(list(itertools.combinations(range(p), s)), dtype=int)
        if rng is not None:
            combos = combos[rng.permutation(len(combos))]
        for lo in range(0, len(combos), _CHUNK):
            part = combos[lo : lo + _CHUNK]
            vals = _grounded_values(k_amb, universe[part]) / masses[part].sum(axis=1)
            examined += len(part)
            vmin = vals.min()
            for row in np.nonzero(vals == vmin)[0]:
                best = _better(best, float(vmin), tuple(int(i) for i in part[row]))
    return best[0], best[1], examined


def _min_pair(k_amb, universe, masses, rng=None):
    """Exact min over disjoint nonempty pairs A, B subsets of the universe of
    Cap(A, B)/(m(A) ^ m(B)); everything outside A u B is free.

    Normalization: A holds the smallest index of the union.  For each union
    U the Schur complement of k_amb onto U turns every split into a quadratic
    form, batched over unions of equal size.
    """
    p = len(universe)
    universe = np.asarray(universe, dtype=int)
    masses = np.asarray(masses, dtype=float)
    d_amb = k_amb.shape[0]
    best = None
    examined = 0
    sizes = list(range(2, p + 1))
    if rng is not None:
        rng.shuffle(sizes)
    for u in sizes:
        # splits with slot 0 of the union in A, B nonempty
        bits = np.arange(1 << (u - 1))
        t = np.zeros((len(bits) - 1, u))
        t[:, 0] = 1.0
        for j in range(u - 1):
            t[:, j + 1] = (bits[:-1] >> j) & 1
        combos = np.array(list(itertools.combinations(range(p), u)), dtype=int)
        if rng is not None:
            combos = combos[rng.permutation(len(combos))]
        chunk = max(1, min(_CHUNK, (1 << 22) // max(1, len(bits))))
        for lo in range(0, len(combos), chunk):
            part = combos[lo : lo + chunk]
            rows = universe[part]
            n = len(part)
            kuu = k_amb[rows[:, :, None], rows[:, None, :]]
            d = d_amb - u
            if d:
                mask = np.ones((n, d_amb), dtype=bool)
                mask[np.arange(n)[:, None], rows] = False
                elim = np.nonzero(mask)[1].reshape(n, d)
                kue = k_amb[rows[:, :, None], elim[:, None, :]]
                kee = k_amb[elim[:, :, None], elim[:, None, :]]
                x = np.linalg.solve(kee, kue.transpose(0, 2, 1))
                s_u = kuu - kue @ x
            else:
                s_u = kuu
            quad = np.einsum("ps,nst,pt->np", t, s_u, t)
            m_u = masses[part]
            m_a = np.einsum("ps,ns->np", t, m_u)
            m_b = m_u.sum(axis=1)[:, None] - m_a
            vals = quad / np.minimum(m_a, m_b)
            examined += vals.size
            vmin = vals.min()
            for ui, pi in zip(*np.nonzero(vals == vmin)):
                slots = part[ui]
                in_a = t[pi].astype(bool)
                key = (
                    tuple(int(i) for i in slots[in_a]),
                    tuple(int(i) for i in slots[~in_a]),
                )
                best = _better(best, float(vmin), key)
    return best[0], best[1], examined


def _pair_value(k_amb, a_rows, b_rows):
    """Cap(A, B) for one explicit pair: ground B, then one grounded solve."""
    keep = [i for i in range(k_amb.shape[0]) if i not in set(b_rows)]
    sub = k_amb[np.ix_(keep, keep)]
    remap = {r: i for i, r in enumerate(keep)}
    return _grounded_value(sub, [remap[r] for r in a_rows])


def _levels(vec):
    """Superlevel slot sets of a signed field, largest value first."""
    out = []
    for thresh in sorted({x for x in vec if x > 1e-12}, reverse=True):
        out.append(tuple(int(i) for i in np.nonzero(vec >= thresh - 1e-15)[0]))
    return out


def _heuristic_single(k_amb, universe, masses, field):
    """Certified upper bound from superlevel sets of a guiding field plus
    singletons; each candidate is still evaluated exactly."""
    universe = np.asarray(universe, dtype=int)
    masses = np.asarray(masses, dtype=float)
    vec = np.asarray(field, dtype=float)
    if vec.sum() < 0:
        vec = -vec
    cands = _levels(vec) + [(i,) for i in range(len(universe))]
    best = None
    for slots in dict.fromkeys(cands):
        val = _grounded_value(k_amb, universe[list(slots)]) / masses[list(slots)].sum()
        best = _better(best, val, slots)
    return best[0], best[1], len(dict.fromkeys(cands))


def _heuristic_pair(k_amb, universe, masses, field):
    """Upper bound for a pair constant: positive and negative superlevel sets
    of a guiding field plus singletons, all disjoint combinations."""
    universe = np.asarray(universe, dtype=int)
    masses = np.asarray(masses, dtype=float)
    vec = np.asarray(field, dtype=float)
    singles = [(i,) for i in range(len(universe))]
    cands_a = list(dict.fromkeys(_levels(vec) + singles))
    cands_b = list(dict.fromkeys(_levels(-vec) + singles))
    best = None
    examined = 0
    for ca in cands_a:
        for cb in cands_b:
            if set(ca) & set(cb):
                continue
            a, b = (ca, cb) if min(ca) < min(cb) else (cb, ca)
            val = _pair_value(k_amb, universe[list(a)], universe[list(b)])
            val /= min(masses[list(a)].sum(), masses[list(b)].sum())
            examined += 1
            best = _better(best, val, (a, b))
    return best[0], best[1], examined


def _ids(order, slots):
    return tuple(order[i] for i in slots)


def _alpha_d_raw(graph, subset, budget, heuristic, rng):
    """alpha_D of a subset against its own vertex boundary, ambient rows."""
    order = [v for v in graph.vertices if v in set(subset)]
    k = stiffness_matrix(graph).a
    pos = [graph.index[v] for v in order]
    k_amb = k[np.ix_(pos, pos)]
    universe = list(range(len(order)))
    masses = [graph.mass[v] for v in order]
    if len(universe) > budget.single:
        if not heuristic:
            raise BudgetError(
                "universe size %d exceeds single-set budget %d; "
                "pass heuristic=True for a certified upper bound"
                % (len(universe), budget.single)
            )
        res = dirichlet_spectrum(graph, order, 1)
        val, slots, n = _heuristic_single(k_amb, universe, masses, res.vectors[:, 0])
        return ConstantResult(val, _ids(order, slots), n, heuristic=True)
    val, slots, n = _min_single(k_amb, universe, masses, rng=rng)
    return ConstantResult(val, _ids(order, slots), n)


def alpha_dirichlet(domain, budget=None, heuristic=False, shuffle_seed=None):
    """alpha_D(Omega) = min over nonempty A in Omega of Cap_Omega(A)/m(A).

    Exact within budget; ties go to the lexicographically smallest index set.
    Rows of Omega agree in G and G_Omega, so the ambient stiffness serves.
    """
    budget = budget or DEFAULT_BUDGET
    rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)
    return _alpha_d_raw(domain.graph, domain.interior, budget, heuristic, rng)


def _pair_constant(k_amb, order, universe, masses, budget, heuristic, rng, field):
    if len(universe) > budget.pair:
        if not heuristic:
            raise BudgetError(
                "pair universe size %d exceeds pair budget %d; "
                "pass heuristic=True for a certified upper bound"
                % (len(universe), budget.pair)
            )
        val, (sa, sb), n = _heuristic_pair(k_amb, universe, masses, field())
        return ConstantResult(val, (_ids(order, sa), _ids(order, sb)), n, heuristic=True)
    val, (sa, sb), n = _min_pair(k_amb, universe, masses, rng=rng)
    return ConstantResult(val, (_ids(order, sa), _ids(order, sb)), n)


def alpha_neumann(domain, budget=None, heuristic=False, shuffle_seed=None):
    """alpha_N(Omega): pairs of disjoint nonempty subsets of Omega, capacity
    within G_Omega (boundary vertices stay free)."""
    budget = budget or DEFAULT_BUDGET
    if len(domain.interior) < 2:
        raise InputError("alpha_N needs |Omega| >= 2")
    rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)
    k_amb = stiffness_matrix(domain.induced).a
    n = len(domain.interior)
    masses = [domain.graph.mass[v] for v in domain.interior]

    def field():
        return neumann_spectrum(domain, 2).vectors[:, 1]

    return _pair_constant(
        k_amb, domain.interior, list(range(n)), masses, budget, heuristic, rng, field
    )


def alpha_steklov(domain, budget=None, heuristic=False, shuffle_seed=None):
    """alpha_S(Omega): pairs of disjoint nonempty boundary subsets, capacity
    within G_Omega."""
    budget = budget or DEFAULT_BUDGET
    if len(domain.boundary) < 2:
        raise InputError("alpha_S needs |delta Omega| >= 2")
    rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)
    k_amb = stiffness_matrix(domain.induced).a
    n = len(domain.interior)
    universe = list(range(n, n + len(domain.boundary)))
    masses = [domain.graph.mass[v] for v in domain.boundary]

    def field():
        return steklov_spectrum(domain, 2).vectors[:, 1]

    return _pair_constant(
        k_amb, domain.boundary, universe, masses, budget, heuristic, rng, field
    )


def alpha_ds(domain, Y, budget=None, shuffle_seed=None):
    """alpha_DS for Y inside the domain: min over nonempty A in Y cap dOmega
    of Cap_Omega(A, boundary-of-Y-in-G_Omega)/m(A).

    INFINITE when Y has no boundary vertex.  When Y is the whole closure the
    sink is empty and the constant is 0 (a constant test function).  The
    equilibrium potential vanishes beyond the sink, so grounding everything
    outside Y is exact.
    """
    budget = budget or DEFAULT_BUDGET
    domain.induced.check_vertices(Y, "Y")
    yset = set(Y)
    if not yset:
        raise InputError("Y must be nonempty")
    order = [v for v in domain.closure if v in yset]
    inner = [v for v in order if v in domain.boundary_index]
    if not inner:
        return ConstantResult(INFINITE, (), 0)
    sink = {
        y for v in order for y, _ in domain.induced.adjacency[v] if y not in yset
    }
    if not sink:
        return ConstantResult(0.0, (inner[0],), 0)
    if len(inner) > budget.single:
        raise BudgetError(
            "universe size %d exceeds single-set budget %d"
            % (len(inner), budget.single)
        )
    rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)
    k = stiffness_matrix(domain.induced).a
    pos = [domain.closure_index[v] for v in order]
    k_amb = k[np.ix_(pos, pos)]
    slot = {v: i for i, v in enumerate(order)}
    universe = [slot[v] for v in inner]
    masses = [domain.graph.mass[v] for v in inner]
    val, slots, n = _min_single(k_amb, universe, masses, rng=rng)
    return ConstantResult(val, tuple(inner[i] for i in slots), n)


def beta_steklov(graph, omega, budget=None, heuristic=False, shuffle_seed=None):
    """beta_S(Omega): pair constant with full-graph capacities (no edges
    removed, everything outside the pair free)."""
    budget = budget or DEFAULT_BUDGET
    graph.check_vertices(omega, "Omega")
    oset = set(omega)
    if len(oset) < 2:
        raise InputError("beta_S needs |Omega| >= 2")
    if len(oset) == len(graph.vertices):
        raise InputError("Omega must be a proper subset")
    rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)
    order = [v for v in graph.vertices if v in oset]
    k_amb = stiffness_matrix(graph).a
    universe = [graph.index[v] for v in order]
    masses = [graph.mass[v] for v in order]

    def field():
        return hm_dtn_spectrum(graph, order, 2).vectors[:, 1]

    return _pair_constant(k_amb, order, universe, masses, budget, heuristic, rng, field)


# ---------------------------------------------------------------------------
# min-max packing of disjoint tuples


def _reach_update(reach, arity, all_masks, pmask):
    dis = (all_masks & pmask) == 0
    for j in range(arity, 0, -1):
        src = reach[j - 1] & dis
        if src.any():
            reach[j][all_masks[src] | pmask] = True


def _subset_or(flags, n_slots):
    out = flags.copy()
    idx = np.arange(len(out))
    for b in range(n_slots):
        hit = np.nonzero(idx & (1 << b))[0]
        out[hit] |= out[hit ^ (1 << b)]
    return out


def _sort_key(item):
    val, key, _ = item
    return (is_infinite(val), val if not is_infinite(val) else 0.0, key)


def _min_tuple(arity, n_slots, objective, budget, part_cap, slot_ids):
    """Min over disjoint arity-tuples of nonempty parts of the max part
    objective; parts capped at part_cap slots when set.

    Parts are scanned in ascending objective order while a reachability table
    tracks which slot unions admit j disjoint parts; the first time an
    arity-packing exists fixes the optimum.  The witness is the
    lexicographically smallest optimal packing (parts sorted by slot tuple).
    """
    if arity < 1:
        raise InputError("tuple arity must be positive")
    if arity > n_slots:
        raise InputError("arity %d exceeds universe size %d" % (arity, n_slots))
    if n_slots > budget.tuples:
        raise BudgetError(
            "universe size %d exceeds tuple budget %d" % (n_slots, budget.tuples)
        )
    cap = part_cap if part_cap is not None else n_slots
    if cap < 1:
        raise InputError("part cap must be positive")
    parts = []
    for s in range(1, cap + 1):
        for slots in itertools.combinations(range(n_slots), s):
            mask = 0
            for i in slots:
                mask |= 1 << i
            parts.append((objective(slots), slots, mask))
    parts.sort(key=_sort_key)
    size = 1 << n_slots
    all_masks = np.arange(size)
    reach = np.zeros((arity + 1, size), dtype=bool)
    reach[0, 0] = True
    opt = None
    for val, _, pmask in parts:
        _reach_update(reach, arity, all_masks, pmask)
        if reach[arity].any():
            opt = val
            break
    if opt is None:  # singletons always pack, so this cannot happen
        raise InputError("no disjoint %d-tuple exists" % arity)
    if is_infinite(opt):
        allowed = parts
    else:
        allowed = [x for x in parts if not is_infinite(x[0]) and x[0] <= opt]
    allowed.sort(key=lambda x: x[1])
    reach = np.zeros((arity + 1, size), dtype=bool)
    reach[0, 0] = True
    for _, _, pmask in allowed:
        _reach_update(reach, arity, all_masks, pmask)
    any_reach = [_subset_or(reach[j], n_slots) for j in range(arity + 1)]

    def dfs(start, need, free):
        if need == 0:
            return ()
        for i in range(start, len(allowed)):
            _, slots, pmask = allowed[i]
            if pmask & ~free:
                continue
            rest = free & ~pmask
            if any_reach[need - 1][rest]:
                sub = dfs(i + 1, need - 1, rest)
                if sub is not None:
                    return (slots,) + sub
        return None

    packing = dfs(0, arity, size - 1)
    witness = tuple(tuple(slot_ids[i] for i in slots) for slots in packing)
    return ConstantResult(opt, witness, len(parts))


def gamma_tilde_dirichlet(graph, W, k, budget=None):
    """min over disjoint k-tuples of parts of W of the max first Dirichlet
    eigenvalue of each part (ambient grounding outside the part)."""
    budget = budget or DEFAULT_BUDGET
    graph.check_vertices(W, "W")
    order = [v for v in graph.vertices if v in set(W)]
    kmat = stiffness_matrix(graph).a
    pos = np.array([graph.index[v] for v in order])
    masses = np.array([graph.mass[v] for v in order])

    def objective(slots):
        rows = pos[list(slots)]
        sub = kmat[np.ix_(rows, rows)]
        d = 1.0 / np.sqrt(masses[list(slots)])
        return float(np.linalg.eigvalsh(sub * d[:, None] * d[None, :])[0])

    return _min_tuple(k, len(order), objective, budget, budget.part_cap, order)


def gamma_k_dirichlet(graph, W, k, budget=None):
    """Gamma_k^D over W: min-max of alpha_D(part) over disjoint k-tuples."""
    budget = budget or DEFAULT_BUDGET
    graph.check_vertices(W, "W")
    order = [v for v in graph.vertices if v in set(W)]
    kmat = stiffness_matrix(graph).a
    pos = np.array([graph.index[v] for v in order])
    masses = np.array([graph.mass[v] for v in order])

    def objective(slots):
        rows = pos[list(slots)]
        sub = kmat[np.ix_(rows, rows)]
        val, _, _ = _min_single(sub, list(range(len(slots))), masses[list(slots)])
        return val

    return _min_tuple(k, len(order), objective, budget, budget.part_cap, order)


def _ds_objective(k_amb, pos, boundary_slots, masses):
    """alpha_DS of a part: enumerate sources inside the part's boundary
    vertices; everything outside the part is grounded, which is exact."""

    def objective(slots):
        inner = [i for i, s in enumerate(slots) if s in boundary_slots]
        if not inner:
            return INFINITE
        rows = pos[list(slots)]
        sub = k_amb[np.ix_(rows, rows)]
        val, _, _ = _min_single(sub, inner, masses[[slots[i] for i in inner]])
        return val

    return objective


def kappa_steklov(domain, k, budget=None):
    """kappa_{k+1}: min-max of alpha_DS^Omega(part) over disjoint
    (k+1)-tuples of nonempty subsets of the closure."""
    budget = budget or DEFAULT_BUDGET
    if not 1 <= k <= len(domain.boundary) - 1:
        raise InputError("k must be in 1..|boundary|-1")
    order = list(domain.closure)
    kmat = stiffness_matrix(domain.induced).a
    pos = np.arange(len(order))
    masses = np.array([domain.graph.mass[v] for v in order])
    bnd = {domain.closure_index[v] for v in domain.boundary}
    objective = _ds_objective(kmat, pos, bnd, masses)
    return _min_tuple(k + 1, len(order), objective, budget, budget.part_cap, order)


def gamma_k_steklov(domain, W, k, budget=None):
    """Gamma_k^S(W) inside a truncated infinite domain: min-max of
    alpha_DS(part) over disjoint k-tuples of subsets of W."""
    budget = budget or DEFAULT_BUDGET
    domain.induced.check_vertices(W, "W")
    wset = set(W)
    order = [v for v in domain.closure if v in wset]
    kmat = stiffness_matrix(domain.induced).a
    pos = np.array([domain.closure_index[v] for v in order])
    masses = np.array([domain.graph.mass[v] for v in order])
    bnd = {i for i, v in enumerate(order) if v in domain.boundary_index}
    sub = kmat[np.ix_(pos, pos)]  # rows keep their full G_U diagonals
    objective = _ds_objective(sub, np.arange(len(order)), bnd, masses)
    return _min_tuple(k, len(order), objective, budget, budget.part_cap, order)


def beta_tuple(graph, omega, k, budget=None):
    """beta_{k+1}: min-max over disjoint (k+1)-tuples of subsets of V of
    inf_{A in part cap Omega} Cap(A, V minus part)/m(A)."""
    budget = budget or DEFAULT_BUDGET
    graph.check_vertices(omega, "Omega")
    oset = set(omega)
    if not 1 <= k <= len(oset) - 1:
        raise InputError("k must be in 1..|Omega|-1")
    order = list(graph.vertices)
    kmat = stiffness_matrix(graph).a
    masses = np.array([graph.mass[v] for v in order])
    in_omega = {graph.index[v] for v in oset}
    objective = _ds_objective(kmat, np.arange(len(order)), in_omega, masses)
    return _min_tuple(k + 1, len(order), objective, budget, budget.part_cap, order)


def beta_constants(graph, omega, k, budget=None, heuristic=False):
    """Both section-7 constants for one (graph, Omega, k)."""
    return {
        "beta_s": beta_steklov(graph, omega, budget, heuristic),
        "beta_tuple": beta_tuple(graph, omega, k, budget),
    }


# ---------------------------------------------------------------------------
# limits along exhaustions


def _monotone_scan(values, enforce):
    ok = True
    for prev, cur in zip(values, values[1:]):
        if is_infinite(cur):
            bad = not is_infinite(prev)
        elif is_infinite(prev):
            bad = False
        else:
            bad = cur > prev + 1e-12 * max(1.0, abs(prev))
        if bad:
            if enforce:
                raise InputError(
                    "constant increased along the exhaustion; steps are not nested"
                )
            ok = False
    return ok


def _limit_report(indices, values, monotone, heuristic=False):
    if len(values) > 1 and not (is_infinite(values[-1]) or is_infinite(values[-2])):
        error_bar = abs(values[-1] - values[-2])
    elif len(values) > 1:
        error_bar = INFINITE
    else:
        error_bar = 0.0
    return LimitReport(
        indices=list(indices),
        values=list(values),
        limit_estimate=values[-1],
        error_bar=error_bar,
        monotone=monotone,
        heuristic=heuristic,
    )


def alpha_dirichlet_limit(family, budget=None, heuristic=False):
    """Per-step alpha_D(W_i) along an exhaustion; non-increasing, and the
    last value estimates alpha_D of the infinite graph."""
    budget = budget or DEFAULT_BUDGET
    steps = list(family)
    if not steps:
        raise InputError("no exhaustion steps")
    indices, values, used = [], [], False
    for step in steps:
        res = _alpha_d_raw(step.graph, step.W, budget, heuristic, None)
        indices.append(step.index)
        values.append(res.value)
        used = used or res.heuristic
    monotone = _monotone_scan(values, enforce=not used)
    return _limit_report(indices, values, monotone, heuristic=used)


def alpha_steklov_limit(family, budget=None):
    """Per-step alpha_DS(W_i) along an exhaustion of the closure of an
    infinite U; the non-increasing values estimate alpha_S(U)."""
    budget = budget or DEFAULT_BUDGET
    steps = list(family)
    if not steps:
        raise InputError("no exhaustion steps")
    indices, values = [], []
    for step in steps:
        indices.append(step.index)
        values.append(alpha_ds(step.domain, step.W, budget).value)
    monotone = _monotone_scan(values, enforce=True)
    return _limit_report(indices, values, monotone)


def gamma_k_dirichlet_limit(family, k, budget=None):
    """Per-step Gamma_k^D(W_i); non-increasing along nested steps."""
    budget = budget or DEFAULT_BUDGET
    steps = list(family)
    if not steps:
        raise InputError("no exhaustion steps")
    indices, values = [], []
    for step in steps:
        indices.append(step.index)
        values.append(gamma_k_dirichlet(step.graph, step.W, k, budget).value)
    monotone = _monotone_scan(values, enforce=True)
    return _limit_report(indices, values, monotone)
