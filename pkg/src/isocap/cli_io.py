"""Graph file format, JSON report emission, and the command-line surface.

Graph files are line oriented: `# comment`, `v <id> <mass>`,
`e <id> <id> <weight>`, and one optional `omega <id> ...` marking the
interior.  Ids are opaque tokens and stay strings through parse and emit, so
a parse/emit round trip reproduces the graph exactly.

Reports are JSON with a fixed key order, every float printed with up to 17
significant digits (exact double round trip), and the distinguished infinite
value spelled as the string "infinite".  Identical inputs and seed produce
byte-identical output apart from tool_version.

Exit codes: 0 success, 2 bad input, 3 enumeration budget exceeded, 4 a
verified inequality failed.
"""

import argparse
import json as _json
import math
import re
import sys

from . import __version__
from .capacity import (CapacityResult, CapacitySequence, cap, cap_exhaustion,
                       cap_to_boundary, coarea_value)
from .constants import (Budget, ConstantResult, LimitReport, alpha_dirichlet,
                        alpha_dirichlet_limit, alpha_ds, alpha_neumann,
                        alpha_steklov, alpha_steklov_limit, gamma_k_dirichlet,
                        gamma_k_steklov, gamma_tilde_dirichlet, kappa_steklov)
from .errors import BudgetError, InputError
from .graph_core import WeightedGraph, energy, make_domain
from .infinite_families import FamilySpec, default_source, generate_steps
from .infinity import INFINITE, is_infinite
from .linear_core import SpectralResult
from .spectra import (dirichlet_spectrum, grounded_dtn_spectrum,
                      hm_dtn_spectrum, neumann_spectrum, steklov_spectrum)
from .verify import BoundReport, EqualityReport, check

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_FAILED = 4


# ---------------------------------------------------------------------------
# graph files

def _positive(token, lineno, what):
    try:
        value = float(token)
    except ValueError:
        raise InputError("line %d: %s %r is not a number" % (lineno, what, token))
    if not math.isfinite(value) or value <= 0.0:
        raise InputError("line %d: %s must be a positive finite number" % (lineno, what))
    return value


def parse_graph(text):
    """Parse a graph file; returns (graph, interior or None).

    All validation failures name the offending line.
    """
    order = []
    masses = {}
    edges = []
    seen_edges = set()
    omega = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 3:
                raise InputError("line %d: expected 'v <id> <mass>'" % lineno)
            vid = parts[1]
            if vid in masses:
                raise InputError("line %d: duplicate vertex %r" % (lineno, vid))
            masses[vid] = _positive(parts[2], lineno, "mass")
            order.append(vid)
        elif kind == "e":
            if len(parts) != 4:
                raise InputError("line %d: expected 'e <id> <id> <weight>'" % lineno)
            u, v = parts[1], parts[2]
            for end in (u, v):
                if end not in masses:
                    raise InputError("line %d: undeclared endpoint %r" % (lineno, end))
            if u == v:
                raise InputError("line %d: self-loop at %r" % (lineno, u))
            key = (u, v) if u < v else (v, u)
            if key in seen_edges:
                raise InputError("line %d: duplicate edge %r-%r" % (lineno, u, v))
            seen_edges.add(key)
            edges.append((u, v, _positive(parts[3], lineno, "weight")))
        elif kind == "omega":
            if omega is not None:
                raise InputError("line %d: second omega line" % lineno)
            if len(parts) == 1:
                raise InputError("line %d: empty omega line" % lineno)
            ids = parts[1:]
            if len(set(ids)) != len(ids):
                raise InputError("line %d: repeated id in omega" % lineno)
            for vid in ids:
                if vid not in masses:
                    raise InputError("line %d: omega id %r not declared" % (lineno, vid))
            omega = tuple(ids)
        else:
            raise InputError("line %d: unknown record %r" % (lineno, kind))
    if not order:
        raise InputError("no vertices declared")
    return WeightedGraph(order, masses, edges), omega


def _token(vid):
    s = str(vid)
    if not s or any(c.isspace() for c in s) or s.startswith("#"):
        raise InputError("vertex id %r is not writable as a file token" % (vid,))
    return s


def emit_graph(graph, interior=None):
    """Graph file text that parses back to an identical graph."""
    lines = []
    for v in graph.vertices:
        lines.append("v %s %s" % (_token(v), _num(graph.mass[v])))
    for u, v, w in graph.edges:
        lines.append("e %s %s %s" % (_token(u), _token(v), _num(w)))
    if interior is not None:
        lines.append("omega " + " ".join(_token(v) for v in interior))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON emission

def _num(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int,)):
        return str(x)
    if not math.isfinite(x):
        raise InputError("non-finite number %r in report" % x)
    return "%.17g" % x


def to_json(obj):
    """Serialize with insertion order, 17-significant-digit floats, and the
    "infinite" sentinel; strings escape through the stdlib."""
    if is_infinite(obj):
        return '"infinite"'
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return _json.dumps(obj)
    if isinstance(obj, bool) or isinstance(obj, (int, float)):
        return _num(obj)
    if isinstance(obj, dict):
        items = ("%s: %s" % (_json.dumps(str(k)), to_json(v)) for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise InputError("unserializable object %r" % (obj,))


def _ids(seq):
    return [str(v) for v in seq]


def _witness(w):
    if w is None:
        return None
    if not isinstance(w, tuple):
        return str(w)
    if w and all(isinstance(p, tuple) for p in w):
        return [_ids(p) for p in w]
    return _ids(w)


def project(result, name=None):
    """Flatten a result object into a JSON-ready dict."""
    if isinstance(result, BoundReport):
        out = {
            "type": "bound",
            "theorem": result.theorem_id,
            "eigenvalue": result.eigenvalue,
            "constant": result.constant,
            "lower_bound": result.lower_bound,
            "upper_bound": result.upper_bound,
            "lower_ok": result.lower_ok,
            "upper_ok": result.upper_ok,
            "ratio": result.ratio,
            "witness": _witness(result.witness),
        }
        if result.empirical_c is not None:
            out["empirical_c"] = result.empirical_c
        if result.sequences is not None:
            out["sequences"] = result.sequences
        return out
    if isinstance(result, ConstantResult):
        return {
            "type": "constant",
            "name": name,
            "value": result.value,
            "witness": _witness(result.witness),
            "evaluations": result.evaluations,
            "heuristic": result.heuristic,
        }
    if isinstance(result, SpectralResult):
        return {
            "type": "spectrum",
            "name": name,
            "eigenvalues": list(result.eigenvalues),
            "residual_norm": result.residual_norm,
            "vertex_order": _ids(result.vertex_order or ()),
        }
    if isinstance(result, CapacityResult):
        return {
            "type": "capacity",
            "value": result.value,
            "source": _ids(result.source),
            "sink": _ids(result.sink),
            "potential": {str(v): x for v, x in result.potential.items()},
        }
    if isinstance(result, CapacitySequence):
        return {
            "type": "capacity_sequence",
            "indices": list(result.indices),
            "values": list(result.values),
            "limit_estimate": result.limit_estimate,
            "error_bar": result.error_bar,
            "monotone": result.monotone,
        }
    if isinstance(result, LimitReport):
        return {
            "type": "limit",
            "name": name,
            "indices": list(result.indices),
            "values": list(result.values),
            "limit_estimate": result.limit_estimate,
            "error_bar": result.error_bar,
            "monotone": result.monotone,
            "heuristic": result.heuristic,
        }
    if isinstance(result, EqualityReport):
        return {
            "type": "equality",
            "sigma1": result.sigma1,
            "alpha_s": result.alpha_s,
            "equal": result.equal,
            "status": result.status,
            "gap": result.gap,
            "multiplicity": result.multiplicity,
            "witness": None if result.witness is None else
                       {str(v): x for v, x in result.witness.items()},
        }
    if isinstance(result, dict):
        return {"type": "sequence", "name": name, **result}
    raise InputError("unreportable result %r" % (result,))


def document(source, results, graph=None, domain=None, diagnostics=None):
    inst = {"source": source}
    if graph is not None:
        inst["vertices"] = len(graph.vertices)
    if domain is not None:
        inst["interior_size"] = len(domain.interior)
        inst["boundary_size"] = len(domain.boundary)
    return {
        "tool_version": __version__,
        "instance": inst,
        "results": results,
        "diagnostics": diagnostics or {},
    }


# ---------------------------------------------------------------------------
# family specs

_U_KINDS = ("binary_tree", "half_space")


def parse_family_spec(text):
    """Family grammar: kind[:N][:quotient|:full][:summable],
    e.g. lattice_box:3:quotient:summable."""
    parts = text.split(":")
    kind = parts[0]
    dim = 1
    quotient = False
    mass_rule = None
    for opt in parts[1:]:
        if opt.isdigit():
            dim = int(opt)
        elif opt == "quotient":
            quotient = True
        elif opt == "full":
            quotient = False
        elif opt == "summable":
            if kind != "lattice_box":
                raise InputError("summable masses are a lattice_box option")
            mass_rule = lambda x: 2.0 ** -max(abs(c) for c in x)
        else:
            raise InputError("unknown family option %r" % opt)
    return FamilySpec(kind, dim=dim, quotient=quotient, mass_rule=mass_rule)


def _parse_steps(text):
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if b < a:
            raise InputError("empty step range %r" % text)
        return list(range(a, b + 1))
    try:
        steps = [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError("steps must be 'a..b' or comma-separated integers")
    return steps


# ---------------------------------------------------------------------------
# commands

def _budget(args):
    base = Budget()
    return Budget(
        single=args.budget_single if args.budget_single else base.single,
        pair=args.budget_pair if args.budget_pair else base.pair,
        tuples=args.budget_tuple if args.budget_tuple else base.tuples,
        part_cap=args.part_cap,
    )


def _load(path):
    try:
        with open(path) as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise InputError("cannot read %r: %s" % (path, exc))


def _need_domain(graph, omega, path):
    if omega is None:
        raise InputError("%s has no omega line" % path)
    return make_domain(graph, omega)


def _split_ids(text):
    ids = tuple(t for t in text.split(",") if t)
    if not ids:
        raise InputError("empty id list %r" % text)
    return ids


def _cmd_spectrum(args):
    graph, omega = _load(args.file)
    domain = _need_domain(graph, omega, args.file)
    count = args.k
    if args.mode == "dirichlet":
        spec = dirichlet_spectrum(graph, domain.interior, count=count)
    elif args.mode == "neumann":
        spec = neumann_spectrum(domain, count=count)
    elif args.mode == "steklov":
        spec = steklov_spectrum(domain, count=count)
    else:
        spec = hm_dtn_spectrum(graph, domain.interior, count=count)
    doc = document(args.file, [project(spec, name=args.mode)], graph, domain,
                   {"residuals": [spec.residual_norm]})
    return doc, EXIT_OK


def _cmd_cap(args):
    graph, omega = _load(args.file)
    A = _split_ids(args.A)
    if args.B is None:
        domain = _need_domain(graph, omega, args.file)
        result = cap_to_boundary(domain, A)
    else:
        B = _split_ids(args.B)
        if omega is not None:
            domain = make_domain(graph, omega)
            result = cap(domain, A, B)
        else:
            # free complement: ground exactly the named sink
            interior = [v for v in graph.vertices if v not in set(B)]
            domain = make_domain(graph, interior)
            result = cap(domain, A, domain.boundary)
    doc = document(args.file, [project(result)], graph, domain)
    return doc, EXIT_OK


def _cmd_alpha(args):
    graph, omega = _load(args.file)
    domain = _need_domain(graph, omega, args.file)
    budget = _budget(args)
    if args.which == "d":
        res, name = alpha_dirichlet(domain, budget=budget, heuristic=args.heuristic,
                                    shuffle_seed=args.seed), "alpha_dirichlet"
    elif args.which == "n":
        res, name = alpha_neumann(domain, budget=budget, heuristic=args.heuristic,
                                  shuffle_seed=args.seed), "alpha_neumann"
    elif args.which == "s":
        res, name = alpha_steklov(domain, budget=budget, heuristic=args.heuristic,
                                  shuffle_seed=args.seed), "alpha_steklov"
    else:
        window = _split_ids(args.window) if args.window else domain.closure
        res, name = alpha_ds(domain, window, budget=budget,
                             shuffle_seed=args.seed), "alpha_ds"
    diag = {"enumeration_counts": [res.evaluations],
            "budgets": {"single": budget.single, "pair": budget.pair},
            "heuristic_flags": [res.heuristic]}
    doc = document(args.file, [project(res, name=name)], graph, domain, diag)
    return doc, EXIT_OK


def _cmd_gamma(args):
    graph, omega = _load(args.file)
    domain = _need_domain(graph, omega, args.file)
    budget = _budget(args)
    results = []
    counts = []
    if args.which == "d":
        window = _split_ids(args.window) if args.window else domain.interior
        a = gamma_tilde_dirichlet(graph, window, args.k, budget=budget)
        b = gamma_k_dirichlet(graph, window, args.k, budget=budget)
        results = [project(a, "gamma_tilde_dirichlet"), project(b, "gamma_k_dirichlet")]
        counts = [a.evaluations, b.evaluations]
    else:
        window = _split_ids(args.window) if args.window else domain.closure
        a = gamma_k_steklov(domain, window, args.k, budget=budget)
        results = [project(a, "gamma_k_steklov")]
        counts = [a.evaluations]
    diag = {"enumeration_counts": counts,
            "budgets": {"tuples": budget.tuples, "part_cap": budget.part_cap}}
    doc = document(args.file, results, graph, domain, diag)
    return doc, EXIT_OK


def _cmd_kappa(args):
    graph, omega = _load(args.file)
    domain = _need_domain(graph, omega, args.file)
    budget = _budget(args)
    res = kappa_steklov(domain, args.k, budget=budget)
    diag = {"enumeration_counts": [res.evaluations],
            "budgets": {"tuples": budget.tuples, "part_cap": budget.part_cap}}
    doc = document(args.file, [project(res, "kappa_steklov")], graph, domain, diag)
    return doc, EXIT_OK


_THEOREM_RE = re.compile(r"([a-z_0-9]+)\((\d+)\)$")


def _cmd_verify(args):
    name = args.theorem
    k = args.k
    m = _THEOREM_RE.fullmatch(name)
    if m:
        name = m.group(1)
        if k is not None and k != int(m.group(2)):
            raise InputError("-k disagrees with %r" % args.theorem)
        k = int(m.group(2))
    budget = _budget(args)
    if args.family:
        if not args.steps:
            raise InputError("--family needs --steps")
        spec = parse_family_spec(args.family)
        steps = generate_steps(spec, _parse_steps(args.steps))
        report = check(name, steps, k=k, budget=budget, heuristic=args.heuristic)
        doc = document("family:" + args.family, [project(report)],
                       diagnostics={"steps": [s.index for s in steps]})
    else:
        if not args.file:
            raise InputError("verify needs a graph file or --family")
        graph, omega = _load(args.file)
        domain = _need_domain(graph, omega, args.file)
        report = check(name, domain, k=k, budget=budget, heuristic=args.heuristic)
        doc = document(args.file, [project(report)], graph, domain)
    return doc, EXIT_OK if report.passed() else EXIT_FAILED


def _cmd_family(args):
    spec = parse_family_spec(args.family)
    steps = generate_steps(spec, _parse_steps(args.steps))
    budget = _budget(args)
    grounded = spec.kind in _U_KINDS
    if args.emit == "cap":
        res = cap_exhaustion(steps, default_source(spec))
        results = [project(res)]
    elif args.emit == "alpha":
        if grounded:
            res = alpha_steklov_limit(steps, budget=budget)
            results = [project(res, "alpha_ds_limit")]
        else:
            res = alpha_dirichlet_limit(steps, budget=budget, heuristic=args.heuristic)
            results = [project(res, "alpha_dirichlet_limit")]
    else:
        values = []
        for step in steps:
            if grounded:
                spectrum = grounded_dtn_spectrum(step.domain, step.W, count=1)
                values.append(INFINITE if is_infinite(spectrum)
                              else spectrum.eigenvalues[0])
            else:
                values.append(dirichlet_spectrum(step.graph, step.W,
                                                 count=1).eigenvalues[0])
        seq = {"indices": [s.index for s in steps], "values": values}
        results = [project(seq, "sigma_bottom" if grounded else "lambda_bottom")]
    doc = document("family:" + args.family, results,
                   diagnostics={"steps": [s.index for s in steps]})
    return doc, EXIT_OK


def _cmd_coarea(args):
    graph, omega = _load(args.file)
    domain = _need_domain(graph, omega, args.file)
    field = {}
    for item in args.field.split(","):
        if "=" not in item:
            raise InputError("field entries look like id=value, got %r" % item)
        vid, _, val = item.partition("=")
        try:
            field[vid] = float(val)
        except ValueError:
            raise InputError("bad field value %r" % val)
    value = coarea_value(domain, field)
    quad = energy(domain, field, field)
    holds = value <= 2.0 * quad + 1e-12 * max(1.0, abs(quad))
    results = [{"type": "coarea", "value": value, "energy": quad,
                "bound": 2.0 * quad, "holds": holds}]
    return document(args.file, results, graph, domain), EXIT_OK


def _parser():
    top = argparse.ArgumentParser(prog="isocap",
                                  description="capacities, boundary spectra, and "
                                              "two-sided eigenvalue bounds on "
                                              "weighted graphs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="shuffle seed for enumeration order checks")
    common.add_argument("--budget-single", type=int, default=None)
    common.add_argument("--budget-pair", type=int, default=None)
    common.add_argument("--budget-tuple", type=int, default=None)
    common.add_argument("--part-cap", type=int, default=None)
    common.add_argument("--heuristic", action="store_true",
                        help="certified upper bounds from guided candidates "
                             "instead of exact enumeration")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("mode", choices=("dirichlet", "neumann", "steklov", "hm"))
    p.add_argument("-k", type=int, default=None, help="number of eigenvalues")
    p.add_argument("file")
    p.set_defaults(run=_cmd_spectrum)

    p = sub.add_parser("cap", parents=[common])
    p.add_argument("-A", required=True, help="comma-separated source ids")
    p.add_argument("-B", default=None, help="comma-separated sink ids")
    p.add_argument("file")
    p.set_defaults(run=_cmd_cap)

    p = sub.add_parser("alpha", parents=[common])
    p.add_argument("which", choices=("d", "n", "s", "ds"))
    p.add_argument("-Y", dest="window", default=None,
                   help="window for the ds variant (default: closure)")
    p.add_argument("file")
    p.set_defaults(run=_cmd_alpha)

    p = sub.add_parser("gamma", parents=[common])
    p.add_argument("which", choices=("d", "s"))
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-W", dest="window", default=None,
                   help="window (default: omega for d, closure for s)")
    p.add_argument("file")
    p.set_defaults(run=_cmd_gamma)

    p = sub.add_parser("kappa", parents=[common])
    p.add_argument("-k", type=int, required=True)
    p.add_argument("file")
    p.set_defaults(run=_cmd_kappa)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("theorem")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--steps", default=None)
    p.add_argument("-k", type=int, default=None)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("family", parents=[common])
    p.add_argument("family")
    p.add_argument("--steps", required=True)
    p.add_argument("--emit", choices=("alpha", "cap", "sigma"), required=True)
    p.set_defaults(run=_cmd_family)

    p = sub.add_parser("coarea", parents=[common])
    p.add_argument("file")
    p.add_argument("--field", required=True, help="comma-separated id=value pairs")
    p.set_defaults(run=_cmd_coarea)
    return top


def run_command(argv):
    """Run one subcommand; prints the report JSON and returns the exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        doc, code = args.run(args)
    except BudgetError as exc:
        print(to_json({"tool_version": __version__,
                       "error": {"kind": "budget", "message": str(exc)}}))
        return EXIT_BUDGET
    except InputError as exc:
        print(to_json({"tool_version": __version__,
                       "error": {"kind": "input", "message": str(exc)}}))
        return EXIT_INPUT
    print(to_json(doc))
    return code


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
