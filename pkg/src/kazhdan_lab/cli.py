"""Command-line interface: one executable, verb-noun subcommands.

Every subcommand prints a short human-readable table followed by a JSON
report (``--json`` keeps only the JSON, ``--out FILE`` also writes it to a
file).  Exit codes: 0 when every check is satisfied, 1 for cleanly reported
unmet hypotheses, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import criteria, graphs, presentations
from .eln import eln_root_subgroups, verify_a2_system
from .groups import ClosureCapExceeded, regular_rep_cap
from .nilpotent import heisenberg, heisenberg_irreps, is_prime
from .reps import (
    CapExceeded,
    cayley_laplacian_gap,
    fixed_subspace,
    group_codistance,
    group_epsilon,
    kazhdan_spectral_lower,
)
from .subspaces import (
    codistance_witness,
    load_subspaces,
    orthogonality_constant,
    weighted_codistance_witness,
)

DEFAULT_SEED = 0xA2


class InputError(Exception):
    pass


def _emit(report: dict, human_lines: list[str], args) -> None:
    text = json.dumps(report, indent=2, default=_jsonable)
    if not args.json:
        for line in human_lines:
            print(line)
        print("--- report ---")
    print(text)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _report_exit(satisfied: bool) -> int:
    return 0 if satisfied else 1


# -- subcommand handlers -------------------------------------------------------

def _cmd_codistance(args) -> int:
    try:
        subs = load_subspaces(args.subspaces)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read subspace file: {exc}") from exc
    if len(subs) < 2:
        raise InputError("need at least two subspaces")
    if args.alpha:
        weights = [float(x) for x in args.alpha.split(",")]
        value, vec = weighted_codistance_witness(subs, weights)
        label = "rho_alpha"
    else:
        value, vec, _ = codistance_witness(subs)
        label = "rho"
    report = {
        "criterion": "codistance",
        "inputs": {"count": len(subs), "alpha": args.alpha},
        "intermediates": {},
        "bound": value,
        "satisfied": True,
        "notes": [],
    }
    lines = [f"{label}: {value:.12g}"]
    if vec is not None:
        report["intermediates"]["achieving_vector"] = [
            [float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)
        ]
        lines.append(f"achieving vector: {np.round(np.asarray(vec), 6)}")
    _emit(report, lines, args)
    return 0


def _load_named_graph(spec: str) -> graphs.WeightedGraph:
    try:
        return graphs.named_topology(spec)
    except ValueError:
        pass
    try:
        return graphs.load_graph(spec)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load graph {spec!r}: {exc}") from exc


def _cmd_graph_lambda1(args) -> int:
    g = _load_named_graph(args.graph)
    lap = graphs.weighted_laplacian(g) if args.weighted else graphs.standard_laplacian(g)
    value = graphs.lambda1(lap)
    exact = graphs.integer_spectrum(lap)
    report = {
        "criterion": "graph_lambda1",
        "inputs": {"graph": args.graph, "weighted": bool(args.weighted)},
        "intermediates": {"exact_spectrum": exact},
        "bound": value,
        "satisfied": True,
        "notes": ["vertices are reported 1-based"],
    }
    lines = [f"lambda1: {value:.12g}"]
    if exact is not None:
        lines.append(f"exact integer spectrum: {exact}")
    _emit(report, lines, args)
    return 0


def _cmd_verify_heisenberg(args) -> int:
    p = args.p
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    model = heisenberg(p)
    reps = heisenberg_irreps(p, model)
    dims = [r.dim for r in reps]
    census_ok = dims.count(1) == p * p and dims.count(p) == p - 1
    sum_sq = sum(d * d for d in dims)
    sum_ok = sum_sq == p**3

    def check_rep(rep):
        rep.validate(seed=args.seed)
        if rep.dim != p:
            return None
        vx = fixed_subspace(rep, model.X)
        vy = fixed_subspace(rep, model.Y)
        return abs(orthogonality_constant(vx, vy) - p**-0.5)

    if args.jobs and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            errors = [e for e in pool.map(check_rep, reps) if e is not None]
    else:
        errors = [e for e in map(check_rep, reps) if e is not None]
    eps_irrep_ok = bool(errors) and max(errors) <= 1e-10
    eps_reg = group_epsilon(model.group, model.X, model.Y)
    eps_reg_ok = abs(eps_reg - p**-0.5) <= 1e-9
    ok = census_ok and sum_ok and eps_irrep_ok and eps_reg_ok
    report = {
        "criterion": "verify_heisenberg",
        "inputs": {"p": p},
        "intermediates": {
            "one_dim_count": dims.count(1),
            "p_dim_count": dims.count(p),
            "sum_of_squared_dims": sum_sq,
            "max_irrep_eps_error": max(errors) if errors else None,
            "group_epsilon": eps_reg,
            "expected_epsilon": p**-0.5,
        },
        "bound": eps_reg,
        "satisfied": ok,
        "notes": [],
    }
    lines = [
        f"group order: {model.group.order}",
        f"irreps: {dims.count(1)} of degree 1, {dims.count(p)} of degree {p}",
        f"sum of squared degrees: {sum_sq} (= p^3: {sum_ok})",
        f"epsilon on degree-p irreps: 1/sqrt(p) within 1e-10: {eps_irrep_ok}",
        f"group epsilon (regular representation): {eps_reg:.12g}",
        f"all checks: {'PASS' if ok else 'FAIL'}",
    ]
    _emit(report, lines, args)
    return _report_exit(ok)


def _cmd_verify_six_points(args) -> int:
    cap = regular_rep_cap()
    try:
        system = eln_root_subgroups(args.n, args.mod, cap=cap)
    except ClosureCapExceeded as exc:
        report = {
            "criterion": "verify_six_points",
            "inputs": {"n": args.n, "mod": args.mod},
            "intermediates": {"cap": cap},
            "bound": None,
            "satisfied": False,
            "notes": [f"skipped: {exc}"],
        }
        _emit(report, [f"skipped: {exc}"], args)
        return 1
    group = system.group
    a2 = verify_a2_system(group, system.blocks)
    rho = group_codistance(group, list(system.vertex_groups.values()))
    gens = system.block_generators()
    gap = cayley_laplacian_gap(group, gens)
    lower = kazhdan_spectral_lower(group, gens)
    constants = criteria.a2_kazhdan_constants()
    rho_limit = 1.0 - constants.intermediates["codistance_gap"]
    kappa_vertex = float(np.sqrt(2.0 * max(0.0, 1.0 - rho)))
    ok = (
        a2.ok
        and rho <= rho_limit + 1e-9
        and kappa_vertex >= 3.0 / 8.0
        and lower >= 1.0 / 8.0
    )
    report = {
        "criterion": "verify_six_points",
        "inputs": {"n": args.n, "mod": args.mod},
        "intermediates": {
            "group_order": group.order,
            "a2_axioms": a2.ok,
            "vertex_codistance": rho,
            "vertex_codistance_limit": rho_limit,
            "vertex_union_kappa": kappa_vertex,
            "cayley_gap": gap,
            "spectral_lower_bound": lower,
        },
        "bound": lower,
        "satisfied": ok,
        "notes": [],
    }
    lines = [
        f"group order: {group.order}",
        f"commutation axioms: {'PASS' if a2.ok else 'FAIL ' + str(a2.failed_axiom)}",
        f"vertex-group codistance: {rho:.6f} (limit {rho_limit:.6f})",
        f"vertex-union bound sqrt(2(1-rho)): {kappa_vertex:.6f} (needs >= 0.375)",
        f"spectral lower bound over block union: {lower:.6f} (needs >= 0.125)",
        f"all checks: {'PASS' if ok else 'FAIL'}",
    ]
    _emit(report, lines, args)
    return _report_exit(ok)


def _parse_eps_list(text: str, count: int) -> list[float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != count:
        raise InputError(f"expected {count} comma-separated values, got {len(parts)}")
    return parts


def _cmd_bound(args) -> int:
    try:
        if args.kind == "gg1":
            rep = criteria.spectral_codistance_bound(args.rho, args.k, args.lambda1)
        elif args.kind == "tn":
            rep = criteria.kazhdan_from_pairwise_eps(args.n, args.eps_single, args.delta)
        elif args.kind == "t3":
            e1, e2, e3 = _parse_eps_list(args.eps, 3)
            rep = criteria.kazhdan_from_triple_eps(e1, e2, e3, args.delta)
        elif args.kind == "t3graph":
            e1, e2, e3 = _parse_eps_list(args.eps, 3)
            rep = criteria.triangle_weight_solve(e1, e2, e3).report
        elif args.kind == "posdef":
            if args.file:
                with open(args.file, "r", encoding="utf-8") as fh:
                    data = json.load(fh)
                mat = criteria.EpsilonMatrix(np.asarray(data["eps"], dtype=float))
            elif args.n is not None and args.eps_single is not None:
                mat = criteria.EpsilonMatrix.uniform(args.n, args.eps_single)
            else:
                raise InputError("give --file or both --n and --eps")
            rep = criteria.posdef_check(mat)
        elif args.kind == "eln":
            rep = criteria.eln_kazhdan_bound(args.n, args.d, steinberg=args.steinberg)
        elif args.kind == "gamma":
            ring = (
                criteria.RingSpec.integers()
                if args.r0 == "Z"
                else criteria.RingSpec.finite_field(args.p, args.s)
            )
            rep = criteria.cover_kazhdan_bound(args.n, args.d, ring)
        elif args.kind == "kms":
            rep = criteria.kms_kazhdan_bound(args.d, args.m)
        elif args.kind == "alpha":
            if args.d is None:
                value = criteria.relative_t_alpha(args.s)
                name = "relative_t_alpha"
            else:
                value = criteria.relative_t_alpha_general(args.d, args.s)
                name = "relative_t_alpha_general"
            rep = criteria.BoundReport(
                name, {"d": args.d, "s": args.s}, bound=value, satisfied=True
            )
        else:  # pragma: no cover
            raise InputError(f"unknown bound {args.kind!r}")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    lines = [f"criterion: {rep.criterion}"]
    for key, val in rep.intermediates.items():
        lines.append(f"{key}: {val}")
    lines.append(f"bound: {rep.bound}")
    lines.append(f"satisfied: {rep.satisfied}")
    _emit(rep.to_dict(), lines, args)
    return _report_exit(rep.satisfied)


def _cmd_present(args) -> int:
    try:
        if args.kind == "kms":
            g = _load_named_graph(args.graph)
            pres = presentations.kms_basic_presentation(
                g.topology, presentations.KmsRing.parse(args.ring)
            )
        elif args.kind == "kms-mixed":
            pres = presentations.gs2_construction(args.n, args.p)
        elif args.kind == "eln-cover":
            pres = presentations.eln_cover_presentation(
                args.n, args.d, presentations.CoverRing.parse(args.ring)
            )
        else:  # pragma: no cover
            raise InputError(f"unknown presentation {args.kind!r}")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = pres.render()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        print(
            json.dumps(
                {
                    "criterion": f"present_{args.kind}",
                    "generators": len(pres.generators),
                    "relators": len(pres.relators),
                    "degree_multiset": {str(k): v for k, v in pres.degree_multiset().items()},
                    "text": text,
                },
                indent=2,
            )
        )
    else:
        print(text, end="")
    return 0


def _cmd_gs_check(args) -> int:
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                series = presentations.series_from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read series: {exc}") from exc
    else:
        if args.gens is None or args.p is None:
            raise InputError("give --file or all of --gens/--r2/--r3/--rp/--p")
        series = presentations.series_from_dict(
            {
                "gens": args.gens,
                "relations": {"2": args.r2, "3": args.r3, "p": args.rp},
                "p": args.p,
            }
        )
    result = presentations.gs_check(series, t_hint=args.t)
    report = {
        "criterion": "gs_check",
        "inputs": {"gens": series.gen_count, "coefficients": dict(series.coefficients)},
        "intermediates": result.to_dict(),
        "bound": result.h_best,
        "satisfied": result.satisfied,
        "notes": [],
    }
    lines = [
        f"minimum of H on (0,1): {result.h_best:.10g} at t = {result.best_t:.10g}",
        f"condition satisfied: {result.satisfied}",
    ]
    if result.t_hint is not None:
        lines.insert(1, f"H({result.t_hint:.10g}) = {result.h_hint:.10g}")
    _emit(report, lines, args)
    return _report_exit(result.satisfied)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kazhdan-lab",
        description="Codistances, spectral gaps, finite-group verification and "
        "Kazhdan-constant bound evaluators.",
    )
    parser.add_argument("--json", action="store_true", help="print only the JSON report")
    parser.add_argument("--out", help="also write the JSON report to this file")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers where supported")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cod = sub.add_parser("codistance", help="codistance of subspaces from a file")
    p_cod.add_argument("--subspaces", required=True)
    p_cod.add_argument("--alpha", help="comma-separated positive weights")
    p_cod.set_defaults(func=_cmd_codistance)

    p_graph = sub.add_parser("graph", help="graph spectral quantities")
    graph_sub = p_graph.add_subparsers(dest="graph_command", required=True)
    p_l1 = graph_sub.add_parser("lambda1", help="smallest positive Laplacian eigenvalue")
    p_l1.add_argument("--graph", required=True, help="K<n>|C<n>|P<n>|magic or a JSON file")
    p_l1.add_argument("--weighted", action="store_true")
    p_l1.set_defaults(func=_cmd_graph_lambda1)

    p_verify = sub.add_parser("verify", help="exact finite-instance verification")
    verify_sub = p_verify.add_subparsers(dest="verify_command", required=True)
    p_h = verify_sub.add_parser("heisenberg", help="irreducible census and orthogonality")
    p_h.add_argument("--p", type=int, required=True)
    p_h.set_defaults(func=_cmd_verify_heisenberg)
    p_six = verify_sub.add_parser("six-points", help="block subgroup system of EL_n(Z/m)")
    p_six.add_argument("--n", type=int, required=True)
    p_six.add_argument("--mod", type=int, required=True)
    p_six.set_defaults(func=_cmd_verify_six_points)

    p_bound = sub.add_parser("bound", help="closed-form bound evaluators")
    bound_sub = p_bound.add_subparsers(dest="kind", required=True)
    b_gg1 = bound_sub.add_parser("gg1")
    b_gg1.add_argument("--rho", type=float, required=True)
    b_gg1.add_argument("--k", type=int, required=True)
    b_gg1.add_argument("--lambda1", type=float, required=True)
    b_tn = bound_sub.add_parser("tn")
    b_tn.add_argument("--n", type=int, required=True)
    b_tn.add_argument("--eps", dest="eps_single", type=float, required=True)
    b_tn.add_argument("--delta", type=float)
    b_t3 = bound_sub.add_parser("t3")
    b_t3.add_argument("--eps", required=True, help="eps1,eps2,eps3")
    b_t3.add_argument("--delta", type=float)
    b_t3g = bound_sub.add_parser("t3graph")
    b_t3g.add_argument("--eps", required=True, help="eps1,eps2,eps3")
    b_pd = bound_sub.add_parser("posdef")
    b_pd.add_argument("--file")
    b_pd.add_argument("--n", type=int)
    b_pd.add_argument("--eps", dest="eps_single", type=float)
    b_eln = bound_sub.add_parser("eln")
    b_eln.add_argument("--n", type=int, required=True)
    b_eln.add_argument("--d", type=int, required=True)
    b_eln.add_argument("--steinberg", action="store_true")
    b_gamma = bound_sub.add_parser("gamma")
    b_gamma.add_argument("--n", type=int, required=True)
    b_gamma.add_argument("--d", type=int, required=True)
    b_gamma.add_argument("--r0", choices=["Z", "field"], required=True)
    b_gamma.add_argument("--p", type=int)
    b_gamma.add_argument("--s", type=int, default=1)
    b_kms = bound_sub.add_parser("kms")
    b_kms.add_argument("--d", type=int, required=True)
    b_kms.add_argument("--m", type=float, required=True)
    b_alpha = bound_sub.add_parser("alpha")
    b_alpha.add_argument("--d", type=float)
    b_alpha.add_argument("--s", type=float, required=True)
    for b in (b_gg1, b_tn, b_t3, b_t3g, b_pd, b_eln, b_gamma, b_kms, b_alpha):
        b.set_defaults(func=_cmd_bound)

    p_present = sub.add_parser("present", help="presentation emitters")
    present_sub = p_present.add_subparsers(dest="kind", required=True)
    pr_kms = present_sub.add_parser("kms")
    pr_kms.add_argument("--graph", required=True)
    pr_kms.add_argument("--ring", required=True, help="F<p> or Z<m>")
    pr_mixed = present_sub.add_parser("kms-mixed")
    pr_mixed.add_argument("--n", type=int, required=True)
    pr_mixed.add_argument("--p", type=int, required=True)
    pr_cover = present_sub.add_parser("eln-cover")
    pr_cover.add_argument("--n", type=int, required=True)
    pr_cover.add_argument("--d", type=int, required=True)
    pr_cover.add_argument("--ring", required=True, help="Z or F<p>")
    for b in (pr_kms, pr_mixed, pr_cover):
        b.set_defaults(func=_cmd_present)

    p_gs = sub.add_parser("gs", help="Golod-Shafarevich condition")
    gs_sub = p_gs.add_subparsers(dest="gs_command", required=True)
    g_check = gs_sub.add_parser("check")
    g_check.add_argument("--file")
    g_check.add_argument("--gens", type=int)
    g_check.add_argument("--r2", type=int, default=0)
    g_check.add_argument("--r3", type=int, default=0)
    g_check.add_argument("--rp", type=int, default=0)
    g_check.add_argument("--p", type=int)
    g_check.add_argument("--t", type=float, help="also evaluate H at this point")
    g_check.set_defaults(func=_cmd_gs_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"skipped: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
