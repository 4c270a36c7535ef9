"""Command line front end: ``orbilef <command> ...``.

Errors are reported as ``error: <ClassName>: message`` on stderr and the
process exits with the class's ``exit_code``.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from orbilef import battery, kernels
from orbilef.characters import DEFAULT_SEED, burnside_identity_check
from orbilef.errors import OrbilefError, ValidationError
from orbilef.geometry import fixed_orbit_representatives, point_stabilizer
from orbilef.lefschetz import element_words, finite_case_lefschetz, lefschetz_number, render_report
from orbilef.orientation import (
    Intertwiner,
    average,
    block_diag,
    direct_sum,
    integrality_check,
    model_operator_index,
    random_intertwiner,
    rep_from_generators,
)
from orbilef.scene import build, parse_scene, resolve_scene_path, scene_to_dict


def _emit(data, text, fmt):
    if fmt == "structured":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text)


def cmd_lefschetz(args):
    scene = parse_scene(resolve_scene_path(args.scene))
    echo = scene_to_dict(scene)
    if scene.mode == "finite-group":
        G, zeta = build(scene)
        report, _ = finite_case_lefschetz(G, zeta, args.seed, echo)
    else:
        pair = build(scene, radius=args.radius, tolerance=args.tolerance)
        report = lefschetz_number(pair, echo, grid=args.grid, seed=args.seed)
    sys.stdout.write(render_report(report, args.format))
    return 0


def _stab_entry(G, p):
    S = point_stabilizer(G, np.asarray(p, dtype=float))
    return {"point": [float(v) + 0.0 for v in np.round(p, 12)], "stabilizer": [g.label for g in S.elements]}


def cmd_group(args):
    scene = parse_scene(resolve_scene_path(args.scene))
    if scene.mode == "finite-group":
        G, zeta = build(scene)
        words = element_words(G)
        data = {
            "order": G.order,
            "classes": [[words[g] for g in c] for c in G.classes],
            "zeta": {words[g]: words[int(zeta.image[g])] for g in range(G.order)},
            "twisted_classes": burnside_identity_check(G, zeta, args.seed)[2],
        }
        lines = [f"order {G.order}", f"conjugacy classes {len(G.classes)}"]
        lines += ["  {" + ", ".join(c) + "}" for c in data["classes"]]
        lines.append(f"twisted classes {data['twisted_classes']}")
        _emit(data, "\n".join(lines) + "\n", args.format)
        return 0
    pair = build(scene, radius=args.radius, tolerance=args.tolerance)
    G = pair.group
    corners = [np.array(c) for c in itertools.product(*zip(G.domain_lo, G.domain_hi))]
    points = corners + list(fixed_orbit_representatives(pair, args.grid))
    seen = set()
    stabs = []
    for p in points:
        key = tuple(np.round(p, 9))
        if key not in seen:
            seen.add(key)
            stabs.append(_stab_entry(G, p))
    data = {"radius": G.radius, "elements": [g.label for g in G.elements], "stabilizers": stabs}
    lines = [f"radius {G.radius:g}: {len(G.elements)} elements"]
    lines += ["  " + g for g in data["elements"]]
    for s in stabs:
        lines.append(f"stabilizer of ({', '.join(f'{v:.12g}' for v in s['point'])}): {{{', '.join(s['stabilizer'])}}}")
    _emit(data, "\n".join(lines) + "\n", args.format)
    return 0


def parse_rep(G, spec):
    """``trivial``, ``sign``, ``natural``, ``permutation``, sums joined by ``+``,
    or a JSON object mapping generator labels to matrices."""
    spec = spec.strip()
    if spec.startswith("{"):
        try:
            images = {k: np.array(v, dtype=float) for k, v in json.loads(spec).items()}
        except (json.JSONDecodeError, ValueError, AttributeError) as e:
            raise ValidationError(f"--rep: {e}") from None
        return rep_from_generators(G, images)
    parts = [rep_from_generators(G, battery.generator_matrices(G, name.strip())) for name in spec.split("+")]
    return parts[0] if len(parts) == 1 else direct_sum(*parts)


def parse_intertwiner(rho, spec, seed):
    """``scalar:<c>``, ``diag:<c1>,<c2>,...``, ``random``, or a JSON matrix."""
    n = rho.dim
    spec = spec.strip()
    if spec == "random":
        return random_intertwiner(rho, np.random.default_rng(seed))
    try:
        if spec.startswith("scalar:"):
            return float(spec[7:]) * np.eye(n)
        if spec.startswith("diag:"):
            return block_diag(*[[[float(c)]] for c in spec[5:].split(",")])
        return np.array(json.loads(spec), dtype=float)
    except ValueError as e:
        raise ValidationError(f"--intertwiner: {e}") from None


def cmd_character(args):
    G = battery.group_from_spec(args.group)
    rho = parse_rep(G, args.rep)
    A = Intertwiner.for_rep(rho, parse_intertwiner(rho, args.intertwiner, args.seed))
    chi, mults, err = integrality_check(rho, A, args.seed)
    words = element_words(G)
    reps = [words[c[0]] for c in G.classes]
    values = [int(round(v.real)) for v in chi.values]
    avg = average(chi)
    data = {
        "group": args.group,
        "classes": reps,
        "character": values,
        "multiplicities": mults,
        "reconstruction_error": err,
        "average": {"num": avg.numerator, "den": avg.denominator},
    }
    text = (
        f"classes: {' '.join(reps)}\n"
        f"character: {' '.join(f'{v:+d}' for v in values)}\n"
        f"multiplicities: {' '.join(str(m) for m in mults)}\n"
        f"average: {avg}\n"
    )
    _emit(data, text, args.format)
    return 0


def cmd_burnside(args):
    G = battery.group_from_spec(args.group)
    zeta = battery.automorphism_from_spec(G, args.zeta)
    lhs, rhs, count = burnside_identity_check(G, zeta, args.seed)
    data = {"dual_fixed_count": lhs, "average_twisted_centralizer": str(rhs), "twisted_class_count": count}
    _emit(data, f"{lhs} {rhs} {count}\n", args.format)
    if not lhs == rhs == count:
        raise ValidationError(f"identity fails: {lhs} {rhs} {count}")
    return 0


def cmd_model_index(args):
    r = model_operator_index(args.truncation)
    a, b = r.cokernel_basis
    basis = " + ".join(f"{'' if c == 1 else c}e{i}" for c, i in ((a, "₀"), (b, "₁")) if c)
    data = {
        "truncation": r.truncation,
        "kernel_dim": r.kernel_dim,
        "cokernel_dim": r.cokernel_dim,
        "index": r.index,
        "cokernel_basis": {"e0": a, "e1": b},
        "symmetry_eigenvalue": r.symmetry_eigenvalue,
    }
    text = (
        f"truncation {r.truncation}: kernel {r.kernel_dim}, cokernel {r.cokernel_dim}\n"
        f"index {r.index}\n"
        f"cokernel {basis}\n"
        f"symmetry acts on cokernel by {r.symmetry_eigenvalue:+d}\n"
    )
    _emit(data, text, args.format)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--radius", type=float, default=None, help="override the enumeration radius")
    common.add_argument("--tolerance", type=float, default=None, help="override the point tolerance")
    common.add_argument("--grid", type=int, default=None, help="root-search grid size (piecewise maps)")

    p = argparse.ArgumentParser(prog="orbilef", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="store_true")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("lefschetz", parents=[common], help="Lefschetz number of a scene")
    s.add_argument("scene")
    s.set_defaults(func=cmd_lefschetz)

    s = sub.add_parser("group", parents=[common], help="enumerated elements and stabilizers")
    s.add_argument("scene")
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("character", parents=[common], help="orientation character and its integrality")
    s.add_argument("--group", required=True)
    s.add_argument("--rep", required=True)
    s.add_argument("--intertwiner", required=True)
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("burnside", parents=[common], help="fixed irreducibles vs twisted classes")
    s.add_argument("--group", required=True)
    s.add_argument("--zeta", default="id")
    s.set_defaults(func=cmd_burnside)

    s = sub.add_parser("model-index", parents=[common], help="index of the truncated model operator")
    s.add_argument("--truncation", type=int, required=True)
    s.set_defaults(func=cmd_model_index)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        from orbilef import __version__

        print(f"orbilef {__version__} ({kernels.BACKEND} kernels)")
        return 0
    if args.command is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except OrbilefError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
