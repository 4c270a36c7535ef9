"""Scene files: a JSON document describing a group action and a covariant pair.

Geometric scenes::

    {"name": "...", "mode": "geometric", "dimension": 1,
     "generators": [{"label": "u", "matrix": [[-1]], "translation": [0]}, ...],
     "fundamental_domain": {"min": [0], "max": [0.5]},
     "enumeration_radius": 3,
     "phi": {"affine": {"matrix": [[-1]], "translation": [-0.5]}}
         or {"piecewise1d": {"knots": [{"x": 0, "value": 0, "derivative": 0}, ...],
                             "extension": "equivariant"}},
     "zeta": {"u": "uw", "w": "w⁻¹"},
     "tolerances": {"point": 1e-9}}

Finite-group scenes use ``"mode": "finite-group"`` with either permutation
generators (``{"label": "s", "permutation": [1, 0, 2]}``) and a ``zeta`` map
from labels to words, or a named ``"group"`` spec and a ``zeta`` spec string.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path

import numpy as np

from orbilef import battery
from orbilef.errors import ParseError, ValidationError
from orbilef.geometry import AffineMap, CovariantPair, GeometricGroup, Knot, Piecewise1D, Tolerances, isometry_from
from orbilef.groups import automorphism_from_generator_images, group_from_permutation_generators

SCENE_SUFFIX = ".scene"
_TOL_FIELDS = {f.name for f in fields(Tolerances)}


@dataclass(frozen=True)
class Generator:
    label: str
    matrix: tuple = None
    translation: tuple = None
    permutation: tuple = None


@dataclass(frozen=True)
class AffinePhi:
    matrix: tuple
    translation: tuple


@dataclass(frozen=True)
class PiecewisePhi:
    knots: tuple  # (x, value, derivative) triples
    extension: str = "equivariant"


@dataclass(frozen=True)
class SceneFile:
    mode: str
    name: str = ""
    dimension: int = 0
    generators: tuple = ()
    domain_min: tuple = ()
    domain_max: tuple = ()
    radius: float = None
    phi: object = None
    zeta: tuple = ()  # (label, word) pairs, or a single spec string for named groups
    group: str = None
    tolerances: tuple = ()


def _tuple2(m):
    return tuple(tuple(row) for row in m)


def _num(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{path}: expected a finite number, got {v!r}")
    return v


def _vec(v, n, path):
    if not isinstance(v, list) or len(v) != n:
        raise ValidationError(f"{path}: expected a list of {n} numbers")
    return tuple(_num(x, f"{path}[{i}]") for i, x in enumerate(v))


def _mat(m, n, path):
    if not isinstance(m, list) or len(m) != n:
        raise ValidationError(f"{path}: expected {n} rows")
    return tuple(_vec(row, n, f"{path}[{i}]") for i, row in enumerate(m))


def _req(d, key, path):
    if key not in d:
        raise ValidationError(f"{path}.{key}: missing" if path else f"{key}: missing")
    return d[key]


def parse_scene(source):
    """Parse and validate a scene from a path or from JSON text."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = resolve_scene_path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("scene must be a JSON object")
    mode = doc.get("mode", "geometric")
    if mode == "geometric":
        scene = _parse_geometric(doc)
    elif mode == "finite-group":
        scene = _parse_finite(doc)
    else:
        raise ValidationError(f"mode: unknown mode {mode!r}")
    tols = doc.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ValidationError("tolerances: expected an object")
    for k, v in tols.items():
        if k not in _TOL_FIELDS:
            raise ValidationError(f"tolerances.{k}: unknown tolerance")
        _num(v, f"tolerances.{k}")
    scene = replace(scene, tolerances=tuple(tols.items()))
    build(scene)  # full semantic validation
    return scene


def _parse_geometric(doc):
    n = _req(doc, "dimension", "")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("dimension: expected a positive integer")
    gens = []
    raw = _req(doc, "generators", "")
    if not isinstance(raw, list):
        raise ValidationError("generators: expected a list")
    for i, g in enumerate(raw):
        path = f"generators[{i}]"
        label = _req(g, "label", path)
        if not isinstance(label, str) or not label:
            raise ValidationError(f"{path}.label: expected a non-empty string")
        Q = _mat(_req(g, "matrix", path), n, f"{path}.matrix")
        t = _vec(_req(g, "translation", path), n, f"{path}.translation")
        if np.max(np.abs(np.array(Q).T @ np.array(Q) - np.eye(n))) >= 1e-9:
            raise ValidationError(f"{path}.matrix: generator {label!r} is not orthogonal")
        gens.append(Generator(label, Q, t))
    labels = [g.label for g in gens]
    if len(set(labels)) != len(labels):
        raise ValidationError("generators: duplicate labels")
    fd = _req(doc, "fundamental_domain", "")
    lo = _vec(_req(fd, "min", "fundamental_domain"), n, "fundamental_domain.min")
    hi = _vec(_req(fd, "max", "fundamental_domain"), n, "fundamental_domain.max")
    radius = _num(_req(doc, "enumeration_radius", ""), "enumeration_radius")
    phi_doc = _req(doc, "phi", "")
    if "affine" in phi_doc:
        a = phi_doc["affine"]
        phi = AffinePhi(_mat(_req(a, "matrix", "phi.affine"), n, "phi.affine.matrix"),
                        _vec(_req(a, "translation", "phi.affine"), n, "phi.affine.translation"))
    elif "piecewise1d" in phi_doc:
        p = phi_doc["piecewise1d"]
        knots = []
        for i, k in enumerate(_req(p, "knots", "phi.piecewise1d")):
            path = f"phi.piecewise1d.knots[{i}]"
            knots.append(tuple(_num(_req(k, key, path), f"{path}.{key}") for key in ("x", "value", "derivative")))
        phi = PiecewisePhi(tuple(knots), p.get("extension", "equivariant"))
    else:
        raise ValidationError("phi: expected 'affine' or 'piecewise1d'")
    zeta = _parse_zeta_map(_req(doc, "zeta", ""), labels)
    return SceneFile("geometric", doc.get("name", ""), n, tuple(gens), lo, hi, radius, phi, zeta)


def _parse_zeta_map(z, labels):
    if not isinstance(z, dict):
        raise ValidationError("zeta: expected an object mapping labels to words")
    for lbl, word in z.items():
        if lbl not in labels:
            raise ValidationError(f"zeta.{lbl}: unknown generator label")
        if not isinstance(word, str):
            raise ValidationError(f"zeta.{lbl}: expected a word string")
        try:
            battery.parse_word(word, labels)
        except ValidationError as e:
            raise ValidationError(f"zeta.{lbl}: {e}") from None
    return tuple(z.items())


def _parse_finite(doc):
    name = doc.get("name", "")
    if "group" in doc:
        spec = doc["group"]
        zeta = doc.get("zeta", "id")
        if not isinstance(zeta, str):
            raise ValidationError("zeta: expected an automorphism spec string for a named group")
        return SceneFile("finite-group", name, group=spec, zeta=zeta)
    gens = []
    for i, g in enumerate(_req(doc, "generators", "")):
        path = f"generators[{i}]"
        perm = _req(g, "permutation", path)
        if not isinstance(perm, list) or sorted(perm) != list(range(len(perm))):
            raise ValidationError(f"{path}.permutation: not a permutation")
        gens.append(Generator(_req(g, "label", path), permutation=tuple(perm)))
    if not gens:
        raise ValidationError("generators: at least one permutation is required")
    zeta = _parse_zeta_map(_req(doc, "zeta", ""), [g.label for g in gens])
    return SceneFile("finite-group", name, generators=tuple(gens), zeta=zeta)


def scene_to_dict(scene):
    d = {"mode": scene.mode}
    if scene.name:
        d["name"] = scene.name
    if scene.mode == "geometric":
        d["dimension"] = scene.dimension
        d["generators"] = [
            {"label": g.label, "matrix": [list(r) for r in g.matrix], "translation": list(g.translation)}
            for g in scene.generators
        ]
        d["fundamental_domain"] = {"min": list(scene.domain_min), "max": list(scene.domain_max)}
        d["enumeration_radius"] = scene.radius
        if isinstance(scene.phi, AffinePhi):
            d["phi"] = {"affine": {"matrix": [list(r) for r in scene.phi.matrix], "translation": list(scene.phi.translation)}}
        else:
            d["phi"] = {"piecewise1d": {
                "knots": [{"x": x, "value": v, "derivative": dv} for x, v, dv in scene.phi.knots],
                "extension": scene.phi.extension,
            }}
        d["zeta"] = dict(scene.zeta)
    elif scene.group is not None:
        d["group"] = scene.group
        d["zeta"] = scene.zeta
    else:
        d["generators"] = [{"label": g.label, "permutation": list(g.permutation)} for g in scene.generators]
        d["zeta"] = dict(scene.zeta)
    if scene.tolerances:
        d["tolerances"] = dict(scene.tolerances)
    return d


def render_scene(scene):
    return json.dumps(scene_to_dict(scene), indent=2, ensure_ascii=False) + "\n"


def build(scene, radius=None, tolerance=None):
    """Instantiate the scene: a :class:`CovariantPair`, or ``(group, zeta)`` for finite scenes."""
    if scene.mode == "finite-group":
        if scene.group is not None:
            G = battery.group_from_spec(scene.group)
            return G, battery.automorphism_from_spec(G, scene.zeta)
        G = group_from_permutation_generators(
            [list(g.permutation) for g in scene.generators], labels=[g.label for g in scene.generators]
        )
        images = {lbl: battery.evaluate_word(G, word) for lbl, word in scene.zeta}
        return G, automorphism_from_generator_images(G, images)
    tol = Tolerances().override(**dict(scene.tolerances))
    if tolerance is not None:
        tol = tol.override(point=tolerance)
    gens = {g.label: isometry_from(g.matrix, g.translation) for g in scene.generators}
    G = GeometricGroup(scene.dimension, gens, scene.domain_min, scene.domain_max,
                       radius if radius is not None else scene.radius, tol)
    if isinstance(scene.phi, AffinePhi):
        phi = AffineMap(np.array(scene.phi.matrix, dtype=float), np.array(scene.phi.translation, dtype=float))
    else:
        phi = Piecewise1D(tuple(Knot(*k) for k in scene.phi.knots), scene.phi.extension)
    return CovariantPair(G, phi, dict(scene.zeta))


def shipped_scenes():
    root = resources.files("orbilef") / "scenes"
    return sorted(p.name[: -len(SCENE_SUFFIX)] for p in root.iterdir() if p.name.endswith(SCENE_SUFFIX))


def resolve_scene_path(source):
    p = Path(source)
    if p.exists():
        return p
    name = p.name[: -len(SCENE_SUFFIX)] if p.name.endswith(SCENE_SUFFIX) else p.name
    candidate = resources.files("orbilef") / "scenes" / (name + SCENE_SUFFIX)
    if candidate.is_file():
        return Path(str(candidate))
    raise ParseError(f"no such scene file: {source}")
