import json
from fractions import Fraction

import numpy as np
import pytest

import oracles
from orbilef import battery
from orbilef.geometry import AffineMap, CovariantPair, GeometricGroup, Piecewise1D, isometry_from
from orbilef.groups import identity_automorphism
from orbilef.lefschetz import (
    LefschetzReport,
    finite_case_lefschetz,
    lefschetz_number,
    local_contribution,
    render_report,
)
from orbilef.scene import build, parse_scene


def run(name, **kw):
    scene = parse_scene(name)
    return lefschetz_number(build(scene), {"name": name}, **kw)


def test_ex1_orbit():
    r = run("dihedral_ex1")
    (o,) = r.orbits
    assert o.point == [0.25] and o.stabilizer == ["e"]
    (t,) = o.terms
    assert t.jacobian == [[-1.0]] and t.intertwiner == [[2.0]]
    assert t.character == [1] and o.contribution == 1
    assert r.total == 1


def test_ex2_orbits():
    r = run("dihedral_ex2a")
    assert [o.point for o in r.orbits] == [[0.0], [0.25], [0.5]]
    assert [o.contribution for o in r.orbits] == [2, -1, 2]
    zero = r.orbits[0]
    assert [t.representative for t in zero.terms] == ["e", "u"]
    assert all(t.character == [1, 1] and t.average == 1 for t in zero.terms)
    assert r.total == 3


def test_large_derivative_variant():
    r = run("dihedral_ex2b")
    assert [o.contribution for o in r.orbits] == [1, 1, 1]
    e_term, u_term = r.orbits[0].terms
    assert e_term.character == [-1, 1] and e_term.average == 0
    assert u_term.character == [1, 1] and u_term.average == 1
    assert r.total == 3


def test_contraction_and_translation():
    assert run("trivial_contraction").total == 1
    r = run("translation_shift")
    assert r.orbits == [] and r.total == 0
    assert r.diagnostics["radius_certificate"]["stable"]


def test_product_scene_multiplies():
    # the plane scene is the product of two copies of example 1
    assert run("dihedral_ex1_squared").total == run("dihedral_ex1").total ** 2


def test_free_action_matches_classical_count():
    pair = build(parse_scene("circle_degree_one"))
    r = lefschetz_number(pair)

    def lift(x):
        return float(pair.evaluate(np.array([x]))[0][0])

    def deriv(x):
        return float(pair.derivative(np.array([x]))[0, 0])

    classical, roots = oracles.circle_lefschetz(lift, deriv, samples=512)
    assert len(roots) == len(r.orbits) == 2
    assert r.total == classical == 0


@pytest.mark.parametrize("knots,expected", [
    (((0.0, 0.0, 0.0), (0.25, 0.25, 3.0), (0.5, 0.5, 0.0)), [2, -1, 2]),
    (((0.0, 0.0, 3.0), (0.25, 0.25, 0.0), (0.5, 0.5, 3.0)), [1, 1, 1]),
])
def test_conjugation_independence(knots, expected):
    gens = {"u": isometry_from([[-1]], [0]), "w": isometry_from([[1]], [1])}
    # [1/2, 1] is also a fundamental domain; representatives become 1/2, 3/4, 1
    G = GeometricGroup(1, gens, [0.5], [1.0], 3.0)
    r = lefschetz_number(CovariantPair(G, Piecewise1D(knots), {"u": "u", "w": "w"}))
    assert [o.point for o in r.orbits] == [[0.5], [0.75], [1.0]]
    # 1/2 and 1 are the images of 1/2 and 0, 3/4 the image of 1/4
    assert [o.contribution for o in r.orbits] == [expected[2], expected[1], expected[0]]
    assert r.total == 3


def test_only_signs_matter():
    G = battery.cyclic(2)
    linear = [np.eye(1), -np.eye(1)]
    act = np.array([[0], [0]], dtype=np.int32)
    for J in (0.0, 0.5, 0.99):
        _, c = local_contribution(G, linear, ["e"], act, [np.array([[J]])], ["e", "u"])
        assert c == 1
    for J in (1.01, 3.0, 50.0):
        _, c = local_contribution(G, linear, ["e"], act, [np.array([[J]])], ["e", "u"])
        assert c == 0


@pytest.mark.parametrize("name,G,zeta", battery.acceptance_battery(), ids=lambda x: x if isinstance(x, str) else "")
def test_finite_case(name, G, zeta):
    report, checks = finite_case_lefschetz(G, zeta)
    assert report.total == checks["twisted_class_count"] == checks["dual_fixed_count"]
    assert sum(len(t.orbit) for t in report.orbits[0].terms) == G.order
    assert all(t.average == 1 for t in report.orbits[0].terms)


def test_finite_small_cases():
    C1 = battery.cyclic(1)
    assert finite_case_lefschetz(C1, identity_automorphism(C1))[0].total == 1
    C2 = battery.cyclic(2)
    assert finite_case_lefschetz(C2, identity_automorphism(C2))[0].total == 2
    C3 = battery.cyclic(3)
    assert finite_case_lefschetz(C3, battery.automorphism_from_spec(C3, "inv"))[0].total == 1


@pytest.mark.parametrize("name", ["dihedral_ex2a", "s3_identity"])
def test_report_roundtrip(name):
    scene = parse_scene(name)
    built = build(scene)
    if scene.mode == "geometric":
        r = lefschetz_number(built, {"name": name})
    else:
        r = finite_case_lefschetz(*built, scene={"name": name})[0]
    text = render_report(r, "structured")
    back = LefschetzReport.from_dict(json.loads(text))
    assert render_report(back, "structured") == text
    assert back.total == r.total and isinstance(back.total, Fraction)


def test_text_report():
    text = render_report(run("dihedral_ex1"))
    assert "fixed orbits: 1" in text and text.rstrip().endswith("orbit set stable")
    assert "Lefschetz number: 1" in text
    S3 = battery.symmetric(3)
    text = render_report(finite_case_lefschetz(S3, identity_automorphism(S3))[0])
    assert "twisted classes 3" in text
    with pytest.raises(ValueError):
        render_report(run("dihedral_ex1"), "xml")


def test_affine_plane_contraction():
    G = GeometricGroup(2, {}, [-1, -1], [1, 1], 1.0)
    B = np.array([[0.2, -0.5], [0.5, 0.2]])
    r = lefschetz_number(CovariantPair(G, AffineMap(B, [0.1, 0.0]), {}))
    assert r.total == 1
