import json

import pytest

from orbilef.errors import ParseError, ValidationError
from orbilef.geometry import CovariantPair
from orbilef.scene import AffinePhi, build, parse_scene, render_scene, resolve_scene_path, scene_to_dict, shipped_scenes

EX1 = json.loads(resolve_scene_path("dihedral_ex1").read_text(encoding="utf-8"))


def variant(**changes):
    doc = json.loads(json.dumps(EX1))
    for path, value in changes.items():
        node = doc
        keys = path.split("__")
        for k in keys[:-1]:
            node = node[int(k)] if k.isdigit() else node[k]
        last = keys[-1]
        node[int(last) if last.isdigit() else last] = value
    return json.dumps(doc)


def test_shipped_ex1():
    s = parse_scene("dihedral_ex1.scene")
    assert [g.label for g in s.generators] == ["u", "w"]
    assert s.phi == AffinePhi(((-1,),), (-0.5,))
    assert dict(s.zeta) == {"u": "uw", "w": "w⁻¹"}
    assert isinstance(build(s), CovariantPair)


@pytest.mark.parametrize("name", shipped_scenes())
def test_roundtrip(name):
    s = parse_scene(name)
    text = render_scene(s)
    assert parse_scene(text) == s
    assert render_scene(parse_scene(text)) == text


def test_non_orthogonal_generator():
    with pytest.raises(ValidationError, match="'w'.*not orthogonal"):
        parse_scene(variant(generators__1__matrix=[[2]]))


def test_undefined_label_in_zeta():
    with pytest.raises(ValidationError, match="zeta.u"):
        parse_scene(variant(zeta__u="ux"))
    with pytest.raises(ValidationError, match="zeta.v"):
        parse_scene(variant(zeta__v="u"))


def test_missing_zeta_image():
    doc = json.loads(variant())
    del doc["zeta"]["w"]
    with pytest.raises(ValidationError, match="no image"):
        parse_scene(json.dumps(doc))


def test_non_finite_and_shape_errors():
    with pytest.raises(ValidationError, match=r"phi.affine.translation\[0\]"):
        parse_scene(variant(phi__affine__translation=[float("nan")]))
    with pytest.raises(ValidationError, match="fundamental_domain.min"):
        parse_scene(variant(fundamental_domain__min=[0, 1]))
    with pytest.raises(ValidationError, match="dimension"):
        parse_scene(variant(dimension=0))


def test_parse_error_location():
    with pytest.raises(ParseError, match="line 3"):
        parse_scene('{\n  "mode": "geometric",\n  "dimension": ,\n}')
    with pytest.raises(ParseError):
        parse_scene("no-such-scene-anywhere")


def test_unknown_tolerance():
    with pytest.raises(ValidationError, match="tolerances.bogus"):
        parse_scene(variant(tolerances={"bogus": 1}))
    s = parse_scene(variant(tolerances={"point": 1e-10}))
    assert build(s).tol.point == 1e-10
    assert build(s, tolerance=1e-11).tol.point == 1e-11
    assert build(s, radius=5).group.radius == 5


def test_finite_scenes():
    for name in ("s3_identity", "klein_swap"):
        G, zeta = build(parse_scene(name))
        assert G.order in (6, 4)
    doc = {"mode": "finite-group", "generators": [{"label": "a", "permutation": [0, 0, 1]}], "zeta": {"a": "a"}}
    with pytest.raises(ValidationError, match="permutation"):
        parse_scene(json.dumps(doc))


def test_scene_dict_is_plain_json():
    d = scene_to_dict(parse_scene("dihedral_ex2a"))
    assert json.loads(json.dumps(d)) == d
    assert d["phi"]["piecewise1d"]["extension"] == "equivariant"
