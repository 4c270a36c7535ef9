import json

import pytest

from orbilef.cli import main
from orbilef.scene import resolve_scene_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lefschetz_ex1(capsys):
    code, out, _ = run(capsys, "lefschetz", "dihedral_ex1.scene")
    assert code == 0
    assert "Lefschetz number: 1\n" in out


def test_lefschetz_by_path_structured(capsys):
    path = str(resolve_scene_path("dihedral_ex2b"))
    code, out, _ = run(capsys, "lefschetz", path, "--format", "structured")
    assert code == 0
    d = json.loads(out)
    assert d["total"] == {"num": 3, "den": 1}
    assert [o["contribution"]["num"] for o in d["orbits"]] == [1, 1, 1]


def test_lefschetz_radius_override(capsys):
    code, out, _ = run(capsys, "lefschetz", "dihedral_ex2a", "--radius", "5", "--format", "structured")
    assert code == 0
    assert json.loads(out)["diagnostics"]["radius_certificate"]["radius"] == 5


def test_burnside(capsys):
    code, out, _ = run(capsys, "burnside", "--group", "S3", "--zeta", "id")
    assert (code, out) == (0, "3 3 3\n")
    code, out, _ = run(capsys, "burnside", "--group", "C3", "--zeta", "inv", "--format", "structured")
    assert json.loads(out)["twisted_class_count"] == 1


def test_model_index(capsys):
    code, out, _ = run(capsys, "model-index", "--truncation", "4")
    assert code == 0
    assert "index -1" in out and "cokernel e₀ + e₁" in out


def test_character(capsys):
    code, out, _ = run(capsys, "character", "--group", "C2", "--rep", "sign", "--intertwiner", "scalar:-1")
    assert code == 0
    assert "character: -1 +1" in out and "average: 0" in out
    code, out, _ = run(capsys, "character", "--group", "S3", "--rep", "sign:s+natural",
                       "--intertwiner", "diag:-1,2,2", "--format", "structured")
    assert code == 0
    d = json.loads(out)
    assert d["reconstruction_error"] < 1e-9
    code, out, _ = run(capsys, "character", "--group", "C4", "--rep", '{"a": [[0, -1], [1, 0]]}',
                       "--intertwiner", "random")
    assert code == 0


def test_group(capsys):
    code, out, _ = run(capsys, "group", "dihedral_ex1")
    assert code == 0 and "14 elements" in out
    assert "stabilizer of (0): {e, u}" in out
    code, out, _ = run(capsys, "group", "q8_identity", "--format", "structured")
    assert json.loads(out)["twisted_classes"] == 5


@pytest.mark.parametrize("argv,code,name", [
    (["lefschetz", "missing_scene"], 2, "ParseError"),
    (["burnside", "--group", "S3", "--zeta", "inv"], 3, "ValidationError"),
    (["character", "--group", "C3", "--rep", "sign", "--intertwiner", "scalar:1"], 3, "ValidationError"),
    (["character", "--group", "C4", "--rep", "natural", "--intertwiner", "diag:1,2"], 5, "NotIntertwiner"),
    (["burnside", "--group", "S3", "--zeta", "map:s=t,t=t"], 4, "NotAHomomorphism"),
])
def test_errors(capsys, argv, code, name):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith(f"error: {name}:")


def test_no_command(capsys):
    assert main([]) == 2
