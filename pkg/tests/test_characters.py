from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from orbilef import battery
from orbilef.characters import (
    ClassFunction,
    burnside_identity_check,
    character_table,
    decompose,
    dual_fixed_count,
    inner_product,
    integer_multiplicities,
    reconstruct,
)
from orbilef.errors import GroupMismatch, NonIntegralMultiplicity
from orbilef.groups import identity_automorphism, inner_automorphism

BATTERY = battery.character_battery()


def test_inner_product_basics():
    G = battery.symmetric(3)
    one = ClassFunction.constant(G, 1)
    assert inner_product(one, one) == pytest.approx(1)
    assert inner_product(ClassFunction.regular(G), one) == pytest.approx(1)
    t = character_table(G)
    assert abs(inner_product(t.irreducibles[1], t.irreducibles[2])) < 1e-6
    with pytest.raises(GroupMismatch):
        inner_product(one, ClassFunction.constant(battery.cyclic(6), 1))


def test_trivial_group_table():
    t = character_table(battery.cyclic(1))
    assert t.degrees == [1]
    assert t.irreducibles[0].values.tolist() == [1]


def test_cyclic_four_values():
    t = character_table(battery.cyclic(4))
    vals = t.matrix()
    assert t.degrees == [1, 1, 1, 1]
    units = np.array([1, 1j, -1, -1j])
    assert np.all(np.min(np.abs(vals.reshape(-1, 1) - units), axis=1) < 1e-9)
    assert np.allclose(vals[0], 1)


def test_s3_degrees():
    assert character_table(battery.symmetric(3)).degrees == [1, 1, 2]


@pytest.mark.parametrize("name,G", BATTERY, ids=[n for n, _ in BATTERY])
def test_table_invariants(name, G):
    t = character_table(G)
    X = t.matrix()
    sizes = np.array([len(c) for c in G.classes])
    gram = (X * sizes) @ X.conj().T / G.order
    assert np.max(np.abs(gram - np.eye(len(X)))) < 1e-6
    assert len(t.irreducibles) == len(G.classes)
    assert sum(d * d for d in t.degrees) == G.order
    assert t.degrees == sorted(t.degrees)
    assert np.allclose(X[0], 1)
    # column orthogonality as an extra check
    col = X.conj().T @ X
    assert np.allclose(col, np.diag(G.order / sizes), atol=1e-6)


def test_table_is_deterministic_and_seed_independent_up_to_order():
    G = battery.dihedral(12)
    a = character_table(G, seed=1).matrix()
    b = character_table(G, seed=2).matrix()
    assert np.allclose(a, b, atol=1e-9)


@pytest.mark.parametrize("name,G", BATTERY[:6] + BATTERY[-4:], ids=lambda x: x if isinstance(x, str) else "")
def test_decompose_trivial_and_regular(name, G):
    t = character_table(G)
    triv = integer_multiplicities(ClassFunction.constant(G, 1), t)
    assert triv == [1] + [0] * (len(t.degrees) - 1)
    assert integer_multiplicities(ClassFunction.regular(G), t) == t.degrees


def test_reconstruct_roundtrip():
    G = battery.symmetric(4)
    t = character_table(G)
    rng = np.random.default_rng(3)
    m = rng.integers(-3, 4, len(t.degrees)).tolist()
    chi = reconstruct(m, t)
    assert integer_multiplicities(chi, t) == m
    back = [c for c, _ in decompose(chi, t)]
    assert np.allclose(back, m, atol=1e-9)


def test_sign_character_of_order_two():
    G = battery.cyclic(2)
    chi = ClassFunction.from_elements(G, [-1, 1])
    assert integer_multiplicities(chi, character_table(G)) == [0, -1]


def test_non_integral_refused():
    G = battery.cyclic(2)
    with pytest.raises(NonIntegralMultiplicity):
        integer_multiplicities(ClassFunction.from_elements(G, [1, 0]), character_table(G))


def test_dual_fixed_count_examples():
    C3 = battery.cyclic(3)
    assert dual_fixed_count(C3, battery.automorphism_from_spec(C3, "inv")) == 1
    V = battery.klein_four()
    assert dual_fixed_count(V, battery.automorphism_from_spec(V, "map:a=b,b=a")) == 2
    S4 = battery.symmetric(4)
    assert dual_fixed_count(S4, identity_automorphism(S4)) == 5


def test_burnside_examples():
    assert burnside_identity_check(battery.cyclic(1), identity_automorphism(battery.cyclic(1))) == (1, 1, 1)
    C2 = battery.cyclic(2)
    assert burnside_identity_check(C2, identity_automorphism(C2)) == (2, 2, 2)
    C3 = battery.cyclic(3)
    lhs, rhs, count = burnside_identity_check(C3, battery.automorphism_from_spec(C3, "inv"))
    assert (lhs, rhs, count) == (1, Fraction(1), 1)


ORACLE = {name: (elems, zeta) for name, elems, zeta in oracles.finite_battery()}


@pytest.mark.parametrize("name,G,zeta", battery.acceptance_battery(), ids=lambda x: x if isinstance(x, str) else "")
def test_identity_against_oracle(name, G, zeta):
    elems, ozeta = ORACLE[name]
    expected = len(oracles.twisted_classes(elems, ozeta))
    assert oracles.twisted_centralizer_total(elems, ozeta) == expected * len(elems)
    assert oracles.stable_class_count(elems, ozeta) == expected
    if name.startswith("C"):
        n, k = int(name.split()[0][1:]), int(name.split(":")[1])
        assert oracles.cyclic_twisted_count(n, k) == expected
    assert burnside_identity_check(G, zeta) == (expected, Fraction(expected), expected)


@given(st.sampled_from(["D8", "D10", "D12", "S3", "Q8", "S4"]), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_inner_twist_invariance_of_dual_count(spec, pick):
    G = battery.group_from_spec(spec)
    outer = {"D8": "map:r=r,s=rs", "D10": "map:r=rr,s=s", "D12": "map:r=rrrrr,s=s"}.get(spec, "id")
    zeta = battery.automorphism_from_spec(G, outer)
    twisted = inner_automorphism(G, pick % G.order).compose(zeta)
    assert dual_fixed_count(G, twisted) == dual_fixed_count(G, zeta)
