import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from orbilef import battery
from orbilef.errors import NotAHomomorphism, NotBijective, NotInvariant, ValidationError
from orbilef.groups import (
    FiniteGroup,
    automorphism_from_generator_images,
    conjugacy_classes,
    group_from_permutation_generators,
    identity_automorphism,
    inner_automorphism,
    twisted_centralizer,
    twisted_class_count,
    twisted_orbits,
)


def elems_of(G):
    return [tuple(p) for p in G.permutations.tolist()]


def test_trivial_from_no_generators():
    G = group_from_permutation_generators([], npoints=3)
    assert G.order == 1
    assert conjugacy_classes(G) == [[0]]


def test_zero_points_rejected():
    with pytest.raises(ValidationError):
        group_from_permutation_generators([], npoints=0)


def test_s3_from_transposition_and_cycle():
    G = group_from_permutation_generators([[1, 0, 2], [1, 2, 0]])
    assert G.order == 6
    assert sorted(len(c) for c in conjugacy_classes(G)) == [1, 2, 3]
    assert G.identity == 0
    assert [lbl for lbl, _ in G.generator_labels] == ["g0", "g1"]


def test_cyclic_four_is_abelian():
    G = group_from_permutation_generators([[1, 2, 3, 0]])
    assert G.order == 4 and G.is_abelian()
    assert len(conjugacy_classes(G)) == 4


def test_table_matches_composition():
    G = battery.dihedral(10)
    E = elems_of(G)
    for a in range(G.order):
        for b in range(G.order):
            assert E[G.mul[a, b]] == oracles.compose(E[a], E[b])


def test_bad_tables_rejected():
    with pytest.raises(ValidationError):
        FiniteGroup(np.array([[0, 1], [1, 1]]))
    with pytest.raises(ValidationError):
        FiniteGroup(np.array([[1, 0], [0, 1]]))
    # a Latin square with identity that is not associative
    loop = np.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(ValidationError, match="associative"):
        FiniteGroup(loop)


def test_inversion_of_cyclic_four():
    G = battery.cyclic(4)
    a = G.generator("a")
    z = automorphism_from_generator_images(G, {"a": int(G.inv[a])})
    assert z.order() == 2
    assert np.array_equal(z.image, G.inv)


def test_identity_images_give_identity():
    G = battery.symmetric(3)
    z = automorphism_from_generator_images(G, {lbl: g for lbl, g in G.generator_labels})
    assert z.is_identity()


def test_klein_swap():
    V = battery.klein_four()
    z = automorphism_from_generator_images(V, {"a": V.generator("b"), "b": V.generator("a")})
    assert z.order() == 2
    for g in range(4):
        for h in range(4):
            assert z(V.mul[g, h]) == V.mul[z(g), z(h)]


def test_inconsistent_images():
    G = battery.cyclic(4)
    S = battery.symmetric(3)
    with pytest.raises(NotAHomomorphism):
        # s has order 2 but t would need to go to an element of order 3
        automorphism_from_generator_images(S, {"s": S.generator("t"), "t": S.generator("t")})
    with pytest.raises(NotBijective):
        automorphism_from_generator_images(G, {"a": G.power(G.generator("a"), 2)})


def test_compose_with_inverse_is_identity():
    D = battery.dihedral(12)
    z = battery.automorphism_from_spec(D, "map:r=rrrrr,s=rs")
    assert z.compose(z.inverse()).is_identity()
    assert z.inverse().compose(z).is_identity()


def test_identity_twist_gives_conjugacy_classes():
    G = battery.symmetric(4)
    dec = twisted_orbits(G, range(G.order), range(G.order), identity_automorphism(G))
    assert sorted(map(sorted, dec.orbits)) == sorted(map(sorted, conjugacy_classes(G)))
    # stabilizers are centralizers
    for rep, (H, emb) in zip(dec.representatives, dec.stabilizers):
        cent = [h for h in range(G.order) if G.mul[h, rep] == G.mul[rep, h]]
        assert sorted(emb.tolist()) == cent


def test_order_two_twisted_orbits():
    G = battery.cyclic(2)
    dec = twisted_orbits(G, [0, 1], [0, 1], identity_automorphism(G))
    assert dec.orbits == [[0], [1]]
    assert all(H.order == 2 for H, _ in dec.stabilizers)


def test_inner_twist_matches_conjugacy_structure():
    G = battery.symmetric(3)
    z = battery.automorphism_from_spec(G, "inner:t")
    dec = twisted_orbits(G, range(6), range(6), z)
    plain = twisted_orbits(G, range(6), range(6), identity_automorphism(G))
    assert sorted(map(len, dec.orbits)) == sorted(map(len, plain.orbits))
    E = elems_of(G)
    ref = oracles.twisted_classes(E, {E[g]: E[z(g)] for g in range(6)})
    assert sorted(sorted(E.index(x) for x in c) for c in ref) == sorted(dec.orbits)


def test_not_invariant():
    G = battery.cyclic(3)
    with pytest.raises(NotInvariant):
        twisted_orbits(G, range(3), [1], battery.automorphism_from_spec(G, "inv"))


def test_twisted_centralizer_examples():
    S = battery.symmetric(3)
    ident = identity_automorphism(S)
    H, emb = twisted_centralizer(S, ident, S.identity)
    assert H.order == 6
    H, _ = twisted_centralizer(S, ident, S.generator("s"))
    assert H.order == 2
    C2 = battery.cyclic(2)
    assert all(twisted_centralizer(C2, identity_automorphism(C2), g)[0].order == 2 for g in range(2))


@pytest.mark.parametrize("name,G,zeta", battery.acceptance_battery(), ids=lambda x: x if isinstance(x, str) else "")
def test_orbit_stabilizer_and_centralizers(name, G, zeta):
    dec = twisted_orbits(G, range(G.order), range(G.order), zeta)
    assert sorted(g for o in dec.orbits for g in o) == list(range(G.order))
    for orb, rep, (H, emb) in zip(dec.orbits, dec.representatives, dec.stabilizers):
        assert len(orb) * H.order == G.order
        assert rep == min(orb)
        Z, zemb = twisted_centralizer(G, zeta, rep)
        assert sorted(zemb.tolist()) == sorted(emb.tolist())
        # closure under products and inverses
        s = set(emb.tolist())
        assert all(int(G.mul[a, b]) in s and int(G.inv[a]) in s for a in s for b in s)


@given(st.sampled_from(["C6", "D8", "D10", "S3", "Q8", "S4"]), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_inner_twist_count_is_class_count(spec, pick):
    G = battery.group_from_spec(spec)
    x = pick % G.order
    assert twisted_class_count(G, inner_automorphism(G, x)) == len(G.classes)


def test_parse_word():
    assert battery.parse_word("uw⁻¹", ["u", "w"]) == [("u", 1), ("w", -1)]
    assert battery.parse_word("e", ["u"]) == []
    assert battery.parse_word("ab^-1", ["a", "ab"]) == [("ab", -1)]
    with pytest.raises(ValidationError):
        battery.parse_word("ux", ["u", "w"])
    assert battery.format_word([("w", -1), ("u", 1)]) == "w⁻¹u"


def test_group_specs():
    orders = {"C1": 1, "C7": 7, "D8": 8, "D16": 16, "S4": 24, "V4": 4, "Q8": 8}
    for spec, n in orders.items():
        assert battery.group_from_spec(spec).order == n
    assert not battery.quaternion().is_abelian()
    assert sorted(battery.quaternion().element_order(g) for g in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
