"""Finite groups as dense multiplication tables.

Elements are the integers ``0..order-1``. ``mul[g, h]`` is the product ``g h``,
read as function composition (``h`` first) whenever elements act on something.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from orbilef import kernels
from orbilef.errors import NotAHomomorphism, NotBijective, NotInvariant, ValidationError

MAX_ORDER = 512


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Instances are treated as immutable; equality is identity.
    """

    def __init__(self, mul, identity=0, generator_labels=(), validate=True):
        mul = np.ascontiguousarray(mul, dtype=np.int32)
        n = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
            raise ValidationError("multiplication table must be a non-empty square array")
        if n > MAX_ORDER:
            raise ValidationError(f"group order {n} exceeds cap {MAX_ORDER}")
        if mul.min() < 0 or mul.max() >= n:
            raise ValidationError("multiplication table has out-of-range entries")
        e = int(identity)
        ar = np.arange(n)
        if not (np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)):
            raise ValidationError("identity is not a two-sided unit")
        rows, cols = np.nonzero(mul == e)
        if len(rows) != n or len(set(rows.tolist())) != n:
            raise ValidationError("some element has no unique inverse")
        inv = np.empty(n, dtype=np.int32)
        inv[rows] = cols
        if not np.array_equal(mul[inv, ar], np.full(n, e)):
            raise ValidationError("left and right inverses disagree")
        self.mul = mul
        self.mul.flags.writeable = False
        self.identity = e
        self.inv = inv
        self.inv.flags.writeable = False
        self.generator_labels = tuple((str(lbl), int(g)) for lbl, g in generator_labels)
        if validate:
            if not kernels.is_associative(mul):
                raise ValidationError("multiplication table is not associative")
            if self.generator_labels and len(self.closure([g for _, g in self.generator_labels])) != n:
                raise ValidationError("generator labels do not generate the group")

    @property
    def order(self):
        return self.mul.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def product(self, *elems):
        out = self.identity
        for g in elems:
            out = int(self.mul[out, g])
        return out

    def power(self, g, k):
        if k < 0:
            g, k = int(self.inv[g]), -k
        out = self.identity
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = int(self.mul[x, g])
            k += 1
        return k

    def generator(self, label):
        for lbl, g in self.generator_labels:
            if lbl == label:
                return g
        raise KeyError(label)

    def closure(self, elems):
        """Smallest subset containing ``elems`` and the identity, closed under products."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = [int(g) for g in elems]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = int(self.mul[x, s])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def subgroup(self, elems):
        """Return ``(H, embedding)`` for a subset closed under products and inverses.

        ``embedding[i]`` is the parent element of ``H``'s element ``i``; the
        identity is listed first and the rest keep their parent order.
        """
        elems = sorted({int(g) for g in elems} | {self.identity}, key=lambda g: (g != self.identity, g))
        pos = {g: i for i, g in enumerate(elems)}
        try:
            sub = [[pos[int(self.mul[a, b])] for b in elems] for a in elems]
        except KeyError:
            raise NotInvariant("subset is not closed under multiplication") from None
        return FiniteGroup(np.array(sub, dtype=np.int32), 0, validate=False), np.array(elems, dtype=np.int32)

    @cached_property
    def class_of(self):
        """Conjugacy class id per element; ids ordered by smallest member, identity first."""
        ident = np.arange(self.order, dtype=np.int32)
        act = kernels.twisted_action_table(self.mul, self.inv, ident, ident, ident)
        return kernels.action_orbits(act)

    @cached_property
    def classes(self):
        out = [[] for _ in range(int(self.class_of.max()) + 1)]
        for g, c in enumerate(self.class_of.tolist()):
            out[c].append(g)
        return out


def group_from_permutation_generators(gens, npoints=None, labels=None):
    """Generate a group from permutations of ``{0..N-1}`` given as image lists."""
    gens = [list(g) for g in gens]
    if npoints is None:
        if not gens:
            raise ValidationError("npoints is required when there are no generators")
        npoints = len(gens[0])
    if npoints <= 0:
        raise ValidationError("permutations must act on at least one point")
    for g in gens:
        if len(g) != npoints or sorted(g) != list(range(npoints)):
            raise ValidationError(f"not a permutation of {npoints} points: {g}")
    if labels is None:
        labels = [f"g{i}" for i in range(len(gens))]
    elems, right, parent, pgen = kernels.perm_closure(np.array(gens, dtype=np.int32).reshape(len(gens), npoints), npoints)
    if len(elems) > MAX_ORDER:
        raise ValidationError(f"generated group exceeds order cap {MAX_ORDER}")
    mul = kernels.table_from_right(right, parent, pgen)
    gen_idx = [int(right[0, s]) for s in range(len(gens))]
    G = FiniteGroup(mul, 0, list(zip(labels, gen_idx)), validate=False)
    G.permutations = elems
    return G


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    source: FiniteGroup
    image: np.ndarray

    def __call__(self, g):
        return int(self.image[g])

    def compose(self, other):
        """``self`` after ``other``."""
        return GroupAutomorphism(self.source, self.image[other.image])

    def inverse(self):
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(len(self.image), dtype=self.image.dtype)
        return GroupAutomorphism(self.source, inv)

    def is_identity(self):
        return bool(np.array_equal(self.image, np.arange(len(self.image))))

    def order(self):
        k, a = 1, self
        while not a.is_identity():
            a = a.compose(self)
            k += 1
        return k


def identity_automorphism(G):
    return GroupAutomorphism(G, np.arange(G.order, dtype=np.int32))


def inner_automorphism(G, x):
    """``h -> x h x^-1``."""
    img = G.mul[G.mul[x], G.inv[x]]
    return GroupAutomorphism(G, np.ascontiguousarray(img, dtype=np.int32))


def automorphism_from_generator_images(G, images):
    """Extend ``label -> element`` along the Cayley graph and check it is an automorphism."""
    labels = [lbl for lbl, _ in G.generator_labels]
    missing = [lbl for lbl in labels if lbl not in images]
    if missing:
        raise ValidationError(f"no image given for generators {missing}")
    gens = [(G.generator(lbl), int(images[lbl])) for lbl in labels]
    img = np.full(G.order, -1, dtype=np.int64)
    img[G.identity] = G.identity
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in gens:
                y = int(G.mul[x, s])
                val = int(G.mul[img[x], t])
                if img[y] == -1:
                    img[y] = val
                    nxt.append(y)
                elif img[y] != val:
                    raise NotAHomomorphism(f"generator images are inconsistent at element {y}")
        frontier = nxt
    if (img < 0).any():
        raise ValidationError("generator labels do not generate the group")
    if len(set(img.tolist())) != G.order:
        raise NotBijective("generator images do not define a bijection")
    return GroupAutomorphism(G, img.astype(np.int32))


def conjugacy_classes(G):
    return [list(c) for c in G.classes]


@dataclass(frozen=True, eq=False)
class TwistedOrbitDecomposition:
    acting_group: FiniteGroup
    point_set: list
    orbits: list
    representatives: list
    # per orbit: (subgroup, embedding into acting_group)
    stabilizers: list


def orbit_decomposition(K, points, act):
    """Orbits and stabilizers of a ``K`` action on ``points`` given by ``act[h, j]``.

    Representatives are the smallest point label in each orbit.
    """
    labels = kernels.action_orbits(act)
    norbits = int(labels.max()) + 1 if len(points) else 0
    orbits = [[] for _ in range(norbits)]
    for j, c in enumerate(labels.tolist()):
        orbits[c].append(j)
    reps, stabs, out_orbits = [], [], []
    for orb in orbits:
        j = min(orb, key=lambda q: points[q])
        stab = np.nonzero(act[:, j] == j)[0]
        reps.append(points[j])
        stabs.append(K.subgroup(stab))
        out_orbits.append(sorted(points[q] for q in orb))
    order = sorted(range(norbits), key=lambda i: reps[i])
    return TwistedOrbitDecomposition(
        K, list(points), [out_orbits[i] for i in order], [reps[i] for i in order], [stabs[i] for i in order]
    )


def twisted_orbits(ambient, K, L, zeta):
    """Orbits of ``h . g = zeta(h) g h^-1`` (``h`` in ``K``) on the element set ``L``.

    Stabilizers are ``(subgroup, embedding)`` pairs whose embedding maps into
    ``ambient`` directly.
    """
    Kgrp, kemb = ambient.subgroup(K)
    L = sorted({int(g) for g in L})
    act = kernels.twisted_action_table(ambient.mul, ambient.inv, zeta.image, kemb, np.array(L, dtype=np.int32))
    if (act < 0).any():
        raise NotInvariant("L is not invariant under twisted conjugation by K")
    dec = orbit_decomposition(Kgrp, L, act)
    # express stabilizers directly in ambient indices as well
    stabs = [(H, kemb[emb]) for H, emb in dec.stabilizers]
    return TwistedOrbitDecomposition(Kgrp, dec.point_set, dec.orbits, dec.representatives, stabs)


def twisted_centralizer(G, zeta, g):
    """``Z_zeta(g) = {h : zeta(h) g = g h}`` as ``(subgroup, embedding)``."""
    hs = np.nonzero(G.mul[zeta.image, g] == G.mul[g])[0]
    return G.subgroup(hs)


def twisted_class_count(G, zeta):
    return len(twisted_orbits(G, range(G.order), range(G.order), zeta).orbits)
