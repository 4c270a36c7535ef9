"""Named finite groups, automorphisms and orthogonal representations.

Group specs: ``C<n>`` cyclic, ``D<2m>`` dihedral of order 2m, ``V4`` (or ``K4``)
Klein four, ``S<n>`` symmetric, ``Q8`` quaternion. Automorphism specs: ``id``,
``inv`` (abelian groups only), ``inner:<word>``, ``power:<k>`` (cyclic groups)
or ``map:<label>=<word>,...``.
"""
import math
import re

import numpy as np

from orbilef.errors import ParseError, ValidationError
from orbilef.groups import (
    GroupAutomorphism,
    automorphism_from_generator_images,
    group_from_permutation_generators,
    identity_automorphism,
    inner_automorphism,
)

_INV_SUFFIXES = ("⁻¹", "^-1", "'")


def cyclic(n):
    return group_from_permutation_generators([[(i + 1) % n for i in range(n)]], npoints=n, labels=["a"])


def dihedral(order):
    """Symmetries of the regular ``order/2``-gon; ``r`` rotates, ``s`` reflects."""
    m = order // 2
    if order % 2 or m < 2:
        raise ValidationError(f"dihedral order must be even and at least 4, got {order}")
    r = [(i + 1) % m for i in range(m)]
    s = [(-i) % m for i in range(m)]
    return group_from_permutation_generators([r, s], npoints=m, labels=["r", "s"])


def klein_four():
    return group_from_permutation_generators([[1, 0, 3, 2], [2, 3, 0, 1]], labels=["a", "b"])


def symmetric(n):
    if n == 1:
        return group_from_permutation_generators([], npoints=1)
    swap = [1, 0] + list(range(2, n))
    cycle = [(i + 1) % n for i in range(n)]
    return group_from_permutation_generators([swap, cycle], labels=["s", "t"])


# unit quaternions +-1, +-i, +-j, +-k as points 0..7 = (1, i, j, k, -1, -i, -j, -k)
_QTAB = {
    (0, 0): 0, (0, 1): 1, (0, 2): 2, (0, 3): 3,
    (1, 0): 1, (1, 1): 4, (1, 2): 3, (1, 3): 6,
    (2, 0): 2, (2, 1): 7, (2, 2): 4, (2, 3): 1,
    (3, 0): 3, (3, 1): 2, (3, 2): 5, (3, 3): 4,
}


def _qmul(a, b):
    sign = (a >= 4) ^ (b >= 4)
    c = _QTAB[a % 4, b % 4]
    return (c + 4) % 8 if sign else c


def quaternion():
    """Left regular action of Q8 on itself; generators ``i`` and ``j``."""
    gi = [_qmul(1, x) for x in range(8)]
    gj = [_qmul(2, x) for x in range(8)]
    return group_from_permutation_generators([gi, gj], labels=["i", "j"])


def group_from_spec(spec):
    spec = spec.strip()
    m = re.fullmatch(r"([CDS])(\d+)", spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise ParseError(f"bad group size in {spec!r}")
        return {"C": cyclic, "D": dihedral, "S": symmetric}[kind](n)
    if spec in ("V4", "K4"):
        return klein_four()
    if spec == "Q8":
        return quaternion()
    raise ParseError(f"unknown group spec {spec!r}")


def parse_word(word, labels):
    """Split a word such as ``"uw⁻¹"`` into ``[(label, +-1), ...]``.

    Labels are matched greedily, longest first; whitespace and ``*`` separate.
    ``"e"`` or the empty string is the empty word unless ``e`` is a label.
    """
    word = word.strip()
    if word in ("", "1") or (word == "e" and "e" not in labels):
        return []
    ordered = sorted(labels, key=len, reverse=True)
    out, i = [], 0
    while i < len(word):
        if word[i] in " *·":
            i += 1
            continue
        for lbl in ordered:
            if word.startswith(lbl, i):
                i += len(lbl)
                sign = 1
                for suf in _INV_SUFFIXES:
                    if word.startswith(suf, i):
                        i += len(suf)
                        sign = -1
                        break
                out.append((lbl, sign))
                break
        else:
            raise ValidationError(f"word {word!r} uses an undeclared label at position {i}")
    return out


def format_word(letters):
    if not letters:
        return "e"
    return "".join(lbl if s > 0 else lbl + "⁻¹" for lbl, s in letters)


def evaluate_word(G, word):
    letters = parse_word(word, [lbl for lbl, _ in G.generator_labels]) if isinstance(word, str) else word
    out = G.identity
    for lbl, s in letters:
        g = G.generator(lbl)
        out = int(G.mul[out, g if s > 0 else G.inv[g]])
    return out


def automorphism_from_spec(G, spec):
    spec = spec.strip()
    if spec == "id":
        return identity_automorphism(G)
    if spec == "inv":
        if not G.is_abelian():
            raise ValidationError("inversion is an automorphism only for abelian groups")
        return GroupAutomorphism(G, G.inv.copy())
    if spec.startswith("inner:"):
        return inner_automorphism(G, evaluate_word(G, spec[6:]))
    if spec.startswith("power:"):
        k = int(spec[6:])
        if len(G.generator_labels) != 1:
            raise ValidationError("power automorphisms need a single generator")
        lbl, g = G.generator_labels[0]
        return automorphism_from_generator_images(G, {lbl: G.power(g, k)})
    if spec.startswith("map:"):
        images = {}
        for part in spec[4:].split(","):
            if "=" not in part:
                raise ParseError(f"expected label=word in {part!r}")
            lbl, word = part.split("=", 1)
            images[lbl.strip()] = evaluate_word(G, word)
        return automorphism_from_generator_images(G, images)
    raise ParseError(f"unknown automorphism spec {spec!r}")


def all_cyclic_automorphisms(n):
    G = cyclic(n)
    a = G.generator("a")
    return G, [
        (f"power:{k}", automorphism_from_generator_images(G, {"a": G.power(a, k)}))
        for k in range(1, max(n, 2))
        if math.gcd(k, n) == 1
    ]


def acceptance_battery():
    """``(name, G, zeta)`` triples covering the finite-group identity checks."""
    out = []
    for n in range(2, 13):
        G, autos = all_cyclic_automorphisms(n)
        out.extend((f"C{n} {spec}", G, z) for spec, z in autos)
    V = klein_four()
    out.append(("V4 swap", V, automorphism_from_spec(V, "map:a=b,b=a")))
    S3 = symmetric(3)
    out.append(("S3 id", S3, identity_automorphism(S3)))
    out.append(("S3 inner:t", S3, automorphism_from_spec(S3, "inner:t")))
    D8 = dihedral(8)
    out.append(("D8 id", D8, identity_automorphism(D8)))
    out.append(("D8 map:r=r,s=rs", D8, automorphism_from_spec(D8, "map:r=r,s=rs")))
    Q8 = quaternion()
    out.append(("Q8 id", Q8, identity_automorphism(Q8)))
    return out


def character_battery():
    """Groups whose character tables are checked exhaustively."""
    groups = [(f"C{n}", cyclic(n)) for n in range(1, 13)]
    groups += [(f"D{k}", dihedral(k)) for k in (8, 10, 12, 14, 16)]
    groups += [("V4", klein_four()), ("S3", symmetric(3)), ("Q8", quaternion()), ("S4", symmetric(4))]
    return groups


# orthogonal representations given on generators


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def generator_matrices(G, name):
    """Generator matrices for a few standard real representations.

    ``name`` is one of ``trivial``, ``sign``, ``sign:<labels>``, ``natural``,
    ``permutation``. ``sign`` sends every generator to -1 and ``sign:rs`` only
    the listed ones; either is rejected later if it is not a homomorphism.
    """
    labels = [lbl for lbl, _ in G.generator_labels]
    if name == "trivial":
        return {lbl: np.eye(1) for lbl in labels}
    if name == "sign":
        return {lbl: -np.eye(1) for lbl in labels}
    if name.startswith("sign:"):
        neg = [lbl for lbl, _ in parse_word(name[5:], labels)]
        return {lbl: (-1.0 if lbl in neg else 1.0) * np.eye(1) for lbl in labels}
    if name == "permutation":
        perms = G.permutations
        out = {}
        for lbl, g in G.generator_labels:
            p = perms[g]
            P = np.zeros((len(p), len(p)))
            P[p, np.arange(len(p))] = 1.0
            out[lbl] = P
        return out
    if name == "natural":
        n = G.order
        if labels == ["a"]:
            return {"a": _rot(2 * math.pi / n)}
        if labels == ["r", "s"]:
            return {"r": _rot(4 * math.pi / n), "s": np.diag([1.0, -1.0])}
        if labels == ["i", "j"]:
            # left multiplication by i and j on R^4 = span(1, i, j, k)
            Li = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
            Lj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
            return {"i": Li, "j": Lj}
        if labels == ["a", "b"]:
            return {"a": np.diag([-1.0, 1.0]), "b": np.diag([1.0, -1.0])}
        if labels == ["s", "t"]:
            # standard representation of S_n on the sum-zero hyperplane
            P = generator_matrices(G, "permutation")
            k = P["s"].shape[0]
            basis = np.linalg.qr(np.eye(k)[:, :-1] - np.eye(k)[:, -1:])[0]
            return {lbl: basis.T @ M @ basis for lbl, M in P.items()}
    raise ValidationError(f"no {name!r} representation for this group")
