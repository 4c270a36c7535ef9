"""Affine isometry groups acting on R^n, covariant pairs and fixed-orbit search.

Infinite groups are handled through radius-bounded enumeration: the group is
the set of products of generators whose translation part has norm at most
``radius``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from orbilef.battery import format_word, parse_word
from orbilef.errors import (
    CosetMismatch,
    ExplosionGuard,
    MissedRootRisk,
    NonDifferentiable,
    NotClosed,
    OutOfReach,
    TangencyDetected,
    ValidationError,
)
from orbilef.groups import FiniteGroup


@dataclass(frozen=True)
class Tolerances:
    orthogonality: float = 1e-9
    dedup: float = 1e-7
    point: float = 1e-9
    transversality: float = 1e-8
    covariance: float = 1e-8
    root: float = 1e-12
    derivative_jump: float = 1e-8
    grid: int = 2048
    min_grid: int = 256
    probes: int = 100
    element_cap: int = 20000

    def override(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class AffineIsometry:
    """``x -> linear @ x + translation``; ``word`` records how it was reached."""

    linear: np.ndarray
    translation: np.ndarray
    word: tuple = ()

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros(n), ())

    def __call__(self, x):
        return self.linear @ np.asarray(x, dtype=float) + self.translation

    def compose(self, other):
        """``self`` after ``other``."""
        return AffineIsometry(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
            self.word + other.word,
        )

    def inverse(self):
        Qt = self.linear.T
        return AffineIsometry(Qt, -Qt @ self.translation, tuple((lbl, -s) for lbl, s in reversed(self.word)))

    def key(self, tol=DEFAULT_TOL.dedup):
        v = np.concatenate([self.linear.ravel(), self.translation])
        return tuple(np.rint(v / tol).astype(np.int64).tolist())

    @property
    def dim(self):
        return len(self.translation)

    @property
    def label(self):
        return format_word(self.word)

    def __repr__(self):
        return f"AffineIsometry({self.label}: Q={self.linear.tolist()}, t={self.translation.tolist()})"


@dataclass(eq=False)
class GeometricGroup:
    dim: int
    generators: dict  # label -> AffineIsometry, declaration order kept
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    radius: float
    tol: Tolerances = field(default=DEFAULT_TOL)

    def __post_init__(self):
        self.domain_lo = np.asarray(self.domain_lo, dtype=float).reshape(self.dim)
        self.domain_hi = np.asarray(self.domain_hi, dtype=float).reshape(self.dim)
        if self.radius <= 0:
            raise ValidationError("enumeration radius must be positive")
        if np.any(self.domain_hi < self.domain_lo):
            raise ValidationError("fundamental domain has min corner above max corner")
        gens = {}
        for lbl, g in self.generators.items():
            Q = np.asarray(g.linear, dtype=float).reshape(self.dim, self.dim)
            if np.max(np.abs(Q.T @ Q - np.eye(self.dim)), initial=0.0) >= self.tol.orthogonality:
                raise ValidationError(f"generator {lbl!r} is not an isometry")
            gens[lbl] = AffineIsometry(Q, np.asarray(g.translation, dtype=float).reshape(self.dim), ((lbl, 1),))
        self.generators = gens

    def with_radius(self, radius):
        return GeometricGroup(self.dim, dict(self.generators), self.domain_lo, self.domain_hi, radius, self.tol)

    @property
    def step(self):
        """Largest generator translation, the radius increment used by certificates."""
        return max((float(np.linalg.norm(g.translation)) for g in self.generators.values()), default=0.0)

    def letter(self, lbl, sign):
        g = self.generators[lbl]
        return g if sign > 0 else g.inverse()

    def word_element(self, letters):
        if isinstance(letters, str):
            letters = parse_word(letters, list(self.generators))
        out = AffineIsometry.identity(self.dim)
        for lbl, s in letters:
            out = out.compose(self.letter(lbl, s))
        return out

    @cached_property
    def elements(self):
        return enumerate_elements(self)

    @cached_property
    def index(self):
        return {g.key(self.tol.dedup): i for i, g in enumerate(self.elements)}

    @cached_property
    def stacked(self):
        els = self.elements
        return (np.array([g.linear for g in els]).reshape(len(els), self.dim, self.dim),
                np.array([g.translation for g in els]).reshape(len(els), self.dim))

    def lookup(self, g):
        return self.index.get(g.key(self.tol.dedup))

    def in_domain(self, x, tol=None):
        tol = self.tol.point if tol is None else tol
        return bool(np.all(x >= self.domain_lo - tol) and np.all(x <= self.domain_hi + tol))

    def images(self, x):
        Q, t = self.stacked
        return np.einsum("mij,j->mi", Q, np.asarray(x, dtype=float)) + t


def enumerate_elements(G):
    """Breadth-first closure under generators and inverses, pruned by translation norm.

    Words may pass through elements up to ``radius + slack`` (slack: largest
    generator step plus the domain diameter); only elements with translation
    norm at most ``radius`` are returned, identity first.
    """
    slack = G.step + float(np.linalg.norm(G.domain_hi - G.domain_lo))
    bound = G.radius + slack + 1e-9
    letters = [(lbl, s) for lbl in G.generators for s in (1, -1)]
    start = AffineIsometry.identity(G.dim)
    seen = {start.key(G.tol.dedup): start}
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for lbl, s in letters:
                h = g.compose(G.letter(lbl, s))
                if np.linalg.norm(h.translation) > bound:
                    continue
                k = h.key(G.tol.dedup)
                if k not in seen:
                    seen[k] = h
                    nxt.append(h)
                    if len(seen) > G.tol.element_cap:
                        raise ExplosionGuard(
                            f"more than {G.tol.element_cap} elements within radius {G.radius}; "
                            "the action may not be proper or the radius is mis-scaled"
                        )
        frontier = nxt
    return [g for g in seen.values() if np.linalg.norm(g.translation) <= G.radius + 1e-9]


@dataclass(frozen=True, eq=False)
class Stabilizer:
    """Point stabilizer as an abstract finite group plus its isometries."""

    point: np.ndarray
    group: FiniteGroup
    elements: list  # AffineIsometry per abstract element, identity first


def point_stabilizer(G, p):
    p = np.asarray(p, dtype=float).reshape(G.dim)
    dist = np.linalg.norm(G.images(p) - p, axis=1)
    els = [G.elements[i] for i in np.nonzero(dist < G.tol.point)[0]]
    return stabilizer_from_elements(G, p, els)


def stabilizer_from_elements(G, p, els):
    pos = {g.key(G.tol.dedup): i for i, g in enumerate(els)}
    mul = np.empty((len(els), len(els)), dtype=np.int32)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            k = pos.get(a.compose(b).key(G.tol.dedup))
            if k is None:
                raise NotClosed(f"stabilizer of {p.tolist()} is not closed within radius {G.radius}; raise the radius")
            mul[i, j] = k
    labels = [(g.label, i) for i, g in enumerate(els) if i]
    return Stabilizer(p, FiniteGroup(mul, 0, labels, validate=len(els) <= 64), els)


# self-maps


@dataclass(frozen=True, eq=False)
class AffineMap:
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.linear, dtype=float))
        object.__setattr__(self, "linear", B)
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float).reshape(B.shape[0]))


@dataclass(frozen=True)
class Knot:
    x: float
    value: float
    derivative: float


@dataclass(frozen=True, eq=False)
class Piecewise1D:
    """Cubic Hermite interpolant on ``[knots[0].x, knots[-1].x]``, extended equivariantly."""

    knots: tuple
    extension: str = "equivariant"

    def __post_init__(self):
        ks = tuple(k if isinstance(k, Knot) else Knot(*k) for k in self.knots)
        if len(ks) < 2:
            raise ValidationError("piecewise map needs at least two knots")
        if any(b.x <= a.x for a, b in zip(ks, ks[1:])):
            raise ValidationError("knots must be strictly increasing")
        if self.extension != "equivariant":
            raise ValidationError(f"unsupported extension {self.extension!r}")
        object.__setattr__(self, "knots", ks)

    @cached_property
    def xs(self):
        return np.array([k.x for k in self.knots])

    @property
    def interval(self):
        return self.knots[0].x, self.knots[-1].x

    def pieces_for(self, y):
        return np.clip(np.searchsorted(self.xs, y, side="right") - 1, 0, len(self.knots) - 2)

    def raw(self, y, piece):
        """Hermite cubic value and derivative at ``y`` using the given piece indices."""
        x0 = self.xs[piece]
        x1 = self.xs[piece + 1]
        v = np.array([k.value for k in self.knots])
        d = np.array([k.derivative for k in self.knots])
        h = x1 - x0
        s = (y - x0) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        val = h00 * v[piece] + h10 * h * d[piece] + h01 * v[piece + 1] + h11 * h * d[piece + 1]
        dh00 = (6 * s**2 - 6 * s) / h
        dh10 = (3 * s**2 - 4 * s + 1) / h
        dh01 = (-6 * s**2 + 6 * s) / h
        dh11 = (3 * s**2 - 2 * s) / h
        der = dh00 * v[piece] + dh10 * h * d[piece] + dh01 * v[piece + 1] + dh11 * h * d[piece + 1]
        return val, der


@dataclass(frozen=True)
class GeometricFixedPoint:
    p: np.ndarray
    g: AffineIsometry
    jacobian: np.ndarray
    margin: float


class CovariantPair:
    """A self-map ``phi`` and an automorphism ``zeta`` with ``phi(zeta(g) x) = g phi(x)``.

    ``zeta`` maps generator labels to words in the generators.
    """

    def __init__(self, group, phi, zeta):
        self.group = group
        self.phi = phi
        self.zeta = dict(zeta)
        labels = list(group.generators)
        for lbl in labels:
            if lbl not in self.zeta:
                raise ValidationError(f"zeta has no image for generator {lbl!r}")
        for lbl, word in self.zeta.items():
            if lbl not in group.generators:
                raise ValidationError(f"zeta names unknown generator {lbl!r}")
            parse_word(word, labels)
        if isinstance(phi, Piecewise1D) and group.dim != 1:
            raise ValidationError("piecewise maps are only supported in dimension 1")
        if isinstance(phi, AffineMap) and phi.linear.shape != (group.dim, group.dim):
            raise ValidationError("affine map has the wrong dimension")

    @property
    def tol(self):
        return self.group.tol

    def with_radius(self, radius):
        return CovariantPair(self.group.with_radius(radius), self.phi, self.zeta)

    @cached_property
    def zeta_generators(self):
        return {lbl: self.group.word_element(word) for lbl, word in self.zeta.items()}

    def zeta_of(self, g):
        out = AffineIsometry.identity(self.group.dim)
        for lbl, s in g.word:
            z = self.zeta_generators[lbl]
            out = out.compose(z if s > 0 else z.inverse())
        return AffineIsometry(out.linear, out.translation, g.word)

    @cached_property
    def zeta_preimage(self):
        """``key(zeta(g)) -> g`` over the enumerated elements."""
        out = {}
        for g in self.group.elements:
            k = self.zeta_of(g).key(self.tol.dedup)
            if k in out:
                raise ValidationError("zeta is not injective on the enumerated elements")
            out[k] = g
        return out

    def zeta_inverse(self, h):
        g = self.zeta_preimage.get(h.key(self.tol.dedup))
        if g is None:
            raise OutOfReach(f"zeta^-1({h.label}) is outside the enumeration radius")
        return g

    # evaluation

    @cached_property
    def _fold_table(self):
        """Preimages ``h^-1(D*)`` of the knot interval with their unfolding maps, sorted."""
        a, b = self.phi.interval
        rows = []
        for h in self.group.elements:
            q = float(h.linear[0, 0])
            t = float(h.translation[0])
            lo, hi = sorted(((a - t) / q, (b - t) / q))
            try:
                g = self.zeta_inverse(h.inverse())
            except OutOfReach:
                continue
            rows.append((lo, hi, q, t, float(g.linear[0, 0]), float(g.translation[0])))
        rows.sort(key=lambda r: r[0])
        return np.array(rows).reshape(len(rows), 6)

    def _fold(self, x, side, strict=True):
        tab = self._fold_table
        probe = np.asarray(x + side * 1e-7, dtype=float)
        idx = np.searchsorted(tab[:, 0], probe, side="right") - 1
        eps = 1e-12
        for _ in range(4):
            safe = np.clip(idx, 0, len(tab) - 1)
            ok = (idx >= 0) & (probe >= tab[safe, 0] - eps) & (probe <= tab[safe, 1] + eps)
            if ok.all():
                return tab[safe]
            idx = np.where(ok, idx, idx - 1)
        if strict:
            bad = np.atleast_1d(np.asarray(x))[np.atleast_1d(~ok)]
            raise OutOfReach(f"no folding element within radius {self.group.radius} for x = {bad[:3].tolist()}")
        rows = tab[safe].copy()
        rows[~ok] = np.nan
        return rows

    def phi_1d(self, x, side=0, strict=True):
        """Vectorised value and derivative of the equivariant extension.

        With ``strict=False`` points outside the enumerated reach give NaN.
        """
        x = np.asarray(x, dtype=float)
        rows = self._fold(x, side, strict)
        q, t, gq, gt = rows[..., 2], rows[..., 3], rows[..., 4], rows[..., 5]
        y = q * x + t
        piece = self.phi.pieces_for(np.nan_to_num(q * (x + side * 1e-7) + t))
        val, der = self.phi.raw(y, piece)
        return gq * val + gt, gq * der * q

    def evaluate(self, x, side=0):
        """``(phi(x), dphi(x))``; ``side`` selects a one-sided derivative in 1D."""
        x = np.asarray(x, dtype=float).reshape(self.group.dim)
        if isinstance(self.phi, AffineMap):
            return self.phi.linear @ x + self.phi.translation, self.phi.linear.copy()
        v, d = self.phi_1d(x, side)
        return np.asarray(v).reshape(1), np.asarray(d).reshape(1, 1)

    def derivative(self, y):
        """Derivative at ``y``, refusing points where one-sided derivatives disagree."""
        if isinstance(self.phi, AffineMap):
            return self.phi.linear.copy()
        _, dl = self.evaluate(y, -1)
        _, dr = self.evaluate(y, +1)
        if abs(dl[0, 0] - dr[0, 0]) > self.tol.derivative_jump:
            raise NonDifferentiable(
                f"one-sided derivatives {dl[0, 0]:.6g} and {dr[0, 0]:.6g} differ at {float(y[0]):.12g}"
            )
        return (dl + dr) / 2

    # validation

    def covariance_residual(self):
        """Max of ``|phi(zeta(g) x) - g phi(x)|`` over generators (and probes for piecewise maps)."""
        res = 0.0
        if isinstance(self.phi, AffineMap):
            B, s = self.phi.linear, self.phi.translation
            for lbl, g in self.group.generators.items():
                z = self.zeta_generators[lbl]
                res = max(res, float(np.max(np.abs(B @ z.linear - g.linear @ B))),
                          float(np.max(np.abs(B @ z.translation + s - g(s)))))
            return res
        a, b = self.phi.interval
        w = b - a
        xs = np.linspace(a - w, b + w, self.tol.probes)
        fx, _ = self.phi_1d(xs)
        for lbl, g in self.group.generators.items():
            z = self.zeta_generators[lbl]
            lhs, _ = self.phi_1d(z.linear[0, 0] * xs + z.translation[0])
            rhs = g.linear[0, 0] * fx + g.translation[0]
            res = max(res, float(np.max(np.abs(lhs - rhs))))
        return res

    def homomorphism_residual(self):
        """Checks ``zeta(g s) = zeta(g) zeta(s)`` for enumerated ``g`` and generators ``s``.

        Returns the number of violations (0 for a well-defined zeta).
        """
        bad = 0
        G = self.group
        for g in G.elements:
            zg = self.zeta_of(g)
            for lbl in G.generators:
                for s in (1, -1):
                    gs = g.compose(G.letter(lbl, s))
                    i = G.lookup(gs)
                    if i is None:
                        continue
                    z = self.zeta_generators[lbl]
                    expect = zg.compose(z if s > 0 else z.inverse())
                    if self.zeta_of(G.elements[i]).key(self.tol.dedup) != expect.key(self.tol.dedup):
                        bad += 1
        return bad

    def validate(self):
        res = self.covariance_residual()
        if res >= self.tol.covariance:
            raise ValidationError(f"covariance residual {res:.3g} exceeds {self.tol.covariance}")
        if self.homomorphism_residual():
            raise ValidationError("zeta is not compatible with the group relations")
        self.zeta_preimage  # injectivity
        return res


def evaluate_phi(pair, x):
    return pair.evaluate(x)


# fixed points


def orbit_representative(G, x):
    """Lexicographically smallest image of ``x`` inside the closed fundamental domain."""
    imgs = G.images(x)
    inside = np.all((imgs >= G.domain_lo - G.tol.point) & (imgs <= G.domain_hi + G.tol.point), axis=1)
    if not inside.any():
        return None
    cand = imgs[inside]
    r = np.round(cand, 9)
    order = np.lexsort(r.T[::-1])
    return cand[order[0]]


def _affine_raw_roots(pair):
    G = pair.group
    B, s = pair.phi.linear, pair.phi.translation
    n = G.dim
    out = []
    for g in G.elements:
        M = np.eye(n) - B @ g.linear
        rhs = B @ g.translation + s
        if abs(np.linalg.det(M)) > pair.tol.transversality:
            out.append(np.linalg.solve(M, rhs))
            continue
        x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        if np.linalg.norm(M @ x - rhs) < pair.tol.point:
            raise TangencyDetected(f"phi o {g.label} fixes a positive-dimensional set; not in general position")
    return out


def _bisect(f, lo, hi, flo, tol):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= tol or hi - lo <= 1e-15:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _piecewise_raw_roots(pair, grid=None):
    G = pair.group
    tol = pair.tol
    grid = tol.grid if grid is None else grid
    if grid < tol.min_grid:
        warnings.warn(f"root bracketing grid {grid} is coarser than the minimum {tol.min_grid}", MissedRootRisk)
    a, b = float(G.domain_lo[0]), float(G.domain_hi[0])
    margin = 1e-6 * (b - a)
    lo, hi = a - margin, b + margin
    tab = pair._fold_table
    base = np.linspace(lo, hi, grid + 1)
    out = []
    for g in G.elements:
        q, t = float(g.linear[0, 0]), float(g.translation[0])
        # breakpoints of phi o g: preimages of knot images
        knots = pair.phi.xs
        bps = []
        for row in tab:
            # x with q x + t = (knot - row_t) / row_q
            bps.extend(((knots - row[3]) / row[2] - t) / q)
        bps = np.array(bps)
        xs = np.unique(np.concatenate([base, bps[(bps > lo) & (bps < hi)]]))

        def f(x, q=q, t=t):
            return pair.phi_1d(q * x + t, strict=False)[0] - x

        fx = f(xs)
        zero = np.abs(fx) <= tol.root  # NaN (out of reach) compares False
        out.extend((float(x), g) for x in xs[zero])
        sgn = np.sign(fx)
        for i in np.nonzero((sgn[:-1] * sgn[1:] < 0) & ~zero[:-1] & ~zero[1:])[0]:
            x = _bisect(lambda v: float(f(np.array(v))), xs[i], xs[i + 1], fx[i], tol.root)
            out.append((x, g))
    return [np.array([x]) for x, _ in out]


def fixed_orbit_representatives(pair, grid=None):
    """Sorted representatives in the fundamental domain of all fixed orbits found."""
    G = pair.group
    if isinstance(pair.phi, AffineMap):
        raw = _affine_raw_roots(pair)
    else:
        raw = _piecewise_raw_roots(pair, grid)
    reps = []
    for x in raw:
        r = orbit_representative(G, x)
        if r is None:
            continue
        if any(np.max(np.abs(r - q)) < G.tol.dedup for q in reps):
            continue
        reps.append(r)
    reps.sort(key=lambda r: tuple(np.round(r, 9)))
    # merge any two representatives that still share an orbit
    kept = []
    for r in reps:
        if not any(np.min(np.linalg.norm(G.images(q) - r, axis=1)) < G.tol.dedup for q in kept):
            kept.append(r)
    return kept


def phi_images(pair, p):
    """``phi(g p)`` for every enumerated ``g``."""
    pts = pair.group.images(p)
    if isinstance(pair.phi, AffineMap):
        return pts @ pair.phi.linear.T + pair.phi.translation
    return pair.phi_1d(pts[:, 0], strict=False)[0].reshape(-1, 1)


def L_set(pair, p):
    """``{g : phi(g p) = p}`` within the radius, verified to be one coset ``g_p K_p``."""
    G = pair.group
    p = np.asarray(p.p if isinstance(p, GeometricFixedPoint) else p, dtype=float).reshape(G.dim)
    dist = np.linalg.norm(phi_images(pair, p) - p, axis=1)
    L = [G.elements[i] for i in np.nonzero(dist < G.tol.point)[0]]
    if not L:
        raise CosetMismatch(f"no element maps {p.tolist()} to a preimage of itself")
    K = point_stabilizer(G, p)
    gp = L[0]
    coset = {gp.compose(k).key(G.tol.dedup) for k in K.elements}
    if coset != {g.key(G.tol.dedup) for g in L}:
        raise CosetMismatch(f"L-set at {p.tolist()} is not a single coset of the stabilizer; raise the radius")
    return L


def jacobian_at(pair, p, g):
    """``d(phi o g)(p)`` with the transversality margin ``|det(I - J)|``."""
    J = pair.derivative(g(p)) @ g.linear
    margin = abs(float(np.linalg.det(np.eye(len(p)) - J)))
    if margin <= pair.tol.transversality:
        raise TangencyDetected(f"|det(I - d(phi o {g.label}))| = {margin:.3g} at {np.asarray(p).tolist()}")
    return J, margin


def find_fixed_points(pair, grid=None):
    """One :class:`GeometricFixedPoint` per fixed orbit, using ``g_p`` = first element of the L-set."""
    out = []
    for p in fixed_orbit_representatives(pair, grid):
        L = L_set(pair, p)
        g = L[0]
        J, margin = jacobian_at(pair, p, g)
        val, _ = pair.evaluate(g(p))
        if np.max(np.abs(val - p)) >= pair.tol.point:
            raise ValidationError(f"fixed point residual too large at {p.tolist()}")
        out.append(GeometricFixedPoint(p, g, J, margin))
    return out


def radius_certificate(pair, reps=None):
    """Whether one extra generator step of radius finds exactly the same orbit representatives."""
    if reps is None:
        reps = fixed_orbit_representatives(pair)
    step = pair.group.step or 1.0
    bigger = fixed_orbit_representatives(pair.with_radius(pair.group.radius + step))
    same = len(bigger) == len(reps) and all(np.max(np.abs(a - b)) < pair.tol.dedup for a, b in zip(reps, bigger))
    return {"radius": pair.group.radius, "checked_radius": pair.group.radius + step, "stable": bool(same)}


def isometry_from(Q, t):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    return AffineIsometry(Q, np.asarray(t, dtype=float).reshape(Q.shape[0]))


__all__ = [
    "AffineIsometry",
    "AffineMap",
    "CovariantPair",
    "GeometricFixedPoint",
    "GeometricGroup",
    "Knot",
    "L_set",
    "Piecewise1D",
    "Stabilizer",
    "Tolerances",
    "enumerate_elements",
    "evaluate_phi",
    "find_fixed_points",
    "fixed_orbit_representatives",
    "isometry_from",
    "jacobian_at",
    "point_stabilizer",
    "radius_certificate",
]
