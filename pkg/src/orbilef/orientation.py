"""Orientation characters of (orthogonal representation, intertwiner) pairs.

For ``rho: Gamma -> O(n)`` and an invertible ``A`` commuting with ``rho``,
``chi(g) = sign det(A restricted to Fix(rho(g)))``. Also hosts the exact index
computation for the one-dimensional model operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from orbilef.characters import ClassFunction, DEFAULT_SEED, character_table, integer_multiplicities, reconstruct
from orbilef.errors import AmbiguousSign, NotIntertwiner, SingularIntertwiner, ValidationError

ORTHO_TOL = 1e-9
MULT_TOL = 1e-8
RANK_TOL = 1e-8
COMMUTE_TOL = 1e-8
DET_TOL = 1e-12
SIGN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthogonalRep:
    group: object
    matrices: tuple  # one n x n matrix per group element

    def __post_init__(self):
        G = self.group
        mats = [np.asarray(m, dtype=float) for m in self.matrices]
        if len(mats) != G.order:
            raise ValidationError(f"expected {G.order} matrices, got {len(mats)}")
        n = mats[0].shape[0] if mats else 0
        eye = np.eye(n)
        for g, Q in enumerate(mats):
            if Q.shape != (n, n):
                raise ValidationError(f"matrix for element {g} has shape {Q.shape}")
            if n and np.max(np.abs(Q.T @ Q - eye)) >= ORTHO_TOL:
                raise ValidationError(f"matrix for element {g} is not orthogonal")
        if n:
            stack = np.array(mats)
            prod = np.einsum("aij,bjk->abik", stack, stack)
            if np.max(np.abs(prod - stack[G.mul])) >= MULT_TOL:
                raise ValidationError("matrices are not multiplicative")
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def dim(self):
        return self.matrices[0].shape[0]

    def __getitem__(self, g):
        return self.matrices[g]

    def restrict(self, embedding, subgroup):
        return OrthogonalRep(subgroup, tuple(self.matrices[int(g)] for g in embedding))


def rep_from_generators(G, images, dim=None):
    """Extend generator matrices multiplicatively along the Cayley graph."""
    labels = [lbl for lbl, _ in G.generator_labels]
    if dim is None:
        dim = np.asarray(next(iter(images.values()))).shape[0] if images else 0
    mats = [None] * G.order
    mats[G.identity] = np.eye(dim)
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for lbl in labels:
                y = int(G.mul[x, G.generator(lbl)])
                if mats[y] is None:
                    mats[y] = mats[x] @ np.asarray(images[lbl], dtype=float)
                    nxt.append(y)
        frontier = nxt
    if any(m is None for m in mats):
        raise ValidationError("generator labels do not generate the group")
    return OrthogonalRep(G, tuple(mats))


def trivial_rep(G, dim):
    return OrthogonalRep(G, tuple(np.eye(dim) for _ in range(G.order)))


def direct_sum(*reps):
    G = reps[0].group
    n = sum(r.dim for r in reps)
    mats = []
    for g in range(G.order):
        M = np.zeros((n, n))
        i = 0
        for r in reps:
            d = r.dim
            M[i : i + d, i : i + d] = r[g]
            i += d
        mats.append(M)
    return OrthogonalRep(G, tuple(mats))


def block_diag(*blocks):
    n = sum(np.shape(b)[0] for b in blocks)
    M = np.zeros((n, n))
    i = 0
    for b in blocks:
        d = np.shape(b)[0]
        M[i : i + d, i : i + d] = b
        i += d
    return M


@dataclass(frozen=True, eq=False)
class Intertwiner:
    matrix: np.ndarray
    residual: float

    @classmethod
    def for_rep(cls, rho, A):
        A = np.asarray(A, dtype=float).reshape(rho.dim, rho.dim)
        res = max((float(np.max(np.abs(A @ Q - Q @ A))) for Q in rho.matrices if Q.size), default=0.0)
        if res >= COMMUTE_TOL:
            raise NotIntertwiner(f"matrix does not commute with the representation (residual {res:.3g})")
        if A.size and abs(np.linalg.det(A)) <= DET_TOL:
            raise SingularIntertwiner("intertwiner is not invertible")
        return cls(A, res)


def fixed_subspace(Q, tol=RANK_TOL):
    """Orthonormal basis (columns) of ``ker(Q - I)``.

    Singular values at or below ``tol * max(1, largest)`` count as zero.
    """
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    _, s, vt = np.linalg.svd(Q - np.eye(n))
    cutoff = tol * max(1.0, float(s[0]))
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T.copy()


def orientation_sign(A, F):
    """``sign det`` of ``A`` restricted to the ``A``-invariant span of the columns of ``F``."""
    if F.shape[1] == 0:
        return 1
    d = float(np.linalg.det(F.T @ A @ F))
    if abs(d) < SIGN_TOL:
        raise AmbiguousSign(f"restricted determinant {d:.3g} is too close to zero")
    return 1 if d > 0 else -1


def orientation_values(rho, A):
    """Per-element signs ``sign det(A | Fix(rho(g)))`` as a list of +-1."""
    if not isinstance(A, Intertwiner):
        A = Intertwiner.for_rep(rho, A)
    M = A.matrix
    return [orientation_sign(M, fixed_subspace(Q)) for Q in rho.matrices]


def orientation_character(rho, A):
    G = rho.group
    vals = orientation_values(rho, A)
    for c, members in enumerate(G.classes):
        if len({vals[g] for g in members}) != 1:
            raise ValidationError(f"orientation signs differ on conjugacy class {c}")
    return ClassFunction.from_elements(G, vals)


def average(chi, require_integer=False):
    """``(1/|G|) sum_g chi(g)`` as an exact rational; ``chi`` must be integer valued."""
    G = chi.group
    total = 0
    for c, members in enumerate(G.classes):
        v = chi.values[c]
        r = round(v.real)
        if abs(v - r) > 1e-9:
            raise ValidationError("average() needs an integer-valued class function")
        total += len(members) * r
    out = Fraction(total, G.order)
    if require_integer and out.denominator != 1:
        raise ValidationError(f"average {out} is not an integer")
    return out


def integrality_check(rho, A, seed=DEFAULT_SEED):
    """Orientation character, its integer multiplicities and the reconstruction error."""
    chi = orientation_character(rho, A)
    table = character_table(rho.group, seed)
    mults = integer_multiplicities(chi, table)
    err = float(np.max(np.abs(reconstruct(mults, table).values - chi.values)))
    return chi, mults, err


def polar_orthogonal(A):
    """Orthogonal factor ``O`` of ``A = O |A|``."""
    u, _, vt = np.linalg.svd(np.asarray(A, dtype=float))
    return u @ vt


def random_intertwiner(rho, rng, margin=1e-3, attempts=100):
    """Group-averaged random matrix shifted by a random scalar.

    Retries until every restricted determinant clears ``margin`` in absolute value.
    """
    n = rho.dim
    for _ in range(attempts):
        M = rng.standard_normal((n, n))
        avg = sum(Q @ M @ Q.T for Q in rho.matrices) / len(rho.matrices)
        A = avg + rng.uniform(-2.0, 2.0) * np.eye(n)
        ok = True
        for Q in rho.matrices:
            F = fixed_subspace(Q)
            if F.shape[1] and abs(np.linalg.det(F.T @ A @ F)) < margin:
                ok = False
                break
        if ok and abs(np.linalg.det(A)) > margin:
            return A
    raise ValidationError("could not draw a well-conditioned intertwiner")


@dataclass(frozen=True)
class ModelOperatorReport:
    truncation: int
    kernel_dim: int
    cokernel_dim: int
    # coefficients of the cokernel generator on e_0, e_1 (all others vanish)
    cokernel_basis: tuple
    symmetry_eigenvalue: int

    @property
    def index(self):
        return self.kernel_dim - self.cokernel_dim


def model_operator_matrix(N):
    """Integer matrix of the model operator from span{e_-N..e_N} to span{e_-N..e_N+1}.

    ``S e_n = -2 e_{n+1}`` for ``n > 0``, ``e_0 - e_1`` for ``n = 0``, ``2 e_n`` for ``n < 0``.
    """
    rows = 2 * N + 2
    cols = 2 * N + 1
    S = sympy.zeros(rows, cols)
    for n in range(-N, N + 1):
        j = n + N
        if n > 0:
            S[n + 1 + N, j] = -2
        elif n == 0:
            S[N, j] = 1
            S[N + 1, j] = -1
        else:
            S[n + N, j] = 2
    return S


def model_symmetry_matrix(N):
    """Order-two symmetry ``e_n -> -e_{1-n}`` on the codomain span{e_-N..e_N+1}."""
    rows = 2 * N + 2
    P = sympy.zeros(rows, rows)
    for n in range(-N, N + 2):
        P[1 - n + N, n + N] = -1
    return P


def model_operator_index(N):
    if N < 1:
        raise ValidationError("truncation must be at least 1")
    S = model_operator_matrix(N)
    ker = S.nullspace()
    coker = S.T.nullspace()
    if len(coker) != 1:
        raise ValidationError(f"unexpected cokernel dimension {len(coker)}")
    v = coker[0]
    v = v / v[N]  # normalise the e_0 coefficient to 1
    others = [v[i] for i in range(v.rows) if i not in (N, N + 1)]
    if any(x != 0 for x in others):
        raise ValidationError("cokernel generator is not supported on e_0, e_1")
    Pv = model_symmetry_matrix(N) * v
    ratio = Pv[N] / v[N]
    if Pv != ratio * v:
        raise ValidationError("cokernel generator is not an eigenvector of the symmetry")
    return ModelOperatorReport(N, len(ker), len(coker), (int(v[N]), int(v[N + 1])), int(ratio))
