"""Assembly of local fixed-orbit data into Lefschetz numbers, and report rendering.

Each fixed orbit with representative ``p`` contributes
``sum_i (1/|Gamma_i|) sum_{h in Gamma_i} sign det(W_i restricted to Fix(h))``
where ``Gamma_i`` runs over stabilizers of the twisted-conjugation orbits of
the stabilizer ``K_p`` on ``L_p`` and ``W_i = I - d(phi o g_i)(p)``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from orbilef import kernels
from orbilef.battery import format_word
from orbilef.characters import DEFAULT_SEED, burnside_identity_check, character_table, integer_multiplicities
from orbilef.errors import NonIntegerTotal, NotInvariant, ValidationError
from orbilef.geometry import L_set, fixed_orbit_representatives, jacobian_at, point_stabilizer, radius_certificate
from orbilef.groups import orbit_decomposition
from orbilef.orientation import Intertwiner, OrthogonalRep, average, orientation_character


@dataclass
class TwistedTerm:
    representative: str
    orbit: list
    stabilizer: list
    jacobian: list
    intertwiner: list
    character: list  # sign per stabilizer element, same order as ``stabilizer``
    multiplicities: list  # integer decomposition over the stabilizer's irreducibles
    average: Fraction


@dataclass
class FixedOrbitDatum:
    point: list
    stabilizer: list
    coset: list
    terms: list
    contribution: Fraction


@dataclass
class LefschetzReport:
    scene: dict
    orbits: list
    total: Fraction
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return _encode(asdict(self))

    @classmethod
    def from_dict(cls, d):
        orbits = []
        for o in d["orbits"]:
            terms = [TwistedTerm(**{**t, "average": _frac(t["average"])}) for t in o["terms"]]
            orbits.append(FixedOrbitDatum(o["point"], o["stabilizer"], o["coset"], terms, _frac(o["contribution"])))
        return cls(d["scene"], orbits, _frac(d["total"]), d["diagnostics"])


def _frac(d):
    return Fraction(d["num"], d["den"])


def _encode(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, dict):
        return {k: _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    if isinstance(x, np.ndarray):
        return _encode(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    return x


def _clean(M):
    # -0.0 and float noise must not leak into reports
    return [[float(v) + 0.0 for v in row] for row in np.round(np.asarray(M, dtype=float), 12)]


def local_contribution(K, linear, L_labels, act, jacobians, k_labels, seed=DEFAULT_SEED):
    """Local Lefschetz datum of one fixed orbit.

    ``K``: stabilizer as a FiniteGroup; ``linear[a]``: orthogonal part of its
    element ``a``; ``act[a, j]``: index of ``zeta(k_a) l_j k_a^-1`` in ``L``;
    ``jacobians[j] = d(phi o l_j)(p)``.
    """
    n = np.asarray(linear[0]).shape[0]
    dec = orbit_decomposition(K, list(range(len(L_labels))), act)
    terms = []
    contribution = Fraction(0)
    for j, orbit, (gamma, emb) in zip(dec.representatives, dec.orbits, dec.stabilizers):
        rho = OrthogonalRep(gamma, tuple(np.asarray(linear[int(a)], dtype=float) for a in emb))
        W = np.eye(n) - np.asarray(jacobians[j], dtype=float).reshape(n, n)
        A = Intertwiner.for_rep(rho, W)
        chi = orientation_character(rho, A)
        mults = integer_multiplicities(chi, character_table(gamma, seed))
        avg = average(chi)
        contribution += avg
        terms.append(
            TwistedTerm(
                representative=L_labels[j],
                orbit=[L_labels[q] for q in orbit],
                stabilizer=[k_labels[int(a)] for a in emb],
                jacobian=_clean(np.asarray(jacobians[j]).reshape(n, n)),
                intertwiner=_clean(W),
                character=[int(round(chi(h).real)) for h in range(gamma.order)],
                multiplicities=mults,
                average=avg,
            )
        )
    return terms, contribution


def orbit_datum(pair, p, seed=DEFAULT_SEED):
    """Build the :class:`FixedOrbitDatum` at a fixed-orbit representative ``p``."""
    G = pair.group
    K = point_stabilizer(G, p)
    L = L_set(pair, p)
    pos = {g.key(G.tol.dedup): j for j, g in enumerate(L)}
    act = np.empty((len(K.elements), len(L)), dtype=np.int32)
    for a, k in enumerate(K.elements):
        zk = pair.zeta_of(k)
        kinv = k.inverse()
        for j, g in enumerate(L):
            q = pos.get(zk.compose(g).compose(kinv).key(G.tol.dedup))
            if q is None:
                raise NotInvariant(f"L-set at {p.tolist()} is not invariant under twisted conjugation")
            act[a, j] = q
    jac = [jacobian_at(pair, p, g)[0] for g in L]
    k_labels = [k.label for k in K.elements]
    L_labels = [g.label for g in L]
    terms, contribution = local_contribution(K.group, [k.linear for k in K.elements], L_labels, act, jac, k_labels, seed)
    return FixedOrbitDatum([float(v) + 0.0 for v in np.round(p, 12)], k_labels, L_labels, terms, contribution)


def _check_integer(total):
    if total.denominator != 1:
        raise NonIntegerTotal(f"Lefschetz total {total} is not an integer; a tolerance broke down or an orbit was missed")


def lefschetz_number(pair, scene=None, grid=None, seed=DEFAULT_SEED, certify=True):
    """Full pipeline for a geometric covariant pair."""
    residual = pair.validate()
    reps = fixed_orbit_representatives(pair, grid)
    orbits = [orbit_datum(pair, p, seed) for p in reps]
    total = sum((o.contribution for o in orbits), Fraction(0))
    _check_integer(total)
    tol = pair.tol
    diagnostics = {
        "backend": kernels.BACKEND,
        "covariance_residual": float(residual),
        "elements_enumerated": len(pair.group.elements),
        "seed": seed,
        "tolerances": {k: v for k, v in asdict(tol).items()},
    }
    if certify:
        diagnostics["radius_certificate"] = radius_certificate(pair, reps)
    return LefschetzReport(scene or {}, orbits, total, diagnostics)


def element_words(G):
    """Shortest generator word for each element (index strings when unlabeled)."""
    if not G.generator_labels:
        return [str(i) for i in range(G.order)]
    words = [None] * G.order
    words[G.identity] = ()
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for lbl, s in G.generator_labels:
                y = int(G.mul[x, s])
                if words[y] is None:
                    words[y] = words[x] + ((lbl, 1),)
                    nxt.append(y)
        frontier = nxt
    return [format_word(w) for w in words]


def finite_case_lefschetz(G, zeta, seed=DEFAULT_SEED, scene=None):
    """Lefschetz number of an automorphism of a finite group acting on a point.

    Runs the generic local formula with ``n = 0``; returns ``(report, cross_checks)``.
    """
    everything = np.arange(G.order, dtype=np.int32)
    act = kernels.twisted_action_table(G.mul, G.inv, zeta.image, everything, everything)
    empty = np.zeros((0, 0))
    labels = element_words(G)
    terms, contribution = local_contribution(
        G, [empty] * G.order, labels, act, [empty] * G.order, labels, seed
    )
    orbit = FixedOrbitDatum([], labels, labels, terms, contribution)
    _check_integer(contribution)
    lhs, rhs, count = burnside_identity_check(G, zeta, seed)
    checks = {
        "dual_fixed_count": lhs,
        "average_twisted_centralizer": rhs,
        "twisted_class_count": count,
    }
    if not (contribution == lhs == rhs == count):
        raise ValidationError(f"finite-group identity failed: {contribution}, {lhs}, {rhs}, {count}")
    diagnostics = {"backend": kernels.BACKEND, "seed": seed, "cross_checks": checks, "group_order": G.order}
    return LefschetzReport(scene or {}, [orbit], contribution, diagnostics), checks


def render_report(report, fmt="text"):
    if fmt == "structured":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    name = report.scene.get("name")
    if name:
        lines.append(f"scene: {name}")
    lines.append(f"fixed orbits: {len(report.orbits)}")
    for o in report.orbits:
        where = "point" if not o.point else "p = " + ", ".join(f"{v:.12g}" for v in o.point)
        lines.append(f"orbit {where}: |K_p| = {len(o.stabilizer)}, L_p = {{{', '.join(o.coset)}}}")
        for t in o.terms:
            lines.append(
                f"  g = {t.representative}  orbit size {len(t.orbit)}  |Gamma| = {len(t.stabilizer)}"
                f"  chi = {t.character}  average = {t.average}"
            )
        lines.append(f"  contribution: {o.contribution}")
    lines.append(f"Lefschetz number: {report.total}")
    cert = report.diagnostics.get("radius_certificate")
    if cert:
        state = "stable" if cert["stable"] else "NOT stable"
        lines.append(f"radius {cert['radius']:g} -> {cert['checked_radius']:g}: orbit set {state}")
    checks = report.diagnostics.get("cross_checks")
    if checks:
        lines.append(
            "cross-checks: fixed irreducibles {dual_fixed_count}, averaged twisted centralizers "
            "{average_twisted_centralizer}, twisted classes {twisted_class_count}".format(**checks)
        )
    return "\n".join(lines) + "\n"
