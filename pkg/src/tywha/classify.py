"""Orbit enumeration of isomorphism classes.

Weak-coideal classes are indexed by a subgroup K together with a pair of
coset subsets (Z0, Z1) in G/K x G/Kperp (at most one side larger than a
singleton), taken up to translations, and additionally up to the swap of
the two sides when K equals its own annihilator.  Algebra classes replace
subsets by nonnegative multiplicity vectors.  Every orbit count is
cross-checked by the Burnside average, and the coideal-containing orbits
are cross-checked against their directly constructed list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import TYAlgebra
from .coideals import (
    CoidealSpec,
    build_I_Omega_K,
    build_no_m,
    build_with_m,
    is_coideal,
    is_indecomposable,
    measured_dims,
    spectral_dims,
    verify_weak_coideal,
)
from .errors import InvariantError, SizeError, StructuralError
from .groups import (
    Bicharacter,
    Coset,
    FiniteAbelianGroup,
    QuotientGroup,
    Subgroup,
    enumerate_subgroups,
    orthogonal,
    quotient,
)

CLASSIFY_ORDER_BOUND = 16
ENUMERATION_BOUND = 2_000_000

SubsetPair = tuple[tuple, tuple]  # sorted coset reps for (Z0, Z1)


def _encode(z0, z1) -> SubsetPair:
    return (tuple(sorted(c.rep for c in z0)), tuple(sorted(c.rep for c in z1)))


def _orbit(point, action_elems, act) -> frozenset:
    return frozenset(act(h, point) for h in action_elems)


def orbit_partition(points, action_elems, act) -> list[frozenset]:
    """Partition a finite point set into orbits of a finite group action."""
    seen = set()
    orbits = []
    for p in sorted(points):
        if p in seen:
            continue
        orb = _orbit(p, action_elems, act)
        if not orb <= set(points):
            raise StructuralError("action does not preserve the point set")
        seen.update(orb)
        orbits.append(orb)
    return orbits


def canonical_form(point, action_elems, act):
    return min(_orbit(point, action_elems, act))


def burnside_check(points, action_elems, act) -> int:
    """Orbit count by the fixed-point average, cross-checked against the
    direct partition; a mismatch means the action or partition code is
    broken."""
    points = set(points)
    total = sum(1 for h in action_elems for p in points if act(h, p) == p)
    avg = Fraction(total, len(action_elems))
    direct = len(orbit_partition(points, action_elems, act))
    if avg.denominator != 1 or avg != direct:
        raise StructuralError(
            f"Burnside average {avg} does not match {direct} enumerated orbits"
        )
    return direct


@dataclass(frozen=True)
class OrbitRep:
    """Canonical representative of one isomorphism class."""

    subgroup: Subgroup
    z0: tuple
    z1: tuple
    coideal: bool
    orbit_size: int

    def to_dict(self) -> dict:
        return {
            "rep": {
                "Z0": [list(r) for r in self.z0],
                "Z1": [list(r) for r in self.z1],
            },
            "size": self.orbit_size,
            "coideal_flag": self.coideal,
        }


@dataclass
class SubgroupClasses:
    subgroup: Subgroup
    perp: Subgroup
    flip: bool
    orbits: list[OrbitRep]
    burnside_count: int

    @property
    def coideal_count(self) -> int:
        return sum(1 for o in self.orbits if o.coideal)

    def to_dict(self) -> dict:
        return {
            "K": [list(e) for e in self.subgroup.sorted_elements],
            "K_perp": [list(e) for e in self.perp.sorted_elements],
            "action": "translations+flip" if self.flip else "translations",
            "n_classes": len(self.orbits),
            "n_coideal": self.coideal_count,
            "burnside_count": self.burnside_count,
            "burnside_ok": self.burnside_count == len(self.orbits),
            "orbits": [o.to_dict() for o in self.orbits],
        }


@dataclass
class ClassificationReport:
    group: FiniteAbelianGroup
    kind: str
    per_subgroup: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(len(s.orbits) for s in self.per_subgroup)

    @property
    def total_coideal(self) -> int:
        return sum(s.coideal_count for s in self.per_subgroup)

    def to_dict(self) -> dict:
        out = {
            "group": list(self.group.factors),
            "kind": self.kind,
            "total_classes": self.total,
            "per_subgroup": [s.to_dict() for s in self.per_subgroup],
        }
        if self.kind == "weak-coideals":
            out["total_coideal_classes"] = self.total_coideal
        return out


def _coset_index(quot: QuotientGroup) -> dict[Coset, int]:
    return {c: i for i, c in enumerate(quot.cosets)}


def _subset_action(q0: QuotientGroup, q1: QuotientGroup, flip: bool):
    """Action elements and action map for subset pairs.

    Elements are (t0, t1, s): translate Z0 by t0 and Z1 by t1, then swap the
    sides s times.  The swap only arises when the two quotients coincide.
    """
    group = q0.group

    def act(h, point):
        t0, t1, s = h
        z0, z1 = point
        z0 = tuple(sorted(q0.translate(t0, q0.coset_of(r)).rep for r in z0))
        z1 = tuple(sorted(q1.translate(t1, q1.coset_of(r)).rep for r in z1))
        return (z1, z0) if s else (z0, z1)

    reps0 = [c.rep for c in q0.cosets]
    reps1 = [c.rep for c in q1.cosets]
    flips = (0, 1) if flip else (0,)
    elems = [(t0, t1, s) for t0 in reps0 for t1 in reps1 for s in flips]
    return elems, act


def _valid_subset_pairs(q0: QuotientGroup, q1: QuotientGroup):
    """All nonempty (Z0, Z1) with at most one side beyond a singleton."""
    n0, n1 = len(q0.cosets), len(q1.cosets)
    if 2 ** (n0 + n1) > ENUMERATION_BOUND:
        raise SizeError("subset enumeration too large")
    reps0 = [c.rep for c in q0.cosets]
    reps1 = [c.rep for c in q1.cosets]
    points = []
    for mask0 in range(2**n0):
        z0 = tuple(reps0[i] for i in range(n0) if mask0 >> i & 1)
        for mask1 in range(2**n1):
            z1 = tuple(reps1[i] for i in range(n1) if mask1 >> i & 1)
            if not z0 and not z1:
                continue
            if len(z0) > 1 and len(z1) > 1:
                continue
            points.append((z0, z1))
    return points


def _contains_coideal(point: SubsetPair, n0: int, n1: int) -> bool:
    """Whether the class of (Z0, Z1) contains a coideal: a lone singleton, or
    a full side paired with a singleton on the other side."""
    z0, z1 = point
    if not z1:
        return len(z0) == 1
    if not z0:
        return len(z1) == 1
    return (len(z0) == n0 and len(z1) == 1) or (len(z1) == n1 and len(z0) == 1)


def weak_coideal_classes(
    group: FiniteAbelianGroup,
    chi: Bicharacter,
    max_order: int = CLASSIFY_ORDER_BOUND,
    _include_flip: bool | None = None,
) -> ClassificationReport:
    """Enumerate all weak-coideal isomorphism classes, flag the
    coideal-containing ones, and cross-check counts."""
    if group.order > max_order:
        raise SizeError(f"|G| = {group.order} exceeds classification bound {max_order}")
    report = ClassificationReport(group, "weak-coideals")
    for K in enumerate_subgroups(group):
        perp = orthogonal(chi, K)
        q0 = quotient(group, K)
        q1 = quotient(group, perp)
        flip = K.elements == perp.elements
        used_flip = flip if _include_flip is None else (_include_flip and flip)
        elems, act = _subset_action(q0, q1, used_flip)
        points = _valid_subset_pairs(q0, q1)
        orbits = orbit_partition(points, elems, act)
        count = burnside_check(points, elems, act)
        reps = []
        for orb in orbits:
            flags = {_contains_coideal(p, len(q0.cosets), len(q1.cosets)) for p in orb}
            if len(flags) != 1:
                raise StructuralError("coideal flag is not constant on an orbit")
            z0, z1 = min(orb)
            reps.append(OrbitRep(K, z0, z1, flags.pop(), len(orb)))
        reps.sort(key=lambda r: (r.z0, r.z1))
        entry = SubgroupClasses(K, perp, flip, reps, count)
        expected = coideal_orbits(group, chi, K)
        flagged = [(r.z0, r.z1) for r in reps if r.coideal]
        if sorted(flagged) != sorted((r.z0, r.z1) for r in expected):
            raise StructuralError(
                f"flagged orbits for K={K} disagree with the coideal orbit list"
            )
        report.per_subgroup.append(entry)
    return report


def coideal_orbits(group: FiniteAbelianGroup, chi: Bicharacter, K: Subgroup) -> list[OrbitRep]:
    """Directly construct the coideal-containing orbits for one subgroup:
    four of them in general, two when K is its own annihilator."""
    perp = orthogonal(chi, K)
    q0 = quotient(group, K)
    q1 = quotient(group, perp)
    flip = K.elements == perp.elements
    elems, act = _subset_action(q0, q1, flip)
    full0 = tuple(sorted(c.rep for c in q0.cosets))
    full1 = tuple(sorted(c.rep for c in q1.cosets))
    lam = (q0.coset_of(group.zero()).rep,)
    mu = (q1.coset_of(group.zero()).rep,)
    seeds = [(lam, ()), ((), mu), (full0, mu), (lam, full1)]
    seen = {}
    for seed in seeds:
        orb = _orbit(seed, elems, act)
        seen[min(orb)] = len(orb)
    expected = 2 if flip else 4
    if len(seen) != expected:
        raise StructuralError(
            f"constructed {len(seen)} coideal orbits for K={K}, expected {expected}"
        )
    out = [
        OrbitRep(K, z0, z1, True, size) for (z0, z1), size in sorted(seen.items())
    ]
    return out


# -- algebra classes (multiplicity data) ----------------------------------------


def _vector_action(q0: QuotientGroup, q1: QuotientGroup, flip: bool):
    def act(h, point):
        t0, t1, s = h
        m0, m1 = point
        m0 = tuple(
            m0[q0.cosets.index(q0.translate(t0, lam))] for lam in q0.cosets
        )
        m1 = tuple(
            m1[q1.cosets.index(q1.translate(t1, lam))] for lam in q1.cosets
        )
        return (m1, m0) if s else (m0, m1)

    reps0 = [c.rep for c in q0.cosets]
    reps1 = [c.rep for c in q1.cosets]
    flips = (0, 1) if flip else (0,)
    elems = [(t0, t1, s) for t0 in reps0 for t1 in reps1 for s in flips]
    return elems, act


def _single_vector_action(q: QuotientGroup):
    def act(t, point):
        return tuple(point[q.cosets.index(q.translate(t, lam))] for lam in q.cosets)

    return [c.rep for c in q.cosets], act


def g_algebra_classes(
    group: FiniteAbelianGroup,
    chi: Bicharacter,
    max_mult: int = 2,
    max_order: int = CLASSIFY_ORDER_BOUND,
) -> ClassificationReport:
    """Bounded enumeration of algebra isomorphism classes: multiplicity
    vectors up to translations (self-paired type only for K equal to its
    annihilator, plus the swap there)."""
    if max_mult < 1:
        raise InvariantError("max_mult must be >= 1")
    if group.order > max_order:
        raise SizeError(f"|G| = {group.order} exceeds classification bound {max_order}")
    report = ClassificationReport(group, "g-algebras")
    for K in enumerate_subgroups(group):
        perp = orthogonal(chi, K)
        q0 = quotient(group, K)
        q1 = quotient(group, perp)
        flip = K.elements == perp.elements
        n0, n1 = len(q0.cosets), len(q1.cosets)
        if (max_mult + 1) ** (n0 + n1) > ENUMERATION_BOUND:
            raise SizeError("multiplicity enumeration too large; lower max_mult")

        entry = {"K": [list(e) for e in K.sorted_elements],
                 "K_perp": [list(e) for e in perp.sorted_elements],
                 "flip_action": flip,
                 "types": {}}

        if flip:
            points = [
                v for v in product(range(max_mult + 1), repeat=n0) if any(v)
            ]
            elems, act = _single_vector_action(q0)
            orbits = orbit_partition(points, elems, act)
            count = burnside_check(points, elems, act)
            entry["types"]["self-paired"] = {
                "n_classes": len(orbits),
                "burnside_count": count,
                "orbits": sorted(list(min(o)) for o in orbits),
            }

        points = [
            (m0, m1)
            for m0 in product(range(max_mult + 1), repeat=n0)
            for m1 in product(range(max_mult + 1), repeat=n1)
            if any(m0) or any(m1)
        ]
        elems, act = _vector_action(q0, q1, flip)
        orbits = orbit_partition(points, elems, act)
        count = burnside_check(points, elems, act)
        entry["types"]["decomposed"] = {
            "n_classes": len(orbits),
            "burnside_count": count,
            "orbits": sorted([list(min(o)[0]), list(min(o)[1])] for o in orbits),
        }
        report.per_subgroup.append(_DictEntry(entry))
    return report


@dataclass
class _DictEntry:
    """Adapter so mixed report entries serialize uniformly."""

    payload: dict

    @property
    def orbits(self):
        return [
            orb
            for t in self.payload["types"].values()
            for orb in t["orbits"]
        ]

    @property
    def coideal_count(self) -> int:
        return 0

    def to_dict(self) -> dict:
        return self.payload


# -- realization -----------------------------------------------------------------


def realize_and_verify(alg: TYAlgebra, rep: OrbitRep) -> dict:
    """Build a concrete representative of an orbit, run the full coideal
    verification, and check the coideal flag, indecomposability, and the
    predicted fiber dimensions."""
    group = alg.group
    K = rep.subgroup
    perp = orthogonal(alg.bichar, K)
    q0 = quotient(group, K)
    q1 = quotient(group, perp)
    z0 = [q0.coset_of(r) for r in rep.z0]
    z1 = [q1.coset_of(r) for r in rep.z1]

    if z0 and z1:
        # coideal classes realize on the side whose Z is a full quotient, so
        # that the representative itself is unital in B
        if rep.coideal and len(z0) == len(q0.cosets) and len(z1) == 1:
            wc = build_with_m(alg, K, z0, z1[0])
        elif rep.coideal and len(z1) == len(q1.cosets) and len(z0) == 1:
            wc = build_with_m(alg, perp, z1, z0[0])
        elif len(z1) == 1:
            wc = build_with_m(alg, K, z0, z1[0])
        elif len(z0) == 1:
            wc = build_with_m(alg, perp, z1, z0[0])
        else:  # pragma: no cover - excluded by the class shape
            raise InvariantError("no builder matches this class shape")
    elif z0:
        if len(z0) == 1 and rep.coideal:
            wc = build_I_Omega_K(alg, K)
        else:
            wc = build_no_m(alg, K, z0, side=0)
    else:
        if len(z1) == 1 and rep.coideal:
            wc = build_I_Omega_K(alg, perp)
        else:
            wc = build_no_m(alg, K, z1, side=1)

    veri = verify_weak_coideal(wc)
    if not veri.passed:
        raise StructuralError(f"realized representative fails verification: {rep}")
    flag = is_coideal(wc)
    if flag != rep.coideal:
        raise StructuralError(f"coideal flag mismatch for {rep}: built {flag}")
    indec = is_indecomposable(wc)
    if not indec:
        raise StructuralError(f"realized representative is decomposable: {rep}")
    predicted = spectral_dims(CoidealSpec(K, frozenset(z0), frozenset(z1)), alg)
    actual = measured_dims(wc)
    dims_ok = all(
        predicted.get(b, 0) == actual.get(b, 0) for b in set(predicted) | set(actual)
    )
    if not dims_ok:
        raise StructuralError(f"fiber dimensions disagree for {rep}")
    return {
        "rep": rep.to_dict(),
        "builder": wc.label,
        "dim": wc.dim,
        "verified": True,
        "is_coideal": flag,
        "indecomposable": indec,
        "dims_match": dims_ok,
    }
