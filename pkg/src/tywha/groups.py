"""Finite abelian groups, their subgroup lattice, quotients, and bicharacters.

Groups are presented as products of cyclic factors ``Z_{n_1} x ... x Z_{n_k}``;
elements are tuples of canonical residues, the identity is the zero tuple.
Bicharacters are stored as rational phase matrices: ``chi(g, h) =
exp(2*pi*i * sum_ij g_i h_j M_ij)`` with ``M`` symmetric mod 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

from .errors import InvariantError, SizeError, StructuralError

GroupElt = tuple[int, ...]

SUBGROUP_ENUM_BOUND = 64


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups given by the tuple of factor orders."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors or any(n < 1 for n in self.factors):
            raise InvariantError(f"cyclic factors must all be >= 1, got {self.factors}")

    @classmethod
    def from_spec(cls, text: str) -> "FiniteAbelianGroup":
        """Parse a group spec string like ``"2,4"``."""
        try:
            factors = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise InvariantError(f"bad group spec {text!r}") from exc
        return cls(factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def zero(self) -> GroupElt:
        return (0,) * len(self.factors)

    def reduce(self, coords) -> GroupElt:
        if len(coords) != len(self.factors):
            raise InvariantError(f"element {coords!r} has wrong rank for {self}")
        return tuple(int(c) % n for c, n in zip(coords, self.factors))

    def add(self, a: GroupElt, b: GroupElt) -> GroupElt:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.factors))

    def neg(self, a: GroupElt) -> GroupElt:
        return tuple((-x) % n for x, n in zip(a, self.factors))

    def sub(self, a: GroupElt, b: GroupElt) -> GroupElt:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.factors))

    def elements(self) -> list[GroupElt]:
        """All elements in lexicographic order."""
        return list(product(*(range(n) for n in self.factors)))

    def __contains__(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.factors)
            and all(0 <= x < n for x, n in zip(a, self.factors))
        )

    def __str__(self) -> str:
        return "Z" + "xZ".join(str(n) for n in self.factors)


def _closure(group: FiniteAbelianGroup, gens) -> frozenset[GroupElt]:
    seen = {group.zero()}
    frontier = [group.reduce(g) for g in gens]
    seen.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen):
                c = group.add(a, b)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(seen)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup held as its full (frozen) element set."""

    group: FiniteAbelianGroup
    elements: frozenset[GroupElt]

    def __post_init__(self):
        elems = self.elements
        if self.group.zero() not in elems:
            raise InvariantError("subgroup must contain the identity")
        for a in elems:
            if a not in self.group:
                raise InvariantError(f"{a} is not a canonical element of {self.group}")
            if self.group.neg(a) not in elems:
                raise InvariantError(f"subgroup not closed under negation at {a}")
            for b in elems:
                if self.group.add(a, b) not in elems:
                    raise InvariantError(f"subgroup not closed under addition at {a}+{b}")
        if self.group.order % len(elems) != 0:
            raise InvariantError("subgroup order does not divide the group order")

    @classmethod
    def generated(cls, group: FiniteAbelianGroup, gens) -> "Subgroup":
        return cls(group, _closure(group, gens))

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "Subgroup":
        return cls(group, frozenset([group.zero()]))

    @classmethod
    def full(cls, group: FiniteAbelianGroup) -> "Subgroup":
        return cls(group, frozenset(group.elements()))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def sorted_elements(self) -> tuple[GroupElt, ...]:
        return tuple(sorted(self.elements))

    def __contains__(self, a: GroupElt) -> bool:
        return a in self.elements

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.sorted_elements) + "}"


def enumerate_subgroups(
    group: FiniteAbelianGroup, max_order: int = SUBGROUP_ENUM_BOUND
) -> list[Subgroup]:
    """All subgroups, in canonical (order, sorted elements) order.

    Grown by closure from smaller subgroups; safe only at desk scale, hence
    the order bound.
    """
    if group.order > max_order:
        raise SizeError(f"|G| = {group.order} exceeds subgroup enumeration bound {max_order}")
    trivial = frozenset([group.zero()])
    seen = {trivial}
    frontier = [trivial]
    all_elems = group.elements()
    while frontier:
        nxt = []
        for sub in frontier:
            for g in all_elems:
                if g in sub:
                    continue
                bigger = _closure(group, set(sub) | {g})
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    subs = [Subgroup(group, s) for s in seen]
    subs.sort(key=lambda s: (s.order, s.sorted_elements))
    return subs


@dataclass(frozen=True)
class Coset:
    """A coset of a subgroup, canonically represented by its smallest element."""

    subgroup: Subgroup
    elements: frozenset[GroupElt]

    @property
    def rep(self) -> GroupElt:
        return min(self.elements)

    def __contains__(self, a: GroupElt) -> bool:
        return a in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return f"{self.rep}+K"


@dataclass(frozen=True)
class QuotientGroup:
    """The quotient G/K with its translation action."""

    group: FiniteAbelianGroup
    subgroup: Subgroup
    cosets: tuple[Coset, ...] = field(init=False)

    def __post_init__(self):
        g, k = self.group, self.subgroup
        if k.group != g:
            raise InvariantError("subgroup belongs to a different group")
        seen: dict[GroupElt, frozenset[GroupElt]] = {}
        for a in g.elements():
            members = frozenset(g.add(a, h) for h in k.elements)
            seen[min(members)] = members
        cosets = tuple(Coset(k, seen[rep]) for rep in sorted(seen))
        if len(cosets) * k.order != g.order:
            raise InvariantError("cosets do not partition the group")
        object.__setattr__(self, "cosets", cosets)

    def __len__(self) -> int:
        return len(self.cosets)

    def coset_of(self, a: GroupElt) -> Coset:
        for c in self.cosets:
            if a in c:
                return c
        raise InvariantError(f"{a} is not an element of {self.group}")

    def translate(self, a: GroupElt, coset: Coset) -> Coset:
        return self.coset_of(self.group.add(a, coset.rep))


def quotient(group: FiniteAbelianGroup, subgroup: Subgroup) -> QuotientGroup:
    return QuotientGroup(group, subgroup)


def _parse_fraction(entry) -> Fraction:
    if isinstance(entry, str):
        return Fraction(entry)
    if isinstance(entry, int):
        return Fraction(entry)
    raise InvariantError(f"bicharacter matrix entries must be rationals, got {entry!r}")


@dataclass(frozen=True)
class Bicharacter:
    """Symmetric bicharacter as a rational phase matrix mod 1.

    ``phase(g, h)`` returns the rational t with chi(g, h) = exp(2*pi*i*t);
    all values have unit modulus by construction.
    """

    group: FiniteAbelianGroup
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        k = self.group.rank
        m = self.matrix
        if len(m) != k or any(len(row) != k for row in m):
            raise InvariantError(f"phase matrix must be {k}x{k}")
        norm = tuple(tuple(Fraction(x) % 1 for x in row) for row in m)
        object.__setattr__(self, "matrix", norm)
        for i in range(k):
            for j in range(k):
                if norm[i][j] != norm[j][i]:
                    raise InvariantError("phase matrix must be symmetric mod 1")
                if (self.group.factors[i] * norm[i][j]) % 1 != 0:
                    raise InvariantError(
                        f"entry M[{i}][{j}] = {norm[i][j]} is not defined mod Z_{self.group.factors[i]}"
                    )

    @classmethod
    def standard(cls, group: FiniteAbelianGroup) -> "Bicharacter":
        """The diagonal bicharacter exp(2*pi*i * sum_i g_i h_i / n_i)."""
        k = group.rank
        rows = tuple(
            tuple(Fraction(1, group.factors[i]) if i == j else Fraction(0) for j in range(k))
            for i in range(k)
        )
        return cls(group, rows)

    @classmethod
    def from_json(cls, group: FiniteAbelianGroup, data) -> "Bicharacter":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "matrix" not in data:
            raise InvariantError('bicharacter JSON must be {"matrix": [[...], ...]}')
        rows = tuple(tuple(_parse_fraction(x) for x in row) for row in data["matrix"])
        return cls(group, rows)

    def phase(self, g: GroupElt, h: GroupElt) -> Fraction:
        """Rational phase t of chi(g, h) = exp(2*pi*i*t), reduced mod 1."""
        total = Fraction(0)
        for i, gi in enumerate(g):
            if gi:
                row = self.matrix[i]
                for j, hj in enumerate(h):
                    if hj:
                        total += gi * hj * row[j]
        return total % 1

    def is_nondegenerate(self) -> bool:
        """True iff the only g pairing trivially with everything is 0."""
        gens = _generators(self.group)
        zero = self.group.zero()
        for g in self.group.elements():
            if g == zero:
                continue
            if all(self.phase(g, e) == 0 for e in gens):
                return False
        return True

    def to_json(self) -> dict:
        return {"matrix": [[str(x) for x in row] for row in self.matrix]}


def _generators(group: FiniteAbelianGroup) -> list[GroupElt]:
    gens = []
    for i in range(group.rank):
        e = [0] * group.rank
        e[i] = 1
        gens.append(group.reduce(e))
    return gens


def bichar_eval(chi: Bicharacter, g: GroupElt, h: GroupElt) -> Fraction:
    return chi.phase(g, h)


def orthogonal(chi: Bicharacter, subgroup: Subgroup) -> Subgroup:
    """The annihilator {g : chi(k, g) = 1 for all k in K}."""
    if not chi.is_nondegenerate():
        raise InvariantError("bicharacter is degenerate")
    group = chi.group
    perp = frozenset(
        g for g in group.elements() if all(chi.phase(k, g) == 0 for k in subgroup.elements)
    )
    result = Subgroup(group, perp)
    if subgroup.order * result.order != group.order:
        raise StructuralError(
            f"|K|*|Kperp| = {subgroup.order}*{result.order} != |G| = {group.order}"
        )
    return result


@dataclass(frozen=True)
class SubgroupCharacter:
    """An additive character rho: K -> Q/Z, stored as phases on all of K."""

    subgroup: Subgroup
    phases: tuple[tuple[GroupElt, Fraction], ...]

    def __post_init__(self):
        table = {k: v % 1 for k, v in self.phases}
        group = self.subgroup.group
        if set(table) != set(self.subgroup.elements):
            raise InvariantError("character must be defined on every element of K")
        if table[group.zero()] != 0:
            raise InvariantError("character must vanish at the identity")
        for a in self.subgroup.elements:
            for b in self.subgroup.elements:
                if (table[a] + table[b]) % 1 != table[group.add(a, b)]:
                    raise InvariantError(f"character not additive at {a}+{b}")
        object.__setattr__(self, "phases", tuple(sorted(table.items())))

    @classmethod
    def trivial(cls, subgroup: Subgroup) -> "SubgroupCharacter":
        return cls(subgroup, tuple((k, Fraction(0)) for k in subgroup.sorted_elements))

    @classmethod
    def from_pairing(
        cls, chi: Bicharacter, subgroup: Subgroup, g: GroupElt
    ) -> "SubgroupCharacter":
        """The character k -> chi(g, k) of K induced by pairing with g."""
        return cls(subgroup, tuple((k, chi.phase(g, k)) for k in subgroup.sorted_elements))

    def phase(self, k: GroupElt) -> Fraction:
        for elt, value in self.phases:
            if elt == k:
                return value
        raise InvariantError(f"{k} is not in the character's subgroup")


def characters(chi: Bicharacter, subgroup: Subgroup) -> list[SubgroupCharacter]:
    """All characters of K, realized by pairing with coset reps of G/K_perp."""
    perp = orthogonal(chi, subgroup)
    reps = [c.rep for c in quotient(chi.group, perp).cosets]
    chars = [SubgroupCharacter.from_pairing(chi, subgroup, u) for u in reps]
    if len({c.phases for c in chars}) != len(chars):
        raise StructuralError("induced characters of K are not distinct")
    return chars


def orthogonal_rho(
    chi: Bicharacter, subgroup: Subgroup, rho: SubgroupCharacter
) -> frozenset[GroupElt]:
    """The twisted annihilator {g : chi(g, k) = rho(-k) for all k in K}.

    A coset of the plain annihilator; equals it when rho is trivial.
    """
    if rho.subgroup != subgroup:
        raise InvariantError("character is defined on a different subgroup")
    group = chi.group
    result = frozenset(
        g
        for g in group.elements()
        if all(chi.phase(g, k) == rho.phase(group.neg(k)) for k in subgroup.elements)
    )
    return result
