"""The weak Hopf C*-algebra attached to Tambara-Yamagami data (G, chi, tau).

The algebra lives on ``B = sum_x H^x (x) conj(H^x)`` where x runs over the
simple objects: the elements of G plus one extra object ``m``.  The fiber
spaces have distinguished bases

    H^g:  v^g_h (h in G) and v^g_m            (dimension |G| + 1)
    H^m:  v^m_g and v^m_{~g} (g in G)         (dimension 2|G|)

and all structure maps (product, coproduct, counit, antipode, involution)
are given by closed-form tables in these bases.  ``tau = sign / sqrt(|G|)``.

Everything is verified numerically by :meth:`TYAlgebra.verify_axioms`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import sqrt, pi
from cmath import exp as cexp

import numpy as np

from .errors import InvariantError, StructuralError
from .groups import Bicharacter, FiniteAbelianGroup, GroupElt
from .linalg import DEFAULT_TOL, SparseVec, Subspace, distance, nullspace

SLOT_GRP = 0
SLOT_M = 1
SLOT_BAR = 2


@dataclass(frozen=True, order=True)
class BlockLabel:
    """Label of a simple object: a group element, or the extra object m."""

    kind: int
    g: GroupElt = ()

    @classmethod
    def grp(cls, g: GroupElt) -> "BlockLabel":
        return cls(0, tuple(g))

    @classmethod
    def m(cls) -> "BlockLabel":
        return cls(1, ())

    @property
    def is_m(self) -> bool:
        return self.kind == 1

    def __str__(self) -> str:
        return "m" if self.is_m else ",".join(str(x) for x in self.g)


@dataclass(frozen=True, order=True)
class Slot:
    """Basis slot inside a fiber space.

    Group blocks carry group slots v^g_h plus one m slot v^g_m; the m block
    carries unbarred slots v^m_g and barred slots v^m_{~g}.
    """

    kind: int
    g: GroupElt = ()

    @classmethod
    def grp(cls, g: GroupElt) -> "Slot":
        return cls(SLOT_GRP, tuple(g))

    @classmethod
    def m(cls) -> "Slot":
        return cls(SLOT_M, ())

    @classmethod
    def bar(cls, g: GroupElt) -> "Slot":
        return cls(SLOT_BAR, tuple(g))

    def __str__(self) -> str:
        if self.kind == SLOT_M:
            return "m"
        body = ",".join(str(x) for x in self.g)
        return f"~{body}" if self.kind == SLOT_BAR else body


@dataclass(frozen=True, order=True)
class BasisUnit:
    """Matrix-unit basis element (x; row, col) = v^x_row (x) conj(v^x_col)."""

    block: BlockLabel
    row: Slot
    col: Slot

    def __str__(self) -> str:
        return f"({self.block}; {self.row}, {self.col})"


@dataclass(frozen=True)
class TYData:
    """Input data: finite abelian group, nondegenerate symmetric bicharacter,
    and the sign of tau = +-|G|^{-1/2}."""

    group: FiniteAbelianGroup
    bichar: Bicharacter
    tau_sign: int = 1

    def __post_init__(self):
        if self.tau_sign not in (1, -1):
            raise InvariantError(f"tau sign must be +1 or -1, got {self.tau_sign}")
        if self.bichar.group != self.group:
            raise InvariantError("bicharacter belongs to a different group")
        if not self.bichar.is_nondegenerate():
            raise InvariantError("bicharacter is degenerate")


@dataclass
class AxiomCheck:
    name: str
    residual: float
    passed: bool
    witness: str = ""


@dataclass
class AxiomReport:
    label: str
    eps: float
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "tolerance": self.eps,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "residual": c.residual,
                    "passed": c.passed,
                    "witness": c.witness,
                }
                for c in self.checks
            ],
        }

    def summary(self) -> str:
        lines = [f"axiom checks for {self.label} (tolerance {self.eps:g})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = f"  [{c.witness}]" if (c.witness and not c.passed) else ""
            lines.append(f"  {status}  {c.name:<44} max residual {c.residual:.3e}{extra}")
        return "\n".join(lines)


class HaarFunctional:
    """The normalized invariant functional, as a coefficient vector over the
    matrix-unit basis."""

    def __init__(self, algebra: "TYAlgebra", coeffs: np.ndarray, residual: float):
        self.algebra = algebra
        self.coeffs = coeffs
        self.residual = residual

    def __call__(self, a: SparseVec) -> complex:
        return complex(sum(c * self.coeffs[i] for i, c in a.items()))


class TYAlgebra:
    """The weak Hopf C*-algebra of (G, chi, tau), with its verification suite.

    Elements of B are ``SparseVec`` objects keyed by integer positions into
    :attr:`units`; elements of B (x) B are keyed by position pairs.  Fiber
    vectors (elements of one H^x or a direct sum of them) are keyed by
    ``(BlockLabel, Slot)`` pairs.
    """

    def __init__(
        self,
        group: FiniteAbelianGroup,
        bichar: Bicharacter | None = None,
        tau_sign: int = 1,
        eps: float = DEFAULT_TOL,
    ):
        bichar = Bicharacter.standard(group) if bichar is None else bichar
        self.data = TYData(group, bichar, tau_sign)
        self.group = group
        self.bichar = bichar
        self.tau_sign = tau_sign
        self.eps = float(eps)
        n = group.order
        self.sqrt_order = sqrt(n)
        self.tau = tau_sign / self.sqrt_order

        elems = group.elements()
        self.blocks: list[BlockLabel] = [BlockLabel.grp(g) for g in elems] + [BlockLabel.m()]
        self._slots: dict[BlockLabel, tuple[Slot, ...]] = {}
        for b in self.blocks:
            if b.is_m:
                self._slots[b] = tuple(Slot.grp(g) for g in elems) + tuple(
                    Slot.bar(g) for g in elems
                )
            else:
                self._slots[b] = tuple(Slot.grp(g) for g in elems) + (Slot.m(),)
        self.units: list[BasisUnit] = [
            BasisUnit(b, r, c) for b in self.blocks for r in self._slots[b] for c in self._slots[b]
        ]
        self.unit_pos: dict[BasisUnit, int] = {u: i for i, u in enumerate(self.units)}
        self.dim = len(self.units)

        # involution/antipode coefficients on the m-block fiber; group-block
        # coefficients are 1
        self._psi_unb = self.sqrt_order
        self._psi_bar = self.sqrt_order / self.tau
        self._phi_unb = 1.0 / self.sqrt_order
        self._phi_bar = self.tau / self.sqrt_order

        self._chi_cache: dict[tuple[GroupElt, GroupElt], complex] = {}
        self._circ_cache: dict = {}
        self._mult_cache: dict[tuple[int, int], tuple] = {}
        self._coprod_cache: dict[int, tuple] = {}
        self._star_cache: dict[int, tuple[int, complex]] = {}
        self._antipode_cache: dict[int, tuple[int, complex]] = {}
        self._eps_t_cache: dict[int, SparseVec] = {}
        self._eps_s_cache: dict[int, SparseVec] = {}
        self._eps_prod_cache: dict[tuple[int, int], complex] = {}
        self._unit_element: SparseVec | None = None
        self._coproduct_of_unit: SparseVec | None = None
        self._counital: tuple[Subspace, Subspace] | None = None

    # -- fiber-space structure ------------------------------------------------

    def slots(self, block: BlockLabel) -> tuple[Slot, ...]:
        return self._slots[block]

    def chi(self, g: GroupElt, h: GroupElt) -> complex:
        key = (g, h)
        val = self._chi_cache.get(key)
        if val is None:
            val = cexp(2j * pi * float(self.bichar.phase(g, h)))
            self._chi_cache[key] = val
        return val

    def fiber_basis(self, block: BlockLabel, slot: Slot) -> SparseVec:
        if slot not in self._slots[block]:
            raise InvariantError(f"slot {slot} does not belong to block {block}")
        return SparseVec.basis((block, slot))

    def _circ_basis(self, x: BlockLabel, a: Slot, y: BlockLabel, c: Slot) -> tuple:
        """Structure constants of the fiber product on basis vectors."""
        key = (x, a, y, c)
        cached = self._circ_cache.get(key)
        if cached is not None:
            return cached
        G = self.group
        terms: tuple = ()
        if not x.is_m and not y.is_m:
            g, h = x.g, y.g
            if a.kind == SLOT_GRP and c.kind == SLOT_GRP:
                # v^g_k . v^h_{h+k} = v^{g+h}_{h+k}
                if c.g == G.add(h, a.g):
                    terms = (((BlockLabel.grp(G.add(g, h)), Slot.grp(c.g)), 1.0 + 0j),)
            elif a.kind == SLOT_M and c.kind == SLOT_M:
                # v^g_m . v^h_m = v^{g+h}_m
                terms = (((BlockLabel.grp(G.add(g, h)), Slot.m()), 1.0 + 0j),)
        elif not x.is_m and y.is_m:
            g = x.g
            if a.kind == SLOT_GRP and c.kind == SLOT_GRP:
                # v^g_k . v^m_k = v^m_{k-g}
                if a.g == c.g:
                    terms = (((BlockLabel.m(), Slot.grp(G.sub(c.g, g))), 1.0 + 0j),)
            elif a.kind == SLOT_M and c.kind == SLOT_BAR:
                # v^g_m . v^m_{~k} = chi(g,k) v^m_{~k}
                terms = (((BlockLabel.m(), c), self.chi(g, c.g)),)
        elif x.is_m and not y.is_m:
            h = y.g
            if a.kind == SLOT_GRP and c.kind == SLOT_M:
                # v^m_k . v^h_m = chi(h,k) v^m_k
                terms = (((BlockLabel.m(), a), self.chi(h, a.g)),)
            elif a.kind == SLOT_BAR and c.kind == SLOT_GRP:
                # v^m_{~k} . v^h_{h+k} = v^m_{~(h+k)}
                if c.g == G.add(h, a.g):
                    terms = (((BlockLabel.m(), Slot.bar(c.g)), 1.0 + 0j),)
        else:
            if a.kind == SLOT_GRP and c.kind == SLOT_BAR:
                # v^m_h . v^m_{~k} = v^{k-h}_k
                terms = (((BlockLabel.grp(G.sub(c.g, a.g)), Slot.grp(c.g)), 1.0 + 0j),)
            elif a.kind == SLOT_BAR and c.kind == SLOT_GRP and a.g == c.g:
                # v^m_{~h} . v^m_h = tau * sum_p conj(chi(p,h)) v^p_m
                terms = tuple(
                    ((BlockLabel.grp(p), Slot.m()), self.tau * self.chi(p, a.g).conjugate())
                    for p in G.elements()
                )
        self._circ_cache[key] = terms
        return terms

    def circ(self, u: SparseVec, w: SparseVec) -> SparseVec:
        """Bilinear fiber product of vectors keyed by (block, slot)."""
        out = SparseVec()
        for (x, a), cu in u.items():
            for (y, c), cw in w.items():
                for key, coeff in self._circ_basis(x, a, y, c):
                    out.data[key] = out.data.get(key, 0.0) + cu * cw * coeff
        return out.prune(self.eps)

    def _psi(self, x: BlockLabel, s: Slot) -> tuple[complex, BlockLabel, Slot]:
        """Fiber involution table: the (coeff, block, slot) image of slot s."""
        if not x.is_m:
            g = x.g
            target = BlockLabel.grp(self.group.neg(g))
            if s.kind == SLOT_GRP:
                return 1.0 + 0j, target, Slot.grp(self.group.sub(s.g, g))
            return 1.0 + 0j, target, Slot.m()
        if s.kind == SLOT_GRP:
            return complex(self._psi_unb), x, Slot.bar(s.g)
        return complex(self._psi_bar), x, Slot.grp(s.g)

    def _phi(self, x: BlockLabel, s: Slot) -> tuple[complex, BlockLabel, Slot]:
        """Conjugate-fiber identification used by the second tensor leg."""
        if not x.is_m:
            g = x.g
            target = BlockLabel.grp(self.group.neg(g))
            if s.kind == SLOT_GRP:
                return 1.0 + 0j, target, Slot.grp(self.group.sub(s.g, g))
            return 1.0 + 0j, target, Slot.m()
        if s.kind == SLOT_GRP:
            return complex(self._phi_unb), x, Slot.bar(s.g)
        return complex(self._phi_bar), x, Slot.grp(s.g)

    def sharp(self, u: SparseVec) -> SparseVec:
        """Conjugate-linear fiber involution on vectors keyed by (block, slot)."""
        out = SparseVec()
        for (x, s), c in u.items():
            coeff, tb, ts = self._psi(x, s)
            out.data[(tb, ts)] = out.data.get((tb, ts), 0.0) + c.conjugate() * coeff
        return out.prune(self.eps)

    # -- algebra structure ----------------------------------------------------

    def basis_element(self, block: BlockLabel, row: Slot, col: Slot) -> SparseVec:
        return SparseVec.basis(self.unit_pos[BasisUnit(block, row, col)])

    def _mult(self, i: int, j: int) -> tuple:
        key = (i, j)
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        ui, uj = self.units[i], self.units[j]
        p = self._circ_basis(ui.block, ui.row, uj.block, uj.row)
        q = self._circ_basis(ui.block, ui.col, uj.block, uj.col)
        acc: dict[int, complex] = {}
        for (zb, zi), cp in p:
            for (wb, wj), cq in q:
                if zb != wb:
                    continue
                k = self.unit_pos[BasisUnit(zb, zi, wj)]
                acc[k] = acc.get(k, 0.0) + cp * cq.conjugate()
        terms = tuple((k, v) for k, v in acc.items() if abs(v) > self.eps)
        self._mult_cache[key] = terms
        return terms

    def unit_product(self, i: int, j: int) -> tuple:
        """Structure constants of u_i u_j as ((k, coeff), ...)."""
        return self._mult(i, j)

    def multiply(self, a: SparseVec, b: SparseVec) -> SparseVec:
        out: dict[int, complex] = {}
        for i, ca in a.items():
            for j, cb in b.items():
                s = ca * cb
                for k, c in self._mult(i, j):
                    out[k] = out.get(k, 0.0) + s * c
        return SparseVec(out).prune(self.eps)

    def unit(self) -> SparseVec:
        if self._unit_element is None:
            zero_block = self.blocks[self.group.elements().index(self.group.zero())]
            slots = self._slots[zero_block]
            self._unit_element = SparseVec(
                {self.unit_pos[BasisUnit(zero_block, r, c)]: 1.0 + 0j for r in slots for c in slots}
            )
        return self._unit_element

    def _coprod(self, i: int) -> tuple:
        cached = self._coprod_cache.get(i)
        if cached is not None:
            return cached
        u = self.units[i]
        terms = tuple(
            (
                self.unit_pos[BasisUnit(u.block, u.row, s)],
                self.unit_pos[BasisUnit(u.block, s, u.col)],
            )
            for s in self._slots[u.block]
        )
        self._coprod_cache[i] = terms
        return terms

    def coproduct(self, a: SparseVec) -> SparseVec:
        out: dict[tuple[int, int], complex] = {}
        for i, c in a.items():
            for pair in self._coprod(i):
                out[pair] = out.get(pair, 0.0) + c
        return SparseVec(out).prune(self.eps)

    def counit(self, a: SparseVec) -> complex:
        total = 0.0 + 0j
        for i, c in a.items():
            u = self.units[i]
            if u.row == u.col:
                total += c
        return total

    def _star_unit(self, i: int) -> tuple[int, complex]:
        cached = self._star_cache.get(i)
        if cached is None:
            u = self.units[i]
            cr, br, sr = self._psi(u.block, u.row)
            cc, bc, sc = self._phi(u.block, u.col)
            if br != bc:
                raise StructuralError(f"involution split blocks on {u}")
            cached = (self.unit_pos[BasisUnit(br, sr, sc)], cr * cc)
            self._star_cache[i] = cached
        return cached

    def star(self, a: SparseVec) -> SparseVec:
        out: dict[int, complex] = {}
        for i, c in a.items():
            k, coeff = self._star_unit(i)
            out[k] = out.get(k, 0.0) + c.conjugate() * coeff
        return SparseVec(out).prune(self.eps)

    def _antipode_unit(self, i: int) -> tuple[int, complex]:
        cached = self._antipode_cache.get(i)
        if cached is None:
            u = self.units[i]
            cr, br, sr = self._psi(u.block, u.col)
            cc, bc, sc = self._phi(u.block, u.row)
            if br != bc:
                raise StructuralError(f"antipode split blocks on {u}")
            cached = (self.unit_pos[BasisUnit(br, sr, sc)], cr * cc)
            self._antipode_cache[i] = cached
        return cached

    def antipode(self, a: SparseVec) -> SparseVec:
        out: dict[int, complex] = {}
        for i, c in a.items():
            k, coeff = self._antipode_unit(i)
            out[k] = out.get(k, 0.0) + c * coeff
        return SparseVec(out).prune(self.eps)

    # -- tensor helpers over B (x) B -------------------------------------------

    def tensor(self, a: SparseVec, b: SparseVec) -> SparseVec:
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                out[(i, j)] = ca * cb
        return SparseVec(out)

    def tensor_multiply(self, s: SparseVec, t: SparseVec) -> SparseVec:
        out: dict[tuple[int, int], complex] = {}
        for (i1, j1), c1 in s.items():
            for (i2, j2), c2 in t.items():
                left = self._mult(i1, i2)
                if not left:
                    continue
                right = self._mult(j1, j2)
                if not right:
                    continue
                c = c1 * c2
                for k, ck in left:
                    for l, cl in right:
                        key = (k, l)
                        out[key] = out.get(key, 0.0) + c * ck * cl
        return SparseVec(out).prune(self.eps)

    def tensor_star(self, t: SparseVec) -> SparseVec:
        out: dict[tuple[int, int], complex] = {}
        for (i, j), c in t.items():
            k, ck = self._star_unit(i)
            l, cl = self._star_unit(j)
            out[(k, l)] = out.get((k, l), 0.0) + c.conjugate() * ck * cl
        return SparseVec(out).prune(self.eps)

    def coproduct_of_unit(self) -> SparseVec:
        if self._coproduct_of_unit is None:
            self._coproduct_of_unit = self.coproduct(self.unit())
        return self._coproduct_of_unit

    # -- counital maps ----------------------------------------------------------

    def _eps_t_unit(self, i: int) -> SparseVec:
        cached = self._eps_t_cache.get(i)
        if cached is not None:
            return cached
        # eps_t(b) = (eps (x) id)(Delta(1) (b (x) 1))
        zero_block = BlockLabel.grp(self.group.zero())
        slots = self._slots[zero_block]
        out: dict[int, complex] = {}
        for e in slots:
            weight = 0.0 + 0j
            for r in slots:
                j = self.unit_pos[BasisUnit(zero_block, r, e)]
                for k, c in self._mult(j, i):
                    u = self.units[k]
                    if u.row == u.col:
                        weight += c
            if abs(weight) > self.eps:
                for c_slot in slots:
                    k = self.unit_pos[BasisUnit(zero_block, e, c_slot)]
                    out[k] = out.get(k, 0.0) + weight
        result = SparseVec(out).prune(self.eps)
        self._eps_t_cache[i] = result
        return result

    def _eps_s_unit(self, i: int) -> SparseVec:
        cached = self._eps_s_cache.get(i)
        if cached is not None:
            return cached
        # eps_s(b) = (id (x) eps)((1 (x) b) Delta(1))
        zero_block = BlockLabel.grp(self.group.zero())
        slots = self._slots[zero_block]
        out: dict[int, complex] = {}
        for e in slots:
            weight = 0.0 + 0j
            for c_slot in slots:
                j = self.unit_pos[BasisUnit(zero_block, e, c_slot)]
                for k, c in self._mult(i, j):
                    u = self.units[k]
                    if u.row == u.col:
                        weight += c
            if abs(weight) > self.eps:
                for r in slots:
                    k = self.unit_pos[BasisUnit(zero_block, r, e)]
                    out[k] = out.get(k, 0.0) + weight
        result = SparseVec(out).prune(self.eps)
        self._eps_s_cache[i] = result
        return result

    def eps_t(self, a: SparseVec) -> SparseVec:
        out = SparseVec()
        for i, c in a.items():
            out.add_scaled(self._eps_t_unit(i), c)
        return out.prune(self.eps)

    def eps_s(self, a: SparseVec) -> SparseVec:
        out = SparseVec()
        for i, c in a.items():
            out.add_scaled(self._eps_s_unit(i), c)
        return out.prune(self.eps)

    def counital_subalgebras(self) -> tuple[Subspace, Subspace]:
        """Target and source subalgebras B_t and B_s, as subspaces of B."""
        if self._counital is None:
            target = Subspace((self._eps_t_unit(i) for i in range(self.dim)), eps=self.eps)
            source = Subspace((self._eps_s_unit(i) for i in range(self.dim)), eps=self.eps)
            self._counital = (target, source)
        return self._counital

    # -- Haar functional ---------------------------------------------------------

    def haar(self) -> HaarFunctional:
        """Solve the defining linear system of the normalized invariant
        functional; existence and uniqueness are asserted numerically."""
        dim = self.dim
        rows: list[dict[int, complex]] = []
        rhs: list[complex] = []

        # (id (x) h) Delta(b) = (eps_t (x) h) Delta(b) for every basis unit b
        for b in range(dim):
            cols: dict[int, dict[int, complex]] = {}
            for i, j in self._coprod(b):
                row = cols.setdefault(j, {})
                row[i] = row.get(i, 0.0) + 1.0
                for k, c in self._eps_t_unit(i).items():
                    row[k] = row.get(k, 0.0) - c
            support = sorted({k for row in cols.values() for k in row})
            for k in support:
                entries = {j: row[k] for j, row in cols.items() if abs(row.get(k, 0.0)) > 0}
                if entries:
                    rows.append(entries)
                    rhs.append(0.0)

        # h(S(b)) = h(b)
        for b in range(dim):
            k, c = self._antipode_unit(b)
            entries = {k: c}
            entries[b] = entries.get(b, 0.0) - 1.0
            rows.append(entries)
            rhs.append(0.0)

        # h(eps_t(b)) = eps(b)
        for b in range(dim):
            entries = dict(self._eps_t_unit(b).items())
            u = self.units[b]
            rows.append(entries)
            rhs.append(1.0 if u.row == u.col else 0.0)

        # (id (x) h) Delta(1) = 1
        acc: dict[int, dict[int, complex]] = {}
        for (i, j), c in self.coproduct_of_unit().items():
            row = acc.setdefault(i, {})
            row[j] = row.get(j, 0.0) + c
        one = self.unit()
        for i in range(dim):
            entries = acc.get(i, {})
            target = one[i]
            if entries or abs(target) > 0:
                rows.append(entries)
                rhs.append(target)

        mat = np.zeros((len(rows), dim), dtype=complex)
        for r, entries in enumerate(rows):
            for k, c in entries.items():
                mat[r, k] = c
        vec = np.array(rhs, dtype=complex)
        coeffs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
        residual = float(np.max(np.abs(mat @ coeffs - vec))) if len(rows) else 0.0
        if residual > self.eps:
            raise StructuralError(f"invariant functional system is inconsistent ({residual:.3e})")
        svals = np.linalg.svd(mat, compute_uv=False)
        rank = int(np.sum(svals > self.eps * max(1.0, svals[0])))
        if rank < dim:
            raise StructuralError(
                f"invariant functional is not unique (rank {rank} < {dim})"
            )
        return HaarFunctional(self, coeffs, residual)

    # -- corepresentations ---------------------------------------------------------

    def corep_matrix(self, block: BlockLabel) -> list[list[SparseVec]]:
        """The canonical corepresentation matrix of a block: entry (i, j) is
        the basis unit (block; i, j)."""
        slots = self._slots[block]
        return [[self.basis_element(block, r, c) for c in slots] for r in slots]

    def _mat_mult(self, A: list[list[SparseVec]], B: list[list[SparseVec]]) -> list[list[SparseVec]]:
        n = len(A)
        out = [[SparseVec() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = SparseVec()
                for k in range(n):
                    acc = acc + self.multiply(A[i][k], B[k][j])
                out[i][j] = acc.prune(self.eps)
        return out

    def verify_corepresentation(self, block: BlockLabel) -> list[AxiomCheck]:
        slots = self._slots[block]
        n = len(slots)
        U = self.corep_matrix(block)

        res_cop = 0.0
        for i in range(n):
            for j in range(n):
                lhs = self.coproduct(U[i][j])
                rhs = SparseVec()
                for k in range(n):
                    rhs = rhs + self.tensor(U[i][k], U[k][j])
                res_cop = max(res_cop, distance(lhs, rhs))

        res_eps = 0.0
        for i in range(n):
            for j in range(n):
                val = self.counit(U[i][j])
                res_eps = max(res_eps, abs(val - (1.0 if i == j else 0.0)))

        Ustar = [[self.star(U[j][i]) for j in range(n)] for i in range(n)]
        P = self._mat_mult(self._mat_mult(U, Ustar), U)
        res_iso = 0.0
        for i in range(n):
            for j in range(n):
                res_iso = max(res_iso, distance(P[i][j], U[i][j]))

        name = f"corepresentation[{block}]"
        return [
            AxiomCheck(f"{name} comultiplication", res_cop, res_cop <= self.eps),
            AxiomCheck(f"{name} counit", res_eps, res_eps <= self.eps),
            AxiomCheck(f"{name} partial isometry", res_iso, res_iso <= self.eps),
        ]

    # -- dual algebra ---------------------------------------------------------------

    def dual_identity(self) -> dict[BlockLabel, np.ndarray]:
        return {b: np.eye(len(self._slots[b]), dtype=complex) for b in self.blocks}

    def dual_random(self, rng: random.Random) -> dict[BlockLabel, np.ndarray]:
        out = {}
        for b in self.blocks:
            n = len(self._slots[b])
            out[b] = np.array(
                [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)] for _ in range(n)]
            )
        return out

    def dual_pairing(self, phi: dict[BlockLabel, np.ndarray], a: SparseVec) -> complex:
        """Evaluate a block-matrix functional: the unit (x; r, c) pairs to the
        matrix entry [c, r] of the x block."""
        total = 0.0 + 0j
        for i, coeff in a.items():
            u = self.units[i]
            slots = self._slots[u.block]
            total += coeff * phi[u.block][slots.index(u.col), slots.index(u.row)]
        return complex(total)

    def dual_multiply(
        self, phi: dict[BlockLabel, np.ndarray], psi: dict[BlockLabel, np.ndarray]
    ) -> dict[BlockLabel, np.ndarray]:
        """Blockwise matrix product matching the pairing: since the pairing
        reads entries transposed, the paired product composes in reverse
        order, (phi psi)_x = psi_x @ phi_x."""
        return {b: psi[b] @ phi[b] for b in self.blocks}

    # -- center ------------------------------------------------------------------

    def center(self) -> Subspace:
        """The center of B, by iterative kernel refinement over all units."""
        dim = self.dim
        basis = np.eye(dim, dtype=complex)
        for j in range(dim):
            if basis.shape[0] == 0:
                break
            comm = np.zeros((dim, dim), dtype=complex)
            for i in range(dim):
                for k, c in self._mult(i, j):
                    comm[i, k] += c
                for k, c in self._mult(j, i):
                    comm[i, k] -= c
            image = basis @ comm
            kern = nullspace(image.T, eps=self.eps)
            basis = kern @ basis
        vecs = [
            SparseVec({i: row[i] for i in range(dim) if abs(row[i]) > self.eps})
            for row in basis
        ]
        return Subspace(vecs, eps=self.eps)

    # -- random elements -------------------------------------------------------------

    def random_element(self, rng: random.Random, terms: int = 6) -> SparseVec:
        out: dict[int, complex] = {}
        for _ in range(terms):
            i = rng.randrange(self.dim)
            out[i] = out.get(i, 0.0) + complex(rng.gauss(0, 1), rng.gauss(0, 1))
        return SparseVec(out)

    # -- the verification suite ---------------------------------------------------

    def verify_axioms(
        self, *, seed: int = 7, samples: int = 10_000, haar_checks: int = 200
    ) -> AxiomReport:
        """Run every defining identity of the structure at tolerance eps.

        Pair-indexed identities are exhaustive for |G| <= 4, triple-indexed
        ones for |G| <= 3 (products) resp. |G| <= 2 (counit identity); larger
        groups are covered by seeded random samples.
        """
        rng = random.Random(seed)
        eps = self.eps
        dim = self.dim
        n = self.group.order
        report = AxiomReport(label=f"{self.group} tau{'+' if self.tau_sign > 0 else '-'}", eps=eps)
        checks = report.checks

        def add(name: str, residual: float, witness: str = ""):
            checks.append(AxiomCheck(name, residual, residual <= eps, witness))

        def unit_pairs():
            if n <= 4:
                for i in range(dim):
                    for j in range(dim):
                        yield i, j
            else:
                for _ in range(samples):
                    yield rng.randrange(dim), rng.randrange(dim)

        def unit_triples(bound: int):
            if n <= bound:
                for i in range(dim):
                    for j in range(dim):
                        for k in range(dim):
                            yield i, j, k
            else:
                for _ in range(samples):
                    yield rng.randrange(dim), rng.randrange(dim), rng.randrange(dim)

        # dimension of B
        expected_dim = n * (n + 1) ** 2 + 4 * n * n
        add("dimension of B", float(abs(dim - expected_dim)), f"dim B = {dim}")

        # associativity of the product
        worst, witness = 0.0, ""
        for i, j, k in unit_triples(3):
            lhs: dict[int, complex] = {}
            for p, cp in self._mult(i, j):
                for q, cq in self._mult(p, k):
                    lhs[q] = lhs.get(q, 0.0) + cp * cq
            rhs: dict[int, complex] = {}
            for p, cp in self._mult(j, k):
                for q, cq in self._mult(i, p):
                    rhs[q] = rhs.get(q, 0.0) + cp * cq
            r = max(
                (abs(lhs.get(q, 0.0) - rhs.get(q, 0.0)) for q in set(lhs) | set(rhs)),
                default=0.0,
            )
            if r > worst:
                worst, witness = r, f"({self.units[i]})({self.units[j]})({self.units[k]})"
        add("product associativity", worst, witness)

        # unit law
        one = self.unit()
        worst, witness = 0.0, ""
        for i in range(dim):
            e = SparseVec.basis(i)
            r = max(
                distance(self.multiply(one, e), e), distance(self.multiply(e, one), e)
            )
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("unit law", worst, witness)

        # coproduct is multiplicative
        worst, witness = 0.0, ""
        for i, j in unit_pairs():
            prod = SparseVec(dict(self._mult(i, j)))
            lhs = self.coproduct(prod)
            rhs = self.tensor_multiply(
                SparseVec({pair: 1.0 for pair in self._coprod(i)}),
                SparseVec({pair: 1.0 for pair in self._coprod(j)}),
            )
            r = distance(lhs, rhs)
            if r > worst:
                worst, witness = r, f"({self.units[i]})({self.units[j]})"
        add("coproduct multiplicative", worst, witness)

        # coproduct is star-compatible
        worst, witness = 0.0, ""
        for i in range(dim):
            e = SparseVec.basis(i)
            r = distance(self.coproduct(self.star(e)), self.tensor_star(self.coproduct(e)))
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("coproduct star compatible", worst, witness)

        # coassociativity
        worst, witness = 0.0, ""
        for i in range(dim):
            lhs: dict = {}
            rhs: dict = {}
            for a, b in self._coprod(i):
                for p, q in self._coprod(a):
                    lhs[(p, q, b)] = lhs.get((p, q, b), 0.0) + 1.0
                for p, q in self._coprod(b):
                    rhs[(a, p, q)] = rhs.get((a, p, q), 0.0) + 1.0
            r = max(
                (abs(lhs.get(k, 0.0) - rhs.get(k, 0.0)) for k in set(lhs) | set(rhs)),
                default=0.0,
            )
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("coassociativity", worst, witness)

        # counit law
        worst, witness = 0.0, ""
        for i in range(dim):
            left = SparseVec()
            right = SparseVec()
            for a, b in self._coprod(i):
                ua = self.units[a]
                if ua.row == ua.col:
                    left.data[b] = left.data.get(b, 0.0) + 1.0
                ub = self.units[b]
                if ub.row == ub.col:
                    right.data[a] = right.data.get(a, 0.0) + 1.0
            e = SparseVec.basis(i)
            r = max(distance(left, e), distance(right, e))
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("counit law", worst, witness)

        # weak unit identity
        delta1 = self.coproduct_of_unit()
        lhs3: dict = {}
        for (a, b), c1 in delta1.items():
            for (c, d), c2 in delta1.items():
                for k, ck in self._mult(b, c):
                    key = (a, k, d)
                    lhs3[key] = lhs3.get(key, 0.0) + c1 * c2 * ck
        rhs3: dict = {}
        for (a, b), c1 in delta1.items():
            for p, q in self._coprod(a):
                key = (p, q, b)
                rhs3[key] = rhs3.get(key, 0.0) + c1
        r = max(
            (abs(lhs3.get(k, 0.0) - rhs3.get(k, 0.0)) for k in set(lhs3) | set(rhs3)),
            default=0.0,
        )
        add("weak unit identity", r)

        # weak counit identity: eps(b c_1) eps(c_2 d) = eps(b c d)
        def eps_prod(i: int, j: int) -> complex:
            key = (i, j)
            val = self._eps_prod_cache.get(key)
            if val is None:
                val = 0.0 + 0j
                for k, c in self._mult(i, j):
                    u = self.units[k]
                    if u.row == u.col:
                        val += c
                self._eps_prod_cache[key] = val
            return val

        worst, witness = 0.0, ""
        for b, c, d in unit_triples(2):
            lhs_val = 0.0 + 0j
            for c1, c2 in self._coprod(c):
                lhs_val += eps_prod(b, c1) * eps_prod(c2, d)
            rhs_val = 0.0 + 0j
            for k, ck in self._mult(b, c):
                rhs_val += ck * eps_prod(k, d)
            r = abs(lhs_val - rhs_val)
            if r > worst:
                worst, witness = r, f"({self.units[b]})({self.units[c]})({self.units[d]})"
        add("weak counit identity", worst, witness)

        # antipode identities against the counital maps
        worst_t, wit_t, worst_s, wit_s = 0.0, "", 0.0, ""
        for i in range(dim):
            lhs_t = SparseVec()
            lhs_s = SparseVec()
            for a, b in self._coprod(i):
                k, ck = self._antipode_unit(b)
                for q, cq in self._mult(a, k):
                    lhs_t.data[q] = lhs_t.data.get(q, 0.0) + ck * cq
                k, ck = self._antipode_unit(a)
                for q, cq in self._mult(k, b):
                    lhs_s.data[q] = lhs_s.data.get(q, 0.0) + ck * cq
            rt = distance(lhs_t, self._eps_t_unit(i))
            rs = distance(lhs_s, self._eps_s_unit(i))
            if rt > worst_t:
                worst_t, wit_t = rt, str(self.units[i])
            if rs > worst_s:
                worst_s, wit_s = rs, str(self.units[i])
        add("antipode identity (target)", worst_t, wit_t)
        add("antipode identity (source)", worst_s, wit_s)

        # antipode is an anti-algebra map
        worst, witness = 0.0, ""
        for i, j in unit_pairs():
            lhs = SparseVec()
            for k, ck in self._mult(i, j):
                t, ct = self._antipode_unit(k)
                lhs.data[t] = lhs.data.get(t, 0.0) + ck * ct
            ki, ci = self._antipode_unit(i)
            kj, cj = self._antipode_unit(j)
            rhs = SparseVec({k: ci * cj * c for k, c in self._mult(kj, ki)})
            r = distance(lhs, rhs)
            if r > worst:
                worst, witness = r, f"({self.units[i]})({self.units[j]})"
        add("antipode anti-multiplicative", worst, witness)

        # antipode is an anti-coalgebra map
        worst, witness = 0.0, ""
        for i in range(dim):
            k, ck = self._antipode_unit(i)
            lhs = SparseVec({pair: ck for pair in self._coprod(k)})
            rhs = SparseVec()
            for a, b in self._coprod(i):
                ka, ca = self._antipode_unit(a)
                kb, cb = self._antipode_unit(b)
                rhs.data[(kb, ka)] = rhs.data.get((kb, ka), 0.0) + ca * cb
            r = distance(lhs, rhs)
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("antipode anti-comultiplicative", worst, witness)

        # star is an involution and anti-multiplicative
        worst, witness = 0.0, ""
        for i in range(dim):
            e = SparseVec.basis(i)
            r = distance(self.star(self.star(e)), e)
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("star involutive", worst, witness)

        worst, witness = 0.0, ""
        for i, j in unit_pairs():
            lhs = self.star(SparseVec(dict(self._mult(i, j))))
            rhs = self.multiply(self.star(SparseVec.basis(j)), self.star(SparseVec.basis(i)))
            r = distance(lhs, rhs)
            if r > worst:
                worst, witness = r, f"({self.units[i]})({self.units[j]})"
        add("star anti-multiplicative", worst, witness)

        # (S o *)^2 = id
        worst, witness = 0.0, ""
        for i in range(dim):
            e = SparseVec.basis(i)
            once = self.antipode(self.star(e))
            twice = self.antipode(self.star(once))
            r = distance(twice, e)
            if r > worst:
                worst, witness = r, str(self.units[i])
        add("star-antipode period two", worst, witness)

        # counital subalgebras
        target, source = self.counital_subalgebras()
        add(
            "target subalgebra dimension",
            float(abs(target.dim - (n + 1))),
            f"dim B_t = {target.dim}",
        )
        add(
            "source subalgebra dimension",
            float(abs(source.dim - (n + 1))),
            f"dim B_s = {source.dim}",
        )
        meet = target.intersect(source)
        add("biconnectedness", float(abs(meet.dim - 1)), f"dim B_t & B_s = {meet.dim}")

        worst = 0.0
        tvecs = target.basis_vectors()
        svecs = source.basis_vectors()
        for tv in tvecs:
            for sv in svecs:
                worst = max(
                    worst, distance(self.multiply(tv, sv), self.multiply(sv, tv))
                )
        add("counital subalgebras commute", worst)

        # regularity: S^2 restricted to the target subalgebra
        worst = 0.0
        for tv in tvecs:
            worst = max(worst, distance(self.antipode(self.antipode(tv)), tv))
        add("antipode squared fixes target subalgebra", worst)

        # the zero fiber is a commutative *-algebra of orthogonal projections
        zero_block = BlockLabel.grp(self.group.zero())
        worst = 0.0
        for s in self._slots[zero_block]:
            vs = self.fiber_basis(zero_block, s)
            worst = max(worst, distance(self.sharp(vs), vs))
            for t in self._slots[zero_block]:
                vt = self.fiber_basis(zero_block, t)
                prod = self.circ(vs, vt)
                expected = vs if s == t else SparseVec()
                worst = max(worst, distance(prod, expected))
        add("zero fiber projections", worst)

        # center dimension (the C*-block structure)
        zb = self.center()
        add("center dimension", float(abs(zb.dim - (n + 1))), f"dim Z(B) = {zb.dim}")

        # corepresentations
        for block in self.blocks:
            checks.extend(self.verify_corepresentation(block))

        # dual pairing compatibility on random functionals
        worst = 0.0
        for _ in range(20):
            phi = self.dual_random(rng)
            psi = self.dual_random(rng)
            prod = self.dual_multiply(phi, psi)
            i = rng.randrange(dim)
            e = SparseVec.basis(i)
            lhs_val = self.dual_pairing(prod, e)
            rhs_val = 0.0 + 0j
            for a, b in self._coprod(i):
                rhs_val += self.dual_pairing(phi, SparseVec.basis(a)) * self.dual_pairing(
                    psi, SparseVec.basis(b)
                )
            worst = max(worst, abs(lhs_val - rhs_val))
        add("dual pairing multiplicative", worst)

        # Haar functional
        try:
            h = self.haar()
            add("haar system solvable", h.residual)
            worst = 0.0
            for i in range(dim):
                e = SparseVec.basis(i)
                worst = max(worst, abs(h(self.antipode(e)) - h(e)))
            add("haar antipode invariant", worst)
            worst = 0.0
            for _ in range(haar_checks):
                b = self.random_element(rng)
                val = h(self.multiply(self.star(b), b))
                worst = max(worst, abs(val.imag), max(0.0, -val.real))
            add("haar positive", worst)
        except StructuralError as exc:
            checks.append(AxiomCheck("haar system solvable", float("inf"), False, str(exc)))

        return report

    # -- export -----------------------------------------------------------------

    def export_data(self) -> dict:
        """Structure constants in the versioned interchange format."""
        basis = [
            {"index": i, "block": str(u.block), "row": str(u.row), "col": str(u.col)}
            for i, u in enumerate(self.units)
        ]
        product = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in self._mult(i, j):
                    product.append([i, j, k, c.real, c.imag])
        coproduct = []
        for i in range(self.dim):
            for a, b in self._coprod(i):
                coproduct.append([i, a, b, 1.0, 0.0])
        counit = []
        for i, u in enumerate(self.units):
            if u.row == u.col:
                counit.append([i, 1.0, 0.0])
        antipode = []
        star = []
        for i in range(self.dim):
            k, c = self._antipode_unit(i)
            antipode.append([i, k, c.real, c.imag])
            k, c = self._star_unit(i)
            star.append([i, k, c.real, c.imag])
        return {
            "format": "ty-wha/1",
            "group": list(self.group.factors),
            "bicharacter": self.bichar.to_json(),
            "tau_sign": self.tau_sign,
            "tolerance": self.eps,
            "dim": self.dim,
            "basis": basis,
            "unit": [[i, c.real, c.imag] for i, c in sorted(self.unit().items())],
            "product": product,
            "coproduct": coproduct,
            "counit": counit,
            "antipode": antipode,
            "star": star,
        }
