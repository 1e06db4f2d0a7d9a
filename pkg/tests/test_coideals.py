import pytest

from tywha.algebra import BasisUnit, BlockLabel, Slot, TYAlgebra
from tywha.coideals import (
    CoidealSpec,
    assemble,
    build_I_m_K,
    build_I_Omega_K,
    build_no_m,
    build_with_m,
    center,
    coset_vector,
    fixed_point_algebra,
    is_coideal,
    is_indecomposable,
    measured_dims,
    spectral_dims,
    spectral_dims_type_i,
    verify_weak_coideal,
    x0_partition,
)
from tywha.errors import InvariantError, StructuralError
from tywha.groups import FiniteAbelianGroup, Subgroup, enumerate_subgroups, orthogonal, quotient
from tywha.linalg import SparseVec, distance


def g(*coords):
    return BlockLabel.grp(tuple(coords))


M = BlockLabel.m()


@pytest.fixture(scope="module")
def z4():
    return TYAlgebra(FiniteAbelianGroup((4,)), tau_sign=1)


@pytest.fixture(scope="module")
def z4_setup(z4):
    grp = z4.group
    K = Subgroup.generated(grp, [(2,)])
    q = quotient(grp, K)
    lam, mu = q.cosets  # reps (0,) and (1,)
    return K, q, lam, mu


class TestCosetVectors:
    def test_group_block(self, z4, z4_setup):
        _K, _q, _lam, mu = z4_setup
        v = coset_vector(z4, g(0), mu)
        assert dict(v.items()) == {
            (g(0), Slot.grp((1,))): 1,
            (g(0), Slot.grp((3,))): 1,
        }
        assert v.norm() ** 2 == pytest.approx(len(mu))

    def test_trivial_subgroup_singleton(self, z4):
        grp = z4.group
        q = quotient(grp, Subgroup.trivial(grp))
        lam = q.coset_of((2,))
        v = coset_vector(z4, g(1), lam)
        assert dict(v.items()) == {(g(1), Slot.grp((2,))): 1}

    def test_barred_m_vector(self, z4, z4_setup):
        _K, _q, lam, _mu = z4_setup
        v = coset_vector(z4, M, lam, barred=True)
        assert set(v.keys()) == {(M, Slot.bar((0,))), (M, Slot.bar((2,)))}
        with pytest.raises(InvariantError):
            coset_vector(z4, g(0), lam, barred=True)


class TestClosureRelations:
    """Coset-vector product relations used by the m-carrying builder."""

    def test_unbarred_times_barred(self, z4, z4_setup):
        _K, q, lam, mu = z4_setup
        out = z4.circ(coset_vector(z4, M, lam), coset_vector(z4, M, mu, barred=True))
        expected = SparseVec()
        for delta in mu.elements:  # mu - lam = {1,3}
            expected = expected + coset_vector(z4, g(*delta), mu)
        assert distance(out, expected) < 1e-12

    @pytest.mark.parametrize("sign", [1, -1])
    def test_barred_times_unbarred(self, sign, z4_setup):
        alg = TYAlgebra(FiniteAbelianGroup((4,)), tau_sign=sign)
        K, q, lam, mu = z4_setup
        out = alg.circ(
            coset_vector(alg, M, lam, barred=True), coset_vector(alg, M, lam)
        )
        perp = orthogonal(alg.bichar, K)
        expected = SparseVec(
            {(g(*k), Slot.m()): alg.tau * K.order for k in perp.sorted_elements}
        )
        assert distance(out, expected) < 1e-12
        # distinct cosets annihilate
        assert not alg.circ(
            coset_vector(alg, M, lam, barred=True), coset_vector(alg, M, mu)
        )

    def test_m_slot_times_barred_coset(self, z4, z4_setup):
        K, _q, _lam, mu = z4_setup
        # for k in the annihilator the phase chi(k, .) is constant on cosets
        out = z4.circ(
            SparseVec.basis((g(2), Slot.m())), coset_vector(z4, M, mu, barred=True)
        )
        phase = z4.chi((2,), mu.rep)
        assert distance(out, phase * coset_vector(z4, M, mu, barred=True)) < 1e-12

    def test_coset_times_m_slot(self, z4, z4_setup):
        _K, _q, _lam, mu = z4_setup
        out = z4.circ(
            coset_vector(z4, M, mu), SparseVec.basis((g(2), Slot.m()))
        )
        phase = z4.chi(mu.rep, (2,))
        assert distance(out, phase * coset_vector(z4, M, mu)) < 1e-12

    def test_group_coset_products(self, z4, z4_setup):
        _K, q, lam, mu = z4_setup
        # v^g_lam . v^h_mu = [mu == h + lam] v^{g+h}_mu
        a = coset_vector(z4, g(1), lam)
        b = coset_vector(z4, g(1), mu)  # mu = (1,) + lam
        out = z4.circ(a, b)
        assert distance(out, coset_vector(z4, g(2), mu)) < 1e-12
        assert not z4.circ(a, coset_vector(z4, g(2), mu))

    def test_mixed_zero_products(self, z4, z4_setup):
        _K, _q, lam, mu = z4_setup
        km = SparseVec.basis((g(2), Slot.m()))
        assert not z4.circ(km, coset_vector(z4, g(1), lam))
        assert not z4.circ(coset_vector(z4, g(1), lam), km)
        assert not z4.circ(km, coset_vector(z4, M, lam))
        assert not z4.circ(coset_vector(z4, M, lam, barred=True), km)
        assert not z4.circ(coset_vector(z4, M, lam), coset_vector(z4, M, mu))
        assert not z4.circ(
            coset_vector(z4, M, lam, barred=True), coset_vector(z4, M, mu, barred=True)
        )

    def test_sharp_on_coset_vectors(self, z4, z4_setup):
        _K, _q, lam, _mu = z4_setup
        out = z4.sharp(coset_vector(z4, M, lam))
        assert distance(out, 2.0 * coset_vector(z4, M, lam, barred=True)) < 1e-12


class TestBuilders:
    def test_no_m_full_quotient_z2(self):
        alg = TYAlgebra(FiniteAbelianGroup((2,)))
        K = Subgroup.trivial(alg.group)
        q = quotient(alg.group, K)
        wc = build_no_m(alg, K, list(q.cosets))
        assert wc.dim == 12
        for block, sub in wc.x_spaces.items():
            assert sub.dim == 2
        assert verify_weak_coideal(wc).passed
        assert not is_coideal(wc)
        assert is_indecomposable(wc)

    def test_no_m_requires_nonempty(self, z4, z4_setup):
        K, _q, _lam, _mu = z4_setup
        with pytest.raises(InvariantError):
            build_no_m(z4, K, [])

    def test_no_m_side_one_uses_annihilator(self, z4):
        K = Subgroup.trivial(z4.group)  # K_perp = G, quotient is a point
        perp = orthogonal(z4.bichar, K)
        qp = quotient(z4.group, perp)
        wc = build_no_m(z4, K, [qp.cosets[0]], side=1)
        assert verify_weak_coideal(wc).passed
        assert wc.spec.z0 == frozenset()
        assert len(wc.spec.z1) == 1
        # X^g nonzero exactly for g in K_perp = G
        assert set(wc.x_dims()) == {g(*e) for e in z4.group.elements()}

    def test_with_m_coideal_iff_full(self, z4, z4_setup):
        K, q, lam, mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        rho0 = quotient(z4.group, perp).cosets[0]
        full = build_with_m(z4, K, list(q.cosets), rho0)
        assert verify_weak_coideal(full).passed
        assert is_coideal(full)
        partial = build_with_m(z4, K, [lam], rho0)
        assert verify_weak_coideal(partial).passed
        assert not is_coideal(partial)

    def test_I_builders(self, z4, z4_setup):
        K, _q, _lam, _mu = z4_setup
        n = z4.group.order
        im = build_I_m_K(z4, K)
        iom = build_I_Omega_K(z4, K)
        assert im.dim == K.order * (n + 1)
        assert iom.dim == K.order * (n + 1)
        assert verify_weak_coideal(im).passed
        assert verify_weak_coideal(iom).passed
        assert not is_coideal(im)
        assert is_coideal(iom)
        assert is_indecomposable(im)
        assert is_indecomposable(iom)
        # same classification parameters: a singleton Z over K
        assert im.spec.describe() == iom.spec.describe()

    @pytest.mark.parametrize("factors", [(2,), (3,)])
    def test_all_builders_all_subgroups(self, factors):
        alg = TYAlgebra(FiniteAbelianGroup(factors))
        for K in enumerate_subgroups(alg.group):
            q = quotient(alg.group, K)
            perp = orthogonal(alg.bichar, K)
            qp = quotient(alg.group, perp)
            built = [
                build_I_m_K(alg, K),
                build_I_Omega_K(alg, K),
                build_no_m(alg, K, [q.cosets[0]]),
                build_no_m(alg, K, list(q.cosets)),
                build_with_m(alg, K, [q.cosets[0]], qp.cosets[0]),
                build_with_m(alg, K, list(q.cosets), qp.cosets[-1]),
            ]
            for wc in built:
                report = verify_weak_coideal(wc)
                assert report.passed, (wc.label, str(K), [c.name for c in report.failures()])


class TestVerifierRejections:
    def test_zero_family_fails(self, z4):
        wc = assemble(z4, {}, "zero")
        report = verify_weak_coideal(wc)
        assert not report.passed
        failed = {c.name for c in report.failures()}
        assert "unit exists in A" in failed

    def test_dropped_m_slot_breaks_closure(self, z4, z4_setup):
        K, q, lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        rho0 = quotient(z4.group, perp).cosets[0]
        good = build_with_m(z4, K, [lam], rho0)
        assert verify_weak_coideal(good).passed

        # rebuild the same family but drop v^g_m from one annihilator block
        drop = (2,)
        x_vectors = {}
        for block, sub in good.x_spaces.items():
            vecs = sub.basis_vectors()
            if block == g(*drop):
                vecs = [v for v in vecs if (block, Slot.m()) not in set(v.keys())]
            x_vectors[block] = vecs
        broken = assemble(z4, x_vectors, "with_m minus one m-slot")
        report = verify_weak_coideal(broken)
        assert not report.passed
        failed = {c.name for c in report.failures()}
        assert failed & {"closed under product", "closed under star"}

    def test_spec_shape_rejected(self, z4, z4_setup):
        K, q, _lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        qp = quotient(z4.group, perp)
        with pytest.raises(InvariantError):
            CoidealSpec(K, frozenset(q.cosets), frozenset(qp.cosets))
        with pytest.raises(InvariantError):
            CoidealSpec(K, frozenset(), frozenset())


class TestIndecomposability:
    def test_union_of_translates_is_decomposable(self):
        alg = TYAlgebra(FiniteAbelianGroup((2,)))
        grp = alg.group
        K = Subgroup.trivial(grp)
        q = quotient(grp, K)
        copy1 = build_no_m(alg, K, [q.cosets[0]])
        copy2 = build_no_m(alg, K, [q.cosets[1]])
        assert is_indecomposable(copy1) and is_indecomposable(copy2)
        merged = {}
        for wc in (copy1, copy2):
            for block, sub in wc.x_spaces.items():
                merged.setdefault(block, []).extend(sub.basis_vectors())
        union = assemble(alg, merged, "two translated copies")
        assert verify_weak_coideal(union).passed
        assert not is_indecomposable(union)
        meet = center(union).intersect(fixed_point_algebra(union))
        assert meet.dim == 2
        # the block projection onto one copy is a central invariant element
        projection = SparseVec(
            {
                alg.unit_pos[BasisUnit(g(0), Slot.grp((0,)), c)]: 1.0
                for c in alg.slots(g(0))
            }
        )
        assert meet.contains(projection)

    def test_with_m_km_equals_k0_minus_one(self, z4, z4_setup):
        K, q, lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        rho0 = quotient(z4.group, perp).cosets[0]
        for zs in ([lam], list(q.cosets)):
            wc = build_with_m(z4, K, zs, rho0)
            blocks = x0_partition(wc)
            k0 = len(blocks)
            km = wc.x_spaces[M].dim // 2
            assert km == k0 - 1
            assert is_indecomposable(wc)


class TestX0Partition:
    def test_i_m_k_single_m_block(self, z4, z4_setup):
        K, _q, _lam, _mu = z4_setup
        blocks = x0_partition(build_I_m_K(z4, K))
        assert blocks == [frozenset({Slot.m()})]

    def test_no_m_blocks_are_cosets(self, z4, z4_setup):
        K, q, lam, mu = z4_setup
        wc = build_no_m(z4, K, list(q.cosets))
        blocks = x0_partition(wc)
        assert len(blocks) == 2
        as_sets = {frozenset(s.g for s in b) for b in blocks}
        assert as_sets == {frozenset(lam.elements), frozenset(mu.elements)}

    def test_with_m_has_m_block(self, z4, z4_setup):
        K, _q, lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        rho0 = quotient(z4.group, perp).cosets[0]
        wc = build_with_m(z4, K, [lam], rho0)
        assert frozenset({Slot.m()}) in x0_partition(wc)

    def test_zero_x0_raises(self, z4):
        wc = assemble(z4, {M: [coset_vector(z4, M, quotient(z4.group, Subgroup.full(z4.group)).cosets[0])]}, "bare m fiber")
        with pytest.raises(StructuralError):
            x0_partition(wc)


class TestSpectralDims:
    def test_singleton_pair_example(self, z4, z4_setup):
        K, q, lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        qp = quotient(z4.group, perp)
        spec = CoidealSpec(K, frozenset([lam]), frozenset([qp.cosets[0]]))
        dims = spectral_dims(spec, z4)
        assert dims[M] == 2
        for e in z4.group.elements():
            expected = int(e in K.elements) + int(e in perp.elements)
            assert dims[g(*e)] == expected

    def test_m_dim_even(self, z4, z4_setup):
        K, q, _lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        qp = quotient(z4.group, perp)
        for n0 in (1, 2):
            spec = CoidealSpec(K, frozenset(list(q.cosets)[:n0]), frozenset([qp.cosets[0]]))
            assert spectral_dims(spec, z4)[M] % 2 == 0

    def test_matches_measured_for_builders(self):
        # every group order up to 8; measured dims only need the fiber spaces
        for factors in [(2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)]:
            alg = TYAlgebra(FiniteAbelianGroup(factors))
            for K in enumerate_subgroups(alg.group):
                q = quotient(alg.group, K)
                perp = orthogonal(alg.bichar, K)
                qp = quotient(alg.group, perp)
                candidates = [
                    build_I_m_K(alg, K),
                    build_I_Omega_K(alg, K),
                    build_no_m(alg, K, [q.cosets[0]]),
                    build_no_m(alg, K, list(q.cosets)),
                    build_with_m(alg, K, [q.cosets[0]], qp.cosets[0]),
                    build_with_m(alg, K, list(q.cosets), qp.cosets[0]),
                ]
                for wc in candidates:
                    predicted = spectral_dims(wc.spec, alg)
                    actual = measured_dims(wc)
                    for b in set(predicted) | set(actual):
                        assert predicted.get(b, 0) == actual.get(b, 0), (
                            factors,
                            str(K),
                            wc.label,
                            str(b),
                        )

    def test_type_i_formula(self, z4, z4_setup):
        K, q, lam, mu = z4_setup  # K = K_perp for this subgroup
        mult = {lam: 2, mu: 1}
        dims = spectral_dims_type_i(q, mult)
        assert dims[M] == 9
        assert dims[g(0)] == 5  # 2*2 + 1*1
        assert dims[g(1)] == 4  # 2*1 + 1*2

    def test_x_m_split_swapped_by_sharp(self, z4, z4_setup):
        K, q, lam, _mu = z4_setup
        perp = orthogonal(z4.bichar, K)
        rho0 = quotient(z4.group, perp).cosets[0]
        wc = build_with_m(z4, K, [lam], rho0)
        xm = wc.x_spaces[M]
        unbarred = [v for v in xm.basis_vectors() if all(s.kind != 2 for (_b, s) in v.keys())]
        barred = [v for v in xm.basis_vectors() if all(s.kind == 2 for (_b, s) in v.keys())]
        assert len(unbarred) == len(barred) == xm.dim // 2
        for v in unbarred:
            assert xm.contains(z4.sharp(v))
