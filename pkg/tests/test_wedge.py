"""Pairing presentations, kappa, kernels, and pairing axioms."""

import random

import pytest

from grouplab.catalog import builtin
from grouplab.errors import GroupTooLarge, NotAPairing
from grouplab.groups import derived_subgroup, direct_product, from_mul_table, relabeled
from grouplab.wedge import (
    WedgeVariant,
    bogomolov_kernel,
    build_wedge_presentation,
    check_pairing,
    commutator_pairing_table,
    compute_wedge,
    exterior_to_curly_surjection,
    multiplier_order,
    pairing_to_hom,
    trace_relators_through_commutators,
)


def cyclic(n):
    return from_mul_table([[(i + j) % n for j in range(n)] for i in range(n)], label=f"Z{n}")


S3 = builtin("symmetric", (3,))
Z2 = cyclic(2)
Z4 = cyclic(4)
V4 = direct_product(Z2, Z2, label="V4")
D4 = builtin("dihedral", (4,))
Q8 = builtin("quaternion8")


class TestPresentation:
    def test_generator_count_is_order_squared(self):
        for G in (Z2, S3):
            wp = build_wedge_presentation(G, WedgeVariant.CURLY)
            assert wp.presentation.num_generators == G.order**2

    def test_z2_curly_collapses_every_generator(self):
        wp = build_wedge_presentation(Z2, WedgeVariant.CURLY)
        assert wp.r3_count == 4  # every pair commutes
        table = compute_wedge(Z2, WedgeVariant.CURLY)
        assert table.order == 1

    def test_s3_raw_relator_counts(self):
        wp = build_wedge_presentation(S3, WedgeVariant.CURLY)
        assert wp.r1_count == 216
        assert wp.r2_count == 216

    def test_curly_relators_contain_exterior(self):
        cur = build_wedge_presentation(S3, WedgeVariant.CURLY)
        ext = build_wedge_presentation(S3, WedgeVariant.EXTERIOR)
        # diagonal pairs commute, so every exterior collapsing relator
        # appears among the curly ones
        cur_set = set(cur.presentation.relators)
        for w in ext.presentation.relators:
            if len(w) == 1:
                assert w in cur_set

    def test_cap_enforced(self):
        with pytest.raises(GroupTooLarge):
            build_wedge_presentation(builtin("cyclic", (17,)), WedgeVariant.EXTERIOR)

    def test_relator_trace_through_commutators(self):
        for G in (S3, D4, Q8, V4):
            for variant in WedgeVariant:
                wp = build_wedge_presentation(G, variant)
                assert trace_relators_through_commutators(G, wp)


class TestComputeWedge:
    def test_abelian_curly_trivial(self):
        for G in (Z2, Z4, V4, cyclic(6)):
            wr = compute_wedge(G, WedgeVariant.CURLY)
            assert wr.order == 1
            assert len(wr.kernel) == 1

    def test_s3_curly(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        assert wr.order == 3
        assert len(wr.kernel) == 1
        # kappa is injective here, hence an isomorphism onto the derived subgroup
        assert len(set(wr.kappa.images)) == 3
        assert set(wr.kappa.images) == set(derived_subgroup(S3).members)

    def test_v4_exterior(self):
        wr = compute_wedge(V4, WedgeVariant.EXTERIOR)
        assert wr.order == 2
        assert len(wr.kernel) == 2
        assert set(wr.kappa.images) == {0}

    def test_identity_pair_images_trivial(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        for x in range(S3.order):
            assert wr.pair_image(0, x) == 0
            assert wr.pair_image(x, 0) == 0

    def test_kappa_on_pairs_is_commutator(self):
        wr = compute_wedge(D4, WedgeVariant.CURLY)
        for m in range(D4.order):
            for n in range(D4.order):
                assert wr.kappa.images[wr.pair_image(m, n)] == D4.comm(m, n)

    def test_exactness(self):
        for G in (S3, D4, Q8):
            for variant in WedgeVariant:
                wr = compute_wedge(G, variant)
                assert wr.order == len(wr.kernel) * len(derived_subgroup(G))

    def test_curly_divides_exterior(self):
        for G in (S3, D4, Q8, V4):
            cur = compute_wedge(G, WedgeVariant.CURLY)
            ext = compute_wedge(G, WedgeVariant.EXTERIOR)
            assert ext.order % cur.order == 0
            hom = exterior_to_curly_surjection(ext, cur)
            assert set(hom.images) == set(range(cur.order))


class TestCorpusWide:
    def test_exterior_surjects_onto_curly(self, corpus, curly_wedges, exterior_wedges):
        for G in corpus:
            cur = curly_wedges[G.label]
            ext = exterior_wedges[G.label]
            assert ext.order % cur.order == 0, G.label
            hom = exterior_to_curly_surjection(ext, cur)
            assert set(hom.images) == set(range(cur.order)), G.label

    def test_identity_pair_images_trivial_everywhere(self, corpus, curly_wedges):
        for G in corpus:
            wr = curly_wedges[G.label]
            for x in range(G.order):
                assert wr.pair_image(0, x) == 0
                assert wr.pair_image(x, 0) == 0

    def test_curly_kernel_abelian(self, corpus, curly_wedges):
        for G in corpus:
            assert curly_wedges[G.label].kernel.is_abelian()


class TestKernels:
    def test_bogomolov_trivial_for_small_groups(self):
        for G in (Z4, S3, D4, Q8):
            assert bogomolov_kernel(G).factors == ()

    @pytest.mark.parametrize(
        "name,params,expected",
        [("cyclic", (5,), 1), ("cyclic", (8,), 1), ("quaternion8", (), 1)],
    )
    def test_multiplier_small(self, name, params, expected):
        assert multiplier_order(builtin(name, params)) == expected

    def test_multiplier_v4(self):
        assert multiplier_order(V4) == 2

    def test_multiplier_abelian_matches_exterior_square(self):
        # for a product of cyclic groups Z_d1 x ... the multiplier is
        # the product of gcd(di, dj) over i < j
        from math import gcd

        cases = [((2, 2), 2), ((2, 4), 2), ((4, 4), 4), ((2, 2, 2), 8)]
        for ds, expected in cases:
            G = cyclic(ds[0])
            for d in ds[1:]:
                G = direct_product(G, cyclic(d))
            check = 1
            for i in range(len(ds)):
                for j in range(i + 1, len(ds)):
                    check *= gcd(ds[i], ds[j])
            assert check == expected
            assert multiplier_order(G) == expected

    def test_relabeling_invariance(self):
        rng = random.Random(11)
        for G in (S3, D4):
            base = bogomolov_kernel(G).factors
            for _ in range(3):
                perm = [0] + rng.sample(range(1, G.order), G.order - 1)
                assert bogomolov_kernel(relabeled(G, perm)).factors == base


class TestPairings:
    def test_trivial_pairing(self):
        L = cyclic(1)
        phi = [[0] * 6 for _ in range(6)]
        assert check_pairing(S3, L, phi)

    def test_commutator_map_is_pairing(self):
        for G in (S3, D4, Q8):
            assert check_pairing(G, G, commutator_pairing_table(G))

    def test_pair_image_map_is_pairing(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        phi = [[wr.pair_image(m, n) for n in range(6)] for m in range(6)]
        assert check_pairing(S3, wr.realization.group, phi)

    def test_abelian_multiplication_is_not_pairing(self):
        phi = [[Z4.mul[a][b] for b in range(4)] for a in range(4)]
        assert not check_pairing(Z4, Z4, phi)

    def test_pairing_to_hom_identity(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        phi = [[wr.pair_image(m, n) for n in range(6)] for m in range(6)]
        hom = pairing_to_hom(S3, wr.realization.group, phi, wr)
        assert hom.images == tuple(range(wr.order))

    def test_pairing_to_hom_commutator_recovers_kappa(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        hom = pairing_to_hom(S3, S3, commutator_pairing_table(S3), wr)
        assert hom.images == wr.kappa.images

    def test_pairing_to_hom_trivial(self):
        wr = compute_wedge(S3, WedgeVariant.CURLY)
        L = cyclic(1)
        phi = [[0] * 6 for _ in range(6)]
        hom = pairing_to_hom(S3, L, phi, wr)
        assert set(hom.images) == {0}

    def test_non_pairing_rejected(self):
        wr = compute_wedge(Z4, WedgeVariant.CURLY)
        phi = [[Z4.mul[a][b] for b in range(4)] for a in range(4)]
        with pytest.raises(NotAPairing):
            pairing_to_hom(Z4, Z4, phi, wr)
