"""Cocycle spaces, restriction maps, and the kernel-intersection bound."""

import itertools
from math import gcd

import numpy as np
import pytest

from grouplab.catalog import builtin
from grouplab.cohomology import (
    b0_lower_bound,
    cocycle_dump,
    cocycle_space,
    h2_order,
    multiplier_order_oracle,
    restrict,
)
from grouplab.errors import GroupTooLargeForOracle, ModulusMismatch
from grouplab.groups import Subgroup, abelian_subgroups, direct_product, from_mul_table


def cyclic(n):
    return from_mul_table([[(i + j) % n for j in range(n)] for i in range(n)], label=f"Z{n}")


Z2 = cyclic(2)
V4 = direct_product(Z2, Z2, label="V4")
S3 = builtin("symmetric", (3,))
D4 = builtin("dihedral", (4,))


def brute_h2(G, m):
    """Count cocycle tables and coboundaries by literal enumeration."""
    n = G.order
    k = (n - 1) ** 2
    num_z = 0
    for vec in itertools.product(range(m), repeat=k):
        table = [[0] * n for _ in range(n)]
        for x in range(1, n):
            for y in range(1, n):
                table[x][y] = vec[(x - 1) * (n - 1) + (y - 1)]
        ok = True
        for x in range(n):
            for y in range(n):
                xy = G.mul[x][y]
                for z in range(n):
                    if (table[x][y] + table[xy][z] - table[y][z] - table[x][G.mul[y][z]]) % m:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            num_z += 1
    cob = set()
    for gv in itertools.product(range(m), repeat=n - 1):
        g = [0] + list(gv)
        cob.add(
            tuple(
                (g[x] + g[y] - g[G.mul[x][y]]) % m
                for x in range(1, n)
                for y in range(1, n)
            )
        )
    return num_z // len(cob)


class TestH2Order:
    @pytest.mark.parametrize(
        "G,m",
        [(Z2, 2), (Z2, 3), (Z2, 4), (cyclic(3), 3), (cyclic(3), 2), (cyclic(4), 2)],
    )
    def test_against_brute_force(self, G, m):
        assert h2_order(G, m)[0] == brute_h2(G, m)

    def test_spec_values(self):
        assert h2_order(Z2, 2)[0] == 2
        assert h2_order(Z2, 3)[0] == 1
        assert h2_order(V4, 4)[0] == 8
        assert h2_order(S3, 6)[0] == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8])
    def test_cyclic_gcd_law(self, n, m):
        assert h2_order(cyclic(n), m)[0] == gcd(n, m)

    def test_basis_cocycles_verified(self):
        space = cocycle_space(V4, 4)
        n = V4.order
        for table in space.basis:
            for t in range(n):
                assert table[0][t] == 0 and table[t][0] == 0
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        lhs = table[x][y] + table[V4.mul[x][y]][z]
                        rhs = table[y][z] + table[x][V4.mul[y][z]]
                        assert (lhs - rhs) % 4 == 0

    def test_cap(self):
        with pytest.raises(GroupTooLargeForOracle):
            h2_order(builtin("cyclic", (25,)), 2)


class TestMultiplierOracle:
    @pytest.mark.parametrize(
        "family,params,expected",
        [
            ("cyclic", (2,), 1),
            ("cyclic", (6,), 1),
            ("symmetric", (3,), 1),
            ("quaternion8", (), 1),
            ("dihedral", (4,), 2),
            ("alternating", (4,), 2),
        ],
    )
    def test_known_multipliers(self, family, params, expected):
        assert multiplier_order_oracle(builtin(family, params)) == expected

    def test_v4(self):
        assert multiplier_order_oracle(V4) == 2


class TestRestriction:
    def test_restrict_to_trivial_is_zero(self):
        space = cocycle_space(V4, 4)
        c = space.class_from_coords(tuple(1 for _ in range(space.rank)))
        assert restrict(c, Subgroup(V4, (0,))).is_zero()

    def test_restrict_along_whole_group_is_identity(self):
        space = cocycle_space(V4, 4)
        full = Subgroup(V4, tuple(range(4)))
        for coords in itertools.product(*[range(d) for d in space.basis_orders]):
            c = space.class_from_coords(coords)
            assert restrict(c, full).coords == c.coords

    def test_additivity(self):
        space = cocycle_space(D4, 4)
        subs = abelian_subgroups(D4, maximal_only=True)
        cs = [
            space.class_from_coords(tuple(1 if j == i else 0 for j in range(space.rank)))
            for i in range(space.rank)
        ]
        for A in subs:
            for c1 in cs:
                for c2 in cs:
                    left = restrict(c1 + c2, A)
                    right = restrict(c1, A) + restrict(c2, A)
                    assert left.coords == right.coords

    def test_coordinates_match_direct_table_restriction(self):
        space = cocycle_space(V4, 2)
        assert space.h2_order == 8
        for coords in itertools.product(*[range(d) for d in space.basis_orders]):
            cls = space.class_from_coords(coords)
            big = cls.table()
            for A in abelian_subgroups(V4):
                if len(A) == 1:
                    continue
                sub, members = A.as_group()
                space_A = cocycle_space(sub, 2)
                via_map = restrict(cls, A, target_space=space_A)
                small = [[big[a][b] for b in members] for a in members]
                via_table = space_A.class_from_table(small)
                assert via_map.coords == via_table.coords

    def test_modulus_mismatch(self):
        space4 = cocycle_space(V4, 4)
        space2 = cocycle_space(V4, 2)
        c = space4.zero()
        with pytest.raises(ModulusMismatch):
            restrict(c, Subgroup(V4, (0, 1)), target_space=space2)


class TestLowerBound:
    def test_abelian_is_trivial(self):
        for G in (Z2, V4, cyclic(8)):
            order, inv = b0_lower_bound(G, G.order)
            assert order == 1 and inv.factors == ()

    def test_s3(self):
        assert b0_lower_bound(S3, 6)[0] == 1

    def test_d4(self):
        assert b0_lower_bound(D4, 8)[0] == 1

    def test_monotone_in_subgroup_stack(self):
        # adding more abelian subgroups can only shrink the intersection
        subs = abelian_subgroups(D4, maximal_only=True)
        m = 8
        prev = None
        for take in range(len(subs) + 1):
            order, _ = b0_lower_bound(D4, m, subgroups=subs[:take])
            if prev is not None:
                assert order <= prev
            prev = order

    def test_empty_stack_is_whole_h2(self):
        order, _ = b0_lower_bound(D4, 8, subgroups=[])
        assert order == cocycle_space(D4, 8).h2_order


def test_cocycle_dump_shape():
    doc = cocycle_dump(V4, 4)
    assert doc["h2_order"] == 8
    assert len(doc["basis_tables"]) == len(doc["basis_orders"])
    assert doc["restrictions"]
    for entry in doc["restrictions"]:
        assert len(entry["matrix"]) == len(doc["basis_orders"])
