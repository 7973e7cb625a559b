from __future__ import annotations

import numpy as np
import pytest

from boxtensor import (
    CapabilityError,
    FiniteGroup,
    ValidationError,
    automorphism_group,
    cyclic,
    dihedral,
    direct_product,
    enumerate_homs,
    find_isomorphism,
    fingerprint,
    hom_from_generator_images,
    is_isomorphic,
    klein_four,
    quaternion,
    quotient,
    semidirect_product,
    subgroup_generated,
    symmetric,
)
from boxtensor.group_core import (
    center,
    derived_subgroup,
    generating_sequence,
    normal_closure,
)


def test_identity_must_sit_at_index_zero():
    # C2 written with the identity in the second slot.
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 0]][::-1])


def test_rejects_non_latin_table():
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 1]])


def test_rejects_non_associative_table():
    # A Latin square with identity row/column that fails associativity.
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValidationError):
        FiniteGroup(table)


def test_basic_arithmetic_on_c6():
    g = cyclic(6)
    assert g.order == 6
    assert g.mul(4, 5) == 3
    assert g.inv(2) == 4
    assert g.power(5, -1) == 1
    assert g.exponent == 6
    assert g.element_orders == (1, 6, 3, 2, 3, 6)
    assert g.is_abelian


def test_s3_is_not_abelian():
    s3 = symmetric(3)
    assert s3.order == 6
    assert not s3.is_abelian
    assert sorted(s3.element_orders) == [1, 2, 2, 2, 3, 3]


def test_subgroups_of_s3():
    s3 = symmetric(3)
    orders = set()
    for x in range(6):
        orders.add(subgroup_generated(s3, (x,)).order)
    assert orders == {1, 2, 3}
    # Two distinct transpositions already generate everything.
    t = [x for x in range(6) if s3.power(x, 2) == 0 and x != 0]
    assert subgroup_generated(s3, (t[0], t[1])).order == 6


def test_normal_closure_of_a_transposition_is_all_of_s3():
    s3 = symmetric(3)
    t = next(x for x in range(1, 6) if s3.power(x, 2) == 0)
    assert normal_closure(s3, (t,)).order == 6


def test_center_and_derived_subgroup():
    s3 = symmetric(3)
    assert center(s3).order == 1
    assert derived_subgroup(s3).order == 3
    d4 = dihedral(4)
    assert center(d4).order == 2
    assert derived_subgroup(d4).order == 2
    v4 = klein_four()
    assert center(v4).order == 4
    assert derived_subgroup(v4).order == 1


def test_quotient_s3_by_derived_subgroup():
    s3 = symmetric(3)
    q, proj = quotient(s3, derived_subgroup(s3))
    assert q.order == 2
    assert proj.is_surjective
    assert proj.kernel.elements == derived_subgroup(s3).elements
    assert is_isomorphic(q, cyclic(2))


def test_direct_product_of_c2_and_c3_is_c6():
    p = direct_product(cyclic(2), cyclic(3))
    assert p.order == 6
    assert is_isomorphic(p, cyclic(6))


def test_semidirect_product_builds_d4_from_c4_and_c2():
    c4, c2 = cyclic(4), cyclic(2)
    inversion = ((0, 1, 2, 3), (0, 3, 2, 1))
    d = semidirect_product(c4, c2, inversion)
    assert d.order == 8
    assert is_isomorphic(d, dihedral(4))
    # Trivial twist recovers the direct product.
    t = semidirect_product(c4, c2, ((0, 1, 2, 3), (0, 1, 2, 3)))
    assert is_isomorphic(t, direct_product(c4, c2))


def test_semidirect_rejects_non_automorphism_twist():
    with pytest.raises(ValidationError):
        semidirect_product(cyclic(4), cyclic(2), ((0, 1, 2, 3), (0, 2, 1, 3)))


def test_automorphism_group_sizes():
    aut_v4, maps = automorphism_group(klein_four())
    assert aut_v4.order == len(maps) == 6
    assert is_isomorphic(aut_v4, symmetric(3))
    assert automorphism_group(cyclic(8))[0].order == 4
    assert automorphism_group(symmetric(3))[0].order == 6
    assert automorphism_group(quaternion())[0].order == 24


def test_hom_counts_into_c2():
    c2 = cyclic(2)
    assert len(enumerate_homs(cyclic(2), c2)) == 2
    assert len(enumerate_homs(cyclic(4), c2)) == 2
    assert len(enumerate_homs(klein_four(), c2)) == 4
    assert len(enumerate_homs(symmetric(3), c2)) == 2
    assert len(enumerate_homs(cyclic(2), symmetric(3))) == 4


def test_hom_from_generator_images():
    c4, c2 = cyclic(4), cyclic(2)
    h = hom_from_generator_images(c4, (1,), (1,), c2)
    assert h.image == (0, 1, 0, 1)
    with pytest.raises(ValidationError):
        hom_from_generator_images(c2, (1,), (1,), c4)  # violates x^2 = e


def test_find_isomorphism_between_relabelings():
    c4 = cyclic(4)
    perm = (0, 3, 1, 2)
    inv = tuple(perm.index(i) for i in range(4))
    table = [[perm[c4.mul(inv[i], inv[j])] for j in range(4)] for i in range(4)]
    other = FiniteGroup(table)
    iso = find_isomorphism(c4, other)
    assert iso is not None and iso.is_isomorphism
    assert find_isomorphism(c4, klein_four()) is None
    assert not is_isomorphic(c4, klein_four())


def test_fingerprint_separates_c4_from_v4():
    assert fingerprint(cyclic(4)) != fingerprint(klein_four())
    assert fingerprint(cyclic(4)).abelian_invariants == (4,)
    assert fingerprint(klein_four()).abelian_invariants == (2, 2)
    # For nonabelian groups the slot carries the abelianization's invariants.
    assert fingerprint(symmetric(3)).abelian_invariants == (2,)


def test_generating_sequence_is_small_and_generates():
    for g in (cyclic(6), klein_four(), symmetric(4), quaternion()):
        seq = generating_sequence(g)
        assert subgroup_generated(g, seq).order == g.order
        assert len(seq) <= max(1, g.order.bit_length())


def test_isomorphism_search_refuses_huge_groups():
    big = cyclic(513)
    with pytest.raises(CapabilityError):
        is_isomorphic(big, big)


def test_table_entries_round_trip_through_numpy_view():
    g = cyclic(3)
    assert g.np.dtype == np.int32
    assert g.np.shape == (3, 3)
    assert g.mul(2, 2) == int(g.np[2, 2]) == 1
