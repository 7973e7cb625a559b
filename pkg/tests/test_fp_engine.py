from __future__ import annotations

import pytest

from boxtensor import (
    EnumLimits,
    InconclusiveError,
    Presentation,
    ValidationError,
    cayley_presentation,
    coset_group,
    cyclic,
    dihedral,
    is_isomorphic,
    quaternion,
    subgroup_of_coset_group,
    symmetric,
    todd_coxeter,
)
from boxtensor.fp_engine import free_reduce, invert_word, trace


def test_free_reduction_cancels_adjacent_inverses():
    assert free_reduce((1, 2, -2, -1)) == ()
    assert free_reduce((1, -2, 2, 3)) == (1, 3)
    assert free_reduce((1, 1, -1)) == (1,)
    assert invert_word((1, -2, 3)) == (-3, 2, -1)


def test_presentation_rejects_bad_letters():
    with pytest.raises(ValidationError):
        Presentation(("x",), ((2,),))
    with pytest.raises(ValidationError):
        Presentation(("x",), ((0,),))


def test_cyclic_enumeration():
    p = Presentation(("x",), ((1,) * 6,))
    ct = todd_coxeter(p)
    assert ct.complete and ct.ncosets == 6
    ct2 = todd_coxeter(p, subgroup_words=((1, 1),))
    assert ct2.ncosets == 2


def test_dihedral_presentation_gives_dihedral_group():
    p = Presentation(("r", "s"), ((1,) * 4, (2, 2), (1, 2, 1, 2)))
    cg = coset_group(p)
    assert cg.group.order == 8
    assert is_isomorphic(cg.group, dihedral(4))


def test_quaternion_presentation_gives_quaternion_group():
    p = Presentation(("a", "b"), ((1, 1, 1, 1), (1, 1, -2, -2), (-2, 1, 2, 1)))
    cg = coset_group(p)
    assert cg.group.order == 8
    assert is_isomorphic(cg.group, quaternion())


def test_trivialising_relator_collapses_everything():
    p = Presentation(("x", "y"), ((1,), (2, 2, 2)))
    ct = todd_coxeter(p)
    assert ct.ncosets == 3


def test_free_presentations_need_explicit_opt_in():
    p = Presentation(("x",), ())
    with pytest.raises(ValidationError):
        todd_coxeter(p)
    # The whole group as subgroup has index 1 even in a free group.
    ct = todd_coxeter(p, subgroup_words=((1,),), allow_free=True)
    assert ct.complete and ct.ncosets == 1


def test_enumeration_reports_inconclusive_with_high_water_mark():
    p = Presentation(("x",), ((1,) * 100,))
    ct = todd_coxeter(p, limits=EnumLimits(max_cosets=10))
    assert not ct.complete
    assert ct.peak_live >= 10
    assert ct.total_defined >= ct.peak_live
    # Group construction refuses to proceed from an aborted table.
    with pytest.raises(InconclusiveError) as exc:
        coset_group(p, limits=EnumLimits(max_cosets=10))
    assert exc.value.coset_table.peak_live >= 10


def test_limits_must_be_positive():
    with pytest.raises(ValidationError):
        EnumLimits(max_cosets=0)


def test_coset_group_satisfies_its_relators():
    p = Presentation(("r", "s"), ((1,) * 4, (2, 2), (1, 2, 1, 2)))
    cg = coset_group(p)
    for rel in p.relators:
        assert cg.evaluate(rel) == 0
    r, s = cg.generator_images
    assert cg.group.mul(r, s) == cg.evaluate((1, 2))


def test_trace_follows_the_coset_table():
    p = Presentation(("x",), ((1, 1, 1),))
    ct = todd_coxeter(p)
    assert trace(ct, 0, (1, 1, 1)) == 0
    assert trace(ct, 0, (1,)) != 0


def test_subgroup_of_coset_group_picks_out_generated_image():
    p = Presentation(("r", "s"), ((1,) * 4, (2, 2), (1, 2, 1, 2)))
    cg = coset_group(p)
    sub = subgroup_of_coset_group(cg, ((1,),))
    assert sub.order == 4


def test_cayley_presentation_round_trips_s3_and_c6():
    for g in (symmetric(3), cyclic(6)):
        p = cayley_presentation(g)
        cg = coset_group(p)
        assert cg.group.order == g.order
        assert is_isomorphic(cg.group, g)
