from __future__ import annotations

import pytest

from boxtensor import (
    ValidationError,
    check_compatibility,
    check_full_compatibility,
    check_half_compatibility,
    conjugation_action,
    cyclic,
    equal_actions_system,
    klein_four,
    make_action_system,
    mirror_system,
    symmetric,
    trivial_action,
    verify_fact,
)
from boxtensor.actions import FULL_CONDITIONS, act, act_word


def test_conjugation_on_abelian_group_is_trivial():
    v4 = klein_four()
    assert conjugation_action(v4) == trivial_action(v4, v4)
    s3 = symmetric(3)
    assert conjugation_action(s3) != trivial_action(s3, s3)


def test_shorthands_resolve_and_sigma_rejects_conjugation():
    c2, c4 = cyclic(2), cyclic(4)
    sys = make_action_system(c2, c4)
    assert sys.conjugation_self_actions
    assert sys.sigma_G == trivial_action(c2, c4)
    with pytest.raises(ValidationError):
        make_action_system(c2, c4, sigma_G="conjugation")


def test_action_family_validation():
    c2, c4 = cyclic(2), cyclic(4)
    ident4 = tuple(range(4))
    with pytest.raises(ValidationError):  # wrong number of permutations
        make_action_system(c2, c4, sigma_G=(ident4,))
    with pytest.raises(ValidationError):  # not a permutation
        make_action_system(c2, c4, sigma_G=(ident4, (0, 0, 2, 2)))
    with pytest.raises(ValidationError):  # permutation but not an automorphism
        make_action_system(c2, c4, sigma_G=(ident4, (0, 2, 1, 3)))
    with pytest.raises(ValidationError):  # automorphisms but not a homomorphism
        bad = ((0, 3, 2, 1), (0, 1, 2, 3))
        make_action_system(c2, c4, sigma_G=bad)


def test_act_dispatches_on_tags():
    s3 = symmetric(3)
    conj = conjugation_action(s3)
    sys = make_action_system(s3, s3, "conjugation", "conjugation", conj, conj)
    g = next(x for x in range(1, 6) if s3.power(x, 3) == 0 and x != 0)
    t = next(x for x in range(1, 6) if s3.power(x, 2) == 0)
    assert act(sys, ("G", g), ("G", t)) == ("G", s3.conj(g, t))
    assert act(sys, ("G", g), ("H", t)) == ("H", s3.conj(g, t))
    # ^{g g^-1}t = t via a two-letter word.
    assert act_word(sys, (("G", g, 1), ("G", g, -1)), ("H", t)) == ("H", t)


def test_full_compatibility_of_the_order_eight_system(psi_ab):
    rep = check_full_compatibility(psi_ab)
    assert rep.regime == "fully_compatible"
    assert set(rep.per_condition) == set(FULL_CONDITIONS)
    assert all(rep.per_condition.values())
    assert rep.first_witness is None


def test_rejected_system_reports_exact_witness(psi_b):
    rep = check_full_compatibility(psi_b)
    assert rep.regime == "none"
    assert not all(rep.per_condition.values())
    w = rep.first_witness
    assert w is not None
    assert w.element_labels == ("a", "a", "a")
    assert (w.lhs_label, w.rhs_label) == ("a", "ab")


def test_relabelled_rejection_witness(psi_a):
    rep = check_full_compatibility(psi_a)
    assert rep.regime == "none"
    w = rep.first_witness
    assert w.element_labels == ("b", "b", "b")
    assert (w.lhs_label, w.rhs_label) == ("b", "ab")


def test_equal_actions_helper_matches_manual_construction(psi_ab):
    fam = psi_ab.rho_G
    built = equal_actions_system(psi_ab.G, fam)
    assert built.rho_G == built.rho_H == built.sigma_G == built.sigma_H == fam


def test_conjugation_system_regimes():
    s3 = symmetric(3)
    conj = conjugation_action(s3)
    sys = make_action_system(s3, s3, "conjugation", "conjugation", conj, conj)
    assert sys.conjugation_self_actions
    rep = check_compatibility(sys)
    assert rep.regime == "compatible"
    assert rep.per_condition == {"e131": True, "e132": True}
    # Conjugation acting on both sides satisfies the eight-fold condition too.
    assert check_full_compatibility(sys).regime == "fully_compatible"
    assert check_half_compatibility(sys).regime == "compatible"
    assert verify_fact(sys).regime == "compatible"


def test_compatibility_requires_conjugation_self_actions(psi_ab):
    rep = check_compatibility(psi_ab)
    assert not rep.conjugation_self_actions
    assert rep.regime == "none"
    assert rep.diagnostics
    with pytest.raises(ValidationError):
        verify_fact(psi_ab)


def test_mirror_swaps_the_two_groups():
    c2, s3 = cyclic(2), symmetric(3)
    sys = make_action_system(c2, s3)
    m = mirror_system(sys)
    assert m.G.order == 6 and m.H.order == 2
    assert m.sigma_G == sys.sigma_H
    assert mirror_system(m).sigma_G == sys.sigma_G
