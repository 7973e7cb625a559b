from __future__ import annotations

import numpy as np
import pytest

from boxtensor import (
    EnumLimits,
    InconclusiveError,
    TensorSpec,
    ValidationError,
    compute_tensor,
    conjugation_action,
    cyclic,
    eta_presentation,
    fingerprint,
    identify,
    is_isomorphic,
    klein_four,
    make_action_system,
    symmetric,
    verify_thm42,
)
from boxtensor.group_core import direct_product
from boxtensor.tensor_builders import (
    check_conjugation_formula,
    check_defining_relations,
    check_expansion_formulas,
    check_inverse_conjugation_family,
    check_inversion_identity,
    tensor_action_perm,
)


def box(sys, route="direct", limits=None):
    return compute_tensor(TensorSpec(kind="box", system=sys, route=route), limits)


def test_order_eight_box_product(psi_ab):
    t = box(psi_ab)
    assert t.group.order == 8
    assert is_isomorphic(t.group, direct_product(cyclic(4), cyclic(2)))
    assert identify(t.group) == "C4 x C2"
    check_defining_relations(psi_ab, t)


def test_order_four_box_products(psi_b, psi_a):
    for sys in (psi_b, psi_a):
        t = box(sys)
        assert t.group.order == 4
        assert is_isomorphic(t.group, klein_four())
        check_defining_relations(sys, t)


def test_via_eta_route_agrees_with_direct(psi_ab):
    direct = box(psi_ab)
    via = box(psi_ab, route="via_eta")
    assert via.group.order == direct.group.order
    assert is_isomorphic(via.group, direct.group)
    assert fingerprint(via.group) == fingerprint(direct.group)
    check_defining_relations(psi_ab, via)


def test_via_eta_requires_full_compatibility(psi_b):
    with pytest.raises(ValidationError):
        box(psi_b, route="via_eta")


def test_inassaridze_requires_conjugation_self_actions(psi_ab):
    with pytest.raises(ValidationError):
        compute_tensor(TensorSpec(kind="inassaridze", system=psi_ab, route="direct"))


def test_brown_loday_requires_compatible_regime(psi_ab):
    with pytest.raises(ValidationError):
        compute_tensor(TensorSpec(kind="brown_loday", system=psi_ab, route="direct"))


def test_all_three_kinds_agree_on_conjugation_system():
    s3 = symmetric(3)
    conj = conjugation_action(s3)
    sys = make_action_system(s3, s3, "conjugation", "conjugation", conj, conj)
    results = {}
    for kind in ("box", "brown_loday", "inassaridze"):
        results[kind] = compute_tensor(TensorSpec(kind=kind, system=sys, route="direct"))
    orders = {k: r.group.order for k, r in results.items()}
    assert len(set(orders.values())) == 1
    assert is_isomorphic(results["box"].group, results["brown_loday"].group)
    assert is_isomorphic(results["box"].group, results["inassaridze"].group)


def test_pairing_covers_generators_and_respects_identity(psi_ab):
    t = box(psi_ab)
    P = np.asarray(t.pairing)
    assert P.shape == (4, 4)
    assert np.all(P[0, :] == 0) and np.all(P[:, 0] == 0)


def test_limits_propagate_to_the_enumeration(psi_ab):
    with pytest.raises(InconclusiveError) as exc:
        box(psi_ab, limits=EnumLimits(max_cosets=2))
    assert exc.value.coset_table.peak_live >= 2


def test_tensor_action_is_a_permutation_of_the_tensor_group(psi_ab):
    t = box(psi_ab)
    for actor in (("G", 1), ("G", 3), ("H", 2)):
        p = tensor_action_perm(psi_ab, t, actor)
        assert sorted(p.tolist()) == list(range(t.group.order))
        assert p[0] == 0


def test_identity_suites_pass_on_the_order_eight_system(psi_ab):
    t = box(psi_ab)
    check_inversion_identity(psi_ab, t)
    check_expansion_formulas(psi_ab, t)
    check_conjugation_formula(psi_ab, t)
    check_inverse_conjugation_family(psi_ab, t)


def test_eta_presentation_shapes(psi_ab):
    full = eta_presentation(psi_ab)
    thin = eta_presentation(psi_ab, conjugators="generators")
    # One generator per non-identity element on each side.
    assert full.ngens == thin.ngens == 6
    assert len(thin.relators) < len(full.relators)
    with pytest.raises(ValidationError):
        eta_presentation(psi_ab, conjugators="some")


def test_thm42_verification_on_the_order_eight_system(psi_ab):
    rep = verify_thm42(psi_ab)
    assert rep.ok
    assert rep.eta_order == 8 * 4 * 4
    assert rep.box_order == 8
    assert rep.order_equation_ok
    assert rep.tau_matches_box
    assert rep.semidirect_matches_eta
    assert rep.stats["eta_index"] * 4 == rep.eta_order


def test_thm42_needs_the_fully_compatible_regime(psi_b):
    with pytest.raises(ValidationError):
        verify_thm42(psi_b)


def test_thm42_accepts_a_precomputed_box(psi_ab):
    t = box(psi_ab)
    rep = verify_thm42(psi_ab, box=t)
    assert rep.ok and rep.box_order == t.group.order


def test_unknown_kind_and_route_are_rejected(psi_ab):
    with pytest.raises(ValidationError):
        TensorSpec(kind="exterior", system=psi_ab, route="direct")
    with pytest.raises(ValidationError):
        TensorSpec(kind="box", system=psi_ab, route="sideways")
