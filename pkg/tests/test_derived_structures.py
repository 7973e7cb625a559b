from __future__ import annotations

import numpy as np
import pytest

from boxtensor import (
    TensorSpec,
    ValidationError,
    check_comp_surjection,
    check_compatibility,
    check_order_identities,
    check_thm211,
    classify_pair,
    comp_subgroups,
    compute_tensor,
    conjugation_action,
    crossed_module_phi,
    cyclic,
    homology,
    is_isomorphic,
    make_action_system,
    symmetric,
    verify_prop23,
    verify_prop24,
)
from boxtensor.derived_structures import derivative, deviational, g_center


def box_of(sys):
    return compute_tensor(TensorSpec(kind="box", system=sys, route="direct"))


def half_131_system():
    """A conjugation self-action system on S3 satisfying e131 but not e132."""
    s3 = symmetric(3)
    cls = classify_pair(s3, s3)
    e131, e132 = cls.conjugation_sigma_tables()
    isG, isH = map(int, np.argwhere(e131 & ~e132)[0])
    quad = (cls.rho_G.conjugation_index, cls.rho_H.conjugation_index, isG, isH)
    sys = cls.system(quad)
    assert check_compatibility(sys).regime == "half_compatible_131"
    return sys


def test_distinguished_subgroups_of_the_order_eight_system(psi_ab):
    # Both sides carry the same family, so the subgroups agree by symmetry.
    for side in ("G", "H"):
        grp = psi_ab.group(side)
        assert deviational(psi_ab, side).elements == (0, 3)
        assert derivative(psi_ab, side).elements == (0, 3)
        assert g_center(psi_ab, side).elements == (0, 3)
        assert grp.label(3) == "ab"


def test_prop23_containment_and_factorization(psi_ab):
    rep = verify_prop23(psi_ab)
    assert rep.ok
    assert rep.anchor == "Prop 2.3 / E:2.3.1"
    assert len(rep.sides) == 2
    for side in rep.sides:
        assert side.ok
        assert side.deviational_order == 2
        assert side.center_order == 2
        assert side.first_failure is None


def test_prop23_requires_full_compatibility(psi_b):
    with pytest.raises(ValidationError) as exc:
        verify_prop23(psi_b)
    assert "verify prop23" in str(exc.value)


def test_prop24_existence_families(psi_ab):
    rep = verify_prop24(psi_ab, box_of(psi_ab))
    assert rep.ok
    assert rep.anchor == "Prop 2.4 / E:2.4.1-E:2.4.6"
    # Two identity checks plus four existence families.
    assert rep.inversion_ok and rep.word_conjugation_ok
    assert len(rep.families) == 4
    assert [f.name for f in rep.families] == ["e243", "e244", "e245", "e246"]
    anchors = [f.anchor for f in rep.families]
    assert anchors == ["Prop 2.4 / E:2.4.%d" % k for k in range(3, 7)]
    for fam in rep.families:
        assert fam.ok and fam.tuple_count > 0 and fam.first_failure is None


def test_crossed_module_structure(psi_ab):
    data = crossed_module_phi(psi_ab, box_of(psi_ab))
    assert data.ok
    assert data.anchor == "Prop 2.8"
    assert data.well_defined and data.action_well_defined
    assert data.equivariance_ok and data.peiffer_ok
    assert data.kernel_central
    # Quotient of V4 by the order-2 deviational subgroup.
    assert data.quotient_group.order == 2


def test_thm211_on_the_order_eight_system(psi_ab):
    rep = check_thm211(psi_ab, box_of(psi_ab))
    assert rep.ok
    assert rep.anchor == "Thm 2.11"
    assert rep.dbar_order == 1       # derivative lands inside the deviational part
    assert rep.dbar_cyclic and rep.asserted
    assert rep.tensor_abelian


def test_order_identities(psi_ab):
    rep = check_order_identities(psi_ab, box_of(psi_ab))
    assert rep.ok
    assert rep.anchor == "Prop 3.5 / Prop 3.6"
    assert rep.derivative_pairs_checked > 0
    assert rep.center_pairs_checked > 0
    assert rep.first_failure is None


def test_comp_subgroups_on_a_half_compatible_system():
    sys = half_131_system()
    rep = comp_subgroups(sys, "G")
    assert rep.ok
    assert rep.anchor == "Thm 6.4"
    assert rep.X.order == 3 and rep.Xp.order == 3
    assert rep.kills_action and rep.stable_under_other
    assert rep.quotient_regime == "compatible"
    assert rep.quotient_system.G.order == 2
    sur = check_comp_surjection(rep)
    assert sur.ok and sur.xp_order == 3
    assert sur.source_order >= sur.target_order


def test_comp_subgroups_trivial_on_all_conjugation_system():
    s3 = symmetric(3)
    conj = conjugation_action(s3)
    sys = make_action_system(s3, s3, "conjugation", "conjugation", conj, conj)
    for side in ("G", "H"):
        rep = comp_subgroups(sys, side)
        assert rep.ok and rep.Xp.order == 1
        assert rep.projection.is_isomorphism


def test_comp_subgroups_rejects_wrong_side_and_bad_systems(psi_ab):
    with pytest.raises(ValidationError):
        comp_subgroups(half_131_system(), "sideways")
    with pytest.raises(ValidationError):
        comp_subgroups(psi_ab, "G")     # self-actions are not conjugation


def test_homology_of_the_trivial_two_element_module():
    c2 = cyclic(2)
    sys = make_action_system(c2, c2)     # conjugation selves, trivial crosses
    res = homology(sys)
    assert res.anchor == "Cor 6.5"
    assert res.H0.order == 2 and is_isomorphic(res.H0, c2)
    assert res.H1.order == 2 and is_isomorphic(res.H1, c2)
    assert res.aprime_order == 1
    assert not res.image_normalized


def test_homology_rejects_non_conjugation_systems(psi_ab):
    with pytest.raises(ValidationError):
        homology(psi_ab)
