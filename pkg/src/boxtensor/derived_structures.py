"""Distinguished subgroups of an action system and the verifiers built on
them: containment and factorization witnesses, the crossed module into
G/D_rho(G), the cyclicity criterion for abelian tensors, order identities,
the X/X' quotient pipeline, and low-degree homology of the Inassaridze
product.

Each verifier returns a report object with an `ok` flag and the anchor tag
used in serialized output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .actions import (ActionSystem, REGIME_COMPATIBLE, REGIME_FULLY,
                      REGIME_HALF_131, REGIME_HALF_132, act_word,
                      check_compatibility, check_full_compatibility,
                      check_half_compatibility, conjugation_action,
                      mirror_system)
from .fp_engine import EnumLimits
from .group_core import (FiniteGroup, GroupHom, Subgroup, ValidationError,
                         hom_from_generator_images, normal_closure, quotient,
                         subgroup_generated)
from .tensor_builders import (TensorResult, TensorSpec, compute_tensor,
                              tensor_action_perm)

SIDES = ("G", "H")

HALF_REGIMES = (REGIME_COMPATIBLE, REGIME_HALF_131, REGIME_HALF_132)


def _side_view(sys: ActionSystem, side: str):
    """(object group, other group, self-action, outgoing, incoming) for a side."""
    if side == "G":
        return sys.G, sys.H, sys.rho_G, sys.sigma_G, sys.sigma_H
    if side == "H":
        return sys.H, sys.G, sys.rho_H, sys.sigma_H, sys.sigma_G
    raise ValidationError("side must be 'G' or 'H', got %r" % side)


def g_center(sys: ActionSystem, side: str = "G") -> Subgroup:
    """Elements of one group that act trivially on both groups.

    Always normal: it is the intersection of the kernels of the two actions.
    """
    obj, _, rho, sig_out, _ = _side_view(sys, side)
    ident_self = tuple(range(obj.order))
    ident_out = tuple(range(len(sig_out[0])))
    elems = tuple(x for x in range(obj.order)
                  if rho[x] == ident_self and sig_out[x] == ident_out)
    sub = Subgroup(obj, elems)
    assert sub.is_normal, "kernel intersection must be normal"
    return sub


def derivative(sys: ActionSystem, side: str = "G") -> Subgroup:
    """Subgroup generated by the displacements x * ^y(x^-1), y in the other group.

    Normality is not asserted; it holds in the compatible regime and the
    `is_normal` property reports it either way.
    """
    obj, oth, _, _, sig_in = _side_view(sys, side)
    gens = {obj.mul(x, sig_in[y][obj.inv(x)])
            for x in range(obj.order) for y in range(oth.order)}
    return subgroup_generated(obj, gens)


def deviational(sys: ActionSystem, side: str = "G") -> Subgroup:
    """Normal closure of the elements ^x(x') * x * x'^-1 * x^-1 measuring how
    far the self-action is from conjugation."""
    obj, _, rho, _, _ = _side_view(sys, side)
    seed = {obj.prod((rho[x][x1], x, obj.inv(x1), obj.inv(x)))
            for x in range(obj.order) for x1 in range(obj.order)}
    return normal_closure(obj, seed)


def _require_fully(sys: ActionSystem, what: str) -> None:
    rep = check_full_compatibility(sys)
    if rep.regime != REGIME_FULLY:
        raise ValidationError("%s requires the fully compatible regime, got %r"
                              % (what, rep.regime))


# -- containment and factorization ---------------------------------------


@dataclass
class Prop23SideReport:
    side: str
    deviational_order: int
    center_order: int
    containment_ok: bool
    factorization_ok: bool
    witnesses: tuple[tuple[tuple[int, int], int, int], ...]
    first_failure: Optional[tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return self.containment_ok and self.factorization_ok


@dataclass
class Prop23Report:
    sides: tuple[Prop23SideReport, ...]
    anchor: str = "Prop 2.3 / E:2.3.1"

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.sides)


def verify_prop23(sys: ActionSystem) -> Prop23Report:
    """Deviational subgroup sits inside the center-like kernel, and every
    twisted conjugate factors as v*(x x' x^-1) = (x x' x^-1)*w with v, w in it.

    The factorization determines v and w, so existence reduces to membership;
    both witnesses are recorded per pair.
    """
    _require_fully(sys, "verify prop23")
    out = []
    for side in SIDES:
        obj, _, rho, _, _ = _side_view(sys, side)
        dev = deviational(sys, side)
        cen = g_center(sys, side)
        containment = dev.members <= cen.members
        wits = []
        factorization = True
        first_failure = None
        for x in range(obj.order):
            for x1 in range(obj.order):
                target = rho[x][x1]
                base = obj.prod((x, x1, obj.inv(x)))
                w = obj.mul(obj.inv(base), target)
                v = obj.mul(target, obj.inv(base))
                if w in dev and v in dev:
                    wits.append(((x, x1), v, w))
                elif factorization:
                    factorization = False
                    first_failure = (x, x1)
        out.append(Prop23SideReport(side=side, deviational_order=dev.order,
                                    center_order=cen.order,
                                    containment_ok=containment,
                                    factorization_ok=factorization,
                                    witnesses=tuple(wits),
                                    first_failure=first_failure))
    return Prop23Report(sides=tuple(out))


@dataclass
class ExistenceFamily:
    """Per-tuple existence search over a deviational subgroup."""

    name: str
    anchor: str
    ok: bool
    tuple_count: int
    witness: Optional[np.ndarray]
    uniform_witnesses: tuple[int, ...]
    nontrivial_witness_used: bool
    first_failure: Optional[tuple[int, ...]] = None


@dataclass
class Prop24Report:
    inversion_ok: bool
    word_conjugation_ok: bool
    families: tuple[ExistenceFamily, ...]
    anchor: str = "Prop 2.4 / E:2.4.1-E:2.4.6"

    @property
    def ok(self) -> bool:
        return (self.inversion_ok and self.word_conjugation_ok
                and all(f.ok for f in self.families))


def _action_perms(sys: ActionSystem, t: TensorResult):
    gp = np.stack([tensor_action_perm(sys, t, ("G", g)) for g in range(sys.G.order)])
    hp = np.stack([tensor_action_perm(sys, t, ("H", h)) for h in range(sys.H.order)])
    return gp, hp


def verify_prop24(sys: ActionSystem, t: TensorResult) -> Prop24Report:
    """Inversion and conjugation identities plus the four existence families,
    each searched exhaustively over the relevant deviational subgroup with
    lexicographically-first witnesses."""
    _require_fully(sys, "verify prop24")
    G, H, B = sys.G, sys.H, t.group
    nG, nH = G.order, H.order
    rG, rH, sG, sH = sys.rho_G, sys.rho_H, sys.sigma_G, sys.sigma_H
    P = np.asarray(t.pairing, dtype=np.int32)
    tab, inv = B.np, np.asarray(B.inverses, dtype=np.int32)
    gperm, hperm = _action_perms(sys, t)
    dev_g = deviational(sys, "G").elements
    dev_h = deviational(sys, "H").elements

    inversion_ok = True
    for g in range(nG):
        for h in range(nH):
            target = inv[P[g, h]]
            if not (P[rG[g][G.inv(g)], sG[g][h]] == target
                    == P[sH[h][g], rH[h][H.inv(h)]]):
                inversion_ok = False

    word_ok = True
    for g in range(nG):
        for h in range(nH):
            word = (("G", g, 1), ("H", h, 1), ("G", g, -1), ("H", h, -1))
            wg = [act_word(sys, word, ("G", g1))[1] for g1 in range(nG)]
            wh = [act_word(sys, word, ("H", h1))[1] for h1 in range(nH)]
            x = P[g, h]
            if not np.array_equal(tab[tab[x, P], inv[x]], P[np.ix_(wg, wh)]):
                word_ok = False

    families = []

    def run_family(name, anchor, shape, dev, lhs_rhs):
        wit = np.full(shape, -1, dtype=np.int32)
        uniform = []
        for v in dev:
            hit_all = True
            for idx_block, lhs, rhs in lhs_rhs(v):
                newly = (wit[idx_block] < 0) & (lhs == rhs)
                block = wit[idx_block]
                block[newly] = v
                wit[idx_block] = block
                if not (lhs == rhs).all():
                    hit_all = False
            if hit_all:
                uniform.append(int(v))
        ok = bool((wit >= 0).all())
        first_fail = None
        if not ok:
            first_fail = tuple(int(i) for i in np.argwhere(wit < 0)[0])
        families.append(ExistenceFamily(
            name=name, anchor=anchor, ok=ok,
            tuple_count=int(np.prod(shape)),
            witness=wit if ok else None,
            uniform_witnesses=tuple(uniform),
            nontrivial_witness_used=bool((wit > 0).any()),
            first_failure=first_fail))

    # displacement in the first slot against a twisted product, v in dev(H)
    def fam_first_slot(v):
        for g in range(nG):
            for h in range(nH):
                x = P[g, h]
                a = G.mul(g, sH[h][G.inv(g)])
                prefix = tab[gperm[g, hperm[h, P[G.inv(g), v]]], x]
                yield ((g, h), P[a, :], tab[prefix, hperm[:, inv[x]]])

    run_family("e243", "Prop 2.4 / E:2.4.3", (nG, nH, nH), dev_h, fam_first_slot)

    # displacement in the second slot, w in dev(G)
    def fam_second_slot(w):
        ar = np.arange(nG)
        for g in range(nG):
            for h in range(nH):
                x = P[g, h]
                lhs = P[:, H.mul(sG[g][h], H.inv(h))]
                lead = gperm[ar, gperm[g, P[w, h]]]
                rhs = tab[tab[lead, gperm[ar, x]], inv[x]]
                yield ((slice(None), g, h), lhs, rhs)

    run_family("e244", "Prop 2.4 / E:2.4.4", (nG, nG, nH), dev_g, fam_second_slot)

    def _comm(x):
        return tab[tab[tab[x, P], inv[x]], inv[P]]

    bc = np.empty((nG, nH), dtype=np.int32)
    for g1 in range(nG):
        for h1 in range(nH):
            bc[g1, h1] = H.mul(sG[g1][h1], H.inv(h1))

    # both slots displaced, v in dev(H)
    def fam_both_v(v):
        for g in range(nG):
            for h in range(nH):
                x = P[g, h]
                a = G.mul(g, sH[h][G.inv(g)])
                lhs = P[a, bc]
                rhs = tab[gperm[g, hperm[h, P[G.inv(g), v]]], _comm(x)]
                yield ((g, h), lhs, rhs)

    run_family("e245", "Prop 2.4 / E:2.4.5", (nG, nH, nG, nH), dev_h, fam_both_v)

    # both slots displaced, w in dev(G); the correction pairs w with the
    # second displacing element, not with the base one
    def fam_both_w(w):
        for g in range(nG):
            for h in range(nH):
                x = P[g, h]
                a = G.mul(g, sH[h][G.inv(g)])
                lhs = P[a, bc]
                z = G.np[a]                     # a * g' over all g'
                rhs = tab[gperm[z[:, None], P[w][None, :]], _comm(x)]
                yield ((g, h), lhs, rhs)

    run_family("e246", "Prop 2.4 / E:2.4.6", (nG, nH, nG, nH), dev_g, fam_both_w)

    return Prop24Report(inversion_ok=inversion_ok, word_conjugation_ok=word_ok,
                        families=tuple(families))


# -- crossed module --------------------------------------------------------


@dataclass
class CrossedModuleData:
    quotient_group: FiniteGroup
    projection: GroupHom
    phi: Optional[GroupHom]
    action: Optional[np.ndarray]          # (|quotient|, |tensor|) permutations
    well_defined: bool
    action_well_defined: bool
    equivariance_ok: bool
    peiffer_ok: bool
    kernel_central: bool
    messages: tuple[str, ...]
    anchor: str = "Prop 2.8"

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.action_well_defined
                and self.equivariance_ok and self.peiffer_ok
                and self.kernel_central)


def crossed_module_phi(sys: ActionSystem, t: TensorResult) -> CrossedModuleData:
    """Map each generator pair to its displacement class in G modulo the
    deviational subgroup, with the induced quotient action; verifies both
    crossed-module axioms and centrality of the kernel."""
    _require_fully(sys, "crossed_module_phi")
    if t.kind != "box":
        raise ValidationError("crossed_module_phi expects a box tensor result")
    G, H, B = sys.G, sys.H, t.group
    sH = sys.sigma_H
    dev = deviational(sys, "G")
    gbar, proj = quotient(G, dev)
    proj_arr = np.asarray(proj.image, dtype=np.int32)
    P = np.asarray(t.pairing, dtype=np.int32)
    tab, inv = B.np, np.asarray(B.inverses, dtype=np.int32)
    messages = []

    gens, images = [], []
    for g in range(G.order):
        for h in range(H.order):
            gens.append(int(P[g, h]))
            images.append(int(proj_arr[G.mul(g, sH[h][G.inv(g)])]))
    try:
        phi = hom_from_generator_images(B, gens, images, gbar)
        well_defined = True
    except ValidationError as e:
        phi = None
        well_defined = False
        messages.append("generator assignment does not respect the relations: %s" % e)

    gperms = np.stack([tensor_action_perm(sys, t, ("G", g)) for g in range(G.order)])
    action = np.empty((gbar.order, B.order), dtype=np.int32)
    action_ok = True
    for b in range(gbar.order):
        reps = np.flatnonzero(proj_arr == b)
        action[b] = gperms[reps[0]]
        if not np.array_equal(gperms[reps], np.broadcast_to(action[b], (len(reps), B.order))):
            action_ok = False
            messages.append("quotient action depends on the representative of class %d" % b)

    equivariance = peiffer = central = False
    if phi is not None and action_ok:
        phi_arr = np.asarray(phi.image, dtype=np.int32)
        ginv = np.asarray(gbar.inverses, dtype=np.int32)
        equivariance = all(
            np.array_equal(phi_arr[action[b]], gbar.np[gbar.np[b, phi_arr], ginv[b]])
            for b in range(gbar.order))
        if not equivariance:
            messages.append("projection is not equivariant for the quotient action")
        peiffer = all(
            np.array_equal(action[phi_arr[a]], tab[tab[a, :], inv[a]])
            for a in range(B.order))
        if not peiffer:
            messages.append("inner action does not match conjugation")
        ker = np.asarray(phi.kernel.elements, dtype=np.int32)
        central = bool(np.array_equal(tab[np.ix_(ker, range(B.order))],
                                      tab[np.ix_(range(B.order), ker)].T))
        if not central:
            messages.append("kernel is not central in the tensor group")

    return CrossedModuleData(quotient_group=gbar, projection=proj, phi=phi,
                             action=action if action_ok else None,
                             well_defined=well_defined,
                             action_well_defined=action_ok,
                             equivariance_ok=equivariance, peiffer_ok=peiffer,
                             kernel_central=central, messages=tuple(messages))


# -- cyclic criterion -------------------------------------------------------


@dataclass
class Thm211Report:
    dbar_order: int
    dbar_cyclic: bool
    tensor_abelian: bool
    asserted: bool
    anchor: str = "Thm 2.11"

    @property
    def ok(self) -> bool:
        return self.tensor_abelian if self.dbar_cyclic else True


def check_thm211(sys: ActionSystem, t: TensorResult) -> Thm211Report:
    """If the derivative modulo the deviational subgroup is cyclic, the box
    tensor must be abelian; otherwise abelianness is recorded as information."""
    _require_fully(sys, "check_thm211")
    dh = derivative(sys, "G")
    dev = deviational(sys, "G")
    gbar, proj = quotient(sys.G, dev)
    dbar = subgroup_generated(gbar, {proj.image[x] for x in dh.elements})
    dgrp, _ = dbar.as_group()
    cyclic = max(dgrp.element_orders) == dgrp.order
    return Thm211Report(dbar_order=dbar.order, dbar_cyclic=cyclic,
                        tensor_abelian=t.group.is_abelian, asserted=cyclic)


# -- order identities -------------------------------------------------------


@dataclass
class OrderIdentityReport:
    derivative_pairs_checked: int
    center_pairs_checked: int
    telescoping_ok: bool
    power_ok: bool
    first_failure: Optional[tuple[str, int, int]] = None
    anchor: str = "Prop 3.5 / Prop 3.6"

    @property
    def ok(self) -> bool:
        return self.telescoping_ok and self.power_ok


def check_order_identities(sys: ActionSystem, t: TensorResult) -> OrderIdentityReport:
    """Telescoping products over derivative elements collapse to the identity,
    and pairs with a centrally-acting second slot have the expected order."""
    _require_fully(sys, "check_order_identities")
    G, H, B = sys.G, sys.H, t.group
    dh = derivative(sys, "G")
    fg = g_center(sys, "H")
    gperm = {g: tensor_action_perm(sys, t, ("G", g)) for g in range(G.order)}
    tele_ok = power_ok = True
    first = None
    n_tele = n_pow = 0
    for s in dh.elements:
        k = G.element_orders[s]
        for h in range(H.order):
            n_tele += 1
            x = t.pair(s, h)
            assert B.order % _element_order(B, x) == 0
            prod = 0
            for i in range(1, k + 1):
                prod = B.mul(prod, int(gperm[G.power(s, k - i)][x]))
            if prod != 0 and tele_ok:
                tele_ok = False
                first = ("telescoping", s, h)
    for h in fg.elements:
        k = H.element_orders[h]
        for g in range(G.order):
            n_pow += 1
            if B.power(t.pair(g, h), k) != 0 and power_ok:
                power_ok = False
                if first is None:
                    first = ("power", g, h)
    return OrderIdentityReport(derivative_pairs_checked=n_tele,
                               center_pairs_checked=n_pow,
                               telescoping_ok=tele_ok, power_ok=power_ok,
                               first_failure=first)


def _element_order(g: FiniteGroup, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = g.mul(y, x)
        k += 1
    return k


# -- quotient pipeline ------------------------------------------------------


@dataclass
class CompSubgroupsReport:
    side: str
    system: ActionSystem               # side-normalized orientation
    X: Subgroup
    Xp: Subgroup
    quotient_system: ActionSystem
    projection: GroupHom
    kills_action: bool
    stable_under_other: bool
    quotient_regime: str
    anchor: str = "Thm 6.4"

    @property
    def ok(self) -> bool:
        return (self.kills_action and self.stable_under_other
                and self.quotient_regime == REGIME_COMPATIBLE)


def _comp_x_elements(sys: ActionSystem) -> set[int]:
    """Generators comparing the action of ^gh with that of the word g h g^-1."""
    G, H = sys.G, sys.H
    sG, sH = sys.sigma_G, sys.sigma_H
    out = set()
    for g in range(G.order):
        for h in range(H.order):
            word = (("G", g, 1), ("H", h, 1), ("G", g, -1))
            for g1 in range(G.order):
                lhs = sH[sG[g][h]][g1]
                rhs = act_word(sys, word, ("G", g1))[1]
                out.add(G.mul(lhs, G.inv(rhs)))
    return out


def comp_subgroups(sys: ActionSystem, side: str = "G",
                   limits: Optional[EnumLimits] = None) -> CompSubgroupsReport:
    """The obstruction subgroup X, its closure X' under the other group's
    action, and the induced compatible system on the quotient.

    side='H' works with the mirrored system; the report is expressed in the
    normalized orientation (the distinguished group first).
    """
    if side == "H":
        sys = mirror_system(sys)
    elif side != "G":
        raise ValidationError("side must be 'G' or 'H', got %r" % side)
    if not sys.conjugation_self_actions:
        raise ValidationError("comp_subgroups needs conjugation self-actions")
    rep = check_compatibility(sys)
    if not rep.per_condition.get("e131", False):
        raise ValidationError(
            "comp_subgroups needs condition e131 on the chosen side; "
            "try the mirrored side")
    G, H = sys.G, sys.H
    sG, sH = sys.sigma_G, sys.sigma_H
    x = normal_closure(G, _comp_x_elements(sys))
    seed = set(x.elements)
    for h in range(H.order):
        seed.update(sH[h][e] for e in x.elements)
    xp = normal_closure(G, seed)

    ident_h = tuple(range(H.order))
    kills = all(sG[e] == ident_h for e in xp.elements)
    stable = all(sH[h][e] in xp for h in range(H.order) for e in xp.elements)
    if not (kills and stable):
        raise ValidationError(
            "closure subgroup fails to act trivially or is not stable; "
            "no quotient system exists (kills=%s, stable=%s)" % (kills, stable))

    gq, proj = quotient(G, xp)
    proj_arr = np.asarray(proj.image, dtype=np.int32)
    section = [int(np.flatnonzero(proj_arr == b).min()) for b in range(gq.order)]
    sigma_gq = tuple(sG[section[b]] for b in range(gq.order))
    sigma_hq = tuple(tuple(int(proj_arr[sH[h][section[b]]]) for b in range(gq.order))
                     for h in range(H.order))
    # representative independence, exhaustively
    for g in range(G.order):
        assert sG[g] == sigma_gq[proj_arr[g]], "quotient action depends on representative"
        for h in range(H.order):
            assert proj_arr[sH[h][g]] == sigma_hq[h][proj_arr[g]], \
                "induced action depends on representative"
    qsys = ActionSystem(G=gq, H=H, rho_G=conjugation_action(gq), rho_H=sys.rho_H,
                        sigma_G=sigma_gq, sigma_H=sigma_hq)
    qrep = check_compatibility(qsys)
    return CompSubgroupsReport(side=side, system=sys, X=x, Xp=xp,
                               quotient_system=qsys, projection=proj,
                               kills_action=kills, stable_under_other=stable,
                               quotient_regime=qrep.regime)


@dataclass
class SurjectionReport:
    source_order: int
    target_order: int
    xp_order: int
    surjective: bool
    anchor: str = "Thm 6.4"

    @property
    def ok(self) -> bool:
        return self.surjective


def check_comp_surjection(comp: CompSubgroupsReport,
                          limits: Optional[EnumLimits] = None) -> SurjectionReport:
    """The canonical map between the Inassaridze products of a system and of
    its quotient system hits every element."""
    t1 = compute_tensor(TensorSpec(kind="inassaridze", system=comp.system), limits)
    t2 = compute_tensor(TensorSpec(kind="inassaridze", system=comp.quotient_system),
                        limits)
    proj_arr = comp.projection.image
    G, H = comp.system.G, comp.system.H
    gens = [t1.pair(g, h) for g in range(G.order) for h in range(H.order)]
    images = [t2.pair(proj_arr[g], h) for g in range(G.order) for h in range(H.order)]
    hom = hom_from_generator_images(t1.group, gens, images, t2.group)
    return SurjectionReport(source_order=t1.group.order,
                            target_order=t2.group.order,
                            xp_order=comp.Xp.order,
                            surjective=hom.is_surjective)


# -- homology ---------------------------------------------------------------


@dataclass
class HomologyResult:
    H0: FiniteGroup
    H1: FiniteGroup
    f: GroupHom
    coefficient_quotient: FiniteGroup      # A/A'
    aprime_order: int
    image_normalized: bool                 # True when the closure grew the image
    tensor_stats: dict
    anchor: str = "Cor 6.5"


def homology(sys: ActionSystem, limits: Optional[EnumLimits] = None) -> HomologyResult:
    """Kernel and cokernel of f(g # a) = (^g a) a^-1 modulo A', computed from
    the enumerated Inassaridze product of (G, A)."""
    if not sys.conjugation_self_actions:
        raise ValidationError("homology needs conjugation self-actions")
    rep = check_half_compatibility(sys)
    if rep.regime not in HALF_REGIMES:
        raise ValidationError("homology needs at least a half compatible pair, got %r"
                              % rep.regime)
    G, A = sys.G, sys.H
    sG = sys.sigma_G
    t = compute_tensor(TensorSpec(kind="inassaridze", system=sys), limits)
    aprime = normal_closure(A, _comp_x_elements(mirror_system(sys)))
    abar, proj = quotient(A, aprime)
    gens = [t.pair(g, a) for g in range(G.order) for a in range(A.order)]
    images = [proj.image[A.mul(sG[g][a], A.inv(a))]
              for g in range(G.order) for a in range(A.order)]
    f = hom_from_generator_images(t.group, gens, images, abar)
    h1, _ = f.kernel.as_group()
    image = f.image_subgroup
    closed = normal_closure(abar, image.elements)
    h0, _ = quotient(abar, closed)
    return HomologyResult(H0=h0, H1=h1, f=f, coefficient_quotient=abar,
                          aprime_order=aprime.order,
                          image_normalized=closed.order > image.order,
                          tensor_stats=dict(t.stats))
