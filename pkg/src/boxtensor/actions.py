"""Mutual action systems: two groups acting on themselves and on each other,
with the compatibility checks that decide which tensor constructions apply.

An element of the disjoint union is tagged ('G', i) or ('H', j). The action of
x on y is written act(sys, x, y); superscript words like ^{g h g^-1}y are
evaluated right to left by act_word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .group_core import FiniteGroup, ValidationError

Tagged = tuple[str, int]

FULL_CONDITIONS = ("fc1a", "fc1b", "fc2a", "fc2b", "fc3a", "fc3b", "fc4a", "fc4b")
PAIR_CONDITIONS = ("e131", "e132")

REGIME_FULLY = "fully_compatible"
REGIME_COMPATIBLE = "compatible"
REGIME_HALF_131 = "half_compatible_131"
REGIME_HALF_132 = "half_compatible_132"
REGIME_NONE = "none"


def conjugation_action(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Per element x, the permutation y -> x y x^-1."""
    return tuple(tuple(g.conj(x, y) for y in range(g.order)) for x in range(g.order))


def trivial_action(acting: FiniteGroup, target: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    ident = tuple(range(target.order))
    return tuple(ident for _ in range(acting.order))


def _validate_family(acting: FiniteGroup, target: FiniteGroup, fam, name: str) -> np.ndarray:
    arr = np.asarray(fam, dtype=np.int32)
    if arr.shape != (acting.order, target.order):
        raise ValidationError("%s: expected %d permutations of %d points"
                              % (name, acting.order, target.order))
    idx = np.arange(target.order)
    if not np.array_equal(np.sort(arr, axis=1), np.tile(idx, (acting.order, 1))):
        raise ValidationError("%s: entries must be permutations" % name)
    if np.any(arr[:, 0] != 0):
        raise ValidationError("%s: automorphisms must fix the identity" % name)
    t = target.np
    for a in range(acting.order):
        p = arr[a]
        if not np.array_equal(p[t], t[p[:, None], p[None, :]]):
            raise ValidationError("%s: image of element %d is not an automorphism" % (name, a))
    composed = arr[np.arange(acting.order)[:, None, None], arr[None, :, :]]
    if not np.array_equal(arr[acting.np], composed):
        raise ValidationError("%s: not a homomorphism into the automorphism group" % name)
    return arr


@dataclass
class ActionSystem:
    """The four actions rho_G: G on G, rho_H: H on H, sigma_G: G on H,
    sigma_H: H on G, each stored per acting element as a permutation array."""

    G: FiniteGroup
    H: FiniteGroup
    rho_G: tuple[tuple[int, ...], ...]
    rho_H: tuple[tuple[int, ...], ...]
    sigma_G: tuple[tuple[int, ...], ...]
    sigma_H: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        as_tuple = lambda fam: tuple(tuple(int(v) for v in p) for p in fam)
        self.rho_G = as_tuple(self.rho_G)
        self.rho_H = as_tuple(self.rho_H)
        self.sigma_G = as_tuple(self.sigma_G)
        self.sigma_H = as_tuple(self.sigma_H)
        _validate_family(self.G, self.G, self.rho_G, "rho_G")
        _validate_family(self.H, self.H, self.rho_H, "rho_H")
        _validate_family(self.G, self.H, self.sigma_G, "sigma_G")
        _validate_family(self.H, self.G, self.sigma_H, "sigma_H")

    @cached_property
    def conjugation_self_actions(self) -> bool:
        return (self.rho_G == conjugation_action(self.G)
                and self.rho_H == conjugation_action(self.H))

    def group(self, side: str) -> FiniteGroup:
        if side == "G":
            return self.G
        if side == "H":
            return self.H
        raise ValidationError("side must be 'G' or 'H'")

    def label(self, x: Tagged) -> str:
        return self.group(x[0]).label(x[1])


def act(sys: ActionSystem, actor: Tagged, target: Tagged) -> Tagged:
    """^{actor}target for tagged elements; the result stays on target's side."""
    sa, a = actor
    st, t = target
    if sa == "G":
        fam = sys.rho_G if st == "G" else sys.sigma_G
    else:
        fam = sys.sigma_H if st == "G" else sys.rho_H
    return (st, fam[a][t])


def act_word(sys: ActionSystem, word: Sequence[tuple[str, int, int]],
             target: Tagged) -> Tagged:
    """Apply a free-product word of (side, element, sign) letters, rightmost first.

    A sign of -1 acts by the letter's inverse element.
    """
    out = target
    for side, elt, sign in reversed(word):
        if sign < 0:
            elt = sys.group(side).inv(elt)
        out = act(sys, (side, elt), out)
    return out


@dataclass
class Witness:
    """First failing tuple of a condition, with both evaluated sides."""

    condition: str
    elements: tuple[Tagged, ...]
    lhs: Tagged
    rhs: Tagged
    element_labels: tuple[str, ...] = ()
    lhs_label: str = ""
    rhs_label: str = ""


@dataclass
class CompatReport:
    regime: str
    per_condition: dict[str, bool]
    witnesses: dict[str, Witness]
    conjugation_self_actions: bool
    diagnostics: tuple[str, ...] = ()

    @property
    def first_witness(self) -> Optional[Witness]:
        for cid in list(FULL_CONDITIONS) + list(PAIR_CONDITIONS):
            if cid in self.witnesses:
                return self.witnesses[cid]
        return None


# Each condition: (id, variable sides, lhs, rhs) where lhs/rhs take the system
# and the variable indices. Variables are listed in the order they appear in
# the defining equation; witnesses scan them lexicographically by index.

def _conditions(sys: ActionSystem):
    rG, rH = sys.rho_G, sys.rho_H
    sG, sH = sys.sigma_G, sys.sigma_H
    iG, iH = sys.G.inverses, sys.H.inverses
    return {
        "fc1a": ("GHG",
                 lambda g, h, x: sH[sG[g][h]][x],
                 lambda g, h, x: rG[g][sH[h][rG[iG[g]][x]]]),
        "fc1b": ("HGH",
                 lambda h, g, x: sG[sH[h][g]][x],
                 lambda h, g, x: rH[h][sG[g][rH[iH[h]][x]]]),
        "fc2a": ("GGG",
                 lambda g, g1, x: rG[rG[g][g1]][x],
                 lambda g, g1, x: rG[g][rG[g1][rG[iG[g]][x]]]),
        "fc2b": ("HHH",
                 lambda h, h1, x: rH[rH[h][h1]][x],
                 lambda h, h1, x: rH[h][rH[h1][rH[iH[h]][x]]]),
        "fc3a": ("GGH",
                 lambda g, g1, x: sG[rG[g][g1]][x],
                 lambda g, g1, x: sG[g][sG[g1][sG[iG[g]][x]]]),
        "fc3b": ("HHG",
                 lambda h, h1, x: sH[rH[h][h1]][x],
                 lambda h, h1, x: sH[h][sH[h1][sH[iH[h]][x]]]),
        "fc4a": ("GHH",
                 lambda g, h, x: rH[sG[g][h]][x],
                 lambda g, h, x: sG[g][rH[h][sG[iG[g]][x]]]),
        "fc4b": ("HGG",
                 lambda h, g, x: rG[sH[h][g]][x],
                 lambda h, g, x: sH[h][rG[g][sH[iH[h]][x]]]),
        # the two conditions of the compatible regime (conjugation self-actions)
        "e131": ("HGH",
                 lambda h, g, x: sG[sH[h][g]][x],
                 lambda h, g, x: rH[h][sG[g][rH[iH[h]][x]]]),
        "e132": ("GHG",
                 lambda g, h, x: sH[sG[g][h]][x],
                 lambda g, h, x: rG[g][sH[h][rG[iG[g]][x]]]),
        # always-true relations for mixed exponents under conjugation self-actions
        "fact_gh": ("GHH",
                    lambda g, h, x: rH[sG[g][h]][x],
                    lambda g, h, x: sG[g][rH[h][sG[iG[g]][x]]]),
        "fact_hg": ("HGG",
                    lambda h, g, x: rG[sH[h][g]][x],
                    lambda h, g, x: sH[h][rG[g][sH[iH[h]][x]]]),
    }


def _evaluate_condition(sys: ActionSystem, cid: str) -> tuple[bool, Optional[Witness]]:
    sides, lhs, rhs = _conditions(sys)[cid]
    orders = [sys.group(s).order for s in sides]
    result_side = sides[-1]
    for i in range(orders[0]):
        for j in range(orders[1]):
            for k in range(orders[2]):
                a = lhs(i, j, k)
                b = rhs(i, j, k)
                if a != b:
                    elems = ((sides[0], i), (sides[1], j), (sides[2], k))
                    w = Witness(
                        condition=cid,
                        elements=elems,
                        lhs=(result_side, a),
                        rhs=(result_side, b),
                        element_labels=tuple(sys.label(e) for e in elems),
                        lhs_label=sys.group(result_side).label(a),
                        rhs_label=sys.group(result_side).label(b),
                    )
                    return False, w
    return True, None


def _pair_conditions_report(sys: ActionSystem):
    per: dict[str, bool] = {}
    wit: dict[str, Witness] = {}
    for cid in PAIR_CONDITIONS:
        ok, w = _evaluate_condition(sys, cid)
        per[cid] = ok
        if w is not None:
            wit[cid] = w
    return per, wit


def check_full_compatibility(sys: ActionSystem) -> CompatReport:
    """All eight instances of ^{(^ab)}c = ^a(^b(^{a^-1}c)) over G and H."""
    per: dict[str, bool] = {}
    wit: dict[str, Witness] = {}
    for cid in FULL_CONDITIONS:
        ok, w = _evaluate_condition(sys, cid)
        per[cid] = ok
        if w is not None:
            wit[cid] = w
    conj = sys.conjugation_self_actions
    if all(per.values()):
        regime = REGIME_FULLY
    elif conj:
        pc, _ = _pair_conditions_report(sys)
        if pc["e131"] and pc["e132"]:
            regime = REGIME_COMPATIBLE
        elif pc["e131"]:
            regime = REGIME_HALF_131
        elif pc["e132"]:
            regime = REGIME_HALF_132
        else:
            regime = REGIME_NONE
    else:
        regime = REGIME_NONE
    return CompatReport(regime=regime, per_condition=per, witnesses=wit,
                        conjugation_self_actions=conj)


def check_compatibility(sys: ActionSystem) -> CompatReport:
    """The two-condition regime for conjugation self-actions."""
    conj = sys.conjugation_self_actions
    if not conj:
        return CompatReport(
            regime=REGIME_NONE, per_condition={}, witnesses={},
            conjugation_self_actions=False,
            diagnostics=("self-actions are not conjugation",))
    per, wit = _pair_conditions_report(sys)
    if per["e131"] and per["e132"]:
        regime = REGIME_COMPATIBLE
    elif per["e131"]:
        regime = REGIME_HALF_131
    elif per["e132"]:
        regime = REGIME_HALF_132
    else:
        regime = REGIME_NONE
    return CompatReport(regime=regime, per_condition=per, witnesses=wit,
                        conjugation_self_actions=True)


def check_half_compatibility(sys: ActionSystem) -> CompatReport:
    """Passes when at least one of e131/e132 holds (conjugation self-actions)."""
    return check_compatibility(sys)


def verify_fact(sys: ActionSystem) -> CompatReport:
    """The two mixed-exponent relations that hold for every system with
    conjugation self-actions; executed, not assumed."""
    if not sys.conjugation_self_actions:
        raise ValidationError("fact check applies to conjugation self-actions only")
    per: dict[str, bool] = {}
    wit: dict[str, Witness] = {}
    for cid in ("fact_gh", "fact_hg"):
        ok, w = _evaluate_condition(sys, cid)
        per[cid] = ok
        if w is not None:
            wit[cid] = w
    regime = REGIME_COMPATIBLE if all(per.values()) else REGIME_NONE
    return CompatReport(regime=regime, per_condition=per, witnesses=wit,
                        conjugation_self_actions=True)


def make_action_system(G: FiniteGroup, H: FiniteGroup,
                       rho_G="conjugation", rho_H="conjugation",
                       sigma_G="trivial", sigma_H="trivial") -> ActionSystem:
    """Convenience constructor accepting 'conjugation'/'trivial' shorthands.

    'conjugation' is only meaningful for the self-actions.
    """
    def resolve(fam, acting, target, self_action, name):
        if isinstance(fam, str):
            if fam == "trivial":
                return trivial_action(acting, target)
            if fam == "conjugation":
                if not self_action:
                    raise ValidationError("%s: conjugation shorthand is only valid "
                                          "for a group acting on itself" % name)
                return conjugation_action(acting)
            raise ValidationError("%s: unknown shorthand %r" % (name, fam))
        return fam

    return ActionSystem(
        G=G, H=H,
        rho_G=resolve(rho_G, G, G, True, "rho_G"),
        rho_H=resolve(rho_H, H, H, True, "rho_H"),
        sigma_G=resolve(sigma_G, G, H, False, "sigma_G"),
        sigma_H=resolve(sigma_H, H, G, False, "sigma_H"),
    )


def equal_actions_system(g: FiniteGroup, fam) -> ActionSystem:
    """G = H with all four actions given by the same family of automorphisms."""
    return ActionSystem(G=g, H=g, rho_G=fam, rho_H=fam, sigma_G=fam, sigma_H=fam)


def mirror_system(sys: ActionSystem) -> ActionSystem:
    """The same data with the roles of the two groups exchanged."""
    return ActionSystem(G=sys.H, H=sys.G, rho_G=sys.rho_H, rho_H=sys.rho_G,
                        sigma_G=sys.sigma_H, sigma_H=sys.sigma_G)
