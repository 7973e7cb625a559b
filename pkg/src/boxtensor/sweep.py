"""Catalog sweeps over every four-action system on a pair of groups.

Systems are indexed by quadruples of homomorphisms into the automorphism
groups. The eight compatibility conditions factor through at most three of the
four homomorphisms each, so a pair is classified by precomputing condition
tables per (hom, hom) combination instead of checking systems one at a time.

The fully compatible catalog is additionally reduced by relabeling: a pair of
automorphisms (alpha, beta) of (G, H) carries a system to another system of
the same pair, and every construction on the two systems differs only by the
renaming of elements. Each equivalence class is represented by its
lexicographically least member. The index maps realizing the relabelings are
built by exact array lookup, which verifies them exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

import numpy as np

from .actions import (ActionSystem, REGIME_COMPATIBLE, REGIME_FULLY,
                      REGIME_HALF_131, REGIME_HALF_132, REGIME_NONE)
from .group_core import (CapabilityError, FiniteGroup, ValidationError,
                         automorphism_group, enumerate_homs)

SWEEP_ORDER_BOUND = 16


@dataclass(frozen=True)
class HomFamilies:
    """Every action of one group on another by automorphisms: one permutation
    family per homomorphism into Aut(target), lexicographic by image tuple."""

    families: np.ndarray        # (count, |acting|, |target|)
    trivial_index: int
    conjugation_index: int      # -1 unless acting and target share a table

    @property
    def count(self) -> int:
        return len(self.families)

    def index_of(self, fam: np.ndarray) -> int:
        key = np.ascontiguousarray(fam, dtype=np.int32).tobytes()
        return self._index[key]

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {np.ascontiguousarray(f).tobytes(): i
                for i, f in enumerate(self.families)}


def _conjugation_stack(g: FiniteGroup) -> np.ndarray:
    gn, inv = g.np, g.inverses
    return np.stack([gn[gn[x], inv[x]] for x in range(g.order)]).astype(np.int32)


def action_families(acting: FiniteGroup, target: FiniteGroup) -> HomFamilies:
    """Enumerate Hom(acting, Aut(target)) as permutation families."""
    aut, auts = automorphism_group(target)
    perms = np.stack([np.asarray(a.image, dtype=np.int32) for a in auts])
    homs = enumerate_homs(acting, aut)
    fams = np.stack([perms[np.asarray(hom.image, dtype=np.int32)] for hom in homs])
    ident = np.broadcast_to(np.arange(target.order, dtype=np.int32),
                            (acting.order, target.order))
    assert np.array_equal(fams[0], ident), "trivial action must sort first"
    conj_index = -1
    if acting.order == target.order and np.array_equal(acting.np, target.np):
        conj = _conjugation_stack(target)
        hits = np.nonzero((fams == conj[None]).all(axis=(1, 2)))[0]
        assert hits.size == 1, "conjugation must appear exactly once"
        conj_index = int(hits[0])
    return HomFamilies(families=fams, trivial_index=0, conjugation_index=conj_index)


def _self_condition(r: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """Per hom index: ^{^g g1}x == ^g(^{g1}(^{g^-1}x)) for all g, g1, x."""
    n = r.shape[1]
    ok = np.ones(len(r), bool)
    ar = np.arange(len(r))
    for g in range(n):
        rg = r[:, g]
        rig = r[:, inv[g]]
        for g1 in range(n):
            lhs = r[ar, r[:, g, g1]]
            rhs = np.take_along_axis(rg, np.take_along_axis(r[:, g1], rig, 1), 1)
            ok &= (lhs == rhs).all(axis=1)
    return ok


def _mixed_rho_sigma(r: np.ndarray, s: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """Table over (rho index, sigma index): ^{^g g1}y == ^g(^{g1}(^{g^-1}y))."""
    nr, ns = len(r), len(s)
    n = r.shape[1]
    ok = np.ones((nr, ns), bool)
    ars = np.arange(ns)
    for g in range(n):
        sg = s[:, g]
        sig = s[:, inv[g]]
        for g1 in range(n):
            lhs = s[ars[None, :], r[:, g, g1][:, None]]           # (nr, ns, m)
            inner = np.take_along_axis(s[:, g1], sig, 1)          # (ns, m)
            rhs = np.take_along_axis(sg, inner, 1)                # (ns, m)
            ok &= (lhs == rhs[None]).all(axis=2)
    return ok


def _mixed_sigma_rho(s: np.ndarray, r: np.ndarray, inv_src: np.ndarray) -> np.ndarray:
    """Table over (sigma index, rho index): ^{^g h}y == ^g(^h(^{g^-1}y))."""
    ns, nr = len(s), len(r)
    n_src, m = s.shape[1], s.shape[2]
    ok = np.ones((ns, nr), bool)
    arr = np.arange(nr)
    for g in range(n_src):
        sg = s[:, g]
        sig = s[:, inv_src[g]]
        for h in range(m):
            lhs = r[arr[None, :], s[:, g, h][:, None]]            # (ns, nr, m)
            inner = np.take_along_axis(
                np.broadcast_to(r[:, h][None], (ns, nr, m)).reshape(ns * nr, m),
                np.broadcast_to(sig[:, None, :], (ns, nr, m)).reshape(ns * nr, m),
                1).reshape(ns, nr, m)
            rhs = np.take_along_axis(
                np.broadcast_to(sg[:, None, :], (ns, nr, m)).reshape(ns * nr, m),
                inner.reshape(ns * nr, m), 1).reshape(ns, nr, m)
            ok &= (lhs == rhs).all(axis=2)
    return ok


def _cross_condition(r: np.ndarray, sfwd: np.ndarray, sback: np.ndarray,
                     inv_src: np.ndarray) -> np.ndarray:
    """Table over (rho, sigma fwd, sigma back): ^{^g h}x == ^g(^h(^{g^-1}x))."""
    nr, nsf, nsb = len(r), len(sfwd), len(sback)
    n = r.shape[1]
    m = sfwd.shape[2]
    ok = np.ones((nr, nsf, nsb), bool)
    for g in range(n):
        rg = r[:, g]
        rig = r[:, inv_src[g]]
        for h in range(m):
            lhs = sback[np.arange(nsb)[None, :], sfwd[:, g, h][:, None]]
            inner = sback[:, h][np.arange(nsb)[None, :, None], rig[:, None, :]]
            rhs = rg[np.arange(nr)[:, None, None], inner]
            ok &= (lhs[None, :, :, :] == rhs[:, None, :, :]).all(axis=3)
    return ok


@dataclass
class PairClassification:
    """Condition tables for every four-action system on a fixed pair."""

    G: FiniteGroup
    H: FiniteGroup
    rho_G: HomFamilies
    rho_H: HomFamilies
    sigma_G: HomFamilies
    sigma_H: HomFamilies
    fc2a: np.ndarray   # (n rho_G,)
    fc2b: np.ndarray   # (n rho_H,)
    fc3a: np.ndarray   # (n rho_G, n sigma_G)
    fc3b: np.ndarray   # (n rho_H, n sigma_H)
    fc4a: np.ndarray   # (n sigma_G, n rho_H)
    fc4b: np.ndarray   # (n sigma_H, n rho_G)
    fc1a: np.ndarray   # (n rho_G, n sigma_G, n sigma_H)
    fc1b: np.ndarray   # (n rho_H, n sigma_H, n sigma_G)

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.rho_G.count, self.rho_H.count,
                self.sigma_G.count, self.sigma_H.count)

    @property
    def total_systems(self) -> int:
        a, b, c, d = self.counts
        return a * b * c * d

    def fully_compatible_mask(self, irG: int, irH: int, isG: int, isH: int) -> bool:
        return bool(self.fc1a[irG, isG, isH] and self.fc2a[irG]
                    and self.fc3a[irG, isG] and self.fc4b[isH, irG]
                    and self.fc1b[irH, isH, isG] and self.fc2b[irH]
                    and self.fc3b[irH, isH] and self.fc4a[isG, irH])

    def regime_of(self, quad) -> str:
        irG, irH, isG, isH = (int(x) for x in quad)
        if self.fully_compatible_mask(irG, irH, isG, isH):
            return REGIME_FULLY
        cG, cH = self.rho_G.conjugation_index, self.rho_H.conjugation_index
        if irG == cG and irH == cH and cG >= 0 and cH >= 0:
            e131 = bool(self.fc1b[cH, isH, isG])
            e132 = bool(self.fc1a[cG, isG, isH])
            if e131 and e132:
                return REGIME_COMPATIBLE
            if e131:
                return REGIME_HALF_131
            if e132:
                return REGIME_HALF_132
        return REGIME_NONE

    def fully_compatible_quads(self) -> np.ndarray:
        """All fully compatible systems, lexicographic by index quadruple."""
        out = []
        nsG, nsH = self.sigma_G.count, self.sigma_H.count
        for isG in range(nsG):
            for isH in range(nsH):
                m1 = (self.fc1a[:, isG, isH] & self.fc2a
                      & self.fc3a[:, isG] & self.fc4b[isH, :])
                m2 = (self.fc1b[:, isH, isG] & self.fc2b
                      & self.fc3b[:, isH] & self.fc4a[isG, :])
                i1 = np.nonzero(m1)[0]
                i2 = np.nonzero(m2)[0]
                for a in i1:
                    for b in i2:
                        out.append((int(a), int(b), isG, isH))
        quads = np.array(sorted(out), dtype=np.int32).reshape(len(out), 4)
        return quads

    def conjugation_sigma_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Over conjugation self-actions: (e131[isG, isH], e132[isG, isH])."""
        cG, cH = self.rho_G.conjugation_index, self.rho_H.conjugation_index
        if cG < 0 or cH < 0:
            raise ValidationError("pair has no conjugation self-actions in its tables")
        e131 = self.fc1b[cH].T      # fc1b is (irH, isH, isG); transpose to (isG, isH)
        e132 = self.fc1a[cG]        # (isG, isH)
        return e131, e132

    def system(self, quad) -> ActionSystem:
        irG, irH, isG, isH = (int(x) for x in quad)
        return ActionSystem(
            G=self.G, H=self.H,
            rho_G=self.rho_G.families[irG],
            rho_H=self.rho_H.families[irH],
            sigma_G=self.sigma_G.families[isG],
            sigma_H=self.sigma_H.families[isH])


def classify_pair(G: FiniteGroup, H: FiniteGroup) -> PairClassification:
    """Build the condition tables for every system on (G, H)."""
    if G.order > SWEEP_ORDER_BOUND or H.order > SWEEP_ORDER_BOUND:
        raise CapabilityError("sweep: group orders must be <= %d" % SWEEP_ORDER_BOUND)
    rho_G = action_families(G, G)
    rho_H = action_families(H, H)
    sigma_G = action_families(G, H)
    sigma_H = action_families(H, G)
    rG, rH = rho_G.families, rho_H.families
    sG, sH = sigma_G.families, sigma_H.families
    iG, iH = np.asarray(G.inverses), np.asarray(H.inverses)
    return PairClassification(
        G=G, H=H, rho_G=rho_G, rho_H=rho_H, sigma_G=sigma_G, sigma_H=sigma_H,
        fc2a=_self_condition(rG, iG),
        fc2b=_self_condition(rH, iH),
        fc3a=_mixed_rho_sigma(rG, sG, iG),
        fc3b=_mixed_rho_sigma(rH, sH, iH),
        fc4a=_mixed_sigma_rho(sG, rH, iG),
        fc4b=_mixed_sigma_rho(sH, rG, iH),
        fc1a=_cross_condition(rG, sG, sH, iG),
        fc1b=_cross_condition(rH, sH, sG, iH),
    )


# -- relabeling reduction --------------------------------------------------


def _relabel_map(hf: HomFamilies, aut_acting: np.ndarray,
                 aut_target: np.ndarray) -> np.ndarray:
    """map[a, b, i]: index of beta_b . fam_i(alpha_a^-1 slot) . beta_b^-1.

    Built by exact array lookup, so each entry is verified by construction;
    a missing key would mean the hom set is not closed under relabeling.
    """
    nA, nB = len(aut_acting), len(aut_target)
    out = np.empty((nA, nB, hf.count), dtype=np.int32)
    for a in range(nA):
        ai = np.argsort(aut_acting[a])
        rows = hf.families[:, ai]
        for b in range(nB):
            beta = aut_target[b]
            bi = np.argsort(beta)
            mapped = beta[rows[:, :, bi]]
            for i in range(hf.count):
                out[a, b, i] = hf.index_of(mapped[i])
            assert np.array_equal(np.sort(out[a, b]), np.arange(hf.count)), \
                "relabeling must permute the hom list"
    return out


@dataclass
class PairCatalog:
    """The fully compatible systems of one pair, reduced by relabeling.

    quads[rep_pos[i]] is the representative of quads[i]; reps lists the
    distinct representative positions, orbit_sizes the class sizes.
    """

    classification: PairClassification
    quads: np.ndarray
    rep_pos: np.ndarray
    reps: np.ndarray
    orbit_sizes: np.ndarray
    aut_pair_count: int

    @property
    def size(self) -> int:
        return len(self.quads)

    def system(self, pos: int) -> ActionSystem:
        return self.classification.system(self.quads[pos])


def fully_compatible_catalog(G: FiniteGroup, H: FiniteGroup) -> PairCatalog:
    """Classify the pair, list its fully compatible systems, and reduce them
    by the relabeling action of Aut(G) x Aut(H)."""
    cls = classify_pair(G, H)
    quads = cls.fully_compatible_quads()
    _, autsG = automorphism_group(G)
    _, autsH = automorphism_group(H)
    autG = np.stack([np.asarray(a.image, dtype=np.int32) for a in autsG])
    autH = np.stack([np.asarray(a.image, dtype=np.int32) for a in autsH])
    nA, nB = len(autG), len(autH)

    mGG = _relabel_map(cls.rho_G, autG, autG)   # use the diagonal (alpha, alpha)
    mHH = _relabel_map(cls.rho_H, autH, autH)
    mGH = _relabel_map(cls.sigma_G, autG, autH)
    mHG = _relabel_map(cls.sigma_H, autH, autG)
    cG, cH = cls.rho_G.conjugation_index, cls.rho_H.conjugation_index
    if cG >= 0:
        assert np.all(mGG[np.arange(nA), np.arange(nA), cG] == cG)
    if cH >= 0:
        assert np.all(mHH[np.arange(nB), np.arange(nB), cH] == cH)

    nrH, nsG, nsH = cls.rho_H.count, cls.sigma_G.count, cls.sigma_H.count

    def encode(q0, q1, q2, q3):
        return ((q0.astype(np.int64) * nrH + q1) * nsG + q2) * nsH + q3

    if len(quads) == 0:
        empty = np.empty(0, dtype=np.int64)
        return PairCatalog(cls, quads, empty, empty, empty, nA * nB)

    codes = encode(quads[:, 0], quads[:, 1], quads[:, 2], quads[:, 3])
    assert np.all(np.diff(codes) > 0)
    best = codes.copy()
    for a in range(nA):
        for b in range(nB):
            mapped = encode(mGG[a, a][quads[:, 0]], mHH[b, b][quads[:, 1]],
                            mGH[a, b][quads[:, 2]], mHG[b, a][quads[:, 3]])
            pos = np.searchsorted(codes, mapped)
            assert np.all(codes[np.clip(pos, 0, len(codes) - 1)] == mapped), \
                "fully compatible catalog must be closed under relabeling"
            np.minimum(best, mapped, out=best)
    rep_pos = np.searchsorted(codes, best)
    assert np.all(codes[rep_pos] == best)
    reps = np.unique(rep_pos)
    orbit_sizes = np.bincount(np.searchsorted(reps, rep_pos), minlength=len(reps))
    assert int(orbit_sizes.sum()) == len(quads)
    return PairCatalog(classification=cls, quads=quads, rep_pos=rep_pos,
                       reps=reps, orbit_sizes=orbit_sizes, aut_pair_count=nA * nB)


# -- row-level sweep for the command line ----------------------------------


def _equal_family_quads(cls: PairClassification) -> Iterator[tuple[int, int, int, int]]:
    if not np.array_equal(cls.G.np, cls.H.np):
        raise ValidationError("equal-family sweep requires identical group tables")
    for i in range(cls.rho_G.count):
        yield (i, i, i, i)


def iter_systems(cls: PairClassification,
                 family: str = "all") -> Iterator[tuple[tuple[int, int, int, int], str]]:
    """Yield (index quadruple, regime) rows in deterministic order."""
    if family == "equal":
        quads = _equal_family_quads(cls)
    elif family == "all":
        a, b, c, d = cls.counts
        quads = itertools.product(range(a), range(b), range(c), range(d))
    else:
        raise ValidationError("unknown sweep family %r" % family)
    for quad in quads:
        yield quad, cls.regime_of(quad)
