"""Finite groups as validated Cayley tables, with the desk-scale toolkit
(subgroups, quotients, semidirect products, homomorphism search) the tensor
constructions are built on.

Conventions: elements are indices 0..n-1, the identity is always index 0,
table[i][j] is the product i*j.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

# Exhaustive associativity checking is cubic; above this order we fall back to
# seeded random sampling.
ASSOC_EXHAUSTIVE_BOUND = 512
ASSOC_SAMPLE_TRIPLES = 20000
ASSOC_SAMPLE_SEED = 0

ISO_ORDER_BOUND = 512
HOM_ORDER_BOUND = 64


class ValidationError(ValueError):
    """Raised when an input table, map or file fails a structural check."""


class CapabilityError(RuntimeError):
    """Raised when an input is beyond a documented desk-scale bound."""


def _as_table_array(table) -> np.ndarray:
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("table: expected a square matrix")
    return arr


class FiniteGroup:
    """A finite group given by its Cayley table.

    The constructor checks the identity convention, the Latin-square property
    and associativity (exhaustively up to order %d, by seeded sampling above).
    """ % ASSOC_EXHAUSTIVE_BOUND

    __slots__ = (
        "order", "table", "labels", "np", "inverses",
        "associativity_checked", "associativity_seed", "__dict__",
    )

    def __init__(self, table, labels: Optional[Sequence[str]] = None):
        arr = _as_table_array(table)
        n = arr.shape[0]
        if n == 0:
            raise ValidationError("table: group must be nonempty")
        if arr.min() < 0 or arr.max() >= n:
            raise ValidationError("table: entries must be element indices 0..%d" % (n - 1))
        idx = np.arange(n)
        if not (np.array_equal(arr[0], idx) and np.array_equal(arr[:, 0], idx)):
            raise ValidationError("table: identity must sit at index 0")
        if not (np.array_equal(np.sort(arr, axis=1), np.tile(idx, (n, 1)))
                and np.array_equal(np.sort(arr, axis=0), np.tile(idx[:, None], (1, n)))):
            raise ValidationError("table: rows and columns must be permutations")
        self._check_associativity(arr)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValidationError("labels: expected %d entries" % n)
        self.order = n
        self.np = arr.astype(np.int32)
        self.table = tuple(tuple(int(x) for x in row) for row in arr)
        self.labels = labels
        self.inverses = tuple(int(x) for x in np.argmax(arr == 0, axis=1))

    def _check_associativity(self, arr: np.ndarray) -> None:
        n = arr.shape[0]
        if n <= ASSOC_EXHAUSTIVE_BOUND:
            step = max(1, (1 << 22) // max(1, n * n))
            for i0 in range(0, n, step):
                rows = arr[i0:i0 + step]
                left = arr[rows]            # [bi,j,k] = (i*j)*k
                right = rows[:, arr]        # [bi,j,k] = i*(j*k)
                if not np.array_equal(left, right):
                    raise ValidationError("table: not associative")
            self.associativity_checked = "exhaustive"
            self.associativity_seed = None
        else:
            rng = random.Random(ASSOC_SAMPLE_SEED)
            for _ in range(ASSOC_SAMPLE_TRIPLES):
                i = rng.randrange(n); j = rng.randrange(n); k = rng.randrange(n)
                if arr[arr[i, j], k] != arr[i, arr[j, k]]:
                    raise ValidationError("table: not associative")
            self.associativity_checked = "sampled"
            self.associativity_seed = ASSOC_SAMPLE_SEED

    # -- element arithmetic ------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def conj(self, x: int, s: int) -> int:
        """x s x^-1."""
        return self.table[self.table[x][s]][self.inverses[x]]

    def prod(self, xs: Iterable[int]) -> int:
        out = 0
        for x in xs:
            out = self.table[out][x]
        return out

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverses[i], -k)
        out = 0
        for _ in range(k):
            out = self.table[out][i]
        return out

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return "e" if i == 0 else "x%d" % i

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = self.table[x][i]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.np, self.np.T))

    def __repr__(self) -> str:
        return "FiniteGroup(order=%d)" % self.order


@dataclass
class Subgroup:
    """A subgroup of `parent`, stored as a sorted element tuple."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def is_normal(self) -> bool:
        g = self.parent
        elems = np.asarray(self.elements, dtype=np.int32)
        invs = np.asarray(g.inverses, dtype=np.int32)
        xs = g.np[:, elems]                       # [x, si] = x*s
        conjs = g.np[xs, invs[:, None]]           # [x, si] = x*s*x^-1
        mask = np.zeros(g.order, dtype=bool)
        mask[elems] = True
        return bool(mask[conjs].all())

    def as_group(self) -> tuple[FiniteGroup, dict[int, int]]:
        """Promote to a standalone FiniteGroup; returns (group, parent->new index map)."""
        pos = {e: i for i, e in enumerate(self.elements)}
        tab = [[pos[self.parent.table[a][b]] for b in self.elements] for a in self.elements]
        labels = None
        if self.parent.labels is not None:
            labels = [self.parent.labels[e] for e in self.elements]
        return FiniteGroup(tab, labels), pos

    def __contains__(self, x: int) -> bool:
        return x in self.members


def subgroup_generated(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Closure of `gens` under multiplication (right closure from the identity)."""
    gen_list = sorted({int(s) for s in gens})
    table = g.table
    seen = bytearray(g.order)
    seen[0] = 1
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            row = table[x]
            for s in gen_list:
                y = row[s]
                if not seen[y]:
                    seen[y] = 1
                    new.append(y)
        frontier = new
    return Subgroup(g, tuple(i for i in range(g.order) if seen[i]))


def normal_closure(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup containing `gens` (closure of all conjugates)."""
    gen_list = sorted({int(s) for s in gens})
    if not gen_list:
        return Subgroup(g, (0,))
    elems = np.asarray(gen_list, dtype=np.int32)
    invs = np.asarray(g.inverses, dtype=np.int32)
    conjs = g.np[g.np[:, elems], invs[:, None]]
    return subgroup_generated(g, np.unique(conjs).tolist())


def center(g: FiniteGroup) -> Subgroup:
    central = np.all(g.np == g.np.T, axis=1)
    return Subgroup(g, tuple(int(i) for i in np.flatnonzero(central)))


def derived_subgroup(g: FiniteGroup) -> Subgroup:
    invs = np.asarray(g.inverses, dtype=np.int32)
    ij = g.np
    ji = g.np.T
    comms = g.np[ij, invs[ji]]                    # [i,j] = (i*j)*(j*i)^-1
    return subgroup_generated(g, np.unique(comms).tolist())


@dataclass
class GroupHom:
    """A homomorphism given by its full image array; validated on construction."""

    domain: FiniteGroup
    codomain: FiniteGroup
    image: tuple[int, ...]

    def __post_init__(self):
        self.image = tuple(int(x) for x in self.image)
        if len(self.image) != self.domain.order:
            raise ValidationError("hom: image array must cover the domain")
        img = np.asarray(self.image, dtype=np.int32)
        if img[0] != 0:
            raise ValidationError("hom: identity must map to identity")
        if img.min() < 0 or img.max() >= self.codomain.order:
            raise ValidationError("hom: image entries out of range")
        if not np.array_equal(img[self.domain.np], self.codomain.np[img[:, None], img[None, :]]):
            raise ValidationError("hom: does not respect multiplication")

    def __call__(self, x: int) -> int:
        return self.image[x]

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup(self.domain,
                        tuple(i for i, v in enumerate(self.image) if v == 0))

    @cached_property
    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.codomain, tuple(sorted(set(self.image))))

    @property
    def is_injective(self) -> bool:
        return len(set(self.image)) == self.domain.order

    @property
    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.codomain.order

    @property
    def is_isomorphism(self) -> bool:
        return self.is_injective and self.is_surjective


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """G/N for normal N, cosets represented by their least element index."""
    if n.parent is not g:
        raise ValidationError("quotient: subgroup belongs to a different group")
    if not n.is_normal:
        raise ValidationError("quotient: subgroup is not normal")
    elems = np.asarray(n.elements, dtype=np.int32)
    rep = np.min(g.np[:, elems], axis=1)          # least element of each coset
    reps = np.unique(rep)
    rep_index = {int(r): i for i, r in enumerate(reps)}
    proj = np.array([rep_index[int(r)] for r in rep], dtype=np.int32)
    tab = proj[g.np[reps[:, None], reps[None, :]]]
    labels = None
    if g.labels is not None:
        labels = [g.labels[int(r)] for r in reps]
    q = FiniteGroup(tab, labels)
    return q, GroupHom(g, q, tuple(int(x) for x in proj))


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """A x B with index encoding (x, y) -> x*|B| + y."""
    nb = b.order
    tab = (a.np[:, None, :, None].astype(np.int64) * nb + b.np[None, :, None, :])
    tab = tab.reshape(a.order * nb, a.order * nb)
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = ["%s.%s" % (a.labels[x], b.labels[y])
                  for x in range(a.order) for y in range(nb)]
    return FiniteGroup(tab, labels)


def semidirect_product(n: FiniteGroup, q: FiniteGroup, act) -> FiniteGroup:
    """N x| Q with (a1,b1)(a2,b2) = (a1 * ^{b1}a2, b1 b2), element (a,b) -> a*|Q| + b.

    `act` gives, per element of Q, a permutation of N; it must be an action by
    automorphisms (checked).
    """
    arr = np.asarray(act, dtype=np.int32)
    if arr.shape != (q.order, n.order):
        raise ValidationError("semidirect: action must map each Q element to a permutation of N")
    idx = np.arange(n.order)
    for b in range(q.order):
        p = arr[b]
        if not np.array_equal(np.sort(p), idx):
            raise ValidationError("semidirect: action image is not a permutation")
        if not np.array_equal(p[n.np], n.np[p[:, None], p[None, :]]):
            raise ValidationError("semidirect: action image is not an automorphism")
    # homomorphism property: act[b1*b2] == act[b1] o act[b2]
    comp = arr[:, arr]                             # [b1, b2, x] = act[b1][act[b2][x]]
    if not np.array_equal(arr[q.np], comp):
        raise ValidationError("semidirect: action is not a homomorphism")
    nq = q.order
    left = n.np[np.arange(n.order)[:, None, None], arr[None, :, :]]   # [a1,b1,a2]
    tab = (left[:, :, :, None].astype(np.int64) * nq + q.np[None, :, None, :])
    return FiniteGroup(tab.reshape(n.order * nq, n.order * nq))


# -- isomorphism invariants ----------------------------------------------


@dataclass(frozen=True)
class IsoFingerprint:
    """Cheap isomorphism invariants used to filter before searching."""

    order: int
    order_histogram: tuple[tuple[int, int], ...]
    abelian_invariants: tuple[int, ...]
    center_order: int
    derived_order: int


def _abelian_invariant_factors(a: FiniteGroup) -> tuple[int, ...]:
    """Invariant factor chain (ascending, each dividing the next) of an abelian group."""
    n = a.order
    if n == 1:
        return ()
    assert a.is_abelian
    orders = np.asarray(a.element_orders, dtype=np.int64)
    primes = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    per_prime: list[list[int]] = []
    for p in primes:
        # conjugate partition from counts of elements of order dividing p^k
        kmax = 0
        pk = 1
        while n % (pk * p) == 0:
            pk *= p
            kmax += 1
        s = [0]
        for k in range(1, kmax + 1):
            cnt = int(np.count_nonzero((p ** k) % orders == 0))
            s.append(round(math.log(cnt, p)))
        mk = [s[k] - s[k - 1] for k in range(1, len(s))]
        lam = []
        i = 1
        while True:
            cnt = sum(1 for v in mk if v >= i)
            if cnt == 0:
                break
            lam.append(cnt)
            i += 1
        per_prime.append(sorted(lam, reverse=True))
    depth = max(len(lam) for lam in per_prime)
    factors = []
    for j in range(depth):
        f = 1
        for p, lam in zip(primes, per_prime):
            if j < len(lam):
                f *= p ** lam[j]
        factors.append(f)
    return tuple(sorted(factors))


def fingerprint(g: FiniteGroup) -> IsoFingerprint:
    hist: dict[int, int] = {}
    for o in g.element_orders:
        hist[o] = hist.get(o, 0) + 1
    der = derived_subgroup(g)
    ab, _ = quotient(g, der)
    return IsoFingerprint(
        order=g.order,
        order_histogram=tuple(sorted(hist.items())),
        abelian_invariants=_abelian_invariant_factors(ab),
        center_order=center(g).order,
        derived_order=der.order,
    )


# -- homomorphism search ---------------------------------------------------


def generating_sequence(g: FiniteGroup) -> tuple[int, ...]:
    """Deterministic small generating sequence (greedy by element index)."""
    gens: list[int] = []
    cur = {0}
    for x in range(1, g.order):
        if x not in cur:
            gens.append(x)
            cur = set(subgroup_generated(g, gens).elements)
            if len(cur) == g.order:
                break
    return tuple(gens)


def _close_partial(g: FiniteGroup, h: FiniteGroup, assigned: list[tuple[int, int]]):
    """Close a partial generator assignment; returns the map array or None on conflict.

    Every (element, generator) edge inside the generated subgroup is checked, so a
    successful full closure is a verified homomorphism on that subgroup.
    """
    m = [-1] * g.order
    m[0] = 0
    frontier = [0]
    gt, ht = g.table, h.table
    while frontier:
        new = []
        for x in frontier:
            mx = m[x]
            for s, si in assigned:
                y = gt[x][s]
                yi = ht[mx][si]
                if m[y] == -1:
                    m[y] = yi
                    new.append(y)
                elif m[y] != yi:
                    return None
        frontier = new
    return m


def enumerate_homs(g: FiniteGroup, h: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms g -> h, sorted lexicographically by image array."""
    if g.order > HOM_ORDER_BOUND or h.order > HOM_ORDER_BOUND:
        raise CapabilityError("enumerate_homs: orders must be <= %d" % HOM_ORDER_BOUND)
    gens = generating_sequence(g)
    if not gens:
        return [GroupHom(g, h, (0,) * 1)]
    g_ord = g.element_orders
    h_ord = h.element_orders
    results: list[tuple[int, ...]] = []

    def rec(depth: int, assigned: list[tuple[int, int]]):
        if depth == len(gens):
            m = _close_partial(g, h, assigned)
            if m is not None and -1 not in m:
                results.append(tuple(m))
            return
        s = gens[depth]
        for si in range(h.order):
            if g_ord[s] % h_ord[si] != 0:
                continue
            assigned.append((s, si))
            if _close_partial(g, h, assigned) is not None:
                rec(depth + 1, assigned)
            assigned.pop()

    rec(0, [])
    results.sort()
    return [GroupHom(g, h, img) for img in results]


def automorphism_group(g: FiniteGroup) -> tuple[FiniteGroup, list[GroupHom]]:
    """Aut(g) as a FiniteGroup under composition (identity first, then lex order).

    table[i][j] is the automorphism x -> aut_i(aut_j(x)).
    """
    auts = [hom for hom in enumerate_homs(g, g) if hom.is_isomorphism]
    ident = tuple(range(g.order))
    auts.sort(key=lambda a: (a.image != ident, a.image))
    index = {a.image: i for i, a in enumerate(auts)}
    tab = [[index[tuple(a.image[b.image[x]] for x in range(g.order))]
            for b in auts] for a in auts]
    return FiniteGroup(tab), auts


def hom_from_generator_images(src: FiniteGroup, gens: Sequence[int],
                              images: Sequence[int], dst: FiniteGroup) -> GroupHom:
    """Extend a generator assignment to a verified GroupHom.

    Raises ValidationError if `gens` does not generate src or the assignment is
    inconsistent with some relation.
    """
    m = _close_partial(src, dst, list(zip(gens, images)))
    if m is None:
        raise ValidationError("generator images are inconsistent with the relations")
    if -1 in m:
        raise ValidationError("the given elements do not generate the source group")
    return GroupHom(src, dst, tuple(m))


def _element_invariants(g: FiniteGroup) -> list[tuple[int, int]]:
    """(order, centralizer size) per element; preserved by any isomorphism."""
    cent = np.sum(g.np == g.np.T, axis=1)
    return [(g.element_orders[i], int(cent[i])) for i in range(g.order)]


def find_isomorphism(g1: FiniteGroup, g2: FiniteGroup) -> Optional[GroupHom]:
    """Backtracking isomorphism search behind a fingerprint filter."""
    if g1.order > ISO_ORDER_BOUND or g2.order > ISO_ORDER_BOUND:
        raise CapabilityError("find_isomorphism: orders must be <= %d" % ISO_ORDER_BOUND)
    if g1.order != g2.order:
        return None
    if fingerprint(g1) != fingerprint(g2):
        return None
    inv1 = _element_invariants(g1)
    inv2 = _element_invariants(g2)
    if sorted(inv1) != sorted(inv2):
        return None
    gens = generating_sequence(g1)
    if not gens:
        return GroupHom(g1, g2, (0,))
    candidates = [[x for x in range(g2.order) if inv2[x] == inv1[s]] for s in gens]

    found: list[tuple[int, ...]] = []

    def rec(depth: int, assigned: list[tuple[int, int]]) -> bool:
        if depth == len(gens):
            m = _close_partial(g1, g2, assigned)
            if m is not None and -1 not in m and len(set(m)) == g1.order:
                found.append(tuple(m))
                return True
            return False
        s = gens[depth]
        for si in candidates[depth]:
            assigned.append((s, si))
            m = _close_partial(g1, g2, assigned)
            if m is not None and rec(depth + 1, assigned):
                return True
            assigned.pop()
        return False

    if rec(0, []):
        return GroupHom(g1, g2, found[0])
    return None


def is_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    return find_isomorphism(g1, g2) is not None
