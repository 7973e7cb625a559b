"""Standard small groups and a best-effort naming catalog.

Catalog naming: cyclic groups are "Cn", symmetric "Sn", dihedral groups are
named by their order ("D8" is the dihedral group with 8 elements), "Q8" is the
quaternion group, and direct products are written largest factor first
("C4 x C2"). When several constructions coincide the earliest family in the
order cyclic, symmetric, dihedral, quaternion, products keeps the name.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Optional

from .group_core import (
    FiniteGroup, direct_product, find_isomorphism, fingerprint,
)

IDENTIFY_ORDER_BOUND = 512
_CATALOG_MAX_ORDER = 64


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], labels=["e"])


def cyclic(n: int) -> FiniteGroup:
    assert n >= 1
    tab = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["e"] + ["g" if i == 1 else "g%d" % i for i in range(1, n)]
    return FiniteGroup(tab, labels)


def klein_four() -> FiniteGroup:
    """The Klein four group on labels e, a, b, ab."""
    tab = [[i ^ j for j in range(4)] for i in range(4)]
    return FiniteGroup(tab, labels=["e", "a", "b", "ab"])


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index j*n + i is r^i s^j."""
    assert n >= 1
    size = 2 * n

    def mul(x, y):
        a, e = x % n, x // n
        b, f = y % n, y // n
        c = (a + b) % n if e == 0 else (a - b) % n
        return ((e + f) % 2) * n + c

    tab = [[mul(x, y) for y in range(size)] for x in range(size)]
    labels = ["e"] + ["r%d" % i if i > 1 else "r" for i in range(1, n)]
    labels += ["s"] + ["r%ds" % i if i > 1 else "rs" for i in range(1, n)]
    return FiniteGroup(tab, labels)


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n points; permutations in lexicographic order."""
    assert 1 <= n <= 5
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    tab = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return FiniteGroup(tab)


def quaternion() -> FiniteGroup:
    """Q8 on 1, -1, i, -i, j, -j, k, -k."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basis = {("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
             ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}

    def mul_sym(x, y):
        sx, bx = (-1, x[1:]) if x.startswith("-") else (1, x)
        sy, by = (-1, y[1:]) if y.startswith("-") else (1, y)
        s = sx * sy
        if bx == "1":
            b = by
        elif by == "1":
            b = bx
        elif bx == by:
            s, b = -s, "1"
        else:
            s2, b = basis[(bx, by)]
            s *= s2
        return ("-" if s < 0 else "") + b

    index = {nm: i for i, nm in enumerate(names)}
    tab = [[index[mul_sym(x, y)] for y in names] for x in names]
    return FiniteGroup(tab, labels=names)


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    g = cyclic(p)
    for _ in range(k - 1):
        g = direct_product(g, cyclic(p))
    return g


def _base_families(max_order: int) -> Iterator[tuple[str, FiniteGroup]]:
    for n in range(1, max_order + 1):
        yield "C%d" % n, cyclic(n)
    for n in (3, 4):
        if _factorial(n) <= max_order:
            yield "S%d" % n, symmetric(n)
    n = 3
    while 2 * n <= max_order:
        yield "D%d" % (2 * n), dihedral(n)
        n += 1
    if max_order >= 8:
        yield "Q8", quaternion()


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _product_factors(max_order: int) -> list[tuple[str, FiniteGroup]]:
    """Nontrivial factors allowed inside direct products."""
    out = []
    for n in range(2, max_order + 1):
        out.append(("C%d" % n, cyclic(n)))
    if max_order >= 6:
        out.append(("S3", symmetric(3)))
    if max_order >= 24:
        out.append(("S4", symmetric(4)))
    n = 4
    while 2 * n <= max_order:
        out.append(("D%d" % (2 * n), dihedral(n)))
        n += 1
    if max_order >= 8:
        out.append(("Q8", quaternion()))
    return out


class _Catalog:
    def __init__(self, entries: list[tuple[str, FiniteGroup]]):
        self.entries = entries
        self.by_fingerprint: dict = {}
        for name, g in entries:
            self.by_fingerprint.setdefault(fingerprint(g), []).append((name, g))


@lru_cache(maxsize=1)
def _build_catalog() -> _Catalog:
    seen: dict = {}
    entries: list[tuple[str, FiniteGroup]] = []

    def try_add(name: str, g: FiniteGroup):
        fp = fingerprint(g)
        for _, other in seen.get(fp, []):
            if find_isomorphism(g, other) is not None:
                return
        seen.setdefault(fp, []).append((name, g))
        entries.append((name, g))

    for name, g in _base_families(_CATALOG_MAX_ORDER):
        try_add(name, g)

    factors = _product_factors(_CATALOG_MAX_ORDER // 2)
    # multisets of >= 2 factors with product order <= _CATALOG_MAX_ORDER,
    # nondecreasing factor index to avoid duplicates
    stack: list[tuple[int, int, list[int]]] = [(0, 1, [])]
    while stack:
        start, order, picked = stack.pop()
        if len(picked) >= 2:
            g = None
            for fi in picked:
                g = factors[fi][1] if g is None else direct_product(g, factors[fi][1])
            names = sorted((factors[fi][0] for fi in picked),
                           key=lambda nm: (-_catalog_name_order(nm), nm))
            try_add(" x ".join(names), g)
        for fi in range(start, len(factors)):
            o = order * factors[fi][1].order
            if o <= _CATALOG_MAX_ORDER:
                stack.append((fi, o, picked + [fi]))
    return _Catalog(entries)


def _catalog_name_order(name: str) -> int:
    head = name.rstrip("0123456789")
    if head in ("C", "D", "Q"):
        return int(name[1:])
    if head == "S":
        return _factorial(int(name[1:]))
    raise AssertionError(name)


def identify(g: FiniteGroup) -> Optional[str]:
    """Best-effort name for g against the built-in catalog; None if unnamed.

    Abelian groups are named exactly from their invariant factors at any order
    up to the bound; other groups are matched against the constructed catalog.
    """
    if g.order > IDENTIFY_ORDER_BOUND:
        return None
    if g.is_abelian:
        if g.order == 1:
            return "C1"
        invs = fingerprint(g).abelian_invariants
        return " x ".join("C%d" % d for d in sorted(invs, reverse=True))
    cat = _build_catalog()
    fp = fingerprint(g)
    for name, other in cat.by_fingerprint.get(fp, []):
        if find_isomorphism(g, other) is not None:
            return name
    return None
