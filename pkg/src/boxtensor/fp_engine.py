"""Finitely presented groups and Todd-Coxeter coset enumeration.

Words are sequences of signed letters: +(i+1) is generator i, -(i+1) its
inverse. The enumerator is HLT with full row filling, union-find coincidence
handling, and periodic compaction; the definition order is fixed so identical
inputs give identical tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .group_core import FiniteGroup, Subgroup, ValidationError, subgroup_generated

DEFAULT_MAX_COSETS = 1_000_000
_COMPACT_MIN_DEAD = 1024
_INITIAL_CAPACITY = 1024

# state slots shared with the enumeration kernel
_S_ALPHA, _S_NDEF, _S_NDEAD, _S_QHEAD, _S_QTAIL = 0, 1, 2, 3, 4
_S_SGDONE, _S_STATUS, _S_PEAK_LIVE, _S_TOTALDEF = 5, 6, 7, 8
_NSTATE = 9

# kernel return codes
_RC_COMPLETE, _RC_GROW, _RC_LIVE_LIMIT, _RC_TOTAL_LIMIT, _RC_COMPACT = 1, 2, 3, 4, 5


def free_reduce(word: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs."""
    out: list[int] = []
    for letter in word:
        if letter == 0:
            raise ValidationError("letter 0 is not a valid generator reference")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


def invert_word(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-l for l in reversed(word))


@dataclass
class Presentation:
    """Group presentation on ngens generators with freely reduced relators."""

    gen_names: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        self.gen_names = tuple(str(n) for n in self.gen_names)
        self.relators = tuple(free_reduce(r) for r in self.relators)
        n = self.ngens
        for r in self.relators:
            for letter in r:
                if not (1 <= abs(letter) <= n):
                    raise ValidationError("relator letter %d out of range" % letter)

    @property
    def ngens(self) -> int:
        return len(self.gen_names)

    def dumps(self) -> str:
        """One relator per line; generator i is gi, inverse marked with '."""
        lines = []
        for r in self.relators:
            parts = ["g%d" % (l - 1) if l > 0 else "g%d'" % (-l - 1) for l in r]
            lines.append(" ".join(parts))
        return "".join(line + "\n" for line in lines)


@dataclass
class EnumLimits:
    """max_cosets bounds live cosets; max_defined_total bounds rows ever defined."""

    max_cosets: int = DEFAULT_MAX_COSETS
    max_defined_total: Optional[int] = None

    def __post_init__(self):
        if self.max_cosets <= 0:
            raise ValidationError("max_cosets must be positive")
        if self.max_defined_total is None:
            self.max_defined_total = 4 * self.max_cosets
        if self.max_defined_total <= 0:
            raise ValidationError("max_defined_total must be positive")


@dataclass
class CosetTable:
    """Result of an enumeration; table rows are cosets, columns alternate
    generator/inverse (2i, 2i+1)."""

    ngens: int
    status: str  # "complete" | "aborted"
    ncosets: int
    table: Optional[np.ndarray]
    peak_live: int
    total_defined: int

    @property
    def complete(self) -> bool:
        return self.status == "complete"


def _word_to_cols(word: Sequence[int]) -> list[int]:
    return [2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1 for l in word]


def _flatten(words_cols: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(len(words_cols) + 1, dtype=np.int32)
    for i, w in enumerate(words_cols):
        off[i + 1] = off[i] + len(w)
    flat = np.fromiter((c for w in words_cols for c in w), dtype=np.int32,
                       count=int(off[-1]))
    return flat, off


def _enum_kernel(tab, parent, queue, rel_flat, rel_off, sg_flat, sg_off,
                 state, lims):
    """One resumable pass of HLT enumeration over preallocated arrays.

    Returns only via state[_S_STATUS]: complete, grow, compact, or a limit.
    """
    ncols = tab.shape[1]
    capacity = tab.shape[0]
    max_live = lims[0]
    max_total = lims[1]
    headroom = lims[2]
    nrels = rel_off.shape[0] - 1
    nsg = sg_off.shape[0] - 1

    def rep(k):
        r = k
        while parent[r] != r:
            r = parent[r]
        while parent[k] != r:
            nxt = parent[k]
            parent[k] = r
            k = nxt
        return r

    def merge(a, b):
        ra = rep(a)
        rb = rep(b)
        if ra == rb:
            return
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra
        state[_S_NDEAD] += 1
        queue[state[_S_QTAIL]] = rb
        state[_S_QTAIL] += 1

    def process_queue():
        while state[_S_QHEAD] < state[_S_QTAIL]:
            e = queue[state[_S_QHEAD]]
            state[_S_QHEAD] += 1
            for x in range(ncols):
                d = tab[e, x]
                if d < 0:
                    continue
                tab[d, x ^ 1] = -1
                e1 = rep(e)
                d1 = rep(d)
                te = tab[e1, x]
                if te >= 0:
                    merge(d1, te)
                else:
                    td = tab[d1, x ^ 1]
                    if td >= 0:
                        merge(e1, td)
                    else:
                        tab[e1, x] = d1
                        tab[d1, x ^ 1] = e1
        state[_S_QHEAD] = 0
        state[_S_QTAIL] = 0

    def define(f, c):
        # capacity is guaranteed by the headroom check at row boundaries
        live = state[_S_NDEF] - state[_S_NDEAD]
        if live >= max_live:
            state[_S_STATUS] = _RC_LIVE_LIMIT
            return -1
        if state[_S_TOTALDEF] >= max_total:
            state[_S_STATUS] = _RC_TOTAL_LIMIT
            return -1
        n = state[_S_NDEF]
        state[_S_NDEF] += 1
        state[_S_TOTALDEF] += 1
        parent[n] = n
        tab[f, c] = n
        tab[n, c ^ 1] = f
        if live + 1 > state[_S_PEAK_LIVE]:
            state[_S_PEAK_LIVE] = live + 1
        return n

    def scan_and_fill(alpha, start, end):
        f = alpha
        b = alpha
        i = start
        j = end - 1
        while True:
            while i <= j:
                nxt = tab[f, rel_flat[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    merge(f, b)
                    process_queue()
                return 0
            while j >= i:
                nxt = tab[b, rel_flat[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                merge(f, b)
                process_queue()
                return 0
            if j == i:
                c = rel_flat[i]
                tab[f, c] = b
                tab[b, c ^ 1] = f
                return 0
            if define(f, rel_flat[i]) < 0:
                return -1

    def scan_word(alpha, flat, start, end):
        # same as scan_and_fill but over a second flattened word array
        f = alpha
        b = alpha
        i = start
        j = end - 1
        while True:
            while i <= j:
                nxt = tab[f, flat[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    merge(f, b)
                    process_queue()
                return 0
            while j >= i:
                nxt = tab[b, flat[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                merge(f, b)
                process_queue()
                return 0
            if j == i:
                c = flat[i]
                tab[f, c] = b
                tab[b, c ^ 1] = f
                return 0
            if define(f, flat[i]) < 0:
                return -1

    if state[_S_SGDONE] == 0:
        if capacity - state[_S_NDEF] < headroom:
            state[_S_STATUS] = _RC_GROW
            return
        for k in range(nsg):
            if scan_word(0, sg_flat, sg_off[k], sg_off[k + 1]) < 0:
                return
        state[_S_SGDONE] = 1

    alpha = state[_S_ALPHA]
    while alpha < state[_S_NDEF]:
        if rep(alpha) == alpha:
            live = state[_S_NDEF] - state[_S_NDEAD]
            if state[_S_NDEAD] > live and state[_S_NDEAD] > 1024:
                state[_S_ALPHA] = alpha
                state[_S_STATUS] = _RC_COMPACT
                return
            if capacity - state[_S_NDEF] < headroom:
                state[_S_ALPHA] = alpha
                state[_S_STATUS] = _RC_GROW
                return
            died = False
            for k in range(nrels):
                if scan_and_fill(alpha, rel_off[k], rel_off[k + 1]) < 0:
                    return
                if rep(alpha) != alpha:
                    died = True
                    break
            if not died:
                for x in range(ncols):
                    if tab[alpha, x] < 0:
                        if define(alpha, x) < 0:
                            return
        alpha += 1
        state[_S_ALPHA] = alpha
    state[_S_STATUS] = _RC_COMPLETE


_KERNEL_JIT = None
_KERNEL_JIT_FAILED = False


def _get_kernel():
    """JIT-compiled kernel when numba is available, else the plain function."""
    global _KERNEL_JIT, _KERNEL_JIT_FAILED
    if _KERNEL_JIT is not None:
        return _KERNEL_JIT
    if _KERNEL_JIT_FAILED:
        return _enum_kernel
    try:
        from numba import njit
        _KERNEL_JIT = njit(cache=True)(_enum_kernel)
    except Exception:
        _KERNEL_JIT_FAILED = True
        return _enum_kernel
    return _KERNEL_JIT


def _run_kernel(*args):
    global _KERNEL_JIT, _KERNEL_JIT_FAILED
    kernel = _get_kernel()
    if kernel is _enum_kernel:
        kernel(*args)
        return
    try:
        kernel(*args)
    except Exception:
        # fall back to the identical pure-Python path once and for all
        _KERNEL_JIT = None
        _KERNEL_JIT_FAILED = True
        _enum_kernel(*args)


def _compact(tab, parent, state):
    """Drop dead rows, renumbering live cosets in increasing order."""
    ndef = int(state[_S_NDEF])
    live_mask = parent[:ndef] == np.arange(ndef, dtype=np.int32)
    live_idx = np.flatnonzero(live_mask)
    nlive = live_idx.shape[0]
    remap = np.full(ndef, -1, dtype=np.int32)
    remap[live_idx] = np.arange(nlive, dtype=np.int32)
    newtab = np.full_like(tab, -1)
    sub = tab[live_idx]
    defined = sub >= 0
    # live rows only reference live cosets (coincidence processing removes
    # every pointer into a dead row), so the remap is total here
    sub = np.where(defined, remap[np.where(defined, sub, 0)], -1)
    newtab[:nlive] = sub
    tab[:] = newtab
    parent[:] = np.arange(parent.shape[0], dtype=np.int32)
    alpha = int(state[_S_ALPHA])
    state[_S_ALPHA] = remap[alpha] if alpha < ndef else nlive
    state[_S_NDEF] = nlive
    state[_S_NDEAD] = 0


def todd_coxeter(p: Presentation, subgroup_words: Sequence[Sequence[int]] = (),
                 limits: Optional[EnumLimits] = None,
                 allow_free: bool = False) -> CosetTable:
    """Enumerate cosets of the subgroup generated by subgroup_words.

    A complete table has ncosets equal to the subgroup index. Hitting a limit
    yields status "aborted" with the high-water statistics, never an exception.
    """
    limits = limits or EnumLimits()
    if p.ngens == 0:
        return CosetTable(ngens=0, status="complete", ncosets=1,
                          table=np.zeros((1, 0), dtype=np.int32),
                          peak_live=1, total_defined=1)
    if not p.relators and not allow_free:
        raise ValidationError("free-group enumeration must be requested explicitly")

    ncols = 2 * p.ngens
    rel_cols = [_word_to_cols(r) for r in p.relators]
    sg_cols = [_word_to_cols(free_reduce(w)) for w in subgroup_words]
    rel_flat, rel_off = _flatten(rel_cols)
    sg_flat, sg_off = _flatten(sg_cols)
    headroom = max(int(rel_off[-1]), int(sg_off[-1])) + ncols + 8

    capacity = max(_INITIAL_CAPACITY, headroom + 16)
    tab = np.full((capacity, ncols), -1, dtype=np.int32)
    parent = np.arange(capacity, dtype=np.int32)
    queue = np.zeros(capacity, dtype=np.int32)
    state = np.zeros(_NSTATE, dtype=np.int64)
    state[_S_NDEF] = 1
    state[_S_TOTALDEF] = 1
    state[_S_PEAK_LIVE] = 1
    lims = np.array([limits.max_cosets, limits.max_defined_total, headroom],
                    dtype=np.int64)

    while True:
        state[_S_STATUS] = 0
        _run_kernel(tab, parent, queue, rel_flat, rel_off, sg_flat, sg_off,
                    state, lims)
        rc = int(state[_S_STATUS])
        if rc == _RC_COMPLETE:
            break
        if rc in (_RC_LIVE_LIMIT, _RC_TOTAL_LIMIT):
            return CosetTable(ngens=p.ngens, status="aborted", ncosets=0,
                              table=None,
                              peak_live=int(state[_S_PEAK_LIVE]),
                              total_defined=int(state[_S_TOTALDEF]))
        if rc == _RC_COMPACT:
            _compact(tab, parent, state)
            continue
        assert rc == _RC_GROW
        ndead = int(state[_S_NDEAD])
        if ndead > max(_COMPACT_MIN_DEAD, int(state[_S_NDEF]) - ndead):
            _compact(tab, parent, state)
            continue
        new_capacity = max(2 * capacity, int(state[_S_NDEF]) + headroom + 16)
        grow = new_capacity - capacity
        tab = np.vstack([tab, np.full((grow, ncols), -1, dtype=np.int32)])
        parent = np.concatenate([parent,
                                 np.arange(capacity, new_capacity, dtype=np.int32)])
        queue = np.zeros(new_capacity, dtype=np.int32)
        capacity = new_capacity

    _compact(tab, parent, state)
    n = int(state[_S_NDEF])
    final = np.ascontiguousarray(tab[:n])
    result = CosetTable(ngens=p.ngens, status="complete", ncosets=n, table=final,
                        peak_live=int(state[_S_PEAK_LIVE]),
                        total_defined=int(state[_S_TOTALDEF]))
    _verify_complete(result, (rel_flat, rel_off), sg_cols)
    return result


def _relators_close(tab, flat, off) -> bool:
    """Trace every relator from every coset; True when all traces close."""
    n = tab.shape[0]
    for r in range(off.shape[0] - 1):
        lo, hi = off[r], off[r + 1]
        for c0 in range(n):
            cur = c0
            for k in range(lo, hi):
                cur = tab[cur, flat[k]]
            if cur != c0:
                return False
    return True


_CLOSE_JIT = None
_CLOSE_JIT_FAILED = False


def _relators_close_fast(tab, flat, off) -> bool:
    global _CLOSE_JIT, _CLOSE_JIT_FAILED
    if _CLOSE_JIT is None and not _CLOSE_JIT_FAILED:
        try:
            from numba import njit
            _CLOSE_JIT = njit(cache=True)(_relators_close)
        except Exception:
            _CLOSE_JIT_FAILED = True
    if _CLOSE_JIT is not None:
        try:
            return bool(_CLOSE_JIT(tab, flat, off))
        except Exception:
            _CLOSE_JIT = None
            _CLOSE_JIT_FAILED = True
    return _relators_close(tab, flat, off)


def _verify_complete(ct: CosetTable, rel_cols, sg_cols) -> None:
    """Independent post-check: permutation columns, relator traces, fixed coset 0."""
    tab = ct.table
    n = ct.ncosets
    assert tab is not None and np.all(tab >= 0), "incomplete table marked complete"
    idx = np.arange(n, dtype=np.int32)
    for c in range(2 * ct.ngens):
        assert np.array_equal(np.sort(tab[:, c]), idx), "column %d not a permutation" % c
    flat, off = rel_cols if isinstance(rel_cols, tuple) else _flatten(rel_cols)
    assert _relators_close_fast(tab, flat, off), "relator trace does not close"
    for cols in sg_cols:
        v = 0
        for c in cols:
            v = int(tab[v, c])
        assert v == 0, "subgroup generator does not fix coset 0"


def trace(ct: CosetTable, start: int, word: Sequence[int]) -> int:
    """Follow a signed word through a complete table."""
    assert ct.complete
    cur = start
    for c in _word_to_cols(word):
        cur = int(ct.table[cur, c])
    return cur


@dataclass
class CosetGroup:
    """A finite group realized by enumerating the trivial subgroup."""

    group: FiniteGroup
    presentation: Presentation
    coset_table: CosetTable
    generator_images: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]  # a defining word per element

    def evaluate(self, word: Sequence[int]) -> int:
        """Image of a free word in the enumerated group."""
        return trace(self.coset_table, 0, word)


def coset_group(p: Presentation, limits: Optional[EnumLimits] = None,
                labels: Optional[Sequence[str]] = None) -> CosetGroup:
    """Enumerate the whole group (trivial subgroup) and build its Cayley table.

    Raises CapabilityError-like abort information via InconclusiveError when
    limits are hit.
    """
    ct = todd_coxeter(p, (), limits)
    if not ct.complete:
        raise InconclusiveError(ct)
    n = ct.ncosets
    tab = ct.table
    words: list[Optional[tuple[int, ...]]] = [None] * n
    words[0] = ()
    order: list[int] = [0]
    head = 0
    letters = []
    for i in range(p.ngens):
        letters.append((2 * i, i + 1))
        letters.append((2 * i + 1, -(i + 1)))
    while head < len(order):
        cur = order[head]
        head += 1
        for col, letter in letters:
            nxt = int(tab[cur, col]) if n else 0
            if words[nxt] is None:
                words[nxt] = words[cur] + (letter,)
                order.append(nxt)
    assert all(w is not None for w in words), "coset table not connected"

    mul = np.empty((n, n), dtype=np.int32)
    start = np.arange(n, dtype=np.int32)
    for j in range(n):
        v = start
        for c in _word_to_cols(words[j]):
            v = tab[v, c]
        mul[:, j] = v
    group = FiniteGroup(mul, labels=labels)
    gen_images = tuple(int(tab[0, 2 * i]) for i in range(p.ngens))
    return CosetGroup(group=group, presentation=p, coset_table=ct,
                      generator_images=gen_images,
                      words=tuple(words))


class InconclusiveError(RuntimeError):
    """Enumeration hit its limits; carries the aborted table's statistics."""

    def __init__(self, ct: CosetTable):
        super().__init__("enumeration aborted: peak live cosets %d, total defined %d"
                         % (ct.peak_live, ct.total_defined))
        self.coset_table = ct


def subgroup_of_coset_group(cg: CosetGroup, words: Iterable[Sequence[int]]) -> Subgroup:
    """Subgroup generated by the images of free words."""
    gens = {cg.evaluate(w) for w in words}
    return subgroup_generated(cg.group, gens)


def cayley_presentation(g: FiniteGroup) -> Presentation:
    """One generator per element with all n^2 product relators."""
    names = tuple("x_%s" % g.label(i) for i in range(g.order))
    rels = []
    for i in range(g.order):
        for j in range(g.order):
            k = g.mul(i, j)
            rels.append((i + 1, j + 1, -(k + 1)))
    return Presentation(gen_names=names, relators=tuple(rels))
