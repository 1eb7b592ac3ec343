"""Block monoids B(g1, ..., gk): non-negative multiplicity vectors with zero sum.

Atoms are found by scanning the box prod {0, ..., ord(g_i)}. Any entry above
ord(g_i) splits off ord(g_i)*e_i, so every atom lies in the box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import abelian
from .abelian import Element, GroupSpec
from .errors import CapExceeded, InvalidInput

MultVector = tuple[int, ...]

DEFAULT_NODE_CAP = 10**8
# rows materialised per numpy block while scanning a box
_BLOCK_ROWS = 1 << 16


@dataclass(frozen=True)
class Context:
    """An ordered tuple of distinct elements g1, ..., gk of ``group``."""

    group: GroupSpec
    elements: tuple[Element, ...]
    orders: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        els = tuple(tuple(int(c) for c in g) for g in self.elements)
        if not els:
            raise InvalidInput("a context needs at least one element")
        for g in els:
            if not self.group.contains(g):
                raise InvalidInput(f"{g} is not a reduced element of {self.group}")
        if len(set(els)) != len(els):
            raise InvalidInput(f"context elements must be pairwise distinct: {els}")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "orders", tuple(abelian.order(self.group, g) for g in els))

    @classmethod
    def of(cls, group: GroupSpec, elements: Iterable[Sequence[int]]) -> "Context":
        return cls(group, tuple(group.element(g) for g in elements))

    @property
    def k(self) -> int:
        return len(self.elements)

    def box_size(self) -> int:
        return math.prod(o + 1 for o in self.orders)

    def unit_atoms(self) -> list[MultVector]:
        """The atoms ord(g_i) * e_i."""
        return [tuple(o if j == i else 0 for j in range(self.k)) for i, o in enumerate(self.orders)]


def length(m: Sequence[int]) -> int:
    return sum(m)


def support(m: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(m) if x)


def _check_vector(ctx: Context, m: Sequence[int]) -> MultVector:
    if len(m) != ctx.k:
        raise InvalidInput(f"vector {list(m)} has {len(m)} entries, context has {ctx.k} elements")
    if any(x < 0 for x in m):
        raise InvalidInput(f"multiplicities must be non-negative: {list(m)}")
    return tuple(int(x) for x in m)


def is_zero_sum(ctx: Context, m: Sequence[int]) -> bool:
    m = _check_vector(ctx, m)
    return abelian.linear_combination(ctx.group, m, ctx.elements) == ctx.group.identity


def complementer(ctx: Context, m: Sequence[int]) -> MultVector:
    """ord(g_i) - m_i coordinatewise; needs 0 <= m_i <= ord(g_i) and zero sum."""
    m = _check_vector(ctx, m)
    if any(x > o for x, o in zip(m, ctx.orders)):
        raise InvalidInput(f"complementer needs m_i <= ord(g_i); got {list(m)} with orders {list(ctx.orders)}")
    if not is_zero_sum(ctx, m):
        raise InvalidInput(f"{list(m)} is not zero-sum")
    return tuple(o - x for x, o in zip(m, ctx.orders))


def is_atom(ctx: Context, m: Sequence[int]) -> bool:
    """True iff m is nonzero and no zero-sum m' satisfies 0 < m' < m."""
    m = _check_vector(ctx, m)
    if not is_zero_sum(ctx, m):
        raise InvalidInput(f"{list(m)} is not zero-sum")
    if not any(m):
        return False
    if any(x > o for x, o in zip(m, ctx.orders)):
        return False
    for sub in itertools.product(*(range(x + 1) for x in m)):
        if any(sub) and sub != m and is_zero_sum(ctx, sub):
            return False
    return True


def _zero_sum_box(ctx: Context, max_len: int | None, node_cap: int) -> np.ndarray:
    """Nonzero zero-sum vectors of the box, as an (N, k) array in lexicographic order."""
    if ctx.box_size() > node_cap:
        raise CapExceeded(f"atom search box of size {ctx.box_size()} exceeds the node cap {node_cap}")
    G = ctx.group
    k = ctx.k
    mods = np.array(G.moduli, dtype=np.int64)
    gens = np.array(ctx.elements, dtype=np.int64).reshape(k, G.rank)
    bounds = [o + 1 for o in ctx.orders]
    # split into an outer python loop and an inner numpy block
    split = k
    while split > 0 and math.prod(bounds[split - 1 :]) <= _BLOCK_ROWS:
        split -= 1
    inner_shape = bounds[split:]
    if inner_shape:
        inner = np.indices(inner_shape, dtype=np.int64).reshape(len(inner_shape), -1).T
    else:
        inner = np.zeros((1, 0), dtype=np.int64)
    inner_sum = inner @ gens[split:] if inner_shape else np.zeros((1, G.rank), dtype=np.int64)
    inner_len = inner.sum(axis=1)
    found = []
    for prefix in itertools.product(*(range(b) for b in bounds[:split])):
        plen = sum(prefix)
        if max_len is not None and plen > max_len:
            continue
        psum = np.array(prefix, dtype=np.int64) @ gens[:split] if split else np.zeros(G.rank, dtype=np.int64)
        mask = ((inner_sum + psum) % mods == 0).all(axis=1)
        if max_len is not None:
            mask &= inner_len <= max_len - plen
        if mask.any():
            rows = inner[mask]
            if split:
                rows = np.hstack([np.broadcast_to(np.array(prefix, dtype=np.int64), (len(rows), split)), rows])
            found.append(rows)
    if not found:
        return np.zeros((0, k), dtype=np.int64)
    out = np.vstack(found)
    return out[out.any(axis=1)]


def _minimal_rows(vectors: np.ndarray) -> np.ndarray:
    """Rows with no other nonzero row componentwise below them, sorted by (length, lex)."""
    if len(vectors) == 0:
        return vectors
    lens = vectors.sum(axis=1)
    order = np.lexsort(tuple(vectors[:, j] for j in range(vectors.shape[1] - 1, -1, -1)) + (lens,))
    vectors, lens = vectors[order], lens[order]
    kept = np.zeros((0, vectors.shape[1]), dtype=vectors.dtype)
    # a proper zero-sum part is strictly shorter, so length layers can be filtered in bulk
    for L in np.unique(lens):
        layer = vectors[lens == L]
        if len(kept):
            dominated = np.zeros(len(layer), dtype=bool)
            step = max(1, _BLOCK_ROWS // max(1, len(kept)))
            for s in range(0, len(layer), step):
                chunk = layer[s : s + step]
                dominated[s : s + step] = (kept[None, :, :] <= chunk[:, None, :]).all(axis=2).any(axis=1)
            layer = layer[~dominated]
        kept = np.vstack([kept, layer])
    return kept


def atoms_by_length(ctx: Context, max_len: int | None = None, node_cap: int = DEFAULT_NODE_CAP) -> list[MultVector]:
    """Atoms sorted by (length, lex); the order the group-atom scans consume them in."""
    rows = _minimal_rows(_zero_sum_box(ctx, max_len, node_cap))
    return [tuple(int(x) for x in row) for row in rows]


def enumerate_atoms(ctx: Context, max_len: int | None = None, node_cap: int = DEFAULT_NODE_CAP) -> list[MultVector]:
    """All atoms of B(ctx) (of length <= max_len if given), in lexicographic order."""
    return sorted(atoms_by_length(ctx, max_len, node_cap))


def full_group_context(G: GroupSpec, include_identity: bool = False) -> Context:
    """The context of all nonzero elements (plus 0 if asked), in lexicographic order."""
    els = [g for g in abelian.enumerate_elements(G) if include_identity or any(g)]
    return Context(G, tuple(els))


def davenport(G: GroupSpec, node_cap: int = DEFAULT_NODE_CAP) -> int:
    """Maximal atom length of B(G), computed over the nonzero elements of G."""
    ctx = full_group_context(G)
    return max(length(a) for a in atoms_by_length(ctx, node_cap=node_cap))
