"""Exhaustive search for the separating Noether number beta_sep(G).

beta_sep(G) is the maximal length of a group atom of B(g1..gk), over all
sets of k <= rank(G)+1 distinct elements of G. Prunings used by default:

(a) only full-support atoms are tested; a group atom of smaller support is
    also a group atom of the sub-context, which the sweep visits as well;
(b) an atom m with |m| > max ord(g_i) and 2|m| > sum ord(g_i) is never a
    group atom; per context this gives the static bound
    max(max ord, floor(sum ord / 2)), and contexts are swept in decreasing
    order of it so the sweep can stop once the bound drops to the running best;
(c) the sweep stops when the running best reaches floor(exp*(rank+1)/2);
(d) optionally, one context per Aut(G)-orbit.

Results do not depend on the worker count: batches are evaluated in
parallel against the best value known at batch start, then replayed in
sweep order exactly as a sequential scan would see them.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import abelian
from . import blockmonoid as bm
from .abelian import Element, GroupSpec
from .blockmonoid import Context, MultVector
from .errors import CapExceeded
from .lattice import LatticeBasis

log = logging.getLogger(__name__)

DEFAULT_SWEEP_CAP = 250_000
DEFAULT_AUTOMORPHISM_CAP = 2 * 10**6


def upper_bound(G: GroupSpec) -> int:
    return G.exponent * (G.rank + 1) // 2


def static_bound(orders: Sequence[int]) -> int:
    """Largest length a group atom over elements of these orders can have."""
    return max(max(orders), sum(orders) // 2)


def identity_exclusion_note(G: GroupSpec) -> str:
    return (
        f"contexts range over the {G.order - 1} nonzero elements of {G}: adding 0 to a context "
        "only adds the atom [1] at its coordinate, which never raises the maximum"
    )


SEARCH_NOTE = (
    "beta_sep is reported as the maximal group-atom length over all sets of at most rank+1 "
    "distinct elements, a characterization taken from the literature and not re-proved here"
)


@dataclass(frozen=True)
class ContextResult:
    value: int | None  # best group-atom length above the floor, if any
    vector: MultVector | None
    atoms: int
    tested: int
    skipped: int
    # group atoms violating the length inequalities; only filled in audit scans
    violations: tuple[MultVector, ...] = ()


def _scan_context(
    moduli: tuple[int, ...],
    elements: tuple[Element, ...],
    floor: int,
    prune: bool,
    node_cap: int,
) -> ContextResult:
    """Longest group atom of length > floor in B(elements), first in (length, lex) order."""
    G = GroupSpec(moduli)
    ctx = Context(G, elements)
    orders = ctx.orders
    k = ctx.k
    max_ord = max(orders)
    sum_ord = sum(orders)

    def candidate(a):
        L = sum(a)
        if L <= floor:
            return False
        if prune and (not all(a) or (L > max_ord and 2 * L > sum_ord)):
            return False
        return True

    atoms = bm.atoms_by_length(ctx, node_cap=node_cap)
    cand_lengths = [sum(a) for a in atoms if candidate(a)]
    skipped = len(atoms) - len(cand_lengths)
    if not cand_lengths:
        return ContextResult(None, None, len(atoms), 0, skipped)
    last = max(cand_lengths)
    index = abelian.subgroup_order(G, elements) if prune else 0

    lat = LatticeBasis(k)
    best, best_vec = None, None
    tested = 0
    violations = []
    i = 0
    while i < len(atoms):
        L = sum(atoms[i])
        j = i
        while j < len(atoms) and sum(atoms[j]) == L:
            j += 1
        layer = atoms[i:j]
        hit = None
        for a in layer:
            if not candidate(a):
                continue
            tested += 1
            if not lat.contains(a):
                if hit is None:
                    hit = a
                if prune:
                    break
                if L > max_ord and 2 * L > sum_ord:
                    violations.append(a)
        if hit is not None:
            best, best_vec = L, hit
        if L >= last:
            break
        for a in layer:
            lat.add(a)
        # once the lattice is all of G(g1..gk) nothing longer can be a group atom
        if prune and lat.determinant() == index:
            break
        i = j
    return ContextResult(best, best_vec, len(atoms), tested, skipped, tuple(violations))


def enumerate_group_atoms(ctx: Context, node_cap: int = bm.DEFAULT_NODE_CAP) -> list[MultVector]:
    """All group atoms of B(ctx), in (length, lex) order, with no pruning."""
    atoms = bm.atoms_by_length(ctx, node_cap=node_cap)
    lat = LatticeBasis(ctx.k)
    out = []
    for _, group in itertools.groupby(atoms, key=sum):
        layer = list(group)
        out.extend(a for a in layer if not lat.contains(a))
        for a in layer:
            lat.add(a)
    return out


def max_group_atom_length(ctx: Context, node_cap: int = bm.DEFAULT_NODE_CAP) -> tuple[int, MultVector | None]:
    """(maximal group-atom length, lexicographically least witness of that length)."""
    res = _scan_context(ctx.group.moduli, ctx.elements, 0, False, node_cap)
    if res.value is None:
        return 0, None
    return res.value, res.vector


def automorphisms(G: GroupSpec, cap: int = DEFAULT_AUTOMORPHISM_CAP) -> list[tuple[int, ...]]:
    """Aut(G) as permutations of the lexicographic element indices."""
    elements = list(abelian.enumerate_elements(G))
    index = {g: i for i, g in enumerate(elements)}
    choices = [[h for h in elements if abelian.scalar_mul(G, n, h) == G.identity] for n in G.moduli]
    work = math.prod(len(c) for c in choices) * len(elements)
    if work > cap:
        raise CapExceeded(f"automorphism enumeration needs ~{work} steps, over the cap {cap}")
    perms = []
    for images in itertools.product(*choices):
        perm = tuple(index[abelian.linear_combination(G, x, images)] for x in elements)
        if len(set(perm)) == len(perm):
            perms.append(perm)
    return perms


@dataclass
class SweepOptions:
    workers: int = 1
    prune: bool = True  # prunings (a)-(c) and the per-context saturation stop
    symmetry: bool = False  # pruning (d)
    include_identity: bool = False
    node_cap: int = bm.DEFAULT_NODE_CAP
    sweep_cap: int = DEFAULT_SWEEP_CAP
    batch_size: int = 2048  # contexts per worker per round

    @classmethod
    def audit(cls, **kw) -> "SweepOptions":
        return cls(prune=False, symmetry=False, **kw)


@dataclass
class BetaSepResult:
    group: GroupSpec
    value: int
    witness_context: Context
    witness_vector: MultVector
    subsets_examined: int
    subsets_pruned: int
    elapsed: float
    upper_bound: int
    notes: list[str] = field(default_factory=list)
    violations: list[tuple[Context, MultVector]] = field(default_factory=list)

    def to_json(self, include_elapsed: bool = True) -> dict:
        out = {
            "schema": 1,
            "group": self.group.text(),
            "beta_sep": self.value,
            "upper_bound": self.upper_bound,
            "witness": {
                "elements": [list(g) for g in self.witness_context.elements],
                "vector": list(self.witness_vector),
            },
            "subsets_examined": self.subsets_examined,
            "subsets_pruned": self.subsets_pruned,
            "notes": list(self.notes),
        }
        if include_elapsed:
            out["elapsed_ms"] = int(round(self.elapsed * 1000))
        return out


def _contexts(G: GroupSpec, opts: SweepOptions) -> tuple[list[tuple[Element, ...]], int]:
    """Contexts to visit, in sweep order, plus the number dropped by symmetry."""
    pool = [g for g in abelian.enumerate_elements(G) if opts.include_identity or any(g)]
    kmax = min(G.rank + 1, len(pool))
    total = sum(math.comb(len(pool), k) for k in range(1, kmax + 1))
    if total > opts.sweep_cap:
        raise CapExceeded(f"{G} needs {total} contexts, over the sweep cap {opts.sweep_cap}")
    order_of = {g: abelian.order(G, g) for g in pool}
    subsets = [s for k in range(1, kmax + 1) for s in itertools.combinations(pool, k)]
    dropped = 0
    if opts.symmetry:
        elements = list(abelian.enumerate_elements(G))
        idx = {g: i for i, g in enumerate(elements)}
        perms = automorphisms(G)
        seen = set()
        reps = []
        for s in subsets:
            key = tuple(idx[g] for g in s)
            if key in seen:
                continue
            reps.append(s)
            for perm in perms:
                seen.add(tuple(sorted(perm[i] for i in key)))
        dropped = len(subsets) - len(reps)
        subsets = reps
    # sweep order: decreasing static bound, then size, then lexicographic
    subsets.sort(key=lambda s: (-static_bound([order_of[g] for g in s]), len(s), s))
    return subsets, dropped


def _run_batch(args):
    moduli, batch, floor, prune, node_cap = args
    return [_scan_context(moduli, s, floor, prune, node_cap) for s in batch]


def beta_sep(G: GroupSpec, options: SweepOptions | None = None) -> BetaSepResult:
    opts = options or SweepOptions()
    if opts.workers < 1 or opts.batch_size < 1:
        raise ValueError("workers and batch_size must be >= 1")
    start = time.perf_counter()
    subsets, dropped = _contexts(G, opts)
    bound = upper_bound(G)
    order_of = {g: abelian.order(G, g) for s in subsets for g in s}

    best = 0
    best_ctx: tuple[Element, ...] | None = None
    best_vec: MultVector | None = None
    examined = 0
    violations = []
    stopped_at = None

    pool = ProcessPoolExecutor(opts.workers) if opts.workers > 1 else None
    try:
        pos = 0
        while pos < len(subsets) and stopped_at is None:
            batch = subsets[pos : pos + opts.batch_size * opts.workers]
            floor = best if opts.prune else 0
            if pool is None:
                results = _run_batch((G.moduli, batch, floor, opts.prune, opts.node_cap))
            else:
                size = -(-len(batch) // opts.workers)
                chunks = [batch[i : i + size] for i in range(0, len(batch), size)]
                jobs = [(G.moduli, c, floor, opts.prune, opts.node_cap) for c in chunks]
                results = [r for part in pool.map(_run_batch, jobs) for r in part]
            # replay in sweep order; a result computed against a lower floor
            # determines the sequential outcome for any higher floor
            for offset, (s, res) in enumerate(zip(batch, results)):
                i = pos + offset
                if opts.prune and static_bound([order_of[g] for g in s]) <= best:
                    stopped_at = i
                    break
                examined += 1
                violations.extend((s, v) for v in res.violations)
                if res.value is not None and res.value > best:
                    best, best_ctx, best_vec = res.value, s, res.vector
                    log.debug("new best %d at %s %s", best, s, best_vec)
                if opts.prune and best >= bound:
                    stopped_at = i + 1
                    break
            pos += len(batch)
    finally:
        if pool is not None:
            pool.shutdown()

    pruned = dropped + (len(subsets) - stopped_at if stopped_at is not None else 0)
    notes = [SEARCH_NOTE]
    if not opts.include_identity:
        notes.append(identity_exclusion_note(G))
    if best_ctx is None:
        raise AssertionError(f"no group atom found for {G}; single-element contexts always have one")
    return BetaSepResult(
        group=G,
        value=best,
        witness_context=Context(G, best_ctx),
        witness_vector=best_vec,
        subsets_examined=examined,
        subsets_pruned=pruned,
        elapsed=time.perf_counter() - start,
        upper_bound=bound,
        notes=notes,
        violations=[(Context(G, s), v) for s, v in violations],
    )
