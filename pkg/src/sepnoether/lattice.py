"""Exact integer lattices and group-atom detection.

A group atom of B(g1..gk) is a monoid element that is not an integral
combination of strictly shorter monoid elements. Every shorter monoid element
is an N-combination of atoms that are themselves shorter, so it suffices to
test membership in the lattice spanned by the atoms of length < |m|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from sympy import primefactors

from . import blockmonoid as bm
from .blockmonoid import Context, MultVector
from .errors import InvalidInput, PreconditionError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _axpy(a: int, x: list[int], y: list[int]) -> list[int]:
    return [a * xi + yi for xi, yi in zip(x, y)]


def _comb(a: int, x: dict, b: int, y: dict) -> dict:
    out = {}
    for key in x.keys() | y.keys():
        v = a * x.get(key, 0) + b * y.get(key, 0)
        if v:
            out[key] = v
    return out


class LatticeBasis:
    """Sublattice of Z^dim kept in Hermite normal form.

    Rows are echelon with positive pivots and entries above each pivot
    reduced into [0, pivot). With ``track=True`` every row also carries its
    expression in the generators that were added, so membership queries can
    return coefficients against the original generator list.

    Instances are mutated by :meth:`add`; share only frozen copies between workers.
    """

    def __init__(self, dim: int, track: bool = False):
        if dim < 1:
            raise InvalidInput("lattice dimension must be >= 1")
        self.dim = dim
        self.track = track
        self.generators: list[tuple[int, ...]] = []
        self._rows: dict[int, list[int]] = {}
        self._trans: dict[int, dict[int, int]] = {}

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(self._rows[c]) for c in sorted(self._rows)]

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self._rows[c][c] for c in sorted(self._rows))

    @property
    def rank(self) -> int:
        return len(self._rows)

    def determinant(self) -> int:
        """Index in Z^dim if full rank, else 0."""
        return math.prod(self.pivots) if self.rank == self.dim else 0

    def _check(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.dim:
            raise InvalidInput(f"vector of length {len(v)} does not match lattice dimension {self.dim}")
        return [int(x) for x in v]

    def add(self, v: Sequence[int]) -> None:
        v = self._check(v)
        idx = len(self.generators)
        self.generators.append(tuple(v))
        t = {idx: 1} if self.track else {}
        for c in range(self.dim):
            if v[c] == 0:
                continue
            row = self._rows.get(c)
            if row is None:
                if v[c] < 0:
                    v = [-x for x in v]
                    t = {key: -val for key, val in t.items()}
                self._rows[c] = v
                self._trans[c] = t
                break
            a, b = row[c], v[c]
            if b % a == 0:
                q = b // a
                v = _axpy(-q, row, v)
                if self.track:
                    t = _comb(-q, self._trans[c], 1, t)
                continue
            g, x, y = xgcd(a, b)
            new_row = [x * ri + y * vi for ri, vi in zip(row, v)]
            v = [(a // g) * vi - (b // g) * ri for ri, vi in zip(row, v)]
            if self.track:
                tr = self._trans[c]
                self._trans[c], t = _comb(x, tr, y, t), _comb(-(b // g), tr, a // g, t)
            self._rows[c] = new_row
        self._reduce()

    def _reduce(self) -> None:
        cols = sorted(self._rows)
        for c in cols:
            p = self._rows[c]
            for c2 in cols:
                if c2 >= c:
                    break
                r = self._rows[c2]
                q = r[c] // p[c]
                if q:
                    self._rows[c2] = _axpy(-q, p, r)
                    if self.track:
                        self._trans[c2] = _comb(-q, self._trans[c], 1, self._trans[c2])

    def _solve(self, v: Sequence[int]) -> dict[int, int] | None:
        """Coefficients of v against the HNF rows, keyed by pivot column."""
        v = self._check(v)
        coeffs = {}
        for c in range(self.dim):
            if v[c] == 0:
                continue
            row = self._rows.get(c)
            if row is None:
                return None
            q, r = divmod(v[c], row[c])
            if r:
                return None
            coeffs[c] = q
            v = _axpy(-q, row, v)
        return coeffs

    def contains(self, v: Sequence[int]) -> bool:
        return self._solve(v) is not None

    def coefficients(self, v: Sequence[int]) -> list[int] | None:
        """Integer coefficients c with sum c_j * generators[j] == v, or None."""
        if not self.track:
            raise InvalidInput("coefficient extraction needs a lattice built with track=True")
        coeffs = self._solve(v)
        if coeffs is None:
            return None
        total: dict[int, int] = {}
        for c, q in coeffs.items():
            total = _comb(q, self._trans[c], 1, total)
        return [total.get(j, 0) for j in range(len(self.generators))]


def hnf(rows: Sequence[Sequence[int]], dim: int | None = None) -> LatticeBasis:
    """Hermite normal form of the row lattice, with transform bookkeeping."""
    if dim is None:
        if not rows:
            raise InvalidInput("dimension required for an empty generator list")
        dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise InvalidInput("all rows must have the same length")
    basis = LatticeBasis(dim, track=True)
    for r in rows:
        basis.add(r)
    return basis


def lattice_contains(basis: LatticeBasis, v: Sequence[int], with_coefficients: bool = False):
    """Membership test; with ``with_coefficients`` returns the coefficient list or None."""
    if with_coefficients:
        return basis.coefficients(v)
    return basis.contains(v)


@dataclass(frozen=True)
class Decomposition:
    """An integral identity ``target = sum(coeff * vector)``."""

    target: MultVector
    terms: tuple[tuple[int, MultVector], ...]

    def evaluate(self) -> MultVector:
        acc = [0] * len(self.target)
        for c, vec in self.terms:
            for i, x in enumerate(vec):
                acc[i] += c * x
        return tuple(acc)

    def is_valid(self, ctx: Context | None = None) -> bool:
        """Sums to target; with ``ctx``, every term is zero-sum and strictly shorter."""
        if self.evaluate() != tuple(self.target):
            return False
        if ctx is None:
            return True
        n = bm.length(self.target)
        return all(bm.is_zero_sum(ctx, v) and bm.length(v) < n for _, v in self.terms)

    def to_json(self) -> dict:
        return {
            "target": list(self.target),
            "terms": [{"coeff": c, "vector": list(v)} for c, v in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Decomposition":
        return cls(
            tuple(data["target"]),
            tuple((int(t["coeff"]), tuple(t["vector"])) for t in data["terms"]),
        )

    def __str__(self):
        parts = []
        for i, (c, v) in enumerate(self.terms):
            vec = "[" + ",".join(map(str, v)) + "]"
            mag = abs(c)
            body = vec if mag == 1 else f"{mag}{vec}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return "[" + ",".join(map(str, self.target)) + "] = " + " ".join(parts)


@dataclass(frozen=True)
class GroupAtomVerdict:
    is_group_atom: bool
    witness: Decomposition | None
    generating_set_size: int


def _require_nonzero_zero_sum(ctx: Context, m: Sequence[int]) -> MultVector:
    if len(m) != ctx.k:
        raise InvalidInput(f"vector {list(m)} has {len(m)} entries, context has {ctx.k} elements")
    m = tuple(int(x) for x in m)
    if not bm.is_zero_sum(ctx, m):
        raise InvalidInput(f"{list(m)} is not zero-sum in the given context")
    if not any(m):
        raise InvalidInput("the zero vector is neither an atom nor a group atom")
    return m


def is_group_atom(ctx: Context, m: Sequence[int], node_cap: int = bm.DEFAULT_NODE_CAP) -> GroupAtomVerdict:
    m = _require_nonzero_zero_sum(ctx, m)
    shorter = bm.atoms_by_length(ctx, max_len=bm.length(m) - 1, node_cap=node_cap)
    if not shorter:
        return GroupAtomVerdict(True, None, 0)
    basis = hnf(shorter)
    coeffs = basis.coefficients(m)
    if coeffs is None:
        return GroupAtomVerdict(True, None, len(shorter))
    terms = tuple((c, a) for c, a in zip(coeffs, shorter) if c)
    return GroupAtomVerdict(False, Decomposition(m, terms), len(shorter))


def certify_by_divisibility(ctx: Context, m: Sequence[int], i: int, d: int, node_cap: int = bm.DEFAULT_NODE_CAP) -> bool:
    """Sufficient test for m being a group atom, by a divisibility obstruction.

    ``i`` is a 1-based coordinate. Returns True only after checking by
    enumeration that (1) d divides the i-th entry of every atom with
    non-full support, (2) d does not divide m_i, and (3) no atom of full
    support is shorter than m. Any combination of shorter elements then
    uses only non-full-support atoms, whose i-th entries are all multiples of d.
    """
    m = _require_nonzero_zero_sum(ctx, m)
    if len(bm.support(m)) != ctx.k:
        raise InvalidInput(f"{list(m)} does not have full support")
    if not 1 <= i <= ctx.k:
        raise InvalidInput(f"coordinate index {i} out of range 1..{ctx.k}")
    if m[i - 1] % d == 0:
        return False
    atoms = bm.atoms_by_length(ctx, node_cap=node_cap)
    full = [a for a in atoms if all(a)]
    if any(a[i - 1] % d for a in atoms if not all(a)):
        return False
    return all(bm.length(m) <= bm.length(a) for a in full)


def find_scaling_unit(alpha: int, beta: int, gamma: int) -> int:
    """A positive l with l*beta = 1 mod alpha and gcd(l, alpha*gamma) = 1.

    Built as the CRT solution of x = beta^-1 (mod alpha), x = 1 (mod q) for
    every prime q of gamma not dividing alpha, which lies in 1..alpha*gamma-1.
    """
    if min(alpha, beta, gamma) < 1:
        raise InvalidInput("alpha, beta, gamma must be positive")
    if math.gcd(alpha, beta) != 1:
        raise InvalidInput(f"gcd(alpha, beta) = {math.gcd(alpha, beta)} != 1")
    residue = pow(beta, -1, alpha) if alpha > 1 else 0
    modulus = alpha
    for q in primefactors(gamma):
        if alpha % q:
            # solve x = residue (mod modulus), x = 1 (mod q)
            t = (1 - residue) * pow(modulus, -1, q) % q
            residue += modulus * t
            modulus *= q
    return residue or 1


@dataclass(frozen=True)
class ScalingRefutation:
    ell: int
    ell_inverse: int
    scaled: MultVector
    branch: str  # "scaled" or "complement"
    decomposition: Decomposition


def refute_by_scaling(ctx: Context, m: Sequence[int]) -> ScalingRefutation:
    """Write m as an integral combination of shorter monoid elements.

    Applies to k = 2s+1 >= 3 elements where g1..g_2s have order exp(G) and
    |m| > s*exp(G) + ord(g_k)/p, p the least prime of ord(g_k). Scaling m by
    a unit l (see :func:`find_scaling_unit`) and reducing gives m_l; then
    m = l^-1 * m_l - sum t_i ord(g_i) e_i, or the same with m_l replaced by
    its complementer, and one of m_l, m_l* is shorter than m.
    """
    m = _require_nonzero_zero_sum(ctx, m)
    k = ctx.k
    if k % 2 == 0 or k < 3:
        raise PreconditionError(f"need an odd number k >= 3 of elements, got {k}")
    s = (k - 1) // 2
    n1 = ctx.group.exponent
    orders = ctx.orders
    if any(o != n1 for o in orders[: 2 * s]):
        raise PreconditionError(f"the first {2 * s} elements must have order {n1}; orders are {list(orders)}")
    last = orders[-1]
    if last == 1:
        raise PreconditionError("the last element must be nonzero")
    p = min(primefactors(last))
    total = bm.length(m)
    threshold = s * n1 + last // p
    if total <= threshold:
        raise PreconditionError(f"|m| = {total} does not exceed s*n1 + ord(g_k)/p = {threshold}")

    d = math.gcd(total, last)
    b = (total - s * n1) // d
    ell = find_scaling_unit(last // d, b, d * n1 // last)
    ell_inv = pow(ell, -1, n1) if n1 > 1 else 1
    scaled = tuple(ell * x % o for x, o in zip(m, orders))
    t = [(ell_inv * y - x) // o for x, y, o in zip(m, scaled, orders)]
    units = ctx.unit_atoms()

    if bm.length(scaled) < total:
        terms = [(ell_inv, scaled)] + [(-ti, u) for ti, u in zip(t, units)]
        branch = "scaled"
    else:
        comp = bm.complementer(ctx, scaled)
        if bm.length(comp) >= total:
            raise AssertionError(f"neither m_l nor its complementer is shorter than {list(m)}; this is a bug")
        terms = [(-ell_inv, comp)] + [(ell_inv - ti, u) for ti, u in zip(t, units)]
        branch = "complement"
    dec = Decomposition(m, tuple((c, v) for c, v in terms if c and any(v)))
    if not dec.is_valid(ctx):
        raise AssertionError(f"scaling decomposition failed to verify: {dec}")
    return ScalingRefutation(ell, ell_inv, scaled, branch, dec)
