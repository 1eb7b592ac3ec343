"""Finite abelian groups C_{n1} + ... + C_{nr} in invariant-factor form.

Elements are plain tuples of residues, one per cyclic factor.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapExceeded, InvalidInput, ParseError, TrivialGroupError

Element = tuple[int, ...]

DEFAULT_ELEMENT_CAP = 10**6


def invariant_factors(moduli: Sequence[int]) -> tuple[int, ...]:
    """Return the invariant factors n1, n2, ... (each dividing the previous).

    Factors equal to 1 are dropped. The input may be any list of cyclic
    orders; pairs are replaced by (lcm, gcd) until the chain condition holds.
    """
    ns = [int(n) for n in moduli]
    if any(n < 1 for n in ns):
        raise InvalidInput(f"cyclic orders must be positive, got {list(moduli)}")
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            a, b = ns[i], ns[j]
            g = math.gcd(a, b)
            ns[i], ns[j] = a // g * b, g
    return tuple(n for n in ns if n > 1)


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group with canonical moduli n1 >= n2 >= ... and n_{i+1} | n_i."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        ms = tuple(int(n) for n in self.moduli)
        if not ms:
            raise TrivialGroupError("the trivial group is not supported")
        if any(n < 2 for n in ms):
            raise InvalidInput(f"moduli must be >= 2, got {ms}")
        if any(ms[i] % ms[i + 1] for i in range(len(ms) - 1)):
            raise InvalidInput(f"moduli {ms} do not form a divisibility chain; use canonicalize()")
        object.__setattr__(self, "moduli", ms)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def exponent(self) -> int:
        return self.moduli[0]

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def is_cyclic(self) -> bool:
        return self.rank == 1

    def element(self, coords: Sequence[int]) -> Element:
        """Reduce ``coords`` into an element of this group."""
        if len(coords) != self.rank:
            raise InvalidInput(f"element {tuple(coords)} has {len(coords)} coordinates, group has rank {self.rank}")
        return tuple(int(c) % n for c, n in zip(coords, self.moduli))

    def contains(self, g: Sequence[int]) -> bool:
        return len(g) == self.rank and all(0 <= c < n for c, n in zip(g, self.moduli))

    def text(self) -> str:
        return ",".join(map(str, self.moduli))

    def __str__(self):
        return "x".join(f"C{n}" for n in self.moduli)


def canonicalize(moduli: Sequence[int]) -> GroupSpec:
    factors = invariant_factors(moduli)
    if not factors:
        raise TrivialGroupError(f"{list(moduli)} describes the trivial group")
    return GroupSpec(factors)


_ALIAS = re.compile(r"^c\d+(xc\d+)*$")


def parse_group_moduli(text: str) -> tuple[int, ...]:
    """Parse ``"12,4"`` or ``"C12xC4"`` into the raw list of cyclic orders."""
    s = text.strip().lower().replace(" ", "")
    try:
        if _ALIAS.match(s):
            return tuple(int(part[1:]) for part in s.split("x"))
        return tuple(int(part) for part in s.split(",") if part != "")
    except ValueError:
        pass
    raise ParseError(f"cannot parse group spec {text!r}; expected e.g. '12,4' or 'C12xC4'")


def parse_group(text: str) -> GroupSpec:
    moduli = parse_group_moduli(text)
    if not moduli:
        raise ParseError(f"empty group spec {text!r}")
    try:
        return canonicalize(moduli)
    except InvalidInput as exc:
        raise ParseError(str(exc)) from exc


def order(G: GroupSpec, g: Sequence[int]) -> int:
    """Least m >= 1 with m*g = 0."""
    return math.lcm(*(n // math.gcd(c, n) for c, n in zip(g, G.moduli)))


def add(G: GroupSpec, g: Sequence[int], h: Sequence[int]) -> Element:
    return tuple((a + b) % n for a, b, n in zip(g, h, G.moduli))


def negate(G: GroupSpec, g: Sequence[int]) -> Element:
    return tuple(-a % n for a, n in zip(g, G.moduli))


def scalar_mul(G: GroupSpec, c: int, g: Sequence[int]) -> Element:
    return tuple(c * a % n for a, n in zip(g, G.moduli))


def linear_combination(G: GroupSpec, coeffs: Sequence[int], elements: Sequence[Sequence[int]]) -> Element:
    acc = [0] * G.rank
    for c, g in zip(coeffs, elements):
        if c:
            for i, a in enumerate(g):
                acc[i] += c * a
    return tuple(a % n for a, n in zip(acc, G.moduli))


def d_star(G: GroupSpec) -> int:
    return sum(n - 1 for n in G.moduli)


def enumerate_elements(G: GroupSpec, cap: int = DEFAULT_ELEMENT_CAP) -> Iterator[Element]:
    """All elements in lexicographic order, identity first."""
    if G.order > cap:
        raise CapExceeded(f"|G| = {G.order} exceeds the element cap {cap}")
    return itertools.product(*(range(n) for n in G.moduli))


def subgroup_order(G: GroupSpec, gens: Sequence[Sequence[int]]) -> int:
    """Size of the subgroup generated by ``gens``."""
    seen = {G.identity}
    frontier = [G.identity]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(G, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def parse_elements(G: GroupSpec, text: str) -> tuple[Element, ...]:
    """Parse ``"(1,0);(1,1);(0,1)"``; coordinates refer to the canonical moduli."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("()[] ")
        if not chunk:
            continue
        try:
            coords = [int(c) for c in chunk.split(",")]
        except ValueError as exc:
            raise ParseError(f"cannot parse element {chunk!r}") from exc
        if len(coords) != G.rank:
            raise ParseError(f"element ({chunk}) has {len(coords)} coordinates, group {G} has rank {G.rank}")
        out.append(G.element(coords))
    if not out:
        raise ParseError(f"no elements in {text!r}")
    return tuple(out)
