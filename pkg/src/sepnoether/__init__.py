"""Zero-sum combinatorics of finite abelian groups: block-monoid atoms,
Davenport constants, group atoms and the separating Noether number."""

__version__ = "0.1.0"

from .abelian import GroupSpec, canonicalize, d_star, order, parse_group
from .betasep import BetaSepResult, SweepOptions, beta_sep, max_group_atom_length, upper_bound
from .blockmonoid import Context, complementer, davenport, enumerate_atoms, is_atom, is_zero_sum
from .constructions import even_rank_construction, odd_rank_construction, verify_theorems
from .errors import CapExceeded, InvalidInput, ParseError, SepNoetherError
from .lattice import (
    certify_by_divisibility,
    find_scaling_unit,
    hnf,
    is_group_atom,
    lattice_contains,
    refute_by_scaling,
)

__all__ = [
    "BetaSepResult",
    "CapExceeded",
    "Context",
    "GroupSpec",
    "InvalidInput",
    "ParseError",
    "SepNoetherError",
    "SweepOptions",
    "beta_sep",
    "canonicalize",
    "certify_by_divisibility",
    "complementer",
    "d_star",
    "davenport",
    "enumerate_atoms",
    "even_rank_construction",
    "find_scaling_unit",
    "hnf",
    "is_atom",
    "is_group_atom",
    "is_zero_sum",
    "lattice_contains",
    "max_group_atom_length",
    "odd_rank_construction",
    "order",
    "parse_group",
    "refute_by_scaling",
    "upper_bound",
    "verify_theorems",
]
