from __future__ import annotations

import dataclasses

import pytest

from sepnoether import blockmonoid as bm
from sepnoether.abelian import GroupSpec
from sepnoether.betasep import SweepOptions
from sepnoether.blockmonoid import Context
from sepnoether.constructions import (
    check_support_divisibility,
    closed_forms,
    construction,
    construction_lower_bound,
    even_rank_construction,
    hypotheses,
    min_full_support_length,
    odd_rank_construction,
    verify_theorems,
)
from sepnoether.errors import InvalidInput
from sepnoether.lattice import is_group_atom


class TestOdd:
    def test_c2_cubed(self):
        pkg = odd_rank_construction(GroupSpec((2, 2, 2)))
        assert pkg.ctx.k == 4 and pkg.m == (1, 1, 1, 1) and pkg.claimed_length == 4
        assert pkg.verify()

    def test_c3_cubed(self):
        pkg = odd_rank_construction(GroupSpec((3, 3, 3)))
        assert pkg.m == (2, 1, 2, 1) and pkg.claimed_length == 6
        assert pkg.verify()

    def test_cyclic(self):
        pkg = odd_rank_construction(GroupSpec((5,)))
        assert pkg.ctx.elements == ((1,),) and pkg.m == (5,) and pkg.claimed_length == 5
        assert pkg.table == "cyclic" and pkg.cert_divisor == 6
        assert pkg.verify()

    def test_wrong_parity(self):
        with pytest.raises(InvalidInput):
            odd_rank_construction(GroupSpec((2, 2)))


class TestEven:
    def test_klein(self):
        pkg = even_rank_construction(GroupSpec((2, 2)), 2)
        assert pkg.ctx.elements == ((1, 1), (1, 0), (0, 1))
        assert pkg.m == (1, 1, 1) and pkg.claimed_length == 3

    def test_c4_squared(self):
        pkg = even_rank_construction(GroupSpec((4, 4)), 2)
        assert pkg.m == (3, 1, 2) and pkg.claimed_length == 6
        assert pkg.verify()

    def test_c6_c2(self):
        # n1 - 1, 1, n2 / p
        pkg = even_rank_construction(GroupSpec((6, 2)), 2)
        assert pkg.m == (5, 1, 1) and pkg.claimed_length == 7
        assert pkg.verify() and is_group_atom(pkg.ctx, pkg.m).is_group_atom

    def test_odd_prime(self):
        pkg = even_rank_construction(GroupSpec((3, 3)))
        assert pkg.prime == 3 and pkg.m == (2, 1, 1)
        assert bm.is_zero_sum(pkg.ctx, pkg.m)
        assert pkg.verify()

    def test_prime_must_divide(self):
        with pytest.raises(InvalidInput):
            even_rank_construction(GroupSpec((4, 4)), 3)
        with pytest.raises(InvalidInput):
            even_rank_construction(GroupSpec((2, 2, 2)))

    def test_rank_four(self):
        pkg = even_rank_construction(GroupSpec((2, 2, 2, 2)))
        assert pkg.claimed_length == 5 and pkg.verify()


GROUPS = [(2,), (3,), (4,), (5,), (2, 2), (3, 3), (4, 4), (6, 6), (2, 2, 2), (3, 3, 3), (2, 2, 2, 2), (4, 2), (6, 2)]


@pytest.mark.parametrize("moduli", GROUPS)
def test_packages_certify(moduli):
    G = GroupSpec(moduli)
    pkg = construction(G)
    assert pkg.verify()
    assert is_group_atom(pkg.ctx, pkg.m).is_group_atom
    assert check_support_divisibility(pkg, pkg.cert_divisor)
    assert pkg.claimed_length == construction_lower_bound(G)
    assert min_full_support_length(pkg.ctx) == pkg.claimed_length
    data = pkg.to_json()
    assert data["length"] == pkg.claimed_length and data["certificate"]["index"] == pkg.cert_index


def test_divisibility_examples():
    assert check_support_divisibility(odd_rank_construction(GroupSpec((2, 2, 2))), 2)
    assert check_support_divisibility(even_rank_construction(GroupSpec((2, 2)), 2), 2)


def _mutate(pkg, row, elem):
    els = list(pkg.ctx.elements)
    els[row] = elem
    return dataclasses.replace(pkg, ctx=Context(pkg.ctx.group, tuple(els)))


def test_mutation_sign_flip():
    pkg = even_rank_construction(GroupSpec((4, 4)), 2)
    assert pkg.ctx.elements == ((1, 2), (1, 0), (0, 1))
    # g2 = e1 becomes -e1
    bad = _mutate(pkg, 1, (3, 0))
    assert not check_support_divisibility(bad, 2)


def test_mutation_coefficient():
    pkg = even_rank_construction(GroupSpec((4, 4)), 2)
    # f1 entry of g1 changed from n/p to 1: sub-support atoms stay even, the chain check catches it
    bad = _mutate(pkg, 0, (1, 1))
    assert all(a[1] % 2 == 0 for a in bm.enumerate_atoms(bad.ctx) if not all(a))
    assert not check_support_divisibility(bad, 2)


def test_mutation_caught_by_enumeration():
    pkg = even_rank_construction(GroupSpec((4, 4)), 2)
    # g2 = e1 doubled: [2,1,0] is a sub-support atom with an odd second entry
    bad = _mutate(pkg, 1, (2, 0))
    assert (2, 1, 0) in bm.enumerate_atoms(bad.ctx)
    assert not check_support_divisibility(bad, 2)


def test_hypotheses():
    h = hypotheses(GroupSpec((6, 2)))
    assert h["s"] == 1 and h["min_prime_of_exponent"] == 2 and h["min_prime_divides_n_r"]
    assert not h["top_s_plus_1_equal"] and h["tail_all_two"]
    h = hypotheses(GroupSpec((4, 4)))
    assert h["top_s_plus_1_equal"] and h["all_equal"]


def _entry(entries, key):
    return next(e for e in entries if e["theorem"] == key)


def test_closed_forms():
    cf = closed_forms(GroupSpec((4, 4)))
    assert _entry(cf, "1.2")["closed_form"] == 6
    assert _entry(cf, "6.2")["closed_form"] == 6
    assert not _entry(cf, "6.1")["applies"]
    cf = closed_forms(GroupSpec((6, 6, 2)))
    assert _entry(cf, "6.1")["closed_form"] == 12
    assert not _entry(cf, "1.2")["applies"]
    cf = closed_forms(GroupSpec((12, 4)))
    assert not _entry(cf, "6.2")["applies"]
    r = _entry(cf, "remark-6.3")
    assert r["relation"] == "<" and r["bound"] == 15 and r["closed_form"] is None
    r = _entry(closed_forms(GroupSpec((6, 2))), "remark-6.3")
    assert r["relation"] == "==" and r["closed_form"] == 7


def test_verify_klein():
    rep = verify_theorems(GroupSpec((2, 2)))
    e = _entry(rep.entries, "1.2")
    assert e["applies"] and e["computed"] == 3 == e["closed_form"] and e["status"] == "MATCH"
    assert rep.status == "MATCH" and rep.bounds_ok


def test_verify_c6_c2():
    rep = verify_theorems(GroupSpec((6, 2)))
    assert rep.computed == 7
    assert _entry(rep.entries, "6.2")["status"] == "SKIPPED"
    assert _entry(rep.entries, "remark-6.3")["status"] == "MATCH"
    assert rep.status == "MATCH"


def test_verify_skipped_sweep():
    rep = verify_theorems(GroupSpec((6, 6, 2)))
    assert rep.computed is None
    assert any("closed form only, sweep skipped" in n for n in rep.notes)
    assert rep.lower_bound == 12 == rep.upper_bound
    assert _entry(rep.entries, "6.1")["closed_form"] == 12
    assert rep.status == "MATCH"
    rep = verify_theorems(GroupSpec((12, 4)), sweep=False)
    assert rep.notes == ["closed form only, sweep skipped"]
    assert rep.to_json()["sweep"] == "skipped"


def test_verify_capped():
    rep = verify_theorems(GroupSpec((4, 4)), SweepOptions(sweep_cap=5))
    assert rep.computed is None and rep.status == "MATCH"
