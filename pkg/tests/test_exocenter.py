"""Exocenter maps, their boolean algebra, the center, and covers.

The expected map counts are frozen only after the brute-force filter over
all n**n self-maps confirms them; that filter stays the independent
oracle for the ideal-pair construction throughout.
"""

import pytest

from geadim import core
from geadim.errors import NotInExocenter
from geadim.exocenter import (
    brute_force_exomaps,
    center,
    cogea_check,
    exo_boolean_ops,
    exocenter,
    exocentral_cover,
)


def _fixture_sets():
    return [("T3", core.t3()), ("C3", core.c3()), ("B4", core.b4())]


@pytest.mark.parametrize("name,expected", [("T3", 2), ("C3", 2), ("B4", 4)])
def test_exocenter_sizes_against_oracle(name, expected):
    E = dict(_fixture_sets())[name]
    fast = exocenter(E)
    brute = brute_force_exomaps(E)
    assert fast == brute
    assert len(fast) == expected


def test_boolean_ops_b4():
    B4 = core.b4()
    S = exocenter(B4)
    pa = next(m for m in S if m.summand == (0, 1))
    pb = next(m for m in S if m.summand == (0, 2))
    ops = exo_boolean_ops(S, pa, pb)
    assert ops.complement == pb
    assert ops.meet.is_zero and ops.disjoint
    assert ops.join.is_identity
    assert not ops.leq
    same = exo_boolean_ops(S, pa, pa)
    assert same.meet == pa and same.leq


def test_boolean_ops_membership_required():
    B4, C3 = core.b4(), core.c3()
    S = exocenter(B4)
    alien = next(iter(exocenter(C3)))
    with pytest.raises(NotInExocenter):
        exo_boolean_ops(S, alien, S.zero)


@pytest.mark.parametrize(
    "name,expected",
    [("T3", ["0"]), ("C3", ["0", "2"]), ("B4", ["0", "a", "b", "1"])],
)
def test_center(name, expected):
    E = dict(_fixture_sets())[name]
    cen = center(E, exocenter(E))
    assert [E.names[c] for c, _ in cen] == expected


def test_exocentral_cover():
    B4 = core.b4()
    S = exocenter(B4)
    pa = next(m for m in S if m.summand == (0, 1))
    assert exocentral_cover(B4, S, 1) == pa
    assert exocentral_cover(B4, S, 0).is_zero
    C3 = core.c3()
    assert exocentral_cover(C3, exocenter(C3), 1).is_identity


@pytest.mark.parametrize("name", ["T3", "C3", "B4"])
def test_cogea_conditions(name):
    E = dict(_fixture_sets())[name]
    rep = cogea_check(E, exocenter(E))
    assert rep.co1 and rep.co2 and rep.gex_complete_boolean


def test_pointwise_lattice_ops():
    B4 = core.b4()
    S = exocenter(B4)
    for p in S:
        for q in S:
            m, j = S.meet(p, q), S.join(p, q)
            for e in range(B4.n):
                assert m(e) == B4.meet(p(e), q(e))
                assert j(e) == B4.join(p(e), q(e))
