"""Point enumeration: brute grid scan vs digit-lifting, growth, serialization."""

import io
import math
from fractions import Fraction

import numpy as np
import pytest

from padicsums.counting import (
    BudgetError,
    PointSet,
    brute_points,
    count_report,
    lift_levels,
    lift_points,
    lift_system_levels,
    read_points,
    write_points,
)
from padicsums.polynomials import parse_poly


def grid_oracle(f, p, m):
    """The definition, written as plainly as possible."""
    q = p**m
    return sorted(
        (x, y) for x in range(q) for y in range(q) if f.evaluate(x, y) % q == 0
    )


# -- PointSet container -----------------------------------------------------------


def test_pointset_sorts_and_validates():
    ps = PointSet(5, 1, np.array([3, 0, 1]), np.array([4, 0, 2]), "manual")
    assert list(ps.pairs()) == [(0, 0), (1, 2), (3, 4)]
    assert (1, 2) in ps
    assert (1, 3) not in ps
    assert len(ps) == 3


def test_pointset_rejects_duplicates_and_out_of_range():
    with pytest.raises(ValueError):
        PointSet(5, 1, np.array([1, 1]), np.array([2, 2]), "manual")
    with pytest.raises(ValueError):
        PointSet(5, 1, np.array([5]), np.array([0]), "manual")


def test_pointset_reduce_mod():
    f = parse_poly("y - x^2")
    ps = lift_points(f, 3, 3)
    low = ps.reduce_mod(1)
    assert low.same_points(lift_points(f, 3, 1))


# -- frozen small cases -------------------------------------------------------------


def test_hyperbola_mod_4():
    f = parse_poly("x*y - 1")
    assert list(lift_points(f, 2, 2).pairs()) == [(1, 1), (3, 3)]
    assert list(brute_points(f, 2, 2).pairs()) == [(1, 1), (3, 3)]


def test_circle_mod_3():
    # x^2 + y^2 = 2 mod 3 forces both coordinates nonzero
    f = parse_poly("x^2 + y^2 + 1")
    assert list(brute_points(f, 3, 1).pairs()) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_unit_group_count():
    # xy = 1 has exactly phi(p^m) solutions
    f = parse_poly("x*y - 1")
    for p, m in ((3, 3), (5, 2), (7, 2)):
        assert len(lift_points(f, p, m)) == p ** (m - 1) * (p - 1)


def test_empty_curve():
    f = parse_poly("x^2 + 3*y^2 + 3")  # x^2 = -3(1 + y^2) is 0 mod 3 only if 3 | x
    counts = [len(level) for level in lift_levels(f, 3, 3)]
    assert counts == [3, 0, 0]


# -- the two enumerations agree -------------------------------------------------------


CORPUS = [
    "y - x^2",
    "y - x^3",
    "x*y - 1",
    "y^2 - x^3",
    "y^2 - x^3 - x",
    "x^2 + y^2 + 1",
    "y^2 - x^3 - 25",
    "y - x - x*y",
    "3*y + x^2",
    "x^3 + y^3 - 1",
    "y^2 - 2*x^4 + x",
]


@pytest.mark.parametrize("text", CORPUS)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_lift_matches_brute_and_grid(text, p):
    f = parse_poly(text)
    for m in range(1, 4):
        if p ** (2 * m) > 10**5:
            continue
        lifted = lift_points(f, p, m)
        brute = brute_points(f, p, m)
        assert lifted.same_points(brute), (text, p, m)
        assert list(lifted.pairs()) == grid_oracle(f, p, m), (text, p, m)


def test_lift_handles_singular_residues():
    # (0, 0) mod 5 is singular on y^2 = x^3; the tree must still be exact
    f = parse_poly("y^2 - x^3")
    for m in (2, 3, 4):
        assert lift_points(f, 5, m).same_points(brute_points(f, 5, m))


def test_lift_levels_are_consistent_projections():
    f = parse_poly("y^2 - x^3 - x")
    levels = list(lift_levels(f, 3, 4))
    for k in range(1, 4):
        higher = {(x % 3**k, y % 3**k) for x, y in levels[k].pairs()}
        assert higher <= set(levels[k - 1].pairs())


def test_brute_budget():
    f = parse_poly("y - x^2")
    with pytest.raises(BudgetError):
        brute_points(f, 5, 4, budget=100)


# -- growth and stabilization -----------------------------------------------------------


def test_smooth_curve_counts_grow_by_p():
    rep = count_report(parse_poly("y - x^3"), 5, 5)
    assert rep.counts == (5, 25, 125, 625, 3125)
    assert rep.stabilized and rep.stable_from == 1
    assert all(r == 5 for r in rep.ratios)
    assert rep.density == Fraction(1)


def test_singular_curve_stabilizes_later():
    # y^2 = x^3 + 49 over Z_7 has a depth-1 point at (0, 7)
    rep = count_report(parse_poly("y^2 - x^3 - 49"), 7, 6)
    assert rep.stabilized
    assert 1 < rep.stable_from <= 4
    for i in range(rep.stable_from - 1, len(rep.counts) - 1):
        assert rep.counts[i + 1] == 7 * rep.counts[i]
    assert rep.density == Fraction(rep.counts[-1], 7**6)


def test_report_of_empty_curve():
    rep = count_report(parse_poly("x^2 + 3*y^2 + 3"), 3, 4)
    assert rep.counts == (3, 0, 0, 0)
    assert rep.stabilized and rep.stable_from == 2
    assert rep.density == 0


# -- simultaneous systems ------------------------------------------------------------


def test_system_tree_matches_direct_scan():
    f = parse_poly("y - x^2")
    j = parse_poly("2*x")  # critical locus of (f, y): x = 0 on the curve
    levels = list(lift_system_levels([f, j], 5, 3))
    for k, pts in enumerate(levels, start=1):
        q = 5**k
        direct = [
            (x, y)
            for x in range(q)
            for y in range(q)
            if f.evaluate(x, y) % q == 0 and j.evaluate(x, y) % q == 0
        ]
        assert sorted(pts) == direct


def test_system_tree_budget():
    f = parse_poly("y - x^2")
    with pytest.raises(BudgetError):
        list(lift_system_levels([f], 5, 4, budget=10))


# -- serialization ---------------------------------------------------------------------


def test_write_read_round_trip():
    f = parse_poly("y - x^2")
    ps = lift_points(f, 5, 2)
    buf = io.StringIO()
    write_points(ps, f, buf, extra_header={"note": "unit test"})
    buf.seek(0)
    back, header = read_points(buf)
    assert back.same_points(ps)
    assert (header["p"], header["m"]) == ("5", "2")
    assert header["f"] == str(f)  # survives spaces in the polynomial text
    assert header["note"] == "unit test"


def test_read_points_parses_canonical_header():
    text = "# p=3 m=2 f=-x^2 + y\n0,0\n1,1\n4,7\n"
    ps, header = read_points(io.StringIO(text))
    assert header["f"] == "-x^2 + y"
    assert list(ps.pairs()) == [(0, 0), (1, 1), (4, 7)]
    assert ps.p == 3 and ps.m == 2
