import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankforge.grids import (
    Grid,
    Interval,
    IntervalError,
    NotConnected,
    NotConvex,
    Rectangle,
    enumerate_intervals,
    enumerate_rectangles,
    interval_key,
    maximal_rectangles,
    point_leq,
    rect_interval,
    validate_interval,
)

# Oracle used throughout this file: direct restatement of the two defining
# properties, kept separate from the library's validator on purpose.


def oracle_is_interval(points):
    pts = set(points)
    if not pts:
        return False
    leq = lambda a, b: all(x <= y for x, y in zip(a, b))
    for s in pts:
        for t in pts:
            if leq(s, t):
                for u in itertools.product(*(range(a, b + 1) for a, b in zip(s, t))):
                    if u not in pts:
                        return False
    seen = {next(iter(pts))}
    grew = True
    while grew:
        grew = False
        for q in pts - seen:
            if any(leq(p, q) or leq(q, p) for p in seen):
                seen.add(q)
                grew = True
    return seen == pts


def oracle_enumerate(sizes, max_points):
    pts = list(itertools.product(*(range(n) for n in sizes)))
    out = []
    for r in range(1, max_points + 1):
        for sub in itertools.combinations(pts, r):
            if oracle_is_interval(sub):
                out.append(frozenset(sub))
    return out


def test_interval_counts_frozen():
    # Counts derived once from oracle_enumerate and frozen here.
    assert len(oracle_enumerate((2, 2), 4)) == 11
    assert len(enumerate_intervals(Grid((2, 2)), max_points=4)) == 11
    assert len(oracle_enumerate((3,), 3)) == 6
    assert len(enumerate_intervals(Grid((3,)))) == 6


def test_enumerate_matches_oracle_exactly():
    for sizes in [(2, 2), (3, 2), (4,), (2, 2, 2)]:
        npts = len(list(itertools.product(*(range(n) for n in sizes))))
        got = {iv.point_set for iv in enumerate_intervals(Grid(sizes)).intervals}
        want = set(oracle_enumerate(sizes, npts))
        assert got == want


def test_rectangle_counts_frozen():
    # prod_i C(n_i + 1, 2), checked against direct enumeration.
    assert len(enumerate_rectangles(Grid((2, 2)))) == 9
    assert len(enumerate_rectangles(Grid((5,)))) == 15


def test_enumeration_cap_refused():
    with pytest.raises(ValueError, match="enumeration"):
        enumerate_intervals(Grid((4, 4)))


def test_hook_is_interval():
    iv = validate_interval(Grid((2, 2)), [(0, 0), (0, 1), (1, 0)])
    assert iv.min_points() == ((0, 0),)
    assert set(iv.max_points()) == {(0, 1), (1, 0)}


def test_diagonal_pair_not_convex():
    with pytest.raises(NotConvex):
        validate_interval(Grid((2, 2)), [(0, 0), (1, 1)])


def test_antidiagonal_pair_not_connected():
    with pytest.raises(NotConnected):
        validate_interval(Grid((2, 2)), [(0, 1), (1, 0)])


def test_empty_refused():
    with pytest.raises(IntervalError):
        validate_interval(Grid((2, 2)), [])


def test_outside_grid_refused():
    with pytest.raises(IntervalError):
        validate_interval(Grid((2, 2)), [(0, 3)])


def test_maximal_rectangles_of_hook():
    iv = validate_interval(Grid((2, 2)), [(0, 0), (0, 1), (1, 0)])
    assert maximal_rectangles(iv) == [
        Rectangle((0, 0), (0, 1)),
        Rectangle((0, 0), (1, 0)),
    ]


def test_real_coords_default_and_custom():
    g = Grid((3, 2))
    assert g.real((2, 1)) == (2.0, 1.0)
    g2 = Grid((3, 2), ((0.0, 0.5, 2.0), (-1.0, 4.0)))
    assert g2.real((1, 1)) == (0.5, 4.0)
    with pytest.raises(ValueError, match="increasing"):
        Grid((2,), ((1.0, 1.0),))
    with pytest.raises(ValueError, match="mismatch"):
        Grid((3,), ((0.0, 1.0),))


def test_floor_ceil_of_real():
    g = Grid((4,), ((0.0, 1.0, 2.5, 4.0),))
    assert g.floor_of_real((2.4,)) == (1,)
    assert g.ceil_of_real((2.4,)) == (2,)
    assert g.floor_of_real((-0.1,)) is None
    assert g.ceil_of_real((4.1,)) is None
    assert g.floor_of_real((2.5,)) == (2,)
    assert g.ceil_of_real((2.5,)) == (2,)


def test_collection_order_supersets_first():
    coll = enumerate_intervals(Grid((2, 2)))
    sizes = [len(iv) for iv in coll.intervals]
    assert sizes == sorted(sizes, reverse=True)
    for i, sups in enumerate(coll.strict_supersets):
        for j in sups:
            assert j < i
            assert coll.intervals[j].contains_interval(coll.intervals[i])


def test_interval_json_round_trip():
    iv = validate_interval(Grid((2, 2)), [(1, 0), (0, 0), (0, 1)])
    assert iv.to_json() == {"points": [[0, 0], [0, 1], [1, 0]]}
    assert Interval.from_json(iv.to_json()) == iv
    r = Rectangle((0, 1), (1, 1))
    assert Rectangle.from_json(r.to_json()) == r


small_grids = st.sampled_from([(2, 2), (3, 2), (4,), (2, 2, 2), (3, 3)])


@given(small_grids, st.data())
def test_validator_agrees_with_oracle(sizes, data):
    pts = list(itertools.product(*(range(n) for n in sizes)))
    sub = data.draw(st.lists(st.sampled_from(pts), min_size=0, max_size=6))
    try:
        validate_interval(Grid(sizes), sub)
        ok = True
    except IntervalError:
        ok = False
    assert ok == oracle_is_interval(set(sub))


@given(small_grids, st.data())
def test_rectangles_are_intervals(sizes, data):
    g = Grid(sizes)
    rects = enumerate_rectangles(g)
    r = data.draw(st.sampled_from(rects))
    iv = validate_interval(g, list(r.points()))
    assert iv.is_rectangle() == r
    assert iv.min_points() == (r.lo,)
    assert iv.max_points() == (r.hi,)


@given(st.data())
def test_maximal_rectangles_cover_and_antichain(data):
    g = Grid((3, 3))
    coll = enumerate_intervals(g, max_points=6)
    iv = data.draw(st.sampled_from(coll.intervals))
    rects = maximal_rectangles(iv)
    covered = set()
    for r in rects:
        assert iv.contains_rect(r)
        covered.update(r.points())
    assert covered == set(iv.points)
    for a in rects:
        for b in rects:
            if a != b:
                assert not a.contains_rect(b)


def test_interval_key_orders_by_size_then_points():
    a = Interval(((0, 0),))
    b = Interval(((0, 0), (0, 1)))
    assert interval_key(b) < interval_key(a)
    assert rect_interval(Rectangle((0, 0), (1, 1))).points == (
        (0, 0), (0, 1), (1, 0), (1, 1),
    )
    assert point_leq((0, 1), (1, 1))
