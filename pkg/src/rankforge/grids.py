"""Finite product grids and their poset intervals.

A grid is the product of d finite totally ordered axes.  Points are index
tuples, compared componentwise.  An interval is a nonempty subset that is
convex (closed under going between comparable members) and connected (any
two members joined by a chain of pairwise-comparable members inside the
set).  Rectangles are the closed segments between two comparable points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

GridPoint = tuple[int, ...]


class IntervalError(ValueError):
    """Raised when a point set fails to be an interval."""


class NotConvex(IntervalError):
    pass


class NotConnected(IntervalError):
    pass


def point_leq(a: GridPoint, b: GridPoint) -> bool:
    return all(x <= y for x, y in zip(a, b))


def comparable(a: GridPoint, b: GridPoint) -> bool:
    return point_leq(a, b) or point_leq(b, a)


def point_join(a: GridPoint, b: GridPoint) -> GridPoint:
    return tuple(max(x, y) for x, y in zip(a, b))


def point_meet(a: GridPoint, b: GridPoint) -> GridPoint:
    return tuple(min(x, y) for x, y in zip(a, b))


# ----------------------------------------------------------------------
# Grid
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Product of ``d`` finite axes, ``sizes[i]`` points on axis ``i``.

    Parameters
    ----------
    sizes : tuple of int
        Number of points per axis, each >= 1.
    real_coords : tuple of tuple of float, optional
        Strictly increasing real coordinates per axis.  Defaults to the
        integer indices 0..n_i-1.
    """

    sizes: tuple[int, ...]
    real_coords: tuple[tuple[float, ...], ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) == 0 or any(n < 1 for n in sizes):
            raise ValueError(f"grid sizes must be positive, got {sizes}")
        if self.real_coords is None:
            coords = tuple(tuple(float(j) for j in range(n)) for n in sizes)
        else:
            coords = tuple(tuple(float(v) for v in axis) for axis in self.real_coords)
            if len(coords) != len(sizes):
                raise ValueError("real_coords must give one axis per size entry")
            for n, axis in zip(sizes, coords):
                if len(axis) != n:
                    raise ValueError("real_coords axis length mismatch")
                if any(u >= v for u, v in zip(axis, axis[1:])):
                    raise ValueError("real_coords must be strictly increasing")
        object.__setattr__(self, "real_coords", coords)

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @property
    def npoints(self) -> int:
        n = 1
        for s in self.sizes:
            n *= s
        return n

    def points(self):
        """All grid points in lexicographic order."""
        return itertools.product(*(range(n) for n in self.sizes))

    def contains(self, p: GridPoint) -> bool:
        return len(p) == self.dim and all(0 <= x < n for x, n in zip(p, self.sizes))

    def real(self, p: GridPoint) -> tuple[float, ...]:
        """Real coordinates of a grid point."""
        return tuple(self.real_coords[i][x] for i, x in enumerate(p))

    def top(self) -> GridPoint:
        return tuple(n - 1 for n in self.sizes)

    def bottom(self) -> GridPoint:
        return (0,) * self.dim

    def covers(self, p: GridPoint):
        """Covering successors p + e_i inside the grid, with the axis index."""
        for i in range(self.dim):
            if p[i] + 1 < self.sizes[i]:
                yield i, p[:i] + (p[i] + 1,) + p[i + 1 :]

    def shift_down_index(self, axis_idx: int, j: int, eps: float) -> int | None:
        """Largest index on an axis whose coordinate is <= coord[j] - eps.

        This one helper defines the downward shift used by smoothing; the
        upward shift is taken as its exact adjoint so the two never
        disagree through float rounding.
        """
        axis = self.real_coords[axis_idx]
        k = _last_leq(axis, axis[j] - eps)
        return None if k < 0 else k

    def shift_up_index(self, axis_idx: int, j: int, eps: float) -> int | None:
        """Least index k with shift_down_index(k) >= j, or None."""
        n = self.sizes[axis_idx]
        for k in range(j, n):
            down = self.shift_down_index(axis_idx, k, eps)
            if down is not None and down >= j:
                return k
        return None

    def floor_of_real(self, x) -> GridPoint | None:
        """Greatest grid point whose real coordinates are <= x, or None."""
        out = []
        for axis, v in zip(self.real_coords, x):
            j = _last_leq(axis, float(v))
            if j < 0:
                return None
            out.append(j)
        return tuple(out)

    def ceil_of_real(self, x) -> GridPoint | None:
        """Least grid point whose real coordinates are >= x, or None."""
        out = []
        for axis, v in zip(self.real_coords, x):
            j = _first_geq(axis, float(v))
            if j >= len(axis):
                return None
            out.append(j)
        return tuple(out)

    def to_json(self) -> dict:
        return {"sizes": list(self.sizes), "real_coords": [list(a) for a in self.real_coords]}

    @staticmethod
    def from_json(obj: dict) -> "Grid":
        rc = obj.get("real_coords")
        return Grid(tuple(obj["sizes"]), None if rc is None else tuple(tuple(a) for a in rc))


def eps_vector(grid: Grid, eps) -> tuple[float, ...]:
    """Broadcast a scalar or per-axis shift amount to a nonnegative tuple."""
    try:
        parts = tuple(float(e) for e in eps)
    except TypeError:
        parts = (float(eps),) * grid.dim
    if len(parts) != grid.dim:
        raise ValueError(f"eps needs {grid.dim} components, got {len(parts)}")
    if any(e < 0 for e in parts):
        raise ValueError("eps must be nonnegative")
    return parts


def _last_leq(axis, v):
    # rightmost index with axis[j] <= v; -1 when below the axis
    lo, hi = 0, len(axis) - 1
    if axis[0] > v:
        return -1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if axis[mid] <= v:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _first_geq(axis, v):
    lo, hi = 0, len(axis)
    while lo < hi:
        mid = (lo + hi) // 2
        if axis[mid] >= v:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ----------------------------------------------------------------------
# Rectangles
# ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Rectangle:
    """Closed segment between two comparable grid points."""

    lo: GridPoint
    hi: GridPoint

    def __post_init__(self):
        if not point_leq(self.lo, self.hi):
            raise ValueError(f"rectangle needs lo <= hi, got {self.lo}, {self.hi}")

    def points(self):
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def npoints(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= b - a + 1
        return n

    def contains_point(self, p: GridPoint) -> bool:
        return point_leq(self.lo, p) and point_leq(p, self.hi)

    def contains_rect(self, other: "Rectangle") -> bool:
        return point_leq(self.lo, other.lo) and point_leq(other.hi, self.hi)

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @staticmethod
    def from_json(obj: dict) -> "Rectangle":
        return Rectangle(tuple(obj["lo"]), tuple(obj["hi"]))


def enumerate_rectangles(grid: Grid) -> list[Rectangle]:
    """All rectangles of the grid, ordered by (lo, hi)."""
    out = []
    for lo in grid.points():
        his = itertools.product(*(range(a, n) for a, n in zip(lo, grid.sizes)))
        out.extend(Rectangle(lo, hi) for hi in his)
    out.sort()
    return out


# ----------------------------------------------------------------------
# Intervals
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Convex connected nonempty point set, stored as a sorted tuple.

    Construct through :func:`validate_interval` so the defining properties
    are checked; the constructor itself only normalizes ordering.
    """

    points: tuple[GridPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    def __len__(self):
        return len(self.points)

    def __contains__(self, p: GridPoint) -> bool:
        return p in self.point_set

    @property
    def point_set(self) -> frozenset:
        try:
            return self._pset  # type: ignore[attr-defined]
        except AttributeError:
            object.__setattr__(self, "_pset", frozenset(self.points))
            return self._pset  # type: ignore[attr-defined]

    def contains_interval(self, other: "Interval") -> bool:
        return self.point_set.issuperset(other.point_set)

    def contains_rect(self, rect: Rectangle) -> bool:
        return all(p in self.point_set for p in rect.points())

    def min_points(self) -> tuple[GridPoint, ...]:
        """Minimal members (the generators of the associated module)."""
        return tuple(
            p for p in self.points
            if not any(q != p and point_leq(q, p) for q in self.points)
        )

    def max_points(self) -> tuple[GridPoint, ...]:
        """Maximal members (the cogenerators)."""
        return tuple(
            p for p in self.points
            if not any(q != p and point_leq(p, q) for q in self.points)
        )

    def is_rectangle(self) -> Rectangle | None:
        """The equal rectangle when this interval is one, else None."""
        lo = tuple(min(xs) for xs in zip(*self.points))
        hi = tuple(max(xs) for xs in zip(*self.points))
        rect = Rectangle(lo, hi)
        return rect if rect.npoints() == len(self.points) else None

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points]}

    @staticmethod
    def from_json(obj: dict) -> "Interval":
        return Interval(tuple(tuple(p) for p in obj["points"]))


def validate_interval(grid: Grid, points) -> Interval:
    """Check that ``points`` is an interval of ``grid``.

    Raises
    ------
    IntervalError
        Empty input or points outside the grid.
    NotConvex
        Some point between two members is missing.
    NotConnected
        The comparability graph on the members is disconnected.
    """
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        raise IntervalError("interval must be nonempty")
    for p in pts:
        if not grid.contains(p):
            raise IntervalError(f"point {p} outside grid {grid.sizes}")
    pset = set(pts)
    for s in pts:
        for t in pts:
            if s != t and point_leq(s, t):
                for u in Rectangle(s, t).points():
                    if u not in pset:
                        raise NotConvex(f"missing {u} between {s} and {t}")
    # connectivity of the comparability graph, by flood fill
    seen = {pts[0]}
    frontier = [pts[0]]
    while frontier:
        p = frontier.pop()
        for q in pts:
            if q not in seen and comparable(p, q):
                seen.add(q)
                frontier.append(q)
    if len(seen) != len(pts):
        raise NotConnected(f"{len(pts) - len(seen)} points unreachable")
    return Interval(tuple(pts))


def rect_interval(rect: Rectangle) -> Interval:
    return Interval(tuple(rect.points()))


def interval_key(iv: Interval):
    """Canonical sort key: decreasing size, then lexicographic points."""
    return (-len(iv), iv.points)


# ----------------------------------------------------------------------
# Interval collections
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalCollection:
    """Ordered collection of intervals with containment structure.

    Intervals are sorted by decreasing point count, ties broken by the
    point tuple, so iterating the list visits supersets before subsets.
    ``strict_supersets[i]`` lists the indices j with intervals[j] a strict
    superset of intervals[i]; this is what the inversion recursion walks.
    """

    grid: Grid
    intervals: tuple[Interval, ...]
    strict_supersets: tuple[tuple[int, ...], ...] = field(compare=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        ivs = tuple(sorted(self.intervals, key=interval_key))
        object.__setattr__(self, "intervals", ivs)
        if self.strict_supersets is None:
            sups = []
            for i, iv in enumerate(ivs):
                row = tuple(
                    j for j, jv in enumerate(ivs)
                    if len(jv) > len(iv) and jv.contains_interval(iv)
                )
                sups.append(row)
            object.__setattr__(self, "strict_supersets", tuple(sups))

    def __len__(self):
        return len(self.intervals)

    def index_of(self, iv: Interval) -> int:
        return self.intervals.index(iv)


ENUMERATION_CAP = 12


def enumerate_intervals(grid: Grid, max_points: int | None = None) -> IntervalCollection:
    """All intervals of the grid, optionally capped at ``max_points`` members.

    Brute force over point subsets, so the grid must have at most
    ``ENUMERATION_CAP`` points in total; larger grids are refused.
    """
    if grid.npoints > ENUMERATION_CAP:
        raise ValueError(
            f"interval enumeration needs <= {ENUMERATION_CAP} grid points, "
            f"got {grid.npoints}"
        )
    pts = list(grid.points())
    limit = len(pts) if max_points is None else min(max_points, len(pts))
    found = []
    for r in range(1, limit + 1):
        for sub in itertools.combinations(pts, r):
            try:
                found.append(validate_interval(grid, sub))
            except IntervalError:
                continue
    return IntervalCollection(grid, tuple(found))


def rectangle_collection(grid: Grid) -> IntervalCollection:
    """The rectangles of the grid as an interval collection."""
    return IntervalCollection(grid, tuple(rect_interval(r) for r in enumerate_rectangles(grid)))


def maximal_rectangles(iv: Interval) -> list[Rectangle]:
    """Maximal rectangles contained in an interval, ordered by (lo, hi).

    Candidates are segments between a member and a larger member whose
    points all lie inside; maximal means contained in no other candidate.
    """
    cands = []
    for s in iv.points:
        for t in iv.points:
            if point_leq(s, t):
                rect = Rectangle(s, t)
                if iv.contains_rect(rect):
                    cands.append(rect)
    out = [
        r for r in cands
        if not any(q != r and q.contains_rect(r) for q in cands)
    ]
    out.sort()
    return out
