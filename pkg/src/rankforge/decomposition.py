"""Minimal signed rank decompositions.

A rank function is written as a signed count of interval containments:
positive and negative multisets whose containment-counting difference
reproduces the function.  Minimal means the two multisets are disjoint;
that pair is unique, and every other decomposition contains it.  Over
rectangles the coefficients come from a closed-form inclusion-exclusion;
over a general interval collection they come from Mobius inversion of
the containment order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .grids import (
    Grid,
    GridPoint,
    Interval,
    IntervalCollection,
    Rectangle,
    enumerate_rectangles,
    eps_vector,
    interval_key,
    maximal_rectangles,
    point_leq,
)
from .modules import PersistenceModule
from .rank_invariant import UsualRankInvariant, generalized_rank_invariant

RECTANGLES = "rectangles"
EXPLICIT = "explicit"


@dataclass
class SignedDecomposition:
    """Positive and negative interval multisets over a fixed grid.

    ``kind`` selects the key type: Rectangle keys for the implicit
    all-rectangles collection, Interval keys (members of ``collection``)
    for an explicit one.  Multiplicities are >= 1; zero entries are
    dropped on construction.
    """

    grid: Grid
    positive: dict
    negative: dict
    kind: str = RECTANGLES
    collection: IntervalCollection | None = None

    def __post_init__(self):
        if self.kind not in (RECTANGLES, EXPLICIT):
            raise ValueError(f"unknown decomposition kind {self.kind!r}")
        if self.kind == EXPLICIT and self.collection is None:
            raise ValueError("explicit decompositions need their interval collection")
        for name, side in (("positive", self.positive), ("negative", self.negative)):
            clean = {}
            for key, mult in side.items():
                mult = int(mult)
                if mult < 0:
                    raise ValueError(f"negative multiplicity in {name} for {key}")
                if mult == 0:
                    continue
                self._check_key(key)
                clean[key] = mult
            setattr(self, name, clean)

    def _check_key(self, key):
        if self.kind == RECTANGLES:
            if not isinstance(key, Rectangle):
                raise ValueError(f"rectangle decomposition got key {key!r}")
            if not (self.grid.contains(key.lo) and self.grid.contains(key.hi)):
                raise ValueError(f"rectangle {key} leaves the grid")
        else:
            if not isinstance(key, Interval):
                raise ValueError(f"explicit decomposition got key {key!r}")
            if key not in self.collection.intervals:
                raise ValueError(f"interval {key.points} not in the collection")

    @property
    def is_minimal(self) -> bool:
        return not set(self.positive) & set(self.negative)

    def total_bars(self) -> int:
        return sum(self.positive.values()) + sum(self.negative.values())

    def sorted_items(self, side: str):
        data = self.positive if side == "positive" else self.negative
        if self.kind == RECTANGLES:
            return sorted(data.items())
        return sorted(data.items(), key=lambda kv: interval_key(kv[0]))

    def to_json(self) -> dict:
        def dump(side):
            out = []
            for key, mult in self.sorted_items(side):
                out.append({"interval": key.to_json(), "mult": int(mult)})
            return out

        return {
            "collection": self.kind,
            "sizes": list(self.grid.sizes),
            "real_coords": [list(a) for a in self.grid.real_coords],
            "positive": dump("positive"),
            "negative": dump("negative"),
        }

    @staticmethod
    def from_json(obj: dict) -> "SignedDecomposition":
        grid = Grid(tuple(obj["sizes"]), tuple(tuple(a) for a in obj["real_coords"]))
        kind = obj["collection"]
        if kind == RECTANGLES:
            parse = Rectangle.from_json
            coll = None
        else:
            parse = Interval.from_json
            ivs = [Interval.from_json(e["interval"]) for e in obj["positive"] + obj["negative"]]
            coll = IntervalCollection(grid, tuple(set(ivs)))
        pos = {}
        for e in obj["positive"]:
            pos[parse(e["interval"])] = pos.get(parse(e["interval"]), 0) + int(e["mult"])
        neg = {}
        for e in obj["negative"]:
            neg[parse(e["interval"])] = neg.get(parse(e["interval"]), 0) + int(e["mult"])
        return SignedDecomposition(grid, pos, neg, kind, coll)


@dataclass
class MobiusContext:
    """Signed coefficients of a function on a containment-ordered collection."""

    collection: IntervalCollection
    alpha: dict[Interval, int] = field(default_factory=dict)


# ----------------------------------------------------------------------
# Rectangle route: closed-form inclusion-exclusion
# ----------------------------------------------------------------------


def _corner_offsets(d: int):
    # vertices of the unit hypercube, by increasing count of ones
    return sorted(itertools.product((0, 1), repeat=d), key=sum)


def minimal_decomposition_rectangles(rk: UsualRankInvariant) -> SignedDecomposition:
    """Minimal decomposition of a usual rank invariant by rectangles.

    The coefficient of [s,t] sums rk over the two corner neighborhoods,
      alpha = sum_{s' <= s, |s'-s|_inf <= 1} sum_{t' >= t, |t'-t|_inf <= 1}
              (-1)^{|s'-s|_1 + |t'-t|_1} rk(s', t'),
    with rank 0 outside the grid.  Positive coefficients fill the
    positive multiset, negated negative ones the negative multiset, so
    the key sets are disjoint by construction.
    """
    grid = rk.grid
    d = grid.dim
    offsets = _corner_offsets(d)
    positive = {}
    negative = {}
    for (s, t) in rk.values:
        alpha = 0
        for da in offsets:
            s2 = tuple(x - o for x, o in zip(s, da))
            sign_a = -1 if sum(da) % 2 else 1
            for db in offsets:
                t2 = tuple(x + o for x, o in zip(t, db))
                sign = sign_a * (-1 if sum(db) % 2 else 1)
                alpha += sign * rk.rank(s2, t2)
        if alpha > 0:
            positive[Rectangle(s, t)] = alpha
        elif alpha < 0:
            negative[Rectangle(s, t)] = -alpha
    return SignedDecomposition(grid, positive, negative, RECTANGLES)


# ----------------------------------------------------------------------
# General route: Mobius inversion over the containment order
# ----------------------------------------------------------------------


def mobius_context(r: dict, coll: IntervalCollection) -> MobiusContext:
    """Invert a rank function against containment on the collection.

    Walking intervals from containment-largest to smallest,
    alpha_I = r(I) - sum of alpha_J over strict supersets J of I; the
    collection's ordering is such a topological order already.
    """
    for key in r:
        if not isinstance(key, Interval) or key not in coll.intervals:
            raise ValueError(f"rank function key {key!r} outside the collection")
    alpha_by_index = [0] * len(coll.intervals)
    alpha = {}
    for i, iv in enumerate(coll.intervals):
        a = int(r.get(iv, 0)) - sum(alpha_by_index[j] for j in coll.strict_supersets[i])
        alpha_by_index[i] = a
        if a:
            alpha[iv] = a
    return MobiusContext(coll, alpha)


def mobius_minimal_decomposition(r: dict, coll: IntervalCollection) -> SignedDecomposition:
    """Minimal decomposition of a rank function over an interval collection."""
    ctx = mobius_context(r, coll)
    positive = {iv: a for iv, a in ctx.alpha.items() if a > 0}
    negative = {iv: -a for iv, a in ctx.alpha.items() if a < 0}
    return SignedDecomposition(coll.grid, positive, negative, EXPLICIT, coll)


# ----------------------------------------------------------------------
# Recomposition and minimality utilities
# ----------------------------------------------------------------------


def recompose(dec: SignedDecomposition) -> dict:
    """Containment-counting rank function of a decomposition.

    For each interval I of the ambient collection (all rectangles of the
    grid, or the explicit collection), the value is the multiplicity of
    positive members containing I minus that of negative members.
    """
    if dec.kind == RECTANGLES:
        domain = enumerate_rectangles(dec.grid)
        contains = lambda outer, m: outer.contains_rect(m)
    else:
        domain = dec.collection.intervals
        contains = lambda outer, m: outer.contains_interval(m)
    out = {}
    for member in domain:
        total = sum(mult for key, mult in dec.positive.items() if contains(key, member))
        total -= sum(mult for key, mult in dec.negative.items() if contains(key, member))
        out[member] = total
    return out


def remove_common(dec: SignedDecomposition) -> SignedDecomposition:
    """Cancel shared keys down to the minimal decomposition."""
    positive = dict(dec.positive)
    negative = dict(dec.negative)
    for key in set(positive) & set(negative):
        drop = min(positive[key], negative[key])
        positive[key] -= drop
        negative[key] -= drop
    return SignedDecomposition(dec.grid, positive, negative, dec.kind, dec.collection)


def rank_query(dec: SignedDecomposition, s: GridPoint, t: GridPoint) -> int:
    """Signed count of rectangles containing both s and t."""
    if dec.kind != RECTANGLES:
        raise ValueError("rank_query works on rectangle decompositions")
    if not point_leq(s, t):
        raise ValueError(f"rank_query needs s <= t, got {s}, {t}")
    total = sum(
        mult for r, mult in dec.positive.items()
        if r.contains_point(s) and r.contains_point(t)
    )
    total -= sum(
        mult for r, mult in dec.negative.items()
        if r.contains_point(s) and r.contains_point(t)
    )
    return total


def epsilon_smoothing(dec: SignedDecomposition, eps) -> SignedDecomposition:
    """Shift every rectangle's upper corner down by eps in real units.

    Each hi corner moves to the largest grid point whose real coordinates
    stay <= real(hi) - eps; rectangles whose shifted corner drops below
    their lo are removed, and common keys are cancelled afterwards.
    """
    if dec.kind != RECTANGLES:
        raise ValueError("epsilon_smoothing works on rectangle decompositions")
    grid = dec.grid
    parts = eps_vector(grid, eps)

    def shift(side):
        out = {}
        for rect, mult in side.items():
            hi = []
            for axis in range(grid.dim):
                j = grid.shift_down_index(axis, rect.hi[axis], parts[axis])
                if j is None or j < rect.lo[axis]:
                    hi = None
                    break
                hi.append(j)
            if hi is None:
                continue
            key = Rectangle(rect.lo, tuple(hi))
            out[key] = out.get(key, 0) + mult
        return out

    shifted = SignedDecomposition(grid, shift(dec.positive), shift(dec.negative), RECTANGLES)
    return remove_common(shifted)


# ----------------------------------------------------------------------
# Decorated decompositions
# ----------------------------------------------------------------------

MAXIMAL = "maximal"
FULL = "full"


@dataclass
class DecoratedDecomposition:
    """A general-collection decomposition with per-interval rectangle data.

    Decorations list signed rectangles per interval key (all positive in
    the maximal-rectangles style).  Cancellations between oppositely
    signed equal rectangles across groups are recorded and kept, never
    silently dropped.
    """

    base: SignedDecomposition
    style: str
    decorations: dict
    cancellations: list


def interval_rank_function(grid: Grid, iv: Interval) -> UsualRankInvariant:
    """Usual rank invariant of the indicator module of an interval."""
    values = {}
    for rect in enumerate_rectangles(grid):
        values[(rect.lo, rect.hi)] = 1 if iv.contains_rect(rect) else 0
    return UsualRankInvariant(grid, values)


def decorated_decomposition(
    m: PersistenceModule, coll: IntervalCollection, style: str = MAXIMAL
) -> DecoratedDecomposition:
    """Mobius decomposition over a collection, with rectangle decorations.

    Style "maximal" decorates each interval with its maximal rectangles;
    style "full" with the interval module's own minimal rectangle
    decomposition, signs multiplied through the group sign.
    """
    if style not in (MAXIMAL, FULL):
        raise ValueError(f"unknown decoration style {style!r}")
    gri = generalized_rank_invariant(m, coll)
    base = mobius_minimal_decomposition(gri.values, coll)
    decorations = {}
    flat = {}
    for side_sign, side in ((1, base.positive), (-1, base.negative)):
        for iv, mult in side.items():
            if style == MAXIMAL:
                decor = [(rect, 1, 1) for rect in maximal_rectangles(iv)]
            else:
                sub = minimal_decomposition_rectangles(interval_rank_function(base.grid, iv))
                decor = [(rect, 1, k) for rect, k in sub.sorted_items("positive")]
                decor += [(rect, -1, k) for rect, k in sub.sorted_items("negative")]
            decorations[iv] = decor
            for rect, rsign, rmult in decor:
                key = rect
                pos, neg = flat.get(key, (0, 0))
                if side_sign * rsign > 0:
                    pos += rmult * mult
                else:
                    neg += rmult * mult
                flat[key] = (pos, neg)
    cancellations = [
        (rect, pos, neg) for rect, (pos, neg) in sorted(flat.items()) if pos and neg
    ]
    return DecoratedDecomposition(base, style, decorations, cancellations)
