"""Usual and generalized rank invariants of a persistence module.

The usual invariant stores the rank of the structure map for every
comparable pair of grid points.  The generalized invariant evaluates the
canonical limit-to-colimit map over arbitrary poset intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import gf_matmul, gf_nullspace, gf_rank
from .grids import Grid, GridPoint, Interval, IntervalCollection, point_leq
from .modules import PersistenceModule


@dataclass
class UsualRankInvariant:
    """Ranks for every comparable pair, with rank 0 outside the grid."""

    grid: Grid
    values: dict[tuple[GridPoint, GridPoint], int]

    def rank(self, s: GridPoint, t: GridPoint) -> int:
        """Total accessor: pairs leaving the grid count as rank 0."""
        if not (self.grid.contains(s) and self.grid.contains(t)):
            return 0
        return self.values[(s, t)]

    def to_json(self) -> dict:
        pairs = [
            {"s": list(s), "t": list(t), "rank": int(v)}
            for (s, t), v in sorted(self.values.items())
        ]
        return {"sizes": list(self.grid.sizes), "pairs": pairs}

    @staticmethod
    def from_json(obj: dict, grid: Grid | None = None) -> "UsualRankInvariant":
        if grid is None:
            grid = Grid(tuple(obj["sizes"]))
        values = {
            (tuple(e["s"]), tuple(e["t"])): int(e["rank"]) for e in obj["pairs"]
        }
        return UsualRankInvariant(grid, values)


@dataclass
class GeneralizedRankInvariant:
    """Generalized ranks over the intervals of a collection."""

    collection: IntervalCollection
    values: dict[Interval, int]

    def rank(self, iv: Interval) -> int:
        return self.values[iv]

    def to_json(self) -> dict:
        return {
            "intervals": [
                {"points": [list(p) for p in iv.points], "rank": int(self.values[iv])}
                for iv in self.collection.intervals
            ]
        }


def rank_between(m: PersistenceModule, s: GridPoint, t: GridPoint) -> int:
    """Rank of the structure map from s to t."""
    if not point_leq(s, t):
        raise ValueError(f"rank_between needs s <= t, got {s}, {t}")
    return gf_rank(m.path_map(s, t), m.prime)


def usual_rank(m: PersistenceModule) -> UsualRankInvariant:
    """Materialize ranks for every comparable pair of grid points.

    Composites are built once per pair by extending the staircase path of
    the nearest previously computed target, so each pair costs one matrix
    product and one elimination.
    """
    grid, p = m.grid, m.prime
    values = {}
    for s in grid.points():
        comps = {s: np.eye(m.dim(s), dtype=np.int64)}
        for t in grid.points():
            if t == s or not point_leq(s, t):
                continue
            axis = max(i for i in range(grid.dim) if t[i] > s[i])
            prev = t[:axis] + (t[axis] - 1,) + t[axis + 1 :]
            comps[t] = gf_matmul(m.maps[(prev, t)], comps[prev], p)
        for t, mat in comps.items():
            values[(s, t)] = gf_rank(mat, p)
    return UsualRankInvariant(grid, values)


def generalized_rank(m: PersistenceModule, iv: Interval) -> int:
    """Rank of the canonical map from the limit to the colimit over iv.

    The limit is the kernel of the section-constraint matrix (one block
    row per covering edge inside the interval, reading
    ``M(u <. v) x_u - x_v = 0``); the colimit is the cokernel of the
    analogous relation matrix.  Blocks follow the canonical point order
    of the interval, so the kernels are reproducible.
    """
    p = m.prime
    pts = iv.points
    offs = {}
    total = 0
    for q in pts:
        offs[q] = total
        total += m.dim(q)
    edges = [
        (u, v)
        for u in pts
        for _, v in m.grid.covers(u)
        if v in iv
    ]

    crows = sum(m.dim(v) for _, v in edges)
    constraint = np.zeros((crows, total), dtype=np.int64)
    r = 0
    for u, v in edges:
        dv = m.dim(v)
        mat = m.maps[(u, v)]
        constraint[r : r + dv, offs[u] : offs[u] + m.dim(u)] = mat
        constraint[r : r + dv, offs[v] : offs[v] + dv] -= np.eye(dv, dtype=np.int64)
        r += dv
    sections = gf_nullspace(constraint % p, p) if total else np.zeros((0, 0), dtype=np.int64)

    rcols = sum(m.dim(u) for u, _ in edges)
    relations = np.zeros((total, rcols), dtype=np.int64)
    c = 0
    for u, v in edges:
        du = m.dim(u)
        relations[offs[u] : offs[u] + du, c : c + du] = np.eye(du, dtype=np.int64)
        relations[offs[v] : offs[v] + m.dim(v), c : c + du] -= m.maps[(u, v)]
        c += du
    relations %= p

    base = pts[0]
    embedded = np.zeros((total, sections.shape[1]), dtype=np.int64)
    embedded[offs[base] : offs[base] + m.dim(base)] = sections[
        offs[base] : offs[base] + m.dim(base)
    ]
    stacked = np.hstack([embedded, relations])
    return gf_rank(stacked, p) - gf_rank(relations, p)


def generalized_rank_invariant(
    m: PersistenceModule, coll: IntervalCollection
) -> GeneralizedRankInvariant:
    """Generalized rank per interval of the collection."""
    values = {iv: generalized_rank(m, iv) for iv in coll.intervals}
    return GeneralizedRankInvariant(coll, values)
