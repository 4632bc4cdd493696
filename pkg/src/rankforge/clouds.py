"""Point clouds, co-density, and Vietoris-Rips bifiltrations.

A bifiltration here is one-critical: each simplex carries a single birth
grade on a finite 2-d grid whose axes are the scale and sublevel
thresholds.  Simplices are cliques; the grade of a clique is (first
scale index admitting its diameter, first sublevel index admitting its
largest vertex value).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .grids import Grid, GridPoint, point_leq


class ParseError(ValueError):
    """Malformed point-cloud input, with a line/position hint."""


def load_point_cloud(data, fmt: str = "csv") -> np.ndarray:
    """Parse a cloud from CSV ("x,y" per line) or JSON {"points": [...]}.

    Point order is preserved.  Empty clouds and non-finite coordinates
    are rejected.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "csv":
        rows = []
        width = None
        for lineno, line in enumerate(data.splitlines(), start=1):
            if not line.strip():
                continue
            fields = line.split(",")
            try:
                row = [float(x) for x in fields]
            except ValueError:
                bad = next(f for f in fields if not _is_float(f))
                col = line.index(bad) + 1
                raise ParseError(
                    f"line {lineno}, column {col}: {bad.strip()!r} is not a number"
                ) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"line {lineno}: expected {width} coordinates, got {len(row)}")
            rows.append((lineno, row))
    elif fmt == "json":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
        if not isinstance(doc, dict) or "points" not in doc:
            raise ParseError("expected an object with a 'points' array")
        rows = [(i + 1, [float(x) for x in p]) for i, p in enumerate(doc["points"])]
        if any(len(r) != len(rows[0][1]) for _, r in rows):
            raise ParseError("points of mixed dimension")
    else:
        raise ParseError(f"unknown format {fmt!r}")
    if not rows:
        raise ParseError("empty cloud")
    for lineno, row in rows:
        if not all(np.isfinite(x) for x in row):
            raise ParseError(f"line {lineno}: non-finite coordinate")
    return np.array([r for _, r in rows], dtype=np.float64)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def codensity(points: np.ndarray, eps: float) -> np.ndarray:
    """Per point, the number of strictly farther other points."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = pairwise_distances(points)
    return (d > eps).sum(axis=1).astype(np.float64)


def uniform_value_thresholds(values, n: int) -> tuple[float, ...]:
    """n thresholds with constant consecutive difference, spanning values."""
    if n < 1:
        raise ValueError("need at least one threshold")
    lo, hi = float(np.min(values)), float(np.max(values))
    if n == 1:
        return (hi,)
    return tuple(lo + (hi - lo) * k / (n - 1) for k in range(n))


def equal_count_thresholds(values, n: int) -> tuple[float, ...]:
    """n strictly increasing thresholds at equally spaced quantiles."""
    if n < 1:
        raise ValueError("need at least one threshold")
    qs = np.quantile(np.asarray(values, dtype=np.float64), np.linspace(0.0, 1.0, n))
    out = []
    for q in qs:
        q = float(q)
        # strictly increasing axes only; nudge collided quantiles
        if out and q <= out[-1]:
            q = np.nextafter(out[-1], np.inf)
        out.append(q)
    return tuple(out)


@dataclass
class Bifiltration:
    """One-critical simplices with birth grades on a 2-d grid.

    ``simplices`` maps sorted vertex tuples to grades; faces are present
    with coordinatewise smaller-or-equal grades.  ``max_dim`` is the
    dimension cap the complex was built with (simplices of larger
    dimension were never considered, even if their cliques exist).
    """

    grid: Grid
    simplices: dict[tuple[int, ...], GridPoint]
    max_dim: int

    def __post_init__(self):
        if self.grid.dim != 2:
            raise ValueError("bifiltrations live on 2-d grids")
        for verts, grade in self.simplices.items():
            if list(verts) != sorted(set(verts)):
                raise ValueError(f"vertex tuple {verts} not sorted and distinct")
            if not self.grid.contains(grade):
                raise ValueError(f"grade {grade} outside grid")
            if len(verts) > 1:
                for k in range(len(verts)):
                    face = verts[:k] + verts[k + 1 :]
                    fg = self.simplices.get(face)
                    if fg is None:
                        raise ValueError(f"face {face} of {verts} missing")
                    if not point_leq(fg, grade):
                        raise ValueError(f"face {face} born after coface {verts}")

    def in_dimension(self, q: int) -> list[tuple[int, ...]]:
        return sorted(v for v in self.simplices if len(v) == q + 1)

    def to_json(self) -> dict:
        items = sorted(self.simplices.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {
            "grid": self.grid.to_json(),
            "simplices": [{"v": list(v), "grade": list(g)} for v, g in items],
            "max_dim": self.max_dim,
        }

    @staticmethod
    def from_json(obj: dict) -> "Bifiltration":
        grid = Grid.from_json(obj["grid"])
        simp = {tuple(e["v"]): tuple(e["grade"]) for e in obj["simplices"]}
        if len(simp) != len(obj["simplices"]):
            raise ValueError("duplicate simplex: bifiltration must be one-critical")
        md = obj.get("max_dim")
        if md is None:
            md = max((len(v) - 1 for v in simp), default=0)
        return Bifiltration(grid, simp, int(md))


def _first_index_geq(thresholds, value: float) -> int | None:
    for i, t in enumerate(thresholds):
        if value <= t:
            return i
    return None


def vr_bifiltration(
    points: np.ndarray,
    f,
    r_thresholds,
    s_thresholds,
    max_dim: int,
) -> Bifiltration:
    """Vietoris-Rips sublevel bifiltration on the threshold grid.

    A clique is born at (first r admitting its diameter, first s
    admitting its max vertex value); cliques never born within the grid
    are omitted, and only dimensions up to ``max_dim`` are built.
    """
    points = np.asarray(points, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if len(f) != len(points):
        raise ValueError(f"{len(points)} points but {len(f)} function values")
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    r_thresholds = tuple(float(r) for r in r_thresholds)
    s_thresholds = tuple(float(s) for s in s_thresholds)
    for name, th in (("r", r_thresholds), ("s", s_thresholds)):
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ValueError(f"{name}_thresholds must be strictly increasing")
    grid = Grid((len(r_thresholds), len(s_thresholds)), (r_thresholds, s_thresholds))
    dist = pairwise_distances(points)
    n = len(points)

    simplices: dict[tuple[int, ...], GridPoint] = {}
    # vertices: diameter 0, sublevel index from f
    i0 = _first_index_geq(r_thresholds, 0.0)
    vertex_s = {}
    if i0 is not None:
        for v in range(n):
            j = _first_index_geq(s_thresholds, f[v])
            if j is None:
                continue
            vertex_s[v] = j
            simplices[(v,)] = (i0, j)
    # grow cliques one vertex at a time, tracking diameter
    frontier = [((v,), 0.0) for v in sorted(vertex_s)]
    for _ in range(max_dim):
        nxt = []
        for verts, diam in frontier:
            for w in range(verts[-1] + 1, n):
                if w not in vertex_s:
                    continue
                d = max(dist[u, w] for u in verts)
                full = max(diam, d)
                i = _first_index_geq(r_thresholds, full)
                if i is None:
                    continue
                clique = verts + (w,)
                j = max(vertex_s[u] for u in clique)
                simplices[clique] = (i, j)
                nxt.append((clique, full))
        frontier = nxt
    return Bifiltration(grid, simplices, max_dim)
