"""Signed barcodes, line restrictions, and matching-distance machinery.

Bars are rectangle diagonals in real coordinates, signed by membership
in the positive or negative multiset.  Restriction to a strictly
monotone line sends each rectangle to a closed parameter interval; the
matching distance is the sampled sup of weighted bottleneck distances
between restricted barcodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import RECTANGLES, DecoratedDecomposition, SignedDecomposition
from .gf import gf_colspace, gf_matmul, gf_solve
from .grids import Grid, interval_key
from .modules import PersistenceModule

CANCEL_TOL = 1e-9


@dataclass(frozen=True)
class SignedBar:
    """A rectangle diagonal in real coordinates with sign and multiplicity."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    sign: int
    mult: int = 1
    group: int | None = None

    def __post_init__(self):
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"bar corners out of order: {self.lo} !<= {self.hi}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +-1, got {self.sign}")
        if self.mult < 1:
            raise ValueError("mult must be >= 1")

    def to_json(self) -> dict:
        out = {
            "lo": list(self.lo),
            "hi": list(self.hi),
            "sign": self.sign,
            "mult": self.mult,
        }
        if self.group is not None:
            out["group"] = self.group
        return out


@dataclass
class ProminenceDiagram:
    """Signed prominence vectors, one per bar per multiplicity unit."""

    vectors: list[tuple[float, ...]]

    def to_json(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors]}


@dataclass(frozen=True)
class MonotoneLine:
    """The line λ ↦ (1-λ)a + λb with every slope component positive."""

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if len(self.a) != len(self.b):
            raise ValueError("endpoints of mixed dimension")
        for i, (x, y) in enumerate(zip(self.a, self.b)):
            if not y > x:
                raise ValueError(
                    f"line not strictly monotone: coordinate {i} has a={x}, b={y}"
                )

    @property
    def omega(self) -> float:
        slopes = [y - x for x, y in zip(self.a, self.b)]
        return min(slopes) / max(slopes)

    def value(self, lam: float) -> tuple[float, ...]:
        return tuple(x + lam * (y - x) for x, y in zip(self.a, self.b))

    def crossing(self, axis: int, coord: float) -> float:
        return (coord - self.a[axis]) / (self.b[axis] - self.a[axis])

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}


@dataclass
class Barcode1D:
    """Multiset of closed parameter intervals, optionally signed."""

    bars: list[tuple[float, float]]
    signs: list[int] | None = None

    def __post_init__(self):
        for l, r in self.bars:
            if r < l:
                raise ValueError(f"bar [{l}, {r}] reversed")
        if self.signs is not None and len(self.signs) != len(self.bars):
            raise ValueError("signs and bars out of step")

    def to_json(self) -> dict:
        out = {"bars": [[l, r] for l, r in self.bars]}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        return out


# ----------------------------------------------------------------------
# Barcode views of decompositions
# ----------------------------------------------------------------------


def signed_barcode(dec: SignedDecomposition, grid: Grid | None = None) -> list[SignedBar]:
    """One bar per rectangle of the decomposition, in real coordinates."""
    if dec.kind != RECTANGLES:
        raise ValueError("signed_barcode reads rectangle decompositions")
    g = grid if grid is not None else dec.grid
    bars = []
    for sign, side in ((1, "positive"), (-1, "negative")):
        for rect, mult in dec.sorted_items(side):
            bars.append(SignedBar(g.real(rect.lo), g.real(rect.hi), sign, mult))
    bars.sort(key=lambda b: (b.lo, b.hi, -b.sign))
    return bars


def decorated_signed_barcode(dd: DecoratedDecomposition) -> list[SignedBar]:
    """Bars of a decorated decomposition, tagged by decoration group."""
    g = dd.base.grid
    keys = sorted(dd.decorations, key=interval_key)
    bars = []
    for gi, iv in enumerate(keys):
        group_sign = 1 if iv in dd.base.positive else -1
        group_mult = dd.base.positive.get(iv, 0) + dd.base.negative.get(iv, 0)
        for rect, rsign, rmult in dd.decorations[iv]:
            bars.append(
                SignedBar(
                    g.real(rect.lo),
                    g.real(rect.hi),
                    group_sign * rsign,
                    rmult * group_mult,
                    group=gi,
                )
            )
    return bars


def prominence_diagram(bars: list[SignedBar]) -> ProminenceDiagram:
    vectors = []
    for bar in bars:
        v = tuple(h - l for l, h in zip(bar.lo, bar.hi))
        if bar.sign < 0:
            v = tuple(-x for x in v)
        vectors.extend([v] * bar.mult)
    return ProminenceDiagram(vectors)


def min_prominence(vector) -> float:
    """Sup-norm distance from a prominence vector to the axis union."""
    return min(abs(x) for x in vector)


# ----------------------------------------------------------------------
# Restriction to strictly monotone lines
# ----------------------------------------------------------------------


def _bar_on_line(grid: Grid, rect, line: MonotoneLine):
    lo, hi = grid.real(rect.lo), grid.real(rect.hi)
    lam1 = max(line.crossing(i, c) for i, c in enumerate(lo))
    lam2 = min(line.crossing(i, c) for i, c in enumerate(hi))
    return (lam1, lam2) if lam1 <= lam2 else None


def _restricted_bars(dec: SignedDecomposition, side: str, line: MonotoneLine):
    out = []
    for rect, mult in dec.sorted_items(side):
        bar = _bar_on_line(dec.grid, rect, line)
        if bar is not None:
            out.extend([bar] * mult)
    return out


def restrict_to_line(
    dec: SignedDecomposition, line: MonotoneLine
) -> tuple[Barcode1D, Barcode1D]:
    """Fibered view of a rectangle decomposition along a line.

    Returns the signed pre-cancellation barcode and the cancelled form,
    where positive/negative intervals equal within tolerance are removed
    in pairs.
    """
    if dec.kind != RECTANGLES:
        raise ValueError("restrict_to_line reads rectangle decompositions")
    pos = _restricted_bars(dec, "positive", line)
    neg = _restricted_bars(dec, "negative", line)
    bars = sorted(pos) + sorted(neg)
    signs = [1] * len(pos) + [-1] * len(neg)

    keep_pos = sorted(pos)
    keep_neg = []
    for bar in sorted(neg):
        hit = next(
            (
                k
                for k, p in enumerate(keep_pos)
                if abs(p[0] - bar[0]) <= CANCEL_TOL and abs(p[1] - bar[1]) <= CANCEL_TOL
            ),
            None,
        )
        if hit is None:
            keep_neg.append(bar)
        else:
            keep_pos.pop(hit)
    cancelled = Barcode1D(keep_pos + keep_neg, [1] * len(keep_pos) + [-1] * len(keep_neg))
    return Barcode1D(bars, signs), cancelled


# ----------------------------------------------------------------------
# Classical one-parameter persistence of a chain of maps
# ----------------------------------------------------------------------


def chain_barcode(dims: list[int], mats: list[np.ndarray], p: int = 2):
    """Barcode of V_0 -> V_1 -> ... -> V_m, closed index pairs (birth, death).

    Basis-tracking with the elder rule: alive vectors are kept in birth
    order; images reduce against older survivors, so a vector whose
    image becomes dependent dies and its bar closes at the current index.
    """
    if len(mats) != max(len(dims) - 1, 0):
        raise ValueError(f"{len(dims)} spaces need {len(dims) - 1} maps, got {len(mats)}")
    bars = []
    alive = [(0, _unit(dims[0], i)) for i in range(dims[0])]
    for c, a in enumerate(mats):
        a = np.asarray(a, dtype=np.int64) % p
        if a.shape != (dims[c + 1], dims[c]):
            raise ValueError(f"map {c} has shape {a.shape}, expected {(dims[c + 1], dims[c])}")
        pivots: dict[int, np.ndarray] = {}
        survivors = []
        for birth, vec in alive:
            img = (a @ vec) % p
            img = _reduce_against(img, pivots, p)
            piv = _last_nonzero(img)
            if piv is None:
                bars.append((birth, c))
                continue
            img = (img * pow(int(img[piv]), p - 2, p)) % p
            pivots[piv] = img
            survivors.append((birth, img))
        for r in range(dims[c + 1]):
            if r not in pivots:
                vec = _unit(dims[c + 1], r)
                pivots[r] = vec
                survivors.append((c + 1, vec))
        alive = survivors
    last = len(dims) - 1
    bars.extend((birth, last) for birth, _ in alive)
    return sorted(bars)


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def _last_nonzero(v):
    nz = np.nonzero(v)[0]
    return None if nz.size == 0 else int(nz[-1])


def _reduce_against(v, pivots, p):
    while True:
        piv = _last_nonzero(v)
        if piv is None or piv not in pivots:
            return v
        v = (v - v[piv] * pivots[piv]) % p


def module_chain_barcode(m: PersistenceModule):
    """Index-pair barcode of a module on a one-axis grid."""
    if m.grid.dim != 1:
        raise ValueError("module_chain_barcode wants a 1-d grid")
    n = m.grid.sizes[0]
    dims = [m.dim((i,)) for i in range(n)]
    mats = [m.maps[((i,), (i + 1,))] for i in range(n - 1)]
    return chain_barcode(dims, mats, m.prime)


# ----------------------------------------------------------------------
# Fibered barcode oracle
# ----------------------------------------------------------------------

SNAP_TOL = 1e-9


def _snap_to_axes(grid: Grid, x):
    out = []
    for axis, v in zip(grid.real_coords, x):
        snapped = v
        for c in axis:
            if abs(v - c) <= SNAP_TOL * max(1.0, abs(c)):
                snapped = c
                break
        out.append(snapped)
    return tuple(out)


def _cmax(p, q):
    return tuple(max(x, y) for x, y in zip(p, q))


def fibered_barcode_oracle(m: PersistenceModule, line: MonotoneLine) -> Barcode1D:
    """Barcode of the module's restriction to a strictly monotone line.

    At each parameter where the line crosses a grid hyperplane, the
    restricted space is the image of the structure map from the floor to
    the ceiling of the crossing point; these sampled spaces form a chain
    whose classical barcode, reindexed by crossing parameters, is the
    fibered barcode.  Bars are closed, matching closed rectangles.
    """
    grid, p = m.grid, m.prime
    lams: list[float] = []
    for i in range(grid.dim):
        for c in grid.real_coords[i]:
            lams.append(line.crossing(i, c))
    lams.sort()
    samples = [lams[0]]
    for lam in lams[1:]:
        if lam - samples[-1] > 1e-12:
            samples.append(lam)

    corners = []
    prev_u = prev_v = None
    for lam in samples:
        x = _snap_to_axes(grid, line.value(lam))
        u = grid.floor_of_real(x)
        v = grid.ceil_of_real(x)
        if u is not None and prev_u is not None:
            u = _cmax(u, prev_u)
        if v is not None and prev_v is not None:
            v = _cmax(v, prev_v)
        corners.append((u, v))
        prev_u, prev_v = u, v

    basis = []
    for u, v in corners:
        if u is None or v is None:
            basis.append(np.zeros((0, 0), dtype=np.int64))
        else:
            basis.append(gf_colspace(m.path_map(u, v), p))
    dims = [b.shape[1] for b in basis]
    mats = []
    for c in range(len(samples) - 1):
        if dims[c] == 0 or dims[c + 1] == 0:
            mats.append(np.zeros((dims[c + 1], dims[c]), dtype=np.int64))
            continue
        carried = gf_matmul(m.path_map(corners[c][1], corners[c + 1][1]), basis[c], p)
        sol = gf_solve(basis[c + 1], carried, p)
        if sol is None:
            raise AssertionError("restricted image failed to absorb a carried vector")
        mats.append(sol)
    bars = [(samples[b], samples[d]) for b, d in chain_barcode(dims, mats, p)]
    return Barcode1D(sorted(bars))


# ----------------------------------------------------------------------
# Bottleneck distance
# ----------------------------------------------------------------------


def bottleneck(b1: Barcode1D, b2: Barcode1D) -> float:
    """Optimal partial-matching sup-norm distance, exact over candidates.

    Degenerate bars are dropped first: a bar of zero length deletes for
    free, and matching it to any other bar never beats deleting both.
    The answer is the least feasible value among the pairwise costs and
    half-lengths, found by bisection with bipartite matching tests.
    """
    bars1 = [b for b in b1.bars if b[1] - b[0] > 1e-12]
    bars2 = [b for b in b2.bars if b[1] - b[0] > 1e-12]
    if not bars1 and not bars2:
        return 0.0
    half1 = [(r - l) / 2 for l, r in bars1]
    half2 = [(r - l) / 2 for l, r in bars2]
    cost = [
        [max(abs(l1 - l2), abs(r1 - r2)) for l2, r2 in bars2] for l1, r1 in bars1
    ]
    cands = sorted(set([0.0] + half1 + half2 + [c for row in cost for c in row]))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matchable(cost, half1, half2, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def _matchable(cost, half1, half2, delta) -> bool:
    n1, n2 = len(half1), len(half2)
    total = n1 + n2

    def neighbors(u):
        if u < n1:
            for j in range(n2):
                if cost[u][j] <= delta:
                    yield j
            if half1[u] <= delta:
                yield from range(n2, total)
        else:
            for j in range(n2):
                if half2[j] <= delta:
                    yield j
            yield from range(n2, total)

    match_right = [-1] * total

    def augment(u, seen):
        for j in neighbors(u):
            if j in seen:
                continue
            seen.add(j)
            if match_right[j] < 0 or augment(match_right[j], seen):
                match_right[j] = u
                return True
        return False

    for u in range(total):
        if not augment(u, set()):
            return False
    return True


# ----------------------------------------------------------------------
# Matching distance over sampled lines
# ----------------------------------------------------------------------


def default_line_sampler(grid: Grid, resolution: int = 8) -> list[MonotoneLine]:
    """Lines from the lower-left boundary path to the upper-right one.

    Endpoints are placed at half-offset fractions along each path, so
    every pair is strictly monotone on a nondegenerate 2-d grid.
    """
    if grid.dim != 2:
        raise ValueError("the default sampler is for 2-d grids")
    (l0, h0), (l1, h1) = (
        (grid.real_coords[0][0], grid.real_coords[0][-1]),
        (grid.real_coords[1][0], grid.real_coords[1][-1]),
    )
    if h0 <= l0 or h1 <= l1:
        raise ValueError("degenerate axis: no strictly monotone line exists")
    span0, span1 = h0 - l0, h1 - l1
    total = span0 + span1

    def lower(t):
        # (l0, h1) down to (l0, l1), then right to (h0, l1)
        return (l0, h1 - t) if t < span1 else (l0 + (t - span1), l1)

    def upper(t):
        # (l0, h1) right to (h0, h1), then down to (h0, l1)
        return (l0 + t, h1) if t < span0 else (h0, h1 - (t - span0))

    steps = [total * (k + 0.5) / resolution for k in range(resolution)]
    lines = []
    for ta in steps:
        a = lower(ta)
        for tb in steps:
            b = upper(tb)
            if all(x < y for x, y in zip(a, b)):
                lines.append(MonotoneLine(a, b))
    return lines


def _combined_barcodes(dA: SignedDecomposition, dB: SignedDecomposition, line):
    # the stability pairing: positives of one side join negatives of the other
    bars1 = _restricted_bars(dA, "positive", line) + _restricted_bars(dB, "negative", line)
    bars2 = _restricted_bars(dB, "positive", line) + _restricted_bars(dA, "negative", line)
    return Barcode1D(sorted(bars1)), Barcode1D(sorted(bars2))


def matching_report(
    dA: SignedDecomposition, dB: SignedDecomposition, lines: list[MonotoneLine]
) -> dict:
    """Per-line weighted bottleneck distances and their maximum."""
    if not lines:
        raise ValueError("matching distance needs at least one line")
    if dA.grid != dB.grid:
        raise ValueError("decompositions live on different grids")
    if dA.kind != RECTANGLES or dB.kind != RECTANGLES:
        raise ValueError("matching distance reads rectangle decompositions")
    rows = []
    best = 0.0
    for line in lines:
        b1, b2 = _combined_barcodes(dA, dB, line)
        db = bottleneck(b1, b2)
        weighted = line.omega * db
        best = max(best, weighted)
        rows.append(
            {"line": line.to_json(), "omega": line.omega, "db": db, "weighted": weighted}
        )
    return {"lines": rows, "distance": best}


def matching_distance(
    dA: SignedDecomposition, dB: SignedDecomposition, lines: list[MonotoneLine]
) -> float:
    """Sampled lower bound of the matching distance between decompositions."""
    return matching_report(dA, dB, lines)["distance"]
