"""Persistence modules over finite grids.

A module assigns a GF(p) vector space to every grid point and a matrix to
every covering edge, with all unit squares commuting.  Spaces are kept
implicitly as their dimensions; maps are dense int64 matrices, shaped
(target dim, source dim).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import (
    gf_colspace,
    gf_eye,
    gf_matmul,
    gf_normalize,
    gf_quotient_pivots,
    gf_reduce_mod,
    gf_solve,
)
from .grids import Grid, GridPoint, Interval, eps_vector, point_join, point_leq


class CommutativityViolation(ValueError):
    """A unit square of edge maps fails to commute."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass
class PersistenceModule:
    """Pointwise dimensions plus covering-edge matrices over GF(prime)."""

    grid: Grid
    dims: np.ndarray
    maps: dict[tuple[GridPoint, GridPoint], np.ndarray]
    prime: int = 2

    def dim(self, p: GridPoint) -> int:
        return int(self.dims[p])

    def edge(self, u: GridPoint, v: GridPoint) -> np.ndarray:
        return self.maps[(u, v)]

    @property
    def total_dim(self) -> int:
        return int(self.dims.sum())

    def path_map(self, s: GridPoint, t: GridPoint) -> np.ndarray:
        """Composite matrix along the staircase path from s to t.

        The path raises coordinate 1 fully, then coordinate 2, and so on;
        commutativity makes the choice immaterial.
        """
        if not point_leq(s, t):
            raise ValueError(f"need s <= t, got {s}, {t}")
        mat = gf_eye(self.dim(s))
        cur = list(s)
        for axis in range(self.grid.dim):
            while cur[axis] < t[axis]:
                u = tuple(cur)
                cur[axis] += 1
                mat = gf_matmul(self.maps[(u, tuple(cur))], mat, self.prime)
        return mat

    def verify_commutative(self):
        """Check every unit square exactly; raises CommutativityViolation."""
        for p in self.grid.points():
            succ = list(self.grid.covers(p))
            for a in range(len(succ)):
                for b in range(a + 1, len(succ)):
                    _, u = succ[a]
                    _, v = succ[b]
                    w = point_join(u, v)
                    lhs = gf_matmul(self.maps[(u, w)], self.maps[(p, u)], self.prime)
                    rhs = gf_matmul(self.maps[(v, w)], self.maps[(p, v)], self.prime)
                    if not np.array_equal(lhs, rhs):
                        raise CommutativityViolation(
                            f"square at {p} (axes via {u} and {v}) does not commute"
                        )

    def to_json(self) -> dict:
        dims = {}
        for p in self.grid.points():
            if self.dim(p):
                dims[_point_key(p)] = self.dim(p)
        maps = {}
        for (u, v), mat in sorted(self.maps.items()):
            if mat.shape[0] and mat.shape[1]:
                maps[f"{_point_key(u)}->{_point_key(v)}"] = [[int(x) for x in row] for row in mat]
        out = {"sizes": list(self.grid.sizes), "dims": dims, "maps": maps, "prime": self.prime}
        default = tuple(tuple(float(j) for j in range(n)) for n in self.grid.sizes)
        if self.grid.real_coords != default:
            out["real_coords"] = [list(a) for a in self.grid.real_coords]
        return out

    @staticmethod
    def from_json(obj: dict) -> "PersistenceModule":
        return explicit_module(obj)


def _point_key(p: GridPoint) -> str:
    return ",".join(str(x) for x in p)


def _parse_point(key: str) -> GridPoint:
    return tuple(int(x) for x in key.split(","))


# ----------------------------------------------------------------------
# Constructors
# ----------------------------------------------------------------------


def explicit_module(doc: dict) -> PersistenceModule:
    """Build and fully validate a module from its JSON document.

    The document carries sizes, a sparse dims map keyed "i,j,...", edge
    matrices keyed "i,j->i',j'", the prime, and optional real_coords.
    Missing dims are 0 and missing maps are zero matrices; shapes, field
    membership and commutativity are all enforced.
    """
    if not isinstance(doc, dict):
        raise ValueError("module document must be a JSON object")
    try:
        sizes = tuple(int(n) for n in doc["sizes"])
    except KeyError:
        raise ValueError("module document lacks 'sizes'") from None
    rc = doc.get("real_coords")
    grid = Grid(sizes, None if rc is None else tuple(tuple(a) for a in rc))
    dims = {_parse_point(k): int(v) for k, v in doc.get("dims", {}).items()}
    maps = {}
    for key, mat in doc.get("maps", {}).items():
        if "->" not in key:
            raise ValueError(f"bad map key {key!r}, expected 'src->dst'")
        src, dst = key.split("->", 1)
        maps[(_parse_point(src), _parse_point(dst))] = np.array(mat, dtype=np.int64)
    return module_from_parts(grid, dims, maps, prime=int(doc.get("prime", 2)))


def module_from_parts(grid: Grid, dims, maps, prime: int = 2) -> PersistenceModule:
    """Validating constructor from in-memory dims and edge matrices."""
    if not _is_prime(prime):
        raise ValueError(f"prime must be prime, got {prime}")
    arr = np.zeros(grid.sizes, dtype=np.int64)
    for p, dmn in dict(dims).items():
        p = tuple(p)
        if not grid.contains(p):
            raise ValueError(f"dims key {p} outside grid")
        if int(dmn) < 0:
            raise ValueError(f"negative dimension at {p}")
        arr[p] = int(dmn)
    given = {(tuple(u), tuple(v)): np.atleast_2d(np.asarray(m)) for (u, v), m in dict(maps).items()}
    edges = {}
    for p in grid.points():
        for _, q in grid.covers(p):
            shape = (int(arr[q]), int(arr[p]))
            mat = given.pop((p, q), None)
            if mat is None:
                mat = np.zeros(shape, dtype=np.int64)
            else:
                if mat.size == 0:
                    mat = mat.reshape(shape) if 0 in shape else mat
                if mat.shape != shape:
                    raise ValueError(f"map {p}->{q} has shape {mat.shape}, expected {shape}")
                mat = gf_normalize(mat, prime)
            edges[(p, q)] = mat
    if given:
        raise ValueError(f"maps given for non-covering pairs: {sorted(given)}")
    mod = PersistenceModule(grid, arr, edges, prime)
    mod.verify_commutative()
    return mod


def interval_module(grid: Grid, iv: Interval, prime: int = 2) -> PersistenceModule:
    """The indicator module of an interval: k on it, identities inside."""
    dims = np.zeros(grid.sizes, dtype=np.int64)
    for p in iv.points:
        dims[p] = 1
    maps = {}
    one = np.ones((1, 1), dtype=np.int64)
    for p in grid.points():
        for _, q in grid.covers(p):
            inside = p in iv and q in iv
            maps[(p, q)] = one if inside else np.zeros((int(dims[q]), int(dims[p])), dtype=np.int64)
    return PersistenceModule(grid, dims, maps, prime)


def direct_sum(mods: list[PersistenceModule]) -> PersistenceModule:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    grid, prime = mods[0].grid, mods[0].prime
    if any(m.grid != grid or m.prime != prime for m in mods):
        raise ValueError("summands must share grid and prime")
    dims = sum(m.dims for m in mods)
    maps = {}
    for p in grid.points():
        for _, q in grid.covers(p):
            maps[(p, q)] = _block_diag([m.maps[(p, q)] for m in mods])
    return PersistenceModule(grid, dims, maps, prime)


def _block_diag(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# ----------------------------------------------------------------------
# Finitely presented modules
# ----------------------------------------------------------------------


@dataclass
class Presentation:
    """Generators at grades, relations at grades with coefficient columns."""

    gen_grades: list[GridPoint]
    rel_grades: list[GridPoint] = field(default_factory=list)
    rel_coeffs: np.ndarray = None  # type: ignore[assignment]


def presented_module(grid: Grid, pres: Presentation, prime: int = 2) -> PersistenceModule:
    """Cokernel module of a graded presentation.

    The space at t is spanned by the generators born at or below t, modulo
    the relations born at or below t.  Edge maps are the canonical quotient
    maps, so commutativity holds by construction.
    """
    gens = [tuple(g) for g in pres.gen_grades]
    rels = [tuple(r) for r in pres.rel_grades]
    coeffs = pres.rel_coeffs
    if coeffs is None:
        coeffs = np.zeros((len(gens), len(rels)), dtype=np.int64)
    coeffs = gf_normalize(coeffs, prime)
    if coeffs.shape != (len(gens), len(rels)):
        raise ValueError("rel_coeffs shape mismatch")
    for j, rg in enumerate(rels):
        for i, gg in enumerate(gens):
            if coeffs[i, j] and not point_leq(gg, rg):
                raise ValueError(f"relation {j} at {rg} uses generator {i} born later at {gg}")
    local = {}
    dims = np.zeros(grid.sizes, dtype=np.int64)
    for t in grid.points():
        rows = [i for i, g in enumerate(gens) if point_leq(g, t)]
        cols = [j for j, r in enumerate(rels) if point_leq(r, t)]
        phi = coeffs[np.ix_(rows, cols)]
        reduced, piv = gf_quotient_pivots(phi, prime)
        basis = [k for k in range(len(rows)) if k not in piv]
        local[t] = (rows, reduced, piv, basis)
        dims[t] = len(basis)
    maps = {}
    for t in grid.points():
        rows_t, _, _, basis_t = local[t]
        for _, u in grid.covers(t):
            rows_u, red_u, piv_u, basis_u = local[u]
            pos = {g: k for k, g in enumerate(rows_u)}
            mat = np.zeros((len(basis_u), len(basis_t)), dtype=np.int64)
            for col, k in enumerate(basis_t):
                vec = np.zeros(len(rows_u), dtype=np.int64)
                vec[pos[rows_t[k]]] = 1
                vec = gf_reduce_mod(red_u, piv_u, vec, prime)
                mat[:, col] = vec[basis_u]
            maps[(t, u)] = mat
    return PersistenceModule(grid, dims, maps, prime)


def random_module(
    grid: Grid,
    rng: np.random.Generator,
    max_dim: int = 3,
    prime: int = 2,
    max_gens: int = 4,
    max_rels: int = 4,
) -> PersistenceModule:
    """Random finitely presented module with pointwise dims <= max_dim."""
    for attempt in range(64):
        ngens = int(rng.integers(1, max_gens + 1))
        gens = [tuple(int(rng.integers(0, n)) for n in grid.sizes) for _ in range(ngens)]
        nrels = int(rng.integers(0, max_rels + 1))
        rels = []
        coeffs = np.zeros((ngens, nrels), dtype=np.int64)
        for j in range(nrels):
            k = int(rng.integers(1, min(3, ngens) + 1))
            chosen = rng.choice(ngens, size=k, replace=False)
            grade = gens[int(chosen[0])]
            for i in chosen[1:]:
                grade = point_join(grade, gens[int(i)])
            grade = tuple(
                min(g + int(rng.integers(0, 2)), n - 1) for g, n in zip(grade, grid.sizes)
            )
            rels.append(grade)
            for i in chosen:
                coeffs[int(i), j] = int(rng.integers(1, prime))
        mod = presented_module(grid, Presentation(gens, rels, coeffs), prime)
        if int(mod.dims.max()) <= max_dim:
            return mod
        max_gens = max(1, max_gens - 1)
    raise RuntimeError("could not draw a module within the dimension bound")


# ----------------------------------------------------------------------
# Shift smoothing
# ----------------------------------------------------------------------


def shift_target(grid: Grid, t: GridPoint, eps) -> GridPoint | None:
    """Least grid point whose downward eps-shift clears t, axis by axis."""
    eps = eps_vector(grid, eps)
    out = []
    for axis in range(grid.dim):
        k = grid.shift_up_index(axis, t[axis], eps[axis])
        if k is None:
            return None
        out.append(k)
    return tuple(out)


def smooth_module(mod: PersistenceModule, eps) -> PersistenceModule:
    """The eps-shift smoothing, built explicitly as an image module.

    The space at t is the image of the structure map from t to its shift
    target; edge maps are restrictions.  The result is a module on the
    same grid.
    """
    grid, p = mod.grid, mod.prime
    basis = {}
    targets = {}
    dims = np.zeros(grid.sizes, dtype=np.int64)
    for t in grid.points():
        tgt = shift_target(grid, t, eps)
        targets[t] = tgt
        if tgt is None:
            basis[t] = np.zeros((0, 0), dtype=np.int64)
        else:
            basis[t] = gf_colspace(mod.path_map(t, tgt), p)
        dims[t] = basis[t].shape[1]
    maps = {}
    for t in grid.points():
        for _, u in grid.covers(t):
            if dims[t] == 0 or dims[u] == 0:
                maps[(t, u)] = np.zeros((int(dims[u]), int(dims[t])), dtype=np.int64)
                continue
            carried = gf_matmul(mod.path_map(targets[t], targets[u]), basis[t], p)
            sol = gf_solve(basis[u], carried, p)
            if sol is None:
                raise AssertionError("image basis failed to absorb a carried vector")
            maps[(t, u)] = sol
    return PersistenceModule(grid, dims, maps, p)
