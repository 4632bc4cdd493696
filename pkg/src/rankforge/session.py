"""Immutable bundles of a module with its rank invariant and decomposition.

A session is what the query service and the explorer work against.  On
load the stored decomposition is recomposed and checked against the
stored rank invariant, so a corrupted or hand-edited file cannot serve
inconsistent answers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .decomposition import SignedDecomposition, minimal_decomposition_rectangles, recompose
from .grids import Rectangle
from .jsonio import canonical_dumps
from .modules import PersistenceModule
from .rank_invariant import UsualRankInvariant, usual_rank


@dataclass(frozen=True)
class Session:
    module: PersistenceModule
    rank: UsualRankInvariant
    decomposition: SignedDecomposition
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "module": self.module.to_json(),
            "rank": self.rank.to_json(),
            "decomposition": self.decomposition.to_json(),
            "provenance": self.provenance,
        }


def build_session(module: PersistenceModule, provenance: dict | None = None) -> Session:
    rank = usual_rank(module)
    dec = minimal_decomposition_rectangles(rank)
    return Session(module, rank, dec, dict(provenance or {}))


def _verify(rank: UsualRankInvariant, dec: SignedDecomposition):
    counted = recompose(dec)
    for rect, value in counted.items():
        if rank.rank(rect.lo, rect.hi) != value:
            raise ValueError(
                "decomposition does not recompose to the stored rank invariant "
                f"at {rect.lo} -> {rect.hi}"
            )
    for (s, t) in rank.values:
        if rank.rank(s, t) != counted[Rectangle(s, t)]:
            raise ValueError(
                f"stored rank invariant has a pair {s} -> {t} the decomposition misses"
            )


def session_from_json(obj: dict) -> Session:
    module = PersistenceModule.from_json(obj["module"])
    dec = SignedDecomposition.from_json(obj["decomposition"])
    if dec.grid != module.grid:
        raise ValueError("decomposition grid differs from the module grid")
    rank = UsualRankInvariant.from_json(obj["rank"], module.grid)
    _verify(rank, dec)
    return Session(module, rank, dec, dict(obj.get("provenance", {})))


def save_session(session: Session, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(session.to_json()))


def load_session(path: str) -> Session:
    with open(path, encoding="utf-8") as fh:
        return session_from_json(json.load(fh))
