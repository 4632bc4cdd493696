"""Rank invariants and signed barcodes for multi-parameter persistence.

The package computes usual and generalized rank invariants of persistence
modules over finite grids, inverts them into minimal signed decompositions,
and queries the results: rank probes, restrictions to monotone lines,
shift smoothing, bottleneck and matching distances.  Input modules come
either from explicit JSON descriptions or from Vietoris-Rips bifiltrations
of point clouds.

Modules of interest:

- ``grids``: grids, rectangles, intervals, interval enumeration
- ``modules``: persistence modules, presentations, smoothing
- ``rank_invariant``: usual and generalized ranks
- ``decomposition``: signed decompositions and their inversions
- ``barcode``: signed barcodes, line restrictions, distances
- ``clouds`` / ``homology``: point clouds to bifiltered homology
- ``session`` / ``server``: persisted sessions and the read-only HTTP api
- ``cli``: the ``rankforge`` command
"""

from .barcode import (
    MonotoneLine,
    bottleneck,
    fibered_barcode_oracle,
    matching_distance,
    restrict_to_line,
    signed_barcode,
)
from .decomposition import (
    SignedDecomposition,
    epsilon_smoothing,
    minimal_decomposition_rectangles,
    mobius_minimal_decomposition,
    rank_query,
)
from .grids import Grid, Interval, Rectangle, enumerate_intervals
from .modules import PersistenceModule, explicit_module, interval_module
from .rank_invariant import generalized_rank_invariant, usual_rank

__all__ = [
    "Grid",
    "Interval",
    "MonotoneLine",
    "PersistenceModule",
    "Rectangle",
    "SignedDecomposition",
    "bottleneck",
    "enumerate_intervals",
    "epsilon_smoothing",
    "explicit_module",
    "fibered_barcode_oracle",
    "generalized_rank_invariant",
    "interval_module",
    "matching_distance",
    "minimal_decomposition_rectangles",
    "mobius_minimal_decomposition",
    "rank_query",
    "restrict_to_line",
    "signed_barcode",
    "usual_rank",
]
