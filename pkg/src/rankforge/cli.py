"""Command-line surface: build, decompose, query, render, serve.

Every subcommand reads and writes the package's JSON formats; outputs go
to --out or stdout with canonical serialization.  Exit codes: 0 success,
2 usage or validation problems, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .barcode import (
    MonotoneLine,
    decorated_signed_barcode,
    default_line_sampler,
    matching_report,
    prominence_diagram,
    restrict_to_line,
    signed_barcode,
)
from .clouds import (
    Bifiltration,
    ParseError,
    codensity,
    equal_count_thresholds,
    load_point_cloud,
    pairwise_distances,
    uniform_value_thresholds,
    vr_bifiltration,
)
from .decomposition import (
    SignedDecomposition,
    decorated_decomposition,
    epsilon_smoothing,
    minimal_decomposition_rectangles,
    mobius_minimal_decomposition,
    rank_query,
)
from .grids import IntervalError, enumerate_intervals
from .homology import homology_module
from .jsonio import canonical_dumps
from .modules import PersistenceModule
from .rank_invariant import generalized_rank_invariant, usual_rank
from .server import make_server
from .session import build_session, load_session, save_session
from .svg import emit_svg_barcode


def resolve_seed(cli_value: int) -> int:
    """RANKFORGE_SEED wins over the --seed flag when set."""
    env = os.environ.get("RANKFORGE_SEED")
    return int(env) if env is not None else int(cli_value)


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(obj: dict, out: str | None):
    _emit(canonical_dumps(obj), out)


def _parse_point(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _parse_line(text: str) -> MonotoneLine:
    if ":" in text:
        a_part, b_part = text.split(":", 1)
        a = tuple(float(x) for x in a_part.split(","))
        b = tuple(float(x) for x in b_part.split(","))
    else:
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 2:
            raise ValueError(
                "line format is a1,a2:b1,b2 (colon between endpoints); "
                "for one axis, a,b"
            )
        a, b = (parts[0],), (parts[1],)
    return MonotoneLine(a, b)


def _parse_eps(text: str):
    parts = tuple(float(x) for x in text.split(","))
    return parts[0] if len(parts) == 1 else parts


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def cmd_build(args) -> int:
    with open(args.points, "rb") as fh:
        raw = fh.read()
    fmt = args.format or ("json" if args.points.endswith(".json") else "csv")
    points = load_point_cloud(raw, fmt=fmt)
    if args.function == "codensity":
        values = codensity(points, args.eps)
    else:
        axis = args.axis if args.axis is not None else points.shape[1] - 1
        values = points[:, axis]
    dists = pairwise_distances(points)
    upper = dists[np.triu_indices_from(dists, k=1)]
    r_thresholds = uniform_value_thresholds(upper, args.r_steps)
    if args.s_spacing == "quantile":
        s_thresholds = equal_count_thresholds(values, args.s_steps)
    else:
        s_thresholds = uniform_value_thresholds(values, args.s_steps)
    bf = vr_bifiltration(points, values, r_thresholds, s_thresholds, args.max_dim)
    _emit_json(bf.to_json(), args.out)
    return 0


def cmd_homology(args) -> int:
    bf = Bifiltration.from_json(_load_json(args.input))
    m = homology_module(bf, args.degree, prime=args.prime)
    _emit_json(m.to_json(), args.out)
    return 0


def cmd_rank(args) -> int:
    m = PersistenceModule.from_json(_load_json(args.input))
    _emit_json(usual_rank(m).to_json(), args.out)
    return 0


def cmd_decompose(args) -> int:
    m = PersistenceModule.from_json(_load_json(args.input))
    if args.intervals:
        coll = enumerate_intervals(m.grid)
        gri = generalized_rank_invariant(m, coll)
        dec = mobius_minimal_decomposition(gri.values, coll)
    else:
        dec = minimal_decomposition_rectangles(usual_rank(m))
    _emit_json(dec.to_json(), args.out)
    return 0


def cmd_barcode(args) -> int:
    if args.decorated:
        m = PersistenceModule.from_json(_load_json(args.input))
        dd = decorated_decomposition(m, enumerate_intervals(m.grid))
        bars, grid = decorated_signed_barcode(dd), m.grid
    else:
        dec = SignedDecomposition.from_json(_load_json(args.input))
        bars, grid = signed_barcode(dec), dec.grid
    if args.svg is not None:
        _emit(emit_svg_barcode(bars, grid).to_xml(), args.svg)
    else:
        _emit_json({"bars": [b.to_json() for b in bars]}, args.json_out)
    return 0


def cmd_prominence(args) -> int:
    dec = SignedDecomposition.from_json(_load_json(args.input))
    diag = prominence_diagram(signed_barcode(dec))
    _emit_json(diag.to_json(), args.out)
    return 0


def cmd_restrict(args) -> int:
    dec = SignedDecomposition.from_json(_load_json(args.input))
    line = _parse_line(args.line)
    signed, cancelled = restrict_to_line(dec, line)
    _emit_json({"signed": signed.to_json(), "cancelled": cancelled.to_json()}, args.out)
    return 0


def cmd_smooth(args) -> int:
    dec = SignedDecomposition.from_json(_load_json(args.input))
    smoothed = epsilon_smoothing(dec, _parse_eps(args.eps))
    _emit_json(smoothed.to_json(), args.out)
    return 0


def cmd_query(args) -> int:
    dec = SignedDecomposition.from_json(_load_json(args.input))
    value = rank_query(dec, _parse_point(args.s), _parse_point(args.t))
    sys.stdout.write(f"{value}\n")
    return 0


def cmd_match(args) -> int:
    da = SignedDecomposition.from_json(_load_json(args.input_a))
    db = SignedDecomposition.from_json(_load_json(args.input_b))
    lines = default_line_sampler(da.grid, resolution=args.resolution)
    _emit_json(matching_report(da, db, lines), args.out)
    return 0


def cmd_serve(args) -> int:
    if args.session:
        session = load_session(args.input)
    else:
        m = PersistenceModule.from_json(_load_json(args.input))
        session = build_session(m, {"input": args.input})
    with make_server(session, args.port, static_dir=args.static) as httpd:
        # bind before announcing so --port 0 reports the chosen port
        print(
            f"serving on http://127.0.0.1:{httpd.server_address[1]}",
            file=sys.stderr,
            flush=True,
        )
        httpd.serve_forever()
    return 0


def cmd_save_session(args) -> int:
    m = PersistenceModule.from_json(_load_json(args.input))
    session = build_session(m, {"input": args.input})
    save_session(session, args.out)
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankforge",
        description="Rank invariants, signed decompositions, and barcode queries",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized scripts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="point cloud to Vietoris-Rips bifiltration")
    p.add_argument("points", help="point cloud file (csv rows or json)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--function", choices=("codensity", "coordinate"), default="codensity")
    p.add_argument("--eps", type=float, default=1.0, help="codensity radius")
    p.add_argument("--axis", type=int, default=None, help="coordinate function axis")
    p.add_argument("--r-steps", type=int, default=8)
    p.add_argument("--s-steps", type=int, default=8)
    p.add_argument("--s-spacing", choices=("uniform", "quantile"), default="uniform")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("homology", help="bifiltration to persistence module")
    p.add_argument("input")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("rank", help="module to usual rank invariant")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("decompose", help="module to minimal signed decomposition")
    p.add_argument("input")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--rectangles", action="store_true", default=True)
    group.add_argument("--intervals", action="store_true", default=False)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("barcode", help="decomposition to signed barcode")
    p.add_argument("input", help="decomposition file (module file with --decorated)")
    p.add_argument("--svg", default=None, help="write an SVG rendering here")
    p.add_argument("--json", dest="json_out", default=None, help="write JSON here")
    p.add_argument("--decorated", action="store_true")
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("prominence", help="decomposition to prominence diagram")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_prominence)

    p = sub.add_parser("restrict", help="restrict a decomposition to a line")
    p.add_argument("input")
    p.add_argument("--line", required=True, help="a1,a2:b1,b2 (or a,b on one axis)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("smooth", help="epsilon-smooth a decomposition")
    p.add_argument("input")
    p.add_argument("--eps", required=True, help="scalar or comma-separated per axis")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("query", help="rank between two grid points")
    p.add_argument("input")
    p.add_argument("--s", required=True, help="comma-separated grid indices")
    p.add_argument("--t", required=True, help="comma-separated grid indices")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("match", help="matching distance report for two decompositions")
    p.add_argument("input_a")
    p.add_argument("input_b")
    p.add_argument("--resolution", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("serve", help="read-only query service for one module")
    p.add_argument("input")
    p.add_argument("--port", type=int, default=8640)
    p.add_argument("--session", action="store_true", help="input is a session file")
    p.add_argument("--static", default=None, help="directory for the browser explorer")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("session", help="build and save a session file")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_save_session)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, IntervalError, ParseError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 0
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
