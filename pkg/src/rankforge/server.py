"""Read-only JSON-over-HTTP query service for one session.

One immutable session per process; every response is computed from it
with canonical serialization, so identical requests return identical
bytes.  A static directory can be mounted alongside /api for the
browser explorer.
"""

from __future__ import annotations

import mimetypes
import posixpath
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .barcode import MonotoneLine, prominence_diagram, restrict_to_line, signed_barcode
from .decomposition import epsilon_smoothing
from .jsonio import canonical_bytes
from .session import Session


def _parse_floats(text: str):
    return tuple(float(x) for x in text.split(","))


def _parse_ints(text: str):
    return tuple(int(x) for x in text.split(","))


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


class SessionApi:
    """Route handlers shared by the HTTP layer and direct tests."""

    def __init__(self, session: Session):
        self.session = session
        self.bars = signed_barcode(session.decomposition)
        self.barcode_bytes = canonical_bytes({"bars": [b.to_json() for b in self.bars]})

    def meta(self) -> bytes:
        g = self.session.module.grid
        dec = self.session.decomposition
        return canonical_bytes(
            {
                "sizes": list(g.sizes),
                "real_coords": [list(a) for a in g.real_coords],
                "prime": self.session.module.prime,
                "positive": sum(dec.positive.values()),
                "negative": sum(dec.negative.values()),
                "provenance": self.session.provenance,
            }
        )

    def barcode(self) -> bytes:
        return self.barcode_bytes

    def prominence(self) -> bytes:
        return canonical_bytes(prominence_diagram(self.bars).to_json())

    def rank(self, query: dict) -> bytes:
        g = self.session.module.grid
        s = _parse_ints(_single(query, "s"))
        t = _parse_ints(_single(query, "t"))
        if not (g.contains(s) and g.contains(t)):
            raise ApiError(f"points {s}, {t} outside the grid")
        if not _leq(s, t):
            raise ApiError(f"rank needs s <= t, got {s}, {t}")
        rs, rt = g.real(s), g.real(t)
        witnesses = [
            k for k, b in enumerate(self.bars) if _leq(b.lo, rs) and _leq(rt, b.hi)
        ]
        value = sum(self.bars[k].sign * self.bars[k].mult for k in witnesses)
        return canonical_bytes({"rank": value, "witness_bars": witnesses})

    def restrict(self, query: dict) -> bytes:
        a = _parse_floats(_single(query, "a"))
        b = _parse_floats(_single(query, "b"))
        g = self.session.module.grid
        if len(a) != g.dim or len(b) != g.dim:
            raise ApiError(f"line endpoints need {g.dim} coordinates")
        line = MonotoneLine(a, b)
        signed, cancelled = restrict_to_line(self.session.decomposition, line)
        return canonical_bytes(
            {"signed": signed.to_json(), "cancelled": cancelled.to_json()}
        )

    def smooth(self, query: dict) -> bytes:
        parts = _parse_floats(_single(query, "eps"))
        eps = parts[0] if len(parts) == 1 else parts
        smoothed = epsilon_smoothing(self.session.decomposition, eps)
        bars = signed_barcode(smoothed)
        return canonical_bytes({"bars": [b.to_json() for b in bars]})


class ApiError(ValueError):
    pass


def _single(query: dict, key: str) -> str:
    values = query.get(key)
    if not values:
        raise ApiError(f"missing query parameter {key!r}")
    return values[0]


def make_handler(session: Session, static_dir: str | None = None):
    api = SessionApi(session)
    root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _send(self, status: int, body: bytes, content_type="application/json"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, status: int, message: str):
            self._send(status, canonical_bytes({"error": message}))

        def do_GET(self):
            split = urlsplit(self.path)
            route, query = split.path, parse_qs(split.query)
            try:
                if route == "/api/meta":
                    return self._send(200, api.meta())
                if route == "/api/barcode":
                    return self._send(200, api.barcode())
                if route == "/api/prominence":
                    return self._send(200, api.prominence())
                if route == "/api/rank":
                    return self._send(200, api.rank(query))
                if route == "/api/restrict":
                    return self._send(200, api.restrict(query))
                if route == "/api/smooth":
                    return self._send(200, api.smooth(query))
            except (ApiError, ValueError) as exc:
                return self._send_error(400, str(exc))
            if route.startswith("/api/"):
                return self._send_error(404, f"unknown route {route}")
            return self._static(route)

        def _static(self, route: str):
            if root is None:
                return self._send_error(404, f"unknown route {route}")
            clean = posixpath.normpath(route.lstrip("/")) or "."
            if clean.startswith(".."):
                return self._send_error(404, "unknown route")
            target = root / ("index.html" if clean == "." else clean)
            if target.is_dir():
                target = target / "index.html"
            try:
                target = target.resolve()
                target.relative_to(root)
                body = target.read_bytes()
            except (OSError, ValueError):
                return self._send_error(404, f"unknown route {route}")
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            return self._send(200, body, content_type=ctype)

        def do_POST(self):
            self._send_error(405, "read-only service")

        do_PUT = do_POST
        do_DELETE = do_POST

    return Handler


def make_server(session: Session, port: int, static_dir: str | None = None):
    return ThreadingHTTPServer(("127.0.0.1", port), make_handler(session, static_dir))


def serve(session: Session, port: int, static_dir: str | None = None):
    with make_server(session, port, static_dir) as httpd:
        httpd.serve_forever()
