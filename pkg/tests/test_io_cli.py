"""Serialization, SVG, session, HTTP service, and CLI surface tests."""

import json
import subprocess
import sys
import threading
import urllib.error
import urllib.request
import xml.etree.ElementTree as ET
from contextlib import contextmanager
from http.server import ThreadingHTTPServer
from pathlib import Path

import pytest

from rankforge.barcode import SignedBar, fibered_barcode_oracle, MonotoneLine, signed_barcode
from rankforge.cli import main, resolve_seed
from rankforge.decomposition import SignedDecomposition, minimal_decomposition_rectangles
from rankforge.grids import Grid, Interval, Rectangle
from rankforge.jsonio import canonical_dumps, round9
from rankforge.modules import explicit_module, interval_module
from rankforge.rank_invariant import usual_rank
from rankforge.server import make_handler
from rankforge.session import build_session, load_session, session_from_json
from rankforge.svg import emit_svg_barcode

GOLDEN = Path(__file__).parent / "golden"


def figure1_doc():
    return {
        "sizes": [5],
        "real_coords": [[1.0, 2.0, 3.0, 4.0, 5.0]],
        "dims": {"0": 1, "1": 2, "2": 1, "3": 2, "4": 2},
        "maps": {
            "0->1": [[1], [0]],
            "1->2": [[0, 1]],
            "2->3": [[1], [0]],
            "3->4": [[1, 0], [0, 1]],
        },
        "prime": 2,
    }


def staircase_module():
    gens = [(0, 2), (1, 1), (2, 0)]
    pts = tuple(
        (x, y)
        for x in range(4)
        for y in range(4)
        if any(x >= gx and y >= gy for gx, gy in gens)
    )
    return interval_module(Grid((4, 4)), Interval(pts))


# ----------------------------------------------------------------------
# canonical json
# ----------------------------------------------------------------------


def test_round9_idempotent_and_type_preserving():
    third = 1.0 / 3.0
    assert round9(third) == pytest.approx(0.333333333)
    assert round9(round9(third)) == round9(third)
    assert round9(0.1 + 0.2) == 0.3
    assert round9(7) == 7 and isinstance(round9(7), int)
    tree = {"a": [third, {"b": (1.0, 2)}]}
    assert round9(tree) == {"a": [round9(third), {"b": [1.0, 2]}]}


def test_canonical_dumps_deterministic_and_normalized():
    obj = {"z": 0.1 + 0.2, "a": [1.0 / 3.0]}
    first = canonical_dumps(obj)
    assert first == canonical_dumps(obj)
    # one normalization pass is a fixed point
    assert canonical_dumps(json.loads(first)) == first


# ----------------------------------------------------------------------
# svg
# ----------------------------------------------------------------------


def figure1_bars():
    m = explicit_module(figure1_doc())
    dec = minimal_decomposition_rectangles(usual_rank(m))
    return signed_barcode(dec), m.grid


def test_svg_figure1_three_blue_bars():
    bars, grid = figure1_bars()
    xml = emit_svg_barcode(bars, grid).to_xml()
    ET.fromstring(xml)
    assert xml.count('class="bar"') == 3
    assert xml.count("#1a5fb4") >= 3 and "#c01c28" not in xml
    assert xml.count("<circle") == 6


def test_svg_empty_decomposition_axes_only():
    g = Grid((3, 3))
    xml = emit_svg_barcode([], g).to_xml()
    ET.fromstring(xml)
    assert 'class="bar"' not in xml
    assert xml.count("<line") >= 2  # the two axes survive


def test_svg_multiplicity_thickening_and_label():
    g = Grid((3, 3))
    bars = [SignedBar((0.0, 0.0), (2.0, 2.0), 1, mult=3)]
    xml = emit_svg_barcode(bars, g).to_xml()
    assert 'stroke-width="6"' in xml and ">x3</text>" in xml


def test_svg_negative_bars_red():
    g = Grid((3, 3))
    bars = [SignedBar((0.0, 0.0), (1.0, 1.0), -1)]
    xml = emit_svg_barcode(bars, g).to_xml()
    assert "#c01c28" in xml


def test_svg_golden_decorated_hook():
    from rankforge.decomposition import decorated_decomposition
    from rankforge.barcode import decorated_signed_barcode
    from rankforge.grids import enumerate_intervals

    g = Grid((2, 2))
    hook = Interval(((0, 0), (0, 1), (1, 0)))
    dd = decorated_decomposition(interval_module(g, hook), enumerate_intervals(g))
    xml = emit_svg_barcode(decorated_signed_barcode(dd), g).to_xml()
    assert xml == (GOLDEN / "hook_decorated.svg").read_text()
    assert xml.count("#e66100") == 1  # one outline per interval key


def test_svg_rejects_three_axes():
    with pytest.raises(ValueError, match="1- and 2-axis"):
        emit_svg_barcode([], Grid((2, 2, 2)))


# ----------------------------------------------------------------------
# sessions
# ----------------------------------------------------------------------


def test_session_round_trip(tmp_path):
    from rankforge.session import save_session

    ses = build_session(explicit_module(figure1_doc()), {"input": "figure1"})
    path = tmp_path / "session.json"
    save_session(ses, str(path))
    back = load_session(str(path))
    assert back.decomposition.positive == ses.decomposition.positive
    assert back.rank.values == ses.rank.values
    assert back.provenance == {"input": "figure1"}


def test_session_load_rejects_tampered_decomposition():
    ses = build_session(explicit_module(figure1_doc()))
    doc = json.loads(canonical_dumps(ses.to_json()))
    doc["decomposition"]["positive"][0]["mult"] = 5
    with pytest.raises(ValueError, match="recompose"):
        session_from_json(doc)


def test_session_load_rejects_foreign_grid():
    ses = build_session(explicit_module(figure1_doc()))
    doc = json.loads(canonical_dumps(ses.to_json()))
    other = SignedDecomposition(Grid((3,)), {Rectangle((0,), (1,)): 1}, {})
    doc["decomposition"] = other.to_json()
    with pytest.raises(ValueError, match="grid"):
        session_from_json(doc)


# ----------------------------------------------------------------------
# http service
# ----------------------------------------------------------------------


@contextmanager
def run_server(session, static_dir=None):
    httpd = ThreadingHTTPServer(
        ("127.0.0.1", 0), make_handler(session, static_dir)
    )
    port = httpd.server_address[1]
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    try:
        yield port
    finally:
        httpd.shutdown()
        httpd.server_close()


def get(port, path):
    try:
        with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


@pytest.fixture(scope="module")
def figure1_server():
    ses = build_session(explicit_module(figure1_doc()), {"input": "figure1"})
    with run_server(ses) as port:
        yield port


def test_meta_endpoint(figure1_server):
    status, body = get(figure1_server, "/api/meta")
    assert status == 200
    meta = json.loads(body)
    assert meta["sizes"] == [5] and meta["prime"] == 2
    assert meta["positive"] == 3 and meta["negative"] == 0
    assert meta["provenance"] == {"input": "figure1"}


def test_barcode_bytes_deterministic_under_concurrency(figure1_server):
    results = []

    def fetch():
        results.append(get(figure1_server, "/api/barcode"))

    threads = [threading.Thread(target=fetch) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(status == 200 for status, _ in results)
    assert len({body for _, body in results}) == 1


def test_smooth_zero_matches_barcode_bytes(figure1_server):
    _, barcode = get(figure1_server, "/api/barcode")
    _, smooth0 = get(figure1_server, "/api/smooth?eps=0")
    assert smooth0 == barcode


def test_smooth_rejects_negative_eps(figure1_server):
    status, body = get(figure1_server, "/api/smooth?eps=-1")
    assert status == 400 and b"error" in body


def test_rank_endpoint_with_witnesses(figure1_server):
    status, body = get(figure1_server, "/api/rank?s=1&t=3")
    assert status == 200
    assert json.loads(body) == {"rank": 1, "witness_bars": [1]}


def test_rank_endpoint_at_a_point_gives_dims(figure1_server):
    _, body = get(figure1_server, "/api/rank?s=1&t=1")
    assert json.loads(body)["rank"] == 2  # pointwise dimension there
    _, body = get(figure1_server, "/api/rank?s=2&t=2")
    assert json.loads(body)["rank"] == 1


def test_rank_endpoint_validation(figure1_server):
    assert get(figure1_server, "/api/rank?s=3&t=1")[0] == 400
    assert get(figure1_server, "/api/rank?s=9&t=9")[0] == 400
    assert get(figure1_server, "/api/rank?s=x&t=1")[0] == 400
    assert get(figure1_server, "/api/rank?s=1")[0] == 400


def test_unknown_routes_and_methods(figure1_server):
    assert get(figure1_server, "/api/nothing")[0] == 404
    assert get(figure1_server, "/")[0] == 404
    req = urllib.request.Request(
        f"http://127.0.0.1:{figure1_server}/api/barcode", data=b"x", method="POST"
    )
    try:
        urllib.request.urlopen(req)
        status = 200
    except urllib.error.HTTPError as err:
        status = err.code
    assert status == 405


def test_restrict_endpoint_matches_oracle():
    m = staircase_module()
    ses = build_session(m)
    with run_server(ses) as port:
        status, body = get(port, "/api/restrict?a=0,0&b=3,3")
        assert status == 200
        payload = json.loads(body)
        cancelled = payload["cancelled"]["bars"]
        oracle = fibered_barcode_oracle(m, MonotoneLine((0.0, 0.0), (3.0, 3.0)))
        assert len(cancelled) == len(oracle.bars) == 1
        got, want = cancelled[0], oracle.bars[0]
        assert got[0] == pytest.approx(want[0], abs=1e-9)
        assert got[1] == pytest.approx(want[1], abs=1e-9)
        # pre-cancellation form keeps all five signed intervals
        assert len(payload["signed"]["bars"]) == 5
        status, body = get(port, "/api/restrict?a=0,0&b=1,0")
        assert status == 400 and b"coordinate 1" in body


def test_static_files_served_next_to_api(tmp_path):
    (tmp_path / "index.html").write_text("<html>explorer</html>")
    (tmp_path / "app.js").write_text("console.log(1)")
    ses = build_session(explicit_module(figure1_doc()))
    with run_server(ses, static_dir=str(tmp_path)) as port:
        status, body = get(port, "/")
        assert status == 200 and b"explorer" in body
        status, _ = get(port, "/app.js")
        assert status == 200
        assert get(port, "/missing.css")[0] == 404
        assert get(port, "/../outside")[0] == 404
        # api routes still win
        assert get(port, "/api/barcode")[0] == 200


# ----------------------------------------------------------------------
# cli
# ----------------------------------------------------------------------


def write_json(path, obj):
    path.write_text(canonical_dumps(obj))
    return str(path)


@pytest.fixture
def figure1_paths(tmp_path):
    module = write_json(tmp_path / "module.json", figure1_doc())
    dec = str(tmp_path / "dec.json")
    assert main(["decompose", module, "--out", dec]) == 0
    return module, dec, tmp_path


def test_cli_decompose_then_query_prints_one(figure1_paths, capsys):
    _, dec, _ = figure1_paths
    assert main(["query", dec, "--s", "2", "--t", "4"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_cli_query_validation_exit_codes(figure1_paths, capsys):
    _, dec, _ = figure1_paths
    assert main(["query", dec, "--s", "4", "--t", "2"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_rank_output(figure1_paths, capsys):
    module, _, _ = figure1_paths
    assert main(["rank", module]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert {"s": [1], "t": [3], "rank": 1} in payload["pairs"]


def test_cli_barcode_json_deterministic(figure1_paths):
    _, dec, tmp = figure1_paths
    out1, out2 = str(tmp / "b1.json"), str(tmp / "b2.json")
    assert main(["barcode", dec, "--json", out1]) == 0
    assert main(["barcode", dec, "--json", out2]) == 0
    assert Path(out1).read_bytes() == Path(out2).read_bytes()
    bars = json.loads(Path(out1).read_text())["bars"]
    assert [(b["lo"], b["hi"]) for b in bars] == [
        ([1.0], [2.0]),
        ([2.0], [5.0]),
        ([4.0], [5.0]),
    ]


def test_cli_barcode_svg_empty_decomposition(tmp_path):
    empty = SignedDecomposition(Grid((3, 3)), {}, {})
    dec = write_json(tmp_path / "empty.json", empty.to_json())
    out = str(tmp_path / "empty.svg")
    assert main(["barcode", dec, "--svg", out]) == 0
    xml = Path(out).read_text()
    ET.fromstring(xml)
    assert 'class="bar"' not in xml


def test_cli_barcode_decorated_svg(tmp_path):
    g = Grid((2, 2))
    hook = Interval(((0, 0), (0, 1), (1, 0)))
    module = write_json(tmp_path / "hook.json", interval_module(g, hook).to_json())
    out = str(tmp_path / "hook.svg")
    assert main(["barcode", module, "--decorated", "--svg", out]) == 0
    assert "#e66100" in Path(out).read_text()


def test_cli_restrict_nonmonotone_names_coordinate(tmp_path, capsys):
    dec2 = SignedDecomposition(Grid((3, 3)), {Rectangle((0, 0), (2, 2)): 1}, {})
    dec = write_json(tmp_path / "dec2.json", dec2.to_json())
    assert main(["restrict", dec, "--line", "0,0:1,0"]) == 2
    assert "coordinate 1" in capsys.readouterr().err


def test_cli_restrict_output(figure1_paths, capsys):
    _, dec, _ = figure1_paths
    assert main(["restrict", dec, "--line", "0.5,5.5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["cancelled"]["signs"] == [1, 1, 1]
    assert payload["signed"]["bars"] == payload["cancelled"]["bars"]


def test_cli_smooth(figure1_paths, capsys):
    _, dec, tmp = figure1_paths
    out = str(tmp / "smoothed.json")
    assert main(["smooth", dec, "--eps", "1.5", "--out", out]) == 0
    smoothed = SignedDecomposition.from_json(json.loads(Path(out).read_text()))
    assert sum(smoothed.positive.values()) == 1  # only [2,5] survives 1.5
    assert main(["smooth", dec, "--eps", "-2"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_match_report(tmp_path, capsys):
    g = Grid((3, 3))
    da = SignedDecomposition(g, {Rectangle((0, 0), (2, 2)): 1}, {})
    db = SignedDecomposition(g, {Rectangle((1, 1), (2, 2)): 1}, {})
    a = write_json(tmp_path / "a.json", da.to_json())
    b = write_json(tmp_path / "b.json", db.to_json())
    assert main(["match", a, b, "--resolution", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["distance"] > 0
    assert all(row["weighted"] <= report["distance"] for row in report["lines"])


def test_cli_decompose_intervals(tmp_path, capsys):
    g = Grid((2, 2))
    hook = Interval(((0, 0), (0, 1), (1, 0)))
    module = write_json(tmp_path / "hook.json", interval_module(g, hook).to_json())
    assert main(["decompose", module, "--intervals"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["collection"] == "explicit"
    assert payload["negative"] == []
    assert [e["mult"] for e in payload["positive"]] == [1]


def test_cli_build_homology_rank_pipeline(tmp_path, capsys):
    cloud = tmp_path / "cloud.csv"
    cloud.write_text("0,0\n0.2,0\n2,0\n2.2,0\n5,5\n")
    bf = str(tmp_path / "bf.json")
    module = str(tmp_path / "module.json")
    assert (
        main(
            [
                "build", str(cloud), "--function", "codensity", "--eps", "1.0",
                "--r-steps", "4", "--s-steps", "3", "--max-dim", "1", "--out", bf,
            ]
        )
        == 0
    )
    assert main(["homology", bf, "--degree", "0", "--out", module]) == 0
    assert main(["rank", module]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pairs"], "rank invariant should be nonempty"


def test_cli_missing_file_and_unknown_flag(tmp_path, capsys):
    assert main(["rank", str(tmp_path / "absent.json")]) == 2
    capsys.readouterr()
    assert main(["frobnicate"]) == 2


def test_cli_session_build_and_load(figure1_paths):
    module, _, tmp = figure1_paths
    out = str(tmp / "session.json")
    assert main(["session", module, "--out", out]) == 0
    ses = load_session(out)
    assert sum(ses.decomposition.positive.values()) == 3


def test_resolve_seed_env_override(monkeypatch):
    monkeypatch.delenv("RANKFORGE_SEED", raising=False)
    assert resolve_seed(7) == 7
    monkeypatch.setenv("RANKFORGE_SEED", "13")
    assert resolve_seed(7) == 13


def test_cli_process_level_determinism(figure1_paths):
    _, dec, _ = figure1_paths
    runs = [
        subprocess.run(
            [sys.executable, "-m", "rankforge.cli", "barcode", dec],
            capture_output=True,
            check=True,
        ).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1] and b'"bars"' in runs[0]
