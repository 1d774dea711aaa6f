"""Command line and HTTP service surfaces."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from cnlasp.cli import main
from cnlasp.service import Pipeline, make_server

from conftest import FIXTURES, fixture_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- CLI -------------------------------------------------------------------------


def test_parse_student_spec(capsys):
    code, out, _ = run_cli(capsys, "parse", str(FIXTURES / "student.cnl"))
    assert code == 0
    assert "successful(A) :- student(A), work(A)." in out
    assert "answer(D) :- successful(D)." in out


def test_parse_empty_input(tmp_path, capsys):
    empty = tmp_path / "empty.cnl"
    empty.write_text("")
    code, out, _ = run_cli(capsys, "parse", str(empty))
    assert code == 0
    assert out.strip() == ""


def test_parse_unknown_word_diagnostics(tmp_path, capsys):
    bad = tmp_path / "bad.cnl"
    bad.write_text("Tom xyzzy.\n")
    code, out, err = run_cli(capsys, "parse", str(bad))
    assert code == 1
    assert "parse_error" in err
    assert "expected" in err  # lookahead categories listed


def test_verbalize_modified_student_program(capsys):
    code, out, _ = run_cli(capsys, "verbalize", str(FIXTURES / "student_modified.lp"))
    assert code == 0
    assert out == fixture_text("student_modified.cnl")


def test_verbalize_colouring_program(capsys):
    code, out, _ = run_cli(capsys, "verbalize", str(FIXTURES / "colouring.lp"))
    assert code == 0
    assert out == fixture_text("colouring.cnl")


def test_verbalize_unknown_symbol(tmp_path, capsys):
    bad = tmp_path / "bad.lp"
    bad.write_text("flurb(tom).\n")
    code, _, err = run_cli(capsys, "verbalize", str(bad))
    assert code == 1
    assert "unknown_symbol" in err and "flurb" in err


def test_roundtrip_student_spec(capsys):
    code, out, _ = run_cli(capsys, "roundtrip", str(FIXTURES / "student.cnl"))
    assert code == 0
    assert "equivalent: True" in out
    assert "answer sets equal: True" in out


def test_roundtrip_colouring_oracle_skipped(capsys):
    code, out, _ = run_cli(capsys, "roundtrip", str(FIXTURES / "colouring.cnl"))
    assert code == 0
    assert "equivalent: True" in out
    assert "oracle skipped" in out


def test_solve_student_program_json(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "solve",
                           str(FIXTURES / "student.lp"))
    assert code == 0
    result = json.loads(out)
    assert result["query_answers"] == ["tom"]
    assert len(result["answer_sets"]) == 1


def test_lookahead_cli(capsys):
    code, out, _ = run_cli(capsys, "lookahead", "Every")
    assert code == 0
    assert "noun:" in out and "student" in out


def test_custom_lexicon_flag(tmp_path, capsys):
    lex = tmp_path / "tiny.lex"
    lex.write_text("pname sg Zork zork named\niverb sg beeps beep pred1\n")
    spec = tmp_path / "spec.cnl"
    spec.write_text("Zork beeps.\n")
    code, out, _ = run_cli(capsys, "--lexicon", str(lex), "parse", str(spec))
    assert code == 0
    assert out.strip() == "beep(zork)."


# -- HTTP -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def server_port():
    server = make_server(Pipeline(), 0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield port
    server.shutdown()
    server.server_close()


def post(port, path, obj):
    req = urllib.request.Request(
        f"http://127.0.0.1:{port}{path}",
        data=json.dumps(obj).encode("utf-8"),
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_http_parse_matches_cli(server_port, pipeline):
    text = fixture_text("student.cnl")
    code, body = post(server_port, "/parse", {"text": text})
    assert code == 200
    assert body["asp"] == pipeline.parse(text)  # byte-identical to CLI path


def test_http_verbalize(server_port):
    code, body = post(server_port, "/verbalize", {"asp": fixture_text("student_modified.lp")})
    assert code == 200
    assert body["cnl"] == fixture_text("student_modified.cnl")


def test_http_roundtrip(server_port):
    code, body = post(server_port, "/roundtrip", {"text": fixture_text("student.cnl")})
    assert code == 200
    assert body["equivalent"] is True
    assert body["oracle"]["ran"] is True


def test_http_lookahead(server_port):
    code, body = post(server_port, "/lookahead", {"prefix": ["Every"]})
    assert code == 200
    cats = {c["category"] for c in body["continuations"]}
    assert "noun" in cats


def test_http_lookahead_with_context(server_port):
    code, body = post(server_port, "/lookahead",
                      {"prefix": ["The"], "context": "Tom is a student."})
    assert code == 200
    nouns = [c for c in body["continuations"] if c["category"] == "noun"]
    assert nouns and ["student"] in nouns[0]["forms"]


def test_http_solve(server_port):
    code, body = post(server_port, "/solve", {"asp": fixture_text("student.lp")})
    assert code == 200
    assert body["query_answers"] == ["tom"]


def test_http_error_object(server_port):
    code, body = post(server_port, "/parse", {"text": "Tom xyzzy."})
    assert code == 400
    assert body["kind"] == "parse_error"
    assert body["position"] == 1
    assert body["expected"]


def test_http_malformed_request(server_port):
    code, body = post(server_port, "/lookahead", {"prefix": "Every"})
    assert code == 400
    assert "kind" in body


def test_http_lexicon_endpoint(server_port):
    with urllib.request.urlopen(f"http://127.0.0.1:{server_port}/lexicon") as resp:
        body = json.loads(resp.read())
    assert any(e["symbol"] == "student" for e in body["entries"])


def test_http_concurrent_requests(server_port):
    """Parallel parses do not interfere: each gets fresh derivation state."""
    results = {}

    def hit(name, text):
        results[name] = post(server_port, "/parse", {"text": text})

    threads = [
        threading.Thread(target=hit, args=(i, "Tom is a student. Bob works."))
        for i in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    outs = {json.dumps(v) for v in results.values()}
    assert len(outs) == 1
    assert results[0][0] == 200


def test_roundtrip_negative_control(monkeypatch):
    """A deliberately corrupted verbaliser is caught: the report says the
    round trip is not equivalent."""
    pipe = Pipeline()
    real = pipe.verbalize

    def corrupted(asp_text: str) -> str:
        return real(asp_text).replace("Tom is a student.", "Bob is a student.")

    monkeypatch.setattr(pipe, "verbalize", corrupted)
    report = pipe.roundtrip(fixture_text("student.cnl"))
    assert report["equivalent"] is False
