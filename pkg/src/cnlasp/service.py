"""The pipeline facade and the HTTP service.

Everything the command line and the editor frontend need goes through one
object: parse CNL to ASP, verbalise ASP to CNL, round-trip check with the
oracle, lookahead, solve.  The HTTP layer is a thin JSON wrapper over it;
each request gets fresh derivation state, only the lexicon is shared.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from . import oracle
from .asp_io import (
    AspSyntaxError,
    UngroundFact,
    UnknownSymbol,
    UnsafeClause,
    parse_asp,
    read_program,
    write_program,
)
from .grammar import GenerationError, Grammar, ParseError
from .lexicon import Lexicon, MissingSurfaceForm, default_lexicon, load_lexicon_file
from .model import AspProgram, GroupStack, program_equiv
from .planner import plan
from .tokenizer import UnterminatedSentence, detokenize, tokenize


class Pipeline:
    """One lexicon, one grammar, all five operations."""

    def __init__(self, lexicon: Optional[Lexicon] = None,
                 atom_limit: int = oracle.DEFAULT_ATOM_LIMIT,
                 solver_command: Optional[str] = None):
        self.lexicon = lexicon if lexicon is not None else default_lexicon()
        self.grammar = Grammar(self.lexicon)
        self.atom_limit = atom_limit
        self.solver_command = solver_command

    @classmethod
    def from_lexicon_path(cls, path: Optional[str], **kw) -> "Pipeline":
        lex = load_lexicon_file(path) if path else default_lexicon()
        return cls(lex, **kw)

    # -- operations -----------------------------------------------------------

    def parse(self, text: str) -> str:
        """CNL text -> ASP text."""
        sentences = tokenize(text)
        form = self.grammar.parse_specification(sentences)
        return write_program(form).text

    def parse_to_program(self, text: str) -> AspProgram:
        form = self.grammar.parse_specification(tokenize(text))
        return write_program(form).program

    def verbalize(self, asp_text: str) -> str:
        """ASP text -> CNL text, one sentence per line."""
        rr = read_program(asp_text, self.lexicon)
        planned = plan(rr.form, self.grammar)
        sentences = self.grammar.generate_program(planned)
        out = detokenize(sentences)
        return out + "\n" if out else ""

    def roundtrip(self, text: str) -> dict:
        """parse -> verbalize -> parse, then compare: syntactically via
        program equivalence, semantically via the oracle when it fits."""
        program = self.parse_to_program(text)
        asp_text = program.text()
        cnl = self.verbalize(asp_text)
        reparsed = self.parse_to_program(cnl)
        equivalent = program_equiv(program, reparsed)
        report = {
            "equivalent": equivalent,
            "asp": asp_text,
            "cnl": cnl,
            "oracle": {"ran": False, "reason": None, "answer_sets_equal": None},
        }
        try:
            g1 = oracle.ground(program)
            g2 = oracle.ground(reparsed)
            if max(g1.atom_count(), g2.atom_count()) > self.atom_limit:
                raise oracle.AtomLimitExceeded(
                    max(g1.atom_count(), g2.atom_count()), self.atom_limit
                )
            s1 = oracle.answer_sets(g1, self.atom_limit)
            s2 = oracle.answer_sets(g2, self.atom_limit)
            equal = sorted(s1) == sorted(s2)
            report["oracle"] = {
                "ran": True, "reason": None, "answer_sets_equal": equal,
            }
            report["equivalent"] = equivalent and equal
        except (oracle.AtomLimitExceeded, oracle.UniverseTooLarge) as err:
            report["oracle"] = {
                "ran": False,
                "reason": str(err),
                "answer_sets_equal": None,
            }
        return report

    def lookahead(self, prefix, context_text: str = "") -> list:
        """Continuations for a sentence prefix, optionally in the context
        of preceding (already complete) sentences."""
        cl = ante = subst = None
        if context_text.strip():
            cl, ante, subst = GroupStack(), GroupStack(), {}
            for toks in tokenize(context_text):
                cl, ante, subst = self.grammar.parse_sentence(toks, cl, ante, subst)
        conts = self.grammar.lookahead(list(prefix), cl, ante, subst)
        return [
            {"category": c.category, "forms": [list(f) for f in c.forms]}
            for c in conts
        ]

    def solve(self, asp_text: str) -> dict:
        program = parse_asp(asp_text)
        sets = oracle.answer_sets(oracle.ground(program), self.atom_limit)
        result = {
            "answer_sets": [list(s) for s in sets],
            "query_answers": sorted(oracle.query_answers(sets)),
        }
        if self.solver_command:
            external = oracle.solve_with_command(asp_text, self.solver_command)
            result["external"] = [list(s) for s in external]
            result["external_agrees"] = sorted(
                tuple(s) for s in external
            ) == sorted(tuple(s) for s in sets)
        return result

    def lexicon_listing(self) -> list:
        return [
            {
                "category": e.category,
                "num": e.num,
                "wform": list(e.wform),
                "symbol": e.symbol,
                "kind": e.kind,
            }
            for e in self.lexicon.entries
        ]


#: error kinds the service reports in machine-readable form
_ERROR_KINDS = (
    (ParseError, "parse_error"),
    (GenerationError, "generation_error"),
    (UnknownSymbol, "unknown_symbol"),
    (MissingSurfaceForm, "missing_surface_form"),
    (AspSyntaxError, "asp_syntax_error"),
    (UnsafeClause, "unsafe_clause"),
    (UngroundFact, "unground_fact"),
    (UnterminatedSentence, "unterminated_sentence"),
    (oracle.AtomLimitExceeded, "atom_limit_exceeded"),
    (oracle.UniverseTooLarge, "universe_too_large"),
)


def error_object(err: Exception) -> dict:
    kind = "error"
    for cls, name in _ERROR_KINDS:
        if isinstance(err, cls):
            kind = name
            break
    obj = {"kind": kind, "message": str(err)}
    if isinstance(err, ParseError):
        obj["position"] = err.position
        obj["sentence_index"] = err.sentence_index
        obj["expected"] = [
            {"category": c.category, "forms": [list(f) for f in c.forms]}
            for c in err.expected
        ]
    if isinstance(err, (UnknownSymbol,)):
        obj["symbol"] = err.symbol
    if isinstance(err, MissingSurfaceForm):
        obj["symbol"] = err.symbol
        obj["category"] = err.category
    return obj


class _Handler(BaseHTTPRequestHandler):
    pipeline: Pipeline = None  # set by serve()

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, code: int, obj: dict) -> None:
        payload = json.dumps(obj).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(payload)

    def do_OPTIONS(self):
        self._send(200, {})

    def do_GET(self):
        if self.path == "/lexicon":
            self._send(200, {"entries": self.pipeline.lexicon_listing()})
        else:
            self._send(404, {"kind": "not_found", "message": self.path})

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length) if length else b"{}"
        obj = json.loads(raw.decode("utf-8"))
        if not isinstance(obj, dict):
            raise ValueError("request body must be a JSON object")
        return obj

    def do_POST(self):
        try:
            body = self._body()
        except (ValueError, json.JSONDecodeError) as err:
            self._send(400, {"kind": "bad_request", "message": str(err)})
            return
        try:
            if self.path == "/parse":
                self._send(200, {"asp": self.pipeline.parse(str(body.get("text", "")))})
            elif self.path == "/verbalize":
                self._send(200, {"cnl": self.pipeline.verbalize(str(body.get("asp", "")))})
            elif self.path == "/roundtrip":
                self._send(200, self.pipeline.roundtrip(str(body.get("text", ""))))
            elif self.path == "/lookahead":
                prefix = body.get("prefix", [])
                if not isinstance(prefix, list) or not all(isinstance(t, str) for t in prefix):
                    raise ValueError("prefix must be a list of tokens")
                context = str(body.get("context", ""))
                self._send(200, {"continuations": self.pipeline.lookahead(prefix, context)})
            elif self.path == "/solve":
                self._send(200, self.pipeline.solve(str(body.get("asp", ""))))
            else:
                self._send(404, {"kind": "not_found", "message": self.path})
        except Exception as err:  # noqa: BLE001 — every error becomes a 400 object
            self._send(400, error_object(err))


def make_server(pipeline: Pipeline, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("Handler", (_Handler,), {"pipeline": pipeline})
    return ThreadingHTTPServer((host, port), handler)


def serve(pipeline: Pipeline, port: int, host: str = "127.0.0.1") -> None:
    server = make_server(pipeline, port, host)
    try:
        server.serve_forever()
    finally:
        server.server_close()
