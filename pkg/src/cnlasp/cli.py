"""Command-line interface.

    cnlasp parse SPEC.cnl            translate a specification to ASP
    cnlasp verbalize PROGRAM.lp      verbalise an ASP program
    cnlasp roundtrip SPEC.cnl        parse, verbalise, re-parse, compare
    cnlasp lookahead "Every"         admissible next tokens for a prefix
    cnlasp solve PROGRAM.lp          brute-force answer sets and answers
    cnlasp serve --port 8077         JSON service for the editor

'-' reads from stdin.  Exit code 0 on success, 1 on any language error
(with a diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import oracle
from .service import Pipeline, error_object, make_server


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _fail(err: Exception, fmt: str) -> int:
    obj = error_object(err)
    if fmt == "json":
        print(json.dumps(obj), file=sys.stderr)
    else:
        print(f"error[{obj['kind']}]: {obj['message']}", file=sys.stderr)
        if "expected" in obj and obj["expected"]:
            cats = {}
            for cont in obj["expected"]:
                cats.setdefault(cont["category"], []).extend(
                    " ".join(f) for f in cont["forms"]
                )
            if obj.get("sentence_index") is not None:
                print(f"  in sentence {obj['sentence_index'] + 1}, "
                      f"at token {obj['position']}", file=sys.stderr)
            for cat, forms in sorted(cats.items()):
                shown = ", ".join(sorted(forms)[:8])
                more = "" if len(forms) <= 8 else ", ..."
                print(f"  expected {cat}: {shown}{more}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cnlasp",
        description="bidirectional controlled natural language / answer set program compiler",
    )
    parser.add_argument("--lexicon", metavar="PATH", default=None,
                        help="lexicon file (default: built-in vocabulary)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--solver", metavar="CMD", default=None,
                        help="external solver command for cross-checking")
    parser.add_argument("--max-atoms", type=int, default=oracle.DEFAULT_ATOM_LIMIT,
                        help="oracle ground-atom limit (default 24)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="CNL specification to ASP program")
    p.add_argument("file", help="specification file or '-'")
    p = sub.add_parser("verbalize", help="ASP program to CNL specification")
    p.add_argument("file", help="program file or '-'")
    p = sub.add_parser("roundtrip", help="parse, verbalise, re-parse, compare")
    p.add_argument("file", help="specification file or '-'")
    p = sub.add_parser("lookahead", help="admissible continuations of a prefix")
    p.add_argument("prefix", nargs="*", help="sentence prefix tokens")
    p.add_argument("--context", default="", help="preceding complete sentences")
    p = sub.add_parser("solve", help="answer sets by brute force")
    p.add_argument("file", help="program file or '-'")
    p = sub.add_parser("serve", help="run the JSON service")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--host", default="127.0.0.1")

    args = parser.parse_args(argv)
    try:
        pipeline = Pipeline.from_lexicon_path(
            args.lexicon, atom_limit=args.max_atoms, solver_command=args.solver
        )
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

    try:
        if args.command == "parse":
            asp = pipeline.parse(_read(args.file))
            out = json.dumps({"asp": asp}) if args.format == "json" else asp
            sys.stdout.write(out if out.endswith("\n") or not out else out + "\n")
            return 0
        if args.command == "verbalize":
            cnl = pipeline.verbalize(_read(args.file))
            out = json.dumps({"cnl": cnl}) if args.format == "json" else cnl
            sys.stdout.write(out if out.endswith("\n") or not out else out + "\n")
            return 0
        if args.command == "roundtrip":
            report = pipeline.roundtrip(_read(args.file))
            if args.format == "json":
                print(json.dumps(report, indent=2))
            else:
                print(f"equivalent: {report['equivalent']}")
                o = report["oracle"]
                if o["ran"]:
                    print(f"answer sets equal: {o['answer_sets_equal']}")
                else:
                    print(f"oracle skipped: {o['reason']}")
            return 0 if report["equivalent"] else 1
        if args.command == "lookahead":
            conts = pipeline.lookahead(args.prefix, args.context)
            if args.format == "json":
                print(json.dumps({"continuations": conts}))
            else:
                for c in conts:
                    forms = ", ".join(" ".join(f) for f in c["forms"])
                    print(f"{c['category']}: {forms}")
            return 0
        if args.command == "solve":
            result = pipeline.solve(_read(args.file))
            if args.format == "json":
                print(json.dumps(result, indent=2))
            else:
                for i, s in enumerate(result["answer_sets"], start=1):
                    print(f"Answer {i}: {' '.join(s)}")
                print(f"answers: {', '.join(result['query_answers']) or '(none)'}")
            return 0
        if args.command == "serve":
            server = make_server(pipeline, args.port, args.host)
            actual = server.server_address[1]
            print(f"serving on http://{args.host}:{actual}", file=sys.stderr, flush=True)
            try:
                server.serve_forever()
            finally:
                server.server_close()
            return 0
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except Exception as err:  # noqa: BLE001 — language errors become diagnostics
        return _fail(err, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
