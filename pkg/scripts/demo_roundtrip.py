#!/usr/bin/env python3
"""Walk the Successful Student example end to end:

  specification -> program -> (simulated user edit) -> verbalisation,
  with the brute-force oracle confirming the answers on both sides.
"""

import pathlib
import sys

from cnlasp.asp_io import parse_asp
from cnlasp.oracle import ground, answer_sets, query_answers
from cnlasp.service import Pipeline

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def banner(title: str) -> None:
    print(f"\n=== {title} " + "=" * max(0, 60 - len(title)))


def main() -> int:
    pipe = Pipeline()
    spec = (FIXTURES / "student.cnl").read_text()

    banner("specification")
    print(spec, end="")

    banner("translated program")
    asp = pipe.parse(spec)
    print(asp, end="")

    banner("oracle on the original")
    sets = answer_sets(ground(parse_asp(asp)))
    for s in sets:
        print(" ", " ".join(s))
    print("who is successful?", sorted(query_answers(sets)))

    banner("modified program (successful -> stressed, Bob parties)")
    modified = (FIXTURES / "student_modified.lp").read_text()
    print(modified, end="")

    banner("verbalised modification")
    cnl = pipe.verbalize(modified)
    print(cnl, end="")

    banner("oracle on the modification")
    sets = answer_sets(ground(parse_asp(modified)))
    print("who is stressed?", sorted(query_answers(sets)))

    banner("round trip check")
    report = pipe.roundtrip(spec)
    print("equivalent:", report["equivalent"])
    print("answer sets equal:", report["oracle"]["answer_sets_equal"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
