#!/usr/bin/env python3
"""Random-program round-trip stress: render -> read -> plan -> verbalise ->
re-parse -> compare.  A quick shake-down of the whole pipeline; the real
property suite lives in tests/ with hypothesis shrinking."""

import random
import sys

from cnlasp.asp_io import read_program, write_program
from cnlasp.grammar import Grammar
from cnlasp.lexicon import default_lexicon
from cnlasp.model import AspClause, AspProgram, Atom, CardHead, program_equiv
from cnlasp.planner import plan
from cnlasp.tokenizer import detokenize, tokenize

CONSTS = ["tom", "bob", "sue_miller", "macquarie_university", "linguistics",
          "comp329", "comp330", "red", "blue", "green"]
NOUNS = ["student", "node", "colour", "course", "university", "unicorn"]
IVERBS = ["work", "party", "study"]
TVERBS = ["study_at"]
ADJS = ["successful", "stressed", "expensive"]
RADJS = ["enrolled_in", "connected_to", "assigned_to"]


def random_program(rng: random.Random) -> AspProgram:
    clauses = []
    ints_used = set()

    def entity():
        if rng.random() < 0.25:
            i = rng.randint(1, 4)
            ints_used.add(i)
            return i
        return rng.choice(CONSTS)

    n_facts = rng.randint(0, 6)
    for _ in range(n_facts):
        kind = rng.choice(["noun", "iverb", "adj", "binary", "binary", "negfact"])
        if kind == "noun":
            clauses.append(AspClause((Atom(rng.choice(NOUNS), (entity(),)),), ()))
        elif kind == "iverb":
            clauses.append(AspClause((Atom(rng.choice(IVERBS), (entity(),)),), ()))
        elif kind == "adj":
            clauses.append(AspClause((Atom(rng.choice(ADJS), (entity(),)),), ()))
        elif kind == "negfact":
            clauses.append(AspClause(
                (Atom(rng.choice(IVERBS + NOUNS + ADJS), (entity(),), strong=True),), ()
            ))
        else:
            pred = rng.choice(TVERBS + RADJS)
            clauses.append(AspClause((Atom(pred, (entity(), entity())),), ()))

    n_rules = rng.randint(0, 3)
    for _ in range(n_rules):
        noun = rng.choice(NOUNS)
        body = [Atom(noun, ("X",))]
        for _ in range(rng.randint(0, 2)):
            shape = rng.choice(["iverb", "adj", "binary", "weak", "strongbody"])
            if shape == "iverb":
                body.append(Atom(rng.choice(IVERBS), ("X",)))
            elif shape == "adj":
                body.append(Atom(rng.choice(ADJS), ("X",)))
            elif shape == "weak":
                body.append(Atom(rng.choice(IVERBS), ("X",), weak=True))
            elif shape == "strongbody":
                body.append(Atom(rng.choice(IVERBS), ("X",), strong=True))
            else:
                body.append(Atom(rng.choice(TVERBS + RADJS), ("X", rng.choice(CONSTS))))
        kind = rng.choice(["rule", "rule", "disj", "constraint", "query", "card"])
        if kind == "rule":
            strong = rng.random() < 0.2
            head = (Atom(rng.choice(ADJS + IVERBS), ("X",), strong=strong),)
            clauses.append(AspClause(head, tuple(body)))
        elif kind == "disj":
            a, b = rng.sample(ADJS + IVERBS, 2)
            clauses.append(AspClause((Atom(a, ("X",)), Atom(b, ("X",))), tuple(body)))
        elif kind == "constraint":
            clauses.append(AspClause((), tuple(body)))
        elif kind == "query":
            clauses.append(AspClause((Atom("answer", ("X",)),), tuple(body)))
        else:
            cond_noun = rng.choice(NOUNS)
            lower, upper = rng.choice([(1, 1), (2, 2), (1, None), (0, 2)])
            head = CardHead(lower, upper,
                            Atom(rng.choice(RADJS), ("X", "B")),
                            (Atom(cond_noun, ("B",)),))
            clauses.append(AspClause(head, tuple(body)))

    # classifying facts for any integers used
    pre = [AspClause((Atom("node", (i,)),), ()) for i in sorted(ints_used)]
    return AspProgram(tuple(pre) + tuple(clauses))


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 300
    rng = random.Random(seed)
    lex = default_lexicon()
    grammar = Grammar(lex)
    bad = 0
    for i in range(n):
        program = random_program(rng)
        text = program.text()
        try:
            rr = read_program(text, lex)
            assert program_equiv(program, rr.program), "read is not faithful"
            planned = plan(rr.form, grammar)
            cnl = detokenize(grammar.generate_program(planned))
            form2 = grammar.parse_specification(tokenize(cnl))
            back = write_program(form2).program
            if not program_equiv(program, back):
                raise AssertionError("round trip changed the program")
        except Exception as err:
            bad += 1
            print(f"== case {i}: {type(err).__name__}: {err}")
            print(text)
            try:
                print("--- verbalised as:")
                print(cnl)
            except UnboundLocalError:
                pass
            print()
            if bad >= 8:
                break
    print(f"{i + 1} cases, {bad} failures")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
