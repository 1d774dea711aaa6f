"""Desk-scale grounder and brute-force stable-model enumerator.

This is the verification backstop for round-tripping: small programs are
grounded by relevant instantiation (rule instances whose positive body is
derivable from facts and rule heads) and their answer sets found by plain
subset enumeration — a candidate is an answer set iff it is consistent,
violates no constraint or cardinality bound, models the weak-negation
reduct, and no proper subset does.  Nothing here tries to be fast; it
tries to be obviously faithful to the definitions.
"""

from __future__ import annotations

import itertools
import shlex
import subprocess
from dataclasses import dataclass
from typing import Iterable, Optional

from .model import AspClause, AspProgram, Atom, CardHead

DEFAULT_ATOM_LIMIT = 24
DEFAULT_INSTANCE_LIMIT = 10 ** 6


class UnsafeClauseError(ValueError):
    pass


class UniverseTooLarge(ValueError):
    pass


class AtomLimitExceeded(ValueError):
    def __init__(self, size: int, limit: int):
        super().__init__(
            f"ground atom universe has {size} atoms, oracle limit is {limit}"
        )
        self.size = size
        self.limit = limit


#: ground atom: (predicate, argument tuple, strongly-negated flag)
GroundAtom = tuple


def _gatom(atom: Atom, subst: dict) -> GroundAtom:
    args = tuple(subst.get(a, a) for a in atom.args)
    return (atom.pred, args, atom.strong)


def gatom_text(g: GroundAtom) -> str:
    pred, args, strong = g
    body = pred + ("(" + ",".join(str(a) for a in args) + ")" if args else "")
    return ("-" if strong else "") + body


@dataclass(frozen=True)
class GroundRule:
    heads: tuple          # disjunction of ground atoms (empty = constraint)
    pos: tuple
    weak: tuple


@dataclass(frozen=True)
class GroundCard:
    lower: int
    upper: Optional[int]
    atoms: tuple          # the expanded choice atoms
    pos: tuple
    weak: tuple


@dataclass
class GroundProgram:
    facts: frozenset
    rules: tuple
    cards: tuple
    universe: frozenset

    def atom_count(self) -> int:
        return len(self.universe)


# ---------------------------------------------------------------------------
# grounding
# ---------------------------------------------------------------------------


def _is_var(term) -> bool:
    return isinstance(term, str) and term[:1].isupper()


def _match_atom(pattern: Atom, ground: GroundAtom, subst: dict) -> Optional[dict]:
    pred, args, strong = ground
    if pattern.pred != pred or pattern.strong != strong or len(pattern.args) != len(args):
        return None
    out = subst
    for p, g in zip(pattern.args, args):
        if _is_var(p):
            bound = out.get(p)
            if bound is None:
                out = dict(out)
                out[p] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def _join(patterns, derivable, subst) -> Iterable[dict]:
    if not patterns:
        yield subst
        return
    first, rest = patterns[0], patterns[1:]
    for g in derivable:
        s2 = _match_atom(first, g, subst)
        if s2 is not None:
            yield from _join(rest, derivable, s2)


def _derivable_overestimate(program: AspProgram) -> set:
    """Least fixpoint ignoring negation, treating disjunction and choice
    heads as fully derivable: an upper bound on what can ever be true."""
    derived: set = set()
    changed = True
    while changed:
        changed = False
        for clause in program:
            pos = [a for a in clause.body if not a.weak]
            for s in _join(pos, list(derived), {}):
                if isinstance(clause.head, CardHead):
                    for s2 in _join(list(clause.head.conds), list(derived), s):
                        g = _gatom(clause.head.atom, s2)
                        if g not in derived:
                            derived.add(g)
                            changed = True
                else:
                    for a in clause.head:
                        g = _gatom(a, s)
                        if not all(not _is_var(t) for t in g[1]):
                            raise UnsafeClauseError(
                                f"unsafe clause (variable escapes grounding): {clause.text()}"
                            )
                        if g not in derived:
                            derived.add(g)
                            changed = True
    return derived


def ground(program: AspProgram,
           instance_limit: int = DEFAULT_INSTANCE_LIMIT) -> GroundProgram:
    """Relevant grounding over the program's own constants."""
    derived = _derivable_overestimate(program)
    facts: set = set()
    rules: list = []
    cards: list = []
    count = 0
    for clause in program:
        pos = [a for a in clause.body if not a.weak]
        weak = [a for a in clause.body if a.weak]
        for s in _join(pos, list(derived), {}):
            count += 1
            if count > instance_limit:
                raise UniverseTooLarge(
                    f"more than {instance_limit} ground instances"
                )
            pos_g = tuple(_gatom(a, s) for a in pos)
            weak_g = tuple(_gatom(Atom(a.pred, a.args, a.strong), s) for a in weak)
            if isinstance(clause.head, CardHead):
                opts = []
                for s2 in _join(list(clause.head.conds), list(derived), s):
                    opts.append(_gatom(clause.head.atom, s2))
                cards.append(GroundCard(
                    clause.head.lower, clause.head.upper,
                    tuple(sorted(set(opts))), pos_g, weak_g,
                ))
            else:
                heads_g = tuple(_gatom(a, s) for a in clause.head)
                for g in heads_g:
                    if any(_is_var(t) for t in g[1]):
                        raise UnsafeClauseError(
                            f"unsafe clause: {clause.text()}"
                        )
                if not clause.body and len(heads_g) == 1:
                    facts.add(heads_g[0])
                else:
                    rules.append(GroundRule(heads_g, pos_g, weak_g))
    universe = set(facts)
    for r in rules:
        universe.update(r.heads)
    for c in cards:
        universe.update(c.atoms)
    return GroundProgram(frozenset(facts), tuple(rules), tuple(cards),
                         frozenset(universe))


# ---------------------------------------------------------------------------
# stable models by subset enumeration
# ---------------------------------------------------------------------------


def _consistent(s: frozenset) -> bool:
    return not any((pred, args, True) in s for (pred, args, neg) in s if not neg)


def _reduct(g: GroundProgram, s: frozenset):
    """Weak-negation reduct with respect to the candidate, as plain
    disjunctive rules; choice atoms the candidate selected become supported
    by their rule body."""
    rules = [GroundRule((f,), (), ()) for f in sorted(g.facts)]
    for r in g.rules:
        if any(w in s for w in r.weak):
            continue
        rules.append(GroundRule(r.heads, r.pos, ()))
    for c in g.cards:
        if any(w in s for w in c.weak):
            continue
        for a in c.atoms:
            if a in s:
                rules.append(GroundRule((a,), c.pos, ()))
    return rules


def _is_model(rules, s: frozenset) -> bool:
    for r in rules:
        if all(p in s for p in r.pos):
            if r.heads and not any(h in s for h in r.heads):
                return False
            if not r.heads:
                return False
    return True


def _violates(g: GroundProgram, s: frozenset) -> bool:
    for r in g.rules:
        if not r.heads and all(p in s for p in r.pos) and \
                not any(w in s for w in r.weak):
            return True
    for c in g.cards:
        if all(p in s for p in c.pos) and not any(w in s for w in c.weak):
            n = sum(1 for a in c.atoms if a in s)
            if n < c.lower or (c.upper is not None and n > c.upper):
                return True
    return False


def _minimal(rules, s: frozenset, fixed: frozenset) -> bool:
    """No proper subset of s (always containing the facts) models the
    reduct; checked by brute force over the free atoms."""
    free = sorted(s - fixed)
    for r in range(len(free)):
        for keep in itertools.combinations(free, r):
            candidate = frozenset(fixed | set(keep))
            if _is_model(rules, candidate):
                return False
    return True


def answer_sets(g: GroundProgram,
                atom_limit: int = DEFAULT_ATOM_LIMIT) -> list:
    """All stable models, as sorted tuples of ground atoms."""
    if g.atom_count() > atom_limit:
        raise AtomLimitExceeded(g.atom_count(), atom_limit)
    free = sorted(g.universe - g.facts)
    fixed = frozenset(g.facts)
    if not _consistent(fixed):
        return []
    found = []
    for bits in itertools.product((False, True), repeat=len(free)):
        s = frozenset(fixed | {a for a, b in zip(free, bits) if b})
        if not _consistent(s):
            continue
        if _violates(g, s):
            continue
        reduct = _reduct(g, s)
        if not _is_model(reduct, s):
            continue
        if not _minimal(reduct, s, fixed):
            continue
        found.append(s)
    # paranoia: every answer set must satisfy every constraint and the
    # consistency requirement — re-check what we hand back
    for s in found:
        assert _consistent(s) and not _violates(g, s)
    return [tuple(sorted(gatom_text(a) for a in s)) for s in found]


def query_answers(sets: list) -> set:
    """Cautious answers: constants c with answer(c) in every answer set."""
    if not sets:
        return set()
    per_set = []
    for s in sets:
        answers = set()
        for text in s:
            if text.startswith("answer(") and text.endswith(")"):
                answers.add(text[len("answer("):-1])
        per_set.append(answers)
    out = per_set[0]
    for a in per_set[1:]:
        out &= a
    return out


def solve(program: AspProgram, atom_limit: int = DEFAULT_ATOM_LIMIT):
    """Ground and enumerate in one step."""
    return answer_sets(ground(program), atom_limit)


# ---------------------------------------------------------------------------
# optional external solver hook
# ---------------------------------------------------------------------------


def solve_with_command(asp_text: str, command: str, timeout: float = 60.0) -> list:
    """Run an external solver command (e.g. a clingo invocation with
    ``--models 0``) on the program text and parse its answer sets.  Used
    only for cross-checking; absent by default."""
    proc = subprocess.run(
        shlex.split(command), input=asp_text, capture_output=True,
        text=True, timeout=timeout,
    )
    sets = []
    lines = proc.stdout.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("Answer:"):
            atoms = lines[i + 1].split() if i + 1 < len(lines) else []
            sets.append(tuple(sorted(atoms)))
    return sets
