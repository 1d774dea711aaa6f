"""Shared data model: logic variables, typed literals, internal-format items,
ASP clauses, and the structural utilities everything else builds on.

The internal format is a flat sequence of typed literals interleaved with
full stops, arrow operators and sublists.  During parsing it is built up in
reverse order (most recently recognised item first); during generation it is
consumed front to back in normal order.  Sublists mark the head and body of
rules and thereby bound the accessibility of antecedents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

# ---------------------------------------------------------------------------
# Terms and substitutions
# ---------------------------------------------------------------------------


class LogicVar:
    """An unbound placeholder for an entity.

    Identity matters, value does not: two variables are the same variable
    iff they are the same object.  Bindings live in a separate substitution
    so that backtracking never has to mutate a variable.
    """

    __slots__ = ("id",)
    _counter = itertools.count()

    def __init__(self, ident: Optional[int] = None):
        self.id = next(self._counter) if ident is None else ident

    def __repr__(self) -> str:
        return f"V{self.id}"

    def __hash__(self) -> int:
        return object.__hash__(self)


#: A term is a variable, a constant symbol (lowercase string) or an integer.
Term = Union[LogicVar, str, int]

#: Substitutions are treated as immutable: ``unify`` returns a new dict and
#: never touches the one handed in, which is what makes backtracking free.
Subst = dict


def resolve(term: Term, subst: Subst) -> Term:
    """Follow the binding chain of ``term`` to its final value."""
    seen = 0
    while isinstance(term, LogicVar) and term in subst:
        term = subst[term]
        seen += 1
        if seen > len(subst) + 1:  # cycle guard; never triggers for well-formed stores
            raise RuntimeError("cyclic binding chain")
    return term


def unify(a: Term, b: Term, subst: Optional[Subst]) -> Optional[Subst]:
    """Unify two terms.  Returns the extended substitution or None.

    The incoming substitution is never modified, so a failed attempt leaves
    the caller's store exactly as it was.
    """
    if subst is None:
        return None
    a = resolve(a, subst)
    b = resolve(b, subst)
    if a is b:
        return subst
    if isinstance(a, LogicVar):
        out = dict(subst)
        out[a] = b
        return out
    if isinstance(b, LogicVar):
        out = dict(subst)
        out[b] = a
        return out
    if isinstance(a, (str, int)) and isinstance(b, (str, int)) and a == b and type(a) is type(b):
        return subst
    return None


# ---------------------------------------------------------------------------
# Typed literals
# ---------------------------------------------------------------------------

#: literal kinds and the number of variable slots each carries
KINDS = {
    "named": 1,     # named(V, constant)
    "class": 1,     # class(V, noun)
    "pred1": 1,     # pred1(V, verb)
    "pred2": 2,     # pred2(V1, V2, verb)
    "prop1": 1,     # prop1(V, adjective)
    "prop2": 2,     # prop2(V1, V2, adjective)
    "integer": 1,   # integer(V, int)
    "variable": 1,  # variable(V, 'X')
}

PLAIN = "plain"
STRONG = "strong"
WEAK = "weak"

ISA = "isa"  # reserved verb symbol for the copula + noun construction


@dataclass(frozen=True)
class TypedLiteral:
    """One flat typed predicate of the internal format.

    ``args`` holds the entity terms (one or two), ``symbol`` the lexical
    symbol: a predicate/noun/adjective name, a constant name for ``named``,
    an int for ``integer`` or a surface variable name for ``variable``.
    """

    kind: str
    args: tuple
    symbol: object
    polarity: str = PLAIN

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown literal kind {self.kind!r}")
        if len(self.args) != KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {KINDS[self.kind]} args, got {len(self.args)}")
        if self.kind in ("named", "integer", "variable") and self.polarity != PLAIN:
            raise ValueError(f"{self.kind} literals are always plain")
        if self.kind == "pred2" and self.symbol == ISA and self.polarity != PLAIN:
            raise ValueError("isa is always plain")

    def with_polarity(self, polarity: str) -> "TypedLiteral":
        return TypedLiteral(self.kind, self.args, self.symbol, polarity)

    def walk(self, subst: Subst) -> "TypedLiteral":
        return TypedLiteral(
            self.kind,
            tuple(resolve(a, subst) for a in self.args),
            self.symbol,
            self.polarity,
        )

    def __repr__(self) -> str:
        sign = {PLAIN: "", STRONG: "-", WEAK: "not "}[self.polarity]
        inner = ",".join([repr(a) for a in self.args] + [str(self.symbol)])
        return f"{sign}{self.kind}({inner})"


def named(v: Term, constant: str) -> TypedLiteral:
    return TypedLiteral("named", (v,), constant)


def class_(v: Term, noun: str) -> TypedLiteral:
    return TypedLiteral("class", (v,), noun)


def pred1(v: Term, verb: str, polarity: str = PLAIN) -> TypedLiteral:
    return TypedLiteral("pred1", (v,), verb, polarity)


def pred2(v1: Term, v2: Term, verb: str, polarity: str = PLAIN) -> TypedLiteral:
    return TypedLiteral("pred2", (v1, v2), verb, polarity)


def prop1(v: Term, adj: str, polarity: str = PLAIN) -> TypedLiteral:
    return TypedLiteral("prop1", (v,), adj, polarity)


def prop2(v1: Term, v2: Term, adj: str, polarity: str = PLAIN) -> TypedLiteral:
    return TypedLiteral("prop2", (v1, v2), adj, polarity)


def integer(v: Term, value: int) -> TypedLiteral:
    return TypedLiteral("integer", (v,), value)


def variable(v: Term, name: str) -> TypedLiteral:
    return TypedLiteral("variable", (v,), name)


def is_predication(lit) -> bool:
    """True for literals that verbalise as a verb/adjective phrase."""
    return isinstance(lit, TypedLiteral) and lit.kind in ("pred1", "pred2", "prop1", "prop2")


def is_entity_literal(lit) -> bool:
    """True for literals that describe an entity (NP material)."""
    return isinstance(lit, TypedLiteral) and lit.kind in ("named", "class", "integer", "variable")


# ---------------------------------------------------------------------------
# Internal-format items
# ---------------------------------------------------------------------------


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


FULL_STOP = _Marker("'.'")
ARROW_PROC = _Marker("'-:'")
ARROW_GEN = _Marker("':-'")


@dataclass(frozen=True)
class QueryMark:
    """Terminates a question sentence; carries the answer variable."""

    var: Term

    def __repr__(self) -> str:
        return f"?({self.var!r})"


@dataclass(frozen=True)
class Sublist:
    items: tuple

    def __repr__(self) -> str:
        return repr(list(self.items))


@dataclass(frozen=True)
class CardSpec:
    """Cardinality-quantified predication: ``lower { lit : conds } upper``.

    ``upper`` is None for an "at least" bound.  ``lit`` is the conditional
    literal's basic part, ``conds`` the domain predicates.
    """

    lower: int
    upper: Optional[int]
    lit: tuple
    conds: tuple

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError("cardinality lower bound exceeds upper bound")
        if not self.conds:
            raise ValueError("cardinality condition must name at least one domain predicate")

    def walk(self, subst: Subst) -> "CardSpec":
        return CardSpec(
            self.lower,
            self.upper,
            tuple(l.walk(subst) for l in self.lit),
            tuple(c.walk(subst) for c in self.conds),
        )

    def __repr__(self) -> str:
        up = "" if self.upper is None else f" {self.upper}"
        return f"{self.lower}{{{list(self.lit)}:{list(self.conds)}}}{up}"


Item = Union[TypedLiteral, _Marker, QueryMark, Sublist, CardSpec]

PROC = "proc"
GEN = "gen"


@dataclass(frozen=True)
class InternalForm:
    """A whole program in the flat typed notation.

    ``order`` is ``proc`` when the items sit in reverse (parse) order and
    ``gen`` when they sit in normal (generation) order.
    """

    items: tuple
    order: str = PROC

    def __iter__(self) -> Iterator[Item]:
        return iter(self.items)

    def walk(self, subst: Subst) -> "InternalForm":
        return InternalForm(_walk_items(self.items, subst), self.order)

    def segments(self) -> list:
        """Split into clause segments, each ending in its terminator.

        For proc order the top level is reversed first, so segments always
        come back in source order with the terminator last.
        """
        items = self.items
        if self.order == PROC:
            items = mirror_items(items)
        segs, cur = [], []
        for it in items:
            cur.append(it)
            if it is FULL_STOP or isinstance(it, QueryMark):
                segs.append(tuple(cur))
                cur = []
        if cur:
            raise ValueError("unterminated clause segment in internal form")
        return segs

    def __repr__(self) -> str:
        return f"InternalForm({self.order}, {list(self.items)!r})"


def _walk_items(items: tuple, subst: Subst) -> tuple:
    out = []
    for it in items:
        if isinstance(it, TypedLiteral):
            out.append(it.walk(subst))
        elif isinstance(it, Sublist):
            out.append(Sublist(_walk_items(it.items, subst)))
        elif isinstance(it, CardSpec):
            out.append(it.walk(subst))
        elif isinstance(it, QueryMark):
            out.append(QueryMark(resolve(it.var, subst)))
        else:
            out.append(it)
    return tuple(out)


def mirror_items(items: tuple) -> tuple:
    """Reverse an item sequence and flip the arrow orientation.

    Maps the proc-order image of a program onto its gen-order image and
    vice versa: the sequence is reversed at every nesting level and the
    arrow markers are swapped so rules read head-first in gen order.
    """
    out = []
    for it in reversed(items):
        if it is ARROW_PROC:
            out.append(ARROW_GEN)
        elif it is ARROW_GEN:
            out.append(ARROW_PROC)
        elif isinstance(it, Sublist):
            out.append(Sublist(mirror_items(it.items)))
        else:
            out.append(it)
    return tuple(out)


def mirror(form: InternalForm) -> InternalForm:
    return InternalForm(mirror_items(form.items), GEN if form.order == PROC else PROC)


# ---------------------------------------------------------------------------
# Group stacks: the difference-pair discipline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupStack:
    """A stack of item groups, the working form of the nested internal format.

    ``levels[0]`` is the group currently being built (proc) or consumed
    (gen); outer levels are enclosing or preceding context.  All operations
    return new stacks, so alternatives explored during backtracking can
    never corrupt each other.

    In proc order, items within a group sit most-recent-first, which is
    exactly the reverse order the internal format is built up in.
    """

    levels: tuple = ((),)

    # -- building (proc) ----------------------------------------------------

    def push(self, item: Item) -> "GroupStack":
        return GroupStack(((item,) + self.levels[0],) + self.levels[1:])

    def push_all(self, items: Iterable[Item]) -> "GroupStack":
        out = self
        for item in items:
            out = out.push(item)
        return out

    def open_group(self) -> "GroupStack":
        return GroupStack(((),) + self.levels)

    def close_group(self):
        """Pop the current group; returns (items, remaining stack)."""
        if len(self.levels) < 2:
            raise ValueError("cannot close the outermost group")
        return self.levels[0], GroupStack(self.levels[1:])

    # -- consuming (gen) ----------------------------------------------------

    def front(self) -> Optional[Item]:
        return self.levels[0][0] if self.levels[0] else None

    def peek(self, n: int) -> tuple:
        return self.levels[0][:n]

    def consume(self, n: int = 1) -> "GroupStack":
        if len(self.levels[0]) < n:
            raise ValueError("consume past end of group")
        return GroupStack((self.levels[0][n:],) + self.levels[1:])

    def push_level(self, items: tuple) -> "GroupStack":
        return GroupStack((tuple(items),) + self.levels)

    def group_done(self) -> bool:
        return not self.levels[0]

    def leave(self) -> "GroupStack":
        if self.levels[0]:
            raise ValueError("leaving a non-empty group")
        if len(self.levels) < 2:
            raise ValueError("cannot leave the outermost group")
        return GroupStack(self.levels[1:])

    # -- shared --------------------------------------------------------------

    def replace_current(self, items: tuple) -> "GroupStack":
        return GroupStack((tuple(items),) + self.levels[1:])

    def iter_groups(self) -> Iterator[tuple]:
        """Groups from innermost outward: the accessibility order."""
        return iter(self.levels)


# ---------------------------------------------------------------------------
# ASP clauses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """A (possibly strongly negated) predicate over ground terms or variables.

    Variables are plain strings starting uppercase; constants lowercase
    strings; integers ints.  ``strong`` carries classical negation, ``weak``
    negation as failure — never both on one atom in this fragment.
    """

    pred: str
    args: tuple = ()
    strong: bool = False
    weak: bool = False

    def __post_init__(self):
        if self.strong and self.weak:
            raise ValueError("strong and weak negation never stack on one atom")

    def text(self) -> str:
        base = self.pred
        if self.args:
            base += "(" + ",".join(_term_text(a) for a in self.args) + ")"
        if self.strong:
            base = "-" + base
        if self.weak:
            base = "not " + base
        return base

    def is_ground(self) -> bool:
        return all(not _is_asp_var(a) for a in self.args)

    def variables(self) -> list:
        return [a for a in self.args if _is_asp_var(a)]

    def __repr__(self) -> str:
        return self.text()


def _is_asp_var(term) -> bool:
    return isinstance(term, str) and term[:1].isupper()


def _term_text(term) -> str:
    return str(term)


@dataclass(frozen=True)
class CardHead:
    """Ground/schematic cardinality head ``lower { atom : conds } upper``."""

    lower: int
    upper: Optional[int]
    atom: Atom
    conds: tuple

    def text(self) -> str:
        inner = self.atom.text() + " : " + ", ".join(c.text() for c in self.conds)
        upper = "" if self.upper is None else f" {self.upper}"
        return f"{self.lower} {{ {inner} }}{upper}"

    def __repr__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class AspClause:
    """One clause: fact, (disjunctive) rule, constraint, cardinality rule or query.

    ``head`` is a tuple of Atoms (disjunction), empty for constraints, or a
    CardHead.  Facts have an empty body.  Queries are ordinary rules whose
    single head atom is the synthesised ``answer`` predicate.
    """

    head: object  # tuple[Atom, ...] | CardHead
    body: tuple = ()

    @property
    def is_fact(self) -> bool:
        return (
            isinstance(self.head, tuple)
            and len(self.head) == 1
            and not self.body
        )

    @property
    def is_constraint(self) -> bool:
        return isinstance(self.head, tuple) and not self.head

    @property
    def is_query(self) -> bool:
        return (
            isinstance(self.head, tuple)
            and len(self.head) == 1
            and self.head[0].pred == "answer"
            and bool(self.body)
        )

    def text(self) -> str:
        if isinstance(self.head, CardHead):
            head_txt = self.head.text()
        else:
            head_txt = " ; ".join(a.text() for a in self.head)
        body_txt = ", ".join(a.text() for a in self.body)
        if not self.body:
            return head_txt + "."
        if head_txt:
            return f"{head_txt} :- {body_txt}."
        return f":- {body_txt}."

    def atoms(self) -> Iterator[Atom]:
        if isinstance(self.head, CardHead):
            yield self.head.atom
            yield from self.head.conds
        else:
            yield from self.head
        yield from self.body

    def __repr__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class AspProgram:
    """Ordered clause sequence; order is preserved exactly as read or emitted."""

    clauses: tuple

    def text(self) -> str:
        return "".join(c.text() + "\n" for c in self.clauses)

    def __iter__(self) -> Iterator[AspClause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)


# ---------------------------------------------------------------------------
# Clause equivalence modulo variable renaming
# ---------------------------------------------------------------------------


def _canonical_clause(clause: AspClause, body: tuple) -> str:
    """Render with variables numbered by first occurrence, body as given."""
    names: dict = {}

    def t(term):
        if _is_asp_var(term):
            if term not in names:
                names[term] = f"_V{len(names)}"
            return names[term]
        return repr(term)

    def atom(a: Atom) -> str:
        return ("-" if a.strong else "") + ("~" if a.weak else "") + a.pred + "(" + ",".join(
            t(x) for x in a.args
        ) + ")"

    if isinstance(clause.head, CardHead):
        h = clause.head
        up = "n" if h.upper is None else str(h.upper)
        head_txt = f"{h.lower}|{up}{{{atom(h.atom)}:{','.join(sorted(atom(c) for c in h.conds))}}}"
    else:
        head_txt = ";".join(atom(a) for a in clause.head)
    return head_txt + ":-" + ",".join(atom(a) for a in body)


def clause_equal_modulo_renaming(c1: AspClause, c2: AspClause) -> bool:
    """True iff the clauses are identical after first-occurrence variable
    renaming, with literal order preserved."""
    return _canonical_clause(c1, c1.body) == _canonical_clause(c2, c2.body)


def _shape_key(a: Atom) -> tuple:
    """Renaming-insensitive sort key: variables collapse to one marker."""
    return (
        a.pred,
        len(a.args),
        a.strong,
        a.weak,
        tuple("_" if _is_asp_var(x) else repr(x) for x in a.args),
    )


def _grouped_permutations(atoms: tuple) -> Iterator[tuple]:
    """Permute only within runs of shape-identical literals.

    Literals with different shapes have a fixed canonical order, so the
    search space stays tiny even for long bodies."""
    ordered = sorted(atoms, key=_shape_key)
    groups = [list(g) for _, g in itertools.groupby(ordered, key=_shape_key)]
    pools = [list(itertools.permutations(g)) for g in groups]
    for combo in itertools.product(*pools):
        yield tuple(itertools.chain.from_iterable(combo))


def clause_canonical(clause: AspClause) -> str:
    """Order-insensitive canonical string: minimise over body permutations
    and head-disjunct order, with variables renamed by first occurrence."""
    heads = [clause.head]
    if isinstance(clause.head, tuple) and len(clause.head) > 1:
        heads = [tuple(p) for p in itertools.permutations(clause.head)]
    best = None
    for head in heads:
        c = AspClause(head, clause.body)
        for perm in _grouped_permutations(clause.body):
            s = _canonical_clause(c, perm)
            if best is None or s < best:
                best = s
    return best


def program_equiv(p1: AspProgram, p2: AspProgram) -> bool:
    """Multiset clause equality, ignoring clause order, body-literal order
    and variable names."""
    return sorted(clause_canonical(c) for c in p1) == sorted(
        clause_canonical(c) for c in p2
    )
