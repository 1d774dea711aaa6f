"""Writer (internal format -> ASP text), reader (ASP text -> internal
format) and program equivalence.

The writer reverses a proc-order form back into source order, grounds the
auxiliary ``named``/``integer`` literals into constant arguments, drops
``variable`` name literals, fuses the copula construction into plain class
atoms and letters the remaining logic variables A, B, C, ... in order of
first appearance across the program.

The reader does the inverse: every constant argument grows a ``named``
literal, every integer argument a classifying ``class`` literal plus an
``integer`` literal, and the typed kind of each symbol is recovered from
the lexicon — a symbol the lexicon does not know is a naming-convention
violation and fails loudly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .lexicon import Lexicon
from .model import (
    ARROW_GEN,
    FULL_STOP,
    GEN,
    ISA,
    PLAIN,
    STRONG,
    WEAK,
    AspClause,
    AspProgram,
    Atom,
    CardHead,
    CardSpec,
    GroupStack,
    InternalForm,
    LogicVar,
    QueryMark,
    Sublist,
    TypedLiteral,
    class_,
    integer,
    named,
    pred2,
    program_equiv,
    resolve,
    unify,
)

# re-exported: equivalence lives with the clause model
__all__ = [
    "write_program",
    "read_program",
    "render_program",
    "program_equiv",
    "AspSyntaxError",
    "UnknownSymbol",
    "UnsafeClause",
    "UngroundFact",
    "WriteResult",
    "ReadResult",
]


class AspSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownSymbol(ValueError):
    """A program symbol has no lexicon category: the naming convention of
    the controlled language was not followed."""

    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(f"unknown symbol {symbol!r} (not in the lexicon)")


class UnsafeClause(ValueError):
    def __init__(self, clause_text: str, var: str):
        self.var = var
        super().__init__(f"unsafe clause: variable {var} not bound by a positive body literal in {clause_text!r}")


class UngroundFact(ValueError):
    def __init__(self, atom_text: str):
        super().__init__(f"fact is not ground: {atom_text!r}")


# ---------------------------------------------------------------------------
# Writer
# ---------------------------------------------------------------------------


class _Namer:
    """Letters variables A, B, C, ... in order of first appearance."""

    def __init__(self):
        self.names: dict = {}

    def name(self, var: LogicVar) -> str:
        if var not in self.names:
            n = len(self.names)
            if n < 26:
                self.names[var] = chr(ord("A") + n)
            else:
                self.names[var] = f"V{n}"
        return self.names[var]


@dataclass
class WriteResult:
    program: AspProgram
    text: str
    #: clause indices grouped per source sentence (drives line grouping)
    groups: list = field(default_factory=list)


def write_program(form: InternalForm) -> WriteResult:
    """Turn an internal form into the untyped answer set program.

    Facts arising from one source sentence share an output line, which is
    purely cosmetic; the returned AspProgram is flat and order-preserving.
    """
    subst: dict = {}
    for lit in _all_literals(form.items):
        if lit.kind == "named":
            subst = _must_unify(lit.args[0], lit.symbol, subst)
        elif lit.kind == "integer":
            subst = _must_unify(lit.args[0], lit.symbol, subst)
    namer = _Namer()
    clauses: list = []
    groups: list = []
    lines: list = []
    for seg in form.segments():
        built = _write_segment(seg, subst, namer)
        idxs = list(range(len(clauses), len(clauses) + len(built)))
        clauses.extend(built)
        groups.append(idxs)
        lines.append(" ".join(c.text() for c in built))
    program = AspProgram(tuple(clauses))
    text = "".join(line + "\n" for line in lines if line)
    return WriteResult(program, text, groups)


def _must_unify(var, value, subst):
    out = unify(var, value, subst)
    if out is None:
        a = resolve(var, subst)
        raise ValueError(f"conflicting grounding: {a!r} vs {value!r}")
    return out


def _all_literals(items):
    for it in items:
        if isinstance(it, TypedLiteral):
            yield it
        elif isinstance(it, Sublist):
            yield from _all_literals(it.items)
        elif isinstance(it, CardSpec):
            yield from it.lit
            yield from it.conds


def _write_segment(seg, subst, namer):
    """One clause segment (gen orientation, terminator last) -> clauses."""
    body_seg = seg[:-1]
    terminator = seg[-1]
    if isinstance(terminator, QueryMark):
        body_atoms = _atoms_of_run(body_seg, subst, namer, loc="body")
        answer_var = _term_text(terminator.var, subst, namer)
        clause = AspClause((Atom("answer", (answer_var,)),), tuple(body_atoms))
        _check_safety(clause)
        return [clause]
    if len(body_seg) >= 3 and isinstance(body_seg[0], Sublist) and body_seg[1] is ARROW_GEN:
        if len(body_seg) != 3 or not isinstance(body_seg[2], Sublist):
            raise ValueError("malformed rule segment")
        head_items, body_items = body_seg[0].items, body_seg[2].items
        body_atoms = tuple(_atoms_of_run(body_items, subst, namer, loc="body"))
        head = _head_of(head_items, subst, namer)
        clause = AspClause(head, body_atoms)
        _check_safety(clause)
        return [clause]
    # fact segment: one fact per atom; a cardinality item becomes a choice fact
    clauses = []
    for piece in _fact_pieces(body_seg, subst, namer):
        if isinstance(piece, CardHead):
            clause = AspClause(piece, ())
            _check_safety(clause)
        else:
            if not piece.is_ground():
                raise UngroundFact(piece.text())
            if piece.weak:
                raise ValueError("weak negation cannot occur in a fact")
            clause = AspClause((piece,), ())
        clauses.append(clause)
    return clauses


def _head_of(head_items, subst, namer):
    if len(head_items) == 1 and isinstance(head_items[0], CardSpec):
        return _card_head(head_items[0], subst, namer)
    if head_items and all(isinstance(it, Sublist) for it in head_items):
        disjuncts = []
        for sub in head_items:
            atoms = _atoms_of_run(sub.items, subst, namer, loc="head")
            disjuncts.extend(atoms)
        return tuple(disjuncts)
    return tuple(_atoms_of_run(head_items, subst, namer, loc="head"))


def _card_head(spec: CardSpec, subst, namer) -> CardHead:
    lits = _atoms_of_run(spec.lit, subst, namer, loc="head")
    if len(lits) != 1:
        raise ValueError("cardinality head takes exactly one basic literal")
    conds = tuple(_atoms_of_run(spec.conds, subst, namer, loc="body"))
    return CardHead(spec.lower, spec.upper, lits[0], conds)


def _fact_pieces(items, subst, namer):
    """Atoms (and cardinality heads) of a fact segment, in order."""
    out = []
    run = []
    for it in items:
        if isinstance(it, CardSpec):
            out.extend(_atoms_of_run(run, subst, namer, loc="fact"))
            run = []
            out.append(_card_head(it, subst, namer))
        elif isinstance(it, TypedLiteral):
            run.append(it)
        else:
            raise ValueError(f"unexpected item in fact segment: {it!r}")
    out.extend(_atoms_of_run(run, subst, namer, loc="fact"))
    return out


def _atoms_of_run(lits, subst, namer, loc: str):
    """Translate a literal run into atoms.

    The copula construction pred2(A,B,isa) + class(B,n) fuses into the
    atom n(A); named/integer literals were grounded beforehand and vanish
    here; variable name literals vanish too.
    """
    if not all(isinstance(l, TypedLiteral) for l in lits):
        raise ValueError("non-literal item inside a literal run")
    lits = list(lits)
    consumed = [False] * len(lits)
    atoms = []
    for i, lit in enumerate(lits):
        if consumed[i]:
            continue
        if lit.kind in ("named", "integer", "variable"):
            continue
        if lit.kind == "pred2" and lit.symbol == ISA:
            b = resolve(lit.args[1], subst)
            cls = None
            for j in range(i + 1, len(lits)):
                other = lits[j]
                if not consumed[j] and other.kind == "class" and \
                        resolve(other.args[0], subst) is b:
                    cls = j
                    break
            if cls is None:
                raise ValueError("isa literal without a class complement")
            cl = lits[cls]
            consumed[cls] = True
            atoms.append(Atom(
                cl.symbol,
                (_term_text(lit.args[0], subst, namer),),
                strong=cl.polarity == STRONG,
                weak=cl.polarity == WEAK,
            ))
            continue
        if lit.kind == "class":
            atoms.append(Atom(
                lit.symbol, (_term_text(lit.args[0], subst, namer),),
                strong=lit.polarity == STRONG, weak=lit.polarity == WEAK,
            ))
        elif lit.kind in ("pred1", "prop1"):
            atoms.append(Atom(
                lit.symbol, (_term_text(lit.args[0], subst, namer),),
                strong=lit.polarity == STRONG, weak=lit.polarity == WEAK,
            ))
        elif lit.kind in ("pred2", "prop2"):
            atoms.append(Atom(
                lit.symbol,
                (
                    _term_text(lit.args[0], subst, namer),
                    _term_text(lit.args[1], subst, namer),
                ),
                strong=lit.polarity == STRONG, weak=lit.polarity == WEAK,
            ))
        else:
            raise ValueError(f"cannot write literal kind {lit.kind}")
    if loc in ("head", "fact"):
        for a in atoms:
            if a.weak:
                raise ValueError("weak negation outside a body")
    return atoms


def _term_text(term, subst, namer):
    value = resolve(term, subst)
    if isinstance(value, LogicVar):
        return namer.name(value)
    return value


def _check_safety(clause: AspClause) -> None:
    bound = set()
    for a in clause.body:
        if not a.weak:
            bound.update(a.variables())
    if isinstance(clause.head, CardHead):
        for c in clause.head.conds:
            bound.update(c.variables())
        head_vars = set(clause.head.atom.variables())
        for c in clause.head.conds:
            head_vars.update(c.variables())
    else:
        head_vars = set()
        for a in clause.head:
            head_vars.update(a.variables())
    weak_vars = set()
    for a in clause.body:
        if a.weak:
            weak_vars.update(a.variables())
    for v in sorted(head_vars | weak_vars):
        if v not in bound:
            raise UnsafeClause(clause.text(), v)


def render_program(program: AspProgram) -> str:
    return program.text()


# ---------------------------------------------------------------------------
# Reader
# ---------------------------------------------------------------------------


@dataclass
class ReadResult:
    program: AspProgram
    form: InternalForm


_ASP_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>%[^\n]*)"
    r"|(?P<arrow>:-)"
    r"|(?P<punct>[(){};,.:])"
    r"|(?P<minus>-)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[a-z][A-Za-z0-9_]*)"
    r"|(?P<var>[A-Z][A-Za-z0-9_]*)"
)


def _scan_asp(text: str):
    tokens = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _ASP_TOKEN.match(text, pos)
        if not m:
            raise AspSyntaxError(line, f"unexpected character {text[pos]!r}")
        line += text[pos:m.end()].count("\n")
        pos = m.end()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        tokens.append((kind, m.group(), line))
    return tokens


class _AspParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.line())

    def line(self):
        if self.i < len(self.toks):
            return self.toks[self.i][2]
        return self.toks[-1][2] if self.toks else 1

    def take(self, kind=None, value=None):
        k, v, line = self.peek()
        if k is None:
            raise AspSyntaxError(line, "unexpected end of program")
        if kind is not None and k != kind:
            raise AspSyntaxError(line, f"expected {kind}, found {v!r}")
        if value is not None and v != value:
            raise AspSyntaxError(line, f"expected {value!r}, found {v!r}")
        self.i += 1
        return v

    def at(self, kind, value=None):
        k, v, _ = self.peek()
        return k == kind and (value is None or v == value)

    def parse_program(self):
        clauses = []
        while self.i < len(self.toks):
            clauses.append(self.parse_clause())
        return clauses

    def parse_clause(self):
        if self.at("arrow"):
            self.take("arrow")
            body = self.parse_body()
            self.take("punct", ".")
            return AspClause((), tuple(body))
        if self.at("int") or self.at("punct", "{"):
            head = self.parse_card_head()
        else:
            head = self.parse_disjunction()
        if self.at("arrow"):
            self.take("arrow")
            body = self.parse_body()
        else:
            body = []
        self.take("punct", ".")
        return AspClause(head, tuple(body))

    def parse_disjunction(self):
        atoms = [self.parse_atom()]
        while self.at("punct", ";"):
            self.take("punct", ";")
            atoms.append(self.parse_atom())
        return tuple(atoms)

    def parse_card_head(self):
        lower = 0
        if self.at("int"):
            lower = int(self.take("int"))
        self.take("punct", "{")
        atom = self.parse_atom()
        self.take("punct", ":")
        conds = [self.parse_atom()]
        while self.at("punct", ","):
            self.take("punct", ",")
            conds.append(self.parse_atom())
        self.take("punct", "}")
        upper = None
        if self.at("int"):
            upper = int(self.take("int"))
        if upper is not None and lower > upper:
            raise AspSyntaxError(self.line(), "cardinality lower bound exceeds upper")
        return CardHead(lower, upper, atom, tuple(conds))

    def parse_body(self):
        atoms = [self.parse_literal()]
        while self.at("punct", ","):
            self.take("punct", ",")
            atoms.append(self.parse_literal())
        return atoms

    def parse_literal(self):
        weak = False
        if self.at("name", "not"):
            self.take("name", "not")
            weak = True
        atom = self.parse_atom()
        if weak:
            if atom.strong:
                raise AspSyntaxError(self.line(), "strong and weak negation never stack")
            atom = Atom(atom.pred, atom.args, strong=False, weak=True)
        return atom

    def parse_atom(self):
        strong = False
        if self.at("minus"):
            self.take("minus")
            strong = True
        k, v, line = self.peek()
        if k != "name":
            raise AspSyntaxError(line, f"expected predicate name, found {v!r}")
        if v == "not":
            raise AspSyntaxError(line, "misplaced 'not'")
        pred = self.take("name")
        args = []
        if self.at("punct", "("):
            self.take("punct", "(")
            args.append(self.parse_term())
            while self.at("punct", ","):
                self.take("punct", ",")
                args.append(self.parse_term())
            self.take("punct", ")")
        return Atom(pred, tuple(args), strong=strong)

    def parse_term(self):
        k, v, line = self.peek()
        if k == "int":
            return int(self.take("int"))
        if k == "name":
            return self.take("name")
        if k == "var":
            return self.take("var")
        raise AspSyntaxError(line, f"expected a term, found {v!r}")


def parse_asp(text: str) -> AspProgram:
    """Parse ASP text into the clause model (no lexicon involvement)."""
    return AspProgram(tuple(_AspParser(_scan_asp(text)).parse_program()))


def read_program(text: str, lexicon: Lexicon) -> ReadResult:
    """Read (possibly modified) ASP text into the gen-order internal form.

    Typed kinds are recovered through the lexicon; integers are classified
    by the unary noun facts that mention them, so ``connected_to(4,1)``
    knows its arguments are nodes.
    """
    program = parse_asp(text)
    builder = _FormBuilder(lexicon, program)
    items = []
    for clause in program:
        items.extend(builder.clause_items(clause))
    return ReadResult(program, InternalForm(tuple(items), GEN))


class _FormBuilder:
    def __init__(self, lexicon: Lexicon, program: AspProgram):
        self.lexicon = lexicon
        #: one logic variable per constant and per classified integer, so a
        #: re-mentioned entity keeps its identity across clauses
        self.const_vars: dict = {}
        self.int_nouns: dict = {}
        for clause in program:
            for atom in clause.atoms():
                if len(atom.args) == 1 and isinstance(atom.args[0], int):
                    got = lexicon.category_of_symbol(atom.pred)
                    if got and got[0] == "noun":
                        self.int_nouns.setdefault(atom.args[0], atom.pred)

    def _const_var(self, key) -> LogicVar:
        if key not in self.const_vars:
            self.const_vars[key] = LogicVar()
        return self.const_vars[key]

    def clause_items(self, clause: AspClause):
        env: dict = {}
        if clause.is_query:
            body = self._run_items(clause.body, env)
            answer_var = env.get(clause.head[0].args[0])
            if answer_var is None:
                raise UnsafeClause(clause.text(), str(clause.head[0].args[0]))
            return body + [QueryMark(answer_var)]
        if isinstance(clause.head, CardHead) and not clause.body:
            pre, spec = self._card_spec_with_subject(clause.head, env)
            return pre + [spec, FULL_STOP]
        if isinstance(clause.head, CardHead) or not clause.is_fact:
            head_items = self._head_items(clause.head, env)
            body_items = self._run_items(clause.body, env)
            return [Sublist(tuple(head_items)), ARROW_GEN,
                    Sublist(tuple(body_items)), FULL_STOP]
        return self._run_items(clause.head[:1], env) + [FULL_STOP]

    def _head_items(self, head, env):
        if isinstance(head, CardHead):
            return [self._card_spec(head, env)]
        if len(head) <= 1:
            return self._run_items(head, env)
        return [Sublist(tuple(self._run_items((a,), env))) for a in head]

    def _card_spec(self, head: CardHead, env) -> CardSpec:
        lit = self._pred_literal(head.atom, env)
        conds = []
        for cond in head.conds:
            conds.extend(self._bare_class_literals(cond, env))
        return CardSpec(head.lower, head.upper, (lit,), tuple(conds))

    def _card_spec_with_subject(self, head: CardHead, env):
        """Choice facts carry a ground subject; its entity literals must
        precede the cardinality item so the subject noun phrase can be
        realised."""
        _, pre = self._entity_items(head.atom.args[0], env)
        return pre, self._card_spec(head, env)

    def _bare_class_literals(self, atom: Atom, env):
        got = self.lexicon.category_of_symbol(atom.pred)
        if not got or got[0] != "noun":
            raise UnknownSymbol(atom.pred)
        if len(atom.args) != 1:
            raise AspSyntaxError(1, f"noun atom {atom.pred} takes one argument")
        v = self._arg_var(atom.args[0], env)
        return [class_(v, atom.pred)]

    def _run_items(self, atoms, env):
        items = []
        for atom in atoms:
            items.extend(self._atom_items(atom, env))
        return items

    def _atom_items(self, atom: Atom, env):
        got = self.lexicon.category_of_symbol(atom.pred)
        if not got:
            raise UnknownSymbol(atom.pred)
        category, kind = got
        polarity = STRONG if atom.strong else (WEAK if atom.weak else PLAIN)
        if category == "noun":
            if len(atom.args) != 1:
                raise AspSyntaxError(1, f"noun atom {atom.pred} takes one argument")
            arg = atom.args[0]
            if isinstance(arg, str) and arg[:1].isupper():
                v = self._arg_var(arg, env)
                return [TypedLiteral("class", (v,), atom.pred, polarity)]
            if isinstance(arg, int):
                v = self._arg_var(arg, env)
                lit = TypedLiteral("class", (v,), atom.pred, polarity)
                if polarity == PLAIN:
                    return [lit, integer(v, arg)]
                # "-unicorn(3)": the entity is described by its classifying
                # noun; the negated noun is the predication
                _, pre = self._entity_items(arg, env)
                return pre + [lit]
            # constant: the proper-name copula structure
            v = self._arg_var(arg, env)
            b = LogicVar()
            return [
                named(v, arg),
                pred2(v, b, ISA),
                TypedLiteral("class", (b,), atom.pred, polarity),
            ]
        if category in ("iverb", "adj"):
            if len(atom.args) != 1:
                raise AspSyntaxError(1, f"{atom.pred} takes one argument")
            v, pre = self._entity_items(atom.args[0], env)
            litkind = "pred1" if category == "iverb" else "prop1"
            return pre + [TypedLiteral(litkind, (v,), atom.pred, polarity)]
        if category in ("tverb", "radj"):
            if len(atom.args) != 2:
                raise AspSyntaxError(1, f"{atom.pred} takes two arguments")
            v1, pre1 = self._entity_items(atom.args[0], env)
            v2, pre2 = self._entity_items(atom.args[1], env)
            litkind = "pred2" if category == "tverb" else "prop2"
            lit = TypedLiteral(litkind, (v1, v2), atom.pred, polarity)
            return pre1 + [lit] + pre2
        raise UnknownSymbol(atom.pred)

    def _pred_literal(self, atom: Atom, env) -> TypedLiteral:
        got = self.lexicon.category_of_symbol(atom.pred)
        if not got:
            raise UnknownSymbol(atom.pred)
        category, _ = got
        if category not in ("tverb", "radj") or len(atom.args) != 2:
            raise AspSyntaxError(1, "cardinality literal must be a binary predication")
        v1 = self._arg_var(atom.args[0], env)
        v2 = self._arg_var(atom.args[1], env)
        kind = "pred2" if category == "tverb" else "prop2"
        polarity = STRONG if atom.strong else PLAIN
        return TypedLiteral(kind, (v1, v2), atom.pred, polarity)

    def _arg_var(self, arg, env) -> LogicVar:
        if isinstance(arg, str) and arg[:1].isupper():
            if arg not in env:
                env[arg] = LogicVar()
            return env[arg]
        if isinstance(arg, int):
            return self._const_var(("int", arg))
        return self._const_var(("const", arg))

    def _entity_items(self, arg, env):
        """(variable, entity literals) for one atom argument."""
        if isinstance(arg, str) and arg[:1].isupper():
            return self._arg_var(arg, env), []
        if isinstance(arg, int):
            v = self._arg_var(arg, env)
            noun = self.int_nouns.get(arg)
            if noun is None:
                raise UnknownSymbol(str(arg))
            return v, [class_(v, noun), integer(v, arg)]
        v = self._arg_var(arg, env)
        return v, [named(v, arg)]
