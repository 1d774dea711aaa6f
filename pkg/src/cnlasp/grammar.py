"""The bidirectional grammar.

One rule set serves both directions.  In proc mode the rules consume
sentence tokens and push typed literals onto the clause structure; in gen
mode they consume the (planned) internal format from the front and emit
tokens.  Only the terminal helpers branch on the mode — the preterminal
pairs are symmetric, everything above them is shared.

Backtracking is plain depth-first search over generator alternatives; all
state (token cursor, clause structure, antecedent store, substitution) is
immutable, so abandoning a branch costs nothing.  The first full derivation
wins, and rule order makes that choice deterministic: enumeration is tried
before verb-phrase coordination, relative clauses before clause splitting,
the universal reading of a rule before the conditional one.

Lookahead is the same parser run over a sentence prefix: every terminal
that would have inspected the missing next token reports what it was
prepared to accept, and each candidate is then verified by a bounded
search for a full-sentence completion, so every offer is honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

from . import anaphora
from .lexicon import Lexicon, MissingSurfaceForm
from .model import (
    ARROW_GEN,
    ARROW_PROC,
    FULL_STOP,
    GEN,
    PROC,
    CardSpec,
    GroupStack,
    InternalForm,
    ISA,
    LogicVar,
    PLAIN,
    STRONG,
    WEAK,
    QueryMark,
    Sublist,
    TypedLiteral,
    class_,
    integer,
    named,
    pred2,
    resolve,
    variable,
)
from .tokenizer import is_number_token, is_variable_token

# ---------------------------------------------------------------------------
# Errors, feature bundles, continuations
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected=(), sentence_index=None):
        self.position = position
        self.expected = list(expected)
        self.sentence_index = sentence_index
        detail = message
        if self.expected:
            cats = ", ".join(sorted({c.category for c in self.expected}))
            detail += f" (expected: {cats})"
        super().__init__(detail)


class GenerationError(ValueError):
    def __init__(self, message: str, clause_index=None, item=None):
        self.clause_index = clause_index
        self.item = item
        super().__init__(message)


@dataclass(frozen=True)
class Feats:
    """Feature bundle threaded through noun- and verb-phrase rules.

    The clause and antecedent difference pairs live on the parse state;
    here travel the clause type, the structural location (top level, rule
    body or rule head), coordination permission, grammatical function,
    number and the subject argument.
    """

    ct: str = "fact"      # fact | rule | constraint | query
    loc: str = "top"      # top | body | head
    crd: str = "+"
    fcn: str = "subj"
    num: str = "sg"
    arg: object = None

    @property
    def body_like(self) -> bool:
        return self.loc == "body" or self.ct == "query"


@dataclass(frozen=True)
class Continuation:
    """One admissible way to extend a sentence prefix."""

    category: str
    forms: tuple

    def admits(self, token: str) -> bool:
        if any(f and f[0].lower() == token.lower() for f in self.forms):
            return True
        if self.category == "number":
            return is_number_token(token) or token in NUM_WORDS
        if self.category == "variable":
            return is_variable_token(token)
        return False


# number words accepted in cardinality quantifiers
NUM_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}
WORD_FOR_NUM = {v: k for k, v in NUM_WORDS.items()}


# ---------------------------------------------------------------------------
# Parse state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class St:
    """Immutable derivation state: tokens, clause structure, antecedents,
    bindings.  ``toks``/``pos`` are the input cursor in proc mode; in gen
    mode ``toks`` accumulates the emitted sentence."""

    mode: str
    toks: tuple = ()
    pos: int = 0
    cl: GroupStack = field(default_factory=GroupStack)
    ante: GroupStack = field(default_factory=GroupStack)
    subst: dict = field(default_factory=dict)

    # -- proc side -----------------------------------------------------------

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def peek(self) -> Optional[str]:
        return None if self.at_end() else self.toks[self.pos]

    def adv(self, n: int = 1) -> "St":
        return replace(self, pos=self.pos + n)

    # -- gen side ------------------------------------------------------------

    def emit(self, words) -> "St":
        return replace(self, toks=self.toks + tuple(words))

    # -- shared --------------------------------------------------------------

    def with_cl(self, cl: GroupStack) -> "St":
        return replace(self, cl=cl)

    def with_ante(self, ante: GroupStack) -> "St":
        return replace(self, ante=ante)

    def with_subst(self, subst: dict) -> "St":
        return replace(self, subst=subst)

    def push(self, lit) -> "St":
        return replace(self, cl=self.cl.push(lit))


class Run:
    """Per-derivation context: lookahead probing and error watermarking."""

    __slots__ = ("probe", "offers", "watermark")

    def __init__(self, probe: bool = False):
        self.probe = probe
        self.offers: dict = {}
        self.watermark = 0

    def offer(self, category: str, form) -> None:
        self.offers.setdefault(category, set()).add(tuple(form))

    def continuations(self) -> list:
        return [
            Continuation(cat, tuple(sorted(forms)))
            for cat, forms in sorted(self.offers.items())
        ]


# ---------------------------------------------------------------------------
# The grammar
# ---------------------------------------------------------------------------


class Grammar:
    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self._lookahead_cache: dict = {}
        self._completable_cache: dict = {}
        self._fail_depth: dict = {}

    # =====================================================================
    # terminal helpers
    # =====================================================================

    def _word(self, run: Run, st: St, word: str, category: str = "kw") -> Iterator[St]:
        """Match (proc) or emit (gen) one function word.  Function words are
        matched case-insensitively so sentence-initial capitals just work."""
        if st.mode == GEN:
            yield st.emit([word])
            return
        if st.at_end():
            if run.probe:
                run.offer(category, (word,))
            return
        run.watermark = max(run.watermark, st.pos)
        if st.peek().lower() == word:
            yield st.adv()

    def _words(self, run: Run, st: St, words, category: str = "kw") -> Iterator[St]:
        states = [st]
        for w in words:
            states = [s2 for s in states for s2 in self._word(run, s, w, category)]
            if not states:
                return
        yield from states

    def _punct(self, run: Run, st: St, mark: str) -> Iterator[St]:
        if st.mode == GEN:
            yield st.emit([mark])
            return
        if st.at_end():
            if run.probe:
                run.offer("punct", (mark,))
            return
        run.watermark = max(run.watermark, st.pos)
        if st.peek() == mark:
            yield st.adv()

    def _number(self, run: Run, st: St) -> Iterator[tuple]:
        """Proc only: yield (value, state) for a digit token."""
        if st.at_end():
            if run.probe:
                run.offer("number", ("1",))
            return
        run.watermark = max(run.watermark, st.pos)
        tok = st.peek()
        if is_number_token(tok):
            yield int(tok), st.adv()

    def _variable_name(self, run: Run, st: St) -> Iterator[tuple]:
        """Proc only: yield (name, state) for a variable-name token."""
        if st.at_end():
            if run.probe:
                run.offer("variable", ("X",))
            return
        run.watermark = max(run.watermark, st.pos)
        tok = st.peek()
        if is_variable_token(tok):
            yield tok, st.adv()

    def _lex_proc(self, run: Run, st: St, category: str, num=None) -> Iterator[tuple]:
        """Proc lexicon terminal: yield (entry, state) longest match first.

        In probe mode an exhausted input offers every entry of the
        category; an input ending partway through a multi-token word form
        offers the form's remaining tokens."""
        if st.at_end():
            if run.probe:
                for e in self.lexicon.entries_of_category(category):
                    if num is None or e.num == num or e.num == "na":
                        run.offer(category, e.wform)
            return
        run.watermark = max(run.watermark, st.pos)
        if run.probe:
            remaining = len(st.toks) - st.pos
            tail = tuple(st.toks[st.pos:])
            for e in self.lexicon.entries_of_category(category):
                if num is not None and e.num not in (num, "na"):
                    continue
                if len(e.wform) > remaining and e.wform[:remaining] == tail:
                    run.offer(category, e.wform[remaining:])
        for entry, n in self.lexicon.lookup_by_form(st.toks, st.pos, category):
            if num is not None and entry.num not in (num, "na"):
                continue
            yield entry, st.adv(n)

    def _lex_gen(self, st: St, category: str, symbol: str, num=None) -> St:
        """Gen lexicon terminal: emit the first word form realising the
        symbol.  Raises MissingSurfaceForm — generation may not guess."""
        entry = self.lexicon.lookup_by_symbol(category, symbol, num)[0]
        return st.emit(entry.wform)

    # =====================================================================
    # noun phrases
    # =====================================================================

    def _fresh(self) -> LogicVar:
        return LogicVar()

    def np_pname(self, run: Run, st: St, feats: Feats) -> Iterator[tuple]:
        """Proper name; yields (state, var, num).  Proc pushes the named
        literal and runs proper-name anaphora; gen consumes it."""
        if st.mode == PROC:
            for entry, st1 in self._lex_proc(run, st, "pname"):
                x = self._fresh()
                lit = named(x, entry.symbol)
                cl, ante, subst = anaphora.resolve_proper_name(
                    lit, st1.cl.push(lit), st1.ante, st1.subst
                )
                yield st1.with_cl(cl).with_ante(ante).with_subst(subst), x, entry.num
        else:
            front = st.cl.front()
            if isinstance(front, TypedLiteral) and front.kind == "named":
                st1 = self._lex_gen(st, "pname", front.symbol)
                st1 = st1.with_cl(st1.cl.consume())
                st1 = st1.with_ante(anaphora.record_mention((front,), st1.ante))
                yield st1, front.args[0], "sg"

    def _appositions_proc(self, run: Run, st: St, x) -> Iterator[tuple]:
        """Optional integer or variable apposition after a noun.
        Yields (extra-literal or None, state); the bare reading comes last
        so explicit appositions win."""
        for val, st1 in self._number(run, st):
            yield integer(x, val), st1
        for name, st1 in self._variable_name(run, st):
            yield variable(x, name), st1
        yield None, st

    def np_indef(self, run: Run, st: St, feats: Feats) -> Iterator[tuple]:
        """'a N', 'a N X', 'a N 7': always introduces a new entity."""
        if st.mode == PROC:
            for st0 in self._both_articles(run, st):
                for entry, st1 in self._lex_proc(run, st0, "noun", "sg"):
                    x = self._fresh()
                    head_lit = class_(x, entry.symbol)
                    for extra, st2 in self._appositions_proc(run, st1, x):
                        lits = (head_lit,) + ((extra,) if extra else ())
                        st3 = st2.with_cl(st2.cl.push_all(lits))
                        st3 = st3.with_ante(anaphora.record_mention(lits, st3.ante))
                        yield st3, x, "sg"
        else:
            yield from self._np_noun_gen(st, definite=False)

    def np_def(self, run: Run, st: St, feats: Feats) -> Iterator[tuple]:
        """'the N', 'the N 1', 'the N X': resolved against the accessible
        antecedents; without one it introduces like an indefinite."""
        if st.mode == PROC:
            for st0 in self._word(run, st, "the", "det"):
                for entry, st1 in self._lex_proc(run, st0, "noun", "sg"):
                    x = self._fresh()
                    head_lit = class_(x, entry.symbol)
                    for extra, st2 in self._appositions_proc(run, st1, x):
                        lits = (head_lit,) + ((extra,) if extra else ())
                        cl, ante, subst = anaphora.resolve_definite(
                            lits, st2.cl.push_all(lits), st2.ante, st2.subst
                        )
                        yield st2.with_cl(cl).with_ante(ante).with_subst(subst), x, "sg"
        else:
            yield from self._np_noun_gen(st, definite=True)

    def _both_articles(self, run: Run, st: St) -> Iterator[St]:
        yield from self._word(run, st, "a", "det")
        yield from self._word(run, st, "an", "det")

    def _noun_group_gen(self, st: St):
        """Front-of-structure noun phrase material: class literal plus an
        optional apposition literal over the same entity variable."""
        front = st.cl.front()
        if not (isinstance(front, TypedLiteral) and front.kind == "class"
                and front.polarity == PLAIN):
            return None
        x = resolve(front.args[0], st.subst)
        lits = [front]
        rest = st.cl.peek(2)
        if len(rest) == 2 and isinstance(rest[1], TypedLiteral) and \
                rest[1].kind in ("integer", "variable") and \
                resolve(rest[1].args[0], st.subst) is x:
            lits.append(rest[1])
        return tuple(lits), x

    def _np_noun_gen(self, st: St, definite: bool) -> Iterator[tuple]:
        """Shared gen path for def/indef noun phrases.  The caller has
        already decided the determiner; this just realises and consumes."""
        got = self._noun_group_gen(st)
        if got is None:
            return
        lits, x = got
        det = "the" if definite else "a"
        st1 = st.emit([det])
        st1 = self._lex_gen(st1, "noun", lits[0].symbol, "sg")
        if len(lits) == 2:
            app = lits[1]
            st1 = st1.emit([str(app.symbol)])
        st1 = st1.with_cl(st1.cl.consume(len(lits)))
        if not definite:
            st1 = st1.with_ante(anaphora.record_mention(lits, st1.ante))
        yield st1, x, "sg"

    def _np_gen_dispatch(self, st: St, feats: Feats) -> Iterator[tuple]:
        """Gen-side noun phrase choice.  Proper names realise as names;
        integer-apposed noun phrases are always definite; anything else is
        definite exactly when an accessible antecedent licenses it."""
        front = st.cl.front()
        if isinstance(front, TypedLiteral) and front.kind == "named":
            yield from self.np_pname(None, st, feats)
            return
        got = self._noun_group_gen(st)
        if got is None:
            return
        lits, _ = got
        has_int = len(lits) == 2 and lits[1].kind == "integer"
        definite = has_int or anaphora.may_generate_definite(lits, st.ante, st.subst)
        if definite:
            yield from self._np_noun_gen(st, definite=True)
        elif feats.loc != "head":
            # conditional consequents take definite subjects only
            yield from self._np_noun_gen(st, definite=False)

    # =====================================================================
    # verb phrases
    # =====================================================================

    def vp(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """A coordinated verb phrase ('and'-chained units)."""
        for st1 in self.vp_unit(run, st, feats):
            if feats.crd == "+":
                for st2 in self._words(run, st1, ["and"], "conj"):
                    yield from self.vp(run, st2, feats)
            yield st1

    def vp_head(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """Head verb phrase: a single unit or an 'or'-disjunction whose
        disjuncts become sibling sublists of the head group."""
        if st.mode == PROC:
            yield from self._vp_head_proc(run, st, feats, groups=())
        else:
            front = st.cl.front()
            if isinstance(front, Sublist):
                yield from self._vp_head_gen_disj(run, st, feats, first=True)
            else:
                yield from self.vp_unit(run, st, replace(feats, crd="-"))

    def _vp_head_proc(self, run: Run, st: St, feats: Feats, groups) -> Iterator[St]:
        scratch = st.with_cl(st.cl.open_group())
        for st1 in self.vp_unit(run, scratch, replace(feats, crd="-")):
            items, cl_rest = st1.cl.close_group()
            st2 = st1.with_cl(cl_rest)
            collected = groups + (items,)
            for st3 in self._word(run, st2, "or", "conj"):
                yield from self._vp_head_proc(run, st3, feats, collected)
            if len(collected) == 1:
                # plain head: splice the single unit's items back in
                yield st2.with_cl(
                    st2.cl.replace_current(items + st2.cl.levels[0])
                )
            else:
                level = tuple(Sublist(g) for g in reversed(collected))
                yield st2.with_cl(
                    st2.cl.replace_current(level + st2.cl.levels[0])
                )

    def _vp_head_gen_disj(self, run: Run, st: St, feats: Feats, first: bool) -> Iterator[St]:
        front = st.cl.front()
        if not isinstance(front, Sublist):
            if st.cl.group_done():
                yield st
            return
        states = [st] if first else [s for s in self._word(run, st, "or", "conj")]
        for s in states:
            inner = s.with_cl(s.cl.consume().push_level(front.items))
            for s2 in self.vp_unit(run, inner, replace(feats, crd="-")):
                if s2.cl.group_done():
                    s3 = s2.with_cl(s2.cl.leave())
                    yield from self._vp_head_gen_disj(run, s3, feats, first=False)

    # -- verb phrase units -------------------------------------------------

    def vp_unit(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        if st.mode == PROC:
            yield from self._vp_unit_proc(run, st, feats)
        else:
            yield from self._vp_unit_gen(run, st, feats)

    # negation prefixes: (tokens-after-copula, polarity) and the aux form
    def _neg_options(self, feats: Feats):
        options = [((), PLAIN), (("not",), STRONG)]
        if feats.body_like:
            options.append((("not", "provably"), WEAK))
        return options

    def _vp_unit_proc(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        x = feats.arg
        # copula constructions
        for st1 in self._word(run, st, "is", "copula"):
            for neg_words, pol in self._neg_options(feats):
                for st2 in self._words(run, st1, neg_words, "neg"):
                    # 'is (not) a N' — copula + indefinite noun phrase; the
                    # complement noun describes the subject, so it becomes
                    # an antecedent for the subject's variable
                    for st3 in self._both_articles(run, st2):
                        for entry, st4 in self._lex_proc(run, st3, "noun", "sg"):
                            b = self._fresh()
                            st5 = st4.push(pred2(x, b, ISA)).push(
                                class_(b, entry.symbol).with_polarity(pol)
                            )
                            if pol == PLAIN:
                                st5 = st5.with_ante(anaphora.record_mention(
                                    (class_(x, entry.symbol),), st5.ante
                                ))
                            yield st5
                    # 'is (not) ADJ'
                    for entry, st3 in self._lex_proc(run, st2, "adj"):
                        yield st3.push(
                            TypedLiteral("prop1", (x,), entry.symbol, pol)
                        )
                    # 'is (not) RADJ OBJ'
                    for entry, st3 in self._lex_proc(run, st2, "radj"):
                        tpl = lambda o, e=entry, p=pol: TypedLiteral(
                            "prop2", (x, o), e.symbol, p
                        )
                        yield from self.object_np(run, st3, feats, tpl)
                        if pol == PLAIN:
                            yield from self._cqnt_object_proc(run, st3, feats, tpl)
        # plain verbs
        for entry, st1 in self._lex_proc(run, st, "iverb", feats.num):
            yield st1.push(TypedLiteral("pred1", (x,), entry.symbol, PLAIN))
        for entry, st1 in self._lex_proc(run, st, "tverb", feats.num):
            tpl = lambda o, e=entry: TypedLiteral("pred2", (x, o), e.symbol, PLAIN)
            yield from self.object_np(run, st1, feats, tpl)
            yield from self._cqnt_object_proc(run, st1, feats, tpl)
        # 'does not (provably) V'
        for st1 in self._words(run, st, ["does", "not"], "aux"):
            for neg_words, pol in ((("provably",), WEAK), ((), STRONG)):
                if pol == WEAK and not feats.body_like:
                    continue
                for st2 in self._words(run, st1, neg_words, "neg"):
                    for entry, st3 in self._lex_proc(run, st2, "iverb", "pl"):
                        yield st3.push(TypedLiteral("pred1", (x,), entry.symbol, pol))
                    for entry, st3 in self._lex_proc(run, st2, "tverb", "pl"):
                        tpl = lambda o, e=entry, p=pol: TypedLiteral(
                            "pred2", (x, o), e.symbol, p
                        )
                        yield from self.object_np(run, st3, feats, tpl)

    def _vp_unit_gen(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        x = feats.arg
        front = st.cl.front()
        if isinstance(front, CardSpec):
            yield from self._cqnt_object_gen(run, st, feats)
            return
        if not isinstance(front, TypedLiteral):
            return
        if resolve(front.args[0], st.subst) is not resolve(x, st.subst):
            return
        kind, pol, sym = front.kind, front.polarity, front.symbol

        def neg_cop(s: St) -> St:
            if pol == STRONG:
                return s.emit(["not"])
            if pol == WEAK:
                return s.emit(["not", "provably"])
            return s

        def neg_aux(s: St) -> St:
            if pol == STRONG:
                return s.emit(["does", "not"])
            if pol == WEAK:
                return s.emit(["does", "not", "provably"])
            return s

        if kind == "pred2" and sym == ISA:
            nxt = st.cl.peek(2)
            if len(nxt) == 2 and isinstance(nxt[1], TypedLiteral) and \
                    nxt[1].kind == "class" and \
                    resolve(nxt[1].args[0], st.subst) is resolve(front.args[1], st.subst):
                cls = nxt[1]
                st1 = st.emit(["is"])
                if cls.polarity == STRONG:
                    st1 = st1.emit(["not"])
                elif cls.polarity == WEAK:
                    st1 = st1.emit(["not", "provably"])
                st1 = st1.emit(["a"])
                st1 = self._lex_gen(st1, "noun", cls.symbol, "sg")
                st1 = st1.with_cl(st1.cl.consume(2))
                if cls.polarity == PLAIN:
                    st1 = st1.with_ante(anaphora.record_mention(
                        (class_(resolve(x, st1.subst), cls.symbol),), st1.ante
                    ))
                yield st1
            return
        if kind == "class":
            # bare class predication: realised as 'is a N'
            st1 = st.emit(["is"])
            st1 = neg_cop(st1)
            st1 = st1.emit(["a"])
            st1 = self._lex_gen(st1, "noun", sym, "sg")
            yield st1.with_cl(st1.cl.consume())
            return
        if kind == "prop1":
            st1 = neg_cop(st.emit(["is"]))
            yield self._lex_gen(st1, "adj", sym).with_cl(st.cl.consume())
            return
        if kind == "prop2":
            st1 = neg_cop(st.emit(["is"]))
            st1 = self._lex_gen(st1, "radj", sym)
            st1 = st1.with_cl(st1.cl.consume())
            yield from self._object_gen(run, st1, feats, front)
            return
        if kind == "pred1":
            if pol == PLAIN:
                st1 = self._lex_gen(st, "iverb", sym, "sg")
            else:
                st1 = self._lex_gen(neg_aux(st), "iverb", sym, "pl")
            yield st1.with_cl(st.cl.consume())
            return
        if kind == "pred2":
            if pol == PLAIN:
                st1 = self._lex_gen(st, "tverb", sym, "sg")
            else:
                st1 = self._lex_gen(neg_aux(st), "tverb", sym, "pl")
            st1 = st1.with_cl(st1.cl.consume())
            yield from self._object_gen(run, st1, feats, front)
            return

    # =====================================================================
    # objects: plain, enumerated, cardinality-quantified
    # =====================================================================

    def object_np(self, run: Run, st: St, feats: Feats, tpl) -> Iterator[St]:
        """Proc object position.  ``tpl(o)`` builds the predication literal
        for object variable ``o``; it is pushed before the object's own
        literals and repeated for every enumerated item."""
        ofeats = replace(feats, fcn="obj")
        # enumeration first: 'the Ns i, j and k' / 'P, Q and R'
        if feats.loc != "head":
            yield from self._enum_int_proc(run, st, ofeats, tpl)
            yield from self._enum_pname_proc(run, st, ofeats, tpl)
        # single proper name
        for st1, o, _ in self._np_obj_pname_proc(run, st, ofeats, tpl):
            yield st1
        # single definite / indefinite noun phrase
        for st1 in self._np_obj_noun_proc(run, st, ofeats, tpl):
            yield st1

    def _np_obj_pname_proc(self, run, st, feats, tpl):
        if st.mode != PROC:
            return
        for entry, st1 in self._lex_proc(run, st, "pname"):
            o = self._fresh()
            lit = named(o, entry.symbol)
            st2 = st1.push(tpl(o))
            cl, ante, subst = anaphora.resolve_proper_name(
                lit, st2.cl.push(lit), st2.ante, st2.subst
            )
            yield st2.with_cl(cl).with_ante(ante).with_subst(subst), o, entry.num

    def _np_obj_noun_proc(self, run, st, feats, tpl) -> Iterator[St]:
        for det, definite in (("the", True), ("a", False), ("an", False)):
            for st1 in self._word(run, st, det, "det"):
                for entry, st2 in self._lex_proc(run, st1, "noun", "sg"):
                    o = self._fresh()
                    head_lit = class_(o, entry.symbol)
                    for extra, st3 in self._appositions_proc(run, st2, o):
                        lits = (head_lit,) + ((extra,) if extra else ())
                        st4 = st3.push(tpl(o))
                        if definite:
                            cl, ante, subst = anaphora.resolve_definite(
                                lits, st4.cl.push_all(lits), st4.ante, st4.subst
                            )
                            yield st4.with_cl(cl).with_ante(ante).with_subst(subst)
                        else:
                            st5 = st4.with_cl(st4.cl.push_all(lits))
                            yield st5.with_ante(
                                anaphora.record_mention(lits, st5.ante)
                            )

    def _enum_int_proc(self, run, st, feats, tpl) -> Iterator[St]:
        """'the nodes 2, 3 and 4': plural noun, two or more integers joined
        by commas and a final 'and', one predication literal per item."""
        for st1 in self._word(run, st, "the", "det"):
            for entry, st2 in self._lex_proc(run, st1, "noun", "pl"):
                for st3 in self._enum_int_item(run, st2, entry.symbol, tpl):
                    yield from self._enum_int_rest(run, st3, entry.symbol, tpl)

    def _enum_int_item(self, run, st, noun_sym, tpl) -> Iterator[St]:
        for val, st1 in self._number(run, st):
            o = self._fresh()
            lits = (class_(o, noun_sym), integer(o, val))
            st2 = st1.push(tpl(o))
            cl, ante, subst = anaphora.resolve_definite(
                lits, st2.cl.push_all(lits), st2.ante, st2.subst
            )
            yield st2.with_cl(cl).with_ante(ante).with_subst(subst)

    def _enum_int_rest(self, run, st, noun_sym, tpl) -> Iterator[St]:
        for st1 in self._punct(run, st, ","):
            for st2 in self._enum_int_item(run, st1, noun_sym, tpl):
                yield from self._enum_int_rest(run, st2, noun_sym, tpl)
        for st1 in self._word(run, st, "and", "conj"):
            yield from self._enum_int_item(run, st1, noun_sym, tpl)

    def _enum_pname_proc(self, run, st, feats, tpl) -> Iterator[St]:
        """'COMP329, COMP330 and COMP332': two or more proper names."""

        def item(s: St):
            for entry, s1 in self._lex_proc(run, s, "pname"):
                o = self._fresh()
                lit = named(o, entry.symbol)
                s2 = s1.push(tpl(o))
                cl, ante, subst = anaphora.resolve_proper_name(
                    lit, s2.cl.push(lit), s2.ante, s2.subst
                )
                yield s2.with_cl(cl).with_ante(ante).with_subst(subst)

        def more(s: St, count: int) -> Iterator[St]:
            for s1 in self._punct(run, s, ","):
                for s2 in item(s1):
                    yield from more(s2, count + 1)
            for s1 in self._word(run, s, "and", "conj"):
                yield from item(s1)

        for s1 in item(st):
            yield from more(s1, 1)

    # -- gen object ----------------------------------------------------------

    def _object_gen(self, run: Run, st: St, feats: Feats, verb_lit) -> Iterator[St]:
        """Gen object position, with enumeration taking priority over verb
        phrase coordination when the same predication repeats."""
        repeats = self._enum_scan(st, verb_lit)
        if repeats is not None and feats.loc != "head":
            yield from self._enum_gen(st, verb_lit, repeats)
            return
        yield from (s for s, _, _ in self._np_gen_dispatch(st, replace(feats, fcn="obj", loc="top")))

    def _same_predication(self, a, b, subst) -> bool:
        return (
            isinstance(b, TypedLiteral)
            and b.kind == a.kind
            and b.symbol == a.symbol
            and b.polarity == a.polarity
            and resolve(b.args[0], subst) is resolve(a.args[0], subst)
        )

    def _enum_scan(self, st: St, verb_lit):
        """Detect the repeated-(predication, object) layout at the front of
        the current group: obj1 [pred obj2] [pred obj3] ...

        Returns a list of (kind, width) pairs per object — width 1 for a
        proper name, 2 for a noun + integer apposition — or None when fewer
        than two objects repeat, when the noun differs between items or
        when the items mix flavours."""
        items = st.cl.levels[0]
        layout = []
        noun_syms = set()
        i = 0
        while True:
            if layout:
                if i >= len(items) or not self._same_predication(verb_lit, items[i], st.subst):
                    break
                i += 1
            if i >= len(items) or not isinstance(items[i], TypedLiteral):
                return None
            obj = items[i]
            if obj.kind == "named":
                layout.append(("named", 1))
                i += 1
            elif obj.kind == "class" and obj.polarity == PLAIN and i + 1 < len(items) and \
                    isinstance(items[i + 1], TypedLiteral) and \
                    items[i + 1].kind == "integer" and \
                    resolve(items[i + 1].args[0], st.subst) is resolve(obj.args[0], st.subst):
                layout.append(("class", 2))
                noun_syms.add(obj.symbol)
                i += 2
            else:
                return None
        if len(layout) < 2:
            return None
        kinds = {kind for kind, _ in layout}
        if len(kinds) != 1 or len(noun_syms) > 1:
            return None
        return layout

    def _enum_gen(self, st: St, verb_lit, layout) -> Iterator[St]:
        k = len(layout)
        st1 = st
        if layout[0][0] == "class":
            noun_sym = st.cl.front().symbol
            st1 = st1.emit(["the"])
            st1 = self._lex_gen(st1, "noun", noun_sym, "pl")
        for idx, (kind, width) in enumerate(layout):
            if idx > 0:
                st1 = st1.emit([","] if idx < k - 1 else ["and"])
                st1 = st1.with_cl(st1.cl.consume())  # the repeated predication
            group = st1.cl.peek(width)
            if kind == "named":
                st1 = self._lex_gen(st1, "pname", group[0].symbol)
            else:
                st1 = st1.emit([str(group[1].symbol)])
            st1 = st1.with_cl(st1.cl.consume(width))
            st1 = st1.with_ante(anaphora.record_mention(group, st1.ante))
        yield st1

    # -- cardinality quantifiers ----------------------------------------------

    def _cqnt_allowed(self, feats: Feats) -> bool:
        return feats.loc == "head" or (feats.ct == "fact" and feats.loc == "top")

    def _cqnt_object_proc(self, run: Run, st: St, feats: Feats, tpl) -> Iterator[St]:
        if not self._cqnt_allowed(feats):
            return
        bounds = []
        for st1 in self._word(run, st, "exactly", "cqnt"):
            bounds.append((st1, "exact"))
        for st1 in self._words(run, st, ["at", "least"], "cqnt"):
            bounds.append((st1, "least"))
        for st1 in self._words(run, st, ["at", "most"], "cqnt"):
            bounds.append((st1, "most"))
        for st1, flavour in bounds:
            for n, st2 in self._cqnt_number_proc(run, st1):
                num = "sg" if n == 1 else "pl"
                for entry, st3 in self._lex_proc(run, st2, "noun", num):
                    b = self._fresh()
                    lower, upper = {
                        "exact": (n, n),
                        "least": (n, None),
                        "most": (0, n),
                    }[flavour]
                    spec = CardSpec(lower, upper, (tpl(b),), (class_(b, entry.symbol),))
                    yield st3.push(spec)

    def _cqnt_number_proc(self, run: Run, st: St) -> Iterator[tuple]:
        if st.at_end():
            if run.probe:
                run.offer("number", ("one",))
            return
        run.watermark = max(run.watermark, st.pos)
        tok = st.peek()
        if tok in NUM_WORDS:
            yield NUM_WORDS[tok], st.adv()
        elif is_number_token(tok):
            yield int(tok), st.adv()

    def _cqnt_object_gen(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        front = st.cl.front()
        if not isinstance(front, CardSpec) or len(front.lit) != 1 or len(front.conds) != 1:
            return
        lit, cond = front.lit[0], front.conds[0]
        if resolve(lit.args[0], st.subst) is not resolve(feats.arg, st.subst):
            return
        if lit.kind == "prop2":
            st1 = st.emit(["is"])
            st1 = self._lex_gen(st1, "radj", lit.symbol)
        elif lit.kind == "pred2":
            st1 = self._lex_gen(st, "tverb", lit.symbol, "sg")
        else:
            return
        lower, upper = front.lower, front.upper
        if upper is not None and lower == upper:
            n, words = lower, ["exactly"]
        elif upper is None:
            n, words = lower, ["at", "least"]
        elif lower == 0:
            n, words = upper, ["at", "most"]
        else:
            return  # bounds like "1 { ... } 2" have no quantifier phrasing
        st1 = st1.emit(words)
        st1 = st1.emit([WORD_FOR_NUM.get(n, str(n))])
        st1 = self._lex_gen(st1, "noun", cond.symbol, "sg" if n == 1 else "pl")
        yield st1.with_cl(st1.cl.consume())

    # =====================================================================
    # relative clauses and subject noun phrases
    # =====================================================================

    def rc(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """'who VP' on a quantified or indefinite subject; the verb phrase
        lands in the same (body) group as the subject's noun literal."""
        for st1 in self._word(run, st, "who", "rel"):
            yield from self.vp(run, st1, replace(feats, loc="body"))

    def np_subject(self, run: Run, st: St, feats: Feats) -> Iterator[tuple]:
        """Subject noun phrase; yields (state, var, num, rc_allowed).

        Declarative facts take proper names and definite noun phrases;
        body sentences also take indefinites (optionally with a relative
        clause); conditional consequents take definite noun phrases only.
        """
        if st.mode == GEN:
            if feats.loc == "body":
                for st1, x, num in self._np_gen_dispatch(st, feats):
                    front = st1.cl.front()
                    indef_like = not isinstance(st.cl.front(), TypedLiteral) or \
                        st.cl.front().kind != "named"
                    yield st1, x, num, indef_like
            else:
                for st1, x, num in self._np_gen_dispatch(st, feats):
                    yield st1, x, num, False
            return
        if feats.loc == "head":
            # conditional consequents: definite noun phrases (referring back
            # into the body) or proper names, never indefinites
            for st1, x, num in self.np_def(run, st, feats):
                yield st1, x, num, False
            for st1, x, num in self.np_pname(run, st, feats):
                yield st1, x, num, False
            return
        if feats.loc == "body":
            for st1, x, num in self.np_indef(run, st, feats):
                yield st1, x, num, True
            for st1, x, num in self.np_pname(run, st, feats):
                yield st1, x, num, False
            for st1, x, num in self.np_def(run, st, feats):
                yield st1, x, num, True
            return
        # declarative fact subjects
        for st1, x, num in self.np_pname(run, st, feats):
            yield st1, x, num, False
        for st1, x, num in self.np_def(run, st, feats):
            yield st1, x, num, False

    # =====================================================================
    # sentences
    # =====================================================================

    def _fs(self, run: Run, st: St) -> Iterator[St]:
        """Full stop: token and item together."""
        for st1 in self._punct(run, st, "."):
            if st.mode == PROC:
                yield st1.push(FULL_STOP)
            else:
                front = st1.cl.front()
                if front is FULL_STOP:
                    yield st1.with_cl(st1.cl.consume())

    def _qm(self, run: Run, st: St, x) -> Iterator[St]:
        """Question mark: token plus the query item carrying the answer
        variable."""
        for st1 in self._punct(run, st, "?"):
            if st.mode == PROC:
                yield st1.push(QueryMark(x))
            else:
                front = st1.cl.front()
                if isinstance(front, QueryMark) and \
                        resolve(front.var, st1.subst) is resolve(x, st1.subst):
                    yield st1.with_cl(st1.cl.consume())

    def s_fact(self, run: Run, st: St) -> Iterator[St]:
        feats = Feats(ct="fact", loc="top")
        for st1, x, num, _ in self.np_subject(run, st, feats):
            vfeats = replace(feats, num=num, arg=x)
            for st2 in self.vp(run, st1, vfeats):
                yield from self._fs(run, st2)

    def s_there(self, run: Run, st: St) -> Iterator[St]:
        """Expletive 'There is a N.' — introduces an entity, no predication."""
        if st.mode == PROC:
            for st1 in self._words(run, st, ["there", "is"], "kw"):
                for st2, _, _ in self.np_indef(run, st1, Feats(ct="fact", loc="top")):
                    yield from self._fs(run, st2)
        else:
            got = self._noun_group_gen(st)
            if got is None:
                return
            lits, _ = got
            if any(l.polarity != PLAIN for l in lits):
                return
            st1 = st.emit(["there", "is"])
            for st2, _, _ in self._np_noun_gen(st1, definite=False):
                yield from self._fs(run, st2)

    def s_universal(self, run: Run, st: St) -> Iterator[St]:
        """'Every N [who VP] VP.' — a rule whose body holds the subject
        noun and relative clause and whose head holds the main verb phrase."""
        if st.mode == PROC:
            for st1 in self._word(run, st, "every", "det"):
                st2 = st1.with_cl(st1.cl.open_group())
                st2 = st2.with_ante(st2.ante.open_group())
                for entry, st3 in self._lex_proc(run, st2, "noun", "sg"):
                    x = self._fresh()
                    lit = class_(x, entry.symbol)
                    st4 = st3.push(lit)
                    st4 = st4.with_ante(anaphora.record_mention((lit,), st4.ante))
                    bfeats = Feats(ct="rule", loc="body", num="sg", arg=x)
                    for st5 in self._maybe_rc(run, st4, bfeats):
                        for st6 in self._head_after_body(run, st5, x):
                            yield st6
        else:
            yield from self._rule_gen(run, st, universal=True)

    def _maybe_rc(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        yield from self.rc(run, st, feats)
        yield st

    def _head_after_body(self, run: Run, st: St, x) -> Iterator[St]:
        """Close the body group, parse the head verb phrase in its own
        group, assemble the rule items and finish with the full stop."""
        body_items, cl0 = st.cl.close_group()
        st1 = st.with_cl(cl0.open_group())
        hfeats = Feats(ct="rule", loc="head", num="sg", arg=x)
        for st2 in self.vp_head(run, st1, hfeats):
            head_items, cl1 = st2.cl.close_group()
            cl2 = cl1.push(Sublist(head_items)).push(ARROW_PROC).push(Sublist(body_items))
            st3 = st2.with_cl(cl2)
            for st4 in self._fs(run, st3):
                _, ante0 = st4.ante.close_group()
                yield st4.with_ante(ante0)

    def s_conditional(self, run: Run, st: St) -> Iterator[St]:
        """'If S [and S]* then S.' — sentence-level rule construction."""
        if st.mode == PROC:
            for st1 in self._word(run, st, "if", "kw"):
                st2 = st1.with_cl(st1.cl.open_group())
                st2 = st2.with_ante(st2.ante.open_group())
                for st3 in self._simple_seq(run, st2, Feats(ct="rule", loc="body")):
                    body_items, cl0 = st3.cl.close_group()
                    for st4 in self._word(run, st3.with_cl(cl0), "then", "kw"):
                        st5 = st4.with_cl(st4.cl.open_group())
                        for st6 in self.s_simple(run, st5, Feats(ct="rule", loc="head")):
                            head_items, cl1 = st6.cl.close_group()
                            cl2 = cl1.push(Sublist(head_items)).push(ARROW_PROC).push(Sublist(body_items))
                            for st7 in self._fs(run, st6.with_cl(cl2)):
                                _, ante0 = st7.ante.close_group()
                                yield st7.with_ante(ante0)
        else:
            yield from self._rule_gen(run, st, universal=False)

    def s_constraint(self, run: Run, st: St) -> Iterator[St]:
        """'It is not the case that S [and S]*.' — a headless rule."""
        if st.mode == PROC:
            for st1 in self._words(run, st, ["it", "is", "not", "the", "case", "that"], "kw"):
                st2 = st1.with_cl(st1.cl.open_group())
                st2 = st2.with_ante(st2.ante.open_group())
                for st3 in self._simple_seq(run, st2, Feats(ct="constraint", loc="body")):
                    body_items, cl0 = st3.cl.close_group()
                    cl1 = cl0.push(Sublist(())).push(ARROW_PROC).push(Sublist(body_items))
                    for st4 in self._fs(run, st3.with_cl(cl1)):
                        _, ante0 = st4.ante.close_group()
                        yield st4.with_ante(ante0)
        else:
            front3 = st.cl.peek(3)
            if len(front3) == 3 and isinstance(front3[0], Sublist) and \
                    not front3[0].items and front3[1] is ARROW_GEN and \
                    isinstance(front3[2], Sublist):
                body = front3[2].items
                st1 = st.with_cl(st.cl.consume(3).push_level(body))
                st1 = st1.with_ante(st1.ante.open_group())
                st2 = st1.emit(["it", "is", "not", "the", "case", "that"])
                for st3 in self._simple_seq(run, st2, Feats(ct="constraint", loc="body")):
                    if st3.cl.group_done():
                        st4 = st3.with_cl(st3.cl.leave())
                        for st5 in self._fs(run, st4):
                            _, ante0 = st5.ante.close_group()
                            yield st5.with_ante(ante0)

    def _simple_seq(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """One or more simple sentences joined by 'and'."""
        for st1 in self.s_simple(run, st, feats):
            for st2 in self._word(run, st1, "and", "conj"):
                yield from self._simple_seq(run, st2, feats)
            yield st1

    def s_simple(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """Subject + verb phrase, no terminator: the building block of
        conditional antecedents, consequents and constraint scopes.

        In head position the verb phrase may be disjoined but not
        coordinated; everywhere else the reverse holds."""
        vp_rule = self.vp_head if feats.loc == "head" else self.vp
        if st.mode == PROC:
            for st1, x, num, rc_ok in self.np_subject(run, st, feats):
                vfeats = replace(feats, num=num, arg=x)
                if rc_ok:
                    for st2 in self.rc(run, st1, vfeats):
                        yield from vp_rule(run, st2, vfeats)
                yield from vp_rule(run, st1, vfeats)
            if feats.loc == "body":
                for st1 in self._words(run, st, ["there", "is"], "kw"):
                    for st2, _, _ in self.np_indef(run, st1, feats):
                        yield st2
        else:
            for st1, x, num, rc_ok in self.np_subject(run, st, feats):
                vfeats = replace(feats, num=num, arg=x)
                if rc_ok:
                    for st2 in self.rc(run, st1, replace(vfeats, crd="-")):
                        yield from vp_rule(run, st2, vfeats)
                yield from vp_rule(run, st1, vfeats)
            # entity-only remainder: 'there is a N'
            got = self._noun_group_gen(st)
            if got is not None and feats.loc == "body":
                lits, _ = got
                if all(l.polarity == PLAIN for l in lits):
                    st1 = st.emit(["there", "is"])
                    for st2, _, _ in self._np_noun_gen(st1, definite=False):
                        yield st2

    def s_question(self, run: Run, st: St) -> Iterator[St]:
        """'Who VP?' — the answer variable rides on the query mark and the
        answer literal itself is synthesised later by the writer."""
        feats = Feats(ct="query", loc="top", num="sg")
        if st.mode == PROC:
            for wh in ("who", "what"):
                for st1 in self._word(run, st, wh, "wh"):
                    x = self._fresh()
                    for st2 in self.vp(run, st1, replace(feats, arg=x)):
                        yield from self._qm(run, st2, x)
        else:
            front = st.cl.front()
            if not isinstance(front, TypedLiteral):
                return
            x = resolve(front.args[0], st.subst)
            st1 = st.emit(["who"])
            for st2 in self.vp(run, st1, replace(feats, arg=x)):
                yield from self._qm(run, st2, x)

    # -- rule generation (universal first, conditional as fallback) ----------

    def _rule_gen(self, run: Run, st: St, universal: bool) -> Iterator[St]:
        front3 = st.cl.peek(3)
        if not (len(front3) == 3 and isinstance(front3[0], Sublist) and
                front3[0].items and front3[1] is ARROW_GEN and
                isinstance(front3[2], Sublist)):
            return
        head, body = front3[0].items, front3[2].items
        cl1 = st.cl.consume(3).push_level(head).push_level(body)
        st1 = st.with_cl(cl1).with_ante(st.ante.open_group())
        if universal:
            if not (body and isinstance(body[0], TypedLiteral) and
                    body[0].kind == "class" and body[0].polarity == PLAIN):
                return
            noun = body[0]
            x = resolve(noun.args[0], st1.subst)
            st2 = st1.emit(["every"])
            st2 = self._lex_gen(st2, "noun", noun.symbol, "sg")
            st2 = st2.with_cl(st2.cl.consume())
            st2 = st2.with_ante(anaphora.record_mention((noun,), st2.ante))
            bfeats = Feats(ct="rule", loc="body", num="sg", arg=x)
            for st3 in self._universal_body_rest(run, st2, bfeats):
                st4 = st3.with_cl(st3.cl.leave())
                hfeats = Feats(ct="rule", loc="head", num="sg", arg=x)
                for st5 in self.vp_head(run, st4, hfeats):
                    if st5.cl.group_done():
                        st6 = st5.with_cl(st5.cl.leave())
                        for st7 in self._fs(run, st6):
                            _, ante0 = st7.ante.close_group()
                            yield st7.with_ante(ante0)
        else:
            st2 = st1.emit(["if"])
            for st3 in self._simple_seq(run, st2, Feats(ct="rule", loc="body")):
                if not st3.cl.group_done():
                    continue
                st4 = st3.with_cl(st3.cl.leave()).emit(["then"])
                for st5 in self.s_simple(run, st4, Feats(ct="rule", loc="head")):
                    if st5.cl.group_done():
                        st6 = st5.with_cl(st5.cl.leave())
                        for st7 in self._fs(run, st6):
                            _, ante0 = st7.ante.close_group()
                            yield st7.with_ante(ante0)

    def _universal_body_rest(self, run: Run, st: St, feats: Feats) -> Iterator[St]:
        """After 'Every N': an optional relative clause must account for the
        whole remaining body group."""
        if st.cl.group_done():
            yield st
            return
        for st1 in self.rc(run, st, feats):
            if st1.cl.group_done():
                yield st1

    # =====================================================================
    # sentence dispatch and public entry points
    # =====================================================================

    def sentence(self, run: Run, st: St) -> Iterator[St]:
        if st.mode == PROC:
            yield from self.s_universal(run, st)
            yield from self.s_conditional(run, st)
            yield from self.s_constraint(run, st)
            yield from self.s_question(run, st)
            yield from self.s_there(run, st)
            yield from self.s_fact(run, st)
        else:
            yield from self.s_constraint(run, st)
            yield from self.s_universal(run, st)
            yield from self.s_conditional(run, st)
            yield from self.s_question(run, st)
            yield from self.s_fact(run, st)
            yield from self.s_there(run, st)

    # -- parsing --------------------------------------------------------------

    def parse_sentence(self, tokens, cl: GroupStack = None, ante: GroupStack = None,
                       subst: dict = None):
        """Parse one sentence, threading the clause structure and antecedent
        store.  Returns (cl, ante, subst).  Raises ParseError carrying the
        failure position and the honest continuations at that point."""
        cl = cl if cl is not None else GroupStack()
        ante = ante if ante is not None else GroupStack()
        subst = subst if subst is not None else {}
        run = Run()
        st = St(mode=PROC, toks=tuple(tokens), pos=0, cl=cl, ante=ante, subst=subst)
        for out in self.sentence(run, st):
            if out.at_end():
                return out.cl, out.ante, out.subst
        pos = min(run.watermark, max(len(tokens) - 1, 0))
        bad = tokens[pos] if pos < len(tokens) else "end"
        raise ParseError(
            f"no parse at token {pos} ({bad!r})",
            pos,
            self.lookahead(tokens[:pos], cl, ante, subst),
        )

    def parse_specification(self, sentences) -> InternalForm:
        """Parse a whole specification (a list of sentence token lists) into
        the proc-order internal form, starting from the empty nested form."""
        cl, ante, subst = GroupStack(), GroupStack(), {}
        for idx, toks in enumerate(sentences):
            try:
                cl, ante, subst = self.parse_sentence(toks, cl, ante, subst)
            except ParseError as err:
                err.sentence_index = idx
                raise
        form = InternalForm(cl.levels[0], PROC)
        return form.walk(subst)

    # -- generation -------------------------------------------------------------

    def generate_sentence(self, cl: GroupStack, ante: GroupStack = None,
                          subst: dict = None):
        """Generate one sentence from the front of a gen-order structure.

        Returns (tokens, cl, ante, subst) or None when the structure is
        exhausted.  The first token is capitalised, matching the surface
        convention of the language."""
        ante = ante if ante is not None else GroupStack()
        subst = subst if subst is not None else {}
        if cl.group_done():
            return None
        run = Run()
        st = St(mode=GEN, toks=(), pos=0, cl=cl, ante=ante, subst=subst)
        for out in self.sentence(run, st):
            toks = list(out.toks)
            toks[0] = toks[0][:1].upper() + toks[0][1:]
            return toks, out.cl, out.ante, out.subst
        offending = cl.front()
        raise GenerationError(
            f"no grammar rule consumes {offending!r}", item=offending
        )

    def generate_program(self, form: InternalForm):
        """Verbalise a whole gen-order internal form; returns the list of
        sentence token lists."""
        if form.order != GEN:
            raise ValueError("generation needs a gen-order form")
        cl = GroupStack((tuple(form.items),))
        ante, subst = GroupStack(), {}
        sentences = []
        index = 0
        while not cl.group_done():
            try:
                got = self.generate_sentence(cl, ante, subst)
            except GenerationError as err:
                err.clause_index = index
                raise
            if got is None:
                break
            toks, cl, ante, subst = got
            sentences.append(toks)
            index += 1
        return sentences

    # -- lookahead -----------------------------------------------------------

    def lookahead(self, prefix, cl: GroupStack = None, ante: GroupStack = None,
                  subst: dict = None, max_depth: int = 30):
        """Admissible continuations of a sentence prefix.

        Runs the parser over the prefix collecting every terminal the
        grammar was prepared to match next, then keeps only candidates from
        which a bounded search finds a full-sentence completion — offers
        are honest by construction.

        Results are memoised per prefix.  Whether a sentence parses never
        depends on the surrounding document in this language (a definite
        noun phrase without an antecedent simply introduces its entity),
        so the memo is sound across contexts; the context still shapes the
        error diagnostics built on top of this."""
        prefix = tuple(prefix)
        if prefix in self._lookahead_cache:
            return self._lookahead_cache[prefix]
        raw = self._frontier(prefix, cl, ante, subst)
        honest = []
        for cont in raw:
            keep = []
            for f in cont.forms:
                if self._completable(prefix + f, cl, ante, subst, max_depth):
                    keep.append(f)
            if keep:
                honest.append(Continuation(cont.category, tuple(keep)))
        self._lookahead_cache[prefix] = honest
        return honest

    def _frontier(self, prefix, cl, ante, subst):
        run = Run(probe=True)
        st = St(
            mode=PROC, toks=tuple(prefix), pos=0,
            cl=cl if cl is not None else GroupStack(),
            ante=ante if ante is not None else GroupStack(),
            subst=subst if subst is not None else {},
        )
        for _ in self.sentence(run, st):
            pass  # probe mode: complete parses of the prefix itself are fine
        return run.continuations()

    def _completable(self, tokens, cl, ante, subst, depth) -> bool:
        """Bounded search: can ``tokens`` be extended to a full sentence?

        Successes are memoised unconditionally; failures are memoised with
        the depth budget they exhausted, so a failure only answers queries
        with at most that much budget (parseability itself is
        context-independent in this language)."""
        tokens = tuple(tokens)
        if tokens in self._completable_cache:
            return True
        if self._fail_depth.get(tokens, -1) >= depth:
            return False
        run = Run(probe=True)
        st = St(
            mode=PROC, toks=tokens, pos=0,
            cl=cl if cl is not None else GroupStack(),
            ante=ante if ante is not None else GroupStack(),
            subst=subst if subst is not None else {},
        )
        for out in self.sentence(run, st):
            if out.at_end():
                self._completable_cache[tokens] = True
                return True
        if depth > 0:
            for cont in run.continuations():
                for f in cont.forms:
                    if self._completable(tokens + f, cl, ante, subst, depth - len(f)):
                        self._completable_cache[tokens] = True
                        return True
        self._fail_depth[tokens] = max(self._fail_depth.get(tokens, -1), depth)
        return False
