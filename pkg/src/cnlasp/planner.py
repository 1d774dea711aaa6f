"""Sentence planning: reorganising the gen-order internal form before the
grammar verbalises it.

Three aggregation steps run in a fixed pipeline:

  1. variable-name insertion — clauses mentioning two entities under the
     same noun get explicit names (X, Y, ...) so the surface language can
     keep them apart;
  2. enumeration — adjacent facts repeating one binary predication under
     one subject merge, so "connected_to(4,1). connected_to(4,2)." comes
     out as "the nodes 1 and 2" rather than a repeated verb phrase;
  3. verb-phrase coordination — adjacent facts sharing a subject with
     predications of equal argument count merge, at most three at a time.

A final pass guarantees generability: any rule or constraint whose literal
order the grammar cannot consume directly (re-mentioned entities appear
only once in the clause) is re-linearised into subject-predication-object
runs with the re-mentions duplicated; the parallel antecedent store then
makes those duplicates surface as definite noun phrases.

The whole pipeline is idempotent: planned segments never merge again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .grammar import GenerationError, Grammar
from .model import (
    ARROW_GEN,
    FULL_STOP,
    GEN,
    ISA,
    PLAIN,
    CardSpec,
    GroupStack,
    InternalForm,
    QueryMark,
    Sublist,
    TypedLiteral,
    is_predication,
    resolve,
    variable,
)

VARIABLE_NAMES = ("X", "Y", "Z", "U", "V", "W")


class NameExhaustion(ValueError):
    def __init__(self):
        super().__init__(
            "more than six same-noun variables in one clause; "
            "no variable names left"
        )


class PlanningError(ValueError):
    pass


# ---------------------------------------------------------------------------
# segment profiles
# ---------------------------------------------------------------------------


@dataclass
class _Profile:
    """Shape of one fact segment, if it is simple enough to aggregate."""

    kind: str                  # entity | unary | binary | isa
    subject: object = None     # entity variable (resolved identity)
    subject_lits: tuple = ()
    pred: Optional[TypedLiteral] = None
    object: object = None
    object_lits: tuple = ()


def _profile_segment(seg) -> Optional[_Profile]:
    """Classify a fact segment; None when it is not aggregation material
    (rules, queries, cardinality items, already-merged segments)."""
    items = seg[:-1]
    if seg[-1] is not FULL_STOP:
        return None
    if not all(isinstance(i, TypedLiteral) for i in items):
        return None
    preds = [i for i in items if is_predication(i)]
    entities = [i for i in items if not is_predication(i)]
    if not preds:
        if not items:
            return None
        subj = items[0].args[0]
        if any(e.args[0] is not subj for e in entities):
            return None
        return _Profile("entity", subj, tuple(items))
    if len(preds) != 1:
        return None
    pred = preds[0]
    if pred.kind == "pred2" and pred.symbol == ISA:
        return _Profile("isa")
    subj = pred.args[0]
    subj_lits = tuple(e for e in entities if e.args[0] is subj)
    if len(pred.args) == 1:
        if len(subj_lits) != len(entities):
            return None
        return _Profile("unary", subj, subj_lits, pred)
    obj = pred.args[1]
    obj_lits = tuple(e for e in entities if e.args[0] is obj)
    if len(subj_lits) + len(obj_lits) != len(entities):
        return None
    return _Profile("binary", subj, subj_lits, pred, obj, obj_lits)


def _is_rule_segment(seg) -> bool:
    return (
        len(seg) == 4
        and isinstance(seg[0], Sublist)
        and seg[1] is ARROW_GEN
        and isinstance(seg[2], Sublist)
        and seg[3] is FULL_STOP
    )


def _rebuild(segments) -> InternalForm:
    items = []
    for seg in segments:
        items.extend(seg)
    return InternalForm(tuple(items), GEN)


def _same_lit_content(a, b) -> bool:
    """Same literal multiset up to instance identity (kind, symbol,
    polarity, resolved argument objects)."""
    def key(lits):
        return sorted(
            (l.kind, str(l.symbol), l.polarity, tuple(id(x) for x in l.args))
            for l in lits
        )
    return key(a) == key(b)


# ---------------------------------------------------------------------------
# variable-name insertion
# ---------------------------------------------------------------------------


def insert_variable_names(form: InternalForm) -> InternalForm:
    """Give same-noun entity variables of a rule/constraint clause explicit
    names, X, Y, Z, U, V, W in first-occurrence order."""
    out = []
    for seg in form.segments():
        if _is_rule_segment(seg) or isinstance(seg[-1], QueryMark):
            out.append(_name_clause_vars(seg))
        else:
            out.append(seg)
    return _rebuild(out)


def _clause_literals(seg, into_cards: bool = True):
    for item in seg:
        if isinstance(item, TypedLiteral):
            yield item
        elif isinstance(item, Sublist):
            yield from _clause_literals(item.items, into_cards)
        elif isinstance(item, CardSpec) and into_cards:
            yield from item.lit
            yield from item.conds


def _name_clause_vars(seg):
    # cardinality-quantified objects have no surface position for a name,
    # so literals inside a CardSpec neither clash nor get named
    by_noun: dict = {}
    named_already = set()
    order = []
    for lit in _clause_literals(seg, into_cards=False):
        if lit.kind == "class":
            v = lit.args[0]
            group = by_noun.setdefault(lit.symbol, [])
            if v not in group:
                group.append(v)
                order.append(v)
        elif lit.kind == "variable":
            named_already.add(lit.args[0])
    clashing = set()
    for noun, vars_ in by_noun.items():
        if len(vars_) > 1:
            clashing.update(vars_)
    targets = [v for v in order if v in clashing and v not in named_already]
    if not targets:
        return seg
    if len(targets) > len(VARIABLE_NAMES):
        raise NameExhaustion()
    names = {v: VARIABLE_NAMES[i] for i, v in enumerate(targets)}
    return tuple(_insert_names_items(seg, names))


def _insert_names_items(items, names):
    out = []
    for item in items:
        if isinstance(item, Sublist):
            out.append(Sublist(tuple(_insert_names_items(item.items, names))))
        elif isinstance(item, TypedLiteral) and item.kind == "class" and \
                item.args[0] in names:
            out.append(item)
            out.append(variable(item.args[0], names[item.args[0]]))
        else:
            out.append(item)
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def plan_enumeration(form: InternalForm) -> InternalForm:
    """Merge adjacent facts that repeat one binary predication under one
    subject, absorbing the interleaved entity-introduction facts that the
    original object noun phrases gave rise to."""
    segments = form.segments()
    profiles = [_profile_segment(s) for s in segments]
    out = []
    i = 0
    while i < len(segments):
        p = profiles[i]
        start = i
        subj_lits = ()
        if p is not None and p.kind == "entity":
            nxt = profiles[i + 1] if i + 1 < len(segments) else None
            if nxt is not None and nxt.kind == "binary" and \
                    nxt.subject is p.subject and \
                    _same_lit_content(p.subject_lits, nxt.subject_lits):
                subj_lits = p.subject_lits
                i += 1
                p = nxt
            else:
                out.append(segments[i])
                i += 1
                continue
        if p is None or p.kind != "binary":
            out.append(segments[i])
            i += 1
            continue
        subject, symbol, pol = p.subject, p.pred.symbol, p.pred.polarity
        if not subj_lits:
            subj_lits = p.subject_lits
        merged = list(subj_lits)
        count = 0
        while i < len(segments):
            q = profiles[i]
            if q is None or q.kind != "binary" or q.subject is not subject or \
                    q.pred.symbol != symbol or q.pred.polarity != pol:
                break
            merged.append(q.pred)
            merged.extend(q.object_lits)
            count += 1
            i += 1
            # absorb the entity fact introducing this object — but only if
            # it repeats exactly what the object noun phrase already says
            if i < len(segments):
                nxt = profiles[i]
                if nxt is not None and nxt.kind == "entity" and \
                        nxt.subject is q.object and \
                        _same_lit_content(nxt.subject_lits, q.object_lits):
                    i += 1
        if count == 0 or (count == 1 and start == i - 1):
            # nothing merged beyond the original single fact
            out.append(segments[start])
            i = start + 1
            continue
        out.append(tuple(merged) + (FULL_STOP,))
    return _rebuild(out)


# ---------------------------------------------------------------------------
# verb-phrase coordination
# ---------------------------------------------------------------------------

COORDINATION_BOUND = 3


def plan_coordination(form: InternalForm) -> InternalForm:
    """Merge runs of adjacent single-predication facts sharing a subject
    when the predications take the same number of arguments; at most three
    predications join one clause segment.  The copula construction never
    coordinates."""
    segments = form.segments()
    profiles = [_profile_segment(s) for s in segments]
    out = []
    i = 0
    while i < len(segments):
        p = profiles[i]
        if p is None or p.kind not in ("unary", "binary"):
            out.append(segments[i])
            i += 1
            continue
        arity = len(p.pred.args)
        run = [p]
        j = i + 1
        while j < len(segments) and len(run) < COORDINATION_BOUND:
            q = profiles[j]
            if q is None or q.kind not in ("unary", "binary") or \
                    q.subject is not p.subject or len(q.pred.args) != arity:
                break
            run.append(q)
            j += 1
        if len(run) == 1:
            out.append(segments[i])
            i += 1
            continue
        merged = list(run[0].subject_lits)
        for q in run:
            merged.append(q.pred)
            merged.extend(q.object_lits)
        out.append(tuple(merged) + (FULL_STOP,))
        i = j
    return _rebuild(out)


# ---------------------------------------------------------------------------
# antecedent seeding / definiteness schedule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MentionPlan:
    """One noun-phrase slot of the planned form."""

    segment: int
    noun: Optional[str]
    constant: Optional[str]
    apposition: object
    definite: bool


def seed_antecedents(form: InternalForm) -> list:
    """The definiteness schedule of a planned form: for every noun-phrase
    mention, whether the generator will realise it as a definite.

    First occurrences of an entity's description come out indefinite and
    are added to the store; re-occurrences (the duplicates produced by
    re-linearisation) come out definite.  Integer-apposed noun phrases are
    definite throughout — an integer names its entity uniquely."""
    schedule = []
    for idx, seg in enumerate(form.segments()):
        seen: set = set()
        for var, lits in _mention_groups(seg):
            noun = constant = appos = None
            for l in lits:
                if l.kind == "class":
                    noun = l.symbol
                elif l.kind == "named":
                    constant = l.symbol
                else:
                    appos = l.symbol
            has_int = any(l.kind == "integer" for l in lits)
            definite = constant is None and (has_int or id(var) in seen)
            schedule.append(MentionPlan(idx, noun, constant, appos, definite))
            seen.add(id(var))
    return schedule


def _mention_groups(items):
    """Contiguous entity-literal runs over one variable, in order."""
    flat = [i for i in _flatten(items) if isinstance(i, TypedLiteral)]
    group: list = []
    var = None
    for lit in flat:
        if not is_predication(lit):
            if var is not None and lit.args[0] is var:
                group.append(lit)
                continue
            if group:
                yield var, tuple(group)
            group, var = [lit], lit.args[0]
            continue
        if group:
            yield var, tuple(group)
        group, var = [], None
    if group:
        yield var, tuple(group)


def _flatten(items):
    for item in items:
        if isinstance(item, Sublist):
            yield from _flatten(item.items)
        else:
            yield item


# ---------------------------------------------------------------------------
# generability / re-linearisation
# ---------------------------------------------------------------------------


def _try_generate(grammar: Grammar, seg) -> bool:
    cl = GroupStack((tuple(seg),))
    try:
        got = grammar.generate_sentence(cl)
    except GenerationError:
        return False
    if got is None:
        return False
    _, cl_out, _, _ = got
    return cl_out.group_done()


def _descriptions(seg) -> dict:
    """First-occurrence entity description per variable, over the whole
    clause: class, then integer/variable apposition, then name."""
    desc: dict = {}
    for lit in _clause_literals(seg):
        if is_predication(lit):
            continue
        d = desc.setdefault(id(lit.args[0]), {})
        d.setdefault(lit.kind, lit)
    out = {}
    for key, d in desc.items():
        lits = []
        for kind in ("class", "integer", "variable", "named"):
            if kind in d:
                lits.append(d[kind])
        out[key] = tuple(lits)
    return out


def _relinearise_run(lits, desc) -> list:
    """Rewrite a literal run into subject-predication-object order with the
    full description emitted at every mention."""
    preds = [l for l in lits if is_predication(l) and not
             (l.kind == "pred2" and l.symbol == ISA)]
    covered = set()
    out = []
    for p in preds:
        out.extend(desc.get(id(p.args[0]), ()))
        covered.add(id(p.args[0]))
        out.append(p)
        if len(p.args) == 2:
            out.extend(desc.get(id(p.args[1]), ()))
            covered.add(id(p.args[1]))
    for l in lits:
        if isinstance(l, TypedLiteral) and not is_predication(l) and \
                id(l.args[0]) not in covered:
            out.extend(desc[id(l.args[0])])
            covered.add(id(l.args[0]))
    return out


def _relinearise(seg):
    """Duplicate re-mentioned entity descriptions so every noun phrase of
    the clause has literals to consume (the structure the grammar's
    definite noun phrases expect)."""
    desc = _descriptions(seg)
    if isinstance(seg[-1], QueryMark):
        lits = [i for i in seg[:-1]]
        return tuple(_relinearise_run(lits, desc)) + (seg[-1],)
    if not _is_rule_segment(seg):
        return seg
    head, body = seg[0].items, seg[2].items
    has_isa = any(
        l.kind == "pred2" and l.symbol == ISA for l in _clause_literals(seg)
    )
    if has_isa:
        return seg
    new_body = _relinearise_run(list(body), desc)
    if any(isinstance(it, CardSpec) for it in head):
        new_head = head  # cardinality heads are self-contained
    elif head and all(isinstance(s, Sublist) for s in head):
        new_head = tuple(
            Sublist(tuple(_relinearise_run(list(s.items), desc))) for s in head
        )
    else:
        new_head = tuple(_relinearise_run(list(head), desc))
    return (
        Sublist(tuple(new_head)),
        seg[1],
        Sublist(tuple(new_body)),
        seg[3],
    )


def ensure_generable(form: InternalForm, grammar: Grammar) -> InternalForm:
    """Re-linearise exactly those clauses the grammar cannot consume in
    their written-program order."""
    out = []
    for seg in form.segments():
        if _try_generate(grammar, seg):
            out.append(seg)
            continue
        seg2 = _relinearise(seg)
        out.append(seg2)
    return _rebuild(out)


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------


def plan(form: InternalForm, grammar: Grammar) -> InternalForm:
    """insert variable names -> enumeration -> coordination -> antecedent
    seeding, plus the generability pass.  Idempotent."""
    if form.order != GEN:
        raise ValueError("planning applies to gen-order forms")
    form = insert_variable_names(form)
    form = plan_enumeration(form)
    form = plan_coordination(form)
    form = ensure_generable(form, grammar)
    seed_antecedents(form)
    return form
