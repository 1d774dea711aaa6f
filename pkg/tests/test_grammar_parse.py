"""Parsing: the internal format built in reverse order, construction
coverage, and parse errors."""

import pytest

from cnlasp.asp_io import write_program
from cnlasp.grammar import ParseError
from cnlasp.model import (
    ARROW_PROC,
    FULL_STOP,
    CardSpec,
    InternalForm,
    QueryMark,
    Sublist,
    TypedLiteral,
    resolve,
)
from cnlasp.tokenizer import tokenize


def canon(form_or_items, subst=None) -> str:
    """Render items with variables numbered by first occurrence, so two
    alpha-equivalent forms print identically."""
    items = form_or_items.items if isinstance(form_or_items, InternalForm) else form_or_items
    names = {}

    def term(t):
        t = resolve(t, subst or {})
        if isinstance(t, (str, int)):
            return str(t)
        if t not in names:
            names[t] = f"v{len(names)}"
        return names[t]

    def one(it):
        if isinstance(it, TypedLiteral):
            sign = {"plain": "", "strong": "-", "weak": "~"}[it.polarity]
            args = ",".join([term(a) for a in it.args] + [str(it.symbol)])
            return f"{sign}{it.kind}({args})"
        if isinstance(it, Sublist):
            return "[" + " ".join(one(x) for x in it.items) + "]"
        if isinstance(it, CardSpec):
            up = "n" if it.upper is None else str(it.upper)
            return (f"{it.lower}..{up}{{" + " ".join(one(x) for x in it.lit)
                    + ":" + " ".join(one(x) for x in it.conds) + "}")
        if isinstance(it, QueryMark):
            return f"?{term(it.var)}"
        if it is FULL_STOP:
            return "."
        if it is ARROW_PROC:
            return "-:"
        return ":-"

    return " ".join(one(it) for it in items)


def parse(grammar, text: str) -> InternalForm:
    return grammar.parse_specification(tokenize(text))


def test_internal_format_of_the_two_worked_sentences(grammar):
    """The flat format is built up in reverse order: the second sentence's
    items precede the first sentence's, the rule arrow points from body to
    head, and 'the student' in the consequent shares the body variable."""
    form = parse(
        grammar,
        "Tom is a student and works. "
        "If a student works then the student is successful.",
    )
    assert canon(form) == (
        ". [pred1(v0,work) class(v0,student)] -: [prop1(v0,successful)] "
        ". pred1(v1,work) class(v2,student) pred2(v1,v2,isa) named(v1,tom)"
    )


def test_coordinated_fact_sentence(grammar):
    form = parse(grammar, "Tom is a student and works.")
    assert canon(form) == (
        ". pred1(v0,work) class(v1,student) pred2(v0,v1,isa) named(v0,tom)"
    )


def test_conditional_definite_resolves_to_body_variable(grammar):
    form = parse(grammar, "If a student works then the student is successful.")
    assert canon(form) == (
        ". [pred1(v0,work) class(v0,student)] -: [prop1(v0,successful)]"
    )


def test_one_sentence_spec_reverse_order(grammar):
    form = parse(grammar, "Bob works.")
    assert canon(form) == ". pred1(v0,work) named(v0,bob)"


def test_empty_spec(grammar):
    assert parse(grammar, "").items == ()


def test_unknown_word_is_a_parse_error(grammar):
    with pytest.raises(ParseError) as err:
        parse(grammar, "Tom xyzzy.")
    assert err.value.position == 1
    assert err.value.expected  # carries honest continuations
    cats = {c.category for c in err.value.expected}
    assert "iverb" in cats and "copula" in cats


def test_parse_error_carries_sentence_index(grammar):
    with pytest.raises(ParseError) as err:
        parse(grammar, "Tom works. Bob xyzzy.")
    assert err.value.sentence_index == 1


# -- construction coverage: each family parses and writes the expected ASP ----


@pytest.mark.parametrize("text,expected", [
    # copula + indefinite noun phrase
    ("Tom is a student.", "student(tom)."),
    # copula + adjective
    ("Tom is successful.", "successful(tom)."),
    # intransitive verb
    ("Bob works.", "work(bob)."),
    # transitive verb with preposition
    ("Tom studies at Macquarie University.",
     "study_at(tom,macquarie_university)."),
    # relational adjective with preposition
    ("Tom is enrolled in Linguistics.", "enrolled_in(tom,linguistics)."),
    # verb phrase coordination
    ("Tom studies at Macquarie University and is enrolled in Linguistics.",
     "study_at(tom,macquarie_university). enrolled_in(tom,linguistics)."),
    # strong negation, verb and participle forms
    ("Bob does not work.", "-work(bob)."),
    ("Bob is not enrolled in Linguistics.", "-enrolled_in(bob,linguistics)."),
    ("Bob is not successful.", "-successful(bob)."),
    ("Bob is not a student.", "-student(bob)."),
    # universal with relative clause
    ("Every student who works is successful.",
     "successful(A) :- student(A), work(A)."),
    # universal, no relative clause
    ("Every student works.", "work(A) :- student(A)."),
    # disjunctive head
    ("Every student works or parties.",
     "work(A) ; party(A) :- student(A)."),
    # conditional with weak and strong negation (sentence 11)
    ("If a student does not provably work then the student does not work.",
     "-work(A) :- student(A), not work(A)."),
    # constraint
    ("It is not the case that a student who is enrolled in Information Technology parties.",
     ":- student(A), enrolled_in(A,information_technology), party(A)."),
    # constraint over conjoined sentences
    ("It is not the case that a student works and the student parties.",
     ":- student(A), work(A), party(A)."),
    # object enumeration over proper names (sentence 8)
    ("Tom is enrolled in COMP329, COMP330 and COMP332.",
     "enrolled_in(tom,comp329). enrolled_in(tom,comp330). enrolled_in(tom,comp332)."),
    # object enumeration over integers, with definite introductions
    ("The node 1 is connected to the nodes 2 and 3.",
     "node(1). connected_to(1,2). node(2). connected_to(1,3). node(3)."),
    # explicit variable apposition
    ("It is not the case that a node X is connected to the node X.",
     ":- node(A), connected_to(A,A)."),
    # cardinality quantifiers
    ("Every node is assigned to exactly one colour.",
     "1 { assigned_to(A,B) : colour(B) } 1 :- node(A)."),
    ("Every node is assigned to at least one colour.",
     "1 { assigned_to(A,B) : colour(B) } :- node(A)."),
    ("Every node is assigned to at most two colours.",
     "0 { assigned_to(A,B) : colour(B) } 2 :- node(A)."),
    ("Tom is enrolled in exactly one course.",
     "1 { enrolled_in(tom,A) : course(A) } 1."),
    # wh-question
    ("Who is successful?", "answer(A) :- successful(A)."),
    ("Who studies at Macquarie University?",
     "answer(A) :- study_at(A,macquarie_university)."),
    ("What is a colour?", "answer(A) :- colour(A)."),
])
def test_construction(grammar, text, expected):
    result = write_program(parse(grammar, text))
    flat = " ".join(line for line in result.text.splitlines())
    assert flat == expected


def test_expletive_there_in_constraint(grammar):
    result = write_program(parse(
        grammar, "It is not the case that there is a unicorn."
    ))
    assert result.text.strip() == ":- unicorn(A)."


def test_disjunction_rejected_in_declarative_facts(grammar):
    with pytest.raises(ParseError):
        parse(grammar, "Tom works or parties.")


def test_weak_negation_rejected_in_facts(grammar):
    with pytest.raises(ParseError):
        parse(grammar, "Tom does not provably work.")


def test_number_agreement_enforced(grammar):
    with pytest.raises(ParseError):
        parse(grammar, "Every student work.")


def test_difference_pair_conservation(grammar):
    """Items only accumulate: each parsed sentence extends the front of
    the structure and never disturbs what previous sentences built."""
    from cnlasp.model import GroupStack

    cl, ante, subst = GroupStack(), GroupStack(), {}
    texts = ["Tom is a student.", "Bob works.", "Every student works."]
    suffix = ()
    for toks in tokenize(" ".join(texts)):
        cl, ante, subst = grammar.parse_sentence(toks, cl, ante, subst)
        assert cl.levels[0][-len(suffix):] == suffix if suffix else True
        suffix = cl.levels[0]
