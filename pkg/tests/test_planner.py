"""Sentence planning: coordination, enumeration, variable names,
antecedent seeding, idempotence."""

import pytest

from cnlasp.asp_io import read_program
from cnlasp.model import GEN, InternalForm, Sublist, TypedLiteral
from cnlasp.planner import (
    NameExhaustion,
    ensure_generable,
    insert_variable_names,
    plan,
    plan_coordination,
    plan_enumeration,
    seed_antecedents,
)
from cnlasp.tokenizer import detokenize

from conftest import fixture_text
from test_grammar_parse import canon


def read_form(lexicon, text):
    return read_program(text, lexicon).form


# -- coordination -----------------------------------------------------------------


def test_merges_adjacent_binary_facts_about_tom(lexicon):
    form = read_form(
        lexicon,
        "study_at(tom,macquarie_university).\n"
        "enrolled_in(tom,information_technology).\n",
    )
    merged = plan_coordination(form)
    assert canon(merged) == (
        "named(v0,tom) pred2(v0,v1,study_at) named(v1,macquarie_university) "
        "prop2(v0,v2,enrolled_in) named(v2,information_technology) ."
    )


def test_four_same_subject_facts_merge_three_plus_one(lexicon, grammar):
    form = read_form(
        lexicon,
        "study_at(tom,macquarie_university).\n"
        "enrolled_in(tom,linguistics).\n"
        "connected_to(tom,bob).\n"
        "assigned_to(tom,red).\n",
    )
    merged = plan_coordination(form)
    segs = merged.segments()
    assert len(segs) == 2
    preds = [
        sum(1 for it in seg if isinstance(it, TypedLiteral) and len(it.args) == 2)
        for seg in segs
    ]
    assert preds == [3, 1]
    sentences = grammar.generate_program(plan(form, grammar))
    assert detokenize(sentences).splitlines() == [
        "Tom studies at Macquarie University and is enrolled in Linguistics "
        "and is connected to Bob.",
        "Tom is assigned to Red.",
    ]


def test_different_subjects_unchanged(lexicon):
    form = read_form(lexicon, "work(tom).\nwork(bob).\n")
    assert plan_coordination(form).items == form.items


def test_intervening_subject_blocks_merge(lexicon):
    form = read_form(lexicon, "work(tom).\nparty(bob).\nstudy(tom).\n")
    merged = plan_coordination(form)
    assert len(merged.segments()) == 3


def test_arity_mismatch_blocks_merge(lexicon):
    # study_at is binary, party unary: the worked example keeps "Bob parties." separate
    form = read_form(
        lexicon,
        "study_at(bob,macquarie_university).\n"
        "enrolled_in(bob,linguistics).\n"
        "party(bob).\n",
    )
    merged = plan_coordination(form)
    assert len(merged.segments()) == 2


def test_isa_facts_never_coordinate(lexicon):
    form = read_form(lexicon, "student(tom).\nwork(tom).\n")
    merged = plan_coordination(form)
    assert len(merged.segments()) == 2


# -- enumeration -------------------------------------------------------------------


def test_connected_pair_block_merges_under_one_subject(lexicon):
    form = read_form(lexicon, "node(4). node(1). node(2).\n"
                              "connected_to(4,1). connected_to(4,2).\n")
    merged = plan_enumeration(form)
    # the two connected_to facts become one segment: subject once, then
    # (predication, object) pairs in order
    seg = merged.segments()[-1]
    assert canon(seg) == (
        "class(v0,node) integer(v0,4) "
        "prop2(v0,v1,connected_to) class(v1,node) integer(v1,1) "
        "prop2(v0,v2,connected_to) class(v2,node) integer(v2,2) ."
    )


def test_enumeration_takes_priority_over_coordination(lexicon, grammar):
    form = read_form(lexicon, "node(4). node(1). node(2).\n"
                              "connected_to(4,1). connected_to(4,2).\n")
    sentences = grammar.generate_program(plan(form, grammar))
    out = detokenize(sentences).splitlines()
    assert "The node 4 is connected to the nodes 1 and 2." in out
    assert all("and is connected to" not in line for line in out)


def test_three_object_enumeration(lexicon, grammar):
    text = ("node(1). connected_to(1,2). node(2). connected_to(1,3). node(3). "
            "connected_to(1,4). node(4).")
    form = read_form(lexicon, text)
    sentences = grammar.generate_program(plan(form, grammar))
    assert detokenize(sentences) == "The node 1 is connected to the nodes 2, 3 and 4."


def test_single_fact_unchanged(lexicon):
    form = read_form(lexicon, "connected_to(1,2). node(1). node(2).")
    # no adjacent same-subject run: the two node facts precede/follow
    merged = plan_enumeration(form)
    assert len(merged.segments()) == len(form.segments())


# -- variable names -----------------------------------------------------------------


def test_colouring_constraint_gets_x_and_y(lexicon):
    form = read_form(lexicon, fixture_text("colouring.lp"))
    named_form = insert_variable_names(form)
    seg = named_form.segments()[-1]
    body = seg[2]
    assert canon(body.items) == (
        "class(v0,node) variable(v0,X) prop2(v0,v1,assigned_to) class(v1,colour) "
        "class(v2,node) variable(v2,Y) prop2(v2,v1,assigned_to) "
        "prop2(v0,v2,connected_to)"
    )


def test_relinearised_constraint_matches_reorganised_listing(lexicon, grammar):
    """After planning, the colouring constraint shows the full re-mention
    structure: every noun phrase slot carries its own description copy."""
    form = read_form(lexicon, fixture_text("colouring.lp"))
    planned = plan(form, grammar)
    seg = planned.segments()[-1]
    body = seg[2]
    assert canon(body.items) == (
        "class(v0,node) variable(v0,X) prop2(v0,v1,assigned_to) class(v1,colour) "
        "class(v2,node) variable(v2,Y) prop2(v2,v1,assigned_to) class(v1,colour) "
        "class(v0,node) variable(v0,X) prop2(v0,v2,connected_to) "
        "class(v2,node) variable(v2,Y)"
    )


def test_single_variable_clause_untouched(lexicon):
    form = read_form(lexicon, "successful(A) :- student(A), work(A).")
    assert insert_variable_names(form).items == form.items


def test_three_same_noun_variables_get_x_y_z(lexicon):
    form = read_form(
        lexicon,
        ":- node(A), node(B), node(C), connected_to(A,B), connected_to(B,C).",
    )
    named_form = insert_variable_names(form)
    names = [
        it.symbol
        for it in named_form.segments()[0][2].items
        if isinstance(it, TypedLiteral) and it.kind == "variable"
    ]
    assert names == ["X", "Y", "Z"]


def test_name_exhaustion(lexicon):
    atoms = ", ".join(f"node(V{i})" for i in range(7))
    pairs = ", ".join(f"connected_to(V{i},V{i+1})" for i in range(6))
    form = read_form(lexicon, f":- {atoms}, {pairs}.")
    with pytest.raises(NameExhaustion):
        insert_variable_names(form)


# -- seeding and idempotence -----------------------------------------------------------


def test_seed_antecedents_colouring_constraint(lexicon, grammar):
    form = read_form(lexicon, fixture_text("colouring.lp"))
    planned = plan(form, grammar)
    schedule = seed_antecedents(planned)
    last_idx = max(m.segment for m in schedule)
    mentions = [(m.noun, m.apposition, m.definite)
                for m in schedule if m.segment == last_idx]
    assert mentions == [
        ("node", "X", False),    # a node X
        ("colour", None, False),  # a colour
        ("node", "Y", False),    # a node Y
        ("colour", None, True),   # the colour
        ("node", "X", True),     # the node X
        ("node", "Y", True),     # the node Y
    ]


def test_seed_antecedents_integer_subjects_definite(lexicon, grammar):
    form = read_form(lexicon, "node(4). connected_to(4,1). node(1).")
    planned = plan(form, grammar)
    schedule = seed_antecedents(planned)
    assert all(m.definite for m in schedule if m.apposition is not None)


def test_plan_idempotent_on_student_program(lexicon, grammar):
    form = read_form(lexicon, fixture_text("student_modified.lp"))
    once = plan(form, grammar)
    twice = plan(once, grammar)
    assert canon(once) == canon(twice)


def test_plan_idempotent_on_colouring_program(lexicon, grammar):
    form = read_form(lexicon, fixture_text("colouring.lp"))
    once = plan(form, grammar)
    twice = plan(once, grammar)
    assert canon(once) == canon(twice)


def test_planning_is_semantically_neutral(lexicon, grammar):
    """Generating from the planned form and re-parsing reproduces the
    original program."""
    from cnlasp.asp_io import parse_asp, write_program
    from cnlasp.model import program_equiv
    from cnlasp.tokenizer import tokenize

    for name in ("student.lp", "student_modified.lp", "colouring.lp"):
        original = parse_asp(fixture_text(name))
        form = read_form(lexicon, fixture_text(name))
        sentences = grammar.generate_program(plan(form, grammar))
        back = write_program(
            grammar.parse_specification(tokenize(detokenize(sentences)))
        ).program
        assert program_equiv(original, back), name
