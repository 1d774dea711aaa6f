"""Grounder and brute-force stable models."""

import pytest

from cnlasp.asp_io import parse_asp
from cnlasp.oracle import (
    AtomLimitExceeded,
    answer_sets,
    gatom_text,
    ground,
    query_answers,
    solve,
)

from conftest import fixture_text


def test_single_fact():
    sets = solve(parse_asp("work(tom)."))
    assert sets == [("work(tom)",)]


def test_student_rule_grounds_over_both_students():
    g = ground(parse_asp(fixture_text("student.lp")))
    instances = [
        r for r in g.rules
        if r.heads and r.heads[0][0] == "successful"
    ]
    assert len(instances) == 2
    subjects = {r.heads[0][1][0] for r in instances}
    assert subjects == {"tom", "bob"}


def test_cardinality_expansion():
    text = ("node(1). colour(red). colour(blue). colour(green).\n"
            "1 { assigned_to(A,B) : colour(B) } 1 :- node(A).\n")
    g = ground(parse_asp(text))
    assert len(g.cards) == 1
    card = g.cards[0]
    assert set(card.atoms) == {
        ("assigned_to", (1, "red"), False),
        ("assigned_to", (1, "blue"), False),
        ("assigned_to", (1, "green"), False),
    }
    sets = answer_sets(g)
    assert len(sets) == 3  # exactly one colour each
    for s in sets:
        assert sum(1 for a in s if a.startswith("assigned_to")) == 1


def test_ground_program_is_fixpoint():
    text = "work(tom). party(bob)."
    g = ground(parse_asp(text))
    assert {gatom_text(a) for a in g.facts} == {"work(tom)", "party(bob)"}
    assert not g.rules and not g.cards


def test_student_program_unique_answer_set():
    sets = solve(parse_asp(fixture_text("student.lp")))
    assert len(sets) == 1
    s = set(sets[0])
    assert {"successful(tom)", "party(bob)", "-work(bob)", "answer(tom)"} <= s
    assert "successful(bob)" not in s
    assert "work(bob)" not in s


def test_modified_student_program_unique_answer_set():
    sets = solve(parse_asp(fixture_text("student_modified.lp")))
    assert len(sets) == 1
    s = set(sets[0])
    assert {"stressed(tom)", "answer(tom)"} <= s
    assert "stressed(bob)" not in s


def test_query_answers_both_student_programs():
    for name in ("student.lp", "student_modified.lp"):
        sets = solve(parse_asp(fixture_text(name)))
        assert query_answers(sets) == {"tom"}


def test_query_answers_without_answer_atoms():
    sets = solve(parse_asp("work(tom)."))
    assert query_answers(sets) == set()


def test_constraint_eliminates_candidates():
    sets = solve(parse_asp("work(tom) ; party(tom).\n:- party(tom).\n"))
    assert sets == [("work(tom)",)]


def test_disjunctive_minimality():
    sets = solve(parse_asp("work(tom) ; party(tom)."))
    assert sorted(sets) == [("party(tom)",), ("work(tom)",)]


def test_weak_negation_default():
    sets = solve(parse_asp("work(tom) :- not party(tom)."))
    assert sets == [("work(tom)",)]


def test_even_negation_loop_two_models():
    text = "work(tom) :- not party(tom).\nparty(tom) :- not work(tom).\n"
    sets = solve(parse_asp(text))
    assert sorted(sets) == [("party(tom)",), ("work(tom)",)]


def test_odd_negation_loop_no_model():
    sets = solve(parse_asp("work(tom) :- not work(tom)."))
    assert sets == []


def test_inconsistent_strong_negation_no_model():
    sets = solve(parse_asp("work(tom). -work(tom)."))
    assert sets == []


def test_adding_derived_fact_is_harmless():
    base = "student(tom).\nsuccessful(A) :- student(A).\n"
    s1 = solve(parse_asp(base))
    s2 = solve(parse_asp(base + "successful(tom).\n"))
    assert s1 == s2


def test_atom_limit():
    text = "".join(f"node({i}).\n" for i in range(30))
    with pytest.raises(AtomLimitExceeded):
        solve(parse_asp(text))


def test_answer_set_invariance_under_equivalence(pipeline):
    """Round-tripped Successful Student programs keep their answer sets."""
    original = parse_asp(fixture_text("student.lp"))
    cnl = pipeline.verbalize(fixture_text("student.lp"))
    back = pipeline.parse_to_program(cnl)
    assert sorted(solve(original)) == sorted(solve(back))


def test_external_solver_hook(tmp_path):
    """The optional shell-out cross-check parses answer-set output lines."""
    from cnlasp.oracle import solve_with_command

    stub = tmp_path / "fakesolver.py"
    stub.write_text(
        "import sys\n"
        "_ = sys.stdin.read()\n"
        "print('Answer: 1')\n"
        "print('work(tom) student(tom)')\n"
        "print('Answer: 2')\n"
        "print('party(tom) student(tom)')\n"
        "print('SATISFIABLE')\n"
    )
    sets = solve_with_command("irrelevant.", f"python3 {stub}")
    assert sorted(sets) == [
        ("party(tom)", "student(tom)"),
        ("student(tom)", "work(tom)"),
    ]
