import pytest
from hypothesis import given
from hypothesis import strategies as st

from relboost.logic import Atom, Constant, Mode, Role, Variable
from relboost.parsing import (
    ParseError,
    ParseErrors,
    format_atom,
    format_mode,
    parse_atom,
    parse_conjunction,
    parse_file,
    parse_ground_atom,
    parse_mode,
)

from strategies import modes, printable_atoms

alice, bob = Constant("alice"), Constant("bob")


def test_ground_atoms():
    assert parse_ground_atom("smokes(alice).") == Atom("smokes", (alice,))
    assert parse_ground_atom("friends(alice, bob).") == Atom("friends", (alice, bob))
    assert parse_ground_atom("  friends ( alice ,bob ) . ") == Atom("friends", (alice, bob))
    assert parse_ground_atom("age(alice,30).") == Atom("age", (alice, Constant("30")))
    assert parse_ground_atom("rain.") == Atom("rain", ())


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("friends(alice,Bob).", "ground"),
        ("smokes(alice)", "period"),
        ("smokes(alice.", "parenthes"),
        ("smokes(alice)).", "parenthes"),
        ("friends(alice,).", "empty argument"),
        ("friends(,bob).", "empty argument"),
        ("smokes().", "empty argument"),
        ("Smokes(alice).", "lowercase"),
        ("smokes(alice). extra", "after"),
        ("smokes(alice)\nsmokes(bob).", "line"),
        ("smokes(ali ce).", ""),
        ("smökes(alice).", "character"),
        ("", "predicate"),
    ],
)
def test_ground_atom_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_ground_atom(text)
    assert fragment in info.value.message
    assert info.value.position.line >= 1 and info.value.position.column >= 1


def test_error_column_points_at_problem():
    with pytest.raises(ParseError) as info:
        parse_ground_atom("friends(alice,Bob).")
    assert info.value.position.column == 15


def test_modes():
    assert parse_mode("friends(+person,-person).") == Mode(
        "friends", ((Role.INPUT, "person"), (Role.OUTPUT, "person"))
    )
    assert parse_mode("cancer(+person).") == Mode("cancer", ((Role.INPUT, "person"),))
    assert parse_mode("color(#hue).") == Mode("color", ((Role.CONSTANT, "hue"),))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("friends(person,-person).", "missing role marker"),
        ("friends(*person,-person).", "unknown role marker"),
        ("friends(+,-person).", "missing type"),
        ("friends(+person,-person)", "period"),
        ("friends(+Person).", "lowercase"),
    ],
)
def test_mode_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_mode(text)
    assert fragment in info.value.message


def test_parse_file_comments_and_blanks():
    text = "% people\nsmokes(alice).\n\nsmokes(bob)."
    assert parse_file(text, "facts") == [Atom("smokes", (alice,)), Atom("smokes", (bob,))]
    assert parse_file("", "facts") == []
    assert parse_file("smokes(alice). % trailing\n", "examples") == [Atom("smokes", (alice,))]


def test_parse_file_reports_all_errors():
    with pytest.raises(ParseErrors) as info:
        parse_file("smokes(alice)\nsmokes(bob).", "facts")
    errs = info.value.errors
    assert len(errs) == 1 and errs[0].position.line == 1
    assert info.value.parsed == [Atom("smokes", (bob,))]

    with pytest.raises(ParseErrors) as info:
        parse_file("a(X).\nb(c).\nc(d\n", "facts", source="f.txt")
    assert [e.position.line for e in info.value.errors] == [1, 3]
    assert str(info.value.errors[0]).startswith("f.txt:1:")


def test_parse_file_modes_kind():
    got = parse_file("friends(+person,-person).\n% x\ncancer(+person).\n", "modes")
    assert [m.predicate for m in got] == ["friends", "cancer"]
    with pytest.raises(ValueError):
        parse_file("", "rules")


def test_conjunction_and_variables():
    A, B = Variable("A"), Variable("B")
    assert parse_conjunction("friends(A,B), smokes(B).") == (Atom("friends", (A, B)), Atom("smokes", (B,)))
    assert parse_atom("cancer(A)", ground=False, terminated=False) == Atom("cancer", (A,))


def test_bytes_input():
    assert parse_ground_atom(b"smokes(alice).") == Atom("smokes", (alice,))
    with pytest.raises(ParseError):
        parse_ground_atom(b"smokes(\xffalice).")
    with pytest.raises(ParseError) as info:
        parse_ground_atom(b"smokes(\nx\xff")
    assert (info.value.position.line, info.value.position.column) == (2, 2)


@given(printable_atoms(ground=True))
def test_atom_round_trip(atom):
    assert parse_ground_atom(format_atom(atom)) == atom


@given(printable_atoms(ground=False))
def test_query_atom_round_trip(atom):
    assert parse_atom(format_atom(atom), ground=False) == atom


@given(modes())
def test_mode_round_trip(mode):
    assert parse_mode(format_mode(mode)) == mode


def _assert_inside(err, data):
    lines = data.split(b"\n")
    assert 1 <= err.position.line <= len(lines)
    assert 1 <= err.position.column <= max(1, len(lines[err.position.line - 1]))


@given(st.binary(max_size=60))
def test_fuzz_never_crashes(data):
    for entry in (parse_ground_atom, parse_mode, parse_conjunction):
        try:
            entry(data)
        except ParseError as err:
            _assert_inside(err, data)
    for kind in ("facts", "modes"):
        try:
            parse_file(data, kind)
        except ParseErrors as errs:
            for e in errs.errors:
                _assert_inside(e, data)
