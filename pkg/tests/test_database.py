import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relboost import example_data
from relboost.database import Database, ModeMismatch, build_database, query_atom, satisfies_body, solve_body
from relboost.logic import Atom, Constant, Variable
from relboost.parsing import parse_mode

from oracles import brute_force_solutions, random_database, random_query

X, Y, A, B = (Variable(n) for n in "XYAB")
alice, bob, chuck, fred = (Constant(n) for n in ("alice", "bob", "chuck", "fred"))


def restrict(s, variables):
    return {v: s[v] for v in variables}


def test_toy_type_map(toy):
    assert toy.type_map["person"] == {alice, bob, chuck, fred}


def test_empty_database():
    db = build_database([], [], [], example_data.modes())
    assert list(query_atom(db, Atom("smokes", (X,)))) == []
    assert not satisfies_body(db, [Atom("smokes", (X,))])


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        build_database([], [], [Atom("smokes", (alice,))], [parse_mode("cancer(+person).")])
    with pytest.raises(ModeMismatch):
        build_database([], [], [Atom("smokes", (alice, bob))], example_data.modes())


def test_rejects_non_ground_and_overlap():
    with pytest.raises(ValueError):
        Database(facts=[Atom("smokes", (X,))])
    with pytest.raises(ValueError):
        Database(pos=[Atom("cancer", (alice,))], neg=[Atom("cancer", (alice,))])


def test_query_examples(toy):
    assert list(query_atom(toy, Atom("smokes", (X,)))) == [{X: alice}, {X: bob}]
    assert list(query_atom(toy, Atom("friends", (alice, Y)))) == [{Y: bob}]
    assert list(query_atom(toy, Atom("smokes", (chuck,)))) == []
    assert list(query_atom(toy, Atom("unknown", (X,)))) == []


def test_query_respects_seed(toy):
    assert list(query_atom(toy, Atom("friends", (X, Y)), {X: chuck})) == [{X: chuck, Y: fred}]


def test_satisfies_body_examples(toy):
    assert satisfies_body(toy, [Atom("smokes", (A,))], {A: alice})
    assert satisfies_body(toy, [], {A: chuck})
    assert not satisfies_body(toy, [Atom("friends", (A, B)), Atom("smokes", (B,))], {A: chuck})


def test_examples_are_not_facts(toy):
    assert list(query_atom(toy, Atom("cancer", (X,)))) == []


def test_duplicates_kept_but_answers_unique():
    modes = example_data.modes()
    facts = [Atom("smokes", (alice,))] * 3
    db = build_database([], [], facts, modes)
    assert len(db.facts) == 3
    assert list(query_atom(db, Atom("smokes", (X,)))) == [{X: alice}]


def _check_against_oracle(facts, body, seed, constants):
    db = Database(facts=facts)
    expected = brute_force_solutions(facts, body, seed, constants)
    assert satisfies_body(db, body, seed) == bool(expected)
    query_vars = sorted({v for a in body for v in a.variables()} | set(seed), key=lambda v: v.name)
    got = [restrict(s, query_vars) for s in solve_body(db, body, seed)]
    assert sorted(map(_key, got)) == sorted(map(_key, expected))

    first = body[0]
    atom_vars = sorted(set(first.variables()) | set(seed), key=lambda v: v.name)
    answers = [restrict(s, atom_vars) for s in query_atom(db, first, seed)]
    brute = brute_force_solutions(facts, [first], seed, constants)
    assert len(answers) == len({tuple(sorted(a.items(), key=lambda kv: kv[0].name)) for a in answers})
    assert sorted(map(_key, answers)) == sorted(map(_key, brute))
    # Insertion order of the first matching fact.
    seen = []
    for f in facts:
        if f not in seen:
            seen.append(f)
    order = [f for f in seen if any(f == _ground(first, a) for a in answers)]
    assert [_ground(first, a) for a in answers] == order


def _key(s):
    return sorted((k.name, v.name) for k, v in s.items())


def _ground(atom, s):
    return Atom(atom.predicate, tuple(s.get(t, t) for t in atom.args))


@given(st.integers(0, 2**32 - 1))
def test_query_engine_matches_brute_force(seed):
    rng = random.Random(seed)
    facts, preds, constants = random_database(rng)
    for _ in range(5):
        body, s = random_query(rng, preds, constants)
        _check_against_oracle(facts, body, s, constants)


@given(st.integers(0, 2**32 - 1))
def test_index_lookup_equals_linear_scan(seed):
    rng = random.Random(seed)
    facts, preds, constants = random_database(rng)
    db = Database(facts=facts)
    for name, arity in preds:
        for c in constants:
            for pos in range(arity):
                args = tuple(c if i == pos else Variable(f"V{i}") for i in range(arity))
                pattern = Atom(name, args)
                indexed = [_ground(pattern, s) for s in query_atom(db, pattern)]
                scan = []
                for f in facts:
                    if f.predicate == name and f.args[pos] == c and f not in scan:
                        scan.append(f)
                assert indexed == scan


def test_deterministic_across_runs(toy):
    body = [Atom("friends", (X, Y))]
    assert list(solve_body(toy, body)) == list(solve_body(toy, body))
