"""Seeded generator for larger smokes-friends-cancer style datasets."""

from __future__ import annotations

import random
from typing import List, Tuple

from .database import Database
from .logic import Atom, Constant
from .parsing import parse_mode

MODES = (
    "friends(+person,-person).",
    "friends(-person,+person).",
    "smokes(+person).",
    "drinks(+person).",
    "employed(+person,-company).",
    "cancer(+person).",
)


def make_dataset(n_facts: int = 10_000, n_examples: int = 200, seed: int = 0, noise: float = 0.05) -> Tuple[Database, List]:
    """A database with exactly ``n_facts`` facts and ``n_examples`` labelled people.

    People who smoke, or who drink and have a smoking friend, get cancer; each
    label is flipped with probability ``noise``. Returns the database and the
    parsed modes.
    """
    rng = random.Random(seed)
    n_people = max(n_facts // 4, 4)
    n_companies = max(n_people // 20, 1)
    people = [Constant(f"p{i}") for i in range(n_people)]
    companies = [Constant(f"c{i}") for i in range(n_companies)]

    facts: List[Atom] = []
    smokers, drinkers = set(), set()
    for p in people:
        if rng.random() < 0.3:
            smokers.add(p)
            facts.append(Atom("smokes", (p,)))
        if rng.random() < 0.3:
            drinkers.add(p)
            facts.append(Atom("drinks", (p,)))
        facts.append(Atom("employed", (p, rng.choice(companies))))
    facts = facts[:n_facts]
    friends = {}
    edges = set()
    max_edges = n_people * (n_people - 1)
    while len(facts) < n_facts and len(edges) < max_edges:
        a, b = rng.sample(people, 2)
        if (a, b) in edges:
            continue
        edges.add((a, b))
        friends.setdefault(a, []).append(b)
        facts.append(Atom("friends", (a, b)))

    pos, neg = [], []
    for p in rng.sample(people, min(n_examples, n_people)):
        label = p in smokers or (p in drinkers and any(f in smokers for f in friends.get(p, ())))
        if rng.random() < noise:
            label = not label
        (pos if label else neg).append(Atom("cancer", (p,)))
    modes = [parse_mode(m) for m in MODES]
    return Database(pos, neg, facts, modes), modes
