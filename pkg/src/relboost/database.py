"""Positive examples, negative examples and ground facts, with query answering.

Semantics are closed-world: a ground atom is true iff it is listed among the
facts. Examples are never consulted when answering queries.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .logic import Atom, Constant, Mode, Substitution, Term, Variable, unify, walk


class ModeMismatch(ValueError):
    """An atom uses a predicate/arity with no mode declaration."""


class _Relation:
    __slots__ = ("facts", "by_arg", "members")

    def __init__(self):
        self.facts: List[Atom] = []
        self.members: Set[Atom] = set()
        # (argument position, constant) -> ascending fact positions
        self.by_arg: Dict[Tuple[int, Term], List[int]] = defaultdict(list)

    def add(self, fact: Atom):
        if fact in self.members:
            return
        self.members.add(fact)
        idx = len(self.facts)
        self.facts.append(fact)
        for pos, term in enumerate(fact.args):
            self.by_arg[(pos, term)].append(idx)


class Database:
    def __init__(
        self,
        pos: Iterable[Atom] = (),
        neg: Iterable[Atom] = (),
        facts: Iterable[Atom] = (),
        modes: Optional[Sequence[Mode]] = None,
    ):
        self.pos: List[Atom] = list(pos)
        self.neg: List[Atom] = list(neg)
        self.facts: List[Atom] = list(facts)
        self.modes: Optional[Tuple[Mode, ...]] = tuple(modes) if modes is not None else None

        for atom in (*self.pos, *self.neg, *self.facts):
            if not atom.is_ground:
                raise ValueError(f"database atoms must be ground: {atom}")
        overlap = set(self.pos) & set(self.neg)
        if overlap:
            raise ValueError(f"atoms are both positive and negative: {', '.join(map(str, sorted(overlap)))}")

        self._index: Dict[Tuple[str, int], _Relation] = {}
        for fact in self.facts:
            rel = self._index.get(fact.signature)
            if rel is None:
                rel = self._index[fact.signature] = _Relation()
            rel.add(fact)

        self.type_map: Dict[str, Set[Constant]] = {}
        if self.modes is not None:
            self.type_map = _type_map(self.pos + self.neg + self.facts, self.modes)

    def with_modes(self, modes: Sequence[Mode]) -> "Database":
        return Database(self.pos, self.neg, self.facts, modes)

    def relation(self, predicate: str, arity: int) -> List[Atom]:
        rel = self._index.get((predicate, arity))
        return list(rel.facts) if rel else []

    def __contains__(self, atom: Atom) -> bool:
        rel = self._index.get(atom.signature)
        return rel is not None and atom in rel.members

    def constants(self) -> List[Constant]:
        seen: Dict[Constant, None] = {}
        for atom in (*self.facts, *self.pos, *self.neg):
            for t in atom.args:
                seen.setdefault(t, None)
        return sorted(seen, key=lambda c: c.name)

    def __repr__(self):
        return f"Database(pos={len(self.pos)}, neg={len(self.neg)}, facts={len(self.facts)})"


def _type_map(atoms: Iterable[Atom], modes: Sequence[Mode]) -> Dict[str, Set[Constant]]:
    types_at: Dict[Tuple[str, int], List[List[str]]] = defaultdict(lambda: [])
    for mode in modes:
        slots = types_at[mode.signature]
        if not slots:
            slots.extend([] for _ in range(mode.arity))
        for pos, (_, typ) in enumerate(mode.arg_roles):
            if typ not in slots[pos]:
                slots[pos].append(typ)
    out: Dict[str, Set[Constant]] = {}
    for mode in modes:
        for _, typ in mode.arg_roles:
            out.setdefault(typ, set())
    for atom in atoms:
        slots = types_at.get(atom.signature)
        if slots is None:
            raise ModeMismatch(f"no mode declared for {atom.predicate}/{atom.arity} (in {atom})")
        for term, types in zip(atom.args, slots):
            for typ in types:
                out[typ].add(term)
    return out


def build_database(pos: Iterable[Atom], neg: Iterable[Atom], facts: Iterable[Atom], modes: Sequence[Mode]) -> Database:
    return Database(pos, neg, facts, modes)


def query_atom(db: Database, pattern: Atom, seed: Optional[Mapping[Variable, Term]] = None) -> Iterator[Substitution]:
    """Substitutions extending ``seed`` that turn ``pattern`` into a fact.

    Results come in fact insertion order and are duplicate-free.
    """
    rel = db._index.get(pattern.signature)
    if rel is None:
        return
    seed = seed or {}
    bound = [(pos, walk(t, seed)) for pos, t in enumerate(pattern.args)]
    candidates: Optional[List[int]] = None
    for pos, term in bound:
        if isinstance(term, Constant):
            hits = rel.by_arg.get((pos, term))
            if not hits:
                return
            if candidates is None or len(hits) < len(candidates):
                candidates = hits
    if candidates is None:
        facts: Iterable[Atom] = rel.facts
    else:
        facts = (rel.facts[i] for i in candidates)
    for fact in facts:
        s = unify(pattern, fact, seed)
        if s is not None:
            yield s


def solve_body(db: Database, body: Sequence[Atom], seed: Optional[Mapping[Variable, Term]] = None) -> Iterator[Substitution]:
    """All groundings of a conjunction, left-to-right with backtracking."""
    seed = dict(seed) if seed else {}
    if not body:
        yield seed
        return
    first, rest = body[0], body[1:]
    for s in query_atom(db, first, seed):
        yield from solve_body(db, rest, s)


def satisfies_body(db: Database, body: Sequence[Atom], seed: Optional[Mapping[Variable, Term]] = None) -> bool:
    for _ in solve_body(db, body, seed):
        return True
    return False
