"""Function-free terms, atoms, substitutions and unification.

Everything here is an immutable value. A substitution is a plain ``dict``
mapping :class:`Variable` to :class:`Term`; operations never mutate the
substitutions they receive.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union


@dataclass(frozen=True)
class Constant:
    name: str

    def __post_init__(self):
        if not self.name or not (self.name[0].islower() or self.name[0].isdigit()):
            raise ValueError(f"invalid constant name {self.name!r}")

    @property
    def key(self):
        return (0, self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    @property
    def key(self):
        return (1, self.name)

    def __str__(self):
        return self.name


Term = Union[Constant, Variable]
Substitution = Dict[Variable, Term]


@total_ordering
@dataclass(frozen=True, eq=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.predicate, len(self.args))

    @property
    def is_ground(self) -> bool:
        return all(isinstance(t, Constant) for t in self.args)

    def variables(self) -> Iterator[Variable]:
        """Variables in argument order, repeats included."""
        return (t for t in self.args if isinstance(t, Variable))

    def sort_key(self):
        return (self.predicate, len(self.args), tuple(t.key for t in self.args))

    def __lt__(self, other):
        if not isinstance(other, Atom):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: Tuple[Atom, ...] = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))

    def variables(self) -> Iterator[Variable]:
        seen = set()
        for atom in (self.head, *self.body):
            for v in atom.variables():
                if v not in seen:
                    seen.add(v)
                    yield v

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(a) for a in self.body)}."


class Role(enum.Enum):
    INPUT = "+"
    OUTPUT = "-"
    CONSTANT = "#"


@dataclass(frozen=True)
class Mode:
    """Argument roles and types for one predicate, e.g. ``friends(+person,-person)``."""

    predicate: str
    arg_roles: Tuple[Tuple[Role, str], ...]

    def __post_init__(self):
        if not isinstance(self.arg_roles, tuple):
            object.__setattr__(self, "arg_roles", tuple(tuple(r) for r in self.arg_roles))
        for role, typ in self.arg_roles:
            if not isinstance(role, Role) or not typ:
                raise ValueError(f"bad argument role ({role!r}, {typ!r})")

    @property
    def arity(self) -> int:
        return len(self.arg_roles)

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.predicate, len(self.arg_roles))

    def __str__(self):
        if not self.arg_roles:
            return f"{self.predicate}."
        inner = ",".join(role.value + typ for role, typ in self.arg_roles)
        return f"{self.predicate}({inner})."


def walk(term: Term, s: Mapping[Variable, Term]) -> Term:
    while isinstance(term, Variable) and term in s:
        term = s[term]
    return term


def apply(s: Mapping[Variable, Term], atom: Atom) -> Atom:
    if not s:
        return atom
    return Atom(atom.predicate, tuple(walk(t, s) for t in atom.args))


def unify(a: Atom, b: Atom, seed: Optional[Mapping[Variable, Term]] = None) -> Optional[Substitution]:
    """Most general unifier of ``a`` and ``b`` extending ``seed``, or None.

    The returned substitution is fully resolved: no value is a variable that
    is itself bound, so applying it once is the same as applying it twice.
    """
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    s = dict(seed) if seed else {}
    for x, y in zip(a.args, b.args):
        x = walk(x, s)
        y = walk(y, s)
        if x == y:
            continue
        if isinstance(x, Variable):
            _bind(s, x, y)
        elif isinstance(y, Variable):
            _bind(s, y, x)
        else:
            return None
    return s


def _bind(s: Substitution, var: Variable, value: Term) -> None:
    for k, v in s.items():
        if v == var:
            s[k] = value
    s[var] = value


def compose(s: Mapping[Variable, Term], extra: Mapping[Variable, Term]) -> Substitution:
    out = {k: walk(v, extra) for k, v in s.items()}
    for k, v in extra.items():
        if k not in out:
            out[k] = v
    return {k: v for k, v in out.items() if k != v}


def variable_names() -> Iterator[str]:
    """A, B, ..., Z, A1, B1, ..., Z1, A2, ..."""
    letters = [chr(c) for c in range(ord("A"), ord("Z") + 1)]
    yield from letters
    for n in itertools.count(1):
        for letter in letters:
            yield f"{letter}{n}"


def fresh_variables(taken: Iterable[Variable], base: str = "") -> Iterator[Variable]:
    taken_names = {v.name for v in taken}
    if base:
        names = (f"{base}{n}" for n in itertools.count(1))
    else:
        names = variable_names()
    for name in names:
        if name not in taken_names:
            taken_names.add(name)
            yield Variable(name)


def rename_apart(clause: Clause, taken: Iterable[Variable]) -> Clause:
    taken = set(taken)
    clause_vars = list(clause.variables())
    avoid = taken | set(clause_vars)
    renaming: Substitution = {}
    for v in clause_vars:
        if v in taken:
            new = next(fresh_variables(avoid, base=v.name.rstrip("0123456789") or v.name))
            avoid.add(new)
            renaming[v] = new
    if not renaming:
        return clause
    return Clause(apply(renaming, clause.head), tuple(apply(renaming, b) for b in clause.body))
