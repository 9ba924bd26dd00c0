"""Relational regression trees fitted top-down to per-example values.

An inner node tests a conjunction of literals. An example takes the true
branch when the conjunction of every true test on the path so far, plus this
node's test, has a grounding in the facts. Variables bound by a test are only
visible below its true branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .bias import Background, VariableContext, head_atom, refinements, type_checks
from .database import Database, satisfies_body
from .logic import Atom, Clause, Constant, Substitution, unify

GAIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class WeightedExample:
    atom: Atom
    value: float


@dataclass(frozen=True)
class Leaf:
    value: float


@dataclass(frozen=True)
class Inner:
    test: Tuple[Atom, ...]
    true_branch: "Node"
    false_branch: "Node"


Node = Union[Leaf, Inner]


@dataclass(frozen=True)
class RegressionTree:
    head: Atom
    root: Node

    def depth(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(node.true_branch), walk(node.false_branch))

        return walk(self.root)

    def leaves(self) -> Iterator[Tuple[str, Leaf]]:
        """(route, leaf) pairs; a route is a string of 'T'/'F' decisions."""

        def walk(node, route):
            if isinstance(node, Leaf):
                yield route, node
            else:
                yield from walk(node.true_branch, route + "T")
                yield from walk(node.false_branch, route + "F")

        return walk(self.root, "")

    def paths(self) -> Iterator[Tuple[Tuple[Tuple[Tuple[Atom, ...], bool], ...], float]]:
        """(decisions, leaf value) for every root-to-leaf path.

        ``decisions`` lists each test on the path with the branch taken, in
        root-to-leaf order.
        """

        def walk(node, decisions):
            if isinstance(node, Leaf):
                yield decisions, node.value
            else:
                yield from walk(node.true_branch, decisions + ((node.test, True),))
                yield from walk(node.false_branch, decisions + ((node.test, False),))

        return walk(self.root, ())

    def clauses(self) -> List[Tuple[Clause, float]]:
        """The positive part of each path as a clause, with its leaf value."""
        out = []
        for decisions, value in self.paths():
            body = tuple(lit for test, taken in decisions if taken for lit in test)
            out.append((Clause(self.head, body), value))
        return out


Covers = Dict[Tuple[Tuple[Atom, ...], Atom], bool]


def _covers(db: Database, body: Tuple[Atom, ...], atom: Atom, seed: Substitution, cache: Optional[Covers]) -> bool:
    if cache is None:
        return satisfies_body(db, body, seed)
    key = (body, atom)
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = satisfies_body(db, body, seed)
    return hit


def sse(values: Sequence[float]) -> float:
    """Sum of squared deviations from the mean (two-pass)."""
    if not values:
        return 0.0
    mean = math.fsum(values) / len(values)
    return math.fsum((v - mean) ** 2 for v in values)


def mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


class TreeLearner:
    """Greedy top-down induction of one tree.

    After :meth:`fit`, ``partition`` maps each leaf route to the indices of the
    training examples that reached it.
    """

    def __init__(self, db: Database, bg: Background, target: str, constants=None, cache: Optional[Covers] = None):
        self.db = db
        self.bg = bg
        self.target = target
        if constants is None:
            constants = db.type_map if db.modes == bg.modes else db.with_modes(bg.modes).type_map
        self.constants = constants
        self.cache = cache
        self.head, self.head_ctx = head_atom(bg, target)
        self.partition: Dict[str, List[int]] = {}

    def seeds(self, examples: Sequence[WeightedExample]) -> List[Substitution]:
        out = []
        for ex in examples:
            s = unify(self.head, ex.atom)
            if s is None or not ex.atom.is_ground:
                raise ValueError(f"example {ex.atom} does not match target head {self.head}")
            out.append(s)
        return out

    def fit(self, examples: Sequence[WeightedExample]) -> RegressionTree:
        if not examples:
            raise ValueError("cannot fit a tree to zero examples")
        self._atoms = [ex.atom for ex in examples]
        self._values = [float(ex.value) for ex in examples]
        self._seeds = self.seeds(examples)
        self.partition = {}
        root = self._grow(list(range(len(examples))), (), self.head_ctx, 0, "")
        return RegressionTree(self.head, root)

    def _grow(self, idx: List[int], path: Tuple[Atom, ...], ctx: VariableContext, depth: int, route: str) -> Node:
        values = [self._values[i] for i in idx]
        if depth >= self.bg.max_tree_depth or len(idx) < self.bg.min_examples_per_node:
            return self._leaf(idx, values, route)
        found = self.best_test(idx, path, ctx)
        if found is None:
            return self._leaf(idx, values, route)
        test, gain, true_idx, false_idx = found
        if gain <= GAIN_TOLERANCE:
            return self._leaf(idx, values, route)
        true_ctx = type_checks(test, self.bg, ctx)
        assert true_ctx is not None, f"refinement produced ill-typed test {test}"
        return Inner(
            test,
            self._grow(true_idx, path + test, true_ctx, depth + 1, route + "T"),
            self._grow(false_idx, path, ctx, depth + 1, route + "F"),
        )

    def _leaf(self, idx, values, route) -> Leaf:
        self.partition[route] = list(idx)
        return Leaf(mean(values))

    def _split(self, idx: Sequence[int], body: Tuple[Atom, ...]) -> Tuple[List[int], List[int]]:
        yes, no = [], []
        for i in idx:
            (yes if _covers(self.db, body, self._atoms[i], self._seeds[i], self.cache) else no).append(i)
        return yes, no

    def _score(self, parent_sse: float, yes: List[int], no: List[int]) -> float:
        return parent_sse - sse([self._values[i] for i in yes]) - sse([self._values[i] for i in no])

    def best_test(self, idx: List[int], path: Tuple[Atom, ...], ctx: VariableContext):
        """Best conjunction for this node as (test, gain, true indices, false indices), or None."""
        parent_sse = sse([self._values[i] for i in idx])
        best = None
        for lit in refinements(self.bg, ctx, self.constants, self.target, exclude=path):
            yes, no = self._split(idx, path + (lit,))
            gain = self._score(parent_sse, yes, no)
            if best is None or gain > best[1]:
                best = ((lit,), gain, yes, no)
        if best is None:
            return None
        while len(best[0]) < self.bg.node_size:
            test, gain, yes, no = best
            ext_ctx = type_checks(test, self.bg, ctx)
            improved = None
            for lit in refinements(self.bg, ext_ctx, self.constants, self.target, exclude=path + test):
                # Adding a literal can only shrink the true side.
                sub_yes, sub_no = self._split(yes, path + test + (lit,))
                ext_no = sorted(no + sub_no)
                ext_gain = self._score(parent_sse, sub_yes, ext_no)
                if ext_gain > gain + GAIN_TOLERANCE and (improved is None or ext_gain > improved[1]):
                    improved = (test + (lit,), ext_gain, sub_yes, ext_no)
            if improved is None:
                break
            best = improved
        return best


def fit_tree(
    examples: Sequence[WeightedExample],
    db: Database,
    bg: Background,
    target: str,
    cache: Optional[Covers] = None,
) -> RegressionTree:
    return TreeLearner(db, bg, target, cache=cache).fit(examples)


def route(tree: RegressionTree, example: Atom, db: Database, cache: Optional[Covers] = None) -> Tuple[str, Leaf]:
    seed = unify(tree.head, example)
    if seed is None:
        raise ValueError(f"example {example} does not match target head {tree.head}")
    node = tree.root
    path: Tuple[Atom, ...] = ()
    trail = ""
    while isinstance(node, Inner):
        if _covers(db, path + node.test, example, seed, cache):
            path = path + node.test
            node = node.true_branch
            trail += "T"
        else:
            node = node.false_branch
            trail += "F"
    return trail, node


def evaluate_tree(tree: RegressionTree, example: Atom, db: Database, cache: Optional[Covers] = None) -> float:
    return route(tree, example, db, cache)[1].value


def _format_term(term, std_logic: bool) -> str:
    if std_logic:
        return term.name
    # Alternative notation: lowercase variables, capitalised constants.
    if isinstance(term, Constant):
        return term.name[:1].upper() + term.name[1:]
    return term.name.lower()


def format_literal(atom: Atom, std_logic: bool = True) -> str:
    if not atom.args:
        return atom.predicate
    return f"{atom.predicate}({','.join(_format_term(t, std_logic) for t in atom.args)})"


def format_tree(tree: RegressionTree, std_logic: bool = True) -> List[str]:
    """One line per root-to-leaf path: ``head :- body.  % value``.

    A failed test is printed as ``\\+(...)`` over the positive literals before
    it plus the test itself, which is what the false branch actually means.
    """
    lines = []
    head = format_literal(tree.head, std_logic)
    for decisions, value in tree.paths():
        positive: List[str] = []
        parts = []
        for test, taken in decisions:
            lits = [format_literal(a, std_logic) for a in test]
            if taken:
                positive.extend(lits)
                parts.extend(lits)
            else:
                parts.append(f"\\+({', '.join(positive + lits)})")
        text = f"{head} :- {', '.join(parts)}." if parts else f"{head}."
        lines.append(f"{text}  % {value!r}")
    return lines
