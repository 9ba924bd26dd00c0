"""Boosted relational dependency networks for a single target predicate.

The model's potential for an example is ``psi0 + learning_rate * sum(tree(x))``
and its probability is the logistic sigmoid of the potential. Each boosting
round fits a regression tree to the pseudo-residuals ``y - p``.
"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Tuple, Union

from .bias import Background, NoModeError, head_atom, validate_background
from .database import Database
from .logic import Atom
from .parsing import ParseError, SourcePosition, parse_conjunction, parse_mode
from .tree import Covers, Inner, Leaf, Node, RegressionTree, TreeLearner, WeightedExample, route

logger = logging.getLogger(__name__)

FORMAT_MAGIC = "relboost-model"
FORMAT_VERSION = 1

# Largest double below 1 and smallest positive normal double; keeps p in (0, 1).
_P_MAX = math.nextafter(1.0, 0.0)
_P_MIN = 2.2250738585072014e-308


class NotFittedError(RuntimeError):
    pass


class EmptyDatabaseError(ValueError):
    pass


class ModelFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.position = SourcePosition(max(line, 1), 1)
        self.message = message
        super().__init__(f"model file line {self.position.line}: {message}")


class VersionError(ModelFormatError):
    pass


def sigmoid(psi: float) -> float:
    if psi >= 0:
        p = 1.0 / (1.0 + math.exp(-psi))
    else:
        e = math.exp(psi)
        p = e / (1.0 + e)
    return min(max(p, _P_MIN), _P_MAX)


def softplus(x: float) -> float:
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def bernoulli_nll(y: int, psi: float) -> float:
    """-[y ln p + (1-y) ln(1-p)] with p = sigmoid(psi), computed stably."""
    return softplus(-psi) + (1 - y) * psi


def pseudo_residual(y: int, psi: float) -> float:
    return y - sigmoid(psi)


class BoostedRDN:
    """Functional-gradient-boosted conditional model for ``target``.

    ``psi0`` is the initial potential; pass ``"prior"`` to use
    ``log(|pos| / |neg|)`` from the training data. Refitting a fitted model
    discards its trees.
    """

    def __init__(
        self,
        background: Optional[Background] = None,
        target: Optional[str] = None,
        psi0: Union[float, str] = 0.0,
        learning_rate: float = 1.0,
    ):
        self.background = background if background is not None else Background()
        self.target = target
        if isinstance(psi0, str) and psi0 != "prior":
            raise ValueError(f"psi0 must be a number or 'prior', got {psi0!r}")
        if not isinstance(psi0, str) and not math.isfinite(psi0):
            raise ValueError("psi0 must be finite")
        self.psi0 = psi0
        if not (0.0 < learning_rate <= 1.0):
            raise ValueError(f"learning_rate must be in (0, 1], got {learning_rate}")
        self.learning_rate = float(learning_rate)
        self.trees: List[RegressionTree] = []
        self.initial_potential: float = 0.0 if psi0 == "prior" else float(psi0)
        self.fitted = False

    def __repr__(self):
        return f"BoostedRDN(target={self.target!r}, n_trees={self.background.n_trees}, fitted={self.fitted})"

    def _check_background(self):
        if not self.target:
            raise ValueError("BoostedRDN needs a target predicate")
        problems = validate_background(self.background, self.target)
        errors = [p for p in problems if p.severity == "error"]
        if errors:
            raise NoModeError("; ".join(p.message for p in errors))
        for p in problems:
            logger.warning("%s", p.message)

    def _examples(self, db: Database) -> List[Atom]:
        examples = db.pos + db.neg
        for atom in examples:
            if atom.predicate != self.target:
                raise ValueError(f"example {atom} is not an atom of target {self.target!r}")
        return examples

    def fit(self, db: Database) -> "BoostedRDN":
        self._check_background()
        examples = self._examples(db)
        if not examples:
            raise EmptyDatabaseError("the database has no positive or negative examples")
        bg = self.background
        if db.modes != bg.modes:
            db = db.with_modes(bg.modes)
        if self.psi0 == "prior":
            if not db.pos or not db.neg:
                raise ValueError("psi0='prior' needs both positive and negative examples")
            self.initial_potential = math.log(len(db.pos) / len(db.neg))
        else:
            self.initial_potential = float(self.psi0)

        labels = [1] * len(db.pos) + [0] * len(db.neg)
        psi = [self.initial_potential] * len(examples)
        cache: Covers = {}
        self.trees = []
        self.fitted = False
        for m in range(bg.n_trees):
            weighted = [WeightedExample(x, pseudo_residual(y, s)) for x, y, s in zip(examples, labels, psi)]
            learner = TreeLearner(db, bg, self.target, constants=db.type_map, cache=cache)
            tree = learner.fit(weighted)
            leaves = dict(tree.leaves())
            for trail, members in learner.partition.items():
                step = self.learning_rate * leaves[trail].value
                for i in members:
                    psi[i] += step
            self.trees.append(tree)
            logger.debug("tree %d: depth %d, %d leaves", m + 1, tree.depth(), len(leaves))
        self.fitted = True
        return self

    def _require_fitted(self):
        if not self.fitted:
            raise NotFittedError("this BoostedRDN is not fitted yet; call fit() first")

    def potential(self, atom: Atom, db: Database, cache: Optional[Covers] = None) -> float:
        self._require_fitted()
        psi = self.initial_potential
        for tree in self.trees:
            psi += self.learning_rate * route(tree, atom, db, cache)[1].value
        return psi

    def predict_proba(self, db: Database) -> List[Tuple[Atom, float]]:
        """Probability for every atom in ``db.pos`` then ``db.neg``, in input order."""
        self._require_fitted()
        cache: Covers = {}
        return [(atom, sigmoid(self.potential(atom, db, cache))) for atom in self._examples(db)]

    def predict(self, db: Database) -> List[Tuple[Atom, bool]]:
        """Hard labels: positive iff the probability exceeds 0.5."""
        return [(atom, p > 0.5) for atom, p in self.predict_proba(db)]

    def listing(self) -> List[str]:
        from .tree import format_tree

        self._require_fitted()
        lines = []
        for k, tree in enumerate(self.trees, start=1):
            lines.append(f"% tree {k}")
            lines.extend(format_tree(tree, self.background.use_std_logic_variables))
        return lines


def serialize(model: BoostedRDN) -> str:
    """Canonical text form of a fitted model.

    Layout, one item per line::

        relboost-model 1
        target <name>
        head <atom>.
        psi0 <float>              (repr, so it reads back exactly)
        learning_rate <float>
        <hyperparameter> <value>  (one line each, fixed order)
        modes <count>
        <mode>.                   (count lines)
        trees <count>
        tree <k>
        <node>                    (pre-order; "test <conjunction>." or
        ...                        "leaf <float>", indented two spaces per level)
        end
    """
    model._require_fitted()
    bg = model.background
    head, _ = head_atom(bg, model.target)
    out = [
        f"{FORMAT_MAGIC} {FORMAT_VERSION}",
        f"target {model.target}",
        f"head {head}.",
        f"psi0 {model.initial_potential!r}",
        f"learning_rate {model.learning_rate!r}",
    ]
    for name, value in _hyperparameters(bg):
        out.append(f"{name} {_fmt_value(value)}")
    out.append(f"modes {len(bg.modes)}")
    out.extend(str(m) for m in bg.modes)
    out.append(f"trees {len(model.trees)}")
    for k, tree in enumerate(model.trees, start=1):
        out.append(f"tree {k}")
        _write_node(tree.root, 0, out)
        out.append("end")
    return "\n".join(out) + "\n"


_HYPER_FIELDS = (
    "n_trees",
    "max_tree_depth",
    "node_size",
    "max_new_vars_per_literal",
    "min_examples_per_node",
    "allow_self_aliasing",
    "use_std_logic_variables",
)


def _hyperparameters(bg: Background):
    return [(name, getattr(bg, name)) for name in _HYPER_FIELDS]


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _write_node(node: Node, depth: int, out: List[str]):
    pad = "  " * depth
    if isinstance(node, Leaf):
        out.append(f"{pad}leaf {node.value!r}")
    else:
        out.append(f"{pad}test {', '.join(str(a) for a in node.test)}.")
        _write_node(node.true_branch, depth + 1, out)
        _write_node(node.false_branch, depth + 1, out)


class _Reader:
    def __init__(self, text: str):
        if text.endswith("\n"):
            text = text[:-1]
        self.lines = text.split("\n")
        self.n = 0

    def next(self, what: str) -> str:
        if self.n >= len(self.lines):
            raise ModelFormatError(self.n, f"unexpected end of file, expected {what}")
        line = self.lines[self.n]
        self.n += 1
        return line

    def field(self, key: str) -> str:
        line = self.next(key)
        name, _, value = line.partition(" ")
        if name != key or not value:
            raise ModelFormatError(self.n, f"expected '{key} <value>', found {line!r}")
        return value

    def error(self, message: str) -> ModelFormatError:
        return ModelFormatError(self.n, message)


def _parse_float(r: _Reader, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise r.error(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise r.error(f"non-finite number: {text!r}")
    return value


def _parse_int(r: _Reader, text: str) -> int:
    if not text.isdigit():
        raise r.error(f"not a non-negative integer: {text!r}")
    return int(text)


def _parse_bool(r: _Reader, text: str) -> bool:
    if text not in ("true", "false"):
        raise r.error(f"expected true or false, found {text!r}")
    return text == "true"


def deserialize(text: str) -> BoostedRDN:
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError:
            raise VersionError(1, "model file is not ASCII text") from None
    r = _Reader(text)
    header = r.lines[0] if r.lines else ""
    magic, _, version = header.partition(" ")
    if magic != FORMAT_MAGIC:
        raise VersionError(1, f"not a model file (header {header!r})")
    if version != str(FORMAT_VERSION):
        raise VersionError(1, f"unsupported model format version {version!r} (expected {FORMAT_VERSION})")
    r.n = 1
    target = r.field("target")
    head_text = r.field("head")
    psi0 = _parse_float(r, r.field("psi0"))
    learning_rate = _parse_float(r, r.field("learning_rate"))
    hyper = {}
    for name in _HYPER_FIELDS:
        raw = r.field(name)
        hyper[name] = _parse_bool(r, raw) if name in ("allow_self_aliasing", "use_std_logic_variables") else _parse_int(r, raw)
    n_modes = _parse_int(r, r.field("modes"))
    modes = []
    for _ in range(n_modes):
        line = r.next("a mode")
        try:
            modes.append(parse_mode(line, line=r.n))
        except ParseError as err:
            raise ModelFormatError(r.n, f"bad mode: {err.message}") from None
    try:
        bg = Background(modes=tuple(modes), **hyper)
    except ValueError as err:
        raise ModelFormatError(r.n, str(err)) from None
    try:
        head, _ = head_atom(bg, target)
    except NoModeError as err:
        raise ModelFormatError(2, str(err)) from None
    if head_text != f"{head}.":
        raise ModelFormatError(3, f"head {head_text!r} does not match target mode (expected '{head}.')")
    try:
        model = BoostedRDN(bg, target, psi0=psi0, learning_rate=learning_rate)
    except ValueError as err:
        raise ModelFormatError(5, str(err)) from None

    n_trees = _parse_int(r, r.field("trees"))
    for k in range(1, n_trees + 1):
        if r.field("tree") != str(k):
            raise r.error(f"expected 'tree {k}'")
        root = _read_node(r, 0)
        if r.next("'end'") != "end":
            raise r.error("expected 'end' after tree")
        model.trees.append(RegressionTree(head, root))
    if r.n != len(r.lines):
        r.n += 1
        raise r.error("unexpected text after the last tree")
    model.initial_potential = psi0
    model.fitted = True
    return model


def _read_node(r: _Reader, depth: int) -> Node:
    if depth > 500:
        raise r.error("tree too deep")
    raw = r.next("a tree node")
    line = raw.lstrip(" ")
    kind, _, rest = line.partition(" ")
    if kind == "leaf":
        return Leaf(_parse_float(r, rest))
    if kind == "test":
        try:
            test = parse_conjunction(rest, line=r.n)
        except ParseError as err:
            raise ModelFormatError(r.n, f"bad test: {err.message}") from None
        yes = _read_node(r, depth + 1)
        no = _read_node(r, depth + 1)
        return Inner(test, yes, no)
    raise r.error(f"expected 'test' or 'leaf', found {raw!r}")
