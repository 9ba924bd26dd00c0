"""Background knowledge: mode declarations, search bounds, and the refinement operator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .logic import Atom, Constant, Mode, Role, Variable, fresh_variables

VariableContext = Dict[Variable, str]


class NoModeError(ValueError):
    """The target predicate has no mode declaration."""


@dataclass(frozen=True)
class Background:
    """Mode declarations plus the bounds that shape each tree.

    ``modes`` may be given as :class:`Mode` values or as mode strings such as
    ``"friends(+person,-person)."``. ``use_std_logic_variables`` only changes
    how learned clauses are printed.
    """

    modes: Tuple[Mode, ...] = ()
    max_tree_depth: int = 3
    node_size: int = 2
    n_trees: int = 10
    max_new_vars_per_literal: int = 2
    min_examples_per_node: int = 2
    allow_self_aliasing: bool = False
    use_std_logic_variables: bool = True

    def __post_init__(self):
        from .parsing import parse_mode

        modes = tuple(parse_mode(m) if isinstance(m, (str, bytes)) else m for m in self.modes)
        object.__setattr__(self, "modes", modes)
        for name in ("max_tree_depth", "n_trees"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
        for name in ("node_size", "max_new_vars_per_literal", "min_examples_per_node"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def modes_for(self, predicate: str) -> List[Mode]:
        return [m for m in self.modes if m.predicate == predicate]


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.severity}: {self.message}"


def target_mode(bg: Background, target: str) -> Mode:
    modes = bg.modes_for(target)
    if not modes:
        raise NoModeError(f"no mode for target {target!r}")
    return modes[0]


def head_atom(bg: Background, target: str) -> Tuple[Atom, VariableContext]:
    """``target(A, B, ...)`` with one fresh variable per argument, and their types."""
    mode = target_mode(bg, target)
    names = fresh_variables(())
    ctx: VariableContext = {}
    args = []
    for _, typ in mode.arg_roles:
        v = next(names)
        ctx[v] = typ
        args.append(v)
    return Atom(target, tuple(args)), ctx


def refinements(
    bg: Background,
    ctx: Mapping[Variable, str],
    constants: Mapping[str, Iterable[Constant]],
    target: Optional[str] = None,
    exclude: Iterable[Atom] = (),
) -> List[Atom]:
    """Candidate literals that respect the mode declarations under ``ctx``.

    Input arguments reuse a typed variable from ``ctx``; output arguments reuse
    one or introduce a fresh variable; constant arguments range over the
    observed constants of their type. Fresh variables are named in order of
    appearance after the names already in ``ctx``, so candidates that differ
    only in fresh naming coincide. The target predicate and anything in
    ``exclude`` are left out.
    """
    excluded = set(exclude)
    seen: Set[Atom] = set()
    out: List[Atom] = []
    sorted_constants = {typ: sorted(cs, key=lambda c: c.name) for typ, cs in constants.items()}
    for mode in bg.modes:
        if mode.predicate == target:
            continue
        for atom in _expand(mode, ctx, sorted_constants, bg.max_new_vars_per_literal):
            if atom in seen or atom in excluded:
                continue
            if not bg.allow_self_aliasing and _self_aliased(atom):
                continue
            seen.add(atom)
            out.append(atom)
    return out


_FRESH = object()


def _expand(mode: Mode, ctx: Mapping[Variable, str], constants: Mapping[str, List[Constant]], max_new: int):
    options = []
    for role, typ in mode.arg_roles:
        typed = [v for v, t in ctx.items() if t == typ]
        if role is Role.INPUT:
            choice: list = typed
        elif role is Role.OUTPUT:
            choice = typed + [_FRESH]
        else:
            choice = list(constants.get(typ, ()))
        if not choice:
            return
        options.append(choice)
    for combo in itertools.product(*options):
        n_fresh = sum(1 for c in combo if c is _FRESH)
        if n_fresh > max_new:
            continue
        names = fresh_variables(ctx)
        args = tuple(next(names) if c is _FRESH else c for c in combo)
        yield Atom(mode.predicate, args)


def _self_aliased(atom: Atom) -> bool:
    vs = list(atom.variables())
    return len(vs) != len(set(vs))


def _fits(mode: Mode, lit: Atom, ctx: Optional[Mapping[Variable, str]]) -> bool:
    for (role, typ), term in zip(mode.arg_roles, lit.args):
        if role is Role.CONSTANT:
            if not isinstance(term, Constant):
                return False
            continue
        if not isinstance(term, Variable):
            return False
        if ctx is None:
            continue
        if role is Role.INPUT and ctx.get(term) != typ:
            return False
        if role is Role.OUTPUT and term in ctx and ctx[term] != typ:
            return False
    return True


def type_checks(literals: Sequence[Atom], bg: Background, ctx: Mapping[Variable, str]) -> Optional[VariableContext]:
    """Check input-before-use for a conjunction; return the extended context or None."""
    ctx = dict(ctx)
    for lit in literals:
        mode = next((m for m in bg.modes if m.signature == lit.signature and _fits(m, lit, ctx)), None)
        if mode is None:
            return None
        for (role, typ), term in zip(mode.arg_roles, lit.args):
            if isinstance(term, Variable) and term not in ctx:
                ctx[term] = typ
    return ctx


def validate_background(bg: Background, target: str) -> List[Issue]:
    issues: List[Issue] = []
    if not bg.modes:
        issues.append(Issue("error", "no modes declared"))
        return issues
    head_modes = bg.modes_for(target)
    if not head_modes:
        issues.append(Issue("error", f"no mode for target {target!r}"))
        return issues
    reachable = {typ for _, typ in head_modes[0].arg_roles}
    usable: Set[Mode] = set()
    changed = True
    while changed:
        changed = False
        for mode in bg.modes:
            if mode in usable or mode.predicate == target:
                continue
            inputs = {typ for role, typ in mode.arg_roles if role is Role.INPUT}
            if inputs <= reachable:
                usable.add(mode)
                outputs = {typ for role, typ in mode.arg_roles if role is Role.OUTPUT}
                if not outputs <= reachable:
                    reachable |= outputs
                changed = True
    for mode in bg.modes:
        if mode.predicate != target and mode not in usable:
            issues.append(Issue("warning", f"mode {mode} is unreachable from the variables of {target!r}"))
    return issues
