"""Gradient-boosted relational dependency networks over ground-atom databases."""

from .bias import Background, NoModeError, refinements, validate_background
from .boosting import BoostedRDN, NotFittedError, VersionError, deserialize, serialize
from .database import Database, ModeMismatch, build_database, query_atom, satisfies_body
from .logic import Atom, Clause, Constant, Mode, Role, Variable, apply, rename_apart, unify
from .metrics import EvalReport, evaluate
from .parsing import ParseError, parse_file, parse_ground_atom, parse_mode
from . import example_data

__all__ = [
    "Atom",
    "Background",
    "BoostedRDN",
    "Clause",
    "Constant",
    "Database",
    "EvalReport",
    "Mode",
    "ModeMismatch",
    "NoModeError",
    "NotFittedError",
    "ParseError",
    "Role",
    "Variable",
    "VersionError",
    "apply",
    "build_database",
    "deserialize",
    "evaluate",
    "example_data",
    "parse_file",
    "parse_ground_atom",
    "parse_mode",
    "query_atom",
    "refinements",
    "rename_apart",
    "satisfies_body",
    "serialize",
    "unify",
    "validate_background",
]
