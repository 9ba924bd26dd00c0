"""Readers and printers for fact, example and mode files.

Grammar (ASCII, one statement per line, ``%`` starts a comment)::

    statement   := atom "."
    atom        := predicate [ "(" term { "," term } ")" ]
    predicate   := [a-z][A-Za-z0-9_]*
    constant    := [a-z0-9][A-Za-z0-9_]*
    variable    := [A-Z_][A-Za-z0-9_]*          (queries and model files only)
    mode        := predicate [ "(" marker type { "," marker type } ")" ] "."
    marker      := "+" | "-" | "#"
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .logic import Atom, Constant, Mode, Role, Term, Variable

_IDENT_REST = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")
_LOWER = set("abcdefghijklmnopqrstuvwxyz")
_DIGIT = set("0123456789")
_UPPER = set("ABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_SPACE = set(" \t\r")


@dataclass(frozen=True)
class SourcePosition:
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid position {self.line}:{self.column}")

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, position: SourcePosition, message: str, excerpt: str = "", source: str = ""):
        self.position = position
        self.message = message or "parse error"
        self.excerpt = excerpt
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.source}:" if self.source else ""
        text = f"{where}{self.position}: {self.message}"
        if self.excerpt:
            text += f": {self.excerpt!r}"
        return text


class ParseErrors(Exception):
    """Every error found in a file, plus whatever parsed cleanly."""

    def __init__(self, errors: List[ParseError], parsed: list):
        self.errors = errors
        self.parsed = parsed
        super().__init__("\n".join(str(e) for e in errors))


class _Scanner:
    def __init__(self, text: str, line: int = 1):
        self.text = text
        self.line = line
        self.i = 0

    def error(self, message: str, at: Optional[int] = None) -> ParseError:
        at = self.i if at is None else at
        # Keep the column inside the line even when the problem is at its end.
        column = min(at, len(self.text) - 1) + 1 if self.text else 1
        start = max(0, at - 10)
        excerpt = self.text[start : at + 10]
        return ParseError(SourcePosition(self.line, max(column, 1)), message, excerpt)

    def skip_space(self):
        while self.i < len(self.text) and self.text[self.i] in _SPACE:
            self.i += 1

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str, what: str):
        if self.peek() != ch:
            found = self.peek()
            raise self.error(f"expected {what}" + (f", found {found!r}" if found else ", found end of line"))
        self.i += 1

    def name(self) -> Tuple[str, int]:
        self.skip_space()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in _IDENT_REST:
            self.i += 1
        return self.text[start : self.i], start

    def at_end(self) -> bool:
        self.skip_space()
        return self.i >= len(self.text) or self.text[self.i] == "%"


def _prepare(text: Union[str, bytes], line: int = 1) -> _Scanner:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raw = bytes(text)
            before = raw[: exc.start]
            position = SourcePosition(line + before.count(b"\n"), exc.start - before.rfind(b"\n"))
            raise ParseError(position, "non-ASCII byte", repr(raw[exc.start : exc.start + 1])) from None
    # A single newline at the end of a statement is harmless.
    if text.endswith("\n"):
        text = text[:-1]
    scanner = _Scanner(text, line)
    for idx, ch in enumerate(text):
        if ch == "\n":
            # Point at the start of the line the statement spills onto.
            excerpt = text[max(0, idx - 10) : idx + 10]
            raise ParseError(SourcePosition(line + 1, 1), "statement spans more than one line", excerpt)
        if not (32 <= ord(ch) < 127 or ch in "\t\r"):
            raise scanner.error(f"unexpected character {ch!r}", idx)
    return scanner


def _predicate(sc: _Scanner) -> str:
    name, start = sc.name()
    if not name:
        found = sc.peek()
        raise sc.error("expected predicate name" + (f", found {found!r}" if found else ""))
    if name[0] not in _LOWER:
        raise sc.error(f"predicate {name!r} must start with a lowercase letter", start)
    return name


def _term(sc: _Scanner, allow_variables: bool) -> Term:
    name, start = sc.name()
    if not name:
        found = sc.peek()
        if found in (",", ")"):
            raise sc.error("empty argument")
        raise sc.error("expected a term" + (f", found {found!r}" if found else ", found end of line"))
    if name[0] in _UPPER:
        if not allow_variables:
            raise sc.error(f"variable {name!r} not allowed here (facts must be ground)", start)
        return Variable(name)
    return Constant(name)


def _atom(sc: _Scanner, allow_variables: bool) -> Atom:
    pred = _predicate(sc)
    args: List[Term] = []
    if sc.peek() == "(":
        sc.i += 1
        args.append(_term(sc, allow_variables))
        while sc.peek() == ",":
            sc.i += 1
            args.append(_term(sc, allow_variables))
        if sc.peek() != ")":
            if sc.peek() in ("", ".", "%"):
                raise sc.error("unbalanced parentheses: missing ')'")
            sc.expect(")", "',' or ')'")
        sc.i += 1
    elif sc.peek() == ")":
        raise sc.error("unbalanced parentheses: unexpected ')'")
    return Atom(pred, tuple(args))


def _finish(sc: _Scanner):
    if sc.peek() == ".":
        sc.i += 1
        if not sc.at_end():
            raise sc.error("unexpected text after '.'")
        return
    if sc.at_end():
        raise sc.error("missing terminal period")
    found = sc.peek()
    if found == ")":
        raise sc.error("unbalanced parentheses: unexpected ')'")
    raise sc.error(f"expected '.', found {found!r}")


def parse_atom(text: Union[str, bytes], *, ground: bool = True, terminated: bool = True, line: int = 1) -> Atom:
    sc = _prepare(text, line)
    atom = _atom(sc, allow_variables=not ground)
    if terminated:
        _finish(sc)
    elif not sc.at_end():
        raise sc.error("unexpected text after atom")
    return atom


def parse_ground_atom(text: Union[str, bytes], line: int = 1) -> Atom:
    return parse_atom(text, ground=True, line=line)


def parse_conjunction(text: Union[str, bytes], line: int = 1) -> Tuple[Atom, ...]:
    """``p(A,B), q(B).`` with variables allowed."""
    sc = _prepare(text, line)
    atoms = [_atom(sc, allow_variables=True)]
    while sc.peek() == ",":
        sc.i += 1
        atoms.append(_atom(sc, allow_variables=True))
    _finish(sc)
    return tuple(atoms)


def parse_mode(text: Union[str, bytes], line: int = 1) -> Mode:
    sc = _prepare(text, line)
    pred = _predicate(sc)
    roles: List[Tuple[Role, str]] = []
    if sc.peek() == "(":
        sc.i += 1
        roles.append(_role(sc))
        while sc.peek() == ",":
            sc.i += 1
            roles.append(_role(sc))
        if sc.peek() != ")":
            if sc.peek() in ("", ".", "%"):
                raise sc.error("unbalanced parentheses: missing ')'")
            sc.expect(")", "',' or ')'")
        sc.i += 1
    elif sc.peek() == ")":
        raise sc.error("unbalanced parentheses: unexpected ')'")
    _finish(sc)
    return Mode(pred, tuple(roles))


def _role(sc: _Scanner) -> Tuple[Role, str]:
    marker = sc.peek()
    if marker in ("+", "-", "#"):
        sc.i += 1
    elif marker in _IDENT_REST:
        raise sc.error("missing role marker (+, - or #)")
    elif marker in (",", ")", ""):
        raise sc.error("empty argument")
    else:
        raise sc.error(f"unknown role marker {marker!r}")
    if sc.i < len(sc.text) and sc.text[sc.i] in _SPACE:
        sc.skip_space()
    typ, start = sc.name()
    if not typ:
        raise sc.error("missing type after role marker")
    if typ[0] not in _LOWER:
        raise sc.error(f"type {typ!r} must start with a lowercase letter", start)
    return Role(marker), typ


def parse_file(text: Union[str, bytes], kind: str, source: str = "") -> list:
    """Parse a whole file; raise :class:`ParseErrors` if any line is bad.

    ``kind`` is ``"facts"``, ``"examples"`` or ``"modes"``. Parsing carries on
    past bad lines so that every problem is reported at once.
    """
    if kind not in ("facts", "examples", "modes"):
        raise ValueError(f"unknown file kind {kind!r}")
    if isinstance(text, (bytes, bytearray)):
        raw_lines = bytes(text).split(b"\n")
    else:
        raw_lines = text.split("\n")
    parse_line = parse_mode if kind == "modes" else parse_ground_atom
    results: list = []
    errors: List[ParseError] = []
    for lineno, raw in enumerate(raw_lines, start=1):
        try:
            stripped = _strip_comment(raw)
        except ParseError as err:
            err = ParseError(SourcePosition(lineno, err.position.column), err.message, err.excerpt, source)
            errors.append(err)
            continue
        if not stripped.strip():
            continue
        try:
            results.append(parse_line(stripped, line=lineno))
        except ParseError as err:
            err.source = source
            errors.append(err)
    if errors:
        raise ParseErrors(errors, results)
    return results


def _strip_comment(raw: Union[str, bytes]) -> str:
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(SourcePosition(1, exc.start + 1), "non-ASCII byte")
    cut = raw.find("%")
    return raw if cut < 0 else raw[:cut]


def format_atom(atom: Atom, terminated: bool = True) -> str:
    return f"{atom}." if terminated else str(atom)


def format_mode(mode: Mode) -> str:
    return str(mode)
