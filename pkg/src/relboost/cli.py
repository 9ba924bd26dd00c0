"""Command-line interface: train, predict, eval, bench, negatives.

Results go to stdout; diagnostics go to stderr. Exit codes: 0 success,
1 bad input (usage, parse, validation, model format), 2 I/O failure while
writing or reading an existing path.
"""

from __future__ import annotations

import argparse
import itertools
import math
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from . import example_data
from .bias import Background, NoModeError, target_mode
from .boosting import BoostedRDN, EmptyDatabaseError, ModelFormatError, NotFittedError, deserialize, serialize
from .database import Database, ModeMismatch
from .logic import Atom
from .metrics import DegenerateError, evaluate
from .parsing import ParseError, ParseErrors, parse_atom, parse_file


class CLIError(Exception):
    def __init__(self, message: str, code: int = 1):
        self.code = code
        super().__init__(message)


@dataclass
class RunConfig:
    command: str
    pos: Optional[Path] = None
    neg: Optional[Path] = None
    facts: Optional[Path] = None
    modes: Optional[Path] = None
    model: Optional[Path] = None
    out: Optional[Path] = None
    predictions: Optional[Path] = None
    target: Optional[str] = None
    toy: bool = False
    synthetic: Optional[int] = None
    trees: int = 10
    depth: int = 3
    node_size: int = 2
    learning_rate: float = 1.0
    psi0: Union[float, str] = 0.0
    seed: int = 0
    repeat: int = 10
    name: Optional[str] = None
    kv: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**fields)

    def background(self, modes) -> Background:
        return Background(modes=tuple(modes), n_trees=self.trees, max_tree_depth=self.depth, node_size=self.node_size)


def _read(path: Path, what: str) -> str:
    try:
        return path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise CLIError(f"{what} file not found: {path}") from None
    except UnicodeDecodeError as err:
        raise CLIError(f"{what} file {path}: non-ASCII byte at offset {err.start}") from None
    except OSError as err:
        raise CLIError(f"cannot read {what} file {path}: {err.strerror or err}", code=2) from None


def _write(path: Optional[Path], text: str, what: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    try:
        path.write_text(text, encoding="ascii")
    except OSError as err:
        raise CLIError(f"cannot write {what} file {path}: {err.strerror or err}", code=2) from None


def _parse(path: Optional[Path], kind: str, what: str, required: bool = True) -> list:
    if path is None:
        if required:
            raise CLIError(f"missing --{what} (or use --toy)")
        return []
    text = _read(path, what)
    try:
        return parse_file(text, kind, source=str(path))
    except ParseErrors as errs:
        raise CLIError("\n".join(str(e) for e in errs.errors)) from None


def _load_training(cfg: RunConfig):
    """(pos, neg, facts, modes) from files or the toy fixture."""
    if cfg.toy:
        db = example_data.train
        return db.pos, db.neg, db.facts, list(db.modes)
    if cfg.synthetic is not None:
        from .synthetic import make_dataset

        db, modes = make_dataset(cfg.synthetic, seed=cfg.seed)
        return db.pos, db.neg, db.facts, modes
    modes = _parse(cfg.modes, "modes", "modes")
    pos = _parse(cfg.pos, "examples", "pos")
    neg = _parse(cfg.neg, "examples", "neg")
    facts = _parse(cfg.facts, "facts", "facts")
    return pos, neg, facts, modes


def _database(pos, neg, facts, modes) -> Database:
    try:
        return Database(pos, neg, facts, modes)
    except ValueError as err:  # includes ModeMismatch
        raise CLIError(str(err)) from None


def _infer_target(cfg: RunConfig, pos: Sequence[Atom], neg: Sequence[Atom]) -> str:
    if cfg.target:
        return cfg.target
    preds = sorted({a.predicate for a in (*pos, *neg)})
    if len(preds) != 1:
        found = ", ".join(preds) if preds else "none"
        raise CLIError(f"cannot infer the target predicate from the examples (found: {found}); pass --target")
    return preds[0]


def _fit(cfg: RunConfig, db: Database, modes, target: str) -> BoostedRDN:
    try:
        model = BoostedRDN(cfg.background(modes), target, psi0=cfg.psi0, learning_rate=cfg.learning_rate)
        return model.fit(db)
    except (NoModeError, EmptyDatabaseError, ValueError) as err:
        raise CLIError(str(err)) from None


def cmd_train(cfg: RunConfig, stdout) -> int:
    if cfg.out is None:
        raise CLIError("train needs --out for the model file")
    pos, neg, facts, modes = _load_training(cfg)
    db = _database(pos, neg, facts, modes)
    target = _infer_target(cfg, pos, neg)
    start = time.perf_counter()
    model = _fit(cfg, db, modes, target)
    elapsed = time.perf_counter() - start
    _write(cfg.out, serialize(model), "model", stdout)
    for line in model.listing():
        stdout.write(line + "\n")
    stdout.write(
        f"trained {len(model.trees)} trees for {target} in {elapsed:.3f}s "
        f"(pos={len(db.pos)} neg={len(db.neg)} facts={len(db.facts)})\n"
    )
    return 0


def _load_model(path: Optional[Path]) -> BoostedRDN:
    if path is None:
        raise CLIError("missing --model")
    text = _read(path, "model")
    try:
        return deserialize(text)
    except ModelFormatError as err:
        raise CLIError(f"{path}: {err}") from None


def format_predictions(rows: Sequence[Tuple[Atom, float]]) -> str:
    return "".join(f"{atom} {p:.6f}\n" for atom, p in rows)


def cmd_predict(cfg: RunConfig, stdout) -> int:
    model = _load_model(cfg.model)
    modes = list(model.background.modes)
    if cfg.toy:
        db = example_data.train
    else:
        pos = _parse(cfg.pos, "examples", "pos")
        neg = _parse(cfg.neg, "examples", "neg")
        facts = _parse(cfg.facts, "facts", "facts", required=False)
        db = _database(pos, neg, facts, modes)
    try:
        rows = model.predict_proba(db)
    except (NotFittedError, ValueError) as err:
        raise CLIError(str(err)) from None
    _write(cfg.out, format_predictions(rows), "predictions", stdout)
    return 0


def read_predictions(text: str, source: str = "") -> List[Tuple[Atom, float]]:
    rows, errors = [], []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        atom_text, _, prob_text = line.rstrip().rpartition(" ")
        try:
            atom = parse_atom(atom_text, terminated=False, line=lineno)
            p = float(prob_text)
            if not 0.0 <= p <= 1.0:
                raise ValueError
            rows.append((atom, p))
        except ParseError as err:
            errors.append(f"{source}:{err}")
        except ValueError:
            errors.append(f"{source}:{lineno}:1: bad probability {prob_text!r}")
    if errors:
        raise CLIError("\n".join(errors))
    return rows


def cmd_eval(cfg: RunConfig, stdout) -> int:
    if cfg.predictions is None:
        raise CLIError("missing --predictions")
    rows = read_predictions(_read(cfg.predictions, "predictions"), str(cfg.predictions))
    if cfg.toy:
        pos, neg = example_data.train.pos, example_data.train.neg
    else:
        pos = _parse(cfg.pos, "examples", "pos")
        neg = _parse(cfg.neg, "examples", "neg")
    labels = {a: 1 for a in pos}
    labels.update({a: 0 for a in neg})
    scored = []
    for atom, p in rows:
        if atom not in labels:
            raise CLIError(f"prediction for {atom} has no label in --pos/--neg")
        scored.append((labels[atom], p))
    if not scored:
        raise CLIError("no predictions to evaluate")
    try:
        report = evaluate(scored)
    except DegenerateError as err:
        report = err.report
        print(f"warning: {err}", file=sys.stderr)
    stdout.write(report.format_kv() if cfg.kv else report.format_text())
    return 0


def bench_durations(fit, repeat: int) -> List[float]:
    """Wall-clock seconds of ``repeat`` calls to ``fit`` (monotonic clock)."""
    durations = []
    for _ in range(repeat):
        start = time.perf_counter()
        fit()
        durations.append(time.perf_counter() - start)
    return durations


def summarize(durations: Sequence[float]) -> Tuple[float, float]:
    """Mean and sample standard deviation."""
    if len(durations) < 2:
        raise ValueError("need at least two runs for a standard deviation")
    return statistics.fmean(durations), statistics.stdev(durations)


def cmd_bench(cfg: RunConfig, stdout) -> int:
    if cfg.repeat < 2:
        raise CLIError("--repeat must be at least 2 (the standard deviation needs two runs)")
    pos, neg, facts, modes = _load_training(cfg)
    db = _database(pos, neg, facts, modes)
    target = _infer_target(cfg, pos, neg)
    _fit(cfg, db, modes, target)  # surface input errors before timing
    durations = bench_durations(lambda: _fit(cfg, db, modes, target), cfg.repeat)
    mean, std = summarize(durations)
    if cfg.name:
        name = cfg.name
    elif cfg.toy:
        name = "toy"
    elif cfg.synthetic is not None:
        name = f"synthetic{cfg.synthetic}"
    else:
        name = cfg.pos.parent.name or str(cfg.pos)
    width = max(len(name), len("dataset"))
    stdout.write(f"{'dataset'.ljust(width)}  seconds, mean (std) over {len(durations)} runs\n")
    stdout.write(f"{name.ljust(width)}  {mean:.4f} ({std:.4f})\n")
    return 0


def closed_world_negatives(pos: Sequence[Atom], facts: Sequence[Atom], modes, target: str) -> List[Atom]:
    """Every target atom over observed typed constants that is not a positive example."""
    bg = Background(modes=tuple(modes))
    mode = target_mode(bg, target)
    types = Database(pos, (), facts, modes).type_map
    domains = []
    for role, typ in mode.arg_roles:
        domains.append(sorted(types.get(typ, ()), key=lambda c: c.name))
    positives = set(pos)
    return [a for a in (Atom(target, args) for args in itertools.product(*domains)) if a not in positives]


def cmd_negatives(cfg: RunConfig, stdout) -> int:
    modes = _parse(cfg.modes, "modes", "modes")
    pos = _parse(cfg.pos, "examples", "pos")
    facts = _parse(cfg.facts, "facts", "facts", required=False)
    target = _infer_target(cfg, pos, ())
    try:
        negs = closed_world_negatives(pos, facts, modes, target)
    except (NoModeError, ModeMismatch) as err:
        raise CLIError(str(err)) from None
    _write(cfg.out, "".join(f"{a}.\n" for a in negs), "negatives", stdout)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(f"{self.prog}: {message}")


def _psi0(text: str):
    if text == "prior":
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'prior', got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("psi0 must be finite")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _rate(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("learning rate must be in (0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relboost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def data_flags(p, modes=True, facts=True):
        p.add_argument("--toy", action="store_true", help="use the built-in smokes-friends-cancer fixture")
        p.add_argument("--pos", type=Path, help="positive examples file")
        p.add_argument("--neg", type=Path, help="negative examples file")
        if facts:
            p.add_argument("--facts", type=Path, help="background facts file")
        if modes:
            p.add_argument("--modes", type=Path, help="mode declarations file")

    def hyper_flags(p):
        p.add_argument("--target", help="target predicate (default: the examples' predicate)")
        p.add_argument("--trees", type=_non_negative, default=10)
        p.add_argument("--depth", type=_non_negative, default=3)
        p.add_argument("--node-size", type=_positive, default=2)
        p.add_argument("--learning-rate", type=_rate, default=1.0)
        p.add_argument("--psi0", type=_psi0, default=0.0, help="initial potential, or 'prior'")
        p.add_argument("--seed", type=int, default=0, help="seed for --synthetic data")

    p = sub.add_parser("train", help="fit a boosted RDN and write the model file")
    data_flags(p)
    hyper_flags(p)
    p.add_argument("--synthetic", type=_positive, metavar="N_FACTS", help="generate a synthetic dataset")
    p.add_argument("--out", type=Path, help="model file to write")

    p = sub.add_parser("predict", help="write probabilities for test examples")
    data_flags(p, modes=False)
    p.add_argument("--model", type=Path, help="model file")
    p.add_argument("--out", type=Path, help="predictions file (default: stdout)")

    p = sub.add_parser("eval", help="score a predictions file against labels")
    data_flags(p, modes=False, facts=False)
    p.add_argument("--predictions", type=Path, help="predictions file")
    p.add_argument("--kv", action="store_true", help="key=value output")

    p = sub.add_parser("bench", help="time repeated fits")
    data_flags(p)
    hyper_flags(p)
    p.add_argument("--synthetic", type=_positive, metavar="N_FACTS", help="generate a synthetic dataset")
    p.add_argument("--repeat", type=int, default=10)
    p.add_argument("--name", help="row label in the timing table")

    p = sub.add_parser("negatives", help="closed-world negatives: typed target atoms not in --pos")
    p.add_argument("--pos", type=Path)
    p.add_argument("--facts", type=Path)
    p.add_argument("--modes", type=Path)
    p.add_argument("--target")
    p.add_argument("--out", type=Path)
    return parser


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "negatives": cmd_negatives,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise CLIError("missing command (train, predict, eval, bench, negatives)")
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg, stdout)
    except CLIError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
