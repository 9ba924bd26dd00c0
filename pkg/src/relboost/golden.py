"""Golden-file regression cases: train, predict and eval compared byte-for-byte.

A case is a directory holding::

    pos.txt neg.txt facts.txt modes.txt   training database
    args.json                             optional extra train flags (JSON list)
    expected/model.txt                    serialized model
    expected/predictions.txt              predictions on the training examples
    expected/eval.txt                     plain-text report for those predictions

Every immediate subdirectory of the corpus root that has ``modes.txt`` is a
case.
"""

from __future__ import annotations

import difflib
import io
import json
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

from .cli import main

OUTPUTS = ("model.txt", "predictions.txt", "eval.txt")


@dataclass
class CaseResult:
    name: str
    passed: bool
    diff: str = ""


def _run(args: List[str]) -> None:
    sink = io.StringIO()
    code = main(args, stdout=sink)
    if code != 0:
        raise RuntimeError(f"relboost {' '.join(args)} exited with {code}")


def produce(case: Path, workdir: Path) -> Dict[str, str]:
    """Run train, predict and eval for ``case``; return output texts by file name."""
    data = ["--pos", str(case / "pos.txt"), "--neg", str(case / "neg.txt"), "--facts", str(case / "facts.txt")]
    extra = json.loads((case / "args.json").read_text()) if (case / "args.json").exists() else []
    model, preds, report = (workdir / name for name in OUTPUTS)
    _run(["train", *data, "--modes", str(case / "modes.txt"), "--out", str(model), *extra])
    _run(["predict", *data, "--model", str(model), "--out", str(preds)])
    sink = io.StringIO()
    code = main(["eval", "--pos", data[1], "--neg", data[3], "--predictions", str(preds)], stdout=sink)
    if code != 0:
        raise RuntimeError(f"eval for {case.name} exited with {code}")
    report.write_text(sink.getvalue())
    return {name: (workdir / name).read_text() for name in OUTPUTS}


def run_case(case: Path) -> CaseResult:
    with tempfile.TemporaryDirectory() as tmp:
        try:
            got = produce(case, Path(tmp))
        except RuntimeError as err:
            return CaseResult(case.name, False, str(err))
    diffs = []
    for name in OUTPUTS:
        path = case / "expected" / name
        want = path.read_text() if path.exists() else ""
        if got[name] != want:
            diffs.extend(
                difflib.unified_diff(
                    want.splitlines(keepends=True),
                    got[name].splitlines(keepends=True),
                    fromfile=f"expected/{name}",
                    tofile=f"actual/{name}",
                )
            )
    return CaseResult(case.name, not diffs, "".join(diffs))


def cases(root: Path) -> List[Path]:
    root = Path(root)
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if (p / "modes.txt").exists())


def run_golden_suite(root: Path) -> List[CaseResult]:
    found = cases(root)
    if not found:
        warnings.warn(f"no golden cases under {root}; nothing to check")
    return [run_case(case) for case in found]


def regenerate(case: Path) -> None:
    """Overwrite a case's expected outputs. Review the diff before committing."""
    (case / "expected").mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        for name, text in produce(case, Path(tmp)).items():
            (case / "expected" / name).write_text(text)
