"""Rebuild the golden corpus under tests/fixtures/golden/v1.

Writes the synthetic case's input files, then regenerates every case's
expected outputs. Inspect ``git diff`` before committing the result.
"""

import argparse
from pathlib import Path

from relboost.golden import cases, regenerate
from relboost.synthetic import make_dataset

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden" / "v1"


def write_synthetic(case: Path, n_facts: int, n_examples: int, seed: int):
    db, modes = make_dataset(n_facts, n_examples=n_examples, seed=seed)
    case.mkdir(parents=True, exist_ok=True)
    for name, atoms in (("pos", db.pos), ("neg", db.neg), ("facts", db.facts)):
        (case / f"{name}.txt").write_text("".join(f"{a}.\n" for a in atoms))
    (case / "modes.txt").write_text("".join(f"{m}\n" for m in modes))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", type=Path, default=ROOT)
    args = parser.parse_args()
    write_synthetic(args.root / "synthetic_small", n_facts=400, n_examples=60, seed=3)
    for case in cases(args.root):
        regenerate(case)
        print(f"regenerated {case.name}")


if __name__ == "__main__":
    main()
