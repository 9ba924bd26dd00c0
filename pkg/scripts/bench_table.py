"""Timing table: mean (sample std) seconds to fit a boosted RDN, over repeated runs.

Each dataset argument is a directory with pos.txt, neg.txt, facts.txt and
modes.txt. With no arguments the toy fixture and a 10,000-fact synthetic
dataset are timed.
"""

import argparse
import io
import sys

from relboost.cli import main as relboost


def row(args):
    out = io.StringIO()
    code = relboost(["bench", *args], stdout=out)
    if code:
        sys.exit(code)
    return out.getvalue().splitlines()[-1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("datasets", nargs="*")
    parser.add_argument("--repeat", type=int, default=10)
    args = parser.parse_args()
    common = ["--repeat", str(args.repeat)]
    rows = []
    if not args.datasets:
        rows.append(row(["--toy", *common]))
        rows.append(row(["--synthetic", "10000", *common]))
    for d in args.datasets:
        files = [f"--{k}={d}/{k}.txt" for k in ("pos", "neg", "facts", "modes")]
        rows.append(row([*files, *common]))
    print(f"seconds to fit, mean (std) over {args.repeat} runs")
    print("\n".join(rows))


if __name__ == "__main__":
    main()
