#!/usr/bin/env python3
"""Run every CLI stage over the curated spec documents.

For each JSON document under --specs this drives classify, group, maps,
verify, and emit through the same entry point the installed console script
uses, collecting per-stage exit codes and writing CSV artifacts under
--out/<document-stem>/.  Exits nonzero if any stage fails anywhere.
"""

import argparse
import pathlib
import sys
import time

from innerinv.cli import run

STAGES = ("classify", "group", "maps", "verify", "emit")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--specs",
        type=pathlib.Path,
        default=pathlib.Path(__file__).resolve().parent.parent / "specs",
        help="directory of spec documents (JSON)",
    )
    parser.add_argument(
        "--out",
        type=pathlib.Path,
        default=pathlib.Path("golden_out"),
        help="directory for CSV artifacts, one subdirectory per document",
    )
    parser.add_argument("--samples", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--stages",
        nargs="+",
        choices=STAGES,
        default=list(STAGES),
        help="subset of stages to run",
    )
    args = parser.parse_args()

    docs = sorted(args.specs.glob("*.json"))
    if not docs:
        print(f"no documents found under {args.specs}", file=sys.stderr)
        return 2

    failures = []
    for doc in docs:
        print(f"=== {doc.name} " + "=" * max(0, 58 - len(doc.name)))
        out_dir = args.out / doc.stem
        out_dir.mkdir(parents=True, exist_ok=True)
        for stage in args.stages:
            argv = [
                stage,
                str(doc),
                "--out",
                str(out_dir),
                "--samples",
                str(args.samples),
                "--seed",
                str(args.seed),
            ]
            t0 = time.perf_counter()
            code = run(argv)
            dt = time.perf_counter() - t0
            print(f"--- {stage}: exit {code} ({dt:.2f}s)")
            if code != 0:
                failures.append((doc.name, stage, code))
        print()

    print("=" * 70)
    if failures:
        for name, stage, code in failures:
            print(f"FAIL {name} {stage}: exit {code}")
        return 1
    print(f"all stages passed on {len(docs)} documents")
    return 0


if __name__ == "__main__":
    sys.exit(main())
