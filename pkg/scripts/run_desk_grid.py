"""Desk-scale reproduction grid: linear codebooks at E = 0.345156, n = 2..4.

Drives the CLI pipeline (codes -> train -> bench -> report) for each n, then
leaves figure-ready CSVs under <out>/figures/.  Runs in a few minutes with
the default ensemble (20 codebooks x 10 restarts); pass --fast to shrink it.
"""

import argparse
import sys

from jdrlab.cli import main as cli_main

ENERGY = 0.345156


def run(args: list[str]) -> None:
    code = cli_main(args)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="out")
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--fast", action="store_true",
                        help="4 codebooks x 3 restarts instead of 20 x 10")
    args = parser.parse_args()
    codebooks, restarts = (4, 3) if args.fast else (20, 10)

    for n in (2, 3, 4):
        name = f"linear_n{n}"
        common = ["--name", name, "--n", str(n), "--energy", str(ENERGY),
                  "--code", "linear", "--codebooks", str(codebooks),
                  "--restarts", str(restarts), "--seed", str(args.seed),
                  "--out", args.out]
        run(["codes", *common])
        run(["train", *common])
        run(["bench", *common])
    # report aggregates every experiment under --out; fig5/fig7 use the last
    run(["report", "--name", "linear_n4", "--n", "4", "--energy", str(ENERGY),
         "--code", "linear", "--codebooks", str(codebooks),
         "--restarts", str(restarts), "--seed", str(args.seed),
         "--out", args.out])


if __name__ == "__main__":
    main()
