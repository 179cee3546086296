#!/usr/bin/env python3
"""Time relaxed multiplication of two random 2-adic integers at increasing digit counts.

For each size, build a LazyProduct of two random constants, read all of its
digits, and record one CSV row with the wall time and the number of operand
digits the paving touched. Results are written incrementally, so a slow large
size does not lose the smaller ones.

Usage:
    uv run python benchmark/run_benchmark.py              # default sizes
    uv run python benchmark/run_benchmark.py 4096 16384   # custom sizes (digits)

A quasi-linear product keeps ``ratio`` = touches / (N log2 N) roughly flat.
"""
import csv
import math
import random
import sys
import time
from pathlib import Path

from padiclab.core import PrimeContext
from padiclab.relaxed import LazyConstant, LazyProduct

HERE = Path(__file__).resolve().parent
RESULTS = HERE / "results.csv"

DEFAULT_SIZES = [256, 512, 1024, 2048, 4096]

COLUMNS = ["digits", "seconds", "touches", "ratio"]


def run_one(digits: int, rng: random.Random) -> dict:
    ctx = PrimeContext(2)
    product = LazyProduct(
        LazyConstant(rng.randrange(2**digits), ctx), LazyConstant(rng.randrange(2**digits), ctx)
    )
    start = time.perf_counter()
    product.residue(digits)
    wall = time.perf_counter() - start
    return {
        "digits": digits,
        "seconds": round(wall, 4),
        "touches": product.touches,
        "ratio": round(product.touches / (digits * math.log2(digits)), 3),
    }


def main() -> None:
    sizes = [int(x) for x in sys.argv[1:]] or DEFAULT_SIZES
    rng = random.Random(1)
    with RESULTS.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        writer.writeheader()
        for n in sizes:
            print(f"[benchmark] digits = {n} ...", flush=True)
            row = run_one(n, rng)
            writer.writerow(row)
            fh.flush()
            print(f"           {row}", flush=True)
    print(f"[benchmark] results -> {RESULTS}")


if __name__ == "__main__":
    main()
