#!/usr/bin/env python3
"""Build the tiling sentence for a tile file and search for a small model."""

import argparse

from hyperlogic.constructions import gen_tiling, tiling_conjuncts
from hyperlogic.formats import parse_tiles
from hyperlogic.hyperltl import SearchBudget, sat_enum

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("tiles")
ap.add_argument("--budget", nargs=3, type=int, default=[4, 4, 2], metavar=("K", "S", "L"))
args = ap.parse_args()

ts = parse_tiles(open(args.tiles, encoding="utf-8").read())
for i, c in enumerate(tiling_conjuncts(ts), 1):
    print(f"conjunct {i}: {c}")
res = sat_enum(gen_tiling(ts), SearchBudget(*args.budget))
print(f"search: {res.status} after {res.examined} candidate sets")
if res.found:
    for t in res.model:
        print("  ", t)
