#!/usr/bin/env python3
"""Emit the coefficient-growth table n * max_g |lambda_n(g)| for a config.

The table is the empirical envelope behind every truncation bound in the
package; watching it flatten toward its supremum is the quickest sanity
check that a weight is comfortably inside the admissible set.

    python3 scripts/growth_table.py configs/b2.json --degree 40 --out growth.csv
"""
import argparse
import sys

from dunkl.config import build_bundle, load_config
from dunkl.operators import NotInMStarError


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("config")
    parser.add_argument("--degree", type=int, default=30)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    bundle = build_bundle(load_config(args.config))
    try:
        bundle.ctx.prepare(args.degree)
    except NotInMStarError as exc:
        print(f"weight is inadmissible: {exc}", file=sys.stderr)
        return 2
    lines = ["n,growth"]
    for n, row in bundle.ctx.delta_table:
        lines.append(f"{n},{row:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"# delta_hat = {bundle.ctx.delta_hat:.17g} over degrees 1..{args.degree} "
        f"(|G| = {bundle.group.order})",
        file=sys.stderr,
    )
    if bundle.ctx.fallback_degrees:
        print(
            f"# degrees realized by the matrix fallback (no coefficient table): "
            f"{sorted(set(bundle.ctx.fallback_degrees))}",
            file=sys.stderr,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
