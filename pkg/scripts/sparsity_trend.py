"""Sparsity of standard matrices as the system grows, for several block sizes.

    python scripts/sparsity_trend.py --sizes 4 8 16 32 64 --block-sizes 1 2 4
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from sdlab.lab import sparsity_trend


@dataclass
class TrendConfig:
    sizes: list[int] = field(default_factory=lambda: [4, 8, 16, 32, 64])
    block_sizes: list[int] = field(default_factory=lambda: [1, 2, 4])


def run(cfg: TrendConfig) -> dict[int, list[tuple[int, Fraction]]]:
    return {b: sparsity_trend([m for m in cfg.sizes if m >= b], b) for b in cfg.block_sizes}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=TrendConfig().sizes)
    p.add_argument("--block-sizes", type=int, nargs="+", default=TrendConfig().block_sizes)
    args = p.parse_args()
    cfg = TrendConfig(sorted(set(args.sizes)), args.block_sizes)
    print("block  size  sparsity")
    for b, points in run(cfg).items():
        for m, s in points:
            print(f"{b:>5}  {m:>4}  {str(s):>8}  ({float(s):.4f})")


if __name__ == "__main__":
    main()
