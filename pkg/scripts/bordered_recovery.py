"""How often recursive min-cut suggestions recover a generated modular system.

For each seed a clean block system is generated, then k outliers are
injected with the same seed. A run counts as recovered when some suggested
partition has at least as many blocks as the clean system's components and
no more than k outliers.

    python scripts/bordered_recovery.py --runs 50 --max-outliers 4
"""
from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from sdlab.lab import GeneratorSpec, assess_standard, generate_system
from sdlab.structure import connected_components, suggest_partitions


@dataclass
class RecoveryConfig:
    runs: int = 50
    max_outliers: int = 4
    min_block: int = 2
    max_block: int = 4
    max_blocks: int = 4
    seed: int = 1000


def one_run(cfg: RecoveryConfig, seed: int) -> tuple[int, bool, str]:
    rng = np.random.default_rng(cfg.seed + seed)
    count = int(rng.integers(2, cfg.max_blocks + 1))
    blocks = tuple((int(s), int(s), float(rng.choice([0.3, 0.5, 0.7])))
                   for s in rng.integers(cfg.min_block, cfg.max_block + 1, size=count))
    k = seed % (cfg.max_outliers + 1)
    clean = generate_system(GeneratorSpec(seed, blocks, 0))
    noisy = generate_system(GeneratorSpec(seed, blocks, k))
    want = len(connected_components(clean))
    ok = any(s.block_count >= want and s.outlier_count <= k for s in suggest_partitions(noisy))
    return k, ok, assess_standard(noisy).verdict


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--runs", type=int, default=RecoveryConfig.runs)
    p.add_argument("--max-outliers", type=int, default=RecoveryConfig.max_outliers)
    p.add_argument("--seed", type=int, default=RecoveryConfig.seed)
    a = p.parse_args()
    cfg = RecoveryConfig(runs=a.runs, max_outliers=a.max_outliers, seed=a.seed)

    start = time.perf_counter()
    by_k: dict[int, list[bool]] = {}
    verdicts: Counter[str] = Counter()
    for seed in range(cfg.runs):
        k, ok, verdict = one_run(cfg, seed)
        by_k.setdefault(k, []).append(ok)
        verdicts[verdict] += 1
    print(" k  recovered")
    for k in sorted(by_k):
        print(f"{k:>2}  {sum(by_k[k])}/{len(by_k[k])}")
    print("verdicts:", dict(sorted(verdicts.items())))
    print(f"elapsed {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
