"""Measured norms of the transferred brackets against the closed-form estimates.

Each DGLA of the corpus is moved to its adapted frame (H and F spanned by
basis vectors) and given a Banach model with random weights.

    python3 scripts/bounds_table.py --count 20 --eps 1/2
"""

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from homotransfer import bounds as B
from homotransfer.corpus import corpus
from homotransfer.graded import fmt


@dataclass
class Config:
    seed: int = 5
    count: int = 20
    max_dim: int = 6
    cap: int = 4
    eps: Fraction = Fraction(1, 2)
    gamma_terms: int = 8


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--max-dim", type=int, default=Config.max_dim)
    p.add_argument("--cap", type=int, default=Config.cap)
    p.add_argument("--eps", type=Fraction, default=Config.eps)
    p.add_argument("--gamma-terms", type=int, default=Config.gamma_terms)
    cfg = Config(**vars(p.parse_args(argv)))
    rng = random.Random(cfg.seed)
    ok = True
    print(f"{'#':>3} {'n':>2} {'|mu|^1':>12} {'bound1':>12} {'|mu|^0':>12} {'bound0':>12}  c, k, kappa")
    for i, (L, split) in enumerate(corpus(cfg.seed, cfg.count, cfg.max_dim)):
        La, sa = B.adapted(L, split)
        w = [Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(La.dim)]
        table = B.measure_mu_bounds(La, sa, B.NormModel.banach(La.space, w), cfg.cap, cfg.eps)
        ok &= table.ok
        consts = f"{fmt(table.c)}, {fmt(table.k)}, {fmt(table.kappa)}"
        for r in table.rows:
            flag = "" if r.ok else "  VIOLATED"
            print(f"{i:>3} {r.n:>2} {fmt(r.measured1):>12} {fmt(r.bound1):>12} "
                  f"{fmt(r.measured0):>12} {fmt(r.bound0):>12}  {consts}{flag}")
    maj = B.gamma(max(cfg.gamma_terms, 20))
    print()
    print("gamma:", ", ".join(fmt(maj[q]) for q in range(cfg.gamma_terms + 1)))
    conv = maj.convolution_ok(cfg.gamma_terms, cfg.gamma_terms)
    lo, hi = B.e_enclosure()
    print(f"positive to 20: {maj.positive()}, convolution to {cfg.gamma_terms}: {conv}")
    print(f"e in [{float(lo):.15f}, {float(hi):.15f}], Stirling factor <= (2e)^(n-1) "
          f"for n <= 30: {B.stirling_check(30)}")
    return 0 if ok and conv else 1


if __name__ == "__main__":
    sys.exit(main())
