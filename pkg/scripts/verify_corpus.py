"""Run the transfer on a reproducible corpus and tabulate every verdict.

    python3 scripts/verify_corpus.py --count 56 --cap 4
"""

import argparse
import sys
import time
from dataclasses import dataclass

from homotransfer.coalgebra import jacobi_check, morphism_check
from homotransfer.corpus import corpus
from homotransfer.transfer import (CORRECTED, RAW, decompose, embed_g, hodge, recursion_oracle,
                                   round_trip, transfer_f, transfer_mu)


@dataclass
class Config:
    seed: int = 2024
    count: int = 56
    max_dim: int = 6
    cap: int = 4
    jacobi_cap: int = 5


def verify_one(L, split, cfg: Config) -> dict:
    hd = hodge(L, split)
    row = {"dim": L.dim, "H": hd.H.dim}
    mu5 = transfer_mu(L, split, cfg.jacobi_cap, CORRECTED, hd)
    row["mu3"] = 3 in mu5.mu
    row["jacobi"] = bool(jacobi_check(mu5))
    for name, norm in (("printed", RAW), ("corrected", CORRECTED)):
        f = transfer_f(L, split, cfg.cap, norm, hd)
        g = embed_g(L, split, cfg.cap, norm, hd)
        row[f"f {name}"] = bool(morphism_check(f))
        row[f"g {name}"] = bool(morphism_check(g))
    mu_o, f_o = recursion_oracle(L, hd, cfg.cap)
    mu = transfer_mu(L, split, cfg.cap, CORRECTED, hd)
    row["oracle"] = mu.mu == mu_o.mu and transfer_f(L, split, cfg.cap, CORRECTED, hd, mu).f == f_o.f
    plain, plain_inv = decompose(L, split, cfg.cap, hd)
    row["f+g morphism"] = bool(morphism_check(plain))
    row["round trip"] = all(round_trip(plain, plain_inv).values())
    full, full_inv = decompose(L, split, cfg.cap, hd, complete=True)
    row["completed"] = bool(morphism_check(full)) and all(round_trip(full, full_inv).values())
    return row


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    cfg = Config(**vars(p.parse_args(argv)))
    t0 = time.perf_counter()
    rows = [verify_one(L, s, cfg) for L, s in corpus(cfg.seed, cfg.count, cfg.max_dim)]
    cols = list(rows[0])
    print(" ".join(f"{c:>13}" for c in ["#"] + cols))
    for i, r in enumerate(rows):
        print(" ".join(f"{v!s:>13}" for v in [i] + [r[c] for c in cols]))
    print()
    for c in cols[2:]:
        print(f"{c:>13}: {sum(bool(r[c]) for r in rows)}/{len(rows)}")
    print(f"{time.perf_counter() - t0:.1f}s")
    must = ("jacobi", "f corrected", "g corrected", "oracle", "round trip", "completed")
    return 0 if all(r[c] for r in rows for c in must) else 1


if __name__ == "__main__":
    sys.exit(main())
