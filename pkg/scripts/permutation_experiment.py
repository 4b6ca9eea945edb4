"""Randomized, derandomized and T-Greedy orders against the optimal order.

    python scripts/permutation_experiment.py --count 50 --n 7
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields

from dbmatch.core import weight
from dbmatch.gen import RandomParams, gen_random
from dbmatch.permute import (
    derandomized_permutation, expected_weight_enumeration, optimal_permutation_distance_matching, relaxation,
)


@dataclass
class PermConfig:
    count: int = 50
    seed: int = 0
    n: int = 7
    t_count: int = 3
    d: int = 2
    cyclic: bool = False
    edge_prob: float = 0.5


def run(cfg: PermConfig) -> list[dict]:
    rows = []
    alg = "alg1" if cfg.cyclic else "alg2"
    for i in range(cfg.count):
        inst = gen_random(RandomParams(n=cfg.n, t_count=cfg.t_count, d=cfg.d, cyclic=cfg.cyclic,
                                       edge_prob=cfg.edge_prob), cfg.seed + i)
        opt = optimal_permutation_distance_matching(inst).value
        if opt == 0:
            continue
        der = derandomized_permutation(inst)
        row = {"seed": cfg.seed + i, "opt": opt, "relax": weight(inst, relaxation(inst)),
               "expect": expected_weight_enumeration(inst, alg), "derand": der.value, "bound": der.bound}
        if not cfg.cyclic:
            row["tgreedy"] = expected_weight_enumeration(inst, "tgreedy")
        rows.append(row)
    return rows


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in fields(PermConfig):
        if f.type == "bool":
            p.add_argument("--" + f.name, action="store_true")
        else:
            p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    cfg = PermConfig(**vars(p.parse_args(argv)))
    rows = run(cfg)
    if not rows:
        print("no instance with positive optimum", file=sys.stderr)
        return
    keys = [k for k in rows[0] if k not in ("seed", "opt", "bound")]
    print("seed," + ",".join(f"{k}/opt" for k in keys))
    for r in rows:
        print(f"{r['seed']}," + ",".join(f"{float(r[k] / r['opt']):.4f}" for k in keys))
    for k in keys:
        vals = [r[k] / r["opt"] for r in rows]
        print(f"# {k}/opt: min {float(min(vals)):.4f} mean {float(sum(vals) / len(vals)):.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
