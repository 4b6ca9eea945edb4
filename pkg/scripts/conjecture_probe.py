"""Probe: how far below the best order does T-Greedy fall in expectation?

Exhaustive over orders, so n <= 8. Prints the worst instances found.

    python scripts/conjecture_probe.py --count 300 --n-max 7
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, fields
from fractions import Fraction

from dbmatch.gen import RandomParams, gen_random
from dbmatch.permute import best_permutation_bruteforce, expected_weight_enumeration


@dataclass
class ProbeConfig:
    count: int = 300
    seed: int = 0
    n_max: int = 7
    t_max: int = 3
    d_max: int = 3
    edge_prob: float = 0.5
    unit_weights: int = 0
    show: int = 5


def conjectured_ratio(d: int) -> Fraction:
    return Fraction(d * d + d + 2, 2 * (d * d + d))


def run(cfg: ProbeConfig) -> list[tuple]:
    out = []
    for i in range(cfg.count):
        s = cfg.seed + i
        n = 2 + s % (cfg.n_max - 1)
        d = 2 + (s // 7) % (cfg.d_max - 1)
        params = RandomParams(n=n, t_count=1 + s % cfg.t_max, d=d, edge_prob=cfg.edge_prob,
                              weight_min=1 if cfg.unit_weights else 0, weight_max=1 if cfg.unit_weights else 10,
                              max_edges=14)
        inst = gen_random(params, s)
        best = best_permutation_bruteforce(inst).value
        if best == 0:
            continue
        tg = expected_weight_enumeration(inst, "tgreedy")
        a2 = expected_weight_enumeration(inst, "alg2")
        out.append((tg / best, a2 / best, s, n, d, inst.digest()))
    return out


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in fields(ProbeConfig):
        p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    cfg = ProbeConfig(**vars(p.parse_args(argv)))
    res = sorted(run(cfg))
    below = [r for r in res if r[0] < conjectured_ratio(r[4])]
    print(f"{len(res)} instances; {len(below)} below the conjectured ratio")
    print("tgreedy/opt  conjectured  alg2/opt  seed  n  d  digest")
    for tg, a2, s, n, d, dig in res[:cfg.show]:
        print(f"{float(tg):11.4f}  {float(conjectured_ratio(d)):11.4f}  {float(a2):8.4f}  {s:4d} {n:2d} {d:2d}  {dig[:12]}")
    assert all(tg >= a2 for tg, a2, *_ in res), "T-Greedy fell below the window filter"


if __name__ == "__main__":
    main()
