"""Exact LP/IP gaps on the tight family and on seeded random instances.

    python scripts/gap_experiment.py --count 200 --out results/gaps.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from dbmatch.exact import integrality_gap
from dbmatch.gen import RandomParams, gen_random, gen_tight_gap


@dataclass
class GapConfig:
    count: int = 200
    seed: int = 0
    n_max: int = 9
    t_count: int = 3
    d_max: int = 4
    edge_prob: float = 0.5
    max_edges: int = 16
    tight_d_max: int = 6
    out: str | None = None


def run(cfg: GapConfig) -> list[dict]:
    rows = []
    for d in range(1, cfg.tight_d_max + 1):
        rep = integrality_gap(gen_tight_gap(d))
        rows.append({"family": "tight", "d": d, "cyclic": True, "n": 2 * d - 1, "lp": rep.lp_opt,
                     "ip": rep.ip_opt, "gap": rep.gap, "bound": Fraction(2 * d - 1, d)})
    for i in range(cfg.count):
        d = 1 + i % cfg.d_max
        cyclic = (i // cfg.d_max) % 2 == 1
        n = 1 + (cfg.seed + i) % cfg.n_max
        inst = gen_random(RandomParams(n=n, t_count=cfg.t_count, d=d, cyclic=cyclic, edge_prob=cfg.edge_prob,
                                       max_edges=cfg.max_edges, b_s_max=2), cfg.seed + i)
        rep = integrality_gap(inst)
        bound = Fraction(2 * d - 1, d) if cyclic else Fraction(2 * d - 2, d) if d > 1 else Fraction(1)
        rows.append({"family": "random", "d": d, "cyclic": cyclic, "n": n, "lp": rep.lp_opt,
                     "ip": rep.ip_opt, "gap": rep.gap, "bound": bound})
    return rows


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in fields(GapConfig):
        p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default) if f.default is not None else str,
                       default=f.default)
    cfg = GapConfig(**vars(p.parse_args(argv)))
    rows = run(cfg)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    worst = {}
    for r in rows:
        if r["family"] == "random":
            key = (r["d"], r["cyclic"])
            worst[key] = max(worst.get(key, Fraction(1)), r["gap"])
    print(f"# config {asdict(cfg)}", file=sys.stderr)
    for (d, cyc), g in sorted(worst.items()):
        print(f"# d={d} cyclic={cyc}: worst random gap {g} ({float(g):.3f})", file=sys.stderr)


if __name__ == "__main__":
    main()
