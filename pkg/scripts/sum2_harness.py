"""Randomized two-component periodic sums against the low-complexity prediction.

Writes a JSON summary and a per-trial CSV to ``--out-dir``.
"""

from dataclasses import dataclass

from _common import config_dict, parse_config, save_json
from nivat.complexity import ScanRange
from nivat.dynamics import nivat_sum2_harness
from nivat.generators import Sum2Params
from nivat.render import atomic_write, rows_to_csv


@dataclass
class Config:
    trials: int = 100
    m: int = 6
    n: int = 6
    seed: int = 0
    max_period: int = 6
    alphabet: int = 4
    max_norm: int = 36
    window: int = 120
    workers: int = 1
    out_dir: str = "results/sum2"


def run(cfg: Config) -> dict:
    half = cfg.window // 2
    out = nivat_sum2_harness(
        cfg.trials,
        cfg.m,
        cfg.n,
        cfg.seed,
        Sum2Params(max_period=cfg.max_period, alphabet=cfg.alphabet),
        ScanRange((-half, -half), cfg.window, cfg.window),
        cfg.max_norm,
        cfg.workers,
    )
    save_json(f"{cfg.out_dir}/summary.json", {"config": config_dict(cfg), "counts": out["counts"], "violations": out["violations"]})
    rows = [
        {"trial": r["index"], "outcome": r["outcome"], "low_pairs": len(r["low_pairs"]), "period": r["period"]}
        for r in out["results"]
    ]
    atomic_write(f"{cfg.out_dir}/trials.csv", rows_to_csv(rows))
    return out


if __name__ == "__main__":
    result = run(parse_config(Config, __doc__))
    print(result["counts"])
