"""Rectangle complexities of s[x] + s[y] for the Fibonacci word s.

Counts are taken on a finite window and can only under-count, so every
row with count >= mn + 1 is a sound observation.
"""

from dataclasses import dataclass

from _common import parse_config
from nivat.complexity import ScanRange
from nivat.configurations import fibonacci_cross_sum
from nivat.dynamics import corollary_check
from nivat.render import atomic_write, rows_to_csv


@dataclass
class Config:
    max_m: int = 6
    max_n: int = 6
    window: int = 200
    out: str = "results/fibonacci_corollary.csv"


def run(cfg: Config) -> dict:
    spec = fibonacci_cross_sum(2 * cfg.window + max(cfg.max_m, cfg.max_n))
    out = corollary_check(spec, cfg.max_m, cfg.max_n, ScanRange((0, 0), cfg.window, cfg.window))
    atomic_write(cfg.out, rows_to_csv(out["rows"]))
    return out


if __name__ == "__main__":
    out = run(parse_config(Config, __doc__))
    print(f"all P(m,n) >= mn + 1: {out['all_ok']}")
