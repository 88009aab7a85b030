"""Ambiguous horizontal stripes of growing width in the Ledrappier system.

For each width the seed row and its complement give two configurations
whose rows below agree, so the stripe interior does not fix its boundary.
The table records the witness and the rule check on a window.
"""

from dataclasses import dataclass

import numpy as np

from _common import parse_config
from nivat.complexity import ScanRange
from nivat.configurations import Ledrappier, PeriodicWord, ledrappier_complement
from nivat.dynamics import ambiguity_witness, ledrappier_congruence
from nivat.render import atomic_write, rows_to_csv


@dataclass
class Config:
    max_width: int = 16
    seed_length: int = 257
    segment: int = 16
    seed: int = 0
    out: str = "results/ledrappier_widths.csv"


def run(cfg: Config) -> list:
    rng = np.random.default_rng(cfg.seed)
    led = Ledrappier(PeriodicWord(tuple(int(s) for s in rng.integers(0, 2, size=cfg.seed_length))))
    comp = ledrappier_complement(led)
    rows = []
    for width in range(1, cfg.max_width + 1):
        wit = ambiguity_witness((led, comp), (1, 0), width, cfg.segment, ScanRange((0, 0), 4, 1))
        win = led.window((0, -width - 4), cfg.segment + width, width + 5).values
        rows.append(
            {
                "width": width,
                "witness": wit is not None and wit.validate(),
                "interior_cells": len(wit.interior) if wit else 0,
                "congruence": ledrappier_congruence(win),
            }
        )
    atomic_write(cfg.out, rows_to_csv(rows))
    return rows


if __name__ == "__main__":
    for row in run(parse_config(Config, __doc__)):
        print(row)
