"""R/U accounting for a three-component periodic sum.

The third component's period defines g = X^u - 1; the script writes the
summary, the R/U overlay and a PGM of the scanned window.
"""

from dataclasses import dataclass

import numpy as np

from _common import config_dict, parse_config, save_json
from nivat.generators import Sum2Params, random_periodic_sum
from nivat.dynamics import mn_over_2_harness
from nivat.poly import periodic_product_annihilator, vertex_locus_counts
from nivat.render import atomic_write, locus_svg, write_pgm


@dataclass
class Config:
    m: int = 8
    n: int = 8
    seed: int = 0
    max_period: int = 3
    out_dir: str = "results/mn_over_2"


def run(cfg: Config) -> dict:
    rng = np.random.default_rng(cfg.seed)
    while True:
        spec = random_periodic_sum(rng, 3, Sum2Params(max_period=cfg.max_period, axis_fraction=0.0), periodic_only=True)
        if spec.period_box() is not None:
            break
    g_periods = [spec.components[2].period]
    out = mn_over_2_harness(spec, cfg.m, cfg.n, g_periods)
    loc = vertex_locus_counts(periodic_product_annihilator(g_periods).support(), cfg.m, cfg.n)
    atomic_write(f"{cfg.out_dir}/locus.svg", locus_svg(loc.R_shape, loc.U_shape))
    write_pgm(f"{cfg.out_dir}/window.pgm", spec.window((0, 0), 3 * cfg.m, 3 * cfg.n))
    save_json(f"{cfg.out_dir}/summary.json", {"config": config_dict(cfg), "spec": spec.to_json(), "summary": out})
    return out


if __name__ == "__main__":
    out = run(parse_config(Config, __doc__))
    keys = ["g_pretty", "R", "U", "P_c_mn", "P_cprime_reduced", "reduced_area", "inequality_c_ge_cprime"]
    for k in keys:
        print(f"{k}: {out[k]}")
