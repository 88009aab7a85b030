"""Shave an m x n block alternately in directions u and -u and draw the order.

Each cell of the SVG is labelled with the step that removed it.  The balanced
set found along the way is written next to it.
"""

from dataclasses import dataclass

from _common import config_dict, parse_config, save_json
from nivat.balanced import construct_balanced
from nivat.configurations import Constant
from nivat.geometry import Vec
from nivat.render import atomic_write, shaving_svg


@dataclass
class Config:
    m: int = 5
    n: int = 5
    ux: int = 2
    uy: int = 1
    out_dir: str = "results/shaving"


def run(cfg: Config):
    cert = construct_balanced(Constant(0), cfg.m, cfg.n, Vec(cfg.ux, cfg.uy))
    atomic_write(f"{cfg.out_dir}/shaving.svg", shaving_svg(list(cert.trace)))
    save_json(f"{cfg.out_dir}/certificate.json", {"config": config_dict(cfg), "certificate": cert.to_json()})
    return cert


if __name__ == "__main__":
    cert = run(parse_config(Config, __doc__))
    print(f"{len(cert.trace) - 1} shaving steps; balanced set {cert.shape.sorted()} at index {cert.index}")
