"""Shared plumbing for the experiment scripts: dataclass config -> argparse."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, fields
from pathlib import Path

from nivat.render import atomic_write


def parse_config(cls, description: str):
    """Expose every dataclass field as ``--field-name`` with its default."""
    p = argparse.ArgumentParser(description=description)
    for f in fields(cls):
        flag = "--" + f.name.replace("_", "-")
        p.add_argument(flag, type=type(f.default), default=f.default, help=f"default: {f.default}")
    return cls(**vars(p.parse_args()))


def save_json(path, obj) -> Path:
    path = Path(path)
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def config_dict(cfg) -> dict:
    return asdict(cfg)
