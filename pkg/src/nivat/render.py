"""PGM, SVG and CSV output."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .configurations import Window
from .geometry import Shape, Vec


def atomic_write(path, data: bytes | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def gray_map(values: np.ndarray) -> dict:
    """Affine map ``gray = (symbol - offset) * scale`` that inverts exactly."""
    lo, hi = int(values.min()), int(values.max())
    span = hi - lo
    if span > 65535:
        raise ValueError("symbol range too wide for a 16-bit PGM")
    maxval = 255 if span <= 255 else 65535
    scale = maxval // span if span else 1
    return {"offset": lo, "scale": scale, "maxval": maxval}


def window_to_pgm(win: Window) -> tuple[bytes, dict]:
    """Binary P5 image, top row = largest y; plus the sidecar metadata."""
    vals = np.asarray(win.values, dtype=np.int64)
    g = gray_map(vals)
    img = ((vals - g["offset"]) * g["scale"]).T[::-1]
    dtype = ">u1" if g["maxval"] == 255 else ">u2"
    header = f"P5\n{win.width} {win.height}\n{g['maxval']}\n".encode()
    meta = dict(g, origin=list(win.origin), width=win.width, height=win.height)
    return header + img.astype(dtype).tobytes(), meta


def write_pgm(path, win: Window) -> dict:
    data, meta = window_to_pgm(win)
    atomic_write(path, data)
    atomic_write(str(path) + ".json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta


def read_pgm(path) -> Window:
    """Inverse of ``write_pgm`` using the sidecar map."""
    raw = Path(path).read_bytes()
    meta = json.loads(Path(str(path) + ".json").read_text())
    parts = raw.split(b"\n", 3)
    w, h = map(int, parts[1].split())
    maxval = int(parts[2])
    dtype = ">u1" if maxval < 256 else ">u2"
    img = np.frombuffer(parts[3], dtype=dtype).reshape(h, w)
    vals = img[::-1].T.astype(np.int64) // meta["scale"] + meta["offset"]
    return Window(Vec(*meta["origin"]), vals)


def window_to_csv(win: Window) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["x", "y", "value"])
    for i in range(win.width):
        for j in range(win.height):
            wr.writerow([win.origin.x + i, win.origin.y + j, int(win.values[i, j])])
    return buf.getvalue()


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if rows:
        wr = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)
    return buf.getvalue()


PALETTE = ["#d9d9d9", "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3"]


def shapes_svg(
    layers: Sequence[tuple[Shape, str]],
    labels: Optional[dict] = None,
    cell: int = 24,
) -> str:
    """Draw shapes as colored unit cells, y axis pointing up."""
    pts = [p for shape, _ in layers for p in shape.points]
    if labels:
        pts += list(labels)
    if not pts:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"/>\n'
    x0 = min(p[0] for p in pts)
    x1 = max(p[0] for p in pts)
    y0 = min(p[1] for p in pts)
    y1 = max(p[1] for p in pts)
    W, H = (x1 - x0 + 1) * cell, (y1 - y0 + 1) * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">']
    for shape, color in layers:
        for p in shape.sorted():
            sx, sy = (p.x - x0) * cell, (y1 - p.y) * cell
            out.append(f'<rect x="{sx}" y="{sy}" width="{cell}" height="{cell}" fill="{color}" stroke="#ffffff"/>')
    for p, text in sorted((labels or {}).items()):
        sx, sy = (p[0] - x0) * cell + cell // 2, (y1 - p[1]) * cell + cell // 2 + 4
        out.append(f'<text x="{sx}" y="{sy}" font-size="{cell // 2}" text-anchor="middle">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def shaving_svg(trace: Sequence[Shape]) -> str:
    """Cells labelled by the step in which they were shaved off (1-based)."""
    labels = {}
    for i in range(len(trace) - 1):
        for p in (trace[i] - trace[i + 1]).points:
            labels[p] = i + 1
    return shapes_svg([(trace[0], PALETTE[0])], labels)


def locus_svg(R: Shape, U: Shape) -> str:
    """R in white, U shaded."""
    return shapes_svg([(R, "#f0f0f0"), (U, "#9e9e9e")])
