import os

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nivat.configurations import Window
from nivat.geometry import Shape, Vec
from nivat.render import (
    atomic_write,
    gray_map,
    locus_svg,
    read_pgm,
    rows_to_csv,
    shapes_svg,
    shaving_svg,
    window_to_csv,
    write_pgm,
)


@given(
    arrays(np.int64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=st.integers(-300, 300)),
    st.integers(-5, 5),
    st.integers(-5, 5),
)
@settings(max_examples=40, deadline=None)
def test_pgm_roundtrip(tmp_path_factory, values, ox, oy):
    path = tmp_path_factory.mktemp("pgm") / "w.pgm"
    win = Window(Vec(ox, oy), values)
    meta = write_pgm(path, win)
    back = read_pgm(path)
    assert back == win
    assert meta["maxval"] in (255, 65535)


def test_gray_map_is_affine_and_in_range():
    vals = np.array([[2, 5], [9, 2]])
    g = gray_map(vals)
    gray = (vals - g["offset"]) * g["scale"]
    assert gray.min() == 0 and gray.max() <= g["maxval"]


def test_pgm_header_and_orientation(tmp_path):
    win = Window(Vec(0, 0), np.array([[0, 1], [0, 0]]))  # value 1 at (0, 1)
    write_pgm(tmp_path / "a.pgm", win)
    raw = (tmp_path / "a.pgm").read_bytes()
    assert raw.startswith(b"P5\n2 2\n255\n")
    pixels = raw[len(b"P5\n2 2\n255\n"):]
    # first image row is the top (largest y); (0, 1) is its first pixel
    assert pixels[0] == 255 and set(pixels[1:]) == {0}


def test_csv_outputs():
    win = Window(Vec(1, 2), np.array([[3, 4, 5]]))
    lines = window_to_csv(win).splitlines()
    assert lines == ["x,y,value", "1,2,3", "1,3,4", "1,4,5"]
    assert rows_to_csv([{"m": 1, "n": 2}]).splitlines() == ["m,n", "1,2"]
    assert rows_to_csv([]) == ""


def test_svgs():
    svg = shapes_svg([(Shape.rect(2, 3), "#000000")])
    assert svg.count("<rect") == 6
    trace = [Shape.rect(2, 2), Shape([(0, 0), (1, 0)]), Shape()]
    s = shaving_svg(trace)
    assert s.count("<text") == 4 and ">1</text>" in s and ">2</text>" in s
    assert locus_svg(Shape([(0, 0)]), Shape([(1, 0)])).count("<rect") == 2
    assert "width=\"0\"" in shapes_svg([])


def test_atomic_write_leaves_only_target(tmp_path):
    atomic_write(tmp_path / "sub" / "f.txt", "hello")
    assert os.listdir(tmp_path / "sub") == ["f.txt"]
    assert (tmp_path / "sub" / "f.txt").read_text() == "hello"
