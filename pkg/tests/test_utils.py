import math

import numpy as np

from harmap.schemas import DiskGrid
from harmap.utils import (
    circle_points,
    grid_extremum,
    halton_disk,
    polar_points,
    ratio_check,
    turning_number,
    winding_number,
)

GRID = DiskGrid()


def test_polar_points_shape_and_rim():
    pts = polar_points(0.5, GRID)
    assert pts.shape == (GRID.n_radial + 1, GRID.n_angular)
    assert np.all(pts[0] == 0)
    assert np.allclose(np.abs(pts[-1]), 0.5)


def test_grid_extremum_max_and_min():
    ext = grid_extremum(lambda z: -np.abs(z - 0.3) ** 2, 1.0, GRID)
    assert ext.value <= 0.0
    assert ext.value >= -((1.0 / GRID.n_radial) ** 2)
    assert abs(ext.point - 0.3) < 1.0 / GRID.n_radial

    low = grid_extremum(lambda z: np.abs(z) ** 2, 1.0, GRID, maximize=False)
    assert low.value == 0.0


def test_grid_extremum_ignores_nan():
    ext = grid_extremum(lambda z: np.where(np.abs(z) < 0.5, np.nan, np.abs(z)), 1.0, GRID)
    assert ext.value == 1.0 or math.isclose(ext.value, 1.0, rel_tol=1e-15)


def test_ratio_check_all_nan_passes():
    res = ratio_check(lambda z: np.full(z.shape, np.nan), 1.0, GRID)
    assert res.passed
    assert res.max_ratio == 0.0


def test_halton_disk_deterministic_and_inside():
    z1, extra = halton_disk(500, 0.7, seed=3, extra=2)
    z2, _ = halton_disk(500, 0.7, seed=3, extra=2)
    assert np.array_equal(z1, z2)
    assert np.all(np.abs(z1) <= 0.7)
    assert extra.shape == (500, 2)


def test_winding_number_circle():
    c = circle_points(1.0, 256)
    assert winding_number(c) == 1
    assert winding_number(c[::-1]) == -1
    assert winding_number(c, center=3.0) == 0
    assert winding_number(c**2) == 2


def test_turning_number_circle():
    assert turning_number(circle_points(0.5, 128)) == 1
