"""Loiter-circle center layouts over a rectangular area.

Square packing tiles the area with squares of side sqrt(2)*r inscribed in the
loiter circles; hexagon packing tiles it with pointy-top hexagons of side r.
Rows are marched until the polygon footprints span each extent, appending one
fractionally-outside circle per direction when the last full footprint falls
short. Coverage validators sample the area on a uniform grid and delegate the
inner loops to :mod:`loiterpack.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import BOUNDARY_TOL, SQRT2, SQRT3, AreaSpec, PackingKind, Vec2

# A new circle is appended while the footprint span falls short of the extent
# by more than this (meters); exact-fit layouts do not gain a spurious circle.
SPAN_TOL = 1e-9


@dataclass(frozen=True)
class PackingLayout:
    """Ordered loiter-circle centers, grouped by row."""

    kind: PackingKind
    loiter_radius: float
    rows: tuple[tuple[Vec2, ...], ...]
    area: AreaSpec

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def per_row_counts(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.rows)

    @property
    def centers(self) -> tuple[Vec2, ...]:
        return tuple(c for row in self.rows for c in row)

    @property
    def count(self) -> int:
        return sum(len(row) for row in self.rows)

    def center_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        cs = self.centers
        return (
            np.array([c.x for c in cs], dtype=np.float64),
            np.array([c.y for c in cs], dtype=np.float64),
        )


def _march(first: float, pitch: float, extent: float, half_span: float) -> list[float]:
    """Center coordinates along one axis, appended until the span is reached."""
    xs = [first]
    while xs[-1] + half_span < extent - SPAN_TOL:
        xs.append(xs[-1] + pitch)
    return xs


def _march_count(first: float, pitch: float, extent: float, half_span: float) -> int:
    n = 1
    last = first
    while last + half_span < extent - SPAN_TOL:
        last += pitch
        n += 1
    return n


def _row_specs(r_l: float, kind: PackingKind) -> tuple[list[tuple[float, float]], float, float, float]:
    """Per-template (first_x, half_span) plus x-pitch, first row y and y half-span."""
    if kind is PackingKind.HEXAGON:
        x_pitch = SQRT3 * r_l
        # Alternating templates: odd rows start half a hexagon in, even rows
        # start on the x=0 boundary. Vertical footprint reaches one vertex
        # height (r_l) above each row.
        return [(0.5 * x_pitch, 0.5 * x_pitch), (0.0, 0.5 * x_pitch)], x_pitch, 0.5 * r_l, r_l
    x_pitch = SQRT2 * r_l
    half = r_l / SQRT2
    return [(half, half)], x_pitch, half, half


def pack(area: AreaSpec, r_l: float, kind: PackingKind) -> PackingLayout:
    """Generate the loiter-circle layout for ``area`` at radius ``r_l``.

    Hexagon rows alternate between a half-pitch-offset template and a
    boundary-anchored template with vertical pitch 1.5*r_l; square rows all
    share one template with pitch sqrt(2)*r_l in both directions.
    """
    if not r_l > 0:
        raise ValueError(f"loiter radius must be positive, got {r_l}")
    templates, x_pitch, y_first, y_half = _row_specs(r_l, kind)
    y_pitch = 1.5 * r_l if kind is PackingKind.HEXAGON else SQRT2 * r_l
    ys = _march(y_first, y_pitch, area.y_extent, y_half)
    rows = []
    for i, y in enumerate(ys):
        first_x, half_span = templates[i % len(templates)]
        xs = _march(first_x, x_pitch, area.x_extent, half_span)
        rows.append(tuple(Vec2(x, y) for x in xs))
    return PackingLayout(kind=kind, loiter_radius=r_l, rows=tuple(rows), area=area)


def uav_count(area: AreaSpec, r_l: float, kind: PackingKind) -> int:
    """Number of circles ``pack`` would place, without materializing them."""
    if not r_l > 0:
        raise ValueError(f"loiter radius must be positive, got {r_l}")
    templates, x_pitch, y_first, y_half = _row_specs(r_l, kind)
    y_pitch = 1.5 * r_l if kind is PackingKind.HEXAGON else SQRT2 * r_l
    n_rows = _march_count(y_first, y_pitch, area.y_extent, y_half)
    per_template = [_march_count(fx, x_pitch, area.x_extent, hs) for fx, hs in templates]
    if len(per_template) == 1:
        return n_rows * per_template[0]
    odd_rows = (n_rows + 1) // 2
    even_rows = n_rows // 2
    return odd_rows * per_template[0] + even_rows * per_template[1]


def grid_points(area: AreaSpec, grid_pitch: float) -> tuple[np.ndarray, np.ndarray]:
    """Cell-centered sample grid over the area at roughly the requested pitch."""
    if not grid_pitch > 0:
        raise ValueError(f"grid pitch must be positive, got {grid_pitch}")
    nx = max(1, round(area.x_extent / grid_pitch))
    ny = max(1, round(area.y_extent / grid_pitch))
    xs = (np.arange(nx) + 0.5) * (area.x_extent / nx)
    ys = (np.arange(ny) + 0.5) * (area.y_extent / ny)
    gx, gy = np.meshgrid(xs, ys)
    return gx.ravel(), gy.ravel()


def validate_full_coverage(layout: PackingLayout, r_c: float, grid_pitch: float) -> float:
    """Fraction of grid points covered at least once per loiter cycle."""
    if not r_c > 0:
        raise ValueError(f"coverage radius must be positive, got {r_c}")
    px, py = grid_points(layout.area, grid_pitch)
    if layout.count == 0:
        return 0.0
    cx, cy = layout.center_arrays()
    covered = kernels.cycle_cover_count(px, py, cx, cy, layout.loiter_radius, r_c, BOUNDARY_TOL)
    return covered / px.size


def validate_persistent_coverage(
    layout: PackingLayout, r_c: float, grid_pitch: float, phase_samples: int
) -> float:
    """Minimum instant-coverage fraction over a sweep of common loiter phases.

    All UAVs share the same phase (synchronized CCW loitering); the result is
    the worst instant fraction across ``phase_samples`` evenly spaced phases.
    """
    if not r_c > 0:
        raise ValueError(f"coverage radius must be positive, got {r_c}")
    if phase_samples < 8:
        raise ValueError(f"phase_samples must be >= 8, got {phase_samples}")
    px, py = grid_points(layout.area, grid_pitch)
    if layout.count == 0:
        return 0.0
    cx, cy = layout.center_arrays()
    phases = np.arange(phase_samples) * (2.0 * math.pi / phase_samples)
    return kernels.min_instant_fraction(
        px, py, cx, cy, layout.loiter_radius, r_c, phases, BOUNDARY_TOL
    )
