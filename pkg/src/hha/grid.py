"""Uniform midpoint grids over symmetric boxes in H^1 and Haar quadrature.

The Haar measure is Lebesgue measure on R^3, so integration is a plain
midpoint-rule sum with cell volume hx^2 * ht.  Grids fix n = 1 (three
coordinates); the exact group arithmetic in :mod:`hha.group` stays generic.

Cell centers along an axis of half-width L and spacing h sit at
(m + 1/2) * h for integer m, so grids sharing a spacing share one lattice:
resampling between them is exact where boxes overlap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .group import Ball, GroupContext, Point, ball_bounding_box, symplectic_form

__all__ = [
    "GridSpec", "Grid", "Field", "build_grid", "sample", "integrate",
    "grid_for_ball", "ball_indicator", "gauge4_about", "save_field", "load_field",
    "UNIT_BALL_VOLUME",
]

CTX1 = GroupContext(1)

# Volume of the unit gauge ball in H^1: pi * int_0^1 r sqrt(1 - r^4) dr = pi^2 / 8.
UNIT_BALL_VOLUME = math.pi ** 2 / 8.0


@dataclass(frozen=True)
class GridSpec:
    """Symmetric box [-Lx,Lx]^2 x [-Lt,Lt] with requested spacings (hx, ht)."""

    Lx: float
    Lt: float
    hx: float
    ht: float

    def __post_init__(self) -> None:
        for name in ("Lx", "Lt", "hx", "ht"):
            if not getattr(self, name) > 0:
                raise ValueError(f"GridSpec.{name} must be positive")
        if self.hx > self.Lx or self.ht > self.Lt:
            raise ValueError("spacing must not exceed the box half-width")

    def to_dict(self) -> dict:
        return {"Lx": self.Lx, "Lt": self.Lt, "hx": self.hx, "ht": self.ht}


def _axis_centers(L: float, h: float) -> tuple[np.ndarray, float, int]:
    """Midpoint centers tiling [-L, L]; the spacing is adjusted to the nearest
    value that tiles the box with an integer cell count.

    Centers are computed as (k + 1/2) * h from integer k so grids sharing a
    spacing produce bit-equal lattice coordinates.
    """
    n = max(1, round(2.0 * L / h))
    ha = 2.0 * L / n
    centers = (np.arange(n) - n / 2.0 + 0.5) * ha
    return centers, ha, n


@dataclass(frozen=True)
class Grid:
    """Materialized grid: cell centers per axis and the cell volume."""

    spec: GridSpec
    xc: np.ndarray  # (nx,) centers shared by both x axes
    tc: np.ndarray  # (nt,)
    hx: float       # actual spacings after tiling adjustment
    ht: float

    @property
    def nx(self) -> int:
        return self.xc.size

    @property
    def nt(self) -> int:
        return self.tc.size

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.nx, self.nt)

    @property
    def ncells(self) -> int:
        return self.nx * self.nx * self.nt

    @property
    def cellvol(self) -> float:
        return self.hx * self.hx * self.ht

    @property
    def box_volume(self) -> float:
        return (2 * self.spec.Lx) ** 2 * (2 * self.spec.Lt)

    def meshes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable coordinate views (X1, X2, T)."""
        return (
            self.xc[:, None, None],
            self.xc[None, :, None],
            self.tc[None, None, :],
        )

    def cell_points_flat(self, mask: Optional[np.ndarray] = None) -> np.ndarray:
        """(m, 3) array of cell-center coordinates, optionally masked."""
        X1, X2, T = np.meshgrid(self.xc, self.xc, self.tc, indexing="ij")
        pts = np.stack([X1, X2, T], axis=-1)
        if mask is not None:
            return pts[mask]
        return pts.reshape(-1, 3)

    def decimated(self, stride: int) -> "Grid":
        """Odd-stride sub-grid; its centers coincide with parent cell centers."""
        if stride < 1 or stride % 2 == 0:
            raise ValueError("decimation stride must be a positive odd integer")
        if stride == 1:
            return self
        s = stride
        off = s // 2
        xc = self.xc[off::s]
        tc = self.tc[off::s]
        spec = GridSpec(self.spec.Lx, self.spec.Lt, self.hx * s, self.ht * s)
        return Grid(spec=spec, xc=xc, tc=tc, hx=self.hx * s, ht=self.ht * s)


def build_grid(spec: GridSpec) -> Grid:
    xc, hx, _ = _axis_centers(spec.Lx, spec.hx)
    tc, ht, _ = _axis_centers(spec.Lt, spec.ht)
    return Grid(spec=spec, xc=xc, tc=tc, hx=hx, ht=ht)


def grid_for_ball(ball: Ball, h: float, margin_cells: int = 2, ht: float | None = None) -> Grid:
    """Smallest symmetric box grid containing the ball with the given margin.

    The spacings are kept exactly as requested; the box half-widths are
    rounded up to whole cells so the midpoint lattice is h * (Z + 1/2).
    """
    ht = h if ht is None else ht
    xlo, xhi, tlo, thi = ball_bounding_box(CTX1, ball)
    Lx_needed = float(max(np.max(np.abs(xlo)), np.max(np.abs(xhi)))) + margin_cells * h
    Lt_needed = max(abs(tlo), abs(thi)) + margin_cells * ht
    nx_half = math.ceil(Lx_needed / h - 1e-12)
    nt_half = math.ceil(Lt_needed / ht - 1e-12)
    spec = GridSpec(Lx=nx_half * h, Lt=nt_half * ht, hx=h, ht=ht)
    return build_grid(spec)


@dataclass(frozen=True)
class Field:
    """A function sampled at cell centers; treat `values` as immutable."""

    grid: Grid
    values: np.ndarray
    support_hint: Optional[Ball] = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"field shape {v.shape} does not match grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", v)
        if self.support_hint is not None:
            _check_support_margin(self.grid, self.support_hint)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values, self.support_hint)


def _check_support_margin(grid: Grid, ball: Ball) -> None:
    xlo, xhi, tlo, thi = ball_bounding_box(CTX1, ball)
    if (
        np.max(np.abs(np.concatenate([xlo, xhi]))) > grid.spec.Lx - grid.hx
        or max(abs(tlo), abs(thi)) > grid.spec.Lt - grid.ht
    ):
        raise ValueError("declared support does not fit the box with a one-cell margin")


def sample(fn: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
           grid: Grid,
           support_hint: Optional[Ball] = None) -> Field:
    """Sample fn(X1, X2, T) at cell centers; fn must broadcast over arrays."""
    X1, X2, T = grid.meshes()
    vals = np.asarray(fn(X1, X2, T), dtype=float)
    vals = np.broadcast_to(vals, grid.shape).copy()
    if not np.all(np.isfinite(vals)):
        raise ValueError("sample produced non-finite values")
    return Field(grid, vals, support_hint)


def integrate(field: Field) -> float:
    """Midpoint-rule integral: deterministic lexicographic partial sums per
    x1-slab, combined with compensated (exact) top-level summation."""
    partials = field.values.sum(axis=(1, 2))
    return math.fsum(partials.tolist()) * field.grid.cellvol


def gauge4_about(center: Point, X1: np.ndarray, X2: np.ndarray, T: np.ndarray) -> np.ndarray:
    """rho(center^{-1} w)^4 evaluated on coordinate arrays."""
    c1 = float(center.x[0])
    c2 = float(center.x[1])
    ct = float(center.t)
    u1 = X1 - c1
    u2 = X2 - c2
    # (-c)^T J w = -(c^T J w) with c^T J w = (c2 w1 - c1 w2) / 2
    ut = T - ct - 0.5 * (c2 * X1 - c1 * X2)
    xsq = u1 * u1 + u2 * u2
    return xsq * xsq + 16.0 * ut * ut


def ball_indicator(grid: Grid, ball: Ball, support_hint: bool = True) -> Field:
    """Characteristic function of the discrete ball (cells whose centers lie in it)."""
    X1, X2, T = grid.meshes()
    inside = gauge4_about(ball.center, X1, X2, T) < ball.radius ** 4
    vals = np.where(inside, 1.0, 0.0)
    vals = np.broadcast_to(vals, grid.shape).copy()
    return Field(grid, vals, ball if support_hint else None)


# ------------------------------ field I/O ----------------------------------

def save_field(field: Field, basepath: str | Path) -> tuple[Path, Path]:
    """Write `<basepath>.f64` (raw little-endian float64) and `<basepath>.json`."""
    base = Path(basepath)
    binpath = base.with_suffix(".f64")
    metapath = base.with_suffix(".json")
    data = np.ascontiguousarray(field.values, dtype="<f8")
    binpath.write_bytes(data.tobytes())
    meta = {
        "spec": field.grid.spec.to_dict(),
        "shape": list(field.values.shape),
        "endianness": "little",
        "dtype": "float64",
    }
    if field.support_hint is not None:
        b = field.support_hint
        meta["support"] = {
            "center": [float(b.center.x[0]), float(b.center.x[1]), float(b.center.t)],
            "radius": b.radius,
        }
    metapath.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return binpath, metapath


def load_field(basepath: str | Path) -> Field:
    base = Path(basepath)
    meta = json.loads(base.with_suffix(".json").read_text())
    spec = GridSpec(**meta["spec"])
    grid = build_grid(spec)
    raw = np.frombuffer(base.with_suffix(".f64").read_bytes(), dtype="<f8")
    values = raw.reshape(tuple(meta["shape"])).astype(float)
    hint = None
    if "support" in meta:
        c = meta["support"]["center"]
        hint = Ball(Point(np.array(c[:2]), np.asarray(c[2])), meta["support"]["radius"])
    return Field(grid, values, hint)
