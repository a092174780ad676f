"""Exact (grid-free) Heisenberg group arithmetic and gauge geometry.

Points live in R^{2n} x R with the noncommutative law

    (x, t) . (y, s) = (x + y, t + s + x^T J y),      J = (1/2) [[0, -I], [I, 0]],

parabolic dilations r.(x, t) = (r x, r^2 t), and the gauge
rho(x, t) = (|x|^4 + 16 t^2)^(1/4).  All operations are pure and accept
batched coordinate arrays (leading axes broadcast).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "GroupContext", "Point", "MultiIndex", "Ball",
    "identity", "group_mul", "group_inv", "dilate", "koranyi_norm",
    "ball_contains", "ball_bounding_box", "multiindex_degrees", "monomial",
    "invariant_derivative", "multiindices_up_to",
]


@dataclass(frozen=True)
class GroupContext:
    """Dimension bookkeeping: 2n horizontal coordinates, homogeneous dimension Q = 2n + 2."""

    n: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")

    @property
    def Q(self) -> int:
        return 2 * self.n + 2

    @property
    def ncoords(self) -> int:
        return 2 * self.n + 1


@dataclass(frozen=True)
class Point:
    """A point (x, t), x of shape (..., 2n), t of shape (...)."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))

    @property
    def batch_shape(self) -> tuple:
        return np.broadcast_shapes(self.x.shape[:-1], self.t.shape)


def point(*coords: float) -> Point:
    """Build a scalar point from 2n+1 coordinates (x_1, ..., x_2n, t)."""
    if len(coords) < 3 or len(coords) % 2 == 0:
        raise ValueError("expected an odd number >= 3 of coordinates")
    return Point(np.array(coords[:-1], dtype=float), np.asarray(coords[-1], dtype=float))


def identity(ctx: GroupContext) -> Point:
    return Point(np.zeros(2 * ctx.n), np.asarray(0.0))


def _check_dim(ctx: GroupContext, *pts: Point) -> None:
    for z in pts:
        if z.x.shape[-1] != 2 * ctx.n:
            raise ValueError(
                f"point has {z.x.shape[-1]} horizontal coordinates, context expects {2 * ctx.n}"
            )


def symplectic_form(ctx: GroupContext, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """x^T J y = (1/2) sum_i (x_{n+i} y_i - x_i y_{n+i})."""
    n = ctx.n
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 0.5 * (
        np.sum(a[..., n:] * b[..., :n], axis=-1) - np.sum(a[..., :n] * b[..., n:], axis=-1)
    )


def group_mul(ctx: GroupContext, z: Point, w: Point) -> Point:
    _check_dim(ctx, z, w)
    return Point(z.x + w.x, z.t + w.t + symplectic_form(ctx, z.x, w.x))


def group_inv(z: Point) -> Point:
    return Point(-z.x, -z.t)


def dilate(r, z: Point) -> Point:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("dilation factor must be positive")
    return Point(r[..., None] * z.x if r.ndim else r * z.x, r * r * z.t)


def gauge4(z: Point) -> np.ndarray:
    """Fourth power of the gauge, |x|^4 + 16 t^2 (cheap, smooth everywhere)."""
    xsq = np.sum(z.x * z.x, axis=-1)
    return xsq * xsq + 16.0 * z.t * z.t


def koranyi_norm(z: Point) -> np.ndarray:
    return gauge4(z) ** 0.25


@dataclass(frozen=True)
class Ball:
    """Open gauge ball B(center, radius) = {w : rho(center^{-1} w) < radius}."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    def dilated(self, factor: float) -> "Ball":
        """Concentric ball with radius scaled by `factor` (same center)."""
        return Ball(self.center, factor * self.radius)


def ball_contains(ctx: GroupContext, b: Ball, z: Point) -> np.ndarray:
    """Strict membership rho(center^{-1} z) < radius; boundary points excluded."""
    return gauge4(group_mul(ctx, group_inv(b.center), z)) < b.radius ** 4


def ball_bounding_box(ctx: GroupContext, b: Ball) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Coordinate bounding box (x_lo, x_hi, t_lo, t_hi) of the ball.

    For w = c.u with rho(u) < d: |u_x| <= d, |u_t| <= d^2/4, and the group
    shear contributes at most |c_x| d / 2 to the t extent.
    """
    c = b.center
    d = b.radius
    cx = np.asarray(c.x, dtype=float)
    tpad = d * d / 4.0 + float(np.linalg.norm(cx)) * d / 2.0
    return cx - d, cx + d, float(c.t) - tpad, float(c.t) + tpad


# ----------------------------- multiindices --------------------------------

@dataclass(frozen=True)
class MultiIndex:
    """Multiindex over the 2n+1 coordinate directions (t-direction weighted twice)."""

    i: tuple

    def __post_init__(self) -> None:
        idx = tuple(int(k) for k in self.i)
        if any(k < 0 for k in idx):
            raise ValueError(f"multiindex entries must be nonnegative, got {idx}")
        object.__setattr__(self, "i", idx)

    def __len__(self) -> int:
        return len(self.i)


def _as_index_tuple(I) -> tuple:
    if isinstance(I, MultiIndex):
        return I.i
    return MultiIndex(tuple(I)).i


def multiindex_degrees(I) -> tuple[int, int]:
    """Return (length |I|, homogeneous degree d(I) = i_1 + ... + i_2n + 2 i_{2n+1})."""
    idx = _as_index_tuple(I)
    return sum(idx), sum(idx[:-1]) + 2 * idx[-1]


def monomial(I, z: Point) -> np.ndarray:
    """z^I = x_1^{i_1} ... x_2n^{i_2n} t^{i_{2n+1}}; homogeneous of degree d(I)."""
    idx = _as_index_tuple(I)
    if len(idx) != z.x.shape[-1] + 1:
        raise ValueError(f"multiindex length {len(idx)} does not match point dimension")
    out = np.ones(z.batch_shape)
    for k, p in enumerate(idx[:-1]):
        if p:
            out = out * z.x[..., k] ** p
    if idx[-1]:
        out = out * z.t ** idx[-1]
    return out


def multiindices_up_to(ctx: GroupContext, max_homdeg: int) -> list[tuple]:
    """All multiindices with d(I) <= max_homdeg, lexicographic order."""
    out = []
    nx = 2 * ctx.n

    def rec(prefix, budget, pos):
        if pos == nx:
            for it in range(budget // 2 + 1):
                out.append(prefix + (it,))
            return
        for k in range(budget + 1):
            rec(prefix + (k,), budget - k, pos + 1)

    rec((), max_homdeg, 0)
    return sorted(out)


# ------------------------- invariant derivatives ---------------------------

def _coordinate_step(ctx: GroupContext, j: int, h: np.ndarray) -> Point:
    """The point h*e_j (h in coordinate j, zero elsewhere)."""
    h = np.asarray(h, dtype=float)
    nx = 2 * ctx.n
    if j < nx:
        x = np.zeros(h.shape + (nx,))
        x[..., j] = h
        return Point(x, np.zeros_like(h))
    return Point(np.zeros(h.shape + (nx,)), h)


def invariant_derivative(
    ctx: GroupContext,
    f: Callable[[Point], np.ndarray],
    I,
    z: Point,
    side: str = "left",
    h: float | None = None,
) -> np.ndarray:
    """Left- or right-invariant derivative X^I f (resp. Xtilde^I f) at z.

    Nested second-order central differences along the one-parameter group
    flows, composed in coordinate order X_1^{i_1} ... X_{2n+1}^{i_{2n+1}}.
    Left flows translate on the right (z . h e_j), right flows on the left.
    Default step h = 1e-4 * max(1, rho(z)), fixed once from the base point.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    idx = _as_index_tuple(I)
    if len(idx) != ctx.ncoords:
        raise ValueError(f"multiindex length {len(idx)} does not match 2n+1 = {ctx.ncoords}")
    if h is None:
        h = 1e-4 * np.maximum(1.0, koranyi_norm(z))
    else:
        h = np.asarray(h, dtype=float)
        if np.any(h <= 0):
            raise ValueError("finite-difference step h must be positive")
    h = np.broadcast_to(np.asarray(h, dtype=float), z.batch_shape)

    def recurse(rem: tuple, at: Point) -> np.ndarray:
        for j, k in enumerate(rem):
            if k:
                rem2 = rem[:j] + (k - 1,) + rem[j + 1:]
                step = _coordinate_step(ctx, j, h)
                nstep = _coordinate_step(ctx, j, -h)
                if side == "left":
                    zp = group_mul(ctx, at, step)
                    zm = group_mul(ctx, at, nstep)
                else:
                    zp = group_mul(ctx, step, at)
                    zm = group_mul(ctx, nstep, at)
                return (recurse(rem2, zp) - recurse(rem2, zm)) / (2.0 * h)
        return np.asarray(f(at), dtype=float)

    return recurse(idx, z)
