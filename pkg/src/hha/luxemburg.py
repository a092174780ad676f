"""Modulars and Luxemburg norms on sampled fields.

The norm solves modular(f/lambda) = 1 by geometric bisection on lambda.
On a finite grid the modular is continuous and strictly decreasing in
lambda wherever f != 0, so bracketing always succeeds; Newton is not worth
the loss of robustness.  Work is restricted to the support cells of f
(zero cells contribute zero for every lambda), which keeps ball-supported
norms cheap on large boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exponents import ExponentFn, conjugate
from .grid import Field, Grid, ball_indicator, gauge4_about, integrate
from .group import Ball

__all__ = [
    "NormResult", "modular", "luxemburg_norm", "holder_pairing",
    "dual_norm_estimate", "script_A",
]

DEFAULT_RTOL = 1e-10


@dataclass(frozen=True)
class NormResult:
    """Solved Luxemburg norm with solver diagnostics."""

    value: float
    iterations: int
    bracket: tuple
    residual: float

    def __float__(self) -> float:
        return self.value


def _gauge4_grid(grid: Grid) -> np.ndarray:
    X1, X2, T = grid.meshes()
    xsq = X1 * X1 + X2 * X2
    return np.broadcast_to(xsq * xsq + 16.0 * T * T, grid.shape)


def modular(f: Field, p: ExponentFn, lam: float) -> float:
    """Quadrature of |f(z)/lambda|^{p(z)} over the grid."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    pv = p.on_gauge4(_gauge4_grid(f.grid))
    with np.errstate(over="ignore"):
        integrand = np.abs(f.values / lam) ** pv
    return math.fsum(integrand.sum(axis=(1, 2)).tolist()) * f.grid.cellvol


def _masked_modular_factory(f: Field, p: ExponentFn):
    """Closure lam -> modular(f, p, lam) over the support cells only."""
    mask = f.values != 0.0
    vals = np.abs(f.values[mask])
    g4 = _gauge4_grid(f.grid)[mask]
    pv = p.on_gauge4(g4)
    logv = np.log(vals)
    w = f.grid.cellvol

    def mod(lam: float) -> float:
        with np.errstate(over="ignore"):
            out = float(np.sum(np.exp(pv * (logv - math.log(lam))))) * w
        return out

    return mod, vals


def luxemburg_norm(f: Field, p: ExponentFn, rtol: float = DEFAULT_RTOL,
                   max_iter: int = 200) -> NormResult:
    """inf{lambda > 0 : modular(f/lambda) <= 1} by geometric bisection.

    Starts from lambda0 = max|f| * vol^{1/p_minus} and doubles/halves into a
    bracket, then bisects in log(lambda) to relative tolerance `rtol`.
    """
    if not np.all(np.isfinite(f.values)):
        raise ValueError("field contains non-finite values")
    if not np.any(f.values):
        return NormResult(0.0, 0, (0.0, 0.0), 0.0)
    mod, vals = _masked_modular_factory(f, p)
    lam0 = float(np.max(vals)) * f.grid.box_volume ** (1.0 / p.p_minus)
    iters = 0
    if mod(lam0) <= 1.0:
        hi = lam0
        lo = lam0
        while mod(lo) <= 1.0:
            hi = lo
            lo /= 2.0
            iters += 1
            if iters > max_iter:
                raise RuntimeError("bracketing failed: modular never exceeds 1")
    else:
        lo = lam0
        hi = lam0
        while mod(hi) > 1.0:
            lo = hi
            hi *= 2.0
            iters += 1
            if iters > max_iter:
                raise RuntimeError("bracketing failed: modular does not fall below 1")
    while hi / lo - 1.0 > rtol and iters < max_iter:
        mid = math.sqrt(lo * hi)
        if mod(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        iters += 1
    value = math.sqrt(lo * hi)
    return NormResult(value, iters, (lo, hi), abs(mod(value) - 1.0))


def holder_pairing(f: Field, g: Field, p: ExponentFn) -> tuple[float, float]:
    """(lhs, rhs) of the duality pairing bound: int|fg| <= 2 ||f||_p ||g||_p'."""
    if not p.p_minus > 1:
        raise ValueError(f"holder_pairing requires p_minus > 1, got {p.p_minus}")
    if f.grid.shape != g.grid.shape:
        raise ValueError("fields must share one grid")
    lhs = integrate(f.with_values(np.abs(f.values * g.values)))
    rhs = 2.0 * luxemburg_norm(f, p).value * luxemburg_norm(g, conjugate(p)).value
    return lhs, rhs


def _random_bump_values(grid: Grid, rng: np.random.Generator) -> np.ndarray:
    """A C^2 bump with random center and width, sampled on the grid."""
    Lx, Lt = grid.spec.Lx, grid.spec.Lt
    cx = rng.uniform(-0.5 * Lx, 0.5 * Lx, 2)
    ct = rng.uniform(-0.5 * Lt, 0.5 * Lt)
    width = rng.uniform(0.3, 1.0) * min(Lx, 2.0 * math.sqrt(Lt))
    from .group import Point

    center = Point(cx, np.asarray(ct))
    X1, X2, T = grid.meshes()
    r4 = gauge4_about(center, X1, X2, T) / width ** 4
    prof = np.maximum(1.0 - np.sqrt(r4), 0.0) ** 3  # (1 - (rho/width)^2)_+^3
    return np.broadcast_to(prof, grid.shape).copy()


def dual_norm_estimate(f: Field, p: ExponentFn, trial_count: int = 32, seed: int = 0) -> float:
    """Lower estimate of the dual expression sup{int |fg| : ||g||_p' <= 1}.

    Trials are random bumps plus the canonical candidate g* = |f/||f|||^{p-1},
    whose modular in the conjugate exponent equals 1 exactly; each trial is
    rescaled to unit conjugate norm before pairing.
    """
    if not p.p_minus > 1:
        raise ValueError(f"dual_norm_estimate requires p_minus > 1, got {p.p_minus}")
    if trial_count < 1:
        raise ValueError("trial_count must be >= 1")
    if not np.any(f.values):
        return 0.0
    pc = conjugate(p)
    rng = np.random.default_rng(seed)
    nf = luxemburg_norm(f, p).value
    pv = p.on_gauge4(_gauge4_grid(f.grid))
    candidates = [np.abs(f.values / nf) ** (pv - 1.0)]
    for _ in range(trial_count):
        candidates.append(_random_bump_values(f.grid, rng))
    best = 0.0
    absf = np.abs(f.values)
    for gv in candidates:
        g = Field(f.grid, gv)
        ng = luxemburg_norm(g, pc).value
        if ng == 0.0:
            continue
        pairing = integrate(f.with_values(absf * gv)) / ng
        best = max(best, pairing)
    return best


def script_A(lambdas: Sequence[float], balls: Sequence[Ball], p: ExponentFn,
             grid: Grid, power: Optional[float] = None) -> float:
    """Norm of the weighted ball-characteristic sum

        || { sum_j (lambda_j chi_{B_j} / ||chi_{B_j}||_p)^pw }^{1/pw} ||_p,

    with pw = min(p_minus, 1) by default.  Measures the size of an atomic
    decomposition's coefficient/ball family.
    """
    lambdas = np.asarray(list(lambdas), dtype=float)
    balls = list(balls)
    if lambdas.size == 0:
        raise ValueError("empty coefficient sequence")
    if lambdas.size != len(balls):
        raise ValueError(f"{lambdas.size} coefficients vs {len(balls)} balls")
    if np.any(lambdas < 0):
        raise ValueError("coefficients must be nonnegative")
    pw = p.p_underline if power is None else float(power)
    if pw <= 0:
        raise ValueError("power must be positive")
    S = np.zeros(grid.shape)
    for lam, ball in zip(lambdas, balls):
        chi = ball_indicator(grid, ball, support_hint=False)
        nb = luxemburg_norm(chi, p).value
        if nb == 0.0:
            raise ValueError("ball is not resolved by the grid (empty discrete ball)")
        if lam > 0:
            S += (lam / nb) ** pw * chi.values
    T = Field(grid, S ** (1.0 / pw))
    return luxemburg_norm(T, p).value
