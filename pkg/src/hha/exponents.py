"""Variable exponent functions p(.) with declared bounds and log-regularity diagnostics.

Three concrete builder families (constant, log_decay, gaussian_bump) cover
the cases a verification sweep needs: constant, varying only at infinity,
and varying locally.  All families are radial in the gauge, so an exponent
evaluates through a profile rho -> p; derived exponents (conjugate, Sobolev,
scalar division) wrap the base profile pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .group import GroupContext, Point, dilate, group_inv, group_mul, koranyi_norm

__all__ = [
    "ExponentFn", "make_exponent", "conjugate", "sobolev_exponent",
    "scale_exponent", "dpdot", "log_holder_estimate", "default_pair_sampler",
]


@dataclass(frozen=True)
class ExponentFn:
    """An exponent p(.) with declared essential bounds and limit at infinity.

    `profile` maps gauge values rho >= 0 to p; everything downstream
    evaluates exponents through it.
    """

    kind: str
    params: dict
    p_minus: float
    p_plus: float
    p_inf: float
    profile: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def __post_init__(self) -> None:
        if not (0 < self.p_minus <= self.p_plus < np.inf):
            raise ValueError(
                f"exponent bounds must satisfy 0 < p_minus <= p_plus < inf, "
                f"got [{self.p_minus}, {self.p_plus}]"
            )

    @property
    def p_underline(self) -> float:
        return min(self.p_minus, 1.0)

    def at_rho(self, rho) -> np.ndarray:
        return np.asarray(self.profile(np.asarray(rho, dtype=float)), dtype=float)

    def __call__(self, z: Point) -> np.ndarray:
        return self.at_rho(koranyi_norm(z))

    def on_gauge4(self, g4: np.ndarray) -> np.ndarray:
        """Evaluate on precomputed rho^4 arrays (grid fast path)."""
        return self.at_rho(np.asarray(g4, dtype=float) ** 0.25)

    def is_constant(self) -> bool:
        return self.p_minus == self.p_plus

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


def make_exponent(kind: str, **params) -> ExponentFn:
    """Build one of the three concrete exponent families.

    constant(p0); log_decay(p_inf, A): p = p_inf + A/log(e + rho);
    gaussian_bump(a, b, s): p = a + b*exp(-rho^2/s^2).
    """
    if kind == "constant":
        p0 = float(params["p0"])
        if p0 <= 0:
            raise ValueError("constant exponent requires p0 > 0")
        return ExponentFn(kind, {"p0": p0}, p0, p0, p0,
                          lambda r, p0=p0: np.full_like(np.asarray(r, dtype=float), p0))
    if kind == "log_decay":
        p_inf = float(params["p_inf"])
        A = float(params["A"])
        if p_inf <= 0 or A < 0:
            raise ValueError("log_decay requires p_inf > 0 and A >= 0")
        prof = lambda r, p=p_inf, A=A: p + A / np.log(np.e + np.asarray(r, dtype=float))
        return ExponentFn(kind, {"p_inf": p_inf, "A": A}, p_inf, p_inf + A, p_inf, prof)
    if kind == "gaussian_bump":
        a = float(params["a"])
        b = float(params["b"])
        s = float(params["s"])
        if a <= 0 or a + b <= 0 or s <= 0:
            raise ValueError("gaussian_bump requires a > 0, a + b > 0, s > 0")
        prof = lambda r, a=a, b=b, s=s: a + b * np.exp(-(np.asarray(r, dtype=float) / s) ** 2)
        lo, hi = (a, a + b) if b >= 0 else (a + b, a)
        return ExponentFn(kind, {"a": a, "b": b, "s": s}, lo, hi, a, prof)
    raise ValueError(f"unknown exponent kind {kind!r}")


def exponent_from_dict(d: dict) -> ExponentFn:
    return make_exponent(d["kind"], **d["params"])


def _derived(base: ExponentFn, tag: str, fn: Callable[[np.ndarray], np.ndarray],
             p_minus: float, p_plus: float, p_inf: float) -> ExponentFn:
    prof = lambda r, b=base.profile, f=fn: f(np.asarray(b(np.asarray(r, dtype=float)), dtype=float))
    return ExponentFn("pointwise_derived", {"derived": tag, "base": base.to_dict()},
                      p_minus, p_plus, p_inf, prof)


def conjugate(p: ExponentFn) -> ExponentFn:
    """Pointwise conjugate p' = p/(p-1); bounds swap: (p')_+ = (p_-)'."""
    if not p.p_minus > 1:
        raise ValueError(f"conjugate requires p_minus > 1, got {p.p_minus}")
    conj = lambda v: v / (v - 1.0)
    return _derived(p, "conjugate", conj, conj(p.p_plus), conj(p.p_minus), conj(p.p_inf))


def sobolev_exponent(p: ExponentFn, alpha: float, ctx: GroupContext) -> ExponentFn:
    """q with 1/q = 1/p - alpha/Q (pointwise); requires p_plus < Q/alpha."""
    Q = ctx.Q
    if not 0 < alpha < Q:
        raise ValueError(f"alpha must lie in (0, {Q}), got {alpha}")
    if not p.p_plus < Q / alpha:
        raise ValueError(f"sobolev exponent needs p_plus < Q/alpha = {Q / alpha}, got {p.p_plus}")
    sob = lambda v: 1.0 / (1.0 / v - alpha / Q)
    return _derived(p, f"sobolev(alpha={alpha})", sob, sob(p.p_minus), sob(p.p_plus), sob(p.p_inf))


def scale_exponent(p: ExponentFn, s: float) -> ExponentFn:
    """The exponent p(.)/s (used by the norm power identity and its consumers)."""
    if s <= 0:
        raise ValueError("scale factor must be positive")
    div = lambda v: v / s
    return _derived(p, f"div({s})", div, p.p_minus / s, p.p_plus / s, p.p_inf / s)


def dpdot(p: ExponentFn, ctx: GroupContext) -> int:
    """Minimal k >= 0 with (2n + k + 3) * p_minus > 2n + 2 (strict); ties round up."""
    n = ctx.n
    k = 0
    while (2 * n + k + 3) * p.p_minus <= 2 * n + 2:
        k += 1
        if k > 10_000:
            raise RuntimeError("moment order search did not terminate")
    return k


# --------------------- empirical log-regularity estimates -------------------

def default_pair_sampler(ctx: GroupContext, rng: np.random.Generator, count: int):
    """Near pairs (z, w = z.u with rho(u) <= 1/2) plus far points for the
    at-infinity estimate.  Returns (z, w, z_far) as Point batches."""
    n2 = 2 * ctx.n
    zx = rng.uniform(-3.0, 3.0, (count, n2))
    zt = rng.uniform(-4.0, 4.0, count)
    z = Point(zx, zt)
    gx = rng.normal(size=(count, n2))
    gt = rng.normal(size=count)
    g = Point(gx, gt)
    unit = dilate(1.0 / np.maximum(koranyi_norm(g), 1e-300), g)
    scales = np.exp(rng.uniform(np.log(1e-3), np.log(0.5), count))
    u = dilate(scales, unit)
    w = group_mul(ctx, z, u)
    far_scales = np.exp(rng.uniform(np.log(0.1), np.log(1e3), count))
    z_far = dilate(far_scales, unit)
    return z, w, z_far


def log_holder_core(values_z: np.ndarray, values_w: np.ndarray, sep: np.ndarray,
                    values_far: np.ndarray, p_inf: float, rho_far: np.ndarray,
                    ) -> tuple[float, float]:
    """Estimator shared by p(.) and by transformed exponents on a fixed sample set."""
    keep = sep <= 0.5
    neglog = -np.log(np.maximum(sep[keep], 1e-300))
    c_local = float(np.max(np.abs(values_z[keep] - values_w[keep]) * neglog, initial=0.0))
    c_inf = float(np.max(np.abs(values_far - p_inf) * np.log(np.e + rho_far), initial=0.0))
    return c_local, c_inf


def log_holder_estimate(
    p: ExponentFn,
    sampler: Optional[Callable] = None,
    trials: int = 10_000,
    ctx: GroupContext = GroupContext(1),
    seed: int = 0,
) -> tuple[float, float]:
    """Empirical (C_local, C_inf) for the log continuity moduli of p(.).

    These are estimates from sampled pairs, never certificates of membership.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    sampler = sampler or default_pair_sampler
    z, w, z_far = sampler(ctx, rng, trials)
    sep = koranyi_norm(group_mul(ctx, group_inv(z), w))
    return log_holder_core(p(z), p(w), sep, p(z_far), p.p_inf, koranyi_norm(z_far))
