"""Occupation functions for fractional exclusion statistics.

The mean occupation of a single-particle level with reduced energy
``x = (E - mu) / T`` is ``f = 1 / (w(x) + g)`` where ``w > 0`` solves

    w**g * (1 + w)**(1 - g) = exp(x).

Everything here is computed from ``u = ln w``; the equation then reads
``g*u + (1-g)*softplus(u) = x`` with ``softplus(u) = ln(1 + e**u)``, which is
monotone and convex in ``u``. Working in ``u`` keeps ``w`` finite for any
finite ``x`` and lets the transport integrals use ``u`` as the integration
variable (see :mod:`channel_limits.transport`).

Units: ``k_B = hbar = 1`` throughout the package, so temperatures and chemical
potentials are energies and Planck's constant is ``h = 2*pi``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import expit

from .errors import ConvergenceError, DomainError

__all__ = [
    "StatParam",
    "BOSE",
    "FERMI",
    "SEMION",
    "as_stat",
    "solve_log_w",
    "solve_w",
    "x_of_log_w",
    "dx_dlog_w",
    "occupation",
    "occupation_from_log_w",
    "entropy_density",
    "entropy_density_from_log_w",
]

MAX_NEWTON_ITER = 200
LN2 = math.log(2.0)


@functools.total_ordering
@dataclass(frozen=True)
class StatParam:
    """Exact rational statistics parameter ``g = numerator / denominator``.

    ``g = 0`` is Bose, ``g = 1`` Fermi and ``g = 1/2`` semion statistics.
    The fraction is normalised to lowest terms on construction.
    """

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        num, den = int(self.numerator), int(self.denominator)
        if den <= 0:
            raise DomainError(f"denominator must be positive, got {den}")
        if num < 0 or num > den:
            raise DomainError(f"g = {num}/{den} is outside [0, 1]")
        k = math.gcd(num, den) or 1
        object.__setattr__(self, "numerator", num // k)
        object.__setattr__(self, "denominator", den // k)

    @classmethod
    def parse(cls, text: str) -> "StatParam":
        return as_stat(Fraction(text.strip()))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    @property
    def is_bose(self) -> bool:
        return self.numerator == 0

    @property
    def is_fermi(self) -> bool:
        return self.numerator == self.denominator

    @property
    def is_semion(self) -> bool:
        return self.numerator == 1 and self.denominator == 2

    def __lt__(self, other: "StatParam") -> bool:
        if not isinstance(other, StatParam):
            return NotImplemented
        return self.fraction < other.fraction

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


StatLike = Union[StatParam, Fraction, int, float, str]

BOSE = StatParam(0)
FERMI = StatParam(1)
SEMION = StatParam(1, 2)


def as_stat(g: StatLike) -> StatParam:
    """Coerce ``g`` to a :class:`StatParam`.

    Floats are accepted only when they are the nearest double to a fraction
    with denominator at most 1000 (``0.25`` or ``1/3`` computed in floating
    point); anything else is ambiguous and rejected.
    """
    if isinstance(g, StatParam):
        return g
    if isinstance(g, str):
        return StatParam.parse(g)
    if isinstance(g, float):
        frac = Fraction(g).limit_denominator(1000)
        if float(frac) != g:
            raise DomainError(f"cannot identify {g!r} with a rational g")
        g = frac
    frac = Fraction(g)
    return StatParam(frac.numerator, frac.denominator)


def _softplus(u):
    return np.logaddexp(0.0, u)


def x_of_log_w(u, g: StatLike):
    """Reduced energy ``x`` corresponding to ``u = ln w``."""
    gv = as_stat(g).value
    u = np.asarray(u, dtype=float)
    return gv * u + (1.0 - gv) * _softplus(u)


def dx_dlog_w(u, g: StatLike):
    """Derivative ``dx/du``; strictly positive."""
    gv = as_stat(g).value
    u = np.asarray(u, dtype=float)
    return gv + (1.0 - gv) * expit(u)


def _closed_form_log_w(x: np.ndarray, g: StatParam) -> np.ndarray:
    if g.is_fermi:
        return x.copy()
    if g.is_bose:
        # ln(e^x - 1), written to stay accurate for both small and large x
        small = x < 30.0
        out = np.empty_like(x)
        out[small] = np.log(np.expm1(x[small]))
        out[~small] = x[~small] + np.log1p(-np.exp(-x[~small]))
        return out
    # semion: w = (sqrt(1 + 4 e^{2x}) - 1) / 2
    out = np.empty_like(x)
    neg = x <= 0.0
    xn = x[neg]
    out[neg] = LN2 + 2.0 * xn - np.log1p(np.sqrt(1.0 + 4.0 * np.exp(2.0 * xn)))
    xp = x[~neg]
    ex = np.exp(-xp)
    out[~neg] = LN2 + xp - np.log(ex + 2.0 * np.sqrt(1.0 + 0.25 * ex * ex))
    return out


def _newton_log_w(x: np.ndarray, g: StatParam) -> np.ndarray:
    """Safeguarded Newton iteration for ``u = ln w`` on a guaranteed bracket."""
    gv = g.value
    c = (1.0 - gv) * LN2
    # Upper end: h(u) >= g*u + (1-g)*max(u, 0) - x, so h(hi) >= 0.
    if gv > 0.0:
        hi = np.where(x >= 0.0, x, x / gv)
    else:
        hi = x.copy()
    # Lower end: h(u) <= g*u + (1-g)*(max(u, 0) + ln 2) - x, and for bosons
    # softplus(u) <= e^u as well.
    with np.errstate(divide="ignore", invalid="ignore"):
        if gv > 0.0:
            lo = np.where(x >= c, x - c, (x - c) / gv)
        else:
            lo = np.where(x >= c, x - c, np.log(x))
    u = hi.copy()
    active = np.ones(x.shape, dtype=bool)
    for _ in range(MAX_NEWTON_ITER):
        ua = u[active]
        xa = x[active]
        h = gv * ua + (1.0 - gv) * _softplus(ua) - xa
        dh = gv + (1.0 - gv) * expit(ua)
        lo_a, hi_a = lo[active], hi[active]
        hi_a = np.where(h > 0.0, ua, hi_a)
        lo_a = np.where(h < 0.0, ua, lo_a)
        step = h / dh
        unew = ua - step
        outside = ~((unew > lo_a) & (unew < hi_a))
        unew = np.where(outside, 0.5 * (lo_a + hi_a), unew)
        tol = 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(ua))
        done = (np.abs(unew - ua) <= tol) | (h == 0.0) | (hi_a - lo_a <= tol)
        unew = np.where(h == 0.0, ua, unew)
        idx = np.flatnonzero(active)
        u[idx] = unew
        lo[idx], hi[idx] = lo_a, hi_a
        active[idx[done]] = False
        if not active.any():
            return u
    raise ConvergenceError(
        f"Newton iteration for ln w did not converge in {MAX_NEWTON_ITER} steps"
    )


def solve_log_w(x, g: StatLike, method: str = "auto"):
    """Solve ``g*u + (1-g)*ln(1+e**u) = x`` for ``u = ln w``.

    ``method="auto"`` uses closed forms for g = 0, 1/2 and 1 and the bracketed
    Newton solver otherwise; ``method="iterative"`` forces the solver.
    Accepts scalars or arrays and returns the same shape.
    """
    g = as_stat(g)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if not np.all(np.isfinite(xa)):
        raise DomainError("x must be finite")
    if g.is_bose and np.any(xa <= 0.0):
        raise DomainError("Bose occupation requires x > 0 (mu below the level energy)")
    if method == "auto" and (g.is_bose or g.is_fermi or g.is_semion):
        u = _closed_form_log_w(xa, g)
    elif method in ("auto", "iterative"):
        u = _newton_log_w(xa, g)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(u[0]) if scalar else u


def solve_w(x, g: StatLike, method: str = "auto"):
    """Positive root ``w`` of ``w**g (1+w)**(1-g) = e**x``.

    Overflows to ``inf`` once ``x`` exceeds roughly 709; use
    :func:`solve_log_w` or :func:`occupation` for such arguments.
    """
    u = solve_log_w(x, g, method)
    with np.errstate(over="ignore"):
        w = np.exp(u)
    return float(w) if np.ndim(w) == 0 else w


def occupation_from_log_w(u, g: StatLike):
    """``f = 1/(e**u + g)`` evaluated without overflow for large ``u``."""
    gv = as_stat(g).value
    u = np.asarray(u, dtype=float)
    t = np.exp(-np.abs(u))
    # u > 0: f = t / (1 + g t); u <= 0: f = 1 / (e^u + g)
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(u > 0.0, t / (1.0 + gv * t), 1.0 / (t + gv))


def entropy_density_from_log_w(u, g: StatLike):
    """Entropy per level, ``f * [(1+w) ln(1+w) - w ln w]`` with ``w = e**u``.

    Algebraically identical to
    ``-[f ln f + (1-g f) ln(1-g f) - (1+(1-g) f) ln(1+(1-g) f)]`` because
    ``1 - g f = w f`` and ``1 + (1-g) f = (1+w) f``; this form has no
    cancellation in either tail.
    """
    g = as_stat(g)
    u = np.asarray(u, dtype=float)
    f = occupation_from_log_w(u, g)
    t = np.exp(-np.abs(u))
    # e^u * ln(1 + e^-u): for u > 0 this is ln(1+t)/t with t = e^-u
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = np.where(t > 1e-8, np.log1p(t) / t, 1.0 - 0.5 * t)
    neg = t * (-u + np.log1p(t))
    bracket = _softplus(u) + np.where(u > 0.0, pos, neg)
    return f * bracket


def occupation(x, g: StatLike):
    """Mean occupation ``f_g(x) = 1/(w(x) + g)``."""
    u = solve_log_w(x, g)
    f = occupation_from_log_w(u, g)
    return float(f) if np.ndim(f) == 0 else f


def entropy_density(x, g: StatLike):
    """Entropy per level in nats; its integral over ``x`` times ``T/2pi`` is
    the one-sided entropy current."""
    u = solve_log_w(x, g)
    s = entropy_density_from_log_w(u, g)
    return float(s) if np.ndim(s) == 0 else s
