"""Single-channel ballistic currents for fractional exclusion statistics.

Reduced units: ``k_B = hbar = 1``. A reservoir at temperature ``T`` and
chemical potential ``mu`` emits, per unit time,

    energy  = T**2/(2 pi) * int_{x0}^inf (x + mu/T) f_g(x) dx
    entropy = T/(2 pi)    * int_{x0}^inf sigma_g(x) dx
    number  = T/(2 pi)    * int_{x0}^inf f_g(x) dx

with ``x0 = -mu/T``. The number current is the energy integrand without the
``(x + mu/T)`` weight (the standard one-dimensional Landauer form).

Integrals are taken over ``u = ln w`` instead of ``x``: the map
``x(u) = g u + (1-g) ln(1+e**u)`` is explicit, so no root solve is needed at
quadrature nodes, and the logarithmic singularity of the Bose entropy density
at ``x -> 0+`` becomes an exponentially decaying tail.

For ``g > 0`` and ``mu > 0`` each side is split into the ``T = 0`` step
(occupation ``1/g`` on ``[0, mu]``) plus a thermal remainder that is O(1) in
the reduced variable. Net currents subtract the step parts analytically, which
keeps heat currents and strongly degenerate energy differences free of
catastrophic cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import expit

from . import quadrature
from .errors import DomainError, PreconditionError
from .exclusion import (
    FERMI,
    StatLike,
    StatParam,
    as_stat,
    dx_dlog_w,
    entropy_density_from_log_w,
    occupation_from_log_w,
    solve_log_w,
    x_of_log_w,
)

TWO_PI = 2.0 * math.pi
QUAD_RTOL = 1e-13
# decay length, in units of u = ln w, beyond which tails are dropped (e^-80)
TAIL_SPAN = 80.0
PANEL_WIDTH = 10.0


@dataclass(frozen=True)
class Reservoir:
    temperature: float
    chemical_potential: float = 0.0

    def __post_init__(self):
        if not (self.temperature >= 0.0 and math.isfinite(self.temperature)):
            raise DomainError(f"temperature must be finite and >= 0, got {self.temperature}")
        if not math.isfinite(self.chemical_potential):
            raise DomainError("chemical potential must be finite")


@dataclass(frozen=True)
class ChannelSetup:
    g: StatParam
    left: Reservoir
    right: Reservoir

    def __post_init__(self):
        object.__setattr__(self, "g", as_stat(self.g))

    @classmethod
    def make(cls, g: StatLike, t_left: float, t_right: float,
             mu_left: float = 0.0, mu_right: Optional[float] = None) -> "ChannelSetup":
        """Shorthand; ``mu_right`` defaults to ``mu_left``."""
        if mu_right is None:
            mu_right = mu_left
        return cls(as_stat(g), Reservoir(t_left, mu_left), Reservoir(t_right, mu_right))


@dataclass(frozen=True)
class SideCurrents:
    """One-sided emission rates of a reservoir, in reduced units.

    ``degenerate_*`` hold the contribution of the ``T = 0`` step occupation
    (nonzero only for ``g > 0`` and ``mu > 0``); ``thermal_*`` hold the rest.
    ``heat`` is ``energy - mu * number``, computed directly from its own
    integral rather than by subtraction.
    """

    entropy: float
    thermal_energy: float = 0.0
    thermal_number: float = 0.0
    thermal_heat: float = 0.0
    degenerate_energy: float = 0.0
    degenerate_number: float = 0.0

    @property
    def energy(self) -> float:
        return self.degenerate_energy + self.thermal_energy

    @property
    def number(self) -> float:
        return self.degenerate_number + self.thermal_number

    @property
    def heat(self) -> float:
        # the step's own heat, E - mu N over [0, mu], is -mu^2/(4 pi g)
        return self.thermal_heat - self.degenerate_energy


@dataclass(frozen=True)
class Currents:
    net_energy: float
    net_entropy: float
    net_number: float
    left_heat: float
    right_heat: float
    net_heat: Optional[float] = None
    left: SideCurrents = field(default=None, repr=False, compare=False)
    right: SideCurrents = field(default=None, repr=False, compare=False)


def _check_bose(mu: float, g: StatParam) -> None:
    if g.is_bose and mu > 0.0:
        raise DomainError(f"Bose reservoir needs mu <= 0, got mu = {mu}")


def reduced_moments(m: float, g: StatLike) -> dict:
    """Dimensionless integrals behind :func:`side_currents` at ``mu/T = m``.

    Returns ``e`` (energy weight ``x - x0``), ``q`` (heat weight ``x``),
    ``n`` (number), ``s`` (entropy), each of the occupation minus the step
    reference when ``step`` is true; ``n`` is ``inf`` for bosons at ``m = 0``.
    """
    g = as_stat(g)
    _check_bose(m, g)
    gv = g.value
    x0 = -m
    step = (not g.is_bose) and m > 0.0
    if g.is_bose and m == 0.0:
        u0 = -math.inf
    else:
        u0 = solve_log_w(x0, g)
    u_zero = solve_log_w(0.0, g) if not g.is_bose else -math.inf

    if step:
        lo = max(u0, u_zero - TAIL_SPAN)
        hi = u_zero + TAIL_SPAN
    else:
        lo = u0 if math.isfinite(u0) else -TAIL_SPAN
        hi = max(u0, 0.0) + 1.25 * TAIL_SPAN
    points = {lo, hi}
    if step and lo < u_zero:
        points.add(u_zero)
    npanel = max(1, int(math.ceil((hi - lo) / PANEL_WIDTH)))
    points.update(np.linspace(lo, hi, npanel + 1)[1:-1].tolist())
    breakpoints = sorted(points)

    def integrand(u):
        x = x_of_log_w(u, g)
        jac = dx_dlog_w(u, g)
        f = occupation_from_log_w(u, g)
        sig = entropy_density_from_log_w(u, g)
        if step:
            # f - 1/g = -w f / g below the Fermi point, exactly
            r = np.where(u < u_zero, -np.exp(np.minimum(u, 0.0)) * f / gv, f)
        else:
            r = f
        y = x - x0
        return np.vstack([y * r * jac, x * r * jac, r * jac, sig * jac])

    vals, _ = quadrature.integrate(integrand, breakpoints, rtol=QUAD_RTOL)
    e, q, n, s = (float(v) for v in vals)
    if g.is_bose and m == 0.0:
        n = math.inf
    return {"e": e, "q": q, "n": n, "s": s, "step": step}


def side_currents(res: Reservoir, g: StatLike) -> SideCurrents:
    """One-sided energy, entropy and number currents emitted by ``res``.

    Requires ``res.temperature > 0``; use :func:`zero_temperature_side` for
    ``T = 0``. The Bose number current at ``mu = 0`` diverges
    logarithmically and is returned as ``inf``.
    """
    g = as_stat(g)
    T, mu = res.temperature, res.chemical_potential
    if T <= 0.0:
        raise PreconditionError("side_currents needs T > 0; use zero_temperature_side")
    _check_bose(mu, g)
    mom = reduced_moments(mu / T, g)
    deg_e = deg_n = 0.0
    if mom["step"]:
        deg_e = mu * mu / (2.0 * TWO_PI * g.value)
        deg_n = mu / (TWO_PI * g.value)
    return SideCurrents(
        entropy=T * mom["s"] / TWO_PI,
        thermal_energy=T * T * mom["e"] / TWO_PI,
        thermal_number=T * mom["n"] / TWO_PI,
        thermal_heat=T * T * mom["q"] / TWO_PI,
        degenerate_energy=deg_e,
        degenerate_number=deg_n,
    )


def zero_temperature_side(mu: float, g: StatLike) -> SideCurrents:
    """Emission of a ``T = 0`` reservoir: occupation ``1/g`` on ``[0, mu]``."""
    g = as_stat(g)
    if g.is_bose:
        raise DomainError("zero_temperature_side needs g > 0")
    if mu < 0.0:
        raise DomainError(f"zero_temperature_side needs mu >= 0, got {mu}")
    return SideCurrents(
        entropy=0.0,
        degenerate_energy=mu * mu / (2.0 * TWO_PI * g.value),
        degenerate_number=mu / (TWO_PI * g.value),
    )


def _any_side(res: Reservoir, g: StatParam) -> SideCurrents:
    if res.temperature > 0.0:
        return side_currents(res, g)
    mu = res.chemical_potential
    _check_bose(mu, g)
    if g.is_bose or mu <= 0.0:
        # empty reservoir: Bose with mu <= 0, or nothing below a negative mu
        return SideCurrents(entropy=0.0)
    return zero_temperature_side(mu, g)


def net_currents(setup: ChannelSetup) -> Currents:
    """Net (left minus right) currents for a single ballistic channel.

    ``net_heat`` is set only when both chemical potentials are exactly equal.
    """
    g = setup.g
    left = _any_side(setup.left, g)
    right = _any_side(setup.right, g)
    mu_l = setup.left.chemical_potential
    mu_r = setup.right.chemical_potential

    net_e = (left.degenerate_energy - right.degenerate_energy) + (
        left.thermal_energy - right.thermal_energy
    )
    if math.isinf(left.thermal_number) or math.isinf(right.thermal_number):
        # Bose mu = 0 emission diverges as T ln(1/E) at low energy
        net_n = _divergent_difference(setup, left, right)
    else:
        net_n = (left.degenerate_number - right.degenerate_number) + (
            left.thermal_number - right.thermal_number
        )
    net_heat = None
    if mu_l == mu_r:
        net_heat = left.thermal_heat - right.thermal_heat
    return Currents(
        net_energy=net_e,
        net_entropy=left.entropy - right.entropy,
        net_number=net_n,
        left_heat=left.heat,
        right_heat=right.heat,
        net_heat=net_heat,
        left=left,
        right=right,
    )


def _divergent_difference(setup, left, right) -> float:
    lw = setup.left.temperature if math.isinf(left.thermal_number) else 0.0
    rw = setup.right.temperature if math.isinf(right.thermal_number) else 0.0
    # the low-energy divergence is proportional to T; equal weights cancel
    if lw == rw:
        return left.thermal_number - right.thermal_number if lw == 0.0 else math.nan
    return math.copysign(math.inf, lw - rw)


def _fermi(x):
    return expit(-x)


def _fermi_entropy_kernel(x):
    # f ln f + (1-f) ln(1-f) with f = 1/(e^x+1), written via softplus
    f = expit(-x)
    return -(f * np.logaddexp(0.0, x) + (1.0 - f) * np.logaddexp(0.0, -x))


def _tail_integral(func, start: float) -> float:
    """int_start^inf func, with the region around the Fermi point kept finite."""
    mid = max(start, 0.0) + 40.0
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    pts = [0.0] if start < 0.0 < mid else None
    head, _ = sp_integrate.quad(func, start, mid, points=pts, **opts)
    tail, _ = sp_integrate.quad(func, mid, math.inf, **opts)
    return head + tail


def fermion_sommerfeld_currents(setup: ChannelSetup) -> tuple[float, float]:
    """Net fermion energy and entropy currents from the particle-hole
    rewritten integrals.

    Uses ``f(x) = 1 - f(-x)`` to express each side as its degenerate
    (``mu/T -> inf``) value plus integrals over ``[mu/T, inf)`` only. Evaluated
    with QUADPACK on the explicit Fermi function, independently of
    :func:`net_currents`, so the two serve as cross-checks.
    """
    if setup.g != FERMI:
        raise PreconditionError("fermion_sommerfeld_currents needs g = 1")
    tl, tr = setup.left.temperature, setup.right.temperature
    if tl <= 0.0 or tr <= 0.0:
        raise PreconditionError("both temperatures must be positive")
    mu_l, mu_r = setup.left.chemical_potential, setup.right.chemical_potential
    ml, mr = mu_l / tl, mu_r / tr
    ratio = tr / tl

    def e_int(m):
        return _tail_integral(lambda x: (m - x) * _fermi(x), m)

    def s_int(m):
        return _tail_integral(_fermi_entropy_kernel, m)

    pi2 = math.pi ** 2
    energy = math.pi * tl * tl / 12.0 * (
        1.0 - ratio ** 2
        + 3.0 * (mu_l ** 2 - mu_r ** 2) / (pi2 * tl * tl)
        + 6.0 / pi2 * e_int(ml)
        - 6.0 / pi2 * ratio ** 2 * e_int(mr)
    )
    entropy = math.pi * tl / 6.0 * (
        1.0 - ratio
        + 3.0 / pi2 * s_int(ml)
        - 3.0 / pi2 * ratio * s_int(mr)
    )
    return energy, entropy
