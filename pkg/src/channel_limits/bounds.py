"""Entropy-current bounds, heat emission and the thermal conductance quantum.

Two bound ratios are evaluated (reduced units, ``k_B = hbar = 1``):

* general: ``3 S**2 / (pi E)`` for ``T_L > T_R`` and ``mu_L >= mu_R``;
* tight:   ``3 (T_L + T_R) S**2 / (pi (T_L - T_R) Q)`` with ``Q = E - mu N``,
  for ``T_L > T_R`` and ``mu_L = mu_R = mu``.

Both are conjectured to be at most one. Sweeps evaluate them on the figure
grids and on randomised parameter sets.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import PreconditionError
from .exclusion import BOSE, StatLike, StatParam, as_stat
from .transport import (
    ChannelSetup,
    Reservoir,
    net_currents,
    side_currents,
)

SLACK = 1e-9
# stand-in for an empty right reservoir in sweeps (T_R = 0 limit)
COLD_FRACTION = 1e-6
SWEEP_G_VALUES = tuple(
    as_stat(g) for g in ("0", "1/5", "1/4", "1/3", "1/2", "2/3", "3/4", "1")
)


class BoundKind(enum.Enum):
    GENERAL = "general"
    TIGHT = "tight"


@dataclass(frozen=True)
class BoundReport:
    ratio: float
    satisfied: bool
    setup: ChannelSetup
    kind: BoundKind


def _report(ratio: float, setup: ChannelSetup, kind: BoundKind) -> BoundReport:
    return BoundReport(ratio, bool(ratio <= 1.0 + SLACK), setup, kind)


def bound_ratio_general(setup: ChannelSetup) -> BoundReport:
    """``3 S**2 / (pi E)``; requires ``T_L > T_R`` and ``mu_L >= mu_R``."""
    left, right = setup.left, setup.right
    if not left.temperature > right.temperature:
        raise PreconditionError("general bound needs T_L > T_R")
    if not left.chemical_potential >= right.chemical_potential:
        raise PreconditionError("general bound needs mu_L >= mu_R")
    cur = net_currents(setup)
    ratio = 3.0 * cur.net_entropy ** 2 / (math.pi * cur.net_energy)
    return _report(ratio, setup, BoundKind.GENERAL)


def _tight_parts(setup: ChannelSetup):
    left, right = setup.left, setup.right
    if not left.temperature > right.temperature:
        raise PreconditionError("tight bound needs T_L > T_R")
    if left.chemical_potential != right.chemical_potential:
        raise PreconditionError("tight bound needs mu_L = mu_R")
    cur = net_currents(setup)
    tl, tr = left.temperature, right.temperature
    prefactor = 3.0 * (tl + tr) * cur.net_entropy ** 2 / (math.pi * (tl - tr))
    return prefactor, cur


def bound_ratio_tight(setup: ChannelSetup) -> BoundReport:
    """``3 (T_L+T_R) S**2 / (pi (T_L-T_R) Q)``; requires ``T_L > T_R`` and
    equal chemical potentials."""
    prefactor, cur = _tight_parts(setup)
    return _report(prefactor / cur.net_heat, setup, BoundKind.TIGHT)


def tight_ratio_with_energy(setup: ChannelSetup) -> float:
    """The tight ratio with the energy current in place of the heat current.

    Exceeds one for bosons with ``mu < 0``, which is why the heat current
    is the right quantity in the tight bound.
    """
    prefactor, cur = _tight_parts(setup)
    return prefactor / cur.net_energy


def heat_emission_ratio(temperature: float) -> float:
    """Boson (``mu = 0``) heat emission over its bound ``pi T**2 / 3``.

    Comes out as 1/4 for every temperature: the bound holds but is not tight.
    """
    side = side_currents(Reservoir(temperature, 0.0), BOSE)
    return side.heat / (math.pi * temperature ** 2 / 3.0)


def irreversibility_factor(temperature: float) -> float:
    """``(Q/T) / S`` for a ``mu = 0`` boson reservoir; equals 1/2."""
    side = side_currents(Reservoir(temperature, 0.0), BOSE)
    return side.heat / temperature / side.entropy


def thermal_conductance(g: StatLike, mu: float, mean_t: float, delta_t: float) -> float:
    """Heat current over ``delta_t`` between reservoirs at ``mean_t +- delta_t/2``.

    Tends to ``pi mean_t / 6`` in the degenerate limit for every ``g``.
    """
    if not (delta_t > 0.0 and delta_t < 2.0 * mean_t):
        raise PreconditionError("need 0 < delta_t < 2 mean_t")
    setup = ChannelSetup.make(g, mean_t + 0.5 * delta_t, mean_t - 0.5 * delta_t, mu)
    return net_currents(setup).net_heat / delta_t


# --------------------------------------------------------------------------
# sweeps

AXES = {
    "TL/muL": "k_B T_L / mu_L",
    "TL/mu": "k_B T_L / mu (mu_L = mu_R = mu)",
    "x0L": "x0_L = -mu / k_B T_L",
    "muL/TL": "mu_L / k_B T_L",
}


@dataclass(frozen=True)
class SweepCurve:
    """One curve of a sweep: a statistics value plus fixed relations.

    Recognised relations: ``muL_over_muR`` (default 1), and exactly one of
    ``x0R_over_x0L`` or ``TR_over_TL``.
    """

    label: str
    g: StatParam
    relations: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "g", as_stat(self.g))
        rel = dict(self.relations)
        unknown = set(rel) - {"muL_over_muR", "x0R_over_x0L", "TR_over_TL"}
        if unknown:
            raise ValueError(f"unknown relations {sorted(unknown)}")
        if ("x0R_over_x0L" in rel) == ("TR_over_TL" in rel):
            raise ValueError("give exactly one of x0R_over_x0L, TR_over_TL")
        object.__setattr__(self, "relations", rel)


@dataclass(frozen=True)
class SweepGrid:
    axis: str
    axis_values: tuple
    curves: tuple
    kind: BoundKind

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {sorted(AXES)}")
        object.__setattr__(self, "axis_values", tuple(sorted(float(a) for a in self.axis_values)))
        object.__setattr__(self, "curves", tuple(self.curves))

    @property
    def g_values(self) -> tuple:
        return tuple(c.g for c in self.curves)


@dataclass(frozen=True)
class SweepRow:
    curve: str
    g: StatParam
    axis: float
    ratio: float
    satisfied: bool
    error: str = ""


def grid_setup(axis: str, value: float, curve: SweepCurve, scale: float = 1.0) -> ChannelSetup:
    """Build the setup for one grid point.

    ``scale`` fixes the free overall energy unit: ``mu_L`` on the
    ``TL/muL`` axis and ``T_L`` on the others.
    """
    rel = curve.relations
    mu_ratio = rel.get("muL_over_muR", 1.0)
    if axis in ("TL/muL", "TL/mu"):
        mu_l = scale
        t_l = value * mu_l
    elif axis == "x0L":
        t_l = scale
        mu_l = -value * t_l
    elif axis == "muL/TL":
        t_l = scale
        mu_l = value * t_l
    else:
        raise ValueError(f"unknown axis {axis!r}")
    mu_r = mu_l / mu_ratio
    if "TR_over_TL" in rel:
        t_r = rel["TR_over_TL"] * t_l
    else:
        # x0_R = k x0_L  =>  mu_R / T_R = k mu_L / T_L
        t_r = mu_r * t_l / (rel["x0R_over_x0L"] * mu_l)
    return ChannelSetup.make(curve.g, t_l, t_r, mu_l, mu_r)


def evaluate(setup: ChannelSetup, kind: BoundKind) -> BoundReport:
    if kind is BoundKind.GENERAL:
        return bound_ratio_general(setup)
    return bound_ratio_tight(setup)


def _point(args) -> SweepRow:
    axis, value, curve, kind = args
    try:
        rep = evaluate(grid_setup(axis, value, curve), kind)
        return SweepRow(curve.label, curve.g, value, rep.ratio, rep.satisfied)
    except (ArithmeticError, ValueError) as exc:
        return SweepRow(curve.label, curve.g, value, math.nan, False, f"{type(exc).__name__}: {exc}")


def sweep(grid: SweepGrid, executor=None) -> list:
    """Evaluate ``grid``; one row per (curve, axis value), ordered by curve
    then axis. Per-point failures are recorded in ``SweepRow.error``.

    ``executor`` may be any object with an order-preserving ``map`` (for
    example a ``concurrent.futures`` pool); rows come back in grid order.
    """
    tasks = [(grid.axis, a, c, grid.kind) for c in grid.curves for a in grid.axis_values]
    mapper = executor.map if executor is not None else map
    return list(mapper(_point, tasks))


def figure1_grid(points: int = 41, lo: float = 0.01, hi: float = 10.0,
                 x0_ratio: float = 100.0) -> SweepGrid:
    """General ratio against ``T_L/mu_L`` with ``x0_R = 100 x0_L``."""
    curves = [
        SweepCurve("g=1 muL=muR", 1, {"muL_over_muR": 1.0, "x0R_over_x0L": x0_ratio}),
        SweepCurve("g=1 muL=1.01muR", 1, {"muL_over_muR": 1.01, "x0R_over_x0L": x0_ratio}),
        SweepCurve("g=1 muL=1.1muR", 1, {"muL_over_muR": 1.1, "x0R_over_x0L": x0_ratio}),
        SweepCurve("g=1/2 muL=muR", "1/2", {"muL_over_muR": 1.0, "x0R_over_x0L": x0_ratio}),
    ]
    return SweepGrid("TL/muL", tuple(np.geomspace(lo, hi, points)), tuple(curves), BoundKind.GENERAL)


def figure2_grid(points: int = 41, lo: float = 1e-4, hi: float = 10.0) -> SweepGrid:
    """Tight ratio for bosons against ``x0_L`` at three ``T_R/T_L`` values."""
    curves = [
        SweepCurve(f"g=0 TR={r}TL", 0, {"TR_over_TL": r}) for r in (0.9, 0.5, 0.1)
    ]
    return SweepGrid("x0L", tuple(np.geomspace(lo, hi, points)), tuple(curves), BoundKind.TIGHT)


def figure3_grid(points: int = 41, lo: float = 0.01, hi: float = 10.0,
                 tr_ratio: float = 0.5) -> SweepGrid:
    """Tight ratio against ``T_L/mu`` for g = 1, 1/2, 1/4 at ``T_R = T_L/2``."""
    curves = [
        SweepCurve(f"g={g} TR={tr_ratio}TL", g, {"TR_over_TL": tr_ratio})
        for g in ("1", "1/2", "1/4")
    ]
    return SweepGrid("TL/mu", tuple(np.geomspace(lo, hi, points)), tuple(curves), BoundKind.TIGHT)


# --------------------------------------------------------------------------
# randomised sweep

@dataclass(frozen=True)
class RandomPoint:
    setup: ChannelSetup
    general: Optional[BoundReport]
    tight: Optional[BoundReport]
    error: str = ""


def random_setups(n: int, rng: np.random.Generator,
                  mu_range: Sequence[float] = (-5.0, 200.0),
                  g_values: Iterable[StatParam] = SWEEP_G_VALUES) -> list:
    """Random valid setups: ``T_L = 1``, ``T_R/T_L`` uniform in (0, 1),
    ``mu_L/T_L`` uniform in ``mu_range`` (clipped to ``<= 0`` for bosons).

    Half of the setups have ``mu_R = mu_L`` (both bounds apply); the others
    lower ``mu_R`` by a random amount so that only the general bound applies.
    """
    g_values = tuple(g_values)
    setups = []
    lo, hi = mu_range
    for _ in range(n):
        g = g_values[int(rng.integers(len(g_values)))]
        tr = float(rng.uniform(0.0, 1.0))
        while tr <= 0.0:
            tr = float(rng.uniform(0.0, 1.0))
        if g.is_bose:
            mu_l = -float(rng.uniform(0.0, -lo)) if lo < 0.0 else 0.0
        else:
            mu_l = float(rng.uniform(lo, hi))
        if rng.random() < 0.5:
            mu_r = mu_l
        else:
            mu_r = mu_l - float(rng.exponential(1.0 + abs(mu_l)))
        setups.append(ChannelSetup.make(g, 1.0, tr, mu_l, mu_r))
    return setups


def _random_point(setup: ChannelSetup) -> RandomPoint:
    try:
        general = bound_ratio_general(setup)
        tight = None
        if setup.left.chemical_potential == setup.right.chemical_potential:
            tight = bound_ratio_tight(setup)
        return RandomPoint(setup, general, tight)
    except (ArithmeticError, ValueError) as exc:
        return RandomPoint(setup, None, None, f"{type(exc).__name__}: {exc}")


def randomized_sweep(n: int, seed: int, executor=None, **kwargs) -> list:
    """Evaluate both bounds on ``n`` random setups drawn with ``seed``."""
    rng = np.random.default_rng(seed)
    setups = random_setups(n, rng, **kwargs)
    mapper = executor.map if executor is not None else map
    return list(mapper(_random_point, setups))


def degenerate_family(kind: str, g: StatLike, extreme: float) -> BoundReport:
    """General-bound ratio at one point of a degenerate-limit family.

    * ``"bose-mu"``: bosons, ``mu_L/T_L = -extreme`` (-> 0-), ``mu_R = mu_L``,
      right reservoir cold;
    * ``"degenerate"``: ``g > 0``, ``mu_L = mu_R = extreme T_L``, right cold;
    * ``"bose-zero"``: bosons at ``mu = 0`` with the right reservoir cold,
      where equality holds (``extreme`` unused).

    "Cold" is ``T_R = COLD_FRACTION * T_L``.
    """
    if kind == "bose-mu":
        setup = ChannelSetup.make(BOSE, 1.0, COLD_FRACTION, -extreme)
    elif kind == "degenerate":
        setup = ChannelSetup.make(g, 1.0, COLD_FRACTION, extreme)
    elif kind == "bose-zero":
        setup = ChannelSetup.make(BOSE, 1.0, COLD_FRACTION, 0.0)
    else:
        raise ValueError(f"unknown family {kind!r}")
    return bound_ratio_general(setup)
