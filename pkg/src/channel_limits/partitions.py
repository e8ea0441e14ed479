"""Restricted partition counts and wideband channel capacities.

A Fock state of a wideband channel with mode energies ``h j / T`` and total
energy ``N h / T`` is a partition of ``N``; for statistics ``g = 1/n`` no part
may repeat more than ``n`` times. The maximum message entropy is therefore
``log2`` of a restricted partition count.

Units: ``h = 2 pi`` (``hbar = 1``). Power ``P`` and transmission time ``T``
enter the asymptotic capacities only through ``P T**2 / h`` (which equals
``N``) and ``P / h``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, ResourceLimitError
from .exclusion import BOSE, StatLike, as_stat
from .transport import Reservoir, side_currents

H_PLANCK = 2.0 * math.pi
MAX_N = 10 ** 6
# above this size the O(N^2) table gives way to the pentagonal-number route
DP_MAX_N = 20_000


class UpperBoundWarning(UserWarning):
    """Max-multiplicity counts for 0 < g < 1 ignore further exclusion rules."""


def _check_n(N: int) -> int:
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a non-negative integer, got {N!r}")
    N = int(N)
    if N > MAX_N:
        raise ResourceLimitError(f"N = {N} exceeds the guard {MAX_N}")
    return N


def _check_mult(max_multiplicity: Optional[int]) -> Optional[int]:
    if max_multiplicity is None:
        return None
    if int(max_multiplicity) != max_multiplicity or max_multiplicity < 1:
        raise DomainError("max_multiplicity must be a positive integer or None")
    return int(max_multiplicity)


def partition_table(N: int, max_multiplicity: Optional[int] = None) -> list:
    """Exact counts for every ``0..N`` with each part used at most
    ``max_multiplicity`` times (``None``: unrestricted).

    Dynamic programming over parts ``k = 1..N``: a running sum along each
    residue class mod ``k`` adds any number of copies of ``k``, and
    subtracting the same sum shifted by ``(m+1) k`` caps the copies at ``m``.
    Arithmetic is on Python integers held in object arrays.
    """
    N = _check_n(N)
    m = _check_mult(max_multiplicity)
    counts = np.zeros(N + 1, dtype=object)
    counts[0] = 1
    for k in range(1, N + 1):
        rows = -(-(N + 1) // k)
        padded = np.zeros(rows * k, dtype=object)
        padded[: N + 1] = counts
        summed = np.cumsum(padded.reshape(rows, k), axis=0).ravel()[: N + 1]
        if m is not None:
            shift = (m + 1) * k
            if shift <= N:
                summed[shift:] -= summed[: N + 1 - shift]
        counts = summed
    return [int(c) for c in counts]


def pentagonal_partition_numbers(N: int) -> list:
    """Unrestricted ``p(0..N)`` from Euler's pentagonal-number recurrence."""
    N = _check_n(N)
    p = [1] + [0] * N
    for n in range(1, N + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = g1 + k
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def _euler_count(N: int, m: Optional[int], p) -> int:
    """``sum_j (-1)^j p(N - (m+1) j(3j-1)/2)`` over generalised pentagonal j.

    Follows from ``prod_k (1 - x^{(m+1)k}) / (1 - x^k)`` and Euler's
    pentagonal theorem; ``p`` is any callable returning ``p(n)``.
    """
    if m is None or m >= N:
        return int(p(N))
    step = m + 1
    total = 0
    j = 0
    while True:
        found = False
        for jj in ((j, -j) if j else (0,)):
            k = step * (jj * (3 * jj - 1) // 2)
            if k <= N:
                found = True
                total += (-1 if jj % 2 else 1) * int(p(N - k))
        if not found and j:
            break
        j += 1
    return total


def count_partitions(N: int, max_multiplicity: Optional[int] = None, method: str = "auto") -> int:
    """Number of partitions of ``N`` using each part at most
    ``max_multiplicity`` times (``None`` = unrestricted).

    ``method``: ``"dp"`` (exact table, O(N^2)), ``"euler"`` (pentagonal
    inclusion-exclusion over exact ``p(n)`` from the Hardy-Ramanujan-Rademacher
    series in sympy), or ``"auto"`` (dp up to ``DP_MAX_N``).
    """
    N = _check_n(N)
    m = _check_mult(max_multiplicity)
    if method == "auto":
        method = "dp" if N <= DP_MAX_N else "euler"
    if method == "dp":
        return partition_table(N, m)[N]
    if method == "euler":
        from sympy import partition as npartitions

        return _euler_count(N, m, npartitions)
    raise ValueError(f"unknown method {method!r}")


def log_asymptotic_distinct_count(N: int) -> float:
    """Natural log of ``exp(pi sqrt(N/3)) / (4 3^(1/4) N^(3/4))``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return math.pi * math.sqrt(N / 3.0) - math.log(4.0 * 3.0 ** 0.25) - 0.75 * math.log(N)


def asymptotic_distinct_count(N: int) -> float:
    """Leading asymptotic number of partitions of ``N`` into distinct parts.

    Overflows to ``inf`` beyond ``N`` of about 1.6e5; use the log version there.
    """
    lg = log_asymptotic_distinct_count(N)
    return math.exp(lg) if lg < 709.0 else math.inf


def log_asymptotic_unrestricted_count(N: int) -> float:
    """Natural log of Hardy-Ramanujan ``exp(pi sqrt(2N/3)) / (4 sqrt(3) N)``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return math.pi * math.sqrt(2.0 * N / 3.0) - math.log(4.0 * math.sqrt(3.0) * N)


class Regime(enum.Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class CapacityResult:
    bits_per_time: float
    regime: Regime


def exact_capacity(N: int, max_multiplicity: Optional[int], transmission_time: float) -> CapacityResult:
    """``log2(count) / T`` for a message of total energy ``N h / T``."""
    if not transmission_time > 0.0:
        raise DomainError("transmission time must be positive")
    count = count_partitions(N, max_multiplicity)
    return CapacityResult(math.log2(count) / transmission_time, Regime.EXACT)


def multiplicity_for(g: StatLike) -> Optional[int]:
    """Max part multiplicity for ``g = 1/n`` (``None`` for bosons).

    For ``0 < g < 1`` the true state count obeys extra exclusion rules not
    modelled here, so an :class:`UpperBoundWarning` is emitted.
    """
    g = as_stat(g)
    if g.is_bose:
        return None
    if g.numerator != 1:
        raise DomainError(f"max-multiplicity rule is defined for g = 1/n only, got {g}")
    if g.denominator > 1:
        warnings.warn(
            f"counts for g = {g} use the max-multiplicity rule only and are upper bounds",
            UpperBoundWarning,
            stacklevel=2,
        )
    return g.denominator


def capacity_bound(power: float) -> float:
    """Wideband bound ``(pi/ln 2) sqrt(2 P / 3h)`` in bits per unit time."""
    return math.pi / math.log(2.0) * math.sqrt(2.0 * power / (3.0 * H_PLANCK))


def _asym(leading: float, correction: float, transmission_time: float) -> CapacityResult:
    value = leading - correction / transmission_time
    if not value > 0.0:
        raise DomainError("asymptotic capacity is non-positive; P T^2 / h is too small")
    return CapacityResult(value, Regime.ASYMPTOTIC)


def capacity_boson_asym(power: float, transmission_time: float) -> CapacityResult:
    """Large-``T`` boson capacity at fixed energy."""
    if not (power > 0.0 and transmission_time > 0.0):
        raise DomainError("power and transmission time must be positive")
    n = power * transmission_time ** 2 / H_PLANCK
    return _asym(capacity_bound(power), math.log2(4.0 * math.sqrt(3.0) * n), transmission_time)


def capacity_fermion_asym(power: float, transmission_time: float) -> CapacityResult:
    """Large-``T`` fermion capacity at fixed energy (distinct parts)."""
    if not (power > 0.0 and transmission_time > 0.0):
        raise DomainError("power and transmission time must be positive")
    n = power * transmission_time ** 2 / H_PLANCK
    leading = math.pi / math.log(2.0) * math.sqrt(power / (3.0 * H_PLANCK))
    return _asym(leading, math.log2(4.0 * 3.0 ** 0.25 * n ** 0.75), transmission_time)


def capacity_coefficient(g: StatLike) -> float:
    """``c_g`` with ``C(T -> inf) = c_g sqrt(P / h)``.

    From the ``mu = 0`` currents at unit temperature, entropy ``a`` and
    energy ``b``: eliminating ``T`` between ``S = a T`` and ``P = b T**2``
    gives ``C = S / ln 2 = (a / ln 2) sqrt(h / b) sqrt(P / h)``.
    """
    side = side_currents(Reservoir(1.0, 0.0), g)
    return side.entropy / math.log(2.0) * math.sqrt(H_PLANCK / side.energy)


def capacity_ratio_curve(g_values: Iterable[StatLike]) -> list:
    """Rows ``(g, c_g / c_0)`` sorted by ``g``."""
    c0 = capacity_coefficient(BOSE)
    gs = sorted({as_stat(g) for g in g_values})
    return [(g, capacity_coefficient(g) / c0) for g in gs]


def farey_grid(max_denominator: int = 8) -> list:
    """All fractions in ``[0, 1]`` with denominator at most ``max_denominator``."""
    fracs = {as_stat(f"{p}/{q}") for q in range(1, max_denominator + 1) for p in range(q + 1)}
    return sorted(fracs)
