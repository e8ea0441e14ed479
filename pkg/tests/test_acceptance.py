"""Acceptance suite: one recorded pass/fail line per criterion.

Each test computes its figures, records a summary line through the
``acceptance`` fixture (collected again in the terminal summary) and then
asserts, so a failing criterion is both reported and red.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from channel_limits import bounds
from channel_limits.cli import main
from channel_limits.partitions import (
    H_PLANCK,
    capacity_boson_asym,
    capacity_bound,
    capacity_coefficient,
    capacity_fermion_asym,
    capacity_ratio_curve,
    count_partitions,
    log_asymptotic_distinct_count,
)
from channel_limits.qinfo import (
    bounce_scenario,
    generalized_holevo2_check,
    max_entropy_attainment,
    mutual_information,
    povm_channel,
    random_density,
    random_ensemble,
    random_povm,
    random_two_way_channel,
    two_way_info_interference,
    verify_holevo,
    von_neumann_entropy,
)
from channel_limits.transport import ChannelSetup, Reservoir, fermion_sommerfeld_currents, net_currents, side_currents
from sympy.utilities.iterables import partitions as sympy_partitions

from conftest import cached_count


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def test_criterion_01_boson_closed_forms(acceptance):
    start = time.perf_counter()
    side = side_currents(Reservoir(1.0, 0.0), 0)
    elapsed = time.perf_counter() - start
    e_err, s_err = rel(side.energy, math.pi / 12), rel(side.entropy, math.pi / 6)
    ok = e_err <= 1e-9 and s_err <= 1e-9 and elapsed < 1.0
    acceptance(1, "boson closed forms", ok,
               f"energy relerr {e_err:.1e}, entropy relerr {s_err:.1e}, {elapsed:.3f} s")
    assert ok


def test_criterion_02_general_bound_sweep(acceptance):
    start = time.perf_counter()
    points = bounds.randomized_sweep(10_000, seed=20240)
    errors = [p for p in points if p.error]
    ratios = [p.general.ratio for p in points if not p.error]
    ratios += [p.tight.ratio for p in points if p.tight is not None]
    g_seen = {p.setup.g for p in points}
    families = {
        "bose mu=-1e-4 T": bounds.degenerate_family("bose-mu", 0, 1e-4).ratio,
        "bose mu=0 cold right": bounds.degenerate_family("bose-zero", 0, 0.0).ratio,
    }
    for g in bounds.SWEEP_G_VALUES:
        if not g.is_bose:
            families[f"g={g} mu=100 T"] = bounds.degenerate_family("degenerate", g, 100.0).ratio
    elapsed = time.perf_counter() - start
    worst = max(ratios)
    weakest = min(families.values())
    ok = (not errors and len(ratios) >= 10_000 and len(g_seen) == 8
          and worst <= 1.0 + bounds.SLACK and weakest >= 0.99 and elapsed < 120.0)
    acceptance(2, "general bound never violated", ok,
               f"{len(points)} setups over {len(g_seen)} g values, max ratio {worst:.12f}, "
               f"{len(errors)} errors, weakest family extreme {weakest:.6f}, {elapsed:.1f} s")
    assert ok


def test_criterion_03_tight_bound_equality(acceptance):
    ratios = np.linspace(0.0, 1.0, 22)[1:-1]
    values = [bounds.bound_ratio_tight(ChannelSetup.make(0, 1.0, r, 0.0)).ratio for r in ratios]
    dev = max(abs(v - 1.0) for v in values)
    ok = len(values) == 20 and dev <= 1e-8
    acceptance(3, "tight bound equality for bosons at mu = 0", ok,
               f"{len(values)} temperature ratios, max |ratio - 1| {dev:.1e}")
    assert ok


def test_criterion_04_energy_variant_exceeds_one(acceptance):
    setup = ChannelSetup.make(0, 1.0, 0.5, -0.05)
    variant = bounds.tight_ratio_with_energy(setup)
    heat = bounds.bound_ratio_tight(setup).ratio
    ok = variant > 1.0 and heat <= 1.0 + bounds.SLACK
    acceptance(4, "energy in place of heat breaks the tight bound", ok,
               f"mu=-0.05, TR=0.5 TL: energy variant {variant:.6f}, heat ratio {heat:.6f}")
    assert ok


def test_criterion_05_conductance_quantum(acceptance):
    boson = bounds.thermal_conductance(0, 0.0, 1.0, 1e-3)
    fermion = bounds.thermal_conductance(1, 50.0, 1.0, 1e-3)
    factor = bounds.irreversibility_factor(1.0)
    e1, e2, e3 = rel(boson, math.pi / 6), rel(fermion, math.pi / 6), abs(factor - 0.5)
    ok = e1 <= 1e-9 and e2 <= 0.01 and e3 <= 1e-8
    acceptance(5, "thermal conductance quantum", ok,
               f"boson relerr {e1:.1e}, g=1 mu=50 relerr {e2:.1e}, |factor - 1/2| {e3:.1e}")
    assert ok


def test_criterion_06_sommerfeld_oracle(acceptance):
    rng = np.random.default_rng(606)
    worst = 0.0
    for _ in range(100):
        tl, tr = rng.uniform(0.05, 3.0, 2)
        ml, mr = rng.uniform(-10.0, 60.0, 2)
        setup = ChannelSetup.make(1, tl, tr, ml, mr)
        e, s = fermion_sommerfeld_currents(setup)
        cur = net_currents(setup)
        worst = max(worst, rel(e, cur.net_energy), rel(s, cur.net_entropy))
    ok = worst <= 1e-8
    acceptance(6, "particle-hole fermion route agrees", ok, f"100 setups, max relerr {worst:.1e}")
    assert ok


def test_criterion_07_capacity_coefficients(acceptance):
    start = time.perf_counter()
    c0 = capacity_coefficient(0)
    r1 = capacity_coefficient(1) / c0
    r_half = capacity_coefficient(Fraction(1, 2)) / c0
    curve = capacity_ratio_curve([Fraction(k, 8) for k in range(9)])
    values = [r for _, r in curve]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    elapsed = time.perf_counter() - start
    e1, e2 = abs(r1 - 1 / math.sqrt(2)), abs(r_half - math.sqrt(3 / 5))
    ok = e1 <= 1e-6 and e2 <= 1e-6 and decreasing and len(values) == 9 and elapsed < 60.0
    acceptance(7, "capacity coefficients", ok,
               f"|c1/c0 - 1/sqrt2| {e1:.1e}, |c1/2/c0 - sqrt(3/5)| {e2:.1e}, "
               f"strictly decreasing on 9 points: {decreasing}, {elapsed:.2f} s")
    assert ok


def test_criterion_08_partition_asymptotics(acceptance):
    exact = count_partitions(10_000, 1, method="dp")
    log_exact = math.log(exact)
    err = abs(log_asymptotic_distinct_count(10_000) - log_exact) / log_exact
    mismatches = []
    for n in range(31):
        parts = list(sympy_partitions(n)) if n else [{}]
        p = sum(1 for _ in parts)
        q = sum(1 for d in parts if not d or max(d.values()) == 1)
        if count_partitions(n) != p or count_partitions(n, 1) != q:
            mismatches.append(n)
    ok = err < 0.005 and not mismatches
    acceptance(8, "distinct-part asymptotics and brute force", ok,
               f"log relerr at N=1e4 {err:.2e}, brute-force mismatches for N<=30: {len(mismatches)}")
    assert ok


def test_criterion_09_capacity_consistency(acceptance):
    n, t = 10_000, 1.0
    power = n * H_PLANCK / t ** 2
    boson, fermion = capacity_boson_asym(power, t), capacity_fermion_asym(power, t)
    exact_b = math.log2(cached_count(n)) / t
    exact_f = math.log2(cached_count(n, 1)) / t
    bound = capacity_bound(power)
    eb, ef = rel(boson.bits_per_time, exact_b), rel(fermion.bits_per_time, exact_f)
    ok = eb <= 0.01 and ef <= 0.01 and boson.bits_per_time < bound and fermion.bits_per_time < bound
    acceptance(9, "asymptotic capacities match counts", ok,
               f"boson relerr {eb:.2e}, fermion relerr {ef:.2e}, "
               f"{boson.bits_per_time:.3f} and {fermion.bits_per_time:.3f} < bound {bound:.3f}")
    assert ok


def test_criterion_10_holevo_suites(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(1010)
    holevo_fail = 0
    for _ in range(10_000):
        dim = int(rng.integers(2, 7))
        ens = random_ensemble(dim, int(rng.integers(2, 6)), rng)
        povm = random_povm(dim, int(rng.integers(2, 7)), rng)
        holevo_fail += not verify_holevo(ens, povm).holds
    two_way_fail = 0
    for _ in range(1_000):
        ch = random_two_way_channel(int(rng.integers(2, 4)), int(rng.integers(2, 4)), rng)
        two_way_fail += not generalized_holevo2_check(ch).holds
    worst = 0.0
    for dim in range(2, 9):
        for _ in range(20):
            rho = random_density(dim, rng)
            ens, povm = max_entropy_attainment(rho)
            info = mutual_information(povm_channel(ens, povm), ens.probs)
            worst = max(worst, abs(info - von_neumann_entropy(rho)))
    elapsed = time.perf_counter() - start
    ok = holevo_fail == 0 and two_way_fail == 0 and worst <= 1e-9 and elapsed < 120.0
    acceptance(10, "Holevo suites", ok,
               f"Holevo violations {holevo_fail}/10000, two-way violations {two_way_fail}/1000, "
               f"attainment gap {worst:.1e} up to dim 8, {elapsed:.1f} s")
    assert ok


def test_criterion_11_bounced_message(acceptance):
    worst = 0.0
    cases = 0
    for n in (2, 3, 4):
        uniform = np.full(n, 1.0 / n)
        skewed = np.arange(1, n + 1, dtype=float)
        skewed /= skewed.sum()
        peaked = np.full(n, 0.05 / (n - 1))
        peaked[0] = 0.95
        for prior in (uniform, skewed, peaked):
            worst = max(worst, abs(two_way_info_interference(bounce_scenario(n, prior))))
            cases += 1
    ok = cases == 9 and worst <= 1e-10
    acceptance(11, "bounced message carries nothing", ok, f"{cases} cases, max |info| {worst:.1e}")
    assert ok


@pytest.mark.parametrize("command", ["fig1", "fig2", "fig3", "fig4"])
def test_criterion_12_cli_determinism(command, tmp_path, acceptance):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [main([command, "--seed", "5", "--out", str(path)]) for path in (a, b)]
    same = a.read_bytes() == b.read_bytes()
    ok = codes == [0, 0] and same
    acceptance(12, f"CLI determinism ({command})", ok, f"exit codes {codes}, byte-identical: {same}")
    assert ok
