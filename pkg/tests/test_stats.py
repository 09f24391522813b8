"""Statistical instruments: exact moment/stationarity checks, KS, binned L1,
conditioning experiments."""

import math

import numpy as np
import pytest
import scipy.stats

from ultrashort.arith import IntPoly, find_split_primes
from ultrashort.limitlaw import exact_mixed_moment, philox_generator
from ultrashort.relations import additive_relations
from ultrashort.stats import (
    binned_l1_2d,
    conditioning_experiment,
    empirical_mixed_moment,
    ks_distance,
    moment_table,
    stationarity_report,
)
from ultrashort.sums import additive_sum_grid, make_condition_set


def test_empirical_moment_is_integer_times_q_on_full_grids():
    g = IntPoly.parse("X^3+X+3")
    q = find_split_primes(g, 1000, 2000)[0]
    grid = additive_sum_grid(g, q)
    for m in range(4):
        for n in range(4 - m):
            scaled = q * empirical_mixed_moment(grid, m, n)
            assert abs(scaled - round(scaled)) < 1e-4


def test_empirical_moments_match_exact_oracle():
    g = IntPoly.parse("X^3+X+3")
    module = additive_relations(g)
    q = find_split_primes(g, 5000, 9000)[0]
    grid = additive_sum_grid(g, q)
    table = moment_table(grid, 4)
    for (m, n), emp in table.items():
        assert abs(emp - exact_mixed_moment(module, m, n)) < 1e-3, (m, n)


def test_stationarity_report_fixture():
    g = IntPoly.parse("X^5-1")
    rep = stationarity_report(g, [11, 31, 41], [[1, 1, 1, 1, 1], [1, 0, 0, 0, 0]])
    assert rep["disagreement_count"] == 0
    weyls = {(e["q"], tuple(e["alpha"])): e["weyl"] for e in rep["entries"]}
    for q in (11, 31, 41):
        assert weyls[q, (1, 1, 1, 1, 1)] == 1
        assert weyls[q, (1, 0, 0, 0, 0)] == 0


def test_stationarity_random_non_relations():
    g = IntPoly.parse("X^3+X+3")
    module = additive_relations(g)
    rng = philox_generator(2024, "nonrel")
    alphas = []
    while len(alphas) < 10:
        a = [int(x) for x in rng.integers(-2, 3, size=3)]
        if sum(map(abs, a)) == 0 or sum(map(abs, a)) > 4:
            continue
        if module.contains(a):
            continue
        alphas.append(a)
    primes = find_split_primes(g, 1000, 6000)[:10]
    rep = stationarity_report(g, primes, alphas, module)
    assert rep["disagreement_count"] == 0


def test_ks_distance_basic():
    assert ks_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    assert ks_distance([0.0] * 5, [1.0] * 5) == 1.0
    a = np.linspace(0, 1, 100)
    b = np.linspace(0, 1, 377) ** 2
    d1, d2 = ks_distance(a, b), ks_distance(b, a)
    assert d1 == d2
    assert 0.0 <= d1 <= 1.0


def test_ks_distance_matches_scipy():
    rng = philox_generator(3, "ks")
    a = rng.normal(size=800)
    b = rng.normal(size=1234) * 1.1 + 0.05
    ours = ks_distance(a, b)
    ref = scipy.stats.ks_2samp(a, b).statistic
    assert abs(ours - ref) < 1e-12


def test_binned_l1_basic():
    rng = philox_generator(4, "l1")
    z = rng.normal(size=500) + 1j * rng.normal(size=500)
    assert binned_l1_2d(z, z, 10) == 0.0
    w = rng.normal(size=500) + 1j * rng.normal(size=500)
    d1 = binned_l1_2d(z, w, 10)
    assert abs(d1 - binned_l1_2d(w, z, 10)) < 1e-12
    assert 0.0 <= d1 <= 1.0
    tight = 0.2 * z  # well inside the square, no edge-bin overlap after clip
    assert binned_l1_2d(tight, tight + 100, 10, bound=3) == 1.0
    with pytest.raises(ValueError):
        binned_l1_2d(z, w, 3)


def test_conditioning_full_set_reduces_to_exact_weyl():
    g = IntPoly.parse("X^3+X+3")
    q = find_split_primes(g, 1000, 2000)[0]
    full = make_condition_set(q, 1, "full")
    rep = conditioning_experiment(g, q, 1, full, [[1, 0, 0], [1, 1, 1]])
    by_alpha = {tuple(e["alpha"]): e for e in rep["weyl"]}
    assert by_alpha[1, 0, 0]["value_re"] == 0.0 and not by_alpha[1, 0, 0]["in_Rg"]
    assert by_alpha[1, 1, 1]["value_re"] == 1.0 and by_alpha[1, 1, 1]["in_Rg"]
    assert rep["uniformity_metric"] < 1e-12


def test_conditioning_quadratic_residue_image_bound():
    g = IntPoly.parse("X^3+2X^2+3")
    q = find_split_primes(g, 10000, 12000)[0]
    image = make_condition_set(q, 1, "image:X^2")
    rep = conditioning_experiment(g, q, 1, image, [[1, 0, 0], [0, 1, 1], [2, -1, 0]])
    for entry in rep["weyl"]:
        if not entry["in_Rg"]:
            mod = abs(complex(entry["value_re"], entry["value_im"]))
            assert mod <= 5 / math.sqrt(q)
    assert rep["moments"]["second_abs"] > 0


def test_conditioning_interval_detects_non_equidistribution():
    # ind(g) = 1 and gamma((1,1,1)) = -1: the interval-restricted Weyl sum
    # stays near 2/pi instead of vanishing
    g = IntPoly.parse("X^3+X^2+2X+1")
    q = find_split_primes(g, 30000, 40000)[0]
    half = make_condition_set(q, 1, "interval:0.5")
    rep = conditioning_experiment(g, q, 1, half, [[1, 1, 1]])
    assert abs(rep["uniformity_metric"] - 2 / math.pi) < 0.01
    entry = rep["weyl"][0]
    assert abs(abs(complex(entry["value_re"], entry["value_im"])) - 2 / math.pi) < 0.02
