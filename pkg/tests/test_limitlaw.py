"""Limit-law samplers: torus Haar measure, exact moments, Sato-Tate,
compact-group traces, involution-constrained sums."""

import itertools
import math

import numpy as np
import pytest

from ultrashort.arith import IntPoly
from ultrashort.errors import InvalidPairing, OutOfRangeParameter, TooLarge
from ultrashort.limitlaw import (
    MomentTable,
    exact_mixed_moment,
    haar_trace_samples,
    involution_sum_samples,
    philox_generator,
    sato_tate_samples,
    sato_tate_sum_samples,
    sigma_samples,
    torus_subgroup,
)
from ultrashort.relations import RelationModule, additive_relations
from ultrashort.stats import ks_distance


def _module(d, rows):
    from ultrashort.lattice import hnf_rows

    return RelationModule(d, tuple(tuple(r) for r in hnf_rows(rows)), "additive", {})


# ---------------------------------------------------------------------------
# torus subgroup


def test_torus_trivial_module_is_full_torus():
    h = torus_subgroup(_module(3, []))
    assert h.free_coordinates == 3
    z = h.sample(1000, 1)
    assert z.shape == (1000, 3)
    assert np.allclose(np.abs(z), 1.0, atol=1e-12)


def test_torus_all_ones_relation_determines_last_coordinate():
    h = torus_subgroup(_module(3, [[1, 1, 1]]))
    assert h.free_coordinates == 2
    assert h.invariant_factors == (1,)
    z = h.sample(2000, 5)
    assert np.abs(np.prod(z, axis=1) - 1.0).max() < 1e-12


def test_torus_factor_two_gives_sign_coordinate():
    h = torus_subgroup(_module(2, [[2, 0]]))
    assert h.invariant_factors == (2,)
    z = h.sample(4000, 9)
    first = z[:, 0]
    assert np.abs(first.imag).max() < 1e-12
    signs = np.sign(first.real)
    assert set(np.unique(signs)) == {-1.0, 1.0}
    assert abs(signs.mean()) < 0.1  # both signs drawn uniformly
    # second coordinate genuinely spreads over the circle
    assert np.abs(z[:, 1].imag).max() > 0.9


def test_torus_character_orthogonality():
    g = IntPoly.parse("X^6-1")
    module = additive_relations(g)
    h = torus_subgroup(module)
    n = 40000
    z = h.sample(n, 3)
    for row in module.basis:
        vals = np.prod(z ** np.array(row), axis=1)
        assert np.abs(vals - 1.0).max() < 1e-12
    rng = philox_generator(99, "test-offrel")
    checked = 0
    while checked < 20:
        beta = rng.integers(-3, 4, size=6)
        if not beta.any() or module.contains([int(b) for b in beta]):
            continue
        mean = np.prod(z ** beta, axis=1).mean()
        assert abs(mean) <= 5 / math.sqrt(n)
        checked += 1


def test_sigma_full_circle_mean():
    h = torus_subgroup(_module(1, []))
    batch = sigma_samples(h, 40000, 2)
    assert abs(batch.samples.mean()) <= 3 / math.sqrt(len(batch))


def test_sigma_second_moment_is_degree():
    for text in ["X^3+X+3", "X^3+2X^2+3", "X^5-1"]:
        g = IntPoly.parse(text)
        h = torus_subgroup(additive_relations(g))
        n = 100000
        batch = sigma_samples(h, n, 4)
        m2 = (np.abs(batch.samples) ** 2).mean()
        assert abs(m2 - g.degree) <= 5 * g.degree / math.sqrt(n)


def test_sigma_hypocycloid_support():
    # H = <(1,1,1)>^perp: sigma lands in {u + v + 1/(uv)}; two routes:
    # (a) z3 = 1/(z1 z2) reconstruction, (b) the companion-eigenvalue
    # criterion: lambda^3 - z lambda^2 + conj(z) lambda - 1 has unimodular
    # roots exactly on the region
    h = torus_subgroup(_module(3, [[1, 1, 1]]))
    z = h.sample(20000, 8)
    sigma = z.sum(axis=1)
    rebuilt = z[:, 0] + z[:, 1] + 1 / (z[:, 0] * z[:, 1])
    assert np.abs(sigma - rebuilt).max() < 1e-9
    comp = np.zeros((len(sigma), 3, 3), dtype=np.complex128)
    comp[:, 1, 0] = 1
    comp[:, 2, 1] = 1
    comp[:, 0, 2] = 1
    comp[:, 1, 2] = -np.conj(sigma)
    comp[:, 2, 2] = sigma
    eig = np.linalg.eigvals(comp)
    assert np.abs(np.abs(eig) - 1.0).max() < 1e-6


def test_sigma_batch_deterministic():
    h = torus_subgroup(_module(2, []))
    a = sigma_samples(h, 100, 7).samples
    b = sigma_samples(h, 100, 7).samples
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# exact mixed moments


def _brute_moment(module, m, n):
    d = module.ambient_rank
    count = 0
    for tup in itertools.product(range(d), repeat=m + n):
        w = [0] * d
        for i in tup[:m]:
            w[i] += 1
        for j in tup[m:]:
            w[j] -= 1
        if module.contains(w):
            count += 1
    return count


@pytest.mark.parametrize(
    "rows,d",
    [([], 3), ([[1, 1, 1]], 3), ([[1, -1, 0]], 3), ([[2, 0], [0, 1]], 2)],
)
def test_exact_moment_matches_brute_force(rows, d):
    module = _module(d, rows)
    for m in range(4):
        for n in range(4 - m):
            assert exact_mixed_moment(module, m, n) == _brute_moment(module, m, n)


def test_exact_moment_fixture_values():
    trivial = _module(3, [])
    allones = _module(3, [[1, 1, 1]])
    assert exact_mixed_moment(trivial, 1, 1) == 3
    assert exact_mixed_moment(allones, 1, 1) == 3
    assert exact_mixed_moment(allones, 3, 0) == 6
    assert exact_mixed_moment(trivial, 3, 0) == 0
    assert exact_mixed_moment(trivial, 2, 2) == 15


def test_exact_moment_conjugation_symmetry():
    for rows, d in [([], 3), ([[1, 1, 1]], 3), ([[1, -1, 0], [0, 2, 0]], 3)]:
        module = _module(d, rows)
        for m in range(4):
            for n in range(4 - m):
                assert exact_mixed_moment(module, m, n) == exact_mixed_moment(
                    module, n, m
                )


def test_exact_moment_too_large():
    with pytest.raises(TooLarge):
        exact_mixed_moment(_module(10, []), 5, 4)


def test_sigma_moments_match_exact_oracle():
    g = IntPoly.parse("X^3+X+3")
    module = additive_relations(g)
    h = torus_subgroup(module)
    n = 200000
    s = sigma_samples(h, n, 13).samples
    for m, k in [(1, 1), (2, 2), (3, 0), (2, 0)]:
        emp = (s**m * np.conj(s) ** k).mean()
        exact = exact_mixed_moment(module, m, k)
        bound = 6 * max(1, abs(exact)) / math.sqrt(n) + 0.05
        assert abs(emp - exact) <= bound, (m, k, emp, exact)


def test_moment_table_json():
    t = MomentTable({(1, 1): 3, (2, 0): 0})
    assert t.to_json_dict() == {"(1,1)": 3, "(2,0)": 0}


# ---------------------------------------------------------------------------
# Sato-Tate


def test_sato_tate_moments_and_support():
    n = 400000
    t = sato_tate_samples(n, 21).samples
    assert np.all(np.abs(t) <= 2.0)
    assert abs(t.mean()) <= 5 / math.sqrt(n)
    assert abs((t**2).mean() - 1.0) <= 5 / math.sqrt(n)
    assert abs((t**4).mean() - 2.0) <= 20 / math.sqrt(n)


def test_sato_tate_deterministic():
    a = sato_tate_samples(50, 5).samples
    b = sato_tate_samples(50, 5).samples
    assert np.array_equal(a, b)


def test_sato_tate_sum_components_independent():
    s = sato_tate_sum_samples(3, 200000, 17).samples
    assert np.all(np.abs(s) <= 6.0)
    assert abs((s**2).mean() - 3.0) < 0.05  # variance adds across terms


# ---------------------------------------------------------------------------
# Haar traces


def test_usp2_matches_sato_tate():
    usp = haar_trace_samples("USp(2)", 100000, 5)
    assert np.abs(usp.samples.imag).max() < 1e-12
    st = sato_tate_samples(100000, 6)
    assert ks_distance(usp.samples.real, st.samples) <= 0.01


def test_su3_trace_second_moment():
    batch = haar_trace_samples("SU(3)", 100000, 7)
    assert np.abs(batch.samples).max() <= 3.0 + 1e-9
    assert abs((np.abs(batch.samples) ** 2).mean() - 1.0) <= 0.05


def test_su_matrices_have_unit_determinant_effect():
    # SU(1) is trivial: trace always 1
    ones = haar_trace_samples(("SU", 1), 100, 3)
    assert np.allclose(ones.samples, 1.0)


def test_usp_structural_properties():
    from ultrashort.limitlaw import _usp_matrices

    rng = philox_generator(1, "structure")
    mats = _usp_matrices(4, 64, rng)
    j = np.zeros((4, 4))
    j[0, 2] = j[1, 3] = 1
    j[2, 0] = j[3, 1] = -1
    for m in mats:
        assert np.abs(np.conj(m.T) @ m - np.eye(4)).max() < 1e-12
        assert np.abs(m.T @ j @ m - j).max() < 1e-12
        assert abs(np.linalg.det(m) - 1) < 1e-12


def test_haar_trace_rejects_bad_groups():
    with pytest.raises(OutOfRangeParameter):
        haar_trace_samples("USp(3)", 10, 1)  # odd symplectic rank
    with pytest.raises(OutOfRangeParameter):
        haar_trace_samples("SU(9)", 10, 1)
    with pytest.raises(OutOfRangeParameter):
        haar_trace_samples("SO(3)", 10, 1)


# ---------------------------------------------------------------------------
# involution-constrained sums


def test_involution_fully_paired_is_real():
    batch = involution_sum_samples(2, [(0, 1)], 3, 20000, 9)
    assert np.abs(batch.samples.imag).max() < 1e-12


def test_involution_unpaired_matches_iid_sum():
    n = 150000
    a = involution_sum_samples(3, [], 3, n, 11).samples
    parts = [haar_trace_samples(("SU", 3), n, 100 + k).samples for k in range(3)]
    b = parts[0] + parts[1] + parts[2]
    assert abs((np.abs(a) ** 2).mean() - (np.abs(b) ** 2).mean()) <= 5 * 3 / math.sqrt(n)
    assert abs(a.mean() - b.mean()) <= 5 / math.sqrt(n)


def test_involution_pair_agrees_with_direct_pipeline():
    # pipeline A: the involution sampler; pipeline B: 2*Re(Tr M) directly
    from ultrashort.limitlaw import _su_traces

    n = 150000
    a = involution_sum_samples(2, [(0, 1)], 3, n, 12).samples.real
    rng = philox_generator(55, "direct")
    b = 2 * _su_traces(3, n, rng).real
    assert abs((a**2).mean() - (b**2).mean()) <= 0.05
    assert ks_distance(a, b) <= 0.02


def test_involution_invalid_pairings():
    with pytest.raises(InvalidPairing):
        involution_sum_samples(3, [(0, 0)], 3, 10, 1)
    with pytest.raises(InvalidPairing):
        involution_sum_samples(3, [(0, 1), (1, 2)], 3, 10, 1)
    with pytest.raises(InvalidPairing):
        involution_sum_samples(2, [(0, 5)], 3, 10, 1)


def test_philox_streams_are_split():
    a = philox_generator(1, "op", 0).random(5)
    b = philox_generator(1, "op", 1).random(5)
    c = philox_generator(1, "other", 0).random(5)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(a, philox_generator(1, "op", 0).random(5))
