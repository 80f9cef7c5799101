import cmath
import math

import numpy as np
import pytest

from specbound.bounds import support_bound
from specbound.dyck import enumerate_trees
from specbound.errors import (
    ConvergenceError,
    DomainError,
    InputError,
    OverflowGuardError,
)
from specbound.linalg import VarianceMatrix, exp_profile, wigner_profile
from specbound.qve import (
    MomentTable,
    SpectralProbe,
    SupportEstimate,
    density,
    density_scan,
    estimate_support,
    moment_recursion,
    solve_qve,
    support_from_moments,
)
from specbound.treeval import tree_val_vector

# i (sqrt(2) - 1): Stieltjes transform of the semicircle law at z = 2i
WIGNER_M_AT_2I = 0.4142135623730950488j
# i (sqrt(13) - 3) / 2: the constant-row-sum reduction at z = 3i
BLOCK_M_AT_3I = 0.3027756377319946466j
INV_PI = 0.3183098861837906715


def scalar_semicircle(z, r=1.0):
    """Root of r m^2 + z m + 1 = 0 with positive imaginary part."""
    for sign in (1, -1):
        m = (-z + sign * cmath.sqrt(z * z - 4 * r)) / (2 * r)
        if m.imag > 0:
            return m
    raise AssertionError("no upper-half-plane root")


def seeded_profile(n, seed=0, scale=None):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n))
    return VarianceMatrix((a + a.T) / 2 * (scale if scale is not None else 1.0 / n))


# ------------------------------------------------------------------ solver

def test_constant_profile_matches_semicircle_at_2i():
    probe = solve_qve(wigner_profile(12), 2j, tol=1e-12, max_iter=50_000)
    assert isinstance(probe, SpectralProbe)
    np.testing.assert_allclose(probe.m, np.full(12, WIGNER_M_AT_2I), atol=1e-11)
    assert probe.residual <= 1e-12
    assert np.all(probe.m.imag > 0)


def test_zero_profile_gives_minus_inverse_z():
    s = VarianceMatrix(np.zeros((4, 4)))
    probe = solve_qve(s, 1.5 + 0.5j, tol=1e-14, max_iter=100)
    np.testing.assert_allclose(probe.m, np.full(4, -1 / (1.5 + 0.5j)), rtol=1e-14)


def test_two_by_two_block_profile_frozen_value():
    s = VarianceMatrix(np.array([[0.3, 0.7], [0.7, 0.3]]))
    probe = solve_qve(s, 3j, tol=1e-13, max_iter=50_000)
    np.testing.assert_allclose(probe.m, np.full(2, BLOCK_M_AT_3I), atol=1e-12)
    # independent route: constant row sums collapse the system to a
    # scalar quadratic solved by the formula
    np.testing.assert_allclose(probe.m, np.full(2, scalar_semicircle(3j)), atol=1e-12)


@pytest.mark.parametrize("z", [2.5j, 1.0 + 1.0j, -0.7 + 0.3j, 4.0 + 0.01j])
def test_reported_residual_is_the_true_defect(z):
    s = exp_profile(30)
    probe = solve_qve(s, z, tol=1e-10, max_iter=100_000)
    defect = np.abs(probe.m + 1.0 / (z + s.entries @ probe.m)).max()
    assert defect <= 1e-10
    assert probe.residual <= 1e-10
    assert np.all(probe.m.imag > 0)
    assert probe.iterations >= 1


def test_solver_deep_inside_support_small_eta():
    # hardest regime: tiny imaginary part inside the spectrum
    s = exp_profile(60)
    z = 0.5 + 1e-4j
    probe = solve_qve(s, z, tol=1e-9, max_iter=300_000)
    defect = np.abs(probe.m + 1.0 / (z + s.entries @ probe.m)).max()
    assert defect <= 1e-9
    assert np.all(probe.m.imag > 0)


def test_solver_symmetry_in_z():
    s = exp_profile(40)
    for z in (1.5 + 0.01j, 0.3 + 0.2j, 2.2 + 1e-3j):
        left = solve_qve(s, complex(-z.real, z.imag), tol=1e-11, max_iter=200_000)
        right = solve_qve(s, z, tol=1e-11, max_iter=200_000)
        np.testing.assert_allclose(left.m, -np.conj(right.m), atol=1e-9)


def test_solver_domain_and_convergence_errors():
    s = wigner_profile(5)
    with pytest.raises(DomainError):
        solve_qve(s, 2.0 + 0j)
    with pytest.raises(DomainError):
        solve_qve(s, 1 - 1j)
    with pytest.raises(ConvergenceError) as err:
        solve_qve(s, 0.1 + 1e-6j, tol=1e-14, max_iter=3)
    assert err.value.residual > 0
    assert err.value.iterations == 3


# ----------------------------------------------------------------- density

def test_semicircle_density_at_center():
    val = density(wigner_profile(8), 0.0, eta=1e-4)
    assert abs(val - INV_PI) < 1e-3


def test_semicircle_density_outside_support():
    assert density(wigner_profile(8), 3.0, eta=1e-4) < 1e-3


@pytest.mark.parametrize("tau", [0.5, 1.0, 1.5])
def test_semicircle_density_profile(tau):
    val = density(wigner_profile(8), tau, eta=1e-4)
    assert abs(val - math.sqrt(4 - tau**2) / (2 * math.pi)) < 1.5e-3


def test_density_is_nonnegative_on_a_grid():
    s = exp_profile(25)
    taus = np.linspace(0, 5, 41)
    vals = density_scan(s, taus, eta=1e-3)
    assert np.all(vals >= 0)


def test_density_integrates_to_one():
    s = exp_profile(30)
    top = support_bound(s, J=10).trivial_bound
    taus = np.arange(-top - 0.5, top + 0.5, 0.01)
    vals = density_scan(s, taus, eta=1e-3)
    mass = vals.sum() * 0.01
    assert abs(mass - 1.0) < 0.02


def test_density_scan_matches_single_point_calls():
    s = exp_profile(20)
    taus = np.array([0.0, 1.0, 2.5, 4.0])
    vals = density_scan(s, taus, eta=1e-2)
    for t, v in zip(taus, vals):
        assert v == pytest.approx(density(s, float(t), eta=1e-2), abs=1e-6)


# ---------------------------------------------------------------- support

def test_support_estimate_semicircle_edge():
    est = estimate_support(wigner_profile(8))
    assert isinstance(est, SupportEstimate)
    assert est.found
    assert abs(est.value - 2.0) < 0.05


def test_support_estimate_zero_profile_not_found():
    est = estimate_support(VarianceMatrix(np.zeros((6, 6))))
    assert est.value == 0.0
    assert not est.found


def test_support_estimate_stays_below_improved_bound():
    for s in (wigner_profile(8), exp_profile(100), seeded_profile(60, seed=7)):
        est = estimate_support(s)
        rep = support_bound(s, J=50)
        assert est.found
        assert est.value <= rep.improved_bound + est.grid_step


def test_support_estimate_exponential_profile_window():
    # the n=100 profile has nearly the same continuum limit as larger
    # sizes, so the edge must land in a narrow window below the bound
    est = estimate_support(exp_profile(100))
    assert est.found
    assert 3.5 <= est.value <= 3.75


def test_support_estimate_respects_grid_parameters():
    est = estimate_support(wigner_profile(8), grid_step=0.01)
    assert est.grid_step == 0.01
    assert abs(est.value - 2.0) < 0.06
    assert est.value == pytest.approx(round(est.value / 0.01) * 0.01, abs=1e-9)


# ----------------------------------------------------------------- moments

def test_constant_profile_moments_are_catalan():
    table = moment_recursion(wigner_profile(8), kmax=5)
    assert isinstance(table, MomentTable)
    for x in range(8):
        assert [table.c[x, k] for k in range(6)] == [1, 1, 2, 5, 14, 42]


def test_first_moment_is_row_sum():
    s = seeded_profile(6, seed=2, scale=1.0)
    table = moment_recursion(s, kmax=1)
    np.testing.assert_allclose(table.c[:, 1], s.entries.sum(axis=1), rtol=1e-14)


def test_moment_table_invariants():
    s = exp_profile(12)
    table = moment_recursion(s, kmax=8)
    np.testing.assert_array_equal(table.c[:, 0], np.ones(12))
    assert np.all(table.c >= 0)
    assert table.kmax == 8
    with pytest.raises(InputError):
        moment_recursion(s, kmax=-1)


@pytest.mark.parametrize("n,seed", [(6, 0), (6, 1), (8, 5)])
def test_moments_equal_tree_value_sums(n, seed):
    """Exhaustive tree enumeration must reproduce the recursion: the
    k-th moment is the sum of the values of all plane trees with k
    edges, for every root label."""
    s = seeded_profile(n, seed=seed, scale=0.8)
    table = moment_recursion(s, kmax=6)
    for k in range(7):
        total = np.zeros(n)
        for t in enumerate_trees(k):
            total += tree_val_vector(s, t)
        np.testing.assert_allclose(table.c[:, k], total, rtol=1e-10)


def test_moment_overflow_guard():
    s = VarianceMatrix(np.full((3, 3), 1e80))
    with pytest.raises(OverflowGuardError):
        moment_recursion(s, kmax=5)


def test_support_proxy_constant_profile_frozen():
    table = moment_recursion(wigner_profile(8), kmax=20)
    val = support_from_moments(table, kmax=20)
    # Catalan(20) ** (1/40)
    assert val == pytest.approx(1.759662640052093, abs=1e-12)
    assert val == pytest.approx(6564120420 ** (1 / 40), abs=1e-13)


def test_support_proxy_kmax_one_is_sqrt_norm():
    s = seeded_profile(10, seed=4)
    table = moment_recursion(s, kmax=3)
    assert support_from_moments(table, kmax=1) == pytest.approx(
        math.sqrt(s.entries.sum(axis=1).max())
    )


def test_support_proxy_increases_toward_edge():
    s = exp_profile(60)
    table = moment_recursion(s, kmax=30)
    lo = support_from_moments(table, kmax=10)
    hi = support_from_moments(table, kmax=30)
    assert hi > lo
    est = estimate_support(s)
    assert hi <= est.value + 0.05


def test_support_proxy_defaults_to_table_depth():
    table = moment_recursion(wigner_profile(4), kmax=7)
    assert support_from_moments(table) == support_from_moments(table, kmax=7)
    with pytest.raises(InputError):
        support_from_moments(table, kmax=9)
    with pytest.raises(InputError):
        support_from_moments(table, kmax=0)
