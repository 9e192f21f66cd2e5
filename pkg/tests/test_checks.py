"""Verification layer: planarity, Gauss identity, curvature, memberships."""

import numpy as np
import pytest

import oracles
from minlab import catalog, checks, nullgeom, wrep
from minlab.errors import ParamRange, SignMismatch
from minlab.wrep import DataParts, WeierstrassData, conjugate, integrate


def zsq_data():
    """Non-normalized control data: first component z^2, second constant 1."""
    f1 = lambda u: np.ones_like(np.asarray(u, dtype=float))
    f0 = lambda u: np.zeros_like(np.asarray(u, dtype=float))
    return WeierstrassData(
        h=None, eta=None, domain=(-1.0, 1.0, -1.0, 1.0), basepoint=(0.0, 0.0),
        parts=DataParts(
            hp=lambda u: np.asarray(u) ** 2, hm=lambda v: np.asarray(v) ** 2,
            ep=f1, em=f1,
            hp1=lambda u: 2.0 * np.asarray(u), hm1=lambda v: 2.0 * np.asarray(v),
            ep1=f0, em1=f0,
            hp2=lambda u: np.full_like(np.asarray(u, dtype=float), 2.0),
            hm2=lambda v: np.full_like(np.asarray(v, dtype=float), 2.0),
            ep2=f0, em2=f0,
        ), name="zsq-control")


def mixed_sign_data():
    """Normalized data whose generators have curvatures of opposite sign.

    The plus side copies the exponential class (kappa = -1), the minus side
    the trigonometric class (kappa = +4); the differential is still the
    constant -1/2 on both null components, so the surface is minimal and
    conformal but cannot have planar curvature lines.
    """
    return WeierstrassData(
        h=None, eta=None, domain=(-0.45, 0.45, -0.45, 0.45), basepoint=(0.0, 0.0),
        parts=DataParts(
            hp=np.exp, hm=np.tan,
            ep=lambda u: 0.5 * np.exp(-u), em=lambda v: 0.5 * np.cos(v) ** 2,
            hp1=np.exp, hm1=lambda v: 1.0 / np.cos(v) ** 2,
            ep1=lambda u: -0.5 * np.exp(-u), em1=lambda v: -0.5 * np.sin(2.0 * v),
            hp2=np.exp, hm2=lambda v: 2.0 * np.tan(v) / np.cos(v) ** 2,
            ep2=lambda u: 0.5 * np.exp(-u), em2=lambda v: -np.cos(2.0 * v),
        ), name="mixed-sign")


def class_grid(tag, n=31, **params):
    data = catalog.weierstrass_data(catalog.surface_class(tag, **params))
    return integrate(data, n, n), data


ALL_CLASSES = [
    ("P", {}), ("C_T", {}), ("B_Tper", {"c1t": 2.0}), ("E", {}),
    ("B_T1", {"c2": 2.0}), ("B_L1", {}), ("B_S", {"c2": 0.5}), ("C_S2", {}),
    ("C_S1", {}), ("B_L2", {}), ("B_T2", {"c4": 1.0}),
    ("C_L", {}), ("C_L_assoc", {"phi": 0.5}),
]


# ---------------------------------------------------------------------------
# planarity
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("tag,params", ALL_CLASSES)
def test_planarity_passes_on_catalog(tag, params):
    grid, _ = class_grid(tag, **params)
    rep = checks.planar_curvature_lines(grid)
    assert rep.passed, str(rep)
    assert rep.max_residual < 1e-4


def test_planarity_fails_on_zsq_control():
    rep = checks.planar_curvature_lines(integrate(zsq_data(), 50, 50))
    assert not rep.passed
    assert rep.max_residual > 1e-2      # 100x the tolerance


def test_planarity_fails_on_mixed_sign_surface():
    rep = checks.planar_curvature_lines(integrate(mixed_sign_data(), 31, 31))
    assert not rep.passed
    assert rep.max_residual > 1e-3      # at least 10x the tolerance


def test_planarity_report_shape():
    grid, _ = class_grid("C_T", n=31)
    rep = checks.planar_curvature_lines(grid)
    assert str(rep).startswith("PASS planar-curvature-lines")
    assert rep.samples + rep.excluded == 31 * 31
    assert rep.details["rho_xy_max"] < 1e-6


# ---------------------------------------------------------------------------
# Gauss identity
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,params,bound", [
    ("1a", {"c": 2.0, "d": 1.0}, 1e-10),
    ("1a", {"c": 0.0, "d": 4.0}, 1e-10),
    ("1b", {"c": 4.0, "d": 3.0}, 1e-10),
    ("1c", {"c": 0.0, "d": -1.0}, 1e-6),
    ("1d", {"c": -1.0, "d": -2.0}, 1e-6),
    ("2", {"phi": 0.5}, 1e-12),
])
def test_gauss_identity_for_profile_solutions(case, params, bound):
    sol = catalog.conformal_solution(case, params)
    rep = checks.gauss_equation(sol=sol)
    assert rep.passed, str(rep)
    assert rep.max_residual < bound


@pytest.mark.parametrize("case,params", [
    ("1a", {"c": 2.0, "d": 1.0}),
    ("1d", {"c": -1.0, "d": -2.0}),
])
def test_gauss_identity_fd_oracle(case, params):
    # independent route: 7-point finite differences of the profile rho
    sol = catalog.conformal_solution(case, params)
    for (x, y) in [(0.31, -0.17), (-0.42, 0.55), (0.6, 0.6)]:
        r = float(sol.rho(x, y))
        rx = oracles.fd1_at(lambda t: float(sol.rho(t, y)), x)
        ry = oracles.fd1_at(lambda t: float(sol.rho(x, t)), y)
        rxx = oracles.fd2_at(lambda t: float(sol.rho(t, y)), x)
        ryy = oracles.fd2_at(lambda t: float(sol.rho(x, t)), y)
        resid = r * (rxx - ryy) - (rx ** 2 - ry ** 2) - 1.0
        assert abs(resid) < 1e-6


@pytest.mark.parametrize("tag,params", [("C_T", {}), ("B_T2", {"c4": 1.0}),
                                        ("P", {})])
def test_gauss_identity_on_grids(tag, params):
    grid, _ = class_grid(tag, n=50, **params)
    rep = checks.gauss_equation(grid=grid)
    assert rep.passed, str(rep)


def test_gauss_corrupted_rho_fails():
    grid, _ = class_grid("C_T", n=50)
    rep = checks.gauss_equation(grid=grid, rho_override=grid.rho + 0.01)
    assert not rep.passed
    assert rep.max_residual > 1e-3


def test_gauss_requires_input():
    with pytest.raises(ParamRange):
        checks.gauss_equation()


def test_gauss_holds_for_any_data_with_its_own_differential():
    # the identity with the data's |Q| on the right holds beyond the catalog
    rep = checks.gauss_equation(grid=integrate(zsq_data(), 41, 41), tol=1e-5)
    assert rep.passed, str(rep)


# ---------------------------------------------------------------------------
# Gaussian curvature
# ---------------------------------------------------------------------------

def test_gaussian_curvature_negative_on_catalog():
    grid, _ = class_grid("C_T", n=41)
    K, mask = checks.gaussian_curvature(grid)
    assert np.all(K[mask] < 0.0)
    assert np.all(np.isfinite(K[mask]))
    # closed form: K * rho^4 = -1 for normalized data
    assert np.max(np.abs(K[mask] * grid.rho[mask] ** 4 + 1.0)) < 1e-10


def test_gaussian_curvature_dual_route_agreement():
    for tag, params in [("C_T", {}), ("B_T2", {"c4": 1.0}), ("C_L", {})]:
        grid, _ = class_grid(tag, n=31, **params)
        K1, m1 = checks.gaussian_curvature(grid)
        K2, m2 = checks.gaussian_curvature_from_jets(grid)
        m = m1 & m2
        assert np.any(m)
        rel = np.abs(K1[m] - K2[m]) / np.maximum(1.0, np.abs(K1[m]))
        assert np.max(rel) < 1e-9


def test_gaussian_curvature_flips_sign_under_conjugation():
    grid, data = class_grid("C_S1", n=31)
    K, mask = checks.gaussian_curvature(grid)
    Kc, maskc = checks.gaussian_curvature(integrate(conjugate(data), 31, 31))
    assert np.all(K[mask] < 0.0)
    assert np.all(Kc[maskc] > 0.0)


def test_quasi_umbilic_detection():
    # q+ = -1 everywhere, q- = -2v: the differential is null on v = 0 only
    f1 = lambda u: np.ones_like(np.asarray(u, dtype=float))
    f0 = lambda u: np.zeros_like(np.asarray(u, dtype=float))
    data = WeierstrassData(
        h=None, eta=None, domain=(-0.4, 0.4, -0.4, 0.4), basepoint=(0.0, 0.0),
        parts=DataParts(
            hp=lambda u: np.asarray(u, dtype=float), hm=lambda v: np.asarray(v) ** 2,
            ep=f1, em=f1, hp1=f1, hm1=lambda v: 2.0 * np.asarray(v),
            ep1=f0, em1=f0, hp2=f0,
            hm2=lambda v: np.full_like(np.asarray(v, dtype=float), 2.0),
            ep2=f0, em2=f0,
        ), name="quasi-umbilic-control")
    grid = integrate(data, 21, 21)
    qmask = checks.quasi_umbilic_mask(grid)
    V = grid.xs[:, None] - grid.ys[None, :]
    assert np.any(qmask)
    assert np.array_equal(qmask, np.abs(V) < 1e-10)
    K, kmask = checks.gaussian_curvature(grid)
    assert np.max(np.abs(K[qmask & kmask])) == 0.0   # flat points

    grid_ct, _ = class_grid("C_T", n=21)
    assert not np.any(checks.quasi_umbilic_mask(grid_ct))


# ---------------------------------------------------------------------------
# normalization / constancy diagnostics and negative controls
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("tag,params", ALL_CLASSES)
def test_hopf_constancy_catalog(tag, params):
    data = catalog.weierstrass_data(catalog.surface_class(tag, **params))
    expect = 0.0 if tag == "P" else -0.5
    rep = checks.hopf_constancy(data, expect=expect)
    assert rep.passed, str(rep)


def test_hopf_constancy_fails_after_perturbation():
    data = catalog.weierstrass_data(catalog.surface_class("C_S1"))
    rep = checks.hopf_constancy(checks.perturb_data(data, 0.01))
    assert not rep.passed
    assert rep.max_residual > 1e-3


def test_kappa_constancy_catalog_and_perturbed():
    grid, data = class_grid("C_S1", n=21)
    rep = checks.kappa_constancy(grid, expected=-1.0)
    assert rep.passed, str(rep)
    assert abs(rep.details["kappa_alpha"] + 1.0) < 1e-8

    pert_grid = integrate(checks.perturb_data(data, 0.01), 21, 21)
    rep_bad = checks.kappa_constancy(pert_grid)
    assert not rep_bad.passed
    assert rep_bad.max_residual > 1e-3


def test_perturbed_surface_fails_planarity():
    grid, data = class_grid("C_S1", n=31)
    pert_grid = integrate(checks.perturb_data(data, 0.01), 31, 31)
    rep = checks.planar_curvature_lines(pert_grid)
    assert not rep.passed
    assert rep.max_residual > 1e-3


# ---------------------------------------------------------------------------
# affine-minimal equation
# ---------------------------------------------------------------------------

def test_affine_minimal_constant_rate():
    us = np.linspace(0.0, 1.0, 201)
    ang = nullgeom.AngleFunction(us=us, omega=np.ones_like(us),
                                 omega1=np.zeros_like(us),
                                 omega2=np.zeros_like(us))
    rep = checks.affine_minimal_residual(ang, k=2.0)
    assert rep.passed
    assert rep.max_residual == 0.0


def test_affine_minimal_negative_control():
    us = np.linspace(0.0, 1.0, 201)
    ang = nullgeom.AngleFunction(us=us, omega=1.0 + us ** 2, omega1=2.0 * us,
                                 omega2=np.full_like(us, 2.0))
    rep = checks.affine_minimal_residual(ang)
    assert not rep.passed
    assert rep.max_residual > 1e-2


@pytest.mark.parametrize("tag,expected_k", [("C_T", 8.0), ("C_S1", -2.0)])
def test_affine_minimal_on_catalog_curves(tag, expected_k):
    grid, _ = class_grid(tag, n=81)
    alpha, _ = nullgeom.decompose(grid, n=801)
    ang = nullgeom.angle_from_curve(alpha)
    rep = checks.affine_minimal_residual(ang)
    assert rep.passed, str(rep)
    assert abs(rep.details["k"] - expected_k) < 1e-6
    # the fitted constant is twice the lightlike curvature
    kappa, _ = nullgeom.measure_kappa(alpha)
    assert abs(rep.details["k"] - 2.0 * kappa) < 1e-6


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def test_membership_catalog_and_plane():
    assert checks.thomsen_membership(catalog.surface_class("C_T")) == "B"
    assert checks.thomsen_membership(catalog.surface_class("P")) == "both"


def test_membership_conjugate_and_neither():
    data = catalog.weierstrass_data(catalog.surface_class("C_S1"))
    assert checks.thomsen_membership(conjugate(data)) == "B*"
    assert checks.thomsen_membership(mixed_sign_data()) == "neither"


def test_mixed_sign_probe_full_story():
    data = mixed_sign_data()
    grid = integrate(data, 31, 31)
    # minimal and conformal ...
    E = np.einsum("ijk,ijk->ij", grid.Fx * np.array([1.0, 1.0, -1.0]), grid.Fx)
    assert np.max(np.abs(E - grid.rho ** 2)) < 1e-12
    assert checks.gauss_equation(grid=grid).passed
    # ... with opposite-sign generator curvatures ...
    alpha, beta = nullgeom.decompose(grid)
    ka, _ = nullgeom.measure_kappa(alpha)
    kb, _ = nullgeom.measure_kappa(beta)
    assert abs(ka + 1.0) < 1e-9
    assert abs(kb - 4.0) < 1e-9
    # ... which kills planarity and balancing
    assert not checks.planar_curvature_lines(grid).passed
    with pytest.raises(SignMismatch):
        nullgeom.balance(alpha, beta)
