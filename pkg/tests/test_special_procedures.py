import math
import random

import numpy as np
import pytest

from nu_spectra import catalog
from nu_spectra.catalog import REGISTRY
from nu_spectra.catalog.coulomb import dirac_energy
from nu_spectra.catalog.molecular import phi_b
from nu_spectra.errors import ExtrapolationUnstable, InvalidParams, NoSolution, SupercriticalCharge
from nu_spectra.numeric_oracle import quadrature

FS = 0.0072973525693

# -- Morse rotation ------------------------------------------------------------------


def morse_defect(alpha, x):
    c0, c1, c2 = catalog.morse_rotation_coeffs(alpha)
    return 1 / (1 + x) ** 2 - (c0 + c1 * math.exp(-alpha * x) + c2 * math.exp(-2 * alpha * x))


def test_morse_rotation_coeffs():
    assert catalog.morse_rotation_coeffs(3.0) == pytest.approx((1 / 3, 2 / 3, 0.0), abs=1e-15)
    assert catalog.morse_rotation_coeffs(1.0) == pytest.approx((1.0, -2.0, 2.0))
    a = 2.38
    assert morse_defect(a, 1e-3) / 1e-9 == pytest.approx(-(2 / 3) * a * a + 3 * a - 4, rel=1e-2)


@pytest.mark.parametrize("alpha", [1.44, 2.38, 4.954])
def test_morse_rotation_defect_is_cubic(alpha):
    ratio = morse_defect(alpha, 1e-2) / morse_defect(alpha, 5e-3)
    assert math.log2(ratio) == pytest.approx(3.0, abs=0.05)


# -- modified Hulthen rotation --------------------------------------------------------


def hulthen_defect(b, x):
    c0, c1, c2, x0 = catalog.mod_hulthen_rotation_coeffs(b)
    e = math.exp(-(1 + x) * x0)
    return 1 / (1 + x) ** 2 - c0 - e * (c1 + c2 * e) / (1 - e) ** 2


def test_mod_hulthen_rotation_coeffs():
    c0, c1, c2, x0 = catalog.mod_hulthen_rotation_coeffs(2.0)
    assert x0 == pytest.approx(math.log(3.0), abs=1e-15)
    assert x0 == pytest.approx(1.09861, abs=5e-6)
    ratio = hulthen_defect(2.0, 1e-2) / hulthen_defect(2.0, 5e-3)
    assert math.log2(ratio) == pytest.approx(3.0, abs=0.05)
    with pytest.raises(InvalidParams):
        catalog.mod_hulthen_rotation_coeffs(1.0)


def test_mod_hulthen_rotation_l0_unchanged():
    m = catalog.mod_hulthen_rotation_params(1.7, 40.0, 2.0, 0)
    assert m["alpha1_sq"] == pytest.approx(1.7)
    assert m["beta1_sq"] == pytest.approx(40.0)
    assert m["b1"] == pytest.approx(2.0)
    m1 = catalog.mod_hulthen_rotation_params(1.7, 40.0, 2.0, 2)
    assert m1["alpha1_sq"] != pytest.approx(1.7)


# -- Morse to modified Hulthen matching -------------------------------------------------


def test_phi():
    assert phi_b(2.0) == pytest.approx(1.648, abs=5e-4)
    assert phi_b(2.0) == pytest.approx(1.5 * math.log(3.0), rel=1e-14)


def test_match_hcl():
    V0, b, a = catalog.match_morse_to_modified_hulthen(37244.0, 2.380, 1.275)
    assert b == pytest.approx(4.51744, abs=1e-3)
    assert V0 == pytest.approx(524010.0, rel=5e-4)
    assert V0 == pytest.approx(4 * (b - 1) * 37244.0, rel=1e-14)
    assert a == pytest.approx(1.275 / math.log(2 * b - 1), rel=1e-14)
    assert phi_b(b) == pytest.approx(2.380, rel=1e-12)


def test_match_h2_b():
    _, b, _ = catalog.match_morse_to_modified_hulthen(38292.0, 1.440, 0.741)
    assert b == pytest.approx(1.5904, abs=1e-3)


def test_match_no_solution():
    with pytest.raises(NoSolution):
        catalog.match_morse_to_modified_hulthen(100.0, 0.9, 1.0)


def test_generalized_morse_params():
    V0, b, a = catalog.generalized_morse_params(3.0, 1.0, math.log(3.0))
    assert b == pytest.approx(2.0)
    assert V0 == pytest.approx(12.0)
    assert a == pytest.approx(1.0)
    V0, b, a = catalog.generalized_morse_params(2.0, 0.5, 3.0)
    e = math.exp(1.5)
    assert (V0, b, a) == pytest.approx((2 * 2.0 * (e - 1), (1 + e) / 2, 2.0))


# -- Dirac -------------------------------------------------------------------------------


def test_dirac_decouple_zero_coupling():
    d = catalog.dirac_decouple(0.9, 0.0, -1)
    assert d.nu == pytest.approx(1.0)
    assert d.v1_equation.sigma_tilde.coeffs == pytest.approx((-2.0, 0.0, 0.81 - 1))
    # v2 is v1 with nu -> -nu: -nu(nu + 1) becomes nu(1 - nu) = 0
    assert d.v2_equation.sigma_tilde.coeffs == pytest.approx((0.0, 0.0, 0.81 - 1))
    a = math.sqrt(1 - 0.81)
    assert (d.f1, d.f2, d.g1, d.g2) == pytest.approx((0.0, -1 - 1.0, a * (-2.0) / (-0.9 - 1.0), 0.0))


def test_dirac_decouple_coefficients():
    eps, mu, kappa = 0.95, 0.3, 2
    d = catalog.dirac_decouple(eps, mu, kappa)
    nu = math.sqrt(kappa * kappa - mu * mu)
    a = math.sqrt(1 - eps * eps)
    assert d.nu == pytest.approx(nu)
    assert d.f1 == pytest.approx(a * mu / (eps * kappa - nu))
    assert d.f2 == pytest.approx(kappa - nu)
    assert d.g1 == pytest.approx(a * (kappa - nu) / (eps * kappa - nu))
    assert d.g2 == pytest.approx(mu)
    for eq, s in ((d.v1_equation, nu), (d.v2_equation, -nu)):
        assert eq.sigma_tilde.coeffs == pytest.approx((-s * (s + 1), 2 * eps * mu, eps * eps - 1))


def test_dirac_ground_state_v1_vanishes():
    mu = FS
    eps = dirac_energy(0, -1, mu)
    assert eps == pytest.approx(math.sqrt(1 - mu * mu), rel=1e-14)
    pair = catalog.dirac_radial(0, 0.5, -1, 1.0)
    assert pair.v1 == "0"
    assert pair.f1 == 0.0 and pair.g1 == 0.0
    assert pair.energy == pytest.approx(eps)


def test_dirac_transformed_matrix_invariants():
    rng = random.Random(3)
    for _ in range(20):
        kappa = rng.choice([-3, -2, -1, 1, 2, 3])
        mu = rng.uniform(0.01, 0.9)
        eps = rng.uniform(0.1, 0.99)
        d = catalog.dirac_decouple(eps, mu, kappa)
        for x in (0.3, 1.0, 4.0):
            m = d.transformed_matrix(x, eps, mu, kappa)
            assert abs(np.trace(m)) < 1e-12 * np.max(np.abs(m))
            want = eps * eps - 1 + 2 * eps * mu / x - d.nu ** 2 / x ** 2
            assert np.linalg.det(m) == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_dirac_supercritical():
    with pytest.raises(SupercriticalCharge):
        catalog.dirac_decouple(0.5, 1.2, -1)
    with pytest.raises(SupercriticalCharge):
        catalog.dirac_radial(0, 0.5, -1, 140.0)


@pytest.mark.parametrize("n_r,j,sign", [(0, 0.5, -1), (1, 0.5, -1), (1, 0.5, 1), (2, 1.5, -1), (1, 1.5, 1)])
def test_dirac_radial_pair(n_r, j, sign):
    pair = catalog.dirac_radial(n_r, j, sign, 1.0)
    norm = quadrature(lambda t: (t / pair.a) ** 2 * (pair.f(t / pair.a) ** 2 + pair.g(t / pair.a) ** 2) / pair.a,
                      (0.0, math.inf), tol=1e-12)
    assert norm == pytest.approx(1.0, abs=1e-6)
    assert pair.system_residual() < 1e-6
    xs = np.linspace(0.01, 40.0, 4001) / pair.a
    # small component suppressed by the coupling mu = Z alpha
    assert np.max(np.abs(pair.g(xs))) / np.max(np.abs(pair.f(xs))) < 10 * pair.mu


# -- fine structure ---------------------------------------------------------------------


def test_fine_structure_examples():
    d = catalog.fine_structure_expansion_check("dirac", 0, 0.5)
    assert d["expected"]["c4"] == pytest.approx(-1 / 8)
    s = catalog.fine_structure_expansion_check("schrodinger_rel", 1, 0)
    assert s["expected"]["c4"] == pytest.approx(-13 / 128)
    for res in (d, s):
        assert all(v < 1e-4 for v in res["relative_error"].values())


@pytest.mark.parametrize("model,n_r,lj", [("dirac", 1, 0.5), ("dirac", 0, 1.5), ("schrodinger_rel", 0, 0),
                                           ("schrodinger_rel", 2, 1)])
def test_fine_structure_more_levels(model, n_r, lj):
    res = catalog.fine_structure_expansion_check(model, n_r, lj, (0.1, 0.05, 0.025))
    assert all(v < 1e-4 for v in res["relative_error"].values())


def test_fine_structure_errors():
    with pytest.raises(ExtrapolationUnstable):
        catalog.fine_structure_expansion_check("dirac", 0, 0.5, (0.2, 0.15, 0.1), stability=1e-9)
    with pytest.raises(ValueError):
        catalog.fine_structure_expansion_check("dirac", 0, 0.5, (0.025, 0.05, 0.1))
    with pytest.raises(InvalidParams):
        catalog.fine_structure_expansion_check("klein_gordon", 0, 0.5)


# -- Bessel fixture ------------------------------------------------------------------------


def test_bessel_reduced_residual():
    fx = REGISTRY["bessel"]
    assert fx.reduced_residual(0.5, 1.3) < 1e-8
    assert fx.bessel_residual(0.5, 1.3) < 1e-8


def test_bessel_poisson_vs_series():
    fx = REGISTRY["bessel"]
    series = fx.bessel_j_series(0.5, 2.0)
    assert fx.bessel_j_poisson(0.5, 2.0) == pytest.approx(series, abs=1e-8)
    assert series == pytest.approx(math.sqrt(2 / (math.pi * 2.0)) * math.sin(2.0), rel=1e-12)
    assert fx.bessel_j_from_reduction(0.5, 2.0) == pytest.approx(series, rel=1e-8)
