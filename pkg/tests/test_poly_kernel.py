import math

import numpy as np
import pytest

from nu_spectra.errors import DivergentIntegral, DomainError, PoleAtC
from nu_spectra.nu_engine import ExpPowerProduct, LowPoly, rodrigues_polynomial
from nu_spectra.numeric_oracle import quadrature
from nu_spectra.poly_kernel import (
    OrthoFamily,
    beta_value,
    eigenvalue,
    family_data,
    gamma_value,
    hyp1f1_terminating,
    hyp2f1_terminating,
    laguerre_norm_inverse,
    laguerre_norm_weighted,
    laguerre_product_integral,
    log_gamma,
    norm_squared,
    ortho_coefficients,
    ortho_eval,
    pochhammer,
    recurrence_coeffs,
    weight,
)

FAMILIES = [
    OrthoFamily.hermite(),
    OrthoFamily.laguerre(0.0),
    OrthoFamily.laguerre(1.5),
    OrthoFamily.jacobi(0.0, 0.0),
    OrthoFamily.jacobi(1.0, 1.0),
    OrthoFamily.jacobi(0.5, 2.0),
]
IDS = [f"{f.kind}-{f.alpha}-{f.beta}" for f in FAMILIES]


def sample_points(fam, count=50):
    if fam.kind == "jacobi":
        return np.linspace(-0.98, 0.98, count)
    if fam.kind == "laguerre":
        return np.linspace(0.01, 12.0, count)
    return np.linspace(-4.0, 4.0, count)


# -- examples -------------------------------------------------------------------


def test_ortho_eval_examples():
    assert ortho_eval(OrthoFamily.hermite(), 2, 1.0) == pytest.approx(2.0)
    assert ortho_eval(OrthoFamily.laguerre(0.0), 1, 0.0) == pytest.approx(1.0)
    sigma = LowPoly.of(1.0, 0.0, -1.0)
    rho = ExpPowerProduct(factors=((1.0, 1.0), (-1.0, 1.0)))
    coef = rodrigues_polynomial(sigma, rho, 2, 1.0 / 8.0)
    assert ortho_eval(OrthoFamily.jacobi(1.0, 1.0), 2, 0.0) == pytest.approx(coef[0], rel=1e-12)


def test_norm_squared_examples():
    assert norm_squared(OrthoFamily.hermite(), 0) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert norm_squared(OrthoFamily.laguerre(0.0), 3) == pytest.approx(1.0, rel=1e-14)
    fam = OrthoFamily.jacobi(0.0, 0.0)
    assert norm_squared(fam, 1) == pytest.approx(2.0 / 3.0, rel=1e-14)
    q = quadrature(lambda x: ortho_eval(fam, 1, x) ** 2, (-1.0, 1.0), tol=1e-14)
    assert q == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_hyp2f1_examples():
    assert hyp2f1_terminating(0, 3.7, 1.2, 0.4) == 1.0
    assert hyp2f1_terminating(-1, 3.0, 2.0, 0.5) == pytest.approx(0.25)


def test_hyp2f1_matches_rodrigues_jacobi_form():
    a, kap, n = 1.0, 1.0, 1
    sigma = LowPoly.of(0.0, 1.0, -1.0)
    rho = ExpPowerProduct(factors=((0.0, 2 * a), (1.0, 2 * kap)))
    coef = rodrigues_polynomial(sigma, rho, n, 1.0)
    xs = np.array([0.1, 0.3, 0.7])
    rod = np.polynomial.polynomial.polyval(xs, coef)
    hyp = hyp2f1_terminating(-n, 2 * a + 2 * kap + n + 1, 2 * a + 1, xs)
    ratio = rod / hyp
    assert np.ptp(ratio) < 1e-12 * abs(ratio[0])
    assert ratio[1] * hyp[1] == pytest.approx(rod[1])
    assert hyp2f1_terminating(-1, 6.0, 3.0, 0.3) == pytest.approx(1 - 2 * 0.3)


def test_hyp1f1_examples():
    assert hyp1f1_terminating(0, 2.5, 3.0) == 1.0
    assert hyp1f1_terminating(-1, 2.0, 1.0) == pytest.approx(0.5)
    v, a, x = 2, 1.0, 0.7
    lag = ortho_eval(OrthoFamily.laguerre(a), v, x)
    scaled = lag * math.factorial(v) * math.gamma(a + 1) / math.gamma(a + v + 1)
    assert hyp1f1_terminating(-v, a + 1, x) == pytest.approx(scaled, rel=1e-13)


def test_hypergeometric_errors():
    with pytest.raises(PoleAtC):
        hyp2f1_terminating(-3, 1.0, -1.0, 0.5)
    with pytest.raises(PoleAtC):
        hyp1f1_terminating(-2, 0.0, 0.5)
    with pytest.raises(ValueError):
        hyp2f1_terminating(1, 1.0, 1.0, 0.5)
    # c hits a nonpositive integer outside the summation range: fine
    assert hyp2f1_terminating(-1, 1.0, -2.0, 0.5) == pytest.approx(1 + 0.5 / 2.0)


def test_laguerre_product_examples():
    assert laguerre_product_integral(0, 0, 0, 0.0, 0.0) == pytest.approx(1.0, rel=1e-14)
    a = 1.5
    want = (a + 2 * 2 + 1) * math.gamma(a + 3) / math.factorial(2)
    assert laguerre_product_integral(2, 2, 1, a, a) == pytest.approx(want, rel=1e-13)
    assert laguerre_norm_weighted(2, a) == pytest.approx(want, rel=1e-13)

    n, m, s, al, be = 3, 2, 1, 0.5, 1.0
    la, lb = OrthoFamily.laguerre(al), OrthoFamily.laguerre(be)
    q = quadrature(lambda x: np.exp(-x) * x ** (al + s) * ortho_eval(la, n, x) * ortho_eval(lb, m, x),
                   (0.0, math.inf), tol=1e-13)
    assert laguerre_product_integral(n, m, s, al, be) == pytest.approx(q, rel=1e-8)


def test_laguerre_product_specializations():
    for m in range(6):
        for d in (0.5, 1.0, 2.5):
            assert laguerre_product_integral(m, m, -1, d, d) == pytest.approx(laguerre_norm_inverse(m, d), rel=1e-12)
            assert laguerre_product_integral(m, m, 1, d, d) == pytest.approx(laguerre_norm_weighted(m, d), rel=1e-12)
            assert laguerre_product_integral(m, m, 0, d, d) == pytest.approx(
                norm_squared(OrthoFamily.laguerre(d), m), rel=1e-12)


def test_laguerre_product_errors():
    with pytest.raises(DivergentIntegral):
        laguerre_product_integral(1, 1, -1, 0.0, 0.0)
    with pytest.raises(ValueError):
        laguerre_product_integral(1, 2, 0, 0.0, 0.0)


def test_gamma_examples():
    assert gamma_value(5.0) == pytest.approx(24.0, rel=1e-14)
    assert beta_value(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    q = quadrature(lambda t: t ** 1.5 * (1 - t) ** 2.5, (0.0, 1.0), tol=1e-15)
    assert beta_value(2.5, 3.5) == pytest.approx(q, rel=1e-10)
    assert pochhammer(3.0, 4) == pytest.approx(3 * 4 * 5 * 6)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        beta_value(-1.0, 2.0)


@pytest.mark.parametrize("x", [0.5, 1.0, 3.7, 10.0, 57.3, 199.0])
def test_log_gamma_accuracy(x):
    assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-14)


# -- invariants -----------------------------------------------------------------


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
def test_orthogonality(fam):
    lo, hi = family_data(fam)["interval"]
    norms = [math.sqrt(norm_squared(fam, n)) for n in range(9)]
    for n in range(9):
        for m in range(n + 1):
            val = quadrature(lambda x: ortho_eval(fam, n, x) * ortho_eval(fam, m, x) * weight(fam, x),
                             (lo, hi), tol=1e-12 * norms[n] * norms[m], rel_tol=1e-12)
            if n == m:
                assert val == pytest.approx(norm_squared(fam, n), rel=1e-8)
            else:
                assert abs(val) < 1e-8 * norms[n] * norms[m]


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
def test_recurrence_consistency(fam):
    xs = sample_points(fam)
    for n in range(11):
        rc = recurrence_coeffs(fam, n)
        yn = ortho_eval(fam, n, xs)
        up = rc.alpha_n * ortho_eval(fam, n + 1, xs)
        mid = rc.beta_n * yn
        down = rc.gamma_n * ortho_eval(fam, n - 1, xs) if n else np.zeros_like(xs)
        resid = xs * yn - (up + mid + down)
        scale = np.max(np.abs(np.stack([xs * yn, up, mid, down])))
        assert np.max(np.abs(resid)) < 1e-10 * scale


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
def test_gamma_n_matches_norm_ratio(fam):
    for n in range(1, 10):
        rc = recurrence_coeffs(fam, n)
        prev = recurrence_coeffs(fam, n - 1)
        want = prev.alpha_n * norm_squared(fam, n) / norm_squared(fam, n - 1)
        assert rc.gamma_n == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
def test_differential_equation(fam):
    data = family_data(fam)
    sigma = np.polynomial.Polynomial(data["sigma"])
    tau = np.polynomial.Polynomial(data["tau"])
    xs = sample_points(fam, 20)
    for n in range(9):
        y = np.polynomial.Polynomial(ortho_coefficients(fam, n))
        lam = eigenvalue(fam, n)
        terms = [sigma(xs) * y.deriv(2)(xs), tau(xs) * y.deriv(1)(xs), lam * y(xs)]
        resid = terms[0] + terms[1] + terms[2]
        assert np.max(np.abs(resid)) <= 1e-9 * max(np.max(np.abs(t)) for t in terms) + 1e-300
        assert np.max(np.abs(y(xs) - ortho_eval(fam, n, xs))) <= 1e-9 * np.max(np.abs(y(xs)))


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (1.0, 1.0), (0.5, 2.0), (-0.5, 1.5), (2.5, -0.5)])
def test_jacobi_hypergeometric_link(a, b):
    fam = OrthoFamily.jacobi(a, b)
    xi = np.arange(1, 64) / 64.0  # dyadic, so x = 1 - 2 xi is exact
    xs = 1.0 - 2.0 * xi
    for n in range(11):
        want = ortho_eval(fam, n, xs)
        link = pochhammer(a + 1, n) / math.factorial(n) * hyp2f1_terminating(-n, n + a + b + 1, a + 1, xi)
        assert np.max(np.abs(link - want)) <= 1e-12 * max(np.max(np.abs(want)), 1.0)


@pytest.mark.parametrize("a", [0.0, 1.0, 2.5])
def test_laguerre_hypergeometric_link(a):
    fam = OrthoFamily.laguerre(a)
    xs = np.linspace(0.0, 6.0, 25)
    for n in range(11):
        want = ortho_eval(fam, n, xs)
        link = pochhammer(a + 1, n) / math.factorial(n) * hyp1f1_terminating(-n, a + 1, xs)
        assert np.max(np.abs(link - want)) <= 1e-12 * max(np.max(np.abs(want)), 1.0)


def test_nonclassical_jacobi_evaluates_but_has_no_norm():
    fam = OrthoFamily.jacobi(-0.5, 0.5 - 4.0)
    assert not fam.classical
    assert math.isfinite(float(ortho_eval(fam, 1, 0.3)))
    with pytest.raises(DomainError):
        norm_squared(fam, 1)
