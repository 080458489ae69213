import math

import numpy as np
import pytest

from nu_spectra import catalog
from nu_spectra.catalog import REGISTRY
from nu_spectra.errors import InvalidParams, LevelNotBound, NoBoundStates, NuSpectraError
from nu_spectra.numeric_oracle import normalization_check, quadrature
from nu_spectra.verification import DEFAULT_TOLERANCES, state_checks

IDS = list(REGISTRY)
STATE_IDS = [pid for pid in IDS if pid != "bessel"]


def test_registry_contents():
    assert len(REGISTRY) == 17
    assert IDS[0] == "harmonic_1d" and IDS[-1] == "generalized_morse"
    with pytest.raises(TypeError):
        REGISTRY["x"] = None
    with pytest.raises(InvalidParams):
        catalog.get("wood_saxon")


# -- equation builder -------------------------------------------------------------


def test_build_harmonic():
    eq = catalog.build_equation("harmonic_1d", {}, 0.5)
    assert eq.sigma.coeffs == pytest.approx((1.0, 0.0, 0.0))
    assert eq.tau_tilde.coeffs == pytest.approx((0.0, 0.0, 0.0))
    assert eq.sigma_tilde.coeffs == pytest.approx((1.0, 0.0, -1.0))


def test_build_hulthen():
    spec = catalog.get("hulthen")
    p = spec.validate({"beta2": 2.0})
    energy = spec.energy_of(p, 0.5)
    assert spec.alpha_of(p, energy) == pytest.approx(0.5)
    eq = catalog.build_equation("hulthen", {"beta2": 2.0}, energy)
    al2, b2 = 0.25, 2.0
    for xi in (0.1, 0.4, 0.9):
        assert eq.sigma(xi) == pytest.approx(xi * (1 - xi))
        assert eq.tau_tilde(xi) == pytest.approx(1 - xi)
        assert eq.sigma_tilde(xi) == pytest.approx((1 - xi) * ((al2 + b2) * xi - al2))


def test_build_generalized_morse():
    params = {"D": 2.0, "a": 1.0, "r0": math.log(2.0)}  # kappa = 2, gamma = 1
    spec = catalog.get("generalized_morse")
    p = spec.validate(params)
    assert spec.kappa(p) == pytest.approx(2.0)
    assert spec.gamma(p) == pytest.approx(1.0)
    eq = catalog.build_equation("generalized_morse", params, 1.0)
    for eta in (0.2, 1.0, 3.5):
        assert eq.sigma(eta) == pytest.approx(eta * (1 + eta))
        assert eq.tau_tilde(eta) == pytest.approx(2 * eta + 1)
        assert eq.sigma_tilde(eta) == pytest.approx(1.0 - 2.0 * (1 - eta) ** 2)


@pytest.mark.parametrize("pid,params", [
    ("poschl_teller", {"a": 1.0}), ("poschl_teller", {"b": 0.5}), ("modified_hulthen", {"b": 1.0}),
    ("morse", {"D": -1.0}), ("hulthen", {"V0": 0.0}), ("kratzer", {"a": 0.0}), ("harmonic_1d", {"zz": 1.0}),
])
def test_invalid_params(pid, params):
    with pytest.raises(InvalidParams):
        catalog.build_equation(pid, params, -1.0)


# -- table regression -------------------------------------------------------------


@pytest.mark.parametrize("pid", IDS)
def test_table_regression(pid):
    spec = REGISTRY[pid]
    cases = spec.table_cases()
    assert len(cases) >= 3
    for params, energy in cases:
        report = spec.table_check(params, energy)
        worst = max(v for k, v in report.items() if isinstance(v, (int, float)) and not isinstance(v, bool))
        assert report["passed"], (params, energy, report)
        assert worst <= 1e-10


def test_bessel_fixture_rows():
    fx = catalog.bessel_reduction_fixture()
    assert fx["equation"].sigma_tilde.coeffs == pytest.approx((-0.25, 0.0, 1.0))
    for key in ("k", "lambda"):
        assert fx["computed"][key] == pytest.approx(fx["expected"][key], abs=1e-12)
    assert fx["expected"]["lambda"] == pytest.approx(1j * (2 * 0.5 + 1))
    for key in ("pi", "tau"):
        assert np.allclose(fx["computed"][key], fx["expected"][key], atol=1e-12)


# -- spectra ----------------------------------------------------------------------


def _energies(pid, params, up_to):
    return [lv.energy for lv in catalog.spectrum(pid, params, up_to)]


def test_spectrum_examples():
    assert _energies("harmonic_1d", {"hw": 1.0}, 4) == pytest.approx([0.5, 1.5, 2.5, 3.5, 4.5])
    assert _energies("coulomb", {"Z": 1.0}, 3) == pytest.approx([-0.5, -1 / 8, -1 / 18])
    assert _energies("hulthen", {"beta2": 2.0, "V0": 1.0}, 10) == pytest.approx([-0.125])
    mu = 0.0072973525693
    assert _energies("dirac_coulomb", {"Z": 1.0, "kappa": -1}, 0) == pytest.approx([math.sqrt(1 - mu * mu)],
                                                                                     rel=1e-14)


def test_level_counts():
    assert len(catalog.spectrum("hulthen", {"beta2": 2.0}, 50)) == 1
    mpt = catalog.spectrum("modified_poschl_teller", {"a": 4.0}, 50)
    assert [lv.quantum_numbers["n"] for lv in mpt] == [0, 1]
    # gamma/alpha = r0 sqrt(D/h2m)/alpha = 3.2
    morse = catalog.spectrum("morse", {"D": 6.4 ** 2, "alpha": 2.0, "r0": 1.0}, 50)
    assert [lv.quantum_numbers["v"] for lv in morse] == [0, 1, 2]
    assert len(catalog.spectrum("morse", {}, 50)) == 5


def test_no_bound_states():
    with pytest.raises(NoBoundStates, match="minimum size of potential hole"):
        catalog.spectrum("hulthen", {"beta2": 0.5}, 3)
    with pytest.raises(NoBoundStates):
        catalog.spectrum("morse", {"D": 0.5, "alpha": 2.0}, 3)


def test_spectrum_errors():
    with pytest.raises(InvalidParams):
        catalog.spectrum("harmonic_1d", {}, -1)
    with pytest.raises(LevelNotBound):
        catalog.eigenstate("hulthen", {"beta2": 2.0}, {"n": 2})
    with pytest.raises(LevelNotBound):
        catalog.eigenstate("morse", {}, {"v": 5})
    with pytest.raises(InvalidParams):
        catalog.eigenstate("harmonic_1d", {}, {"v": 0})
    with pytest.raises(InvalidParams):
        catalog.eigenstate("harmonic_1d", {}, {"n": 0, "spin": 1})


def test_generalized_morse_matches_modified_hulthen():
    D, a, r0 = 1.0, 1.0, math.log(3.0)
    V0, b, scale = catalog.generalized_morse_params(D, a, r0)
    assert b == pytest.approx(2.0)
    assert V0 == pytest.approx(4 * D)
    gm = _energies("generalized_morse", {"D": D, "a": a, "r0": r0}, 1)
    # beta^2 = V0 a^2 / h2m with h2m = 1
    mh = _energies("modified_hulthen", {"V0": V0, "b": b, "a": scale, "beta2": V0 * scale ** 2}, 1)
    # only n = 0 is bound at these parameters, for both potentials
    assert len(gm) == len(mh) == 1
    assert gm == pytest.approx([e + D for e in mh], rel=1e-12)
    gspec, mspec = catalog.get("generalized_morse"), catalog.get("modified_hulthen")
    gp = gspec.validate({"D": D, "a": a, "r0": r0})
    mp = mspec.validate({"V0": V0, "b": b, "a": scale, "beta2": V0 * scale ** 2})
    for n in (0, 1):
        closed_gm = gspec.energy_at(gp, n + gspec.delta(gp))
        closed_mh = mspec.energy_of(mp, mspec.alpha_n(mp, n))
        assert closed_gm == pytest.approx(closed_mh + D, rel=1e-12)


def test_generalized_morse_delta_matches_kappa():
    gm, mh = catalog.get("generalized_morse"), catalog.get("modified_hulthen")
    for D, a, r0 in ((1.0, 1.0, math.log(3.0)), (10.0, 1.0, 1.0), (5.0, 0.7, 2.0), (37.0, 1.3, 0.8), (2.0, 2.0, 0.5)):
        V0, b, scale = catalog.generalized_morse_params(D, a, r0)
        delta = gm.delta(gm.validate({"D": D, "a": a, "r0": r0}))
        kappa = mh.kappa(mh.validate({"V0": V0, "b": b, "a": scale, "beta2": V0 * scale ** 2}))
        assert delta == pytest.approx(kappa + 0.5, rel=1e-12)


# -- states -----------------------------------------------------------------------


def test_oscillator_ground_state():
    st = catalog.eigenstate("harmonic_1d", {"mw": 1.0}, {"n": 0})
    xs = np.linspace(-3, 3, 13)
    assert np.allclose(st.psi(xs), math.pi ** -0.25 * np.exp(-xs * xs / 2), rtol=1e-13, atol=0)
    assert normalization_check(st) == pytest.approx(1.0, abs=1e-10)


def test_poschl_teller_ground_state():
    st = catalog.eigenstate("poschl_teller", {"a": 2.0, "b": 2.0, "alpha": 1.0}, {"n": 0})
    assert normalization_check(st) == pytest.approx(1.0, abs=1e-8)


def test_spherical_harmonic_values():
    Y = catalog.spherical_harmonic
    assert Y(0, 0, 0.3, 1.1) == pytest.approx(1 / math.sqrt(4 * math.pi))
    assert Y(1, 1, math.pi / 2, 0.0) == pytest.approx(-math.sqrt(3 / (8 * math.pi)))
    assert abs(Y(1, 0, math.pi / 2, 0.0)) < 1e-16
    st = catalog.eigenstate("spherical_harmonics", {}, {"l": 1, "m": 0})
    assert abs(st.psi(math.pi / 2, 0.0)) < 1e-16


@pytest.mark.parametrize("pid", STATE_IDS)
def test_state_suite(pid):
    """Normalization, residual, node count, quantization and orthogonality."""
    spec = REGISTRY[pid]
    checks = []
    for params in spec.normalization_cases():
        checks += state_checks(pid, params, DEFAULT_TOLERANCES)
    assert checks
    failed = [(c.name, c.measured, c.detail) for c in checks if not c.passed]
    assert not failed
    kinds = {c.name.split()[0] for c in checks}
    assert "norm" in kinds


@pytest.mark.parametrize("pid", [p for p in STATE_IDS if REGISTRY[p].has_spectrum])
def test_oracle_equivalence(pid):
    spec = REGISTRY[pid]
    for params in spec.oracle_cases():
        run = spec.oracle(spec.validate(params))
        assert run.passed, (params, run.closed_form, run.numeric, run.tolerance)


@pytest.mark.parametrize("pid", [p for p in IDS if p not in ("bessel",)])
def test_coordinate_map_round_trip(pid):
    spec = REGISTRY[pid]
    p = spec.validate(spec.normalization_cases()[0] if pid != "bessel" else {})
    cmap = spec.coordinate_map(p)
    lo, hi = cmap.mapped_domain.lower, cmap.mapped_domain.upper
    lo = max(lo, -20.0)
    hi = min(hi, 20.0)
    span = hi - lo
    xs = np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, 100)
    back = np.array([cmap.forward(cmap.inverse(x)) for x in xs], dtype=float)
    assert np.allclose(back, xs, rtol=1e-12, atol=1e-12 * max(abs(lo), abs(hi)))
    r = np.array([cmap.inverse(x) for x in xs], dtype=float)
    jac = np.array([cmap.jacobian(v) for v in r], dtype=float)
    assert np.all(jac != 0)


def test_states_reject_unbound_levels_for_every_finite_ladder():
    for pid in STATE_IDS:
        spec = REGISTRY[pid]
        for params in spec.normalization_cases():
            p = spec.validate(params)
            count = spec.level_count(p)
            if count is None:
                continue
            with pytest.raises(NuSpectraError):
                spec.state(p, spec.first_level(p) + count)


def test_physical_energy_conversion():
    spec = catalog.get("morse")
    p = spec.validate({})
    conv = spec.physical_energy(p, 1.0)
    assert conv is None or (len(conv) == 2 and math.isfinite(conv[0]))
