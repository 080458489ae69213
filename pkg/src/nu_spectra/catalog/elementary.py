"""The linear oscillator, spherical harmonics and the Bessel complex-branch fixture."""
from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import NoBoundStates, NoRealK
from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuEquation, k_candidates
from ..numeric_oracle import GridSpec, quadrature
from ..poly_kernel import OrthoFamily, gamma_value, ortho_eval
from .base import BoundState, CoordinateMap, ParamSpec, PotentialSpec, TableRows, fd_linear

LINE = Interval(-math.inf, math.inf)
HALF_LINE = Interval(0.0, math.inf)


class Harmonic1D(PotentialSpec):
    id = "harmonic_1d"
    title = "linear harmonic oscillator"
    param_specs = (
        ParamSpec("hw", 1.0, 0.0, description="quantum energy hbar*omega"),
        ParamSpec("mw", 1.0, 0.0, description="m*omega/hbar, inverse squared length"),
    )
    energy_units = "same units as hw"
    oracle_tolerance = 1e-5
    oracle_relative = False

    def energy(self, p, level):
        self.require_bound(p, level)
        return p["hw"] * (level + 0.5)

    def coordinate_map(self, p):
        s = math.sqrt(p["mw"])
        return CoordinateMap(lambda x: s * np.asarray(x), lambda xi: np.asarray(xi) / s,
                             lambda x: s + 0.0 * np.asarray(x), LINE, LINE, "xi = x sqrt(m omega / hbar)")

    def build(self, p, energy):
        eps = energy / p["hw"]
        return NuEquation(LowPoly.of(1.0), LowPoly.of(2 * eps, 0.0, -1.0), LowPoly.of(), LINE)

    def expected_rows(self, p, energy):
        eps = energy / p["hw"]
        return TableRows(
            k=2 * eps,
            pi=LowPoly.of(0.0, -1.0),
            tau=LowPoly.of(0.0, -2.0),
            lambda_=2 * eps - 1,
            phi=ExpPowerProduct(LowPoly.of(0, 0, -0.5)),
            rho=ExpPowerProduct(LowPoly.of(0, 0, -1.0)),
        )

    def table_cases(self):
        return [({"hw": 1.0}, 0.5), ({"hw": 2.0, "mw": 3.0}, 2.6), ({"hw": 0.7, "mw": 0.4}, 3.15)]

    def quantization_window(self, p, level):
        return (1e-9 * p["hw"], p["hw"] * (level + 3))

    def state(self, p, level):
        self.require_bound(p, level)
        mw = p["mw"]
        n = level
        cn = (math.pi ** -0.25) / math.sqrt(2.0 ** n * math.factorial(n))
        herm = OrthoFamily.hermite()
        s = math.sqrt(mw)

        def u(xi):
            xi = np.asarray(xi, dtype=float)
            return cn * np.exp(-xi * xi / 2) * ortho_eval(herm, n, xi)

        def psi(x):
            return mw ** 0.25 * u(s * np.asarray(x, dtype=float))

        return BoundState(
            self.id, {"n": n}, self.energy(p, n), cn * mw ** 0.25, psi, "line", LINE,
            mapped_u=u, equation=self.build(p, self.energy(p, n)), sample_window=(-4.0, 4.0),
            polynomial=lambda xi: ortho_eval(herm, n, xi), node_window=(-8.0, 8.0),
            polynomial_part=("hermite", n),
        )

    def normalization_cases(self):
        return [{"hw": 1.0, "mw": 1.0}, {"hw": 2.5, "mw": 0.3}]

    def oracle_cases(self):
        return [{"hw": 1.0, "mw": 1.0}]

    def oracle(self, p, count=5):
        levels = list(range(count))
        grid = GridSpec(-10.0, 10.0, 2001)
        # -u'' + xi^2 u = 2 eps u in the scaled coordinate
        return fd_linear(self, p, lambda x: x * x, grid, levels, lambda e: p["hw"] * e / 2)


# ---------------------------------------------------------------------------


def spherical_norm(l: int, m: int) -> float:
    """N_lm of the Jacobi form, including the 1/sqrt(2 pi) of the azimuthal factor."""
    am = abs(m)
    log_n = (0.5 * (math.log(2 * l + 1) - math.log(4 * math.pi) + math.lgamma(l - m + 1) + math.lgamma(l + m + 1))
             - am * math.log(2.0) - math.lgamma(l + 1))
    return math.exp(log_n)


def spherical_harmonic(l: int, m: int, theta, phi_angle):
    """Y_lm through P^(|m|,|m|)_(l-|m|)(cos theta) with phase (-1)^m for m >= 0."""
    if abs(m) > l:
        raise ValueError("need |m| <= l")
    am = abs(m)
    theta = np.asarray(theta, dtype=float)
    phase = (-1.0) ** m if m >= 0 else 1.0
    poly = ortho_eval(OrthoFamily.jacobi(am, am), l - am, np.cos(theta))
    return phase * spherical_norm(l, m) * np.exp(1j * m * np.asarray(phi_angle)) * np.sin(theta) ** am * poly


class SphericalHarmonics(PotentialSpec):
    id = "spherical_harmonics"
    title = "spherical harmonics (angular equation)"
    param_specs = (ParamSpec("m", 0.0, integer=True, description="magnetic quantum number"),)
    level_name = "l"
    energy_units = "separation constant mu = l(l+1)"

    def first_level(self, p):
        return int(abs(p["m"]))

    def quantum_numbers(self, p, level):
        return {"l": level, "m": int(p["m"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return float(level * (level + 1))

    def coordinate_map(self, p):
        return CoordinateMap(np.cos, np.arccos, lambda t: -np.sin(t), Interval(0.0, math.pi),
                             Interval(-1.0, 1.0), "xi = cos theta")

    def build(self, p, mu):
        m2 = p["m"] ** 2
        return NuEquation(LowPoly.of(1.0, 0.0, -1.0), LowPoly.of(mu - m2, 0.0, -mu), LowPoly.of(0.0, -2.0),
                          Interval(-1.0, 1.0))

    def expected_rows(self, p, mu):
        am = abs(p["m"])
        return TableRows(
            k=mu - am * am,
            pi=LowPoly.of(0.0, -am),
            tau=LowPoly.of(0.0, -2 * (am + 1)),
            lambda_=mu - am * (am + 1),
            phi=ExpPowerProduct(factors=((-1.0, am / 2), (1.0, am / 2))),
            rho=ExpPowerProduct(factors=((-1.0, am), (1.0, am))),
        )

    def table_cases(self):
        return [({"m": 2}, 6.0), ({"m": 1}, 4.3), ({"m": 3}, 20.0), ({"m": 0}, 2.0)]

    def quantization_window(self, p, level):
        return (0.0, 2.0 * (level + 2) ** 2)

    def state(self, p, level):
        self.require_bound(p, level)
        m = int(p["m"])
        l = level
        am = abs(m)
        norm = spherical_norm(l, m)
        fam = OrthoFamily.jacobi(am, am)

        def u(xi):
            xi = np.asarray(xi, dtype=float)
            return norm * (1 - xi * xi) ** (am / 2) * ortho_eval(fam, l - am, xi)

        return BoundState(
            self.id, {"l": l, "m": m}, float(l * (l + 1)), norm,
            lambda t, ph: spherical_harmonic(l, m, t, ph), "sphere", Interval(0.0, math.pi),
            mapped_u=u, equation=self.build(p, l * (l + 1.0)), sample_window=(-0.9, 0.9),
            polynomial=lambda xi: ortho_eval(fam, l - am, xi), node_window=(-1.0, 1.0),
            polynomial_part=("jacobi", l - am),
        )

    def normalization_cases(self):
        return [{"m": 0}, {"m": 1}, {"m": -2}]

    def oracle_cases(self):
        return [{"m": 1}, {"m": 2}]

    def oracle(self, p, count=4):
        am = abs(p["m"])
        levels = [am + j for j in range(count)]
        # Theta = w / sqrt(sin theta) turns the angular equation into
        # -w'' + (m^2 - 1/4)/sin^2 w = (mu + 1/4) w on (0, pi)
        grid = GridSpec(0.0, math.pi, 4001)
        return fd_linear(self, p, lambda t: (am * am - 0.25) / np.sin(t) ** 2, grid, levels, lambda e: e - 0.25)


# ---------------------------------------------------------------------------


class BesselFixture(PotentialSpec):
    """Bessel's equation: the reduction exists only over the complex numbers.

    The real engine reports NoRealK; the complex branch is computed here in
    complex arithmetic and checked against the expected rows, and the reduced
    equation is validated through a power-series solution.
    """

    id = "bessel"
    title = "Bessel equation (complex branch fixture)"
    param_specs = (ParamSpec("nu", 0.5, -0.5, description="order nu > -1/2"),)
    energy_units = "none (no spectrum)"
    has_spectrum = False

    def level_count(self, p):
        return 0

    def no_bound_states_message(self, p):
        return "Bessel's equation has no discrete spectrum; it is a reduction fixture only"

    def energy(self, p, level):
        raise NoBoundStates(self.no_bound_states_message(p))

    def state(self, p, level):
        raise NoBoundStates(self.no_bound_states_message(p))

    def coordinate_map(self, p):
        ident = lambda z: np.asarray(z)
        return CoordinateMap(ident, ident, lambda z: 1.0 + 0.0 * np.asarray(z), HALF_LINE, HALF_LINE, "z")

    def build(self, p, energy=0.0):
        nu = p["nu"]
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-nu * nu, 0.0, 1.0), LowPoly.of(1.0), HALF_LINE)

    def table_cases(self):
        return [({"nu": 0.5}, 0.0), ({"nu": 1.0}, 0.0), ({"nu": 2.3}, 0.0)]

    def expected_complex_rows(self, p) -> dict:
        nu = p["nu"]
        return {
            "k": 2j * nu,
            "pi": (nu, 1j),
            "tau": (1 + 2 * nu, 2j),
            "lambda": 1j * (2 * nu + 1),
            "phi": {"power_at_0": nu, "exp_linear": 1j},
            "rho": {"power_at_0": 2 * nu, "exp_linear": 2j},
        }

    def complex_reduction(self, p) -> dict:
        """The regular, e^{+iz} branch computed in complex arithmetic."""
        eq = self.build(p)
        s = eq.sigma.coeffs
        half = (eq.sigma.deriv() - eq.tau_tilde).scale(0.5)
        sq = np.convolve(half.coeffs, half.coeffs)[:3]
        q = [sq[i] - eq.sigma_tilde.coeffs[i] for i in range(3)]
        # discriminant of p = q + k sigma, a quadratic in k
        a2 = s[1] ** 2 - 4 * s[0] * s[2]
        a1 = 2 * q[1] * s[1] - 4 * (q[0] * s[2] + s[0] * q[2])
        a0 = q[1] ** 2 - 4 * q[0] * q[2]
        if a2 == 0:
            ks = [-a0 / a1]
        else:
            root = cmath.sqrt(a1 * a1 - 4 * a2 * a0)
            ks = [(-a1 + root) / (2 * a2), (-a1 - root) / (2 * a2)]
        branches = []
        for k in ks:
            p0, p1, p2 = (q[i] + k * s[i] for i in range(3))
            if p2 != 0:
                lead = cmath.sqrt(p2)
                rad = (lead * p1 / (2 * p2), lead)
            else:
                rad = (cmath.sqrt(p0), 0.0)
            for sign in (1, -1):
                pi0 = half.c0 + sign * rad[0]
                pi1 = half.c1 + sign * rad[1]
                tau = (eq.tau_tilde.c0 + 2 * pi0, eq.tau_tilde.c1 + 2 * pi1)
                branches.append({"k": k, "pi": (pi0, pi1), "tau": tau, "lambda": k + pi1})
        picked = [b for b in branches if b["pi"][0].real > 0 and b["pi"][1].imag > 0]
        if len(picked) != 1:
            raise ValueError("complex branch is not unique")
        b = picked[0]
        # phi'/phi = pi/z and rho'/rho = (tau - 1)/z for sigma = z
        b["phi"] = {"power_at_0": b["pi"][0], "exp_linear": b["pi"][1]}
        b["rho"] = {"power_at_0": b["tau"][0] - 1, "exp_linear": b["tau"][1]}
        return b

    def table_check(self, p, energy=0.0):
        p = self.validate(p)
        try:
            k_candidates(self.build(p))
            real_path = "unexpected real k"
        except NoRealK:
            real_path = "NoRealK"
        got = self.complex_reduction(p)
        want = self.expected_complex_rows(p)

        def rel(a, b):
            return abs(a - b) / max(abs(a), abs(b), 1.0)

        report = {
            "k": rel(got["k"], want["k"]),
            "pi": max(rel(x, y) for x, y in zip(got["pi"], want["pi"])),
            "tau": max(rel(x, y) for x, y in zip(got["tau"], want["tau"])),
            "lambda": rel(got["lambda"], want["lambda"]),
            "phi": max(rel(got["phi"][key], want["phi"][key]) for key in want["phi"]),
            "rho": max(rel(got["rho"][key], want["rho"][key]) for key in want["rho"]),
        }
        report["passed"] = real_path == "NoRealK" and all(v <= 1e-10 for v in report.values())
        report["real_path"] = real_path
        return report

    # -- series solution of the reduced equation -----------------------------

    @staticmethod
    def series_coefficients(nu: float, terms: int = 80) -> list:
        """y = sum a_j z^j solving z y'' + (2iz + 2nu + 1) y' + i(2nu + 1) y = 0."""
        a = [1.0 + 0j]
        for j in range(terms - 1):
            a.append(-1j * (2 * j + 2 * nu + 1) / ((j + 1) * (j + 1 + 2 * nu)) * a[-1])
        return a

    @classmethod
    def series_values(cls, nu: float, z: complex, terms: int = 80):
        a = cls.series_coefficients(nu, terms)
        y = sum(c * z ** j for j, c in enumerate(a))
        dy = sum(j * c * z ** (j - 1) for j, c in enumerate(a) if j >= 1)
        d2y = sum(j * (j - 1) * c * z ** (j - 2) for j, c in enumerate(a) if j >= 2)
        return y, dy, d2y

    @classmethod
    def reduced_residual(cls, nu: float, z: float) -> float:
        y, dy, d2y = cls.series_values(nu, z)
        terms = (z * d2y, (2j * z + 2 * nu + 1) * dy, 1j * (2 * nu + 1) * y)
        return abs(sum(terms)) / max(sum(abs(t) for t in terms), 1e-300)

    @classmethod
    def bessel_residual(cls, nu: float, z: float) -> float:
        """Residual of u'' + u'/z + (1 - nu^2/z^2) u for u = z^nu e^{iz} y."""
        y, dy, d2y = cls.series_values(nu, z)
        g = z ** nu * cmath.exp(1j * z)
        lg = nu / z + 1j
        g1 = g * lg
        g2 = g * (lg * lg - nu / z ** 2)
        u = g * y
        u1 = g1 * y + g * dy
        u2 = g2 * y + 2 * g1 * dy + g * d2y
        terms = (u2, u1 / z, (1 - nu * nu / z ** 2) * u)
        return abs(sum(terms)) / max(sum(abs(t) for t in terms), 1e-300)

    @classmethod
    def bessel_j_from_reduction(cls, nu: float, z: float) -> float:
        y, _, _ = cls.series_values(nu, z)
        u = z ** nu * cmath.exp(1j * z) * y
        return (u / (2 ** nu * gamma_value(nu + 1))).real

    @staticmethod
    def bessel_j_series(nu: float, z: float, terms: int = 60) -> float:
        return math.fsum((-1) ** k * (z / 2) ** (2 * k + nu) / (math.factorial(k) * gamma_value(k + nu + 1))
                         for k in range(terms))

    @staticmethod
    def bessel_j_poisson(nu: float, z: float, tol: float = 1e-13) -> float:
        integral = quadrature(lambda t: (1 - t * t) ** (nu - 0.5) * np.cos(z * t), (-1.0, 1.0), tol=tol)
        return (z / 2) ** nu / (math.sqrt(math.pi) * gamma_value(nu + 0.5)) * integral


def bessel_reduction_fixture(nu: float = 0.5) -> dict:
    """Bessel NuEquation plus the expected complex (k, pi, tau, lambda, phi) rows."""
    fx = BesselFixture()
    p = fx.validate({"nu": nu})
    return {"equation": fx.build(p), "expected": fx.expected_complex_rows(p), "computed": fx.complex_reduction(p)}
