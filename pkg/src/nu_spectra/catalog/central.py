"""Central fields reduced through r^2 or r/a: the confinement model, the
three-dimensional oscillator and Kratzer's molecular potential."""
from __future__ import annotations

import math

import numpy as np

from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuEquation
from ..poly_kernel import OrthoFamily, log_gamma, ortho_eval
from .base import (
    BoundState,
    CoordinateMap,
    ParamSpec,
    PotentialSpec,
    TableRows,
    exponent_selector,
    fd_linear,
    radial_grid,
)

HALF_LINE = Interval(0.0, math.inf)


def _laguerre(alpha: float, n: int, x):
    return ortho_eval(OrthoFamily.laguerre(alpha), n, x)


def _square_map(scale: float, label: str) -> CoordinateMap:
    return CoordinateMap(
        lambda r: scale * np.asarray(r) ** 2,
        lambda xi: np.sqrt(np.asarray(xi) / scale),
        lambda r: 2 * scale * np.asarray(r),
        HALF_LINE, HALF_LINE, label,
    )


def _r_squared_state(spec, p, level, energy, scale, beta, phi_power, log_c2):
    """R(r) = C xi^phi_power e^(-xi/2) L_n^beta(xi) with xi = scale r^2."""
    n = level
    c = math.exp(0.5 * log_c2)

    def u(xi):
        xi = np.asarray(xi, dtype=float)
        return c * xi ** phi_power * np.exp(-xi / 2) * _laguerre(beta, n, xi)

    return BoundState(
        spec.id, spec.quantum_numbers(p, n), energy, c, lambda r: u(scale * np.asarray(r, dtype=float) ** 2),
        "line", HALF_LINE, mapped_u=u, equation=spec.build(p, energy),
        sample_window=(0.05, 3.0 * (2 * n + beta + 3)),
        polynomial=lambda xi: _laguerre(beta, n, xi),
        node_window=(0.0, 4 * n + 2 * beta + 30), polynomial_part=("laguerre", n),
    )


class Confinement3D(PotentialSpec):
    id = "confinement_3d"
    title = "3D confinement model V0 (r/a - a/r)^2"
    param_specs = (
        ParamSpec("V0", 1.0, 0.0, description="strength"),
        ParamSpec("a", 1.0, 0.0, description="position of the minimum"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
        ParamSpec("l", 0.0, 0.0, lower_inclusive=True, integer=True, description="orbital angular momentum"),
    )
    energy_units = "same units as V0"

    def alpha(self, p) -> float:
        return math.sqrt(p["V0"] / p["h2m"]) / p["a"]

    def beta(self, p) -> float:
        al = self.alpha(p)
        return math.sqrt((al * p["a"] ** 2) ** 2 + (p["l"] + 0.5) ** 2)

    def quantum_numbers(self, p, level):
        return {"n": level, "l": int(p["l"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return 2 * p["h2m"] * self.alpha(p) * (2 * level + 1 + self.beta(p)) - 2 * p["V0"]

    def scaled(self, p, energy) -> float:
        """(E + 2 V0) / (h2m alpha), the energy entering sigma_tilde."""
        return (energy + 2 * p["V0"]) / (p["h2m"] * self.alpha(p))

    def coordinate_map(self, p):
        return _square_map(self.alpha(p), "xi = alpha r^2")

    def build(self, p, energy):
        e = self.scaled(p, energy)
        al, l = self.alpha(p), p["l"]
        c0 = -(al ** 2 * p["a"] ** 4 + l * (l + 1))
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(c0 / 4, e / 4, -0.25), LowPoly.of(0.5), HALF_LINE)

    def expected_rows(self, p, energy):
        e = self.scaled(p, energy)
        b = self.beta(p)
        k = 0.5 * (e / 2 - b)
        return TableRows(
            k=k,
            pi=LowPoly.of(0.25 + b / 2, -0.5),
            tau=LowPoly.of(1 + b, -1.0),
            lambda_=k - 0.5,
            phi=ExpPowerProduct(LowPoly.of(0.0, -0.5), ((0.0, (b + 0.5) / 2),)),
            rho=ExpPowerProduct(LowPoly.of(0.0, -1.0), ((0.0, b),)),
        )

    def table_cases(self):
        return [({}, 1.0), ({"V0": 2.0, "a": 1.5, "l": 1}, 3.0), ({"V0": 0.5, "a": 0.7, "h2m": 0.3, "l": 3}, 2.2)]

    def quantization_window(self, p, level):
        s = p["h2m"] * self.alpha(p)
        b = self.beta(p)
        return (2 * s * (2 * level + b) - 2 * p["V0"], 2 * s * (2 * level + 2 + b) - 2 * p["V0"])

    def state(self, p, level):
        self.require_bound(p, level)
        b = self.beta(p)
        log_c2 = math.log(2.0) + math.lgamma(level + 1) + 0.5 * math.log(self.alpha(p)) - log_gamma(b + level + 1)
        return _r_squared_state(self, p, level, self.energy(p, level), self.alpha(p), b, (b + 0.5) / 2, log_c2)

    def normalization_cases(self):
        return [{}, {"V0": 2.0, "a": 1.5, "l": 1}, {"V0": 0.5, "a": 0.7, "h2m": 0.3, "l": 2}]

    def oracle_cases(self):
        return [{}, {"V0": 2.0, "a": 1.5, "l": 1}]

    def oracle(self, p, count=4):
        V0, a, h2m, l = p["V0"], p["a"], p["h2m"], p["l"]
        width = 1.0 / math.sqrt(self.alpha(p))
        grid = radial_grid(a + 12 * width * math.sqrt(count), 6001, a)

        def potential(r):
            return (V0 * (r / a - a / r) ** 2) / h2m + l * (l + 1) / r ** 2

        return fd_linear(self, p, potential, grid, list(range(count)), lambda e: h2m * e)


class Oscillator3D(PotentialSpec):
    id = "oscillator_3d"
    title = "3D spherical harmonic oscillator"
    param_specs = (
        ParamSpec("hw", 1.0, 0.0, description="quantum energy hbar*omega"),
        ParamSpec("mw", 1.0, 0.0, description="mu = m*omega/hbar"),
        ParamSpec("l", 0.0, 0.0, lower_inclusive=True, integer=True, description="orbital angular momentum"),
    )
    energy_units = "same units as hw"

    def quantum_numbers(self, p, level):
        return {"n": level, "l": int(p["l"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return p["hw"] * (2 * level + p["l"] + 1.5)

    def coordinate_map(self, p):
        return _square_map(p["mw"], "xi = mu r^2")

    def build(self, p, energy):
        eps, l = energy / p["hw"], p["l"]
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-l * (l + 1) / 4, eps / 2, -0.25), LowPoly.of(0.5),
                          HALF_LINE)

    def branch_selector(self, p):
        # for l = 0 the phi ~ xi^0 branch also passes the default rule; it is the
        # even 1D state with R(0) != 0, so the branch regular at r = 0 is requested
        return exponent_selector(0.0, (p["l"] + 1) / 2)

    def expected_rows(self, p, energy):
        eps, l = energy / p["hw"], p["l"]
        return TableRows(
            k=-0.5 * (l + 0.5 - eps),
            pi=LowPoly.of((l + 1) / 2, -0.5),
            tau=LowPoly.of(l + 1.5, -1.0),
            lambda_=-0.5 * (l + 1.5 - eps),
            phi=ExpPowerProduct(LowPoly.of(0.0, -0.5), ((0.0, (l + 1) / 2),)),
            rho=ExpPowerProduct(LowPoly.of(0.0, -1.0), ((0.0, l + 0.5),)),
        )

    def table_cases(self):
        return [({}, 1.5), ({"hw": 2.0, "l": 1}, 7.0), ({"hw": 0.5, "mw": 3.0, "l": 4}, 4.1)]

    def quantization_window(self, p, level):
        base = 2 * level + p["l"]
        return (p["hw"] * (base + 1.0), p["hw"] * (base + 2.0))

    def state(self, p, level):
        self.require_bound(p, level)
        l = p["l"]
        log_c2 = math.log(2.0) + math.lgamma(level + 1) + 0.5 * math.log(p["mw"]) - log_gamma(l + level + 1.5)
        return _r_squared_state(self, p, level, self.energy(p, level), p["mw"], l + 0.5, (l + 1) / 2, log_c2)

    def normalization_cases(self):
        return [{}, {"hw": 2.0, "mw": 0.5, "l": 1}, {"mw": 3.0, "l": 3}]

    def oracle_cases(self):
        return [{}, {"mw": 2.0, "l": 2}]

    def oracle(self, p, count=4):
        mu, l = p["mw"], p["l"]
        length = math.sqrt((4 * count + l + 30) / mu)
        grid = radial_grid(length, 6001, 1 / math.sqrt(mu))
        # -R'' + (mu^2 r^2 + l(l+1)/r^2) R = 2 mu eps R
        return fd_linear(self, p, lambda r: mu * mu * r * r + l * (l + 1) / r ** 2, grid, list(range(count)),
                         lambda e: p["hw"] * e / (2 * mu))


class Kratzer(PotentialSpec):
    id = "kratzer"
    title = "Kratzer molecular potential"
    param_specs = (
        ParamSpec("D", 1.0, 0.0, description="well depth, U(a) = -D"),
        ParamSpec("a", 1.0, 0.0, description="position of the minimum"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
        ParamSpec("l", 0.0, 0.0, lower_inclusive=True, integer=True, description="orbital angular momentum"),
    )
    energy_units = "same units as D"

    def gamma2(self, p) -> float:
        return p["D"] * p["a"] ** 2 / p["h2m"]

    def nu(self, p) -> float:
        return 0.5 + math.sqrt(self.gamma2(p) + (p["l"] + 0.5) ** 2)

    def beta_of(self, p, energy) -> float:
        return math.sqrt(-energy * p["a"] ** 2 / p["h2m"])

    def quantum_numbers(self, p, level):
        return {"n": level, "l": int(p["l"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return -(p["a"] ** 2 * p["D"] ** 2 / p["h2m"]) / (self.nu(p) + level) ** 2

    def coordinate_map(self, p):
        a = p["a"]
        return CoordinateMap(lambda r: np.asarray(r) / a, lambda x: a * np.asarray(x),
                             lambda r: 1 / a + 0.0 * np.asarray(r), HALF_LINE, HALF_LINE, "x = r / a")

    def build(self, p, energy):
        g2, b, l = self.gamma2(p), self.beta_of(p, energy), p["l"]
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-g2 - l * (l + 1), 2 * g2, -b * b), LowPoly.of(),
                          HALF_LINE)

    def expected_rows(self, p, energy):
        g2, b, nu = self.gamma2(p), self.beta_of(p, energy), self.nu(p)
        return TableRows(
            k=2 * g2 - b * (2 * nu - 1),
            pi=LowPoly.of(nu, -b),
            tau=LowPoly.of(2 * nu, -2 * b),
            lambda_=2 * (g2 - nu * b),
            phi=ExpPowerProduct(LowPoly.of(0.0, -b), ((0.0, nu),)),
            rho=ExpPowerProduct(LowPoly.of(0.0, -2 * b), ((0.0, 2 * nu - 1),)),
        )

    def table_cases(self):
        return [({}, -0.2), ({"D": 10.0, "a": 1.2, "l": 1}, -4.0), ({"D": 3.0, "h2m": 0.1, "l": 2}, -2.5)]

    def quantization_window(self, p, level):
        scale = p["a"] ** 2 * p["D"] ** 2 / p["h2m"]
        nu = self.nu(p)
        return (-scale / (level + nu - 0.5) ** 2, -scale / (level + nu + 0.5) ** 2)

    def state(self, p, level):
        self.require_bound(p, level)
        n, a = level, p["a"]
        nu = self.nu(p)
        energy = self.energy(p, n)
        b = self.beta_of(p, energy)
        log_c2 = ((2 * nu + 1) * math.log(2 * b) + math.lgamma(n + 1)
                  - math.log(a * (2 * nu + 2 * n)) - log_gamma(2 * nu + n))
        c = math.exp(0.5 * log_c2)

        def u(x):
            x = np.asarray(x, dtype=float)
            return c * x ** nu * np.exp(-b * x) * _laguerre(2 * nu - 1, n, 2 * b * x)

        return BoundState(
            self.id, self.quantum_numbers(p, n), energy, c, lambda r: u(np.asarray(r, dtype=float) / a),
            "line", HALF_LINE, mapped_u=u, equation=self.build(p, energy),
            sample_window=(0.05, (2 * nu + 2 * n + 10) / b),
            polynomial=lambda x: _laguerre(2 * nu - 1, n, 2 * b * np.asarray(x)),
            node_window=(0.0, (4 * n + 4 * nu + 30) / (2 * b)), polynomial_part=("laguerre", n),
        )

    def normalization_cases(self):
        return [{}, {"D": 10.0, "a": 1.2, "l": 1}, {"D": 3.0, "a": 2.0, "h2m": 0.5, "l": 2}]

    def oracle_cases(self):
        return [{"D": 10.0}, {"D": 4.0, "a": 1.5, "l": 1}]

    def oracle(self, p, count=4):
        g2, l, a, h2m = self.gamma2(p), p["l"], p["a"], p["h2m"]
        b_min = self.beta_of(p, self.energy(p, count - 1))
        grid = radial_grid((2 * self.nu(p) + 2 * count + 30) / b_min, 8001, 1.0)
        # -u'' + ((g2 + l(l+1))/x^2 - 2 g2/x) u = -beta^2 u in x = r/a
        return fd_linear(self, p, lambda x: (g2 + l * (l + 1)) / x ** 2 - 2 * g2 / x, grid, list(range(count)),
                         lambda e: h2m * e / a ** 2)
