"""Exponential-type molecular potentials: Hulthen, Morse and their variants.

The Hulthen family is quantized by terminating a 2F1 series; tau depends on
the energy there, so the engine route solves lambda(E) = lambda_n
self-consistently and ``termination_energy`` solves the series termination
condition directly as a second route.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParams, NoSolution
from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuEquation
from ..numeric_oracle import GridSpec
from ..poly_kernel import OrthoFamily, hyp2f1_terminating, log_gamma, ortho_eval, pochhammer
from .base import BoundState, CoordinateMap, ParamSpec, PotentialSpec, TableRows, bisect, fd_linear, radial_grid

HALF_LINE = Interval(0.0, math.inf)
UNIT = Interval(0.0, 1.0)

_SIGMA_UNIT = LowPoly.of(0.0, 1.0, -1.0)
_TAU_TILDE_UNIT = LowPoly.of(1.0, -1.0)


def _exp_map(a: float) -> CoordinateMap:
    return CoordinateMap(
        lambda r: np.exp(-np.asarray(r) / a),
        lambda xi: -a * np.log(np.asarray(xi)),
        lambda r: -np.exp(-np.asarray(r) / a) / a,
        HALF_LINE, UNIT, "xi = exp(-r / a)",
    )


def _energy_window(f, lo: float, hi: float) -> tuple:
    """(f(lo), f(hi)) ordered ascending."""
    x, y = f(lo), f(hi)
    return (x, y) if x < y else (y, x)


# ---------------------------------------------------------------------------
# Hulthen


class Hulthen(PotentialSpec):
    id = "hulthen"
    title = "Hulthen potential -V0 exp(-r/a)/(1 - exp(-r/a)), l = 0"
    param_specs = (
        ParamSpec("V0", 1.0, 0.0, description="depth scale"),
        ParamSpec("beta2", 2.0, 0.0, description="beta^2 = V0 a^2 / (hbar^2/2m)"),
        ParamSpec("a", 1.0, 0.0, description="range"),
    )
    energy_units = "same units as V0"

    def h2m(self, p) -> float:
        return p["V0"] * p["a"] ** 2 / p["beta2"]

    def alpha_of(self, p, energy) -> float:
        """alpha = sqrt(-E a^2 / (hbar^2/2m))."""
        return math.sqrt(-energy * p["a"] ** 2 / self.h2m(p))

    def energy_of(self, p, alpha) -> float:
        return -self.h2m(p) * alpha * alpha / p["a"] ** 2

    def alpha_n(self, p, n) -> float:
        return (p["beta2"] - n * n) / (2 * n)

    def first_level(self, p):
        return 1

    def level_count(self, p):
        # n >= 1 with n^2 < beta^2
        beta = math.sqrt(p["beta2"])
        return max(int(math.ceil(beta)) - 1, 0)

    def count_rule(self, p):
        return f"n^2 < beta^2 = {p['beta2']:g}"

    def no_bound_states_message(self, p):
        return (f"hulthen: beta^2 = {p['beta2']:g} <= 1 is below the minimum size of potential hole "
                "(beta^2 = 1) for any bound state")

    def energy(self, p, level):
        self.require_bound(p, level)
        b2 = p["beta2"]
        return -p["V0"] * ((b2 - level * level) / (2 * math.sqrt(b2) * level)) ** 2

    def coordinate_map(self, p):
        return _exp_map(p["a"])

    def build(self, p, energy):
        al2, b2 = self.alpha_of(p, energy) ** 2, p["beta2"]
        # (1 - xi)((alpha^2 + beta^2) xi - alpha^2)
        st = LowPoly.of(-al2, 2 * al2 + b2, -(al2 + b2))
        return NuEquation(_SIGMA_UNIT, st, _TAU_TILDE_UNIT, UNIT)

    def expected_rows(self, p, energy):
        al, b2 = self.alpha_of(p, energy), p["beta2"]
        return TableRows(
            k=b2 - al,
            pi=LowPoly.of(al, -(al + 1)),
            tau=LowPoly.of(2 * al + 1, -(2 * al + 3)),
            lambda_=b2 - 2 * al - 1,
            phi=ExpPowerProduct(factors=((0.0, al), (1.0, 1.0))),
            rho=ExpPowerProduct(factors=((0.0, 2 * al), (1.0, 1.0))),
        )

    def table_cases(self):
        # the first case is alpha = 0.5, beta^2 = 2 with V0 = a = 1
        return [({}, -0.125), ({"beta2": 9.0, "V0": 3.0}, -1.0), ({"beta2": 5.5, "a": 2.0}, -0.2)]

    def quantization_window(self, p, level):
        top = self.alpha_n(p, level - 0.5)
        low = self.alpha_n(p, level + 0.5)
        if low <= 0:
            low = 0.5 * self.alpha_n(p, level)
        return _energy_window(lambda al: self.energy_of(p, al), low, top)

    def termination_energy(self, p, level) -> float:
        """Energy from 1 + alpha - sqrt(alpha^2 + beta^2) = 1 - n (series termination)."""
        p = self.validate(p)
        self.require_bound(p, level)
        b2 = p["beta2"]
        f = lambda al: al - math.sqrt(al * al + b2) + level
        al = bisect(f, 1e-300, 0.5 * b2 + level)
        return self.energy_of(p, al)

    def norm_constant(self, p, n, al) -> float:
        return pochhammer(2 * al, n) / math.factorial(n) * math.sqrt((al + n) * (2 * al + n) / (2 * al * p["a"]))

    def state(self, p, level):
        self.require_bound(p, level)
        n, a = level, p["a"]
        al = self.alpha_n(p, n)
        c = self.norm_constant(p, n, al)

        def u(xi):
            xi = np.asarray(xi, dtype=float)
            return c * xi ** al * (1 - xi) * hyp2f1_terminating(1 - n, 1 + 2 * al + n, 2 * al + 1, xi)

        energy = self.energy(p, n)
        return BoundState(
            self.id, {"n": n}, energy, c, lambda r: u(np.exp(-np.asarray(r, dtype=float) / a)), "line",
            HALF_LINE, mapped_u=u, equation=self.build(p, energy), sample_window=(0.05, 0.95),
            polynomial=lambda xi: hyp2f1_terminating(1 - n, 1 + 2 * al + n, 2 * al + 1, xi),
            node_window=(0.0, 1.0), polynomial_part=("2F1", n - 1),
        )

    def normalization_cases(self):
        return [{"beta2": 10.0}, {"beta2": 17.0, "V0": 2.0, "a": 0.5}]

    def oracle_cases(self):
        return [{}, {"beta2": 20.0, "V0": 3.0}]

    def oracle(self, p, count=4):
        b2, a = p["beta2"], p["a"]
        count = min(count, self.level_count(p))
        levels = list(range(1, count + 1))
        al_min = self.alpha_n(p, levels[-1])
        grid = radial_grid(40.0 / al_min + 10.0, 20001)
        # -u'' - beta^2 e^{-x}/(1 - e^{-x}) u = -alpha^2 u in x = r/a
        return fd_linear(self, p, lambda x: -b2 / np.expm1(x), grid, levels,
                         lambda e: self.h2m(p) * e / a ** 2)


# ---------------------------------------------------------------------------
# Morse family


def morse_rotation_coeffs(alpha: float) -> tuple:
    """(C0, C1, C2) with 1/(1+x)^2 ~ C0 + C1 e^{-alpha x} + C2 e^{-2 alpha x} near x = 0."""
    if alpha == 0:
        raise InvalidParams("alpha must be nonzero")
    return (1 - 3 / alpha + 3 / alpha ** 2, 4 / alpha - 6 / alpha ** 2, -1 / alpha + 3 / alpha ** 2)


def _morse_params():
    return (
        ParamSpec("D", 100.0, 0.0, description="well depth"),
        ParamSpec("alpha", 2.0, 0.0, description="dimensionless stiffness; U = D(e^{-2 alpha x} - 2 e^{-alpha x})"),
        ParamSpec("r0", 1.0, 0.0, description="equilibrium distance; x = (r - r0)/r0"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
    )


def _morse_map(p, scale: float) -> CoordinateMap:
    al, r0 = p["alpha"], p["r0"]
    return CoordinateMap(
        lambda r: scale * np.exp(-al * (np.asarray(r) - r0) / r0),
        lambda xi: r0 * (1 - np.log(np.asarray(xi) / scale) / al),
        lambda r: -al / r0 * scale * np.exp(-al * (np.asarray(r) - r0) / r0),
        HALF_LINE, HALF_LINE, "xi = (2 gamma / alpha) exp(-alpha (r - r0)/r0)",
    )


def _morse_equation(alpha, beta, linear):
    """sigma = xi, tau~ = 1, sigma~ = -(beta/alpha)^2 + linear xi - xi^2/4."""
    return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-(beta / alpha) ** 2, linear, -0.25), LowPoly.of(1.0),
                      HALF_LINE)


def _morse_rows(alpha, beta, linear):
    s = beta / alpha
    return TableRows(
        k=linear - s,
        pi=LowPoly.of(s, -0.5),
        tau=LowPoly.of(1 + 2 * s, -1.0),
        lambda_=linear - s - 0.5,
        phi=ExpPowerProduct(LowPoly.of(0.0, -0.5), ((0.0, s),)),
        rho=ExpPowerProduct(LowPoly.of(0.0, -1.0), ((0.0, 2 * s),)),
    )


def _morse_state(spec, p, v, beta, scale, energy, equation, qn):
    al, r0 = p["alpha"], p["r0"]
    delta = 2 * beta / al
    c = math.exp(0.5 * (math.log(2 * beta) + math.lgamma(v + 1) - math.log(r0) - log_gamma(delta + v + 1)))
    fam = OrthoFamily.laguerre(delta)

    def u(xi):
        xi = np.asarray(xi, dtype=float)
        return c * xi ** (beta / al) * np.exp(-xi / 2) * ortho_eval(fam, v, xi)

    def psi(r):
        return u(scale * np.exp(-al * (np.asarray(r, dtype=float) - r0) / r0))

    return BoundState(
        spec.id, qn, energy, c, psi, "line", HALF_LINE, mapped_u=u, equation=equation,
        sample_window=(0.05, delta + 4 * v + 12), polynomial=lambda xi: ortho_eval(fam, v, xi),
        node_window=(0.0, delta + 4 * v + 40), polynomial_part=("laguerre", v),
    )


def _morse_fd(spec, p, levels, potential, beta_min, to_energy):
    # x = (r - r0)/r0 on (-1, X); the Dirichlet end at x = -1 is r = 0
    grid = GridSpec(-1.0, 40.0 / beta_min + 5.0 / p["alpha"], 20001)
    return fd_linear(spec, p, potential, grid, levels, to_energy)


class Morse(PotentialSpec):
    id = "morse"
    title = "Morse potential D(e^{-2 alpha x} - 2 e^{-alpha x}), l = 0"
    param_specs = _morse_params()
    level_name = "v"
    energy_units = "same units as D"

    def gamma(self, p) -> float:
        return p["r0"] * math.sqrt(p["D"] / p["h2m"])

    def beta_of(self, p, energy) -> float:
        return p["r0"] * math.sqrt(-energy / p["h2m"])

    def energy_of(self, p, beta) -> float:
        return -p["h2m"] * beta * beta / p["r0"] ** 2

    def beta_v(self, p, v) -> float:
        return self.gamma(p) - p["alpha"] * (v + 0.5)

    def level_count(self, p):
        # v < gamma/alpha - 1/2
        top = self.gamma(p) / p["alpha"] - 0.5
        return max(int(math.ceil(top)), 0)

    def count_rule(self, p):
        return f"v < gamma/alpha - 1/2 = {self.gamma(p) / p['alpha'] - 0.5:g}"

    def hbar_omega(self, p) -> float:
        return 2 * p["h2m"] * p["alpha"] * self.gamma(p) / p["r0"] ** 2

    def energy(self, p, level):
        self.require_bound(p, level)
        v = level + 0.5
        return -p["D"] + self.hbar_omega(p) * (v - p["alpha"] / (2 * self.gamma(p)) * v * v)

    def coordinate_map(self, p):
        return _morse_map(p, 2 * self.gamma(p) / p["alpha"])

    def build(self, p, energy):
        return _morse_equation(p["alpha"], self.beta_of(p, energy), self.gamma(p) / p["alpha"])

    def expected_rows(self, p, energy):
        return _morse_rows(p["alpha"], self.beta_of(p, energy), self.gamma(p) / p["alpha"])

    def table_cases(self):
        return [({}, -50.0), ({"D": 30.0, "alpha": 1.5, "r0": 2.0}, -7.0), ({"D": 5.0, "h2m": 0.02}, -1.0)]

    def quantization_window(self, p, level):
        hi = self.beta_v(p, level - 0.5)
        lo = self.beta_v(p, level + 0.5)
        if lo <= 0:
            lo = 0.5 * self.beta_v(p, level)
        return _energy_window(lambda b: self.energy_of(p, b), lo, hi)

    def state(self, p, level):
        self.require_bound(p, level)
        energy = self.energy(p, level)
        beta = self.beta_v(p, level)
        return _morse_state(self, p, level, beta, 2 * self.gamma(p) / p["alpha"], energy,
                            self.build(p, energy), {"v": level})

    def normalization_cases(self):
        return [{}, {"D": 30.0, "alpha": 1.5, "r0": 2.0}, {"D": 400.0, "alpha": 3.0, "h2m": 2.0}]

    def oracle_cases(self):
        return [{}, {"D": 30.0, "alpha": 1.5, "r0": 2.0}]

    def oracle(self, p, count=5):
        count = min(count, self.level_count(p))
        g2, al = self.gamma(p) ** 2, p["alpha"]
        levels = list(range(count))
        # -u'' + gamma^2 (e^{-2 alpha x} - 2 e^{-alpha x}) u = -beta^2 u
        return _morse_fd(self, p, levels, lambda x: g2 * (np.exp(-2 * al * x) - 2 * np.exp(-al * x)),
                         self.beta_v(p, levels[-1]), lambda e: p["h2m"] * e / p["r0"] ** 2)


class MorseRotation(PotentialSpec):
    """Morse potential with the centrifugal term replaced by its three-exponential fit.

    ``energy`` is the exact eigenvalue of that model equation; the expansion
    for large gamma is reported as ``expanded`` in the level extras.
    """

    id = "morse_rotation"
    title = "Morse potential with rotation correction"
    param_specs = _morse_params() + (
        ParamSpec("l", 1.0, 0.0, lower_inclusive=True, integer=True, description="rotational quantum number"),
    )
    level_name = "v"
    energy_units = "same units as D"

    def gamma(self, p) -> float:
        return p["r0"] * math.sqrt(p["D"] / p["h2m"])

    def model(self, p) -> dict:
        """Shifted parameters of the rotating model: beta1^2 - beta^2, gamma1^2, gamma2."""
        c0, c1, c2 = morse_rotation_coeffs(p["alpha"])
        ll = p["l"] * (p["l"] + 1)
        g2 = self.gamma(p) ** 2
        gamma1_sq = g2 - 0.5 * ll * c1
        gamma2_sq = g2 + ll * c2
        if gamma2_sq <= 0 or gamma1_sq <= 0:
            raise InvalidParams("rotation correction exceeds the well; gamma1^2 and gamma2^2 must be positive")
        return {"shift": ll * c0, "gamma1_sq": gamma1_sq, "gamma2": math.sqrt(gamma2_sq), "L": ll}

    def check_relations(self, p):
        self.model(p)

    def effective_gamma(self, p) -> float:
        m = self.model(p)
        return m["gamma1_sq"] / m["gamma2"]

    def beta1_of(self, p, energy) -> float:
        return math.sqrt(-energy * p["r0"] ** 2 / p["h2m"] + self.model(p)["shift"])

    def energy_of(self, p, beta1) -> float:
        return -p["h2m"] / p["r0"] ** 2 * (beta1 * beta1 - self.model(p)["shift"])

    def beta1_v(self, p, v) -> float:
        return self.effective_gamma(p) - p["alpha"] * (v + 0.5)

    def quantum_numbers(self, p, level):
        return {"v": level, "l": int(p["l"])}

    def level_count(self, p):
        top = self.effective_gamma(p) / p["alpha"] - 0.5
        return max(int(math.ceil(top)), 0)

    def count_rule(self, p):
        return f"v < (gamma1^2/gamma2)/alpha - 1/2 = {self.effective_gamma(p) / p['alpha'] - 0.5:g}"

    def energy(self, p, level):
        self.require_bound(p, level)
        return self.energy_of(p, self.beta1_v(p, level))

    def expanded_energy(self, p, level) -> float:
        """Large-gamma expansion of the model energy, second order in l(l+1)."""
        al, g, ll = p["alpha"], self.gamma(p), p["l"] * (p["l"] + 1)
        v = level + 0.5
        bracket = (-g * g + 2 * g * al * v - al * al * v * v + ll - 3 * (al - 1) / (al * g) * v * ll
                   - 9 * (al - 1) ** 2 / (4 * al ** 4 * g * g) * ll * ll)
        return p["h2m"] / p["r0"] ** 2 * bracket

    def expanded_energy_hbar_omega(self, p, level, alpha_power: int = 4) -> float:
        """The same expansion written with hbar omega and D.

        ``alpha_power`` is the power of alpha in the denominator of the
        second-order rotation term; 4 agrees with the bracketed form, the
        value 2 reproduces the alternative printing of this formula.
        """
        al, d, ll = p["alpha"], p["D"], p["l"] * (p["l"] + 1)
        g = self.gamma(p)
        hw = 2 * p["h2m"] * al * g / p["r0"] ** 2
        rot = p["h2m"] * ll / p["r0"] ** 2
        v = level + 0.5
        return (-d + hw * (v - al / (2 * g) * v * v) + rot - 3 * (al - 1) / (2 * al * al * d) * hw * v * rot
                - 9 * (al - 1) ** 2 / (4 * al ** alpha_power * d) * rot * rot)

    def energy_extras(self, p, level):
        return {"expanded": self.expanded_energy(p, level)}

    def coordinate_map(self, p):
        return _morse_map(p, 2 * self.model(p)["gamma2"] / p["alpha"])

    def build(self, p, energy):
        return _morse_equation(p["alpha"], self.beta1_of(p, energy), self.effective_gamma(p) / p["alpha"])

    def expected_rows(self, p, energy):
        return _morse_rows(p["alpha"], self.beta1_of(p, energy), self.effective_gamma(p) / p["alpha"])

    def table_cases(self):
        return [({}, -50.0), ({"D": 30.0, "alpha": 1.5, "r0": 2.0, "l": 3}, -7.0),
                ({"D": 5.0, "h2m": 0.02, "l": 10, "alpha": 2.5}, -1.0)]

    def quantization_window(self, p, level):
        hi = self.beta1_v(p, level - 0.5)
        lo = self.beta1_v(p, level + 0.5)
        if lo <= 0:
            lo = 0.5 * self.beta1_v(p, level)
        return _energy_window(lambda b: self.energy_of(p, b), lo, hi)

    def state(self, p, level):
        self.require_bound(p, level)
        energy = self.energy(p, level)
        return _morse_state(self, p, level, self.beta1_v(p, level), 2 * self.model(p)["gamma2"] / p["alpha"],
                            energy, self.build(p, energy), self.quantum_numbers(p, level))

    def normalization_cases(self):
        return [{}, {"D": 30.0, "alpha": 1.5, "r0": 2.0, "l": 3}, {"D": 400.0, "alpha": 3.5, "l": 5}]

    def oracle_cases(self):
        return [{}, {"D": 30.0, "alpha": 1.5, "r0": 2.0, "l": 3}]

    def oracle(self, p, count=4):
        count = min(count, self.level_count(p))
        g2, al, ll = self.gamma(p) ** 2, p["alpha"], p["l"] * (p["l"] + 1)
        c0, c1, c2 = morse_rotation_coeffs(al)
        levels = list(range(count))

        def potential(x):
            e1, e2 = np.exp(-al * x), np.exp(-2 * al * x)
            return g2 * (e2 - 2 * e1) + ll * (c0 + c1 * e1 + c2 * e2)

        return _morse_fd(self, p, levels, potential, self.beta1_v(p, levels[-1]),
                         lambda e: p["h2m"] * e / p["r0"] ** 2)


# ---------------------------------------------------------------------------
# modified Hulthen family


def _hulthen_type_equation(al2, b2, b):
    """sigma = xi(1 - xi), tau~ = 1 - xi, sigma~ = -(al2 + b b2) xi^2 + (2 al2 + b2) xi - al2."""
    return NuEquation(_SIGMA_UNIT, LowPoly.of(-al2, 2 * al2 + b2, -(al2 + b * b2)), _TAU_TILDE_UNIT, UNIT)


def _hulthen_type_rows(al, b2, kappa):
    return TableRows(
        k=b2 - 2 * al * kappa,
        pi=LowPoly.of(al, -(al + kappa + 0.5)),
        tau=LowPoly.of(2 * al + 1, -2 * (al + kappa + 1)),
        lambda_=b2 - (2 * al + 1) * (kappa + 0.5),
        phi=ExpPowerProduct(factors=((0.0, al), (1.0, kappa + 0.5))),
        rho=ExpPowerProduct(factors=((0.0, 2 * al), (1.0, 2 * kappa))),
    )


def _hulthen_type_norm(al, kappa, n, a) -> float:
    log_c2 = (log_gamma(2 * al + n + 1) + log_gamma(2 * al + 2 * kappa + n + 1) + math.log(2 * al + 2 * kappa + 2 * n + 1)
              - math.log(a * 2 * al) - 2 * log_gamma(2 * al) - log_gamma(2 * kappa + n + 1)
              - math.log(2 * kappa + 2 * n + 1) - math.lgamma(n + 1))
    return math.exp(0.5 * log_c2)


def _hulthen_type_state(spec, p, n, al, kappa, energy, equation, qn):
    a = p["a"]
    c = _hulthen_type_norm(al, kappa, n, a)

    def poly(xi):
        return hyp2f1_terminating(-n, 2 * al + 2 * kappa + n + 1, 2 * al + 1, xi)

    def u(xi):
        xi = np.asarray(xi, dtype=float)
        return c * xi ** al * (1 - xi) ** (kappa + 0.5) * poly(xi)

    return BoundState(
        spec.id, qn, energy, c, lambda r: u(np.exp(-np.asarray(r, dtype=float) / a)), "line", HALF_LINE,
        mapped_u=u, equation=equation, sample_window=(0.05, 0.95), polynomial=poly, node_window=(0.0, 1.0),
        polynomial_part=("2F1", n),
    )


def _hulthen_type_alpha(b_beta2, big_n) -> float:
    """alpha = (b beta^2 - N^2)/(2N) with N = n + kappa + 1/2."""
    return (b_beta2 - big_n * big_n) / (2 * big_n)


def _hulthen_type_count(b_beta2, kappa) -> int:
    # n + kappa + 1/2 < sqrt(b beta^2)
    top = math.sqrt(b_beta2) - kappa - 0.5
    return max(int(math.ceil(top)), 0) if top > 0 else 0


def _hulthen_type_termination(b_beta2, kappa, n) -> float:
    """alpha from alpha + kappa + 1/2 - sqrt(alpha^2 + b beta^2) = -n."""
    f = lambda al: al + kappa + 0.5 + n - math.sqrt(al * al + b_beta2)
    return bisect(f, 1e-300, b_beta2 + 1.0)


def _hulthen_type_fd_potential(b2, b):
    def potential(x):
        xi = np.exp(-x)
        return -b2 * xi * (1 - b * xi) / (-np.expm1(-x)) ** 2

    return potential


class ModifiedHulthen(PotentialSpec):
    id = "modified_hulthen"
    title = "modified Hulthen potential -V0 e^{-r/a}(1 - b e^{-r/a})/(1 - e^{-r/a})^2, l = 0"
    param_specs = (
        ParamSpec("V0", 1.0, 0.0, description="depth scale"),
        ParamSpec("b", 2.0, 1.0, description="shape parameter, b > 1"),
        ParamSpec("a", 1.0, 0.0, description="range"),
        ParamSpec("beta2", 40.0, 0.0, description="beta^2 = V0 a^2 / (hbar^2/2m)"),
    )
    energy_units = "same units as V0"

    def h2m(self, p) -> float:
        return p["V0"] * p["a"] ** 2 / p["beta2"]

    def kappa(self, p) -> float:
        return math.sqrt(0.25 + (p["b"] - 1) * p["beta2"])

    def alpha_of(self, p, energy) -> float:
        return math.sqrt(-energy * p["a"] ** 2 / self.h2m(p))

    def energy_of(self, p, alpha) -> float:
        return -self.h2m(p) * alpha * alpha / p["a"] ** 2

    def alpha_n(self, p, n) -> float:
        return _hulthen_type_alpha(p["b"] * p["beta2"], n + self.kappa(p) + 0.5)

    def level_count(self, p):
        return _hulthen_type_count(p["b"] * p["beta2"], self.kappa(p))

    def count_rule(self, p):
        return f"(n + kappa + 1/2)^2 < b beta^2 with kappa = {self.kappa(p):g}, b beta^2 = {p['b'] * p['beta2']:g}"

    def no_bound_states_message(self, p):
        return (f"modified_hulthen: b beta^2 <= (kappa + 1/2)^2, below the minimum size of potential hole "
                f"({self.count_rule(p)})")

    def energy(self, p, level):
        self.require_bound(p, level)
        big_n = level + self.kappa(p) + 0.5
        return -p["V0"] * ((p["b"] * p["beta2"] - big_n ** 2) / (2 * math.sqrt(p["beta2"]) * big_n)) ** 2

    def coordinate_map(self, p):
        return _exp_map(p["a"])

    def build(self, p, energy):
        return _hulthen_type_equation(self.alpha_of(p, energy) ** 2, p["beta2"], p["b"])

    def expected_rows(self, p, energy):
        return _hulthen_type_rows(self.alpha_of(p, energy), p["beta2"], self.kappa(p))

    def table_cases(self):
        return [({}, -3.0), ({"b": 1.5, "beta2": 60.0, "V0": 2.0}, -0.5), ({"b": 4.5, "beta2": 200.0, "a": 0.3}, -1.0)]

    def quantization_window(self, p, level):
        top = self.alpha_n(p, level - 0.5)
        low = self.alpha_n(p, level + 0.5)
        if low <= 0:
            low = 0.5 * self.alpha_n(p, level)
        return _energy_window(lambda al: self.energy_of(p, al), low, top)

    def termination_energy(self, p, level) -> float:
        p = self.validate(p)
        self.require_bound(p, level)
        al = _hulthen_type_termination(p["b"] * p["beta2"], self.kappa(p), level)
        return self.energy_of(p, al)

    def state(self, p, level):
        self.require_bound(p, level)
        energy = self.energy(p, level)
        return _hulthen_type_state(self, p, level, self.alpha_n(p, level), self.kappa(p), energy,
                                   self.build(p, energy), {"n": level})

    def normalization_cases(self):
        return [{}, {"b": 1.5, "beta2": 60.0, "V0": 2.0}, {"b": 4.5, "beta2": 200.0, "a": 0.3}]

    def oracle_cases(self):
        return [{}, {"b": 4.5, "beta2": 300.0, "a": 0.3}]

    def oracle(self, p, count=4):
        count = min(count, self.level_count(p))
        levels = list(range(count))
        grid = radial_grid(40.0 / self.alpha_n(p, levels[-1]) + 10.0, 20001)
        return fd_linear(self, p, _hulthen_type_fd_potential(p["beta2"], p["b"]), grid, levels,
                         lambda e: self.h2m(p) * e / p["a"] ** 2)


def mod_hulthen_rotation_coeffs(b: float) -> tuple:
    """(C0, C1, C2, x0) fitting 1/(1+x)^2 near the minimum e^{x0} = 2b - 1."""
    if not b > 1:
        raise InvalidParams(f"b must be > 1, got {b}")
    x0 = math.log(2 * b - 1)
    den = (2 * b - 1) ** 2 * x0 ** 2
    c0 = 1 + 4 * (b - 1) * (3 * (b - 1) - (3 * b - 1) * x0) / den
    c1 = 8 * (b - 1) ** 2 * (6 * (1 - b) + (4 * b - 1) * x0) / den
    c2 = 8 * (b - 1) ** 2 * (6 * b * (b - 1) + (1 - 2 * b * (b + 1)) * x0) / den
    return c0, c1, c2, x0


def mod_hulthen_rotation_params(alpha2: float, beta2: float, b: float, l: int) -> dict:
    """Shifted (alpha1^2, beta1^2, beta2_sq = b1 beta1^2, b1, kappa1) for angular momentum l."""
    c0, c1, c2, x0 = mod_hulthen_rotation_coeffs(b)
    ll = l * (l + 1) / x0 ** 2
    beta1_sq = beta2 - ll * c1
    beta2_sq = b * beta2 + ll * c2
    if beta1_sq <= 0:
        raise InvalidParams("rotation correction makes beta1^2 nonpositive")
    kappa_sq = 0.25 + beta2_sq - beta1_sq
    if kappa_sq <= 0:
        raise InvalidParams("rotation correction makes kappa1 imaginary")
    return {"alpha1_sq": alpha2 + ll * c0, "beta1_sq": beta1_sq, "beta2_sq": beta2_sq, "b1": beta2_sq / beta1_sq,
            "kappa1": math.sqrt(kappa_sq), "x0": x0, "C": (c0, c1, c2)}


class ModifiedHulthenRotation(PotentialSpec):
    id = "modified_hulthen_rotation"
    title = "modified Hulthen potential with rotation correction"
    param_specs = ModifiedHulthen.param_specs + (
        ParamSpec("l", 1.0, 0.0, lower_inclusive=True, integer=True, description="rotational quantum number"),
    )
    level_name = "v"
    energy_units = "same units as V0"

    def h2m(self, p) -> float:
        return p["V0"] * p["a"] ** 2 / p["beta2"]

    def model(self, p) -> dict:
        return mod_hulthen_rotation_params(0.0, p["beta2"], p["b"], int(p["l"]))

    def check_relations(self, p):
        self.model(p)

    def rotation_shift(self, p) -> float:
        """Rotational energy at the minimum, h2m l(l+1) C0 / r_min^2."""
        m = self.model(p)
        return self.h2m(p) * m["alpha1_sq"] / p["a"] ** 2

    def alpha1_of(self, p, energy) -> float:
        return math.sqrt(-energy * p["a"] ** 2 / self.h2m(p) + self.model(p)["alpha1_sq"])

    def energy_of(self, p, alpha1) -> float:
        return -self.h2m(p) / p["a"] ** 2 * (alpha1 * alpha1 - self.model(p)["alpha1_sq"])

    def alpha1_v(self, p, v) -> float:
        m = self.model(p)
        return _hulthen_type_alpha(m["beta2_sq"], v + m["kappa1"] + 0.5)

    def quantum_numbers(self, p, level):
        return {"v": level, "l": int(p["l"])}

    def level_count(self, p):
        m = self.model(p)
        return _hulthen_type_count(m["beta2_sq"], m["kappa1"])

    def count_rule(self, p):
        m = self.model(p)
        return f"(v + kappa1 + 1/2)^2 < beta2^2 with kappa1 = {m['kappa1']:g}, beta2^2 = {m['beta2_sq']:g}"

    def energy(self, p, level):
        self.require_bound(p, level)
        m = self.model(p)
        big_n = level + m["kappa1"] + 0.5
        vib = -p["V0"] * ((m["beta2_sq"] - big_n ** 2) / (2 * math.sqrt(p["beta2"]) * big_n)) ** 2
        return vib + self.rotation_shift(p)

    def coordinate_map(self, p):
        return _exp_map(p["a"])

    def build(self, p, energy):
        m = self.model(p)
        return _hulthen_type_equation(self.alpha1_of(p, energy) ** 2, m["beta1_sq"], m["b1"])

    def expected_rows(self, p, energy):
        m = self.model(p)
        return _hulthen_type_rows(self.alpha1_of(p, energy), m["beta1_sq"], m["kappa1"])

    def table_cases(self):
        return [({}, -3.0), ({"b": 1.5, "beta2": 60.0, "V0": 2.0, "l": 2}, -0.5),
                ({"b": 4.5, "beta2": 200.0, "a": 0.3, "l": 4}, -1.0)]

    def quantization_window(self, p, level):
        top = self.alpha1_v(p, level - 0.5)
        low = self.alpha1_v(p, level + 0.5)
        if low <= 0:
            low = 0.5 * self.alpha1_v(p, level)
        return _energy_window(lambda al: self.energy_of(p, al), low, top)

    def termination_energy(self, p, level) -> float:
        p = self.validate(p)
        self.require_bound(p, level)
        m = self.model(p)
        al1 = _hulthen_type_termination(m["beta2_sq"], m["kappa1"], level)
        return self.energy_of(p, al1)

    def state(self, p, level):
        self.require_bound(p, level)
        energy = self.energy(p, level)
        m = self.model(p)
        return _hulthen_type_state(self, p, level, self.alpha1_v(p, level), m["kappa1"], energy,
                                   self.build(p, energy), self.quantum_numbers(p, level))

    def normalization_cases(self):
        return [{}, {"b": 1.5, "beta2": 60.0, "V0": 2.0, "l": 2}, {"b": 4.5, "beta2": 200.0, "a": 0.3, "l": 4}]

    def oracle_cases(self):
        return [{}, {"b": 4.5, "beta2": 200.0, "a": 0.3, "l": 4}]

    def oracle(self, p, count=4):
        count = min(count, self.level_count(p))
        levels = list(range(count))
        m = self.model(p)
        c0, c1, c2 = m["C"]
        ll = p["l"] * (p["l"] + 1) / m["x0"] ** 2
        base = _hulthen_type_fd_potential(p["beta2"], p["b"])

        def potential(x):
            xi = np.exp(-x)
            return base(x) + ll * (c0 + xi * (c1 + c2 * xi) / (-np.expm1(-x)) ** 2)

        grid = radial_grid(40.0 / self.alpha1_v(p, levels[-1]) + 10.0, 20001)
        return fd_linear(self, p, potential, grid, levels, lambda e: self.h2m(p) * e / p["a"] ** 2)


# ---------------------------------------------------------------------------
# Morse <-> modified Hulthen matching


def phi_b(b: float) -> float:
    """(2b - 1) ln(2b - 1) / (2(b - 1)), the stiffness matched by shape parameter b."""
    t = 2 * b - 1
    return t * math.log(t) / (2 * (b - 1))


PHI_BRACKET = (1 + 1e-12, 1e6)


def match_morse_to_modified_hulthen(D: float, alpha: float, r0: float) -> tuple:
    """Modified Hulthen (V0, b, a) sharing the minimum, depth and curvature of a Morse well."""
    for name, val in (("D", D), ("r0", r0)):
        if not val > 0:
            raise InvalidParams(f"{name} must be > 0, got {val}")
    lo, hi = PHI_BRACKET
    f_lo, f_hi = phi_b(lo), phi_b(hi)
    if not f_lo < alpha < f_hi:
        raise NoSolution(f"alpha = {alpha} is outside the range ({f_lo:.6g}, {f_hi:.6g}) of phi(b)")
    b = bisect(lambda x: phi_b(x) - alpha, lo, hi, rel_tol=1e-15)
    return 4 * (b - 1) * D, b, r0 / math.log(2 * b - 1)


def morse_equivalent(V0: float, b: float, a: float) -> tuple:
    """Morse (D, alpha, r0) matched to a modified Hulthen well."""
    if not b > 1:
        raise InvalidParams(f"b must be > 1, got {b}")
    return V0 / (4 * (b - 1)), phi_b(b), a * math.log(2 * b - 1)


def morse_potential(r, D, alpha, r0):
    x = (np.asarray(r, dtype=float) - r0) / r0
    return D * (np.exp(-2 * alpha * x) - 2 * np.exp(-alpha * x))


def modified_hulthen_potential(r, V0, b, a):
    xi = np.exp(-np.asarray(r, dtype=float) / a)
    return -V0 * xi * (1 - b * xi) / (1 - xi) ** 2


def generalized_morse_params(D: float, a_rate: float, r0: float) -> tuple:
    """Modified Hulthen (V0, b, a) equal to the generalized Morse well minus its limit D."""
    for name, val in (("D", D), ("a_rate", a_rate), ("r0", r0)):
        if not val > 0:
            raise InvalidParams(f"{name} must be > 0, got {val}")
    e = math.exp(a_rate * r0)
    return 2 * D * (e - 1), 0.5 * (1 + e), 1 / a_rate


# ---------------------------------------------------------------------------
# generalized Morse


class GeneralizedMorse(PotentialSpec):
    id = "generalized_morse"
    title = "generalized Morse potential D(1 - gamma/(e^{a r} - 1))^2, gamma = e^{a r0} - 1"
    param_specs = (
        ParamSpec("D", 10.0, 0.0, description="dissociation limit U(infinity)"),
        ParamSpec("a", 1.0, 0.0, description="rate"),
        ParamSpec("r0", 1.0, 0.0, description="position of the minimum"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
    )
    energy_units = "same units as D"

    def gamma(self, p) -> float:
        return math.expm1(p["a"] * p["r0"])

    def kappa(self, p) -> float:
        return p["D"] / (p["a"] ** 2 * p["h2m"])

    def delta(self, p) -> float:
        return 0.5 + math.sqrt(0.25 + self.kappa(p) * self.gamma(p) ** 2)

    def big_k(self, p) -> float:
        g = self.gamma(p)
        return self.kappa(p) * g * (g + 2)

    def scaled(self, p, energy) -> float:
        """epsilon = E / (a^2 hbar^2/2m)."""
        return energy / (p["a"] ** 2 * p["h2m"])

    def alpha_beta(self, p, energy) -> tuple:
        kap, eps, g = self.kappa(p), self.scaled(p, energy), self.gamma(p)
        return math.sqrt(kap - eps), math.sqrt(kap * (g + 1) ** 2 - eps)

    def alpha_n(self, p, n) -> float:
        big_n = n + self.delta(p)
        return 0.5 * (self.big_k(p) / big_n - big_n)

    def level_count(self, p):
        # n + delta < sqrt(kappa gamma (gamma + 2))
        top = math.sqrt(self.big_k(p)) - self.delta(p)
        return max(int(math.ceil(top)), 0) if top > 0 else 0

    def count_rule(self, p):
        return f"n + delta < sqrt(kappa gamma (gamma + 2)) = {math.sqrt(self.big_k(p)):g}, delta = {self.delta(p):g}"

    def energy_at(self, p, big_n) -> float:
        return p["D"] - p["a"] ** 2 * p["h2m"] / 4 * (big_n - self.big_k(p) / big_n) ** 2

    def energy(self, p, level):
        self.require_bound(p, level)
        return self.energy_at(p, level + self.delta(p))

    def coordinate_map(self, p):
        a = p["a"]
        return CoordinateMap(
            lambda r: 1 / np.expm1(a * np.asarray(r)),
            lambda eta: np.log1p(1 / np.asarray(eta)) / a,
            lambda r: -a * np.exp(a * np.asarray(r)) / np.expm1(a * np.asarray(r)) ** 2,
            HALF_LINE, HALF_LINE, "eta = 1/(e^{a r} - 1)",
        )

    def build(self, p, energy):
        kap, eps, g = self.kappa(p), self.scaled(p, energy), self.gamma(p)
        # eps - kappa (1 - gamma eta)^2
        st = LowPoly.of(eps - kap, 2 * kap * g, -kap * g * g)
        return NuEquation(LowPoly.of(0.0, 1.0, 1.0), st, LowPoly.of(1.0, 2.0), HALF_LINE)

    def expected_rows(self, p, energy):
        kap, g = self.kappa(p), self.gamma(p)
        al, be = self.alpha_beta(p, energy)
        return TableRows(
            k=2 * (al * al - al * be + kap * g),
            pi=LowPoly.of(al, al - be),
            tau=LowPoly.of(2 * al + 1, 2 * (al - be + 1)),
            lambda_=al - be + 2 * al * al - 2 * al * be + 2 * kap * g,
            phi=ExpPowerProduct(factors=((0.0, al), (-1.0, -be))),
            rho=ExpPowerProduct(factors=((0.0, 2 * al), (-1.0, -2 * be))),
        )

    def table_cases(self):
        # the first case is kappa = 2, epsilon = 1, gamma = 1
        return [({"D": 2.0, "r0": math.log(2.0)}, 1.0), ({}, 3.0), ({"D": 40.0, "a": 0.7, "r0": 2.0, "h2m": 0.5}, 5.0)]

    def quantization_window(self, p, level):
        big_n = level + self.delta(p)
        root = math.sqrt(self.big_k(p))
        lo = big_n - 0.5
        hi = min(big_n + 0.5, 0.5 * (big_n + root))
        return (self.energy_at(p, lo), self.energy_at(p, hi))

    def norm_constant(self, p, n, al) -> float:
        d = self.delta(p)
        log_c2 = (math.log(p["a"]) + math.log(al + n + d) + log_gamma(2 * al + n + 1) + log_gamma(2 * al + n + 2 * d)
                  - math.lgamma(n + 1) - math.log(n + d) - log_gamma(2 * al) - log_gamma(2 * al + 1)
                  - log_gamma(n + 2 * d))
        return math.exp(0.5 * log_c2)

    def state(self, p, level):
        self.require_bound(p, level)
        n, a, d = level, p["a"], self.delta(p)
        al = self.alpha_n(p, n)
        c = self.norm_constant(p, n, al)
        energy = self.energy(p, n)

        def poly(xi):
            return hyp2f1_terminating(-n, 2 * al + 2 * d + n, 2 * al + 1, xi)

        def psi(r):
            r = np.asarray(r, dtype=float)
            xi = np.exp(-a * r)
            return c * xi ** al * (-np.expm1(-a * r)) ** d * poly(xi)

        return BoundState(
            self.id, {"n": n}, energy, c, psi, "line", HALF_LINE,
            mapped_u=lambda eta: psi(np.log1p(1 / np.asarray(eta, dtype=float)) / a),
            equation=self.build(p, energy), sample_window=(0.05, 20.0), polynomial=poly, node_window=(0.0, 1.0),
            polynomial_part=("2F1", n),
        )

    def normalization_cases(self):
        return [{}, {"D": 40.0, "a": 0.7, "r0": 2.0, "h2m": 0.5}, {"D": 1.0, "r0": math.log(3.0), "h2m": 0.01}]

    def oracle_cases(self):
        return [{}, {"D": 40.0, "a": 0.7, "r0": 2.0, "h2m": 0.5}]

    def oracle(self, p, count=4):
        count = min(count, self.level_count(p))
        levels = list(range(count))
        kap, g, a = self.kappa(p), self.gamma(p), p["a"]
        grid = radial_grid(40.0 / self.alpha_n(p, levels[-1]) + 10.0, 20001)
        # -u'' + kappa (1 - gamma/(e^x - 1))^2 u = eps u in x = a r
        return fd_linear(self, p, lambda x: kap * (1 - g / np.expm1(np.minimum(x, 700.0))) ** 2, grid, levels,
                         lambda e: a * a * p["h2m"] * e)
