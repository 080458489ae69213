"""Coulomb field: the nonrelativistic problem, the relativistic Schroedinger
equation and the Dirac equation, with the Dirac decoupling, the radial pair
and the fine-structure expansion check."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..constants import FINE_STRUCTURE, HARTREE, REST_ENERGY
from ..errors import ExtrapolationUnstable, InvalidParams, SupercriticalCharge
from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuEquation
from ..numeric_oracle import first_derivative_5pt
from ..poly_kernel import OrthoFamily, log_gamma, ortho_eval
from .base import (
    BoundState,
    CoordinateMap,
    OracleRun,
    ParamSpec,
    PotentialSpec,
    TableRows,
    exponent_selector,
    fd_linear,
    fd_self_consistent,
    radial_grid,
)

HALF_LINE = Interval(0.0, math.inf)


def _laguerre(alpha: float, n: int, x):
    if n < 0:
        return 0.0 * np.asarray(x, dtype=float)
    return ortho_eval(OrthoFamily.laguerre(alpha), n, x)


def _scaled_map(beta: float, label: str) -> CoordinateMap:
    return CoordinateMap(lambda r: beta * np.asarray(r), lambda x: np.asarray(x) / beta,
                         lambda r: beta + 0.0 * np.asarray(r), HALF_LINE, HALF_LINE, label)


def _coulomb_rows(sigma_tilde_c1: float, a: float, nu: float) -> TableRows:
    """Rows shared by the three Coulomb tables: pi = nu + 1 - a x."""
    return TableRows(
        k=sigma_tilde_c1 - (2 * nu + 1) * a,
        pi=LowPoly.of(nu + 1, -a),
        tau=LowPoly.of(2 * (nu + 1), -2 * a),
        lambda_=sigma_tilde_c1 - 2 * (nu + 1) * a,
        phi=ExpPowerProduct(LowPoly.of(0.0, -a), ((0.0, nu + 1),)),
        rho=ExpPowerProduct(LowPoly.of(0.0, -2 * a), ((0.0, 2 * nu + 1),)),
    )


# ---------------------------------------------------------------------------


class Coulomb(PotentialSpec):
    id = "coulomb"
    title = "nonrelativistic Coulomb problem"
    param_specs = (
        ParamSpec("Z", 1.0, 0.0, description="nuclear charge"),
        ParamSpec("l", 0.0, 0.0, lower_inclusive=True, integer=True, description="orbital angular momentum"),
    )
    energy_units = "E0 = e^2/a0 (r in units of a0)"
    oracle_tolerance = 2e-3

    def first_level(self, p):
        return int(p["l"]) + 1

    def quantum_numbers(self, p, level):
        return {"n": level, "l": int(p["l"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return -p["Z"] ** 2 / (2.0 * level * level)

    def physical_energy(self, p, energy):
        return energy * HARTREE, "erg"

    def coordinate_map(self, p):
        return _scaled_map(1.0, "x = r / a0")

    def build(self, p, eps0):
        l = p["l"]
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-l * (l + 1), 2 * p["Z"], 2 * eps0), LowPoly.of(),
                          HALF_LINE)

    def expected_rows(self, p, eps0):
        return _coulomb_rows(2 * p["Z"], math.sqrt(-2 * eps0), p["l"])

    def table_cases(self):
        return [({"Z": 1, "l": 0}, -0.5), ({"Z": 2, "l": 1}, -0.3), ({"Z": 1.5, "l": 2}, -0.07)]

    def quantization_window(self, p, level):
        z2 = p["Z"] ** 2
        return (-z2 / (2 * (level - 0.5) ** 2), -z2 / (2 * (level + 0.5) ** 2))

    def state(self, p, level):
        self.require_bound(p, level)
        Z, l, n = p["Z"], int(p["l"]), level
        nr = n - l - 1
        c = 2.0 / n ** 2 * Z ** 1.5 * math.exp(0.5 * (math.lgamma(nr + 1) - math.lgamma(n + l + 1)))
        s = 2.0 * Z / n

        def R(r):
            eta = s * np.asarray(r, dtype=float)
            return c * np.exp(-eta / 2) * eta ** l * _laguerre(2 * l + 1, nr, eta)

        eps = self.energy(p, n)
        return BoundState(
            self.id, self.quantum_numbers(p, n), eps, c, R, "radial", HALF_LINE,
            mapped_u=lambda x: np.asarray(x) * R(x), equation=self.build(p, eps),
            sample_window=(0.05, 4.0 * n * n / Z),
            polynomial=lambda x: _laguerre(2 * l + 1, nr, s * np.asarray(x)),
            node_window=(0.0, (4 * nr + 2 * l + 20) / s), polynomial_part=("laguerre", nr),
        )

    def normalization_cases(self):
        return [{"Z": 1, "l": 0}, {"Z": 2, "l": 1}, {"Z": 1, "l": 2}]

    def oracle_cases(self):
        return [{"Z": 1, "l": 0}, {"Z": 1, "l": 1}]

    def oracle(self, p, count=3):
        Z, l = p["Z"], p["l"]
        first = self.first_level(p)
        levels = list(range(first, first + count))
        n_max = levels[-1]
        grid = radial_grid(12.0 * n_max * n_max / Z + 20.0 / Z, 8001, 1.0 / Z)
        return fd_linear(self, p, lambda x: l * (l + 1) / x ** 2 - 2 * Z / x, grid, levels, lambda e: e / 2)


# ---------------------------------------------------------------------------


def _coupling(p) -> float:
    return p["Z"] * p["alpha"]


def _check_cancellation_free(t: float) -> float:
    """1/sqrt(1 + t) - 1 without cancellation."""
    root = math.sqrt(1.0 + t)
    return -t / (root * (1.0 + root))


def _level_bound(mu: float, denominator: float) -> float:
    return 1.0 / math.sqrt(1.0 + (mu / denominator) ** 2)


class RelativisticSchrodinger(PotentialSpec):
    id = "relativistic_schrodinger"
    title = "relativistic Schroedinger (Klein-Gordon) equation, Coulomb field"
    param_specs = (
        ParamSpec("Z", 1.0, 0.0, description="nuclear charge"),
        ParamSpec("alpha", FINE_STRUCTURE, 0.0, description="coupling e^2/(hbar c); mu = Z alpha"),
        ParamSpec("l", 0.0, 0.0, lower_inclusive=True, integer=True, description="orbital angular momentum"),
        ParamSpec("beta", 1.0, 0.0, description="inverse length mc/hbar; x = beta r"),
    )
    level_name = "n_r"
    energy_units = "mc^2"
    oracle_tolerance = 1e-6
    # the energy enters the effective potential, so levels are not orthogonal in r^2 dr
    orthogonal_states = False

    def check_relations(self, p):
        if _coupling(p) >= p["l"] + 0.5:
            raise SupercriticalCharge(f"mu = {_coupling(p)} must be below l + 1/2 = {p['l'] + 0.5}")

    def nu(self, p) -> float:
        return -0.5 + math.sqrt((p["l"] + 0.5) ** 2 - _coupling(p) ** 2)

    def quantum_numbers(self, p, level):
        return {"n_r": level, "l": int(p["l"])}

    def energy(self, p, level):
        self.require_bound(p, level)
        return 1.0 + self.binding(p, level)

    def binding(self, p, level) -> float:
        """epsilon - 1, computed without cancellation."""
        return _check_cancellation_free((_coupling(p) / (level + self.nu(p) + 1)) ** 2)

    def physical_energy(self, p, energy):
        return energy * REST_ENERGY, "erg"

    def coordinate_map(self, p):
        return _scaled_map(p["beta"], "x = (mc/hbar) r")

    def build(self, p, eps):
        mu, l = _coupling(p), p["l"]
        return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(mu * mu - l * (l + 1), 2 * mu * eps, eps * eps - 1),
                          LowPoly.of(), HALF_LINE)

    def branch_selector(self, p):
        return exponent_selector(0.0, self.nu(p) + 1)

    def expected_rows(self, p, eps):
        return _coulomb_rows(2 * _coupling(p) * eps, math.sqrt(1 - eps * eps), self.nu(p))

    def table_cases(self):
        return [({"alpha": 0.3, "l": 0}, 0.95), ({"alpha": 0.1, "l": 1}, 0.99),
                ({"Z": 2, "alpha": 0.4, "l": 2}, 0.8)]

    def quantization_window(self, p, level):
        # nu + 1 lies in (1/2, l + 1]
        mu = _coupling(p)
        return (_level_bound(mu, level + 0.5), _level_bound(mu, level + p["l"] + 1.5))

    def state(self, p, level):
        self.require_bound(p, level)
        nr, beta = level, p["beta"]
        nu = self.nu(p)
        eps = self.energy(p, nr)
        a = math.sqrt(-self.binding(p, nr) * (1 + eps))
        log_c = (math.log(2.0) + 1.5 * math.log(a * beta) + nu * math.log(2 * a)
                 + 0.5 * (math.lgamma(nr + 1) - math.log(nu + nr + 1) - log_gamma(2 * nu + nr + 2)))
        c = math.exp(log_c)

        def R(r):
            x = beta * np.asarray(r, dtype=float)
            return c * x ** nu * np.exp(-a * x) * _laguerre(2 * nu + 1, nr, 2 * a * x)

        return BoundState(
            self.id, self.quantum_numbers(p, nr), eps, c, R, "radial", HALF_LINE,
            mapped_u=lambda x: np.asarray(x) * R(np.asarray(x) / beta), equation=self.build(p, eps),
            sample_window=(0.05 / a, 6.0 / a),
            polynomial=lambda x: _laguerre(2 * nu + 1, nr, 2 * a * np.asarray(x)),
            node_window=(0.0, (4 * nr + 2 * nu + 20) / (2 * a)), polynomial_part=("laguerre", nr),
        )

    def normalization_cases(self):
        return [{"alpha": 0.3, "l": 0}, {"alpha": 0.5, "l": 1}, {"alpha": 0.2, "l": 2, "beta": 2.0}]

    def oracle_cases(self):
        # the x^(nu + 1) behaviour at the origin slows FD convergence as mu grows for l = 0
        return [{"alpha": 0.1, "l": 0}, {"alpha": 0.4, "l": 1}]

    def oracle(self, p, count=3):
        mu, l = _coupling(p), p["l"]
        levels = list(range(count))
        a_min = mu / (count + self.nu(p))
        grid = radial_grid(40.0 / a_min, 8001, 1.0 / mu)
        numeric = []
        for j in levels:
            # -u'' + (l(l+1) - mu^2)/x^2 u - 2 mu eps/x u = (eps^2 - 1) u
            eps = fd_self_consistent(
                lambda e: (lambda x: (l * (l + 1) - mu * mu) / x ** 2 - 2 * mu * e / x),
                grid, j, lambda e: e * e - 1, 0.3, 1.0 - 1e-10)
            numeric.append(eps)
        closed = tuple(self.energy(p, j) for j in levels)
        return OracleRun(tuple(levels), closed, tuple(numeric), self.oracle_tolerance, True, float("nan"))


# ---------------------------------------------------------------------------


def _dirac_nu(mu: float, kappa: float) -> float:
    if kappa == 0 or kappa != round(kappa):
        raise InvalidParams(f"kappa must be a nonzero integer, got {kappa}")
    if mu >= abs(kappa):
        raise SupercriticalCharge(f"mu = {mu} must be below |kappa| = {abs(kappa)}")
    return math.sqrt(kappa * kappa - mu * mu)


def dirac_energy(n_r: int, kappa: float, mu: float) -> float:
    nu = _dirac_nu(mu, kappa)
    return 1.0 / math.sqrt(1.0 + (mu / (n_r + nu)) ** 2)


def _dirac_equation(eps: float, mu: float, nu: float) -> NuEquation:
    """v'' + ((eps^2 - 1)x^2 + 2 eps mu x - nu(nu + 1))/x^2 v = 0; nu -> -nu gives v2."""
    return NuEquation(LowPoly.of(0.0, 1.0), LowPoly.of(-nu * (nu + 1), 2 * mu * eps, eps * eps - 1),
                      LowPoly.of(), HALF_LINE)


@dataclass(frozen=True)
class DiracDecoupling:
    v1_equation: NuEquation
    v2_equation: NuEquation
    transform: np.ndarray
    f1: float
    f2: float
    g1: float
    g2: float
    nu: float

    def radial_matrix(self, x: float, eps: float, mu: float, kappa: float) -> np.ndarray:
        """A(x) of u' = A u with u = (x f, x g)."""
        return np.array([[-kappa / x, 1 + eps + mu / x], [1 - eps - mu / x, kappa / x]])

    def transformed_matrix(self, x: float, eps: float, mu: float, kappa: float) -> np.ndarray:
        c = self.transform
        return c @ self.radial_matrix(x, eps, mu, kappa) @ np.linalg.inv(c)


def dirac_decouple(epsilon: float, mu: float, kappa: float) -> DiracDecoupling:
    """Similarity transform of the radial Dirac system with C = [[mu, nu - kappa], [nu - kappa, mu]].

    Returns the two decoupled second-order equations and the coefficients
    f1, f2, g1, g2 that rebuild (f, g) from the Laguerre components; f1 and
    g1 are nan where epsilon kappa = nu.
    """
    nu = _dirac_nu(mu, kappa)
    a = math.sqrt(max(0.0, 1 - epsilon * epsilon))
    den = epsilon * kappa - nu
    f1 = a * mu / den if den != 0 else math.nan
    g1 = a * (kappa - nu) / den if den != 0 else math.nan
    c = np.array([[mu, nu - kappa], [nu - kappa, mu]], dtype=float)
    return DiracDecoupling(_dirac_equation(epsilon, mu, nu), _dirac_equation(epsilon, mu, -nu), c,
                           f1, kappa - nu, g1, mu, nu)


@dataclass(frozen=True)
class DiracRadialPair:
    n_r: int
    kappa: int
    mu: float
    nu: float
    energy: float
    a: float
    beta: float
    f1: float
    f2: float
    g1: float
    g2: float
    Bn: float
    f: Callable
    g: Callable
    v1: str
    v2: str

    def system_residual(self, samples: int = 50, window: tuple | None = None) -> float:
        """Largest relative residual of the first-order radial system in x."""
        lo, hi = window or (0.05 / self.a, 8.0 / self.a)
        xs = np.linspace(lo, hi, samples + 2)[1:-1]
        h = 1e-4 * (hi - lo)
        df = first_derivative_5pt(self.f, xs, h)
        dg = first_derivative_5pt(self.g, xs, h)
        f, g = self.f(xs), self.g(xs)
        k, e, mu = self.kappa, self.energy, self.mu
        t1 = ((1 + k) / xs * f, -(1 + e + mu / xs) * g)
        t2 = ((1 - k) / xs * g, -(1 - e - mu / xs) * f)
        r1 = np.abs(df + t1[0] + t1[1]) / (np.abs(df) + np.abs(t1[0]) + np.abs(t1[1]))
        r2 = np.abs(dg + t2[0] + t2[1]) / (np.abs(dg) + np.abs(t2[0]) + np.abs(t2[1]))
        return float(max(np.max(r1), np.max(r2)))


def _dirac_pair(n_r: int, kappa: int, mu: float, beta: float = 1.0) -> DiracRadialPair:
    nu = _dirac_nu(mu, kappa)
    if n_r < 0 or (kappa > 0 and n_r == 0):
        raise InvalidParams("n_r must be >= 0, and >= 1 when kappa > 0")
    eps = dirac_energy(n_r, kappa, mu)
    a = math.sqrt(1 - eps * eps)
    dec = dirac_decouple(eps, mu, kappa)
    log_b = (math.log(a) + 1.5 * math.log(beta)
             + 0.5 * (math.log((kappa - nu) * (eps * kappa - nu) / mu) + math.lgamma(n_r + 1)
                      - log_gamma(n_r + 2 * nu)))
    bn = math.exp(log_b)
    pref = bn / (2 * nu * (kappa - nu))
    f1, f2, g1, g2 = dec.f1, dec.f2, dec.g1, dec.g2
    if n_r == 0:
        f1 = g1 = 0.0

    def parts(x):
        x = np.asarray(x, dtype=float)
        xi = 2 * a * x
        base = pref * xi ** nu * np.exp(-xi / 2) / x
        upper = xi * _laguerre(2 * nu + 1, n_r - 1, xi)
        lower = _laguerre(2 * nu - 1, n_r, xi)
        return base, upper, lower

    def f(x):
        base, upper, lower = parts(x)
        return base * (f1 * upper + f2 * lower)

    def g(x):
        base, upper, lower = parts(x)
        return base * (g1 * upper + g2 * lower)

    v1 = "0" if n_r == 0 else f"A_n xi^(nu+1) e^(-xi/2) L_{n_r - 1}^(2nu+1)(xi)"
    v2 = f"B_n xi^nu e^(-xi/2) L_{n_r}^(2nu-1)(xi)"
    return DiracRadialPair(n_r, kappa, mu, nu, eps, a, beta, f1, f2, g1, g2, bn, f, g, v1, v2)


def dirac_radial(n_r: int, j: float, kappa_sign: int, Z: float, alpha: float = FINE_STRUCTURE) -> DiracRadialPair:
    """Radial pair (f, g) of the Dirac-Coulomb problem with kappa = sign (j + 1/2)."""
    if kappa_sign not in (1, -1):
        raise InvalidParams("kappa_sign must be +1 or -1")
    k2 = j + 0.5
    if j <= 0 or k2 != round(k2):
        raise InvalidParams(f"j must be a positive half-integer, got {j}")
    return _dirac_pair(n_r, int(kappa_sign * round(k2)), Z * alpha)


class DiracCoulomb(PotentialSpec):
    id = "dirac_coulomb"
    title = "Dirac equation, Coulomb field"
    param_specs = (
        ParamSpec("Z", 1.0, 0.0, description="nuclear charge"),
        ParamSpec("alpha", FINE_STRUCTURE, 0.0, description="coupling e^2/(hbar c); mu = Z alpha"),
        ParamSpec("kappa", -1.0, integer=True, description="Dirac quantum number, +-(j + 1/2)"),
        ParamSpec("beta", 1.0, 0.0, description="inverse length mc/hbar; x = beta r"),
    )
    level_name = "n_r"
    energy_units = "mc^2"
    oracle_tolerance = 1e-6

    def check_relations(self, p):
        _dirac_nu(_coupling(p), p["kappa"])

    def nu(self, p) -> float:
        return _dirac_nu(_coupling(p), p["kappa"])

    def first_level(self, p):
        return 1 if p["kappa"] > 0 else 0

    def quantization_degree(self, p, level):
        return level

    def quantum_numbers(self, p, level):
        k = int(p["kappa"])
        return {"n_r": level, "kappa": k, "j": abs(k) - 0.5}

    def energy(self, p, level):
        self.require_bound(p, level)
        return dirac_energy(level, p["kappa"], _coupling(p))

    def physical_energy(self, p, energy):
        return energy * REST_ENERGY, "erg"

    def coordinate_map(self, p):
        return _scaled_map(p["beta"], "x = (mc/hbar) r")

    def build(self, p, eps):
        return _dirac_equation(eps, _coupling(p), self.nu(p))

    def expected_rows(self, p, eps):
        return _coulomb_rows(2 * _coupling(p) * eps, math.sqrt(1 - eps * eps), self.nu(p))

    def table_cases(self):
        return [({"alpha": 0.3, "kappa": -1}, 0.95), ({"alpha": 0.2, "kappa": 2}, 0.99),
                ({"Z": 3, "alpha": 0.25, "kappa": -3}, 0.9)]

    def quantization_window(self, p, level):
        # nu lies in (0, |kappa|)
        mu = _coupling(p)
        return (_level_bound(mu, max(level - 0.5, 0.5 * self.nu(p))), _level_bound(mu, level + abs(p["kappa"]) + 0.5))

    def quantization_mismatch(self, p, eps, degree):
        # quantize the second component, whose polynomial degree is n_r
        from ..nu_engine import quantized_lambda, reduce

        mu, nu = _coupling(p), self.nu(p)
        br = reduce(_dirac_equation(eps, mu, -nu), selector=exponent_selector(0.0, nu))
        return br.lambda_ - quantized_lambda(br.tau, br.equation.sigma, degree)

    def pair(self, p, level) -> DiracRadialPair:
        self.require_bound(p, level)
        return _dirac_pair(level, int(p["kappa"]), _coupling(p), p["beta"])

    def state(self, p, level):
        pr = self.pair(p, level)
        beta, nu, a, n_r = p["beta"], pr.nu, pr.a, level
        mu = pr.mu
        v2_eq = _dirac_equation(pr.energy, mu, -nu)

        def v2(x):
            xi = 2 * a * np.asarray(x, dtype=float)
            return pr.Bn * xi ** nu * np.exp(-xi / 2) * _laguerre(2 * nu - 1, n_r, xi)

        return BoundState(
            self.id, self.quantum_numbers(p, level), pr.energy, pr.Bn,
            lambda r: pr.f(beta * np.asarray(r, dtype=float)), "dirac", HALF_LINE,
            mapped_u=v2, equation=v2_eq, sample_window=(0.05 / a, 6.0 / a),
            polynomial=lambda x: _laguerre(2 * nu - 1, n_r, 2 * a * np.asarray(x)),
            node_window=(0.0, (4 * n_r + 2 * nu + 20) / (2 * a)), polynomial_part=("laguerre", n_r),
            extras={"G": lambda r: pr.g(beta * np.asarray(r, dtype=float)), "pair": pr},
        )

    def normalization_cases(self):
        return [{"alpha": 0.3, "kappa": -1}, {"alpha": 0.3, "kappa": 1}, {"alpha": 0.5, "kappa": -2},
                {"Z": 1, "kappa": -1}]

    def oracle_cases(self):
        return [{"alpha": 0.1, "kappa": -1}, {"alpha": 0.4, "kappa": 2}]

    def oracle(self, p, count=3):
        mu, nu = _coupling(p), self.nu(p)
        first = self.first_level(p)
        levels = list(range(first, first + count))
        a_min = mu / (levels[-1] + nu)
        grid = radial_grid(40.0 / a_min, 8001, 1.0 / mu)
        numeric = []
        for lv in levels:
            # second component: -v'' + (nu(nu - 1)/x^2 - 2 eps mu/x) v = (eps^2 - 1) v, FD index n_r
            eps = fd_self_consistent(
                lambda e: (lambda x: nu * (nu - 1) / x ** 2 - 2 * mu * e / x),
                grid, lv, lambda e: e * e - 1, 0.3, 1.0 - 1e-10)
            numeric.append(eps)
        closed = tuple(self.energy(p, lv) for lv in levels)
        return OracleRun(tuple(levels), closed, tuple(numeric), self.oracle_tolerance, True, float("nan"))


# ---------------------------------------------------------------------------
# fine structure


def _neville_at_zero(hs, values) -> float:
    """Value at h = 0 of the interpolating polynomial through (hs, values)."""
    p = list(values)
    n = len(hs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (hs[i + m] * p[i] - hs[i] * p[i + 1]) / (hs[i + m] - hs[i])
    return p[0]


def fine_structure_expansion_check(model: str, n_r: int, l_or_j: float,
                                   mu_samples=(0.1, 0.05, 0.025), stability: float = 1e-2) -> dict:
    """Extrapolate the coefficients of 1, mu^2 and mu^4 in epsilon(mu).

    With h = mu^2: c0 is the h -> 0 limit of epsilon and c2 that of
    g = (epsilon - 1)/h.  c4 is the limit of (g - c2_bohr)/h, where c2_bohr is
    the nonrelativistic coefficient -1/(2 n^2); ``c4_joint`` is the estimate
    that uses no coefficient other than c0 = 1 (the h -> 0 derivative of the
    interpolant of g), reported for comparison.
    """
    mus = [float(m) for m in mu_samples]
    if len(mus) < 3:
        raise ValueError("need at least three mu samples")
    if any(not 0 < m <= 0.2 for m in mus) or any(b >= a for a, b in zip(mus, mus[1:])):
        raise ValueError("mu samples must be decreasing and lie in (0, 0.2]")
    if model == "schrodinger_rel":
        l = int(l_or_j)
        if l != l_or_j or l < 0:
            raise InvalidParams("l must be a nonnegative integer")

        def binding(mu):
            nu = -0.5 + math.sqrt((l + 0.5) ** 2 - mu * mu)
            return _check_cancellation_free((mu / (n_r + nu + 1)) ** 2)

        n = n_r + l + 1
        half = l + 0.5
    elif model == "dirac":
        kappa = l_or_j + 0.5
        if l_or_j <= 0 or kappa != round(kappa):
            raise InvalidParams("j must be a positive half-integer")

        def binding(mu):
            nu = math.sqrt(kappa * kappa - mu * mu)
            return _check_cancellation_free((mu / (n_r + nu)) ** 2)

        n = n_r + kappa
        half = kappa
    else:
        raise InvalidParams(f"unknown model {model!r}")

    hs = [m * m for m in mus]
    b = [binding(m) for m in mus]
    c0 = _neville_at_zero(hs, [1.0 + v for v in b])
    gs = [v / h for v, h in zip(b, hs)]
    c2 = _neville_at_zero(hs, gs)
    c2_bohr = -1.0 / (2 * n * n)
    rs = [(g - c2_bohr) / h for g, h in zip(gs, hs)]
    c4 = _neville_at_zero(hs, rs)
    diffs = [(gs[i] - gs[i + 1]) / (hs[i] - hs[i + 1]) for i in range(len(hs) - 1)]
    sums = [hs[i] + hs[i + 1] for i in range(len(hs) - 1)]
    c4_joint = _neville_at_zero(sums, diffs)
    if abs(c4 - rs[-1]) > stability * abs(c4) or abs(c2 - gs[-1]) > stability * abs(c2):
        raise ExtrapolationUnstable(
            f"extrapolated c4 = {c4:.6g} is far from the last estimate {rs[-1]:.6g}")
    expected = {"c0": 1.0, "c2": c2_bohr, "c4": -(n / half - 0.75) / (2 * n ** 4)}
    got = {"c0": c0, "c2": c2, "c4": c4}
    rel = {k: abs(got[k] - expected[k]) / abs(expected[k]) for k in got}
    return {"model": model, "n": n, "coefficients": got, "expected": expected, "relative_error": rel,
            "c4_joint": c4_joint, "c4_joint_relative_error": abs(c4_joint - expected["c4"]) / abs(expected["c4"])}
