"""Poschl-Teller potential hole and its hyperbolic (modified) counterpart."""
from __future__ import annotations

import math

import numpy as np

from ..errors import AmbiguousBranch, InvalidParams, NoPhysicalBranch
from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuEquation
from ..numeric_oracle import GridSpec
from ..poly_kernel import OrthoFamily, log_gamma, ortho_eval
from .base import BoundState, CoordinateMap, ParamSpec, PotentialSpec, TableRows, fd_linear

UNIT = Interval(0.0, 1.0)
ABOVE_ONE = Interval(1.0, math.inf)
LINE = Interval(-math.inf, math.inf)

_SIGMA = LowPoly.of(0.0, 1.0, -1.0)
_TAU_TILDE = LowPoly.of(0.5, -1.0)


class PoschlTeller(PotentialSpec):
    id = "poschl_teller"
    title = "Poschl-Teller potential hole"
    param_specs = (
        ParamSpec("alpha", 1.0, 0.0, description="inverse width; the hole is 0 < x < pi/(2 alpha)"),
        ParamSpec("a", 2.0, 1.0, description="strength at x = 0, a > 1"),
        ParamSpec("b", 2.0, 1.0, description="strength at x = pi/(2 alpha), b > 1"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
    )
    energy_units = "same units as h2m alpha^2"

    def scaled(self, p, energy) -> float:
        """c^2/alpha^2 = E / (h2m alpha^2)."""
        return energy / (p["h2m"] * p["alpha"] ** 2)

    def energy(self, p, level):
        self.require_bound(p, level)
        return p["h2m"] * p["alpha"] ** 2 * (p["a"] + p["b"] + 2 * level) ** 2

    def coordinate_map(self, p):
        al = p["alpha"]
        return CoordinateMap(
            lambda x: np.sin(al * np.asarray(x)) ** 2,
            lambda xi: np.arcsin(np.sqrt(np.asarray(xi))) / al,
            lambda x: al * np.sin(2 * al * np.asarray(x)),
            Interval(0.0, math.pi / (2 * al)), UNIT, "xi = sin^2(alpha x)",
        )

    def build(self, p, energy):
        e, a, b = self.scaled(p, energy), p["a"], p["b"]
        st = LowPoly.of(-a * (a - 1) / 4, (e + (a - b) * (a + b - 1)) / 4, -e / 4)
        return NuEquation(_SIGMA, st, _TAU_TILDE, UNIT)

    def expected_rows(self, p, energy):
        e, a, b = self.scaled(p, energy), p["a"], p["b"]
        return TableRows(
            k=(e - (a + b) * (a + b - 2)) / 4,
            pi=LowPoly.of(a / 2, -(a + b) / 2),
            tau=LowPoly.of(a + 0.5, -(a + b + 1)),
            lambda_=(e - (a + b) ** 2) / 4,
            phi=ExpPowerProduct(factors=((0.0, a / 2), (1.0, b / 2))),
            rho=ExpPowerProduct(factors=((0.0, a - 0.5), (1.0, b - 0.5))),
        )

    def table_cases(self):
        return [({}, 20.0), ({"a": 3.0, "b": 1.5, "alpha": 0.5}, 10.0), ({"a": 1.2, "b": 4.0, "h2m": 0.5}, 30.0)]

    def quantization_window(self, p, level):
        s = p["h2m"] * p["alpha"] ** 2
        base = p["a"] + p["b"] + 2 * level
        return (s * (base - 1) ** 2, s * (base + 1) ** 2)

    def norm_constant(self, p, n) -> float:
        a, b = p["a"], p["b"]
        log_c2 = (math.log(2 * p["alpha"]) + math.lgamma(n + 1) + math.log(a + b + 2 * n) + log_gamma(a + b + n)
                  - log_gamma(a + n + 0.5) - log_gamma(b + n + 0.5))
        return math.exp(0.5 * log_c2)

    def state(self, p, level):
        self.require_bound(p, level)
        n, a, b, al = level, p["a"], p["b"], p["alpha"]
        c = self.norm_constant(p, n)
        fam = OrthoFamily.jacobi(a - 0.5, b - 0.5)

        def u(xi):
            xi = np.asarray(xi, dtype=float)
            return c * xi ** (a / 2) * (1 - xi) ** (b / 2) * ortho_eval(fam, n, 1 - 2 * xi)

        def psi(x):
            x = np.asarray(x, dtype=float)
            return c * np.sin(al * x) ** a * np.cos(al * x) ** b * ortho_eval(fam, n, np.cos(2 * al * x))

        return BoundState(
            self.id, {"n": n}, self.energy(p, n), c, psi, "line", Interval(0.0, math.pi / (2 * al)),
            mapped_u=u, equation=self.build(p, self.energy(p, n)), sample_window=(0.05, 0.95),
            polynomial=lambda xi: ortho_eval(fam, n, 1 - 2 * np.asarray(xi)), node_window=(0.0, 1.0),
            polynomial_part=("jacobi", n),
        )

    def normalization_cases(self):
        return [{}, {"a": 3.0, "b": 1.5, "alpha": 0.5}, {"a": 1.2, "b": 4.0, "alpha": 2.0}]

    def oracle_cases(self):
        return [{}, {"a": 3.0, "b": 1.5, "alpha": 0.5}]

    def oracle(self, p, count=4):
        al, a, b = p["alpha"], p["a"], p["b"]
        grid = GridSpec(0.0, math.pi / (2 * al), 6001)

        def potential(x):
            return al * al * (a * (a - 1) / np.sin(al * x) ** 2 + b * (b - 1) / np.cos(al * x) ** 2)

        return fd_linear(self, p, potential, grid, list(range(count)), lambda e: p["h2m"] * e)


def even_state_selector(eq: NuEquation, candidates: list):
    """Branch for the even bound states on xi = cosh^2 in (1, infinity).

    phi must be regular and nonzero at xi = 1 (x = 0) and decay at infinity.
    tau' may have either sign here, so the default rule does not apply.
    """
    keep = []
    for br in candidates:
        at_one = br.phi.power_at(1.0)
        at_infinity = sum(pw for _, pw in br.phi.factors)
        if br.phi.exp_poly.c1 == 0 and br.phi.exp_poly.c2 == 0 and abs(at_one) <= 1e-9 and at_infinity < 0:
            keep.append(br)
    if not keep:
        raise NoPhysicalBranch("no branch regular at xi = 1 and decaying at infinity")
    if len(keep) > 1:
        raise AmbiguousBranch(f"{len(keep)} branches regular at xi = 1 and decaying at infinity")
    return keep[0]


class ModifiedPoschlTeller(PotentialSpec):
    id = "modified_poschl_teller"
    title = "modified Poschl-Teller hole -h2m alpha^2 a(a-1)/cosh^2(alpha x)"
    param_specs = (
        ParamSpec("alpha", 1.0, 0.0, description="inverse width"),
        ParamSpec("a", 4.0, 1.0, description="depth parameter, a > 1"),
        ParamSpec("h2m", 1.0, 0.0, description="hbar^2 / 2m"),
    )
    energy_units = "same units as h2m alpha^2"
    selector = staticmethod(even_state_selector)

    def scaled(self, p, energy) -> float:
        """c^2/alpha^2 = -E / (h2m alpha^2)."""
        return -energy / (p["h2m"] * p["alpha"] ** 2)

    def level_count(self, p):
        # n < (a - 1)/2
        half = (p["a"] - 1) / 2
        return int(math.ceil(half)) if half > 0 else 0

    def count_rule(self, p):
        return f"n < (a - 1)/2 = {(p['a'] - 1) / 2:g}"

    def energy(self, p, level):
        self.require_bound(p, level)
        return -p["h2m"] * p["alpha"] ** 2 * (1 - p["a"] + 2 * level) ** 2

    def coordinate_map(self, p):
        al = p["alpha"]
        return CoordinateMap(
            lambda x: np.cosh(al * np.asarray(x)) ** 2,
            lambda xi: np.arccosh(np.sqrt(np.asarray(xi))) / al,
            lambda x: al * np.sinh(2 * al * np.asarray(x)),
            Interval(0.0, math.inf), ABOVE_ONE, "xi = cosh^2(alpha x), even states",
        )

    def build(self, p, energy):
        e, a = self.scaled(p, energy), p["a"]
        # (1/4)(e xi - a(a-1))(1 - xi)
        st = LowPoly.of(-a * (a - 1) / 4, (e + a * (a - 1)) / 4, -e / 4)
        return NuEquation(_SIGMA, st, _TAU_TILDE, ABOVE_ONE)

    def expected_rows(self, p, energy):
        e, a = self.scaled(p, energy), p["a"]
        return TableRows(
            k=(e + 1 - a * a) / 4,
            pi=LowPoly.of((1 - a) / 2, (a - 1) / 2),
            tau=LowPoly.of(1.5 - a, a - 2),
            lambda_=(e - (a - 1) ** 2) / 4,
            phi=ExpPowerProduct(factors=((0.0, (1 - a) / 2),)),
            rho=ExpPowerProduct(factors=((0.0, 0.5 - a), (1.0, -0.5))),
        )

    def table_cases(self):
        return [({}, -9.0), ({"a": 2.5, "alpha": 0.5}, -0.3), ({"a": 7.3, "h2m": 0.4}, -5.0)]

    def quantization_window(self, p, level):
        s = p["h2m"] * p["alpha"] ** 2
        top = p["a"] - 1 - 2 * level
        return (-s * (top + 1) ** 2, -s * max(top - 1, 0.0) ** 2)

    def norm_constant(self, p, n) -> float:
        a = p["a"]
        log_c2 = (math.log(p["alpha"]) + math.lgamma(n + 1) + math.log(a - 1 - 2 * n) + log_gamma(a - n - 0.5)
                  - log_gamma(n + 0.5) - log_gamma(a - n))
        return math.exp(0.5 * log_c2)

    def state(self, p, level):
        self.require_bound(p, level)
        n, a, al = level, p["a"], p["alpha"]
        if a - 1 - 2 * n <= 0:
            raise InvalidParams("level at the threshold is not normalizable")
        c = self.norm_constant(p, n)
        fam = OrthoFamily.jacobi(-0.5, 0.5 - a)

        def u(xi):
            xi = np.asarray(xi, dtype=float)
            return c * xi ** ((1 - a) / 2) * ortho_eval(fam, n, 2 * xi - 1)

        # beyond this |alpha x| the state has decayed below exp(-(a - 1 - 2n) cutoff) and cosh would overflow
        cutoff = min(300.0, 600.0 / (2 * n + a))

        def psi(x):
            x = np.asarray(x, dtype=float)
            y = np.minimum(np.abs(al * x), cutoff)
            val = c * np.cosh(y) ** (1 - a) * ortho_eval(fam, n, np.cosh(2 * y))
            return np.where(np.abs(al * x) < cutoff, val, 0.0)

        return BoundState(
            self.id, {"n": n}, self.energy(p, n), c, psi, "line", LINE,
            mapped_u=u, equation=self.build(p, self.energy(p, n)), sample_window=(1.05, 6.0),
            polynomial=lambda x: ortho_eval(fam, n, np.cosh(2 * al * np.asarray(x))),
            node_window=(0.0, 20.0 / al), polynomial_part=("jacobi", n),
        )

    def normalization_cases(self):
        return [{"a": 4.0}, {"a": 6.5, "alpha": 0.7}, {"a": 5.2, "alpha": 2.0, "h2m": 0.3}]

    def oracle_cases(self):
        return [{"a": 4.0}, {"a": 8.0, "alpha": 0.5}]

    def oracle(self, p, count=4):
        al, a = p["alpha"], p["a"]
        count = min(count, self.level_count(p))
        grid = GridSpec(-40.0 / al, 40.0 / al, 8001)
        # the FD spectrum alternates even and odd states; even state j sits at index 2j
        return fd_linear(self, p, lambda x: -al * al * a * (a - 1) / np.cosh(al * x) ** 2, grid,
                         list(range(count)), lambda e: p["h2m"] * e, index_of=lambda i: 2 * i)
