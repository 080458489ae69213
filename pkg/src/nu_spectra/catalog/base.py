"""Shared machinery for catalog entries: parameter schemas, coordinate maps,
bound states, table-row comparison and the two verification routes (the
quantization solve through the reduction engine and the finite-difference
oracle)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import (
    AmbiguousBranch,
    InvalidParams,
    NoPhysicalBranch,
    LevelNotBound,
    NoBoundStates,
    NotConverged,
    NuSpectraError,
)
from ..nu_engine import ExpPowerProduct, Interval, LowPoly, NuBranch, NuEquation, quantized_lambda, reduce
from ..numeric_oracle import GridSpec, fd_eigen, quadrature, sphere_quadrature

ROW_TOL = 1e-10


@dataclass(frozen=True)
class ParamSpec:
    name: str
    default: float | None = None
    lower: float | None = None
    upper: float | None = None
    lower_inclusive: bool = False
    integer: bool = False
    description: str = ""

    def check(self, value: float) -> float:
        if not math.isfinite(value):
            raise InvalidParams(f"{self.name} must be finite, got {value}")
        if self.integer:
            if value != round(value):
                raise InvalidParams(f"{self.name} must be an integer, got {value}")
            value = float(round(value))
        if self.lower is not None:
            ok = value >= self.lower if self.lower_inclusive else value > self.lower
            if not ok:
                op = ">=" if self.lower_inclusive else ">"
                raise InvalidParams(f"{self.name} must be {op} {self.lower}, got {value}")
        if self.upper is not None and not value < self.upper:
            raise InvalidParams(f"{self.name} must be < {self.upper}, got {value}")
        return value

    def describe(self) -> dict:
        return {
            "name": self.name,
            "default": self.default,
            "lower": self.lower,
            "lower_inclusive": self.lower_inclusive,
            "upper": self.upper,
            "integer": self.integer,
            "description": self.description,
        }


@dataclass(frozen=True)
class CoordinateMap:
    forward: Callable
    inverse: Callable
    jacobian: Callable
    physical_domain: Interval
    mapped_domain: Interval
    description: str = ""


@dataclass(frozen=True)
class TableRows:
    """Expected reduction output for one equation instance."""

    k: float
    pi: LowPoly
    tau: LowPoly
    lambda_: float
    phi: ExpPowerProduct
    rho: ExpPowerProduct


@dataclass(frozen=True)
class SpectrumLevel:
    quantum_numbers: dict
    energy: float
    extras: dict = field(default_factory=dict)


@dataclass
class BoundState:
    """A normalized eigenfunction with everything needed to check it.

    ``psi`` takes the physical coordinate (theta and phi for the sphere).
    ``measure`` selects the normalization integral: "line" is the plain
    integral of psi^2, "radial" weights by r^2, "sphere" integrates over the
    unit sphere and "dirac" integrates r^2 (F^2 + G^2) with G in
    ``extras["G"]``.
    """

    potential: str
    quantum_numbers: dict
    energy: float
    normalization: float
    psi: Callable
    measure: str
    domain: Interval
    mapped_u: Callable | None = None
    equation: NuEquation | None = None
    sample_window: tuple | None = None
    polynomial: Callable | None = None
    node_window: tuple | None = None
    polynomial_part: tuple = ()
    breakpoints: tuple = ()
    extras: dict = field(default_factory=dict)

    def inner(self, other: "BoundState", tol: float = 1e-11):
        if self.measure != other.measure:
            raise ValueError("states use different measures")
        if self.measure == "sphere":
            value = sphere_quadrature(lambda t, p: self.psi(t, p) * np.conj(other.psi(t, p)), tol=tol)
            return value.real if abs(value.imag) <= tol else value
        bp = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        if self.measure == "line":
            f = lambda x: self.psi(x) * other.psi(x)
        elif self.measure == "radial":
            f = lambda r: r * r * self.psi(r) * other.psi(r)
        elif self.measure == "dirac":
            g1, g2 = self.extras["G"], other.extras["G"]
            f = lambda r: r * r * (self.psi(r) * other.psi(r) + g1(r) * g2(r))
        else:
            raise ValueError(f"unknown measure {self.measure}")
        return quadrature(f, self.domain, tol=tol, breakpoints=bp)

    def node_count(self, samples: int = 20001) -> int:
        """Sign changes of the polynomial part strictly inside ``node_window``."""
        lo, hi = self.node_window
        xs = np.linspace(lo, hi, samples + 2)[1:-1]
        vals = np.asarray(self.polynomial(xs), dtype=float)
        signs = np.sign(vals[vals != 0.0])
        return int(np.count_nonzero(signs[1:] != signs[:-1]))


@dataclass(frozen=True)
class OracleRun:
    levels: tuple
    closed_form: tuple
    numeric: tuple
    tolerance: float
    relative: bool
    convergence_estimate: float

    @property
    def errors(self) -> tuple:
        out = []
        for c, n in zip(self.closed_form, self.numeric):
            diff = abs(c - n)
            out.append(diff / abs(c) if self.relative else diff)
        return tuple(out)

    @property
    def passed(self) -> bool:
        return all(e <= self.tolerance for e in self.errors)


def compare_rows(branch: NuBranch, rows: TableRows, tol: float = ROW_TOL) -> dict:
    """Relative deviation of each reduction output from the expected row.

    Every coefficient is compared against the larger of the two magnitudes
    and the row scale, so zero coefficients are tested on the same footing.
    """

    def rel(a, b, scale):
        return abs(a - b) / max(abs(a), abs(b), scale, 1e-300)

    def poly_dev(p, q):
        scale = max(p.max_abs(), q.max_abs())
        return max(rel(x, y, scale) for x, y in zip(p.coeffs, q.coeffs))

    def epp_dev(p: ExpPowerProduct, q: ExpPowerProduct):
        dev = poly_dev(p.exp_poly - LowPoly.of(p.exp_poly.c0), q.exp_poly - LowPoly.of(q.exp_poly.c0))
        points = {r for r, _ in p.factors} | {r for r, _ in q.factors}
        pscale = max([abs(x) for _, x in p.factors + q.factors] + [1.0])
        for r in points:
            dev = max(dev, rel(p.power_at(r), q.power_at(r), pscale))
        return dev

    scale_k = max(abs(branch.k), abs(rows.k), branch.equation.scale if branch.equation else 1.0)
    report = {
        "k": rel(branch.k, rows.k, scale_k),
        "pi": poly_dev(branch.pi, rows.pi),
        "tau": poly_dev(branch.tau, rows.tau),
        "lambda": rel(branch.lambda_, rows.lambda_, scale_k),
        "phi": epp_dev(branch.phi, rows.phi),
        "rho": epp_dev(branch.rho, rows.rho),
    }
    report["passed"] = all(v <= tol for v in report.values())
    return report


def bisect(f: Callable, lo: float, hi: float, rel_tol: float = 1e-14, max_iter: int = 300) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NuSpectraError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if abs(hi - lo) <= rel_tol * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def physical_window(lo: float, hi: float, rel: float = 1e-9):
    """Window for a fine-grained residual probe, shrunk off the endpoints."""
    pad = rel * (hi - lo)
    return lo + pad, hi - pad


class PotentialSpec:
    """One worked potential.

    Subclasses fill in the parameter schema and the closed forms; the base
    class supplies validation, spectrum listing and the two verification
    routes.
    """

    id: str = ""
    title: str = ""
    param_specs: tuple = ()
    level_name: str = "n"
    energy_units: str = ""
    has_spectrum: bool = True
    orthogonal_states: bool = True
    selector: Callable | None = None

    # -- parameters -------------------------------------------------------

    def validate(self, params: dict | None = None) -> dict:
        params = dict(params or {})
        known = {s.name for s in self.param_specs}
        unknown = set(params) - known
        if unknown:
            raise InvalidParams(f"unknown parameter(s) for {self.id}: {', '.join(sorted(unknown))}")
        out = {}
        for spec in self.param_specs:
            if spec.name in params:
                out[spec.name] = spec.check(float(params[spec.name]))
            elif spec.default is not None:
                out[spec.name] = float(spec.default)
            else:
                raise InvalidParams(f"missing required parameter {spec.name} for {self.id}")
        self.check_relations(out)
        return out

    def check_relations(self, p: dict) -> None:
        """Constraints that involve several parameters."""

    def describe(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "level": self.level_name,
            "energy_units": self.energy_units,
            "params": [s.describe() for s in self.param_specs],
        }

    # -- closed forms -----------------------------------------------------

    def first_level(self, p: dict) -> int:
        return 0

    def level_count(self, p: dict) -> int | None:
        """Number of bound levels, or None for an unbounded ladder."""
        return None

    def is_bound(self, p: dict, level: int) -> bool:
        first = self.first_level(p)
        count = self.level_count(p)
        return level >= first and (count is None or level < first + count)

    def energy(self, p: dict, level: int) -> float:
        raise NotImplementedError

    def count_rule(self, p: dict) -> str:
        return "unbounded ladder"

    def quantum_numbers(self, p: dict, level: int) -> dict:
        return {self.level_name: level}

    def require_bound(self, p: dict, level: int) -> None:
        if self.level_count(p) == 0:
            raise NoBoundStates(self.no_bound_states_message(p))
        if not self.is_bound(p, level):
            raise LevelNotBound(f"{self.level_name}={level} is not bound for {self.id} ({self.count_rule(p)})")

    def no_bound_states_message(self, p: dict) -> str:
        return f"{self.id} has no bound states for these parameters ({self.count_rule(p)})"

    def levels(self, p: dict, up_to: int) -> list:
        count = self.level_count(p)
        if count == 0:
            raise NoBoundStates(self.no_bound_states_message(p))
        first = self.first_level(p)
        last = up_to if count is None else min(up_to, first + count - 1)
        return [lv for lv in range(first, last + 1) if self.is_bound(p, lv)]

    def spectrum(self, p: dict, up_to: int) -> list:
        return [SpectrumLevel(self.quantum_numbers(p, lv), self.energy(p, lv), self.energy_extras(p, lv))
                for lv in self.levels(p, up_to)]

    def energy_extras(self, p: dict, level: int) -> dict:
        return {}

    def physical_energy(self, p: dict, energy: float) -> tuple | None:
        """(value, unit) in physical units where a conversion is defined."""
        return None

    # -- reduction --------------------------------------------------------

    def coordinate_map(self, p: dict) -> CoordinateMap:
        raise NotImplementedError

    def build(self, p: dict, energy: float) -> NuEquation:
        raise NotImplementedError

    def expected_rows(self, p: dict, energy: float) -> TableRows:
        raise NotImplementedError

    def table_cases(self) -> list:
        """At least three (params, trial energy) instances for table regression."""
        raise NotImplementedError

    def branch_selector(self, p: dict) -> Callable | None:
        """Branch picker passed to the engine; None keeps the default rule."""
        return self.selector

    def reduce(self, p: dict, energy: float) -> NuBranch:
        return reduce(self.build(p, energy), selector=self.branch_selector(p))

    def table_check(self, p: dict, energy: float) -> dict:
        p = self.validate(p)
        return compare_rows(self.reduce(p, energy), self.expected_rows(p, energy))

    # -- quantization route -------------------------------------------------

    def quantization_degree(self, p: dict, level: int) -> int:
        return level - self.first_level(p)

    def quantization_window(self, p: dict, level: int) -> tuple:
        """Energy interval where the branch is defined and the level must lie."""
        raise NotImplementedError

    def quantization_mismatch(self, p: dict, energy: float, degree: int) -> float:
        br = self.reduce(p, energy)
        return br.lambda_ - quantized_lambda(br.tau, br.equation.sigma, degree)

    def quantized_energy(self, p: dict, level: int, samples: int = 48) -> float:
        """Solve lambda(E) = lambda_n by bisection on the reduction output.

        Monotonicity of the mismatch across the window is asserted on a
        sample grid first; a non-monotone mismatch is an error, never a
        silent pick between roots.
        """
        p = self.validate(p)
        self.require_bound(p, level)
        degree = self.quantization_degree(p, level)
        lo, hi = self.quantization_window(p, level)
        f = lambda e: self.quantization_mismatch(p, e, degree)
        grid = np.linspace(lo, hi, samples)
        vals = np.array([f(e) for e in grid])
        steps = np.diff(vals)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise NuSpectraError(f"{self.id}: quantization mismatch is not monotone on [{lo}, {hi}]")
        return bisect(f, lo, hi)

    # -- wavefunctions ----------------------------------------------------

    def state(self, p: dict, level: int) -> BoundState:
        raise NotImplementedError

    def normalization_cases(self) -> list:
        """Parameter instances with at least two levels each."""
        raise NotImplementedError

    # -- finite-difference oracle ----------------------------------------

    oracle_tolerance: float = 1e-3
    oracle_relative: bool = True

    def oracle_cases(self) -> list:
        raise NotImplementedError

    def oracle(self, p: dict, count: int = 4) -> OracleRun:
        raise NotImplementedError


def exponent_selector(point: float, power: float, tol: float = 1e-9) -> Callable:
    """Selector keeping the branch whose phi has the given power at ``point``.

    The branch must still have tau' < 0 with the zero of tau inside the
    domain; used where two branches are square integrable and the regular one
    is wanted.
    """

    def pick(eq: NuEquation, candidates: list) -> NuBranch:
        keep = []
        for br in candidates:
            if not br.tau.c1 < 0:
                continue
            if not eq.domain.strictly_contains(-br.tau.c0 / br.tau.c1):
                continue
            if abs(br.phi.power_at(point) - power) <= tol * max(1.0, abs(power)):
                keep.append(br)
        if not keep:
            raise NoPhysicalBranch(f"no branch with phi ~ |x - {point}|^{power}")
        if len(keep) > 1:
            raise AmbiguousBranch(f"{len(keep)} branches with phi ~ |x - {point}|^{power}")
        return keep[0]

    return pick


# ---------------------------------------------------------------------------
# oracle helpers


def fd_linear(spec: PotentialSpec, p: dict, potential: Callable, grid: GridSpec, levels: list,
              to_energy: Callable, index_of: Callable = lambda i: i) -> OracleRun:
    """Eigenvalues of -u'' + U u = e u mapped to native energies.

    ``index_of(i)`` gives the position in the ascending FD spectrum of the
    i-th requested level (the modified Poschl-Teller entry skips odd states).
    """
    idx = [index_of(i) for i in range(len(levels))]
    res = fd_eigen(potential, grid, max(idx) + 1)
    numeric = tuple(to_energy(res.eigenvalues[j]) for j in idx)
    closed = tuple(spec.energy(p, lv) for lv in levels)
    return OracleRun(tuple(levels), closed, numeric, spec.oracle_tolerance, spec.oracle_relative,
                     res.convergence_estimate)


def fd_self_consistent(potential_at: Callable, grid: GridSpec, index: int, target: Callable,
                       lo: float, hi: float, tol: float = 1e-12) -> float:
    """Parameter e with FD eigenvalue number ``index`` of U(.; e) equal to target(e).

    Used where the energy enters the effective potential (Coulomb terms of
    the relativistic radial equations).
    """
    from scipy.optimize import brentq

    def g(e):
        return fd_eigen(potential_at(e), grid, index + 1).eigenvalues[index] - target(e)

    glo, ghi = g(lo), g(hi)
    if (glo > 0) == (ghi > 0):
        raise NotConverged(f"self-consistent bracket [{lo}, {hi}] has no sign change")
    return brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


def radial_grid(length: float, points: int, scale: float = 1.0) -> GridSpec:
    """Grid on [1e-6 * scale, length]; the Dirichlet end stands in for u(0) = 0."""
    return GridSpec(1e-6 * scale, length, points)
