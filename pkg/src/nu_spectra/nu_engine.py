"""Nikiforov-Uvarov reduction of generalized hypergeometric-type equations.

The input is

    u'' + (tau_tilde / sigma) u' + (sigma_tilde / sigma**2) u = 0

with sigma, sigma_tilde of degree <= 2 and tau_tilde of degree <= 1.  The
substitution u = phi * y turns it into sigma y'' + tau y' + lam y = 0, whose
polynomial solutions carry the bound states.

Everything here is numeric: callers plug in every parameter (trial energy
included) before building an equation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    AmbiguousBranch,
    ComplexBranch,
    DegenerateK,
    IntegrationFailure,
    NoPhysicalBranch,
    NoRealK,
    NotPerfectSquare,
    UnsupportedForm,
)

REL_TOL = 1e-10


# ---------------------------------------------------------------------------
# basic types


@dataclass(frozen=True)
class LowPoly:
    """Polynomial c0 + c1 x + c2 x^2 with a nominal degree."""

    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    nominal_degree: int = 2

    def __post_init__(self):
        if self.nominal_degree not in (0, 1, 2):
            raise ValueError("nominal_degree must be 0, 1 or 2")
        if self.nominal_degree < 2 and self.c2 != 0:
            raise ValueError("c2 must vanish for nominal degree < 2")
        if self.nominal_degree < 1 and self.c1 != 0:
            raise ValueError("c1 must vanish for nominal degree 0")

    @classmethod
    def of(cls, c0=0.0, c1=0.0, c2=0.0) -> "LowPoly":
        """Build with the smallest nominal degree that holds the coefficients."""
        deg = 2 if c2 != 0 else (1 if c1 != 0 else 0)
        return cls(float(c0), float(c1), float(c2), deg)

    @property
    def coeffs(self) -> tuple:
        return (self.c0, self.c1, self.c2)

    def __call__(self, x):
        return self.c0 + x * (self.c1 + x * self.c2)

    def deriv(self) -> "LowPoly":
        return LowPoly.of(self.c1, 2.0 * self.c2)

    def __add__(self, other: "LowPoly") -> "LowPoly":
        return LowPoly.of(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "LowPoly") -> "LowPoly":
        return LowPoly.of(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> "LowPoly":
        return LowPoly.of(-self.c0, -self.c1, -self.c2)

    def scale(self, s: float) -> "LowPoly":
        return LowPoly.of(s * self.c0, s * self.c1, s * self.c2)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        prod = np.convolve(self.coeffs, other.coeffs)
        if np.any(prod[3:] != 0):
            raise UnsupportedForm("product exceeds degree 2")
        return LowPoly.of(*prod[:3])

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max(abs(self.c0), abs(self.c1), abs(self.c2))

    def to_numpy(self) -> Polynomial:
        return Polynomial(self.coeffs)

    def __repr__(self):
        return f"LowPoly({self.c0!r}, {self.c1!r}, {self.c2!r})"


X = LowPoly.of(0.0, 1.0)


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty interval ({self.lower}, {self.upper})")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    def finite_endpoints(self) -> list:
        return [e for e in (self.lower, self.upper) if math.isfinite(e)]

    def strictly_contains(self, x: float, rel: float = REL_TOL) -> bool:
        lo_ok = x > self.lower + rel * max(1.0, abs(self.lower)) if math.isfinite(self.lower) else True
        hi_ok = x < self.upper - rel * max(1.0, abs(self.upper)) if math.isfinite(self.upper) else True
        return lo_ok and hi_ok

    @property
    def span(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class NuEquation:
    sigma: LowPoly
    sigma_tilde: LowPoly
    tau_tilde: LowPoly
    domain: Interval

    def __post_init__(self):
        if self.sigma.max_abs() == 0:
            raise ValueError("sigma is identically zero")
        if self.tau_tilde.c2 != 0:
            raise ValueError("tau_tilde must be at most linear")
        for r in real_roots(self.sigma):
            if self.domain.strictly_contains(r, rel=1e-12):
                raise ValueError(f"sigma vanishes at {r}, inside the domain")

    @property
    def scale(self) -> float:
        return max(self.sigma.max_abs(), self.sigma_tilde.max_abs(), self.tau_tilde.max_abs())

    def residual(self, u, du, d2u, x):
        """sigma^2 u'' + sigma tau_tilde u' + sigma_tilde u at x."""
        s = self.sigma(x)
        return s * s * d2u + s * self.tau_tilde(x) * du + self.sigma_tilde(x) * u


@dataclass(frozen=True)
class ExpPowerProduct:
    """exp(Q(x)) * prod |x - r_i|**p_i.

    Absolute values keep the factors real on either side of a root; on an
    interval without interior roots this differs from (x - r)**p by a constant.
    """

    exp_poly: LowPoly = LowPoly.of()
    factors: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for r, p in self.factors:
            for key in merged:
                if abs(key - r) <= 1e-12 * max(1.0, abs(r)):
                    merged[key] += p
                    break
            else:
                merged[float(r)] = float(p)
        cleaned = tuple(sorted((r, p) for r, p in merged.items() if p != 0.0))
        object.__setattr__(self, "factors", cleaned)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(self.exp_poly(x))
        for r, p in self.factors:
            out = out * np.abs(x - r) ** p
        return out

    def power_at(self, point: float, rel: float = 1e-9) -> float:
        total = 0.0
        for r, p in self.factors:
            if abs(r - point) <= rel * max(1.0, abs(point)):
                total += p
        return total

    def log_derivative(self, x):
        x = np.asarray(x, dtype=float)
        out = self.exp_poly.deriv()(x) + 0.0 * x
        for r, p in self.factors:
            out = out + p / (x - r)
        return out


@dataclass(frozen=True)
class NuBranch:
    k: float
    pi: LowPoly
    tau: LowPoly
    lambda_: float
    phi: ExpPowerProduct
    rho: ExpPowerProduct
    sign_choice: str
    equation: NuEquation = field(repr=False, compare=False, default=None)

    def quadratic_identity_residual(self) -> float:
        """Largest coefficient of pi^2 + (tau_tilde - sigma') pi + sigma_tilde - k sigma,
        relative to the coefficient scale."""
        eq = self.equation
        pi = self.pi
        lin = eq.tau_tilde - eq.sigma.deriv()
        res = np.convolve(pi.coeffs, pi.coeffs)[:3] + np.convolve(lin.coeffs, pi.coeffs)[:3]
        res = res + np.array(eq.sigma_tilde.coeffs) - self.k * np.array(eq.sigma.coeffs)
        scale = max(eq.scale, abs(self.k) * eq.sigma.max_abs(), pi.max_abs() ** 2, 1e-300)
        return float(np.max(np.abs(res)) / scale)


# ---------------------------------------------------------------------------
# helpers


def _degree(p: LowPoly, rel: float = REL_TOL) -> int:
    s = p.max_abs()
    if abs(p.c2) > rel * s:
        return 2
    if abs(p.c1) > rel * s:
        return 1
    return 0


def real_roots(p: LowPoly) -> list:
    """Real roots of a LowPoly, numerically stable, sorted ascending."""
    deg = _degree(p)
    if deg == 0:
        return []
    if deg == 1:
        return [-p.c0 / p.c1]
    a, b, c = p.c2, p.c1, p.c0
    disc = b * b - 4 * a * c
    if disc < -REL_TOL * (b * b + abs(4 * a * c)):
        return []
    disc = max(disc, 0.0)
    if disc <= REL_TOL * (b * b + abs(4 * a * c)):
        return [-b / (2 * a)]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = [q / a, c / q] if q != 0 else [0.0, 0.0]
    return sorted(roots)


def _shifted_square(eq: NuEquation) -> LowPoly:
    """(sigma' - tau_tilde) / 2."""
    return (eq.sigma.deriv() - eq.tau_tilde).scale(0.5)


def _q_poly(eq: NuEquation) -> LowPoly:
    h = _shifted_square(eq)
    return h * h - eq.sigma_tilde


# ---------------------------------------------------------------------------
# operations


def k_candidates(eq: NuEquation) -> list:
    """Values of k making p = q + k sigma a perfect square of a linear function."""
    s0, s1, s2 = eq.sigma.coeffs
    q0, q1, q2 = _q_poly(eq).coeffs
    ds = 2.0 * s2  # sigma''
    dq = 2.0 * q2  # q''

    a = s1 * s1 - 2.0 * ds * s0
    b = q1 * s1 - ds * q0 - s0 * dq
    c = q1 * q1 - 2.0 * dq * q0
    a_scale = s1 * s1 + abs(2.0 * ds * s0)
    b_scale = abs(q1 * s1) + abs(ds * q0) + abs(s0 * dq)

    if abs(a) <= REL_TOL * a_scale:
        if abs(b) <= REL_TOL * max(b_scale, 1e-300):
            raise DegenerateK("a = b = 0: k is not fixed by the perfect-square condition")
        return [-c / (2.0 * b)]

    # discriminant in the cancellation-free arrangement
    d = (s0 * dq - ds * q0) ** 2 - 2.0 * (s1 * dq - ds * q1) * (s0 * q1 - s1 * q0)
    d_scale = b * b + abs(a * c)
    if d < -REL_TOL * d_scale:
        raise NoRealK(f"discriminant {d:.6g} < 0")
    d = max(d, 0.0)
    if d <= (REL_TOL ** 2) * d_scale or d == 0.0:
        return [-b / a]
    root = math.sqrt(d)
    qq = -(b + math.copysign(root, b))
    k1 = qq / a
    k2 = c / qq
    if abs(k1 - k2) <= REL_TOL * max(1.0, abs(k1), abs(k2)):
        return [k1]
    return sorted([k1, k2])


def pi_branches(eq: NuEquation, k: float) -> list:
    """The two linear functions pi = (sigma' - tau_tilde)/2 +- sqrt(q + k sigma)."""
    h = _shifted_square(eq)
    q = _q_poly(eq)
    p = q + eq.sigma.scale(k)
    p0, p1, p2 = p.coeffs
    scale = max(q.max_abs(), abs(k) * eq.sigma.max_abs(), 1e-300)

    if abs(p2) <= REL_TOL * scale:
        if abs(p1) > 1e-8 * scale:
            raise NotPerfectSquare(f"p(x) = {p!r} is linear, not a square")
        if p0 < -1e-8 * scale:
            raise ComplexBranch(f"p(0) = {p0:.6g} < 0")
        radical = LowPoly.of(math.sqrt(max(p0, 0.0)))
    else:
        if p2 < 0:
            raise ComplexBranch(f"p'' = {2 * p2:.6g} < 0")
        slope = math.sqrt(p2)
        shift = p1 / (2.0 * p2)
        if abs(p0 - p2 * shift * shift) > 1e-8 * scale:
            raise NotPerfectSquare(f"p(x) = {p!r} does not reduce to a square")
        radical = LowPoly.of(slope * shift, slope)
    plus = h + radical
    minus = h - radical
    if radical.max_abs() == 0.0:
        return [plus]
    return [plus, minus]


def integrate_log_derivative(numerator: LowPoly, sigma: LowPoly) -> ExpPowerProduct:
    """exp of the antiderivative of numerator/sigma, numerator at most linear."""
    if _degree(numerator) > 1:
        raise UnsupportedForm("numerator must be at most linear")
    n0, n1 = numerator.c0, numerator.c1
    s0, s1, s2 = sigma.coeffs
    deg = _degree(sigma)
    if deg == 0:
        return ExpPowerProduct(LowPoly.of(0.0, n0 / s0, 0.5 * n1 / s0))
    if deg == 1:
        r = -s0 / s1
        return ExpPowerProduct(LowPoly.of(0.0, n1 / s1), ((r, numerator(r) / s1),))
    roots = real_roots(sigma)
    if not roots:
        raise IntegrationFailure("sigma has complex roots; antiderivative leaves the closure")
    if len(roots) == 1:
        r = roots[0]
        if abs(numerator(r)) > 1e-8 * max(numerator.max_abs(), 1e-300):
            raise IntegrationFailure(
                f"repeated root {r} of sigma with nonzero numerator remainder {numerator(r):.6g}"
            )
        return ExpPowerProduct(LowPoly.of(), ((r, n1 / s2),))
    dsig = sigma.deriv()
    return ExpPowerProduct(LowPoly.of(), tuple((r, numerator(r) / dsig(r)) for r in roots))


def make_branch(eq: NuEquation, k: float, pi: LowPoly, sign_choice: str) -> NuBranch:
    tau = eq.tau_tilde + pi.scale(2.0)
    lam = k + pi.c1
    phi = integrate_log_derivative(pi, eq.sigma)
    rho = integrate_log_derivative(tau - eq.sigma.deriv(), eq.sigma)
    return NuBranch(k, pi, tau, lam, phi, rho, sign_choice, eq)


def all_branches(eq: NuEquation) -> list:
    """Every real (k, pi) branch; complex branches are skipped."""
    out = []
    for k in k_candidates(eq):
        try:
            pis = pi_branches(eq, k)
        except ComplexBranch:
            continue
        for pi, sign in zip(pis, ("plus", "minus")):
            out.append(make_branch(eq, k, pi, sign))
    return out


def branch_rejection(eq: NuEquation, br: NuBranch) -> str | None:
    """Reason a branch fails the bound-state rule, or None when it passes."""
    tscale = max(br.tau.max_abs(), 1e-300)
    if not br.tau.c1 < -REL_TOL * tscale:
        return f"tau' = {br.tau.c1:.6g} is not negative"
    root = -br.tau.c0 / br.tau.c1
    if not eq.domain.strictly_contains(root):
        return f"zero of tau at {root:.6g} lies outside the open domain"
    sscale = eq.sigma.max_abs()
    for e in eq.domain.finite_endpoints():
        if abs(eq.sigma(e)) > 1e-9 * sscale * max(1.0, e * e):
            continue
        if br.phi.power_at(e) < -1e-9:
            return f"phi diverges at endpoint {e:.6g}"
        mult = sum(1 for r in real_roots(eq.sigma) if abs(r - e) <= 1e-9 * max(1.0, abs(e)))
        if _degree(eq.sigma) == 2 and len(real_roots(eq.sigma)) == 1:
            mult = 2
        if mult + br.rho.power_at(e) <= 1e-9:
            return f"sigma*rho does not vanish at endpoint {e:.6g}"
    return None


def _same_branch(a: NuBranch, b: NuBranch) -> bool:
    scale = max(1.0, a.pi.max_abs(), abs(a.k))
    return abs(a.k - b.k) <= REL_TOL * scale and all(
        abs(x - y) <= REL_TOL * scale for x, y in zip(a.pi.coeffs, b.pi.coeffs)
    )


def select_bound_state_branch(eq: NuEquation, candidates: Sequence[NuBranch]) -> NuBranch:
    """Pick the unique branch satisfying the bound-state rule.

    A branch qualifies when tau' < 0, tau vanishes strictly inside the domain,
    phi stays bounded at every finite endpoint where sigma vanishes, and
    sigma*rho vanishes there.
    """
    if not candidates:
        raise NoPhysicalBranch("no candidate branches")
    passing = []
    reasons = []
    for br in candidates:
        why = branch_rejection(eq, br)
        if why is None:
            if not any(_same_branch(br, p) for p in passing):
                passing.append(br)
        else:
            reasons.append(f"k={br.k:.6g}, pi={br.pi!r}: {why}")
    if not passing:
        raise NoPhysicalBranch("; ".join(reasons))
    if len(passing) > 1:
        desc = ", ".join(f"(k={b.k:.6g}, pi={b.pi!r})" for b in passing)
        raise AmbiguousBranch(f"several branches qualify: {desc}")
    return passing[0]


def reduce(eq: NuEquation, selector: Callable | None = None) -> NuBranch:
    """Full reduction: k, pi, tau, lambda, phi and rho of the bound-state branch.

    ``selector(eq, candidates)`` replaces the default bound-state rule for
    equations whose physical boundary is not a root of sigma.
    """
    candidates = all_branches(eq)
    pick = selector or select_bound_state_branch
    return pick(eq, candidates)


def quantized_lambda(tau: LowPoly, sigma: LowPoly, n: int) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return -n * tau.c1 - n * (n - 1) * sigma.c2


def rodrigues_polynomial(sigma: LowPoly, rho: ExpPowerProduct, n: int, Bn: float) -> list:
    """Ascending coefficients of y_n = (Bn / rho) d^n/dx^n (sigma^n rho).

    Uses (sigma^m rho P)' = sigma^(m-1) rho (T P + m sigma' P + sigma P') with
    T = sigma rho'/rho, which must be a polynomial of degree <= 1.
    """
    if not 0 <= n <= 8:
        raise UnsupportedForm("n must lie in 0..8")
    sig = sigma.to_numpy()
    dsig = sig.deriv()
    roots = [r for r, _ in rho.factors]
    w = Polynomial([1.0])
    for r in roots:
        w = w * Polynomial([-r, 1.0])
    s_num = Polynomial([0.0])
    for i, (r, p) in enumerate(rho.factors):
        term = Polynomial([p])
        for j, rr in enumerate(roots):
            if j != i:
                term = term * Polynomial([-rr, 1.0])
        s_num = s_num + term
    quot, rem = divmod(s_num * sig, w)
    size = max(np.max(np.abs((s_num * sig).coef)), 1e-300)
    if np.max(np.abs(rem.coef)) > 1e-9 * size:
        raise UnsupportedForm("sigma * rho'/rho is not a polynomial")
    t_poly = rho.exp_poly.deriv().to_numpy() * sig + quot
    if len(t_poly.coef) > 2 and np.max(np.abs(t_poly.coef[2:])) > 1e-9 * max(np.max(np.abs(t_poly.coef)), 1e-300):
        raise UnsupportedForm("sigma * rho'/rho has degree above 1")

    poly = Polynomial([1.0])
    for step in range(n):
        m = n - step
        poly = t_poly * poly + m * dsig * poly + sig * poly.deriv()
    coef = Bn * poly.coef
    if len(coef) > n + 1 and np.max(np.abs(coef[n + 1:])) > 1e-9 * np.max(np.abs(coef)):
        raise UnsupportedForm("Rodrigues expression is not a degree-n polynomial")
    coef = np.concatenate([coef, np.zeros(max(0, n + 1 - len(coef)))])[: n + 1]
    return [float(c) for c in coef]


__all__ = [
    "LowPoly",
    "Interval",
    "NuEquation",
    "ExpPowerProduct",
    "NuBranch",
    "k_candidates",
    "pi_branches",
    "all_branches",
    "select_bound_state_branch",
    "branch_rejection",
    "reduce",
    "quantized_lambda",
    "rodrigues_polynomial",
    "integrate_log_derivative",
    "real_roots",
]
