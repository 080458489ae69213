"""Classical orthogonal polynomials, terminating hypergeometric sums and gamma helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DivergentIntegral, DomainError, PoleAtC


@dataclass(frozen=True)
class OrthoFamily:
    kind: str  # "jacobi" | "laguerre" | "hermite"
    alpha: float = 0.0
    beta: float = 0.0

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "OrthoFamily":
        return cls("jacobi", float(alpha), float(beta))

    @classmethod
    def laguerre(cls, alpha: float = 0.0) -> "OrthoFamily":
        return cls("laguerre", float(alpha))

    @classmethod
    def hermite(cls) -> "OrthoFamily":
        return cls("hermite")

    @property
    def classical(self) -> bool:
        if self.kind == "jacobi":
            return self.alpha > -1 and self.beta > -1
        if self.kind == "laguerre":
            return self.alpha > -1
        return True


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """x y_n = alpha_n y_{n+1} + beta_n y_n + gamma_n y_{n-1}."""

    alpha_n: float
    beta_n: float
    gamma_n: float


# ---------------------------------------------------------------------------
# gamma machinery


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma needs a positive argument, got {x}")
    return math.lgamma(x)


def gamma_value(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma needs a positive argument, got {x}")
    return math.gamma(x) if x < 170 else math.exp(math.lgamma(x))


def beta_value(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta needs positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1)."""
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def binom_general(z: float, k: int) -> float:
    """Binomial coefficient C(z, k) for real z and integer k >= 0."""
    out = 1.0
    for j in range(k):
        out *= (z - j) / (j + 1)
    return out


# ---------------------------------------------------------------------------
# recurrences


def _leading_pair(family: OrthoFamily, n: int) -> tuple:
    """(a_n, b_n): leading and subleading coefficients of y_n."""
    if family.kind == "hermite":
        return 2.0 ** n, 0.0
    if family.kind == "laguerre":
        a = family.alpha
        lead = (-1) ** n / math.factorial(n)
        sub = 0.0 if n == 0 else (-1) ** (n - 1) * (a + n) / math.factorial(n - 1)
        return lead, sub
    a, b = family.alpha, family.beta
    s = a + b
    lead = pochhammer(s + n + 1, n) / (2.0 ** n * math.factorial(n))
    if n == 0:
        return lead, 0.0
    sub = (a - b) * pochhammer(s + n + 1, n - 1) / (2.0 ** n * math.factorial(n - 1))
    return lead, sub


def recurrence_coeffs(family: OrthoFamily, n: int) -> RecurrenceCoeffs:
    if family.kind == "hermite":
        return RecurrenceCoeffs(0.5, 0.0, float(n))
    if family.kind == "laguerre":
        a = family.alpha
        return RecurrenceCoeffs(-(n + 1.0), a + 2 * n + 1.0, -(a + n))
    a, b = family.alpha, family.beta
    s = a + b
    al = 2 * (n + 1) * (s + n + 1) / ((s + 2 * n + 1) * (s + 2 * n + 2))
    if n == 0:
        # limit of the general expression when a + b = 0
        be = (b - a) / (s + 2) if s + 2 != 0 else 0.0
        return RecurrenceCoeffs(al, be, 0.0)
    be = (b * b - a * a) / ((s + 2 * n) * (s + 2 * n + 2))
    ga = 2 * (a + n) * (b + n) / ((s + 2 * n) * (s + 2 * n + 1))
    return RecurrenceCoeffs(al, be, ga)


def _jacobi_recurrence_safe(a: float, b: float, n: int) -> bool:
    s = a + b
    for k in range(1, n):
        if min(abs(s + 2 * k), abs(s + 2 * k + 1), abs(s + 2 * k + 2)) < 1e-12:
            return False
    return abs(s + 2) > 1e-12 or n <= 1


def _jacobi_explicit(a: float, b: float, n: int, x):
    x = np.asarray(x, dtype=float)
    lo = (x - 1) / 2
    hi = (x + 1) / 2
    out = np.zeros_like(x)
    for s in range(n + 1):
        out = out + binom_general(n + a, n - s) * binom_general(n + b, s) * lo ** s * hi ** (n - s)
    return out


def ortho_eval(family: OrthoFamily, n: int, x):
    """y_n(x) by forward three-term recurrence (vectorized in x)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    if family.kind == "jacobi" and not _jacobi_recurrence_safe(family.alpha, family.beta, n):
        return _jacobi_explicit(family.alpha, family.beta, n, x)
    y_prev = np.ones_like(x)
    if n == 0:
        return y_prev
    lead, sub = _leading_pair(family, 1)
    y = lead * x + sub
    for k in range(1, n):
        rc = recurrence_coeffs(family, k)
        y_prev, y = y, ((x - rc.beta_n) * y - rc.gamma_n * y_prev) / rc.alpha_n
    return y


def ortho_coefficients(family: OrthoFamily, n: int) -> np.ndarray:
    """Ascending monomial coefficients of y_n (validation scale, n <= 8)."""
    if family.kind == "jacobi" and not _jacobi_recurrence_safe(family.alpha, family.beta, n):
        a, b = family.alpha, family.beta
        poly = Polynomial([0.0])
        for s in range(n + 1):
            poly = poly + binom_general(n + a, n - s) * binom_general(n + b, s) * (
                Polynomial([-0.5, 0.5]) ** s * Polynomial([0.5, 0.5]) ** (n - s)
            )
        return np.pad(poly.coef, (0, n + 1 - len(poly.coef)))[: n + 1]
    prev = Polynomial([1.0])
    if n == 0:
        return prev.coef
    lead, sub = _leading_pair(family, 1)
    cur = Polynomial([sub, lead])
    xp = Polynomial([0.0, 1.0])
    for k in range(1, n):
        rc = recurrence_coeffs(family, k)
        prev, cur = cur, ((xp - rc.beta_n) * cur - rc.gamma_n * prev) / rc.alpha_n
    return np.pad(cur.coef, (0, n + 1 - len(cur.coef)))[: n + 1]


def family_data(family: OrthoFamily) -> dict:
    """sigma, tau coefficients, interval, weight and Rodrigues constant."""
    if family.kind == "hermite":
        return dict(sigma=(1.0, 0.0, 0.0), tau=(0.0, -2.0), interval=(-math.inf, math.inf))
    if family.kind == "laguerre":
        return dict(sigma=(0.0, 1.0, 0.0), tau=(1.0 + family.alpha, -1.0), interval=(0.0, math.inf))
    a, b = family.alpha, family.beta
    return dict(sigma=(1.0, 0.0, -1.0), tau=(b - a, -(a + b + 2.0)), interval=(-1.0, 1.0))


def weight(family: OrthoFamily, x):
    x = np.asarray(x, dtype=float)
    if family.kind == "hermite":
        return np.exp(-x * x)
    if family.kind == "laguerre":
        return x ** family.alpha * np.exp(-x)
    return (1 - x) ** family.alpha * (1 + x) ** family.beta


def rodrigues_constant(family: OrthoFamily, n: int) -> float:
    if family.kind == "hermite":
        return float((-1) ** n)
    if family.kind == "laguerre":
        return 1.0 / math.factorial(n)
    return (-1) ** n / (2.0 ** n * math.factorial(n))


def eigenvalue(family: OrthoFamily, n: int) -> float:
    if family.kind == "hermite":
        return 2.0 * n
    if family.kind == "laguerre":
        return float(n)
    return n * (family.alpha + family.beta + n + 1.0)


def norm_squared(family: OrthoFamily, n: int) -> float:
    """d_n^2 = integral of y_n^2 times the weight over the orthogonality interval."""
    if family.kind == "hermite":
        return math.exp(n * math.log(2.0) + math.lgamma(n + 1) + 0.5 * math.log(math.pi))
    if family.kind == "laguerre":
        a = family.alpha
        return math.exp(log_gamma(a + n + 1) - math.lgamma(n + 1))
    if not family.classical:
        raise DomainError("Jacobi norm needs alpha, beta > -1")
    a, b = family.alpha, family.beta
    s = a + b
    if n == 0 and abs(s + 1) < 1e-15:
        # (s + 2n + 1) Gamma(s + n + 1) -> Gamma(s + 2) at this point
        return math.exp(s * math.log(2) + log_gamma(a + 1) + log_gamma(b + 1) - log_gamma(s + 2)) * 2
    log_val = (
        (s + 1) * math.log(2.0)
        + log_gamma(a + n + 1)
        + log_gamma(b + n + 1)
        - math.lgamma(n + 1)
        - math.log(s + 2 * n + 1)
        - log_gamma(s + n + 1)
    )
    return math.exp(log_val)


# ---------------------------------------------------------------------------
# terminating hypergeometric sums


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = 134217729.0 * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_horner(ratios: list, x):
    """1 + r_1 x (1 + r_2 x (1 + ...)) in double-double arithmetic.

    The alternating terms of a terminating series can exceed the result by many
    orders of magnitude; carrying a second word keeps the cancellation exact
    to working precision.  ``ratios`` are exact fractions.
    """
    x = np.asarray(x, dtype=float)
    hi = np.ones_like(x)
    lo = np.zeros_like(x)
    for r in reversed(ratios):
        r_hi = float(r)
        r_lo = float(r - Fraction(r_hi))
        # (hi, lo) * (r_hi, r_lo)
        p, e = _two_prod(hi, r_hi)
        e = e + hi * r_lo + lo * r_hi
        hi, lo = _two_sum(p, e)
        # times x
        p, e = _two_prod(hi, x)
        e = e + lo * x
        hi, lo = _two_sum(p, e)
        # plus one
        s, e = _two_sum(hi, 1.0)
        hi, lo = _two_sum(s, e + lo)
    return hi + lo


def _check_terminating(neg_n: int, c: float) -> int:
    if neg_n > 0 or int(neg_n) != neg_n:
        raise ValueError("first parameter must be a nonpositive integer")
    n = -int(neg_n)
    for j in range(n):
        if c + j == 0:
            raise PoleAtC(f"c + {j} = 0 within the summation range")
    return n


def hyp2f1_terminating(neg_n: int, b: float, c: float, x):
    """2F1(-n, b; c; x) as a finite Horner sum."""
    n = _check_terminating(neg_n, c)
    fb, fc = Fraction(float(b)), Fraction(float(c))
    ratios = [Fraction(k - 1 - n) * (fb + k - 1) / ((fc + k - 1) * k) for k in range(1, n + 1)]
    return _dd_horner(ratios, x)


def hyp1f1_terminating(neg_n: int, c: float, x):
    """1F1(-n; c; x) as a finite Horner sum."""
    n = _check_terminating(neg_n, c)
    fc = Fraction(float(c))
    ratios = [Fraction(k - 1 - n) / ((fc + k - 1) * k) for k in range(1, n + 1)]
    return _dd_horner(ratios, x)


def hyp3f2_unit(neg_m: int, a2: float, a3: float, b1: float, b2: float) -> float:
    """3F2(-m, a2, a3; b1, b2; 1), terminating."""
    m = -int(neg_m)
    total = 1.0
    term = 1.0
    for k in range(m):
        term *= (k - m) * (a2 + k) * (a3 + k) / ((b1 + k) * (b2 + k) * (k + 1))
        total += term
    return total


def laguerre_product_integral(n: int, m: int, s: int, alpha: float, beta: float) -> float:
    """Integral over (0, inf) of exp(-x) x^(alpha+s) L_n^alpha(x) L_m^beta(x).

    The ratio Gamma(s+1)/Gamma(s-n+m+1) is carried as the rising factorial
    (s-n+m+1)_{n-m}, which stays finite at s = -1 and vanishes exactly where
    the polynomial degrees force orthogonality.
    """
    if not n >= m >= 0:
        raise ValueError("need n >= m >= 0")
    if alpha + s <= -1:
        raise DivergentIntegral(f"alpha + s = {alpha + s} <= -1")
    d = n - m
    ratio = pochhammer(s - d + 1, d)
    if ratio == 0.0:
        return 0.0
    prefactor = (
        (-1) ** d
        * math.exp(log_gamma(alpha + s + 1) - math.lgamma(m + 1) - math.lgamma(d + 1))
        * pochhammer(beta + 1, m)
        * ratio
    )
    return prefactor * hyp3f2_unit(-m, s + 1, beta - alpha - s, beta + 1, d + 1)


def laguerre_norm_weighted(n: int, alpha: float) -> float:
    """Closed form of the s = 1, n = m, beta = alpha integral."""
    return (alpha + 2 * n + 1) * math.exp(log_gamma(alpha + n + 1) - math.lgamma(n + 1))


def laguerre_norm_inverse(m: int, delta: float) -> float:
    """Closed form of the s = -1, n = m, beta = alpha = delta integral."""
    return math.exp(log_gamma(delta + m + 1) - math.lgamma(m + 1)) / delta
