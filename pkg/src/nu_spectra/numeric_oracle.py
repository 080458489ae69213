"""Independent numerical checks: finite-difference eigenvalues, adaptive
quadrature and residual probes.  Nothing here touches the reduction engine."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NotConverged, ToleranceNotMet

# 15-point Kronrod nodes on [0, 1) of the symmetric rule, with the embedded
# 7-point Gauss weights on the odd-indexed nodes
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_W_GAUSS = np.zeros(15)
_W_GAUSS[1:7:2] = _WG[:3]
_W_GAUSS[7] = _WG[3]
_W_GAUSS[9:15:2] = _WG[2::-1]

MAX_DEPTH = 40
MAX_INTERVALS = 20000


@dataclass(frozen=True)
class GridSpec:
    lower: float
    upper: float
    points: int
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.points < 3 or not self.upper > self.lower:
            raise ValueError("grid needs points >= 3 and upper > lower")

    @property
    def h(self) -> float:
        return (self.upper - self.lower) / (self.points - 1)


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: tuple
    convergence_estimate: float
    coarse: tuple = ()
    fine: tuple = ()


def _gk15(f, a: float, b: float):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = np.asarray(f(center + half * _NODES), dtype=float)
    kron = half * float(np.dot(_W_KRONROD, vals))
    gauss = half * float(np.dot(_W_GAUSS, vals))
    return kron, abs(kron - gauss)


def _map_to_finite(f, lower: float, upper: float):
    """Return (g, a, b) with the integral of g over (a, b) equal to that of f."""
    lo_inf, hi_inf = math.isinf(lower), math.isinf(upper)
    if not lo_inf and not hi_inf:
        return f, lower, upper
    if not lo_inf and hi_inf:
        def g(t):
            t = np.asarray(t, dtype=float)
            return f(lower + t / (1.0 - t)) / (1.0 - t) ** 2
        return g, 0.0, 1.0
    if lo_inf and not hi_inf:
        def g(t):
            t = np.asarray(t, dtype=float)
            return f(upper - t / (1.0 - t)) / (1.0 - t) ** 2
        return g, 0.0, 1.0

    def g(t):
        t = np.asarray(t, dtype=float)
        return f(t / (1.0 - t * t)) * (1.0 + t * t) / (1.0 - t * t) ** 2
    return g, -1.0, 1.0


def quadrature(f: Callable, domain, tol: float = 1e-10, rel_tol: float = 0.0,
               breakpoints=()) -> float:
    """Adaptive 15-point Gauss-Kronrod integral of a vectorized f over domain.

    ``domain`` is an Interval or a (lower, upper) pair; infinite ends are mapped
    to a finite range first.  Subintervals with the largest error estimate are
    bisected until the summed estimate drops to max(tol, rel_tol*|I|).
    """
    lower, upper = (domain.lower, domain.upper) if hasattr(domain, "lower") else domain
    if lower == upper:
        return 0.0
    sign = 1.0
    if lower > upper:
        lower, upper, sign = upper, lower, -1.0
    g, a, b = _map_to_finite(f, float(lower), float(upper))
    cuts = [a]
    for p in sorted(breakpoints):
        if lower < p < upper:
            if math.isinf(lower) or math.isinf(upper):
                raise ValueError("breakpoints only supported on finite domains")
            cuts.append(float(p))
    cuts.append(b)

    heap = []
    total = 0.0
    err = 0.0
    for counter, (lo, hi) in enumerate(zip(cuts[:-1], cuts[1:])):
        val, e = _gk15(g, lo, hi)
        heapq.heappush(heap, (-e, counter, lo, hi, val, 0))
        total += val
        err += e
    counter = len(heap)
    while err > max(tol, rel_tol * abs(total)):
        neg_e, _, lo, hi, val, depth = heapq.heappop(heap)
        if depth >= MAX_DEPTH:
            raise ToleranceNotMet(
                f"error estimate {err:.3g} above tolerance after depth {MAX_DEPTH} near [{lo}, {hi}]"
            )
        if len(heap) >= MAX_INTERVALS:
            # a target below the roundoff floor would otherwise bisect everywhere down to MAX_DEPTH
            raise ToleranceNotMet(f"error estimate {err:.3g} above tolerance after {MAX_INTERVALS} subintervals")
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, depth + 1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, depth + 1))
        counter += 2
    # resum to avoid drift from the running updates
    return sign * math.fsum(item[4] for item in heap)


def sphere_quadrature(f: Callable, tol: float = 1e-10, start: int = 8, max_nodes: int = 512) -> complex:
    """Integral of f(theta, phi) sin(theta) over the unit sphere.

    Gauss-Legendre in cos(theta) times the trapezoid rule in phi; the node
    count doubles until two successive results agree within tol.
    """
    previous = None
    n = start
    while n <= max_nodes:
        xs, ws = np.polynomial.legendre.leggauss(n)
        theta = np.arccos(xs)
        phis = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
        tt, pp = np.meshgrid(theta, phis, indexing="ij")
        vals = np.asarray(f(tt, pp))
        result = complex(np.sum(ws[:, None] * vals) * (2.0 * math.pi / (2 * n)))
        if previous is not None and abs(result - previous) <= tol:
            return result
        previous = result
        n *= 2
    raise ToleranceNotMet("sphere quadrature did not stabilize")


def _tridiagonal_eigs(potential: Callable, grid: GridSpec, count: int) -> np.ndarray:
    x = np.linspace(grid.lower, grid.upper, grid.points)[1:-1]
    h = grid.h
    diag = 2.0 / h ** 2 + np.asarray(potential(x), dtype=float)
    off = np.full(len(x) - 1, -1.0 / h ** 2)
    # LAPACK stebz: bisection on the Sturm sequence for the selected indices
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                            select_range=(0, count - 1), lapack_driver="stebz")
    return np.sort(vals)


def sturm_count(potential: Callable, grid: GridSpec, shift: float) -> int:
    """Number of eigenvalues of the grid operator below ``shift``."""
    x = np.linspace(grid.lower, grid.upper, grid.points)[1:-1]
    h2 = grid.h ** 2
    diag = 2.0 / h2 + np.asarray(potential(x), dtype=float) - shift
    off2 = 1.0 / h2 ** 2
    count = 0
    d = diag[0]
    for i in range(len(diag)):
        if i:
            d = diag[i] - off2 / (d if d != 0 else 1e-300)
        if d < 0:
            count += 1
    return count


def fd_eigen(potential: Callable, grid: GridSpec, count: int, tol: float | None = None) -> EigenResult:
    """Lowest eigenvalues of -u'' + U u = E u with Dirichlet ends.

    Solved on ``grid`` and on the grid with halved spacing; the returned
    eigenvalues are the Richardson combination (4 E_fine - E_coarse) / 3.
    """
    if count < 1 or count >= grid.points / 4:
        raise ValueError("count must satisfy 1 <= count < points/4")
    coarse = _tridiagonal_eigs(potential, grid, count)
    fine_grid = GridSpec(grid.lower, grid.upper, 2 * grid.points - 1, grid.boundary)
    fine = _tridiagonal_eigs(potential, fine_grid, count)
    combined = (4.0 * fine - coarse) / 3.0
    estimate = float(np.max(np.abs(fine - coarse)))
    if tol is not None and estimate > tol:
        raise NotConverged(f"two-resolution difference {estimate:.3g} exceeds {tol:.3g}")
    return EigenResult(tuple(float(v) for v in combined), estimate,
                       tuple(float(v) for v in coarse), tuple(float(v) for v in fine))


# ---------------------------------------------------------------------------
# bound-state checks


def normalization_check(state, tol: float = 1e-11) -> float:
    """Integral of |psi|^2 with the measure the state declares."""
    return state.inner(state, tol=tol)


def orthogonality_check(s1, s2, tol: float = 1e-11) -> float:
    return s1.inner(s2, tol=tol)


def second_derivative_5pt(f: Callable, x, h: float):
    x = np.asarray(x, dtype=float)
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def first_derivative_5pt(f: Callable, x, h: float):
    x = np.asarray(x, dtype=float)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def ode_residual(u: Callable, equation, window: tuple, samples: int = 50) -> float:
    """max |sigma^2 u'' + sigma tau_tilde u' + sigma_tilde u| / scale over interior samples.

    ``equation`` is any object with sigma, tau_tilde and sigma_tilde callables;
    ``window`` is the finite sampling range inside the domain.
    """
    lo, hi = window
    span = hi - lo
    h = 1e-4 * span
    xs = np.linspace(lo, hi, samples + 2)[1:-1]
    d1 = first_derivative_5pt(u, xs, h)
    d2 = second_derivative_5pt(u, xs, h)
    uv = np.asarray(u(xs), dtype=float)
    s = equation.sigma(xs)
    t1 = s * s * d2
    t2 = s * equation.tau_tilde(xs) * d1
    t3 = equation.sigma_tilde(xs) * uv
    # the s^2 |u| term keeps the scale away from zero when u'' vanishes identically
    scale = np.max(np.abs(t1) + np.abs(t2) + np.abs(t3) + s * s * np.abs(uv))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(t1 + t2 + t3)) / scale)
