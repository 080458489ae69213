"""Data behind the two figures: oscillator eigenfunctions and the Morse /
modified Hulthen overlay. Only numbers are produced; plotting is left to the
caller."""
from __future__ import annotations

import math

import numpy as np

from .catalog.base import bisect
from .catalog.elementary import Harmonic1D
from .catalog.molecular import modified_hulthen_potential, morse_equivalent, morse_potential


def figure1_dataset(levels: int = 5, lower: float = -3.0, upper: float = 3.0, points: int = 601) -> dict:
    """psi_0 .. psi_{levels-1} of the oscillator with m omega / hbar = 1."""
    spec = Harmonic1D()
    p = spec.validate({"hw": 1.0, "mw": 1.0})
    x = np.linspace(lower, upper, points)
    states = [spec.state(p, n) for n in range(levels)]
    return {
        "x": x,
        "columns": {f"psi{n}": np.asarray(s.psi(x), dtype=float) for n, s in enumerate(states)},
        "meta": {
            "potential": spec.id,
            "params": p,
            "normalization": {f"psi{n}": s.normalization for n, s in enumerate(states)},
            "energy": {f"psi{n}": s.energy for n, s in enumerate(states)},
        },
    }


def potential_minimum(f, lo: float, hi: float, step: float = 1e-6) -> float:
    """Zero of the central-difference derivative of f on [lo, hi]."""
    return bisect(lambda r: f(r + step) - f(r - step), lo, hi, rel_tol=1e-15)


def figure2_dataset(V0: float = 1.0, b: float = 2.0, a: float = 1.0, lower: float = 0.2, upper: float = 6.0,
                    points: int = 581) -> dict:
    """Modified Hulthen well and the Morse well matched to it at the minimum."""
    D, alpha, r0 = morse_equivalent(V0, b, a)
    r = np.linspace(lower, upper, points)
    mh = lambda x: float(modified_hulthen_potential(x, V0, b, a))
    r_min_numeric = potential_minimum(mh, 0.5 * r0, 2 * r0)
    return {
        "x": r,
        "columns": {
            "morse": morse_potential(r, D, alpha, r0),
            "modified_hulthen": modified_hulthen_potential(r, V0, b, a),
        },
        "meta": {
            "params": {"V0": V0, "b": b, "a": a},
            "morse": {"D": D, "alpha": alpha, "r0": r0},
            "r_min": a * math.log(2 * b - 1),
            "r_min_numeric": r_min_numeric,
            "U_min": -D,
        },
    }
