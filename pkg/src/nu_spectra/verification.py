"""Verification suites behind ``nu-spectra verify``.

Each suite returns a list of Check records; ``run`` bundles them into a
machine-readable report.  Tolerances default to DEFAULT_TOLERANCES and can be
overridden through NU_SPECTRA_TOL, e.g. ``NU_SPECTRA_TOL="norm=1e-7,oracle=2e-3"``.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .catalog import REGISTRY
from .catalog.elementary import spherical_harmonic
from .catalog.molecular import mod_hulthen_rotation_coeffs, morse_rotation_coeffs
from .catalog.coulomb import fine_structure_expansion_check
from .errors import InvalidParams, NuSpectraError
from .molecules import molecule_table
from .numeric_oracle import ode_residual, quadrature, sphere_quadrature
from .poly_kernel import (
    OrthoFamily,
    laguerre_norm_inverse,
    laguerre_norm_weighted,
    laguerre_product_integral,
    ortho_eval,
)

SCOPES = ("all", "tables", "oracle", "normalization", "expansions")

# "oracle" is None by default: each potential carries its own FD tolerance
DEFAULT_TOLERANCES = {
    "table": 1e-10,
    "quantization": 1e-9,
    "oracle": None,
    "norm": 1e-6,
    "orthogonality": 1e-6,
    "residual": 1e-6,
    "negative_control": 1e-3,
    "harmonics": 1e-8,
    "laguerre": 1e-8,
    "expansion": 1e-4,
    "expansion_order": 0.05,
}

ENV_VAR = "NU_SPECTRA_TOL"


def tolerances(env: dict | None = None) -> dict:
    """Defaults updated by ``key=value`` pairs (comma separated) from NU_SPECTRA_TOL."""
    env = os.environ if env is None else env
    tol = dict(DEFAULT_TOLERANCES)
    raw = env.get(ENV_VAR, "").strip()
    if not raw:
        return tol
    for item in raw.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in tol:
            raise InvalidParams(f"{ENV_VAR}: expected key=value with key in {sorted(tol)}, got {item!r}")
        try:
            val = float(value)
        except ValueError:
            raise InvalidParams(f"{ENV_VAR}: {key} needs a number, got {value!r}") from None
        if not val > 0:
            raise InvalidParams(f"{ENV_VAR}: {key} must be positive")
        tol[key] = val
    return tol


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    measured: float | None
    tolerance: float | None
    detail: dict = field(default_factory=dict)


def _fail(suite: str, name: str, exc: Exception) -> Check:
    return Check(suite, name, False, None, None, {"error": f"{type(exc).__name__}: {exc}"})


def _params_label(p: dict) -> str:
    return ",".join(f"{k}={v:g}" for k, v in sorted(p.items())) or "defaults"


# ---------------------------------------------------------------------------
# tables


def table_suite(tol: dict) -> list:
    checks = []
    for pid, spec in REGISTRY.items():
        worst, cases, ok = 0.0, [], True
        try:
            for params, energy in spec.table_cases():
                rep = spec.table_check(params, energy)
                devs = {k: v for k, v in rep.items() if isinstance(v, float)}
                dev = max(devs.values())
                worst = max(worst, dev)
                good = dev <= tol["table"] and rep.get("real_path", "NoRealK") == "NoRealK"
                ok = ok and good
                cases.append({"params": params, "trial_energy": energy, "max_rel_dev": dev, "passed": good})
        except NuSpectraError as exc:
            checks.append(_fail("tables", pid, exc))
            continue
        ok = ok and len(cases) >= 3
        checks.append(Check("tables", pid, ok, worst, tol["table"], {"cases": cases}))
    checks.append(molecule_check())
    return checks


def molecule_check() -> Check:
    rows = molecule_table()
    flags = {r["molecule"]: r["flag"] for r in rows}
    expected = {"H2": "DISCREPANT", "HCl": "CONSISTENT", "I2": "DISCREPANT"}
    hcl = next(r for r in rows if r["molecule"] == "HCl")
    return Check("tables", "molecules", flags == expected, hcl["b_abs_diff"], 1e-3,
                 {"flags": flags, "HCl_V0_rel_diff": hcl["V0_rel_diff"]})


# ---------------------------------------------------------------------------
# finite-difference oracle


def oracle_suite(tol: dict) -> list:
    checks = []
    for pid, spec in REGISTRY.items():
        if not spec.has_spectrum:
            continue
        for params in spec.oracle_cases():
            name = f"{pid}[{_params_label(params)}]"
            start = time.perf_counter()
            try:
                run = spec.oracle(spec.validate(params))
            except NuSpectraError as exc:
                checks.append(_fail("oracle", name, exc))
                continue
            limit = run.tolerance if tol["oracle"] is None else tol["oracle"]
            worst = max(run.errors)
            checks.append(Check("oracle", name, worst <= limit, worst, limit, {
                "levels": list(run.levels),
                "closed_form": list(run.closed_form),
                "numeric": list(run.numeric),
                "relative": run.relative,
                "convergence_estimate": run.convergence_estimate,
                "seconds": time.perf_counter() - start,
            }))
    return checks


# ---------------------------------------------------------------------------
# normalization, orthogonality, residual, nodes, quantization


def _levels_for(spec, p, most: int = 3) -> list:
    first, count = spec.first_level(p), spec.level_count(p)
    span = most if count is None else min(count, most)
    return list(range(first, first + span))


def state_checks(pid: str, params: dict, tol: dict) -> list:
    spec = REGISTRY[pid]
    p = spec.validate(params)
    label = f"{pid}[{_params_label(params)}]"
    checks, states = [], {}
    for lv in _levels_for(spec, p):
        name = f"{label} {spec.level_name}={lv}"
        try:
            st = spec.state(p, lv)
        except NuSpectraError as exc:
            checks.append(_fail("normalization", name, exc))
            continue
        states[lv] = st
        dev = abs(st.inner(st) - 1)
        checks.append(Check("normalization", f"norm {name}", dev <= tol["norm"], dev, tol["norm"]))
        if st.mapped_u is not None and st.equation is not None:
            res = ode_residual(st.mapped_u, st.equation, st.sample_window)
            checks.append(Check("normalization", f"residual {name}", res <= tol["residual"], res, tol["residual"]))
        if st.polynomial is not None and st.polynomial_part:
            nodes = st.node_count()
            degree = st.polynomial_part[1]
            checks.append(Check("normalization", f"nodes {name}", nodes == degree, float(nodes), None,
                                {"degree": degree}))
        try:
            q = spec.quantized_energy(p, lv)
        except NotImplementedError:
            continue
        except NuSpectraError as exc:
            checks.append(_fail("normalization", f"quantization {name}", exc))
            continue
        rel = abs(q - st.energy) / max(abs(st.energy), 1e-300)
        checks.append(Check("normalization", f"quantization {name}", rel <= tol["quantization"], rel,
                            tol["quantization"], {"closed_form": st.energy, "quantized": q}))
    if spec.orthogonal_states:
        for a, b in itertools.combinations(sorted(states), 2):
            val = abs(states[a].inner(states[b]))
            checks.append(Check("normalization", f"orthogonality {label} {spec.level_name}={a},{b}",
                                val <= tol["orthogonality"], val, tol["orthogonality"]))
    return checks


def negative_controls(tol: dict) -> list:
    """Residual at a perturbed energy must be large, or the residual check proves nothing."""
    checks = []
    for pid, params, level in (("harmonic_1d", {}, 1), ("hulthen", {"beta2": 2.0}, 1)):
        spec = REGISTRY[pid]
        p = spec.validate(params)
        st = spec.state(p, level)
        res = ode_residual(st.mapped_u, spec.build(p, st.energy + 0.01), st.sample_window)
        checks.append(Check("normalization", f"negative_control {pid} {spec.level_name}={level}",
                            res > tol["negative_control"], res, tol["negative_control"],
                            {"energy_shift": 0.01}))
    return checks


def harmonics_check(tol: dict, l_max: int = 3) -> Check:
    pairs = [(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]
    worst = 0.0
    for (l1, m1), (l2, m2) in itertools.combinations_with_replacement(pairs, 2):
        val = sphere_quadrature(
            lambda t, ph: spherical_harmonic(l1, m1, t, ph) * np.conj(spherical_harmonic(l2, m2, t, ph)),
            tol=1e-13)
        worst = max(worst, abs(val - (1.0 if (l1, m1) == (l2, m2) else 0.0)))
    return Check("normalization", f"spherical_harmonics orthonormality l<={l_max}", worst <= tol["harmonics"],
                 worst, tol["harmonics"], {"pairs": len(pairs) * (len(pairs) + 1) // 2})


def laguerre_check(tol: dict) -> Check:
    """Closed-form Laguerre product integrals against quadrature (beta = alpha).

    The error is taken relative to the same integral with L_n L_m replaced by
    (L_n^2 + L_m^2)/2, a smooth bound on the absolute integrand, so integrals
    that vanish by orthogonality are tested on the same scale.
    """
    worst, count = 0.0, 0
    for alpha in (0.5, 1.0, 2.5):
        fam = OrthoFamily.laguerre(alpha)
        for n in range(6):
            for m in range(n + 1):
                for s in (-1, 0, 1, 2):
                    closed = laguerre_product_integral(n, m, s, alpha, alpha)
                    # x = t^2 removes the x^(alpha+s) endpoint singularity
                    w = lambda t: 2 * np.exp(-t * t) * t ** (2 * (alpha + s) + 1)
                    f = lambda t: w(t) * ortho_eval(fam, n, t * t) * ortho_eval(fam, m, t * t)
                    bound = lambda t: 0.5 * w(t) * (ortho_eval(fam, n, t * t) ** 2 + ortho_eval(fam, m, t * t) ** 2)
                    scale = quadrature(bound, (0.0, math.inf), tol=1e-12, rel_tol=1e-10)
                    quad = quadrature(f, (0.0, math.inf), tol=1e-13 * scale)
                    worst = max(worst, abs(closed - quad) / max(abs(closed), scale))
                    count += 1
    special = 0.0
    for alpha in (0.5, 1.0, 2.5):
        for n in range(6):
            special = max(special,
                          abs(laguerre_product_integral(n, n, 1, alpha, alpha) - laguerre_norm_weighted(n, alpha))
                          / laguerre_norm_weighted(n, alpha),
                          abs(laguerre_product_integral(n, n, -1, alpha, alpha) - laguerre_norm_inverse(n, alpha))
                          / laguerre_norm_inverse(n, alpha))
    ok = worst <= tol["laguerre"] and special <= 1e-12
    return Check("normalization", "laguerre_product_integral vs quadrature", ok, worst, tol["laguerre"],
                 {"integrals": count, "specialization_rel_dev": special})


def normalization_suite(tol: dict) -> list:
    checks = []
    for pid, spec in REGISTRY.items():
        if not spec.has_spectrum:
            continue
        for params in spec.normalization_cases():
            checks.extend(state_checks(pid, params, tol))
    checks.extend(negative_controls(tol))
    checks.append(harmonics_check(tol))
    checks.append(laguerre_check(tol))
    return checks


# ---------------------------------------------------------------------------
# expansions


FINE_STRUCTURE_CASES = (
    ("schrodinger_rel", 0, 0), ("schrodinger_rel", 1, 0), ("schrodinger_rel", 0, 1), ("schrodinger_rel", 0, 2),
    ("dirac", 0, 0.5), ("dirac", 1, 0.5), ("dirac", 0, 1.5), ("dirac", 0, 2.5),
)


def _defect_order(defect, h: float = 1e-2) -> float:
    """Observed order p of defect(x) ~ c x^p from x = h and h/2."""
    return math.log2(abs(defect(h) / defect(h / 2)))


def expansion_suite(tol: dict) -> list:
    checks = []
    for model, n_r, lj in FINE_STRUCTURE_CASES:
        name = f"fine_structure {model} n_r={n_r} {'l' if model == 'schrodinger_rel' else 'j'}={lj:g}"
        try:
            rep = fine_structure_expansion_check(model, n_r, lj)
        except NuSpectraError as exc:
            checks.append(_fail("expansions", name, exc))
            continue
        worst = max(rep["relative_error"]["c2"], rep["relative_error"]["c4"])
        checks.append(Check("expansions", name, worst <= tol["expansion"], worst, tol["expansion"], {
            "coefficients": rep["coefficients"], "expected": rep["expected"],
        }))
    for alpha in (1.44, 2.38, 4.954):
        c0, c1, c2 = morse_rotation_coeffs(alpha)

        def defect(x, c0=c0, c1=c1, c2=c2, alpha=alpha):
            return 1 / (1 + x) ** 2 - (c0 + c1 * math.exp(-alpha * x) + c2 * math.exp(-2 * alpha * x))

        order = _defect_order(defect)
        checks.append(Check("expansions", f"morse_rotation_coeffs alpha={alpha:g}",
                            abs(order - 3) <= tol["expansion_order"], abs(order - 3), tol["expansion_order"],
                            {"order": order, "C": [c0, c1, c2]}))
    for b in (1.5904, 2.0, 4.51744):
        c0, c1, c2, x0 = mod_hulthen_rotation_coeffs(b)

        def defect(x, c0=c0, c1=c1, c2=c2, x0=x0):
            e = math.exp(-(1 + x) * x0)
            return 1 / (1 + x) ** 2 - c0 - e * (c1 + c2 * e) / (1 - e) ** 2

        order = _defect_order(defect)
        checks.append(Check("expansions", f"mod_hulthen_rotation_coeffs b={b:g}",
                            abs(order - 3) <= tol["expansion_order"], abs(order - 3), tol["expansion_order"],
                            {"order": order, "C": [c0, c1, c2], "x0": x0}))
    return checks


# ---------------------------------------------------------------------------

SUITES = {
    "tables": table_suite,
    "oracle": oracle_suite,
    "normalization": normalization_suite,
    "expansions": expansion_suite,
}


def run(scope: str = "all", tol: dict | None = None) -> dict:
    if scope not in SCOPES:
        raise InvalidParams(f"scope must be one of {', '.join(SCOPES)}, got {scope!r}")
    tol = tolerances() if tol is None else tol
    names = list(SUITES) if scope == "all" else [scope]
    checks, timing = [], {}
    for name in names:
        start = time.perf_counter()
        checks.extend(SUITES[name](tol))
        timing[name] = time.perf_counter() - start
    failed = [f"{c.suite}: {c.name}" for c in checks if not c.passed]
    return {
        "schema_version": 1,
        "scope": scope,
        "tolerances": tol,
        "summary": {"total": len(checks), "passed": len(checks) - len(failed), "failed": len(failed)},
        "seconds": timing,
        "failed": failed,
        "checks": [asdict(c) for c in checks],
    }
