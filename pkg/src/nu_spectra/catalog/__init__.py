"""Registry of worked potentials and the functional entry points."""
from __future__ import annotations

from types import MappingProxyType

from ..errors import InvalidParams
from .base import BoundState, PotentialSpec, SpectrumLevel
from .central import Confinement3D, Kratzer, Oscillator3D
from .coulomb import (
    Coulomb,
    DiracCoulomb,
    RelativisticSchrodinger,
    dirac_decouple,
    dirac_radial,
    fine_structure_expansion_check,
)
from .elementary import BesselFixture, Harmonic1D, SphericalHarmonics, bessel_reduction_fixture, spherical_harmonic
from .molecular import (
    GeneralizedMorse,
    Hulthen,
    ModifiedHulthen,
    ModifiedHulthenRotation,
    Morse,
    MorseRotation,
    generalized_morse_params,
    match_morse_to_modified_hulthen,
    mod_hulthen_rotation_coeffs,
    mod_hulthen_rotation_params,
    morse_rotation_coeffs,
)
from .trig import ModifiedPoschlTeller, PoschlTeller

_ORDER = (
    Harmonic1D, BesselFixture, SphericalHarmonics, Coulomb, RelativisticSchrodinger, DiracCoulomb,
    Confinement3D, Oscillator3D, PoschlTeller, ModifiedPoschlTeller, Kratzer, Hulthen, Morse, MorseRotation,
    ModifiedHulthen, ModifiedHulthenRotation, GeneralizedMorse,
)

REGISTRY = MappingProxyType({cls.id: cls() for cls in _ORDER})


def get(potential_id: str) -> PotentialSpec:
    try:
        return REGISTRY[potential_id]
    except KeyError:
        raise InvalidParams(f"unknown potential {potential_id!r}; known: {', '.join(REGISTRY)}") from None


def build_equation(potential_id: str, params: dict, trial_energy: float):
    spec = get(potential_id)
    return spec.build(spec.validate(params), trial_energy)


def spectrum(potential_id: str, params: dict, up_to: int) -> list:
    if up_to < 0:
        raise InvalidParams(f"up_to must be >= 0, got {up_to}")
    spec = get(potential_id)
    return spec.spectrum(spec.validate(params), up_to)


def split_quantum_numbers(spec: PotentialSpec, params: dict, quantum_numbers: dict) -> tuple:
    """(params, level): quantum numbers that are also parameters (l, m, kappa) move into params."""
    params = dict(params or {})
    qn = dict(quantum_numbers)
    if spec.level_name not in qn:
        raise InvalidParams(f"{spec.id} needs quantum number {spec.level_name!r}")
    level = qn.pop(spec.level_name)
    if int(level) != level:
        raise InvalidParams(f"{spec.level_name} must be an integer, got {level}")
    known = {s.name for s in spec.param_specs}
    for key, value in qn.items():
        if key not in known:
            raise InvalidParams(f"unknown quantum number {key!r} for {spec.id}")
        params[key] = value
    return params, int(level)


def eigenstate(potential_id: str, params: dict, quantum_numbers: dict) -> BoundState:
    spec = get(potential_id)
    params, level = split_quantum_numbers(spec, params, quantum_numbers)
    return spec.state(spec.validate(params), level)


__all__ = [
    "REGISTRY", "BoundState", "PotentialSpec", "SpectrumLevel", "get", "build_equation", "spectrum", "eigenstate",
    "split_quantum_numbers", "spherical_harmonic", "dirac_decouple", "dirac_radial",
    "fine_structure_expansion_check", "morse_rotation_coeffs", "mod_hulthen_rotation_coeffs",
    "mod_hulthen_rotation_params", "match_morse_to_modified_hulthen", "generalized_morse_params",
    "bessel_reduction_fixture",
]
