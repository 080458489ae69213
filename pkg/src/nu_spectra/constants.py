"""Physical constants in Gaussian (cgs) units, CODATA 2018 values."""

ELEMENTARY_CHARGE = 4.803204712570263e-10  # statC
HBAR = 1.054571817e-27  # erg s
SPEED_OF_LIGHT = 2.99792458e10  # cm / s
ELECTRON_MASS = 9.1093837015e-28  # g
FINE_STRUCTURE = 7.2973525693e-3  # e^2 / (hbar c)

BOHR_RADIUS = HBAR ** 2 / (ELECTRON_MASS * ELEMENTARY_CHARGE ** 2)  # cm
HARTREE = ELEMENTARY_CHARGE ** 2 / BOHR_RADIUS  # erg
REST_ENERGY = ELECTRON_MASS * SPEED_OF_LIGHT ** 2  # erg
COMPTON_WAVENUMBER = ELECTRON_MASS * SPEED_OF_LIGHT / HBAR  # 1 / cm

# E(eV) = E(cm^-1) * CM_INV_TO_EV, the conversion used for molecular data
CM_INV_TO_EV = 1.2398e-4

SOURCES = {
    "ELEMENTARY_CHARGE": "CODATA 2018, e = 1.602176634e-19 C times c/10",
    "HBAR": "CODATA 2018",
    "SPEED_OF_LIGHT": "exact",
    "ELECTRON_MASS": "CODATA 2018",
    "FINE_STRUCTURE": "CODATA 2018",
    "CM_INV_TO_EV": "molecular table convention (4 significant digits)",
}
