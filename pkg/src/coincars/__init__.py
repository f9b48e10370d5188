"""coincars: interference spectroscopy of CARS signals from noisy broadband pulses.

A forward simulator and analysis toolkit: resonant/non-resonant anti-Stokes
fields for Lorentzian Raman media, two-sample interference maps with a
variable inter-arm phase, seeded noisy-probe generators (multi-Lorentzian,
random-phase, layered-medium transmission), noise-realization averaging,
and the closed-form integrated interference signal used to turn fringe
visibility into a same/different verdict for two samples.
"""

from coincars.spectra import (
    C_CM_PER_PS,
    ComplexSpectrum,
    DomainError,
    FrequencyGrid,
    RamanLine,
    RamanMedium,
    read_line_list,
    resample,
    total_power,
    wavelength_to_wavenumber,
    wavenumber_to_wavelength,
)

__version__ = "0.1.0"

__all__ = [
    "C_CM_PER_PS",
    "ComplexSpectrum",
    "DomainError",
    "FrequencyGrid",
    "RamanLine",
    "RamanMedium",
    "read_line_list",
    "resample",
    "total_power",
    "wavelength_to_wavenumber",
    "wavenumber_to_wavelength",
    "__version__",
]
