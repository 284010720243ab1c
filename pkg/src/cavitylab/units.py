"""Unit conventions and conversions used across the package.

Conventions, fixed once:

* lengths and wavelengths in nm, times in s (histograms in ns),
  optical frequencies and detunings in GHz, linewidths in MHz (FWHM),
  powers in microwatt.
* Rates that enter oscillatory/decay formulas (Rabi frequency, decay
  rate) are stored as *cyclic* frequencies in GHz.  Evaluation of
  time-domain expressions multiplies by 2*pi, so a Rabi frequency of
  2.7 GHz oscillates with period 1/2.7 ns.  A lifetime-limited line of
  FWHM ``d`` MHz corresponds to a cyclic decay rate of ``d``/1000 GHz.
"""

from __future__ import annotations

# speed of light expressed in nm * GHz (= m/s * 1e9 nm/m / 1e9 Hz/GHz)
C_NM_GHZ = 299_792_458.0

TWO_PI = 6.283185307179586


def frequency_ghz(wavelength_nm: float) -> float:
    """Optical frequency in GHz for a vacuum wavelength in nm."""
    if wavelength_nm <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength_nm}")
    return C_NM_GHZ / wavelength_nm


def wavelength_nm(frequency_ghz_: float) -> float:
    """Vacuum wavelength in nm for an optical frequency in GHz."""
    if frequency_ghz_ <= 0:
        raise ValueError(f"frequency must be positive, got {frequency_ghz_}")
    return C_NM_GHZ / frequency_ghz_


def detune_wavelength_nm(wavelength_nm_: float, detuning_ghz: float) -> float:
    """Wavelength after shifting the corresponding frequency by ``detuning_ghz``."""
    return wavelength_nm(frequency_ghz(wavelength_nm_) + detuning_ghz)
