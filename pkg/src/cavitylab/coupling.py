"""Emission enhancement of a dipole coupled to one cavity mode.

The enhancement factorizes into three independently controllable terms:
a cavity figure of merit (Purcell factor), a spectral-overlap term set by
the emitter/cavity detuning, and a spatial term combining field strength
at the emitter position with dipole orientation.  Cooperativity and the
resulting linewidth broadening derive from the same factors through a
per-mode calibration constant ``c_max`` (the cavity's lumped emitter
efficiency), since the ideal Purcell factor is not reached in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .field import CavityMode, field_at


@dataclass(frozen=True)
class CouplingReport:
    """The three enhancement factors, their product, and cooperativity."""

    purcell_factor: float
    detuning_term: float
    spatial_term: float
    total_enhancement: float
    cooperativity: float

    def to_payload(self) -> dict:
        return {
            "purcell_factor": self.purcell_factor,
            "detuning_term": self.detuning_term,
            "spatial_term": self.spatial_term,
            "total_enhancement": self.total_enhancement,
            "cooperativity": self.cooperativity,
        }


@dataclass(frozen=True)
class CooperativityParams:
    """Rate bookkeeping: C = 4 g^2 / (kappa gamma) = gamma_added / gamma.

    All rates are cyclic frequencies in MHz.  ``gamma`` is the free-space
    emission rate (FWHM of the uncoupled line); ``gamma_added_mhz`` is the
    extra decay the cavity adds on resonance.
    """

    g_mhz: float
    kappa_mhz: float
    gamma_mhz: float
    c: float
    gamma_added_mhz: float

    def __post_init__(self):
        lhs = 4.0 * self.g_mhz ** 2 / (self.kappa_mhz * self.gamma_mhz)
        rhs = self.gamma_added_mhz / self.gamma_mhz
        for name, val in (("4g^2/(kappa gamma)", lhs), ("gamma_added/gamma", rhs)):
            if abs(val - self.c) > 1e-9 * max(1.0, abs(self.c)):
                raise DomainError(
                    f"inconsistent cooperativity: C={self.c} but {name}={val}")


def purcell_factor(q: float, v_in_lambda_cubed: float) -> float:
    """Maximal enhancement (3/4pi^2) Q/V with V in units of (lambda/n)^3."""
    if q <= 0 or v_in_lambda_cubed <= 0:
        raise DomainError("q and mode volume must be positive")
    return 3.0 / (4.0 * math.pi ** 2) * q / v_in_lambda_cubed


def detuning_term(lambda_siv_nm: float, lambda_cav_nm: float, q: float) -> float:
    """Spectral overlap term, 1 on resonance, Lorentzian roll-off with Q."""
    if lambda_siv_nm <= 0 or lambda_cav_nm <= 0 or q <= 0:
        raise DomainError("wavelengths and q must be positive")
    ratio = lambda_siv_nm / lambda_cav_nm - 1.0
    return 1.0 / (1.0 + 4.0 * q * q * ratio * ratio)


def rotate_inplane(vec, theta_deg: float) -> np.ndarray:
    """Rotate a 3-vector by theta about the z (out-of-plane) axis."""
    t = math.radians(theta_deg)
    c, s = math.cos(t), math.sin(t)
    v = np.asarray(vec, dtype=float)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]])


def dipole_lab(pose, emitter) -> np.ndarray:
    """Emitter dipole rotated from the body frame into the lab frame."""
    return rotate_inplane(emitter.dipole_body, pose.rotation_deg)


def projection_cos(mode: CavityMode, pose, emitter) -> float:
    """cos(theta_eff) between the lab-frame dipole and the mode axis."""
    d = dipole_lab(pose, emitter)
    n = np.linalg.norm(d)
    if n == 0:
        raise DomainError("dipole vector must be nonzero")
    return float(np.dot(d / n, np.asarray(mode.polarization_axis)))


def spatial_term(mode: CavityMode, pose, emitter) -> float:
    """(e_y(r) cos theta_eff)^2, the normalized field-dipole overlap in [0, 1]."""
    e_y = field_at(mode, pose.position).e_y
    val = (e_y * projection_cos(mode, pose, emitter)) ** 2
    return min(1.0, val)


def enhancement(mode: CavityMode, pose, emitter,
                lambda_cav_current_nm: float | None = None) -> CouplingReport:
    """Full coupling report for a pose against a (possibly tuned) mode."""
    lam_cav = mode.lambda_cav_nm if lambda_cav_current_nm is None else lambda_cav_current_nm
    f = purcell_factor(mode.q_factor, mode.mode_volume)
    dt = detuning_term(emitter.zpl_wavelength_nm, lam_cav, mode.q_factor)
    xi = spatial_term(mode, pose, emitter)
    return CouplingReport(
        purcell_factor=f,
        detuning_term=dt,
        spatial_term=xi,
        total_enhancement=f * dt * xi,
        cooperativity=mode.c_max * dt * xi,
    )


def linewidth_on_resonance(delta_free_mhz: float, c: float) -> float:
    """Zero-power linewidth of the coupled line: delta_free * (1 + C)."""
    if delta_free_mhz <= 0:
        raise DomainError("free-space linewidth must be positive")
    if c < 0:
        raise DomainError("cooperativity must be non-negative")
    return delta_free_mhz * (1.0 + c)


def rabi_slope(mode: CavityMode, pose, emitter) -> float:
    """Rabi-frequency scaling slope in GHz per sqrt(microwatt).

    Proportional to |e_y| |cos theta_eff| at the emitter, scaled by the
    per-mode reference slope and in-coupling transmission.  Slope ratios
    between poses of the same mode equal the |E.mu| ratios.
    """
    e_y = field_at(mode, pose.position).e_y
    return (mode.s_ref_ghz_per_sqrt_uw * abs(e_y)
            * abs(projection_cos(mode, pose, emitter))
            * math.sqrt(mode.transmission_factor))
