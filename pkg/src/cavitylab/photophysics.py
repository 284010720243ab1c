"""Forward simulation of every measurement the virtual lab produces.

Generates second-order correlation histograms, resonant-excitation line
scans with power broadening, tuning spectra (emission vs wavelength vs
time), and polarization fringes, each from ground-truth state with
seeded Poisson counting noise.

Rate conventions: see :mod:`cavitylab.units`.  Rabi and decay rates are
cyclic GHz; time-domain formulas multiply by 2*pi internally.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .coupling import dipole_lab, enhancement, linewidth_on_resonance, rabi_slope
from .errors import DomainError
from .field import CavityMode
from .units import TWO_PI, frequency_ghz


@dataclass(frozen=True)
class EmitterLine:
    """One optical transition of a solid-state emitter.

    ``delta_free_mhz`` is the zero-power FWHM of the uncoupled line and
    ``gamma_free_mhz`` the free-space decay rate in the same cyclic-MHz
    convention (equal for a lifetime-limited line).
    """

    zpl_wavelength_nm: float
    delta_free_mhz: float
    gamma_free_mhz: float
    dipole_body: tuple[float, float, float] = (0.0, 1.0, 0.0)
    p_sat_uw: float = 2.0
    brightness_cps: float = 50_000.0

    def __post_init__(self):
        if self.delta_free_mhz <= 0 or self.gamma_free_mhz <= 0:
            raise DomainError("linewidth and decay rate must be positive")
        if self.p_sat_uw <= 0:
            raise DomainError("saturation power must be positive")
        n = float(np.linalg.norm(self.dipole_body))
        if n == 0:
            raise DomainError("dipole vector must be nonzero")
        if not math.isclose(n, 1.0, rel_tol=1e-9):
            object.__setattr__(self, "dipole_body",
                               tuple(float(c) / n for c in self.dipole_body))


@dataclass(frozen=True)
class NanodiamondPose:
    """Position (nm) and in-plane rotation of the emitter host crystal."""

    position: tuple[float, float, float]
    rotation_deg: float
    emitters: tuple[EmitterLine, ...] = ()
    isolated_index: int = 0

    def __post_init__(self):
        x, y, z = self.position
        if z < 0:
            raise DomainError("host crystal sits on top of the device: z >= 0")
        object.__setattr__(self, "position", (float(x), float(y), float(z)))
        object.__setattr__(self, "rotation_deg", float(self.rotation_deg) % 360.0)
        if self.emitters and not (0 <= self.isolated_index < len(self.emitters)):
            raise DomainError("isolated_index out of range")

    @property
    def isolated_emitter(self) -> EmitterLine:
        if not self.emitters:
            raise DomainError("pose carries no emitters")
        return self.emitters[self.isolated_index]


@dataclass(frozen=True)
class G2Model:
    """Parameters of the driven two-level correlation function.

    ``omega_ghz`` (Rabi) and ``gamma_ghz`` (decay) are cyclic frequencies.
    The oscillation frequency is reduced by damping; below critical
    damping (omega < gamma/4) the model continues analytically into
    hyperbolic shape and ``overdamped`` is set.
    """

    omega_ghz: float
    gamma_ghz: float
    snr: float

    def __post_init__(self):
        if self.gamma_ghz <= 0:
            raise DomainError("decay rate must be positive")
        if self.omega_ghz < 0 or self.snr < 0:
            raise DomainError("omega and snr must be non-negative")

    @property
    def overdamped(self) -> bool:
        return self.omega_ghz < self.gamma_ghz / 4.0

    @property
    def omega_d_ghz(self) -> float:
        """|omega_d| in cyclic GHz; imaginary branch when overdamped."""
        return math.sqrt(abs(self.omega_ghz ** 2 - (self.gamma_ghz / 4.0) ** 2))

    @property
    def g2_zero(self) -> float:
        return 1.0 - (self.snr / (self.snr + 1.0)) ** 2


@dataclass
class MeasurementRecord:
    """One acquired dataset: abscissa, ordinate, and acquisition settings."""

    kind: str  # g2 | ple | spectrum | polarization | afm_pose
    abscissa: np.ndarray
    abscissa_unit: str
    ordinate: np.ndarray
    settings: dict = field(default_factory=dict)
    times_s: np.ndarray | None = None
    timestamp: float = field(default_factory=_time.time)

    def __post_init__(self):
        self.abscissa = np.asarray(self.abscissa)
        self.ordinate = np.asarray(self.ordinate)
        n = self.ordinate.shape[-1]
        if n != len(self.abscissa):
            raise DomainError("abscissa and ordinate lengths differ")
        if self.times_s is not None:
            self.times_s = np.asarray(self.times_s)
            if self.ordinate.shape[0] != len(self.times_s):
                raise DomainError("time axis and ordinate rows differ")

    def to_payload(self) -> dict:
        payload = {
            "kind": self.kind,
            "abscissa": self.abscissa.tolist(),
            "abscissa_unit": self.abscissa_unit,
            "ordinate": self.ordinate.tolist(),
            "settings": self.settings,
        }
        if self.times_s is not None:
            payload["times_s"] = self.times_s.tolist()
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "MeasurementRecord":
        return cls(kind=payload["kind"],
                   abscissa=np.asarray(payload["abscissa"]),
                   abscissa_unit=payload["abscissa_unit"],
                   ordinate=np.asarray(payload["ordinate"]),
                   settings=payload.get("settings", {}),
                   times_s=(np.asarray(payload["times_s"])
                            if "times_s" in payload else None))


def g2_theory(model: G2Model, tau_ns) -> np.ndarray | float:
    """Second-order correlation of a coherently driven two-level emitter.

    Evaluated through the complex square root so the under- and
    overdamped branches join continuously at omega = gamma/4.
    """
    tau = np.abs(np.asarray(tau_ns, dtype=float))
    scalar = tau.ndim == 0
    tau = np.atleast_1d(tau)
    w = TWO_PI * model.omega_ghz      # rad/ns
    g = TWO_PI * model.gamma_ghz      # rad/ns
    z = np.sqrt(complex(w * w - (g / 4.0) ** 2))
    zt = z * tau
    small = np.abs(zt) < 1e-12
    sinc = np.where(small, 1.0, np.sin(np.where(small, 1.0, zt)) / np.where(small, 1.0, zt))
    term = np.cos(zt) + (3.0 * g / 4.0) * tau * sinc
    q = model.snr / (model.snr + 1.0)
    out = 1.0 - q * q * np.exp(-0.75 * g * tau) * term.real
    return float(out[0]) if scalar else out


def simulate_g2(mode: CavityMode, pose: NanodiamondPose, emitter: EmitterLine,
                power_uw: float, total_pairs: int, seed,
                *, lambda_cav_current_nm: float | None = None,
                snr: float = 18.5, bins: int = 1024,
                window_ns: float = 10.0) -> MeasurementRecord:
    """Correlation histogram at one excitation power.

    Ground truth: Rabi frequency = scaling slope at the pose times
    sqrt(power); decay rate = free-space rate enhanced by (1 + C).
    Expected bin contents follow the theory curve; integer counts are
    independent Poisson draws, deterministic per seed.
    """
    if total_pairs <= 0:
        raise DomainError("total_pairs must be positive; empty record requested")
    if power_uw <= 0:
        raise DomainError("power must be positive")
    slope = rabi_slope(mode, pose, emitter)
    report = enhancement(mode, pose, emitter, lambda_cav_current_nm)
    omega = slope * math.sqrt(power_uw)
    gamma = emitter.gamma_free_mhz / 1000.0 * (1.0 + report.cooperativity)
    model = G2Model(omega_ghz=omega, gamma_ghz=gamma, snr=snr)

    tau = np.linspace(-window_ns, window_ns, bins)
    expected = g2_theory(model, tau)
    scale = total_pairs / float(np.sum(expected))
    gen = seed if isinstance(seed, np.random.Generator) else _rng.generator(int(seed))
    counts = gen.poisson(scale * expected)
    return MeasurementRecord(
        kind="g2", abscissa=tau, abscissa_unit="ns", ordinate=counts,
        settings={"power_uw": power_uw, "total_pairs": int(total_pairs),
                  "bins": bins, "window_ns": window_ns, "snr": snr,
                  "truth": {"omega_ghz": omega, "gamma_ghz": gamma,
                            "cooperativity": report.cooperativity,
                            "slope_ghz_per_sqrt_uw": slope}})


def simulate_ple(mode: CavityMode, pose: NanodiamondPose, emitter: EmitterLine,
                 power_uw: float, scan_range_ghz: float, points: int, seed,
                 *, dwell_s: float = 0.1,
                 lambda_cav_current_nm: float | None = None) -> MeasurementRecord:
    """Resonant line scan: Lorentzian with power-broadened width.

    The zero-power width is the free-space linewidth broadened by the
    pose's cooperativity; the scan abscissa is laser detuning in GHz from
    the transition.
    """
    if power_uw <= 0 or points < 5:
        raise DomainError("need positive power and at least 5 scan points")
    report = enhancement(mode, pose, emitter, lambda_cav_current_nm)
    delta0_mhz = linewidth_on_resonance(emitter.delta_free_mhz, report.cooperativity)
    fwhm_ghz = delta0_mhz / 1000.0 * math.sqrt(1.0 + power_uw / emitter.p_sat_uw)
    if scan_range_ghz < 3.0 * fwhm_ghz:
        raise DomainError(
            f"scan range {scan_range_ghz:.3f} GHz does not cover the "
            f"{fwhm_ghz * 1000:.0f} MHz line")
    s = power_uw / emitter.p_sat_uw
    peak_rate = emitter.brightness_cps * s / (1.0 + s)
    detuning = np.linspace(-scan_range_ghz / 2, scan_range_ghz / 2, points)
    lorentz = 1.0 / (1.0 + (2.0 * detuning / fwhm_ghz) ** 2)
    gen = seed if isinstance(seed, np.random.Generator) else _rng.generator(int(seed))
    counts = gen.poisson(peak_rate * dwell_s * lorentz)
    return MeasurementRecord(
        kind="ple", abscissa=detuning, abscissa_unit="GHz", ordinate=counts,
        settings={"power_uw": power_uw, "dwell_s": dwell_s, "points": points,
                  "truth": {"fwhm_mhz": fwhm_ghz * 1000.0,
                            "delta0_mhz": delta0_mhz,
                            "cooperativity": report.cooperativity}})


def simulate_tuning_spectrum(mode: CavityMode, pose: NanodiamondPose,
                             ensemble: tuple[EmitterLine, ...],
                             tuner_offsets_ghz, times_s,
                             spectrometer_resolution_ghz: float, seed,
                             *, dwell_s: float = 1.0,
                             counts_scale: float = 2000.0,
                             background: float = 5.0) -> MeasurementRecord:
    """Emission map (time x wavelength) while the cavity resonance drifts.

    For each time step the cavity sits ``offset`` GHz red of nominal;
    every ensemble line contributes a resolution-limited peak at its own
    wavelength whose brightness follows the enhancement at the current
    detuning.  Empty ensembles yield an all-background map.
    """
    offsets = np.asarray(tuner_offsets_ghz, dtype=float)
    times = np.asarray(times_s, dtype=float)
    if offsets.shape != times.shape:
        raise DomainError("offsets and times must have equal length")
    nu_nominal = frequency_ghz(mode.lambda_cav_nm)
    if ensemble:
        line_nus = np.array([frequency_ghz(e.zpl_wavelength_nm) for e in ensemble])
        lo, hi = line_nus.min(), line_nus.max()
    else:
        lo = hi = nu_nominal
    span = max(hi - lo, 1.0)
    nu_bins = np.arange(lo - 0.25 * span - 5 * spectrometer_resolution_ghz,
                        hi + 0.25 * span + 5 * spectrometer_resolution_ghz,
                        spectrometer_resolution_ghz / 2.0)
    gen = seed if isinstance(seed, np.random.Generator) else _rng.generator(int(seed))
    sigma = spectrometer_resolution_ghz / 2.3548  # FWHM -> gaussian sigma
    rows = []
    for off in offsets:
        nu_cav = nu_nominal - off
        rate = np.full_like(nu_bins, background)
        for line in ensemble:
            nu_line = frequency_ghz(line.zpl_wavelength_nm)
            rep = enhancement(mode, pose, line,
                              lambda_cav_current_nm=299_792_458.0 / nu_cav)
            amp = counts_scale * rep.total_enhancement
            rate = rate + amp * np.exp(-0.5 * ((nu_bins - nu_line) / sigma) ** 2)
        rows.append(gen.poisson(rate * dwell_s))
    ordinate = np.array(rows)
    return MeasurementRecord(
        kind="spectrum", abscissa=nu_bins, abscissa_unit="GHz",
        ordinate=ordinate, times_s=times,
        settings={"resolution_ghz": spectrometer_resolution_ghz,
                  "dwell_s": dwell_s, "counts_scale": counts_scale,
                  "nu_cav_nominal_ghz": nu_nominal})


def dipole_angle_lab_deg(pose: NanodiamondPose, emitter: EmitterLine) -> float:
    """In-plane angle of the lab-frame dipole, degrees from the x axis, mod 180."""
    d = dipole_lab(pose, emitter)
    return math.degrees(math.atan2(d[1], d[0])) % 180.0


def simulate_polarization(pose: NanodiamondPose, emitter: EmitterLine,
                          angles_deg, counts_scale: float, seed,
                          *, visibility: float = 0.95,
                          dwell_s: float = 1.0) -> MeasurementRecord:
    """Analyzer fringe: counts vs analyzer angle, period 180 degrees."""
    angles = np.asarray(angles_deg, dtype=float)
    if len(np.unique(np.round(angles, 6))) < 4:
        raise DomainError("need at least 4 distinct analyzer angles")
    if not (0.0 <= visibility <= 1.0):
        raise DomainError("visibility must be in [0, 1]")
    theta = dipole_angle_lab_deg(pose, emitter)
    delta = np.radians(angles - theta)
    rate = counts_scale * (visibility * np.cos(delta) ** 2 + (1.0 - visibility) / 2.0)
    gen = seed if isinstance(seed, np.random.Generator) else _rng.generator(int(seed))
    counts = gen.poisson(rate * dwell_s)
    return MeasurementRecord(
        kind="polarization", abscissa=angles, abscissa_unit="deg",
        ordinate=counts,
        settings={"counts_scale": counts_scale, "visibility": visibility,
                  "dwell_s": dwell_s,
                  "truth": {"dipole_angle_deg": theta}})
