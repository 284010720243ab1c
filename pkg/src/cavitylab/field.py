"""Parametric model of cavity-mode field and relative LDOS along the beam.

The mode field is factorized as

    e_y(x, y, z) = envelope(x) * cos(pi*x/a + phi) * lateral(y) * vertical(z)

with a slowly varying envelope carrying the node structure of the mode,
a standing wave of period 2a (holes sit at half-integer multiples of a,
so antinodes at integer multiples fall midway between holes), a Gaussian
lateral profile across the beam and an evanescent decay above the
surface.  The whole product is normalized so the strongest point on the
device has |e_y| = 1.

Envelope families by node count k:

    k = 0:  exp(-x^2 / 2 sigma^2)
    k = 1:  (x/sigma) * exp(-x^2 / 2 sigma^2) * e^(1/2)      (zero at center)
    k = 2:  (1 - (x/(1.6 sigma))^2) * exp(-x^2 / 2 sigma^2)  (two symmetric
            zeros at +-1.6 sigma; the 1.6 ratio keeps the central lobe the
            global magnitude maximum)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CalibrationError, DomainError

# node position of the two-node envelope, in units of sigma; > 0.78 keeps
# the central lobe dominant over the outer lobes
NODE_SIGMA_RATIO = 1.6

NORMALIZATION_GRID_NM = 1.0


@dataclass(frozen=True)
class EnvelopeSpec:
    """Slowly varying envelope of one cavity mode along the beam axis."""

    node_count: int
    width_sigma_nm: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.node_count not in (0, 1, 2):
            raise DomainError(f"unsupported node_count {self.node_count}")
        if self.width_sigma_nm <= 0:
            raise DomainError("width_sigma_nm must be positive")

    def value(self, x_nm):
        """Envelope (signed), normalized so max magnitude is 1."""
        x = np.asarray(x_nm, dtype=float)
        u = x / self.width_sigma_nm
        g = np.exp(-0.5 * u * u)
        if self.node_count == 0:
            raw = g
        elif self.node_count == 1:
            # peak magnitude of u*exp(-u^2/2) is e^(-1/2) at u = 1
            raw = u * g * math.exp(0.5)
        else:
            xn = NODE_SIGMA_RATIO * self.width_sigma_nm
            raw = (1.0 - (x / xn) ** 2) * g
        return self.amplitude * raw


@dataclass(frozen=True)
class CavityMode:
    """One photonic-crystal cavity mode plus the geometry of its host device."""

    label: str
    lambda_cav_nm: float
    q_factor: float
    mode_volume: float          # in units of (lambda/n)^3
    refractive_index: float
    hole_spacing_nm: float
    envelope: EnvelopeSpec
    polarization_axis: tuple[float, float, float] = (0.0, 1.0, 0.0)
    transmission_factor: float = 1.0
    standing_wave_phase: float = 0.0
    lateral_width_nm: float = 150.0
    z_decay_nm: float = 100.0
    extent_x_nm: float = 3000.0
    extent_y_nm: float = 250.0
    extent_z_nm: float = 500.0
    # per-mode calibration constants for the observables derived from the field
    s_ref_ghz_per_sqrt_uw: float = 1.0
    c_max: float = 0.0

    def __post_init__(self):
        if self.q_factor <= 0 or self.mode_volume <= 0:
            raise DomainError("q_factor and mode_volume must be positive")
        if self.lambda_cav_nm <= 0 or self.hole_spacing_nm <= 0:
            raise DomainError("lambda_cav_nm and hole_spacing_nm must be positive")
        if not (0.0 < self.transmission_factor <= 1.0):
            raise DomainError("transmission_factor must be in (0, 1]")
        n = np.linalg.norm(self.polarization_axis)
        if not math.isclose(n, 1.0, rel_tol=1e-9):
            object.__setattr__(
                self, "polarization_axis",
                tuple(float(c) / n for c in self.polarization_axis))


@dataclass(frozen=True)
class FieldSample:
    """Signed, normalized field amplitude at one position."""

    e_y: float
    position: tuple[float, float, float]


def _check_extent(mode: CavityMode, position: Sequence[float]) -> tuple[float, float, float]:
    x, y, z = (float(c) for c in position)
    if abs(x) > mode.extent_x_nm or abs(y) > mode.extent_y_nm:
        raise DomainError(
            f"position ({x:.1f}, {y:.1f}, {z:.1f}) nm outside device extent "
            f"(+-{mode.extent_x_nm:.0f}, +-{mode.extent_y_nm:.0f}) nm")
    if z < 0 or z > mode.extent_z_nm:
        raise DomainError(f"z = {z:.1f} nm outside [0, {mode.extent_z_nm:.0f}] nm")
    return x, y, z


def _axial(mode: CavityMode, x) -> np.ndarray:
    """Unnormalized on-axis profile envelope(x) * standing wave(x)."""
    x = np.asarray(x, dtype=float)
    return mode.envelope.value(x) * np.cos(
        np.pi * x / mode.hole_spacing_nm + mode.standing_wave_phase)


@lru_cache(maxsize=64)
def _axial_norm(mode: CavityMode) -> float:
    """Peak |envelope * standing wave| over the device, refined off-grid."""
    xs = np.arange(-mode.extent_x_nm, mode.extent_x_nm + NORMALIZATION_GRID_NM,
                   NORMALIZATION_GRID_NM)
    vals = np.abs(_axial(mode, xs))
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    res = minimize_scalar(lambda x: -abs(float(_axial(mode, x))),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-9})
    return max(float(vals[i]), -float(res.fun))


def field_at(mode: CavityMode, position: Sequence[float]) -> FieldSample:
    """Normalized signed field amplitude e_y at ``position`` (nm)."""
    x, y, z = _check_extent(mode, position)
    axial = float(_axial(mode, x)) / _axial_norm(mode)
    lateral = math.exp(-0.5 * (y / mode.lateral_width_nm) ** 2)
    vertical = math.exp(-max(z, 0.0) / mode.z_decay_nm)
    e_y = axial * lateral * vertical
    e_y = min(1.0, max(-1.0, e_y))
    return FieldSample(e_y=e_y, position=(x, y, z))


def ldos_at(mode: CavityMode, position: Sequence[float]) -> float:
    """Relative LDOS, |e_y|^2, normalized to 1 at the field maximum."""
    return field_at(mode, position).e_y ** 2


def field_map(mode: CavityMode, pitch_nm: float = 10.0) -> dict[str, np.ndarray]:
    """On-axis scan of e_y and LDOS over the device extent."""
    xs = np.arange(-mode.extent_x_nm, mode.extent_x_nm + pitch_nm, pitch_nm)
    e = np.array([field_at(mode, (x, 0.0, 0.0)).e_y for x in xs])
    return {"x_nm": xs, "e_y": e, "ldos": e ** 2}


def antinode_position(mode: CavityMode) -> tuple[float, float]:
    """On-axis position of the global field maximum (the envelope antinode)."""
    xs = np.arange(-mode.extent_x_nm, mode.extent_x_nm + NORMALIZATION_GRID_NM,
                   NORMALIZATION_GRID_NM)
    vals = np.abs(_axial(mode, xs))
    i = int(np.argmax(vals))
    # prefer the non-negative-x twin of a symmetric pair
    if xs[i] < 0:
        j = int(np.argmin(np.abs(xs - (-xs[i]))))
        if np.isclose(vals[j], vals[i], rtol=1e-9, atol=1e-12):
            i = j
    return float(xs[i]), 0.0


# --- envelope calibration ---------------------------------------------------
#
# Constraints are tuples:
#   ("node_at", x_nm)                  |env(x)| < 1e-6
#   ("antinode_near", x_nm, window_nm) peak of |env| within window of x
#   ("zero_at_center",)                env(0) == 0
#   ("max_at_center",)                 |env(0)| is the global maximum
#   ("ldos_less", x_a_nm, x_b_nm)      env(x_a)^2 < env(x_b)^2

_NODE_COUNT_BY_LABEL = {"I": 0, "II": 1, "III": 2}


def _satisfies(spec: EnvelopeSpec, constraint: tuple, extent: float) -> bool:
    xs = np.arange(-extent, extent + 1.0, 1.0)
    env = spec.value(xs)
    kind = constraint[0]
    if kind == "node_at":
        return abs(float(spec.value(constraint[1]))) < 1e-6
    if kind == "antinode_near":
        x0, window = constraint[1], constraint[2]
        peak = float(xs[np.argmax(np.abs(env))])
        return abs(abs(peak) - abs(x0)) <= window
    if kind == "zero_at_center":
        return abs(float(spec.value(0.0))) < 1e-9
    if kind == "max_at_center":
        return abs(float(spec.value(0.0))) >= float(np.max(np.abs(env))) - 1e-9
    if kind == "ldos_less":
        a = float(spec.value(constraint[1])) ** 2
        b = float(spec.value(constraint[2])) ** 2
        return a < b
    raise DomainError(f"unknown constraint kind {kind!r}")


def calibrate_envelope(mode_label: str,
                       constraints: Iterable[tuple] = (),
                       hole_spacing_nm: float = 250.0,
                       extent_x_nm: float = 3000.0) -> EnvelopeSpec:
    """Pick envelope parameters satisfying qualitative field constraints.

    Deterministic: scans a fixed width grid (0.5a .. 12a in steps of a/4)
    and returns the first width satisfying every constraint.  Raises
    :class:`CalibrationError` naming the violated constraints if none does.
    """
    if mode_label not in _NODE_COUNT_BY_LABEL:
        raise DomainError(f"unknown mode label {mode_label!r}")
    k = _NODE_COUNT_BY_LABEL[mode_label]
    constraints = list(constraints)
    defaults = {0: 4.0, 1: 8.0, 2: 5.0}  # width in units of a
    if not constraints:
        return EnvelopeSpec(node_count=k,
                            width_sigma_nm=defaults[k] * hole_spacing_nm)

    widths = np.arange(0.5, 12.01, 0.25) * hole_spacing_nm
    best_violations: list[str] | None = None
    for w in widths:
        spec = EnvelopeSpec(node_count=k, width_sigma_nm=float(w))
        violated = [repr(c) for c in constraints
                    if not _satisfies(spec, c, extent_x_nm)]
        if not violated:
            return spec
        if best_violations is None or len(violated) < len(best_violations):
            best_violations = violated
    raise CalibrationError(
        f"no envelope for mode {mode_label} satisfies the constraint set",
        violated=best_violations or [])


def serialize_mode(mode: CavityMode) -> dict:
    """JSON-ready mapping with explicit units in key names."""
    return {
        "label": mode.label,
        "lambda_cav_nm": mode.lambda_cav_nm,
        "q_factor": mode.q_factor,
        "mode_volume_lambda3": mode.mode_volume,
        "refractive_index": mode.refractive_index,
        "hole_spacing_nm": mode.hole_spacing_nm,
        "envelope": {
            "node_count": mode.envelope.node_count,
            "width_sigma_nm": mode.envelope.width_sigma_nm,
            "amplitude": mode.envelope.amplitude,
        },
        "polarization_axis": list(mode.polarization_axis),
        "transmission_factor": mode.transmission_factor,
        "standing_wave_phase": mode.standing_wave_phase,
        "lateral_width_nm": mode.lateral_width_nm,
        "z_decay_nm": mode.z_decay_nm,
        "extent_x_nm": mode.extent_x_nm,
        "extent_y_nm": mode.extent_y_nm,
        "extent_z_nm": mode.extent_z_nm,
        "s_ref_ghz_per_sqrt_uw": mode.s_ref_ghz_per_sqrt_uw,
        "c_max": mode.c_max,
    }


_MODE_KEYS = {
    "label", "lambda_cav_nm", "q_factor", "mode_volume_lambda3",
    "refractive_index", "hole_spacing_nm", "envelope", "polarization_axis",
    "transmission_factor", "standing_wave_phase", "lateral_width_nm",
    "z_decay_nm", "extent_x_nm", "extent_y_nm", "extent_z_nm",
    "s_ref_ghz_per_sqrt_uw", "c_max",
}
_ENVELOPE_KEYS = {"node_count", "width_sigma_nm", "amplitude"}


def deserialize_mode(data: dict) -> CavityMode:
    from .scenario import reject_unknown_keys  # local import; no cycle at module load
    reject_unknown_keys(data, _MODE_KEYS, "mode")
    reject_unknown_keys(data["envelope"], _ENVELOPE_KEYS, "mode.envelope")
    env = EnvelopeSpec(node_count=int(data["envelope"]["node_count"]),
                       width_sigma_nm=float(data["envelope"]["width_sigma_nm"]),
                       amplitude=float(data["envelope"].get("amplitude", 1.0)))
    return CavityMode(
        label=str(data["label"]),
        lambda_cav_nm=float(data["lambda_cav_nm"]),
        q_factor=float(data["q_factor"]),
        mode_volume=float(data["mode_volume_lambda3"]),
        refractive_index=float(data["refractive_index"]),
        hole_spacing_nm=float(data["hole_spacing_nm"]),
        envelope=env,
        polarization_axis=tuple(float(c) for c in data.get("polarization_axis", (0, 1, 0))),
        transmission_factor=float(data.get("transmission_factor", 1.0)),
        standing_wave_phase=float(data.get("standing_wave_phase", 0.0)),
        lateral_width_nm=float(data.get("lateral_width_nm", 150.0)),
        z_decay_nm=float(data.get("z_decay_nm", 100.0)),
        extent_x_nm=float(data.get("extent_x_nm", 3000.0)),
        extent_y_nm=float(data.get("extent_y_nm", 250.0)),
        extent_z_nm=float(data.get("extent_z_nm", 500.0)),
        s_ref_ghz_per_sqrt_uw=float(data.get("s_ref_ghz_per_sqrt_uw", 1.0)),
        c_max=float(data.get("c_max", 0.0)),
    )
