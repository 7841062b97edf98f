"""Series glottal circuit and the quasi-static flow solve.

The glottis is modeled as two fold stages in series across a DC drive (the
Thevenin equivalent of the lung-pressure source): the lower fold pairs a
linear element with a compressive one, the upper fold a linear element with
an expansive one.  Each stage's oscillator throttles both of its elements
through the shared bias_scale, so the series admittance is zero outside the
pulses and glottal flow is the common series current.

Dynamics are quasi-static: at every sample time the oscillators set the
biases and the network is solved fresh for the current that satisfies the
voltage balance sum(element voltages) = drive.  The residual

    f(I) = sum_k element_voltage(e_k, I) - v_drive

is strictly increasing in I, so a Newton iteration with analytic slope,
guarded by a maintained bisection bracket [0, I_hi], always converges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elements import ElementKind, ResistorElement
from .errors import ModelDomainError, SolverError
from .oscillator import OscillatorConfig
from .pressure import DcVoltage, PressureCmH2O, pressure_to_voltage

DEFAULT_SAMPLE_RATE_HZ = 44100
MIN_SAMPLE_RATE_HZ = 8000
DEFAULT_DURATION_S = 1.0

# Newton/bisection termination: residual within 1e-12 * max(v_drive, 1),
# well inside the 1e-10 voltage-balance budget of the simulate contract.
_RESIDUAL_RTOL = 1e-12
_MAX_SOLVER_STEPS = 200


@dataclass(frozen=True)
class FoldStage:
    """One vocal fold: linear + nonlinear element gated by one oscillator."""

    linear: ResistorElement
    nonlinear: ResistorElement
    oscillator: OscillatorConfig

    def __post_init__(self):
        if self.linear.kind is not ElementKind.LINEAR:
            raise ModelDomainError(
                f"fold linear branch must be a LINEAR element, got {self.linear.kind}")
        if self.nonlinear.kind is ElementKind.LINEAR:
            raise ModelDomainError(
                "fold nonlinear branch must be COMPRESSIVE or EXPANSIVE")


@dataclass(frozen=True)
class GlottalCircuit:
    """Two fold stages in series across the DC drive."""

    lower: FoldStage
    upper: FoldStage
    drive: DcVoltage

    def __post_init__(self):
        if self.lower.nonlinear.kind is not ElementKind.COMPRESSIVE:
            raise ModelDomainError(
                "lower fold pairs its linear element with a COMPRESSIVE one")
        if self.upper.nonlinear.kind is not ElementKind.EXPANSIVE:
            raise ModelDomainError(
                "upper fold pairs its linear element with an EXPANSIVE one")
        if self.drive.value < 0.0:
            raise ModelDomainError(
                f"drive voltage must be >= 0, got {self.drive.value!r}")

    @property
    def inter_fold_lag_s(self) -> float:
        """Phase offset of the upper fold relative to the lower one."""
        return self.upper.oscillator.phase_lag_s - self.lower.oscillator.phase_lag_s

    @classmethod
    def normal_voice(cls, pressure_cmh2o: float = 10.0, *,
                     period_s: float = 0.008,
                     pulse_duration_s: float | None = None,
                     rise_fraction: float = 0.9,
                     fold_lag_s: float = 0.001,
                     lower_linear_gain: float = 1.0,
                     lower_compressive_gain: float = 1.0,
                     upper_linear_gain: float = 1.0,
                     upper_expansive_gain: float = 1.0) -> "GlottalCircuit":
        """Default normal-voice circuit: 125 Hz pulses, 1 ms fold lag, unit gains."""
        pulse = period_s if pulse_duration_s is None else pulse_duration_s
        lower_osc = OscillatorConfig(period_s=period_s, pulse_duration_s=pulse,
                                     rise_fraction=rise_fraction, phase_lag_s=0.0)
        upper_osc = OscillatorConfig(period_s=period_s, pulse_duration_s=pulse,
                                     rise_fraction=rise_fraction,
                                     phase_lag_s=fold_lag_s)
        return cls(
            lower=FoldStage(ResistorElement(ElementKind.LINEAR, lower_linear_gain),
                            ResistorElement(ElementKind.COMPRESSIVE,
                                            lower_compressive_gain),
                            lower_osc),
            upper=FoldStage(ResistorElement(ElementKind.LINEAR, upper_linear_gain),
                            ResistorElement(ElementKind.EXPANSIVE,
                                            upper_expansive_gain),
                            upper_osc),
            drive=pressure_to_voltage(PressureCmH2O(pressure_cmh2o)))


@dataclass(frozen=True, eq=False)
class GlottalWaveform:
    """Sampled simulation output: flow plus the two fold conductance traces."""

    sample_rate_hz: int
    u_gl: np.ndarray
    g_lower: np.ndarray
    g_upper: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        for name in ("u_gl", "g_lower", "g_upper"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.ndim != 1:
                raise ModelDomainError(f"{name} must be one-dimensional")
            if not np.all(np.isfinite(arr)):
                raise ModelDomainError(f"{name} must be finite everywhere")
        if not (len(self.u_gl) == len(self.g_lower) == len(self.g_upper)):
            raise ModelDomainError("waveform arrays must share one length")
        if len(self.u_gl) == 0:
            raise ModelDomainError("waveform must hold at least one sample")
        if self.sample_rate_hz < MIN_SAMPLE_RATE_HZ:
            raise ModelDomainError(
                f"sample_rate_hz must be >= {MIN_SAMPLE_RATE_HZ}")
        if np.any(self.u_gl < 0.0):
            raise ModelDomainError("glottal flow is unipolar; u_gl must be >= 0")
        closed = (self.g_lower == 0.0) | (self.g_upper == 0.0)
        if np.any(self.u_gl[closed] != 0.0):
            raise ModelDomainError("flow must vanish wherever a fold bias is zero")

    def __len__(self) -> int:
        return len(self.u_gl)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.u_gl)) / float(self.sample_rate_hz)


def _forward_current(kind: ElementKind, coeff: np.ndarray,
                     v: np.ndarray) -> np.ndarray:
    if kind is ElementKind.LINEAR:
        return coeff * v
    if kind is ElementKind.COMPRESSIVE:
        return coeff * np.sqrt(v)
    return coeff * v * v


def _voltage_and_slope(kinds, coeffs, x):
    """Total series voltage at current x > 0, and its derivative in x."""
    total = np.zeros_like(x)
    slope = np.zeros_like(x)
    for kind, c in zip(kinds, coeffs):
        if kind is ElementKind.LINEAR:
            total += x / c
            slope += 1.0 / c
        elif kind is ElementKind.COMPRESSIVE:
            r = x / c
            total += r * r
            slope += 2.0 * r / c
        else:
            total += np.sqrt(x / c)
            slope += 0.5 / np.sqrt(x * c)
    return total, slope


def _newton_bisect(kinds, coeffs, v_drive):
    """Vectorized root of f(I) = sum element voltages - v_drive, per entry.

    All arrays share one shape; every coefficient and drive entry must be
    strictly positive.  The bracket [0, I_hi] starts from the smallest
    single-element current at full drive, which is already an upper bound for
    the series current (each element sees at most the whole drive), so
    f(I_hi) >= 0 up to rounding and no bracket growth is needed.
    """
    v = v_drive
    hi = _forward_current(kinds[0], coeffs[0], v)
    for kind, c in zip(kinds[1:], coeffs[1:]):
        hi = np.minimum(hi, _forward_current(kind, c, v))
    lo = np.zeros_like(v)
    x = hi.copy()
    tol = _RESIDUAL_RTOL * np.maximum(v, 1.0)
    done = np.zeros(v.shape, dtype=bool)
    f = np.zeros_like(v)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(_MAX_SOLVER_STEPS):
            total, slope = _voltage_and_slope(kinds, coeffs, x)
            f = total - v
            done |= np.abs(f) <= tol
            if done.all():
                return x
            pending = ~done
            lo = np.where(pending & (f < 0.0), x, lo)
            hi = np.where(pending & (f > 0.0), x, hi)
            step = x - f / slope
            # Fall back to bisection when Newton leaves the bracket or stalls.
            bad = ~np.isfinite(step) | (step <= lo) | (step >= hi) | (step == x)
            x = np.where(pending, np.where(bad, 0.5 * (lo + hi), step), x)
    idx = int(np.argmax(~done))
    raise SolverError(
        f"series current solve did not converge (residual {float(f.flat[idx])!r} V "
        f"in bracket [{float(lo.flat[idx])!r}, {float(hi.flat[idx])!r}])",
        residual=float(f.flat[idx]),
        bracket=(float(lo.flat[idx]), float(hi.flat[idx])),
        index=idx)


def solve_series_current(elements, v_drive: float) -> float:
    """Common current through a series stack of elements at a given drive.

    Returns 0 when the drive is zero or any element is open (effective
    coefficient 0); otherwise the unique I >= 0 balancing the voltage drops,
    with residual below 1e-12 * max(v_drive, 1).
    """
    elements = list(elements)
    if not elements:
        raise ModelDomainError("series network needs at least one element")
    if not math.isfinite(v_drive) or v_drive < 0.0:
        raise ModelDomainError(
            f"drive voltage must be finite and >= 0, got {v_drive!r}")
    if v_drive == 0.0:
        return 0.0
    coeffs = [e.effective_coefficient for e in elements]
    if min(coeffs) == 0.0:
        return 0.0
    kinds = tuple(e.kind for e in elements)
    arrays = tuple(np.full(1, c, dtype=float) for c in coeffs)
    x = _newton_bisect(kinds, arrays, np.full(1, float(v_drive)))
    return float(x[0])


def _check_grid(duration_s: float, sample_rate_hz: int) -> tuple[int, int]:
    rate = int(sample_rate_hz)
    if rate != sample_rate_hz or rate < MIN_SAMPLE_RATE_HZ:
        raise ModelDomainError(
            f"sample_rate_hz must be an integer >= {MIN_SAMPLE_RATE_HZ}, "
            f"got {sample_rate_hz!r}")
    if not math.isfinite(duration_s) or duration_s <= 0.0:
        raise ModelDomainError(
            f"duration_s must be finite and > 0, got {duration_s!r}")
    n = int(round(duration_s * rate))
    if n < 1:
        raise ModelDomainError(
            f"duration {duration_s!r} s is shorter than one sample at {rate} Hz")
    return n, rate


def conductance_traces(circuit: GlottalCircuit, duration_s: float = DEFAULT_DURATION_S,
                       sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Normalized bias traces (oscillator sample / peak) of both folds."""
    n, rate = _check_grid(duration_s, sample_rate_hz)
    t = np.arange(n) / float(rate)
    lower_osc = circuit.lower.oscillator
    upper_osc = circuit.upper.oscillator
    g_lower = lower_osc.sample_times(t) / lower_osc.peak_current
    g_upper = upper_osc.sample_times(t) / upper_osc.peak_current
    return g_lower, g_upper


def simulate(circuit: GlottalCircuit, duration_s: float = DEFAULT_DURATION_S,
             sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ) -> GlottalWaveform:
    """Quasi-static simulation on a uniform grid t_k = k / sample_rate_hz.

    At each sample both elements of a fold take bias_scale equal to that
    fold's normalized oscillator value, and the four-element series network
    is solved for the flow.  Output is deterministic: identical inputs give
    bit-identical arrays.
    """
    n, rate = _check_grid(duration_s, sample_rate_hz)
    t = np.arange(n) / float(rate)
    g_lower, g_upper = conductance_traces(circuit, duration_s, rate)
    u = np.zeros(n)
    drive = circuit.drive.value
    gains = (circuit.lower.linear.gain, circuit.lower.nonlinear.gain,
             circuit.upper.linear.gain, circuit.upper.nonlinear.gain)
    if drive > 0.0 and min(gains) > 0.0:
        active = (g_lower > 0.0) & (g_upper > 0.0)
        if active.any():
            gl = g_lower[active]
            gu = g_upper[active]
            kinds = (ElementKind.LINEAR, ElementKind.COMPRESSIVE,
                     ElementKind.LINEAR, ElementKind.EXPANSIVE)
            coeffs = (gains[0] * gl, gains[1] * gl, gains[2] * gu, gains[3] * gu)
            v = np.full(gl.shape, drive)
            try:
                u[active] = _newton_bisect(kinds, coeffs, v)
            except SolverError as exc:
                # Map the failing solve entry back to its sample time.
                k = int(np.flatnonzero(active)[exc.index or 0])
                raise SolverError(
                    f"{exc} at t = {float(t[k])!r} s", residual=exc.residual,
                    bracket=exc.bracket, index=k, time_s=float(t[k])) from exc
    return GlottalWaveform(sample_rate_hz=rate, u_gl=u,
                           g_lower=g_lower, g_upper=g_upper)
