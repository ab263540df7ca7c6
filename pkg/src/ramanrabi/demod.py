"""Slow-frequency and envelope diagnostics for population traces.

The slow-frequency extractor quadrature-demodulates the trace at twice
the modulation frequency, comb-filters the drive harmonics with a
one-period moving average, and fits a single slow tone by scanning a
linear least-squares model

    z(t) ~ alpha + beta cos(W t) + delta sin(W t)

over candidate frequencies W (complex coefficients, so the model spans
both +W and -W content).  The residual minimum is refined parabolically.
This definition is what every "demodulated slow frequency" tolerance in
the validation suite refers to.

Envelope utilities work on the closed-form coefficient block: the fast
carrier's complex amplitude is

    Z(t) = e exp(-i phi_e) + b exp(-i phi_b) cos(W t)
         + d exp(-i phi_d) sin(W t)

and |Z(t)| is the instantaneous envelope of the carrier oscillation.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .analytic import EnvelopeCoefficients, RamanQuantities, TimeGrid, TimeTrace

#: default slow-tone search band, as fractions of the modulation frequency
SEARCH_BAND = (0.02, 0.55)


def demodulate(trace: TimeTrace) -> tuple[np.ndarray, np.ndarray]:
    """Complex baseband signal of the carrier band around 2*omega.

    Multiplies by exp(-2i omega t) and applies a moving average over one
    modulation period twice (a triangular comb), which nulls every
    harmonic of omega and strongly suppresses the slow-shifted sidebands
    around them, while leaving sub-omega tones essentially untouched.
    Returns the centered time stamps and the filtered, mean-free signal.
    """
    om = trace.params.mod_freq
    t = trace.times
    z = trace.samples * np.exp(-2j * om * t)
    width = int(round(2.0 * math.pi / om / trace.dt))
    if width < 4 or 2 * width > len(z) // 2:
        raise ValueError("trace does not resolve (or hold) two modulation "
                         "periods; cannot comb-filter")
    kernel = np.full(width, 1.0 / width)
    zf = np.convolve(np.convolve(z, kernel, mode="valid"), kernel,
                     mode="valid")
    tf = t[: len(zf)] + (width - 1) * trace.dt
    return tf, zf - zf.mean()


def _tone_residual(t: np.ndarray, z: np.ndarray, w: float) -> float:
    m = np.column_stack([np.ones_like(t), np.cos(w * t), np.sin(w * t)])
    coef, *_ = np.linalg.lstsq(m, z, rcond=None)
    r = z - m @ coef
    return float(np.vdot(r, r).real)


def fit_slow_tone(t: np.ndarray, z: np.ndarray, omega: float,
                  band: tuple[float, float] = SEARCH_BAND,
                  n_scan: int = 400) -> float:
    """Best-fit slow tone frequency (rad/us) inside band * omega."""
    lo, hi = band[0] * omega, band[1] * omega
    scan = np.linspace(lo, hi, n_scan)
    res = np.array([_tone_residual(t, z, w) for w in scan])
    i = int(np.argmin(res))
    if 0 < i < n_scan - 1:
        # parabolic refinement, then one more local parabola on a finer lattice
        w = _parabolic_min(scan[i - 1: i + 2], res[i - 1: i + 2])
        step = scan[1] - scan[0]
        fine = np.linspace(w - step, w + step, 9)
        fres = np.array([_tone_residual(t, z, x) for x in fine])
        j = int(np.argmin(fres))
        if 0 < j < len(fine) - 1:
            return _parabolic_min(fine[j - 1: j + 2], fres[j - 1: j + 2])
        return float(fine[j])
    return float(scan[i])


def _parabolic_min(x3, y3) -> float:
    x0, x1, x2 = x3
    y0, y1, y2 = y3
    denom = (y0 - 2.0 * y1 + y2)
    if denom == 0:
        return float(x1)
    return float(x1 + 0.5 * (y0 - y2) / denom * (x1 - x0))


def slow_frequency(trace: TimeTrace, band=SEARCH_BAND) -> float:
    """Demodulated slow frequency of a population trace, rad/us."""
    t, z = demodulate(trace)
    return fit_slow_tone(t, z, trace.params.mod_freq, band=band)


def carrier_amplitudes(ec: EnvelopeCoefficients) -> tuple[complex, complex, complex]:
    """Complex carrier amplitudes (static, cos-modulated, sin-modulated)."""
    z_e = ec.e * cmath.exp(-1j * ec.phi_e)
    z_b = ec.b * cmath.exp(-1j * ec.phi_b)
    z_d = ec.d * cmath.exp(-1j * ec.phi_d)
    return z_e, z_b, z_d


def envelope_series(q: RamanQuantities, ec: EnvelopeCoefficients,
                    t: np.ndarray) -> np.ndarray:
    """Instantaneous carrier envelope |Z(t)| of the closed-form trace."""
    z_e, z_b, z_d = carrier_amplitudes(ec)
    ang = q.omega_eff * t
    return np.abs(z_e + z_b * np.cos(ang) + z_d * np.sin(ang))


def modulation_depth(q: RamanQuantities, ec: EnvelopeCoefficients,
                     grid: TimeGrid) -> float:
    """Peak-to-peak variation of the carrier envelope over the grid.

    Zero exactly when the RWA Rabi frequency vanishes (the envelope is
    then a pure phase rotation of constant magnitude).
    """
    env = envelope_series(q, ec, grid.times)
    return float(env.max() - env.min())
