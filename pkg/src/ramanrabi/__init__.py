"""Coherent dynamics of second-order Raman transitions in a driven qubit.

Closed-form Rabi and Bloch-Siegert quantities, population traces, two
independent numerical oracles (direct integration and term-by-term
averaging), and the Fourier-domain line diagnostics, plus a CLI that
reproduces the reference figure datasets.
"""

from .analytic import (DEFAULT_N_MAX, EnvelopeCoefficients, Provenance,
                       RamanQuantities, TimeGrid, TimeTrace, averaging_oracle,
                       bloch_siegert_shift, carrier_phase, effective_rabi,
                       envelope_coefficients, harmonic_coefficients,
                       population_closed_form, population_degenerate,
                       rabi_rwa, raman_quantities)
from .bessel import bessel_j, bessel_j_sequence, j2_zero, zero_crossing_amplitude
from .demod import (demodulate, envelope_series, fit_slow_tone,
                    modulation_depth, slow_frequency)
from .oracle import (IntegrationError, IntegratorConfig, QubitState,
                     evolve_effective, evolve_full)
from .params import (DEFAULT_GAMMA, RESONANCE_WARN_RATIO, TWO_PI, DerivedFrame,
                     DriveParams, derive_frame, resonance_detuning)
from .spectrum import (FourierResponse, LineCountError, SpectrumLine,
                       default_freq_grid, doublet_splitting, find_lines,
                       fourier_response, lines_in_window, peak_amplitude_near)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GAMMA", "DEFAULT_N_MAX", "RESONANCE_WARN_RATIO", "TWO_PI",
    "DerivedFrame", "DriveParams", "EnvelopeCoefficients", "FourierResponse",
    "IntegrationError", "IntegratorConfig", "LineCountError", "Provenance",
    "QubitState", "RamanQuantities", "SpectrumLine", "TimeGrid", "TimeTrace",
    "averaging_oracle", "bessel_j", "bessel_j_sequence", "bloch_siegert_shift",
    "carrier_phase", "default_freq_grid", "demodulate", "derive_frame",
    "doublet_splitting", "effective_rabi", "envelope_coefficients",
    "envelope_series", "evolve_effective", "evolve_full", "find_lines",
    "fit_slow_tone", "fourier_response", "harmonic_coefficients", "j2_zero",
    "lines_in_window", "modulation_depth", "peak_amplitude_near",
    "population_closed_form", "population_degenerate", "rabi_rwa",
    "raman_quantities", "resonance_detuning", "slow_frequency",
    "zero_crossing_amplitude", "__version__",
]
