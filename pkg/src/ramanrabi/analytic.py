"""Closed-form quantities of the second-order Raman transition.

Second-order averaging of the dressed-frame Hamiltonian over the rapid
drive harmonics yields a static effective Hamiltonian

    H_eff = (bs_shift / 2) sigma_z
          + (omega_rwa / 2) (sigma+ exp(-2i psi) + h.c.)

with the co-rotating (RWA) Rabi frequency

    omega_rwa = 4 J2(a)/a * amp * cos_theta

and the counter-rotating (Bloch-Siegert) shift

    bs_shift = amp^2 cos_theta^2 / (2 omega)
               * { sum_{n != -3} (J_n^2 + J_n J_{n+2}) / (n+3)
                 + sum_{n != -1} (J_n^2 + J_n J_{n-2}) / (n+1) },

all Bessel arguments being the modulation index a.  The observable slow
frequency is omega_eff = sqrt(omega_rwa^2 + bs_shift^2).

The ground-state population follows a five-term closed form: a constant,
a carrier term at the even drive harmonics, a slow term at omega_eff,
and two carrier terms amplitude-modulated at omega_eff.  Its coefficient
block (c, e, b, d and their phases) is implemented here verbatim, with
the pi/2-shifted partners produced by one shared evaluator.

``averaging_oracle`` re-derives omega_rwa and bs_shift directly from the
harmonic expansion of the dressed-frame Hamiltonian, term by term, as an
independent numerical check on the closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bessel import MAX_ORDER, bessel_j, bessel_j_sequence
from .params import DerivedFrame, DriveParams

DEFAULT_N_MAX = 40
_MIN_N_MAX = 4


def _signed_j(a: float, orders_needed: int):
    """Signed-order Bessel lookup J_n(a) for |n| <= orders_needed.

    Orders beyond the special-function domain cap are returned as zero;
    at the modulation indices reachable here (a <= 12 or so) they sit
    far below double precision anyway.
    """
    top = min(orders_needed, MAX_ORDER)
    j_pos = bessel_j_sequence(top, a)

    def jn(n: int) -> float:
        if abs(n) > top:
            return 0.0
        if n < 0:
            return -j_pos[-n] if (-n) % 2 else j_pos[-n]
        return j_pos[n]

    return jn


class Provenance(str, enum.Enum):
    """How a population trace was produced."""

    CLOSED_FORM = "closed_form"                 # five-term formula
    CLOSED_FORM_DEGENERATE = "closed_form_degenerate"  # zero-RWA limit
    ODE_ORACLE = "ode_oracle"                   # direct integration
    EFFECTIVE = "effective_hamiltonian"         # static H_eff + frame maps


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid: t_k = t0 + k*dt for k in [0, n)."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n < 2:
            raise ValueError("grid needs at least two points")

    @classmethod
    def from_span(cls, t0: float, t_end: float, dt: float) -> "TimeGrid":
        n = int(round((t_end - t0) / dt)) + 1
        return cls(t0=t0, dt=dt, n=n)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def span(self) -> float:
        return self.dt * (self.n - 1)


@dataclass(frozen=True)
class TimeTrace:
    """Sampled ground-state population with its provenance and inputs."""

    t0: float
    dt: float
    samples: np.ndarray
    provenance: Provenance
    params: DriveParams
    frame: DerivedFrame

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.t0, self.dt, len(self.samples))


@dataclass(frozen=True)
class RamanQuantities:
    """Second-order frequencies and the truncation certificate.

    omega_rwa and bs_shift are signed; omega_eff is their quadrature sum.
    tail_bound estimates the magnitude discarded by truncating the Bessel
    sums at |n| <= truncation_n.
    """

    omega_rwa: float
    bs_shift: float
    omega_eff: float
    truncation_n: int
    tail_bound: float

    def tail_certified(self, omega: float) -> bool:
        """True when the truncation tail is negligible at this parameter set."""
        scale = max(abs(self.omega_rwa), abs(self.bs_shift), omega * 1e-9)
        return self.tail_bound <= 1e-6 * scale


@dataclass(frozen=True)
class EnvelopeCoefficients:
    """Coefficient block of the five-term population formula.

    Pairs (e0, e_half), (b0, b_half), (d0, d_half) are the zero and pi/2
    phase-offset variants; c, e, b, d are the quadrature amplitudes and
    phi_* the corresponding phases (atan2 of the second over the first
    component, so cos(phi_x) = x0/x and sin(phi_x) = x_half/x).
    """

    c1: float
    c2: float
    c: float
    e0: float
    e_half: float
    e: float
    b0: float
    b_half: float
    b: float
    d0: float
    d_half: float
    d: float
    phi_c: float
    phi_e: float
    phi_b: float
    phi_d: float


def effective_rabi(omega_rwa: float, bs_shift: float) -> float:
    """Quadrature combination sqrt(omega_rwa^2 + bs_shift^2)."""
    return math.hypot(omega_rwa, bs_shift)


def rabi_rwa(p: DriveParams, f: DerivedFrame) -> float:
    """Co-rotating Rabi frequency 4 J2(a)/a * amp * cos_theta, rad/us.

    Signed: follows the sign of J2(a).  The a -> 0 limit is 0 through
    J2(a)/a -> a/8.
    """
    a = f.mod_index
    if a == 0.0:
        return 0.0
    return 4.0 * bessel_j(2, a) / a * p.amp * f.cos_theta


def bloch_siegert_shift(p: DriveParams, f: DerivedFrame,
                        n_max: int = DEFAULT_N_MAX) -> tuple[float, float]:
    """Counter-rotating shift of the second-order transition, rad/us.

    Returns (shift, tail_bound).  Both Bessel sums are truncated to
    |n| <= n_max; tail_bound is the prefactor times the summed magnitude
    of the outermost two shells (|n| in {n_max-1, n_max}).  J_n(a) decays
    super-exponentially once n is a few units above a, so the bound is a
    conservative stand-in for the discarded tail whenever n_max sits
    comfortably above the modulation index.  Values of n_max below about
    20 are accepted but will generally fail the tail certificate.
    """
    if n_max < _MIN_N_MAX:
        raise ValueError(f"n_max must be >= {_MIN_N_MAX}, got {n_max}")
    a = f.mod_index
    prefactor = p.amp ** 2 * f.cos_theta ** 2 / (2.0 * p.mod_freq)
    if prefactor == 0.0:
        return 0.0, 0.0

    jn = _signed_j(a, n_max + 2)
    total = 0.0
    shell = 0.0
    for n in range(-n_max, n_max + 1):
        t1 = (jn(n) ** 2 + jn(n) * jn(n + 2)) / (n + 3) if n != -3 else 0.0
        t2 = (jn(n) ** 2 + jn(n) * jn(n - 2)) / (n + 1) if n != -1 else 0.0
        total += t1 + t2
        if abs(n) >= n_max - 1:
            shell += abs(t1) + abs(t2)
    return prefactor * total, prefactor * shell


def raman_quantities(p: DriveParams, f: DerivedFrame,
                     n_max: int = DEFAULT_N_MAX) -> RamanQuantities:
    """Bundle omega_rwa, bs_shift, omega_eff with the truncation record."""
    w2 = rabi_rwa(p, f)
    bs, tail = bloch_siegert_shift(p, f, n_max=n_max)
    return RamanQuantities(
        omega_rwa=w2,
        bs_shift=bs,
        omega_eff=effective_rabi(w2, bs),
        truncation_n=n_max,
        tail_bound=tail,
    )


def _psi_block(u, v, sin_t, cos_t, psi, alpha0, delta):
    """Shared evaluator for the (e, b, d) coefficients at phase offset delta.

    delta is added inside every trigonometric argument that contains the
    drive phase psi, including the nested cos(psi) arguments.
    """
    sin2t = 2.0 * sin_t * cos_t
    e = 0.25 * (u * u * sin_t ** 2 * math.cos(4.0 * psi - alpha0 + delta)
                + u * u * sin_t ** 2 * math.cos(alpha0 + delta)
                - u * v * sin2t * math.cos(2.0 * psi + delta))
    b = -e + 0.5 * sin_t ** 2 * math.cos(alpha0 + delta)
    d = (-0.25 * u * sin2t * math.sin(2.0 * psi + delta)
         - 0.5 * v * sin_t ** 2 * math.sin(alpha0 + delta))
    return e, b, d


def envelope_coefficients(p: DriveParams, f: DerivedFrame,
                          q: RamanQuantities) -> EnvelopeCoefficients:
    """Coefficient block of the five-term population formula.

    Raises
    ------
    ValueError
        If omega_eff = 0 (no drive, nothing oscillates at a slow rate).
    """
    if q.omega_eff <= 0.0:
        raise ValueError("omega_eff = 0: no transition to parameterize "
                         "(amp = 0 or cos_theta = 0)")
    u = q.omega_rwa / q.omega_eff
    v = q.bs_shift / q.omega_eff
    sin_t, cos_t = f.sin_theta, f.cos_theta
    sin2t = 2.0 * sin_t * cos_t
    psi = p.phase
    alpha0 = f.mod_index * math.cos(psi)

    c1 = (0.25 * u * v * sin2t * math.cos(2.0 * psi - alpha0)
          + 0.5 * u * u * cos_t ** 2)
    c2 = 0.25 * u * sin2t * math.sin(2.0 * psi - alpha0)
    e0, b0, d0 = _psi_block(u, v, sin_t, cos_t, psi, alpha0, 0.0)
    e_half, b_half, d_half = _psi_block(u, v, sin_t, cos_t, psi, alpha0,
                                        0.5 * math.pi)
    return EnvelopeCoefficients(
        c1=c1, c2=c2, c=math.hypot(c1, c2),
        e0=e0, e_half=e_half, e=math.hypot(e0, e_half),
        b0=b0, b_half=b_half, b=math.hypot(b0, b_half),
        d0=d0, d_half=d_half, d=math.hypot(d0, d_half),
        phi_c=math.atan2(c2, c1),
        phi_e=math.atan2(e_half, e0),
        phi_b=math.atan2(b_half, b0),
        phi_d=math.atan2(d_half, d0),
    )


def carrier_phase(p: DriveParams, f: DerivedFrame, t: np.ndarray) -> np.ndarray:
    """Accumulated carrier phase 2*omega*t - a*cos(omega*t + psi).

    The carrier runs at twice the modulation frequency (the resonant
    value of omega0) and is frequency-modulated by the drive itself.
    """
    return 2.0 * p.mod_freq * t - f.mod_index * np.cos(p.mod_freq * t + p.phase)


def _check_trace_dt(p: DriveParams, dt: float) -> None:
    # at least 20 samples per carrier period 2*pi/(2*omega)
    limit = 2.0 * math.pi / (20.0 * 2.0 * p.mod_freq)
    if dt > limit:
        raise ValueError(f"dt = {dt} us does not resolve the carrier; "
                         f"need dt <= {limit:.3e} us")


def population_closed_form(p: DriveParams, f: DerivedFrame, q: RamanQuantities,
                           ec: EnvelopeCoefficients, grid: TimeGrid) -> TimeTrace:
    """Ground-state population from the five-term closed form.

    P(t) = (1 + cos_theta^2 - 2 c1)/2
         + e cos(phi(t) - phi_e)
         + c cos(omega_eff t - phi_c)
         + b cos(omega_eff t) cos(phi(t) - phi_b)
         + d sin(omega_eff t) cos(phi(t) - phi_d)

    with phi(t) the frequency-modulated carrier phase.
    """
    _check_trace_dt(p, grid.dt)
    t = grid.times
    phi = carrier_phase(p, f, t)
    we_t = q.omega_eff * t
    samples = (0.5 * (1.0 + f.cos_theta ** 2 - 2.0 * ec.c1)
               + ec.e * np.cos(phi - ec.phi_e)
               + ec.c * np.cos(we_t - ec.phi_c)
               + ec.b * np.cos(we_t) * np.cos(phi - ec.phi_b)
               + ec.d * np.sin(we_t) * np.cos(phi - ec.phi_d))
    return TimeTrace(grid.t0, grid.dt, samples, Provenance.CLOSED_FORM, p, f)


def population_degenerate(p: DriveParams, f: DerivedFrame, bs_shift: float,
                          grid: TimeGrid) -> TimeTrace:
    """Population at a zero of the RWA Rabi frequency (amp at a J2 zero).

    Constant-amplitude, frequency-modulated oscillation

        P(t) = (1 + cos_theta^2)/2
             + (sin_theta^2 / 2) cos[bs t + phi(t) + a cos(psi)].

    The caller is responsible for the amplitude actually sitting at a
    J2 zero; the expression is evaluated as given.
    """
    _check_trace_dt(p, grid.dt)
    t = grid.times
    arg = (bs_shift * t + carrier_phase(p, f, t)
           + f.mod_index * math.cos(p.phase))
    samples = 0.5 * (1.0 + f.cos_theta ** 2) + 0.5 * f.sin_theta ** 2 * np.cos(arg)
    return TimeTrace(grid.t0, grid.dt, samples,
                     Provenance.CLOSED_FORM_DEGENERATE, p, f)


def harmonic_coefficients(p: DriveParams, f: DerivedFrame,
                          n_max: int = DEFAULT_N_MAX) -> dict[int, complex]:
    """Raising-operator harmonic coefficients of the dressed-frame Hamiltonian.

    At the second-order resonance the dressed-frame Hamiltonian is
    sigma+ * sum_m c_m exp(i m omega t) + h.c.; each Bessel order n feeds
    the two harmonics m = n + 3 and m = n + 1 with opposite signs.  Built
    term by term from that expansion, without collapsing anything with
    recurrence identities, so it stays an independent route to the
    closed forms.
    """
    pref = p.amp * f.cos_theta / 2j
    jn = _signed_j(f.mod_index, n_max + 3)
    coeffs: dict[int, complex] = {}
    for n in range(-n_max, n_max + 1):
        phase_n = np.exp(-1j * n * math.pi / 2.0)
        up = pref * jn(n) * phase_n * np.exp(1j * (n + 1) * p.phase)
        coeffs[n + 3] = coeffs.get(n + 3, 0.0) + up
        down = -pref * jn(n) * phase_n * np.exp(1j * (n - 1) * p.phase)
        coeffs[n + 1] = coeffs.get(n + 1, 0.0) + down
    return coeffs


def averaging_oracle(p: DriveParams, f: DerivedFrame,
                     n_max: int = DEFAULT_N_MAX) -> tuple[float, float]:
    """Numerical second-order averaging, independent of the closed forms.

    Resonance is imposed exactly.  The first-order average is the static
    m = 0 harmonic, which carries omega_rwa through its exp(-2i psi)
    dressing.  The second-order average pairs each harmonic m with its
    conjugate partner; every m != 0 contributes a static sigma_z piece
    |c_m|^2 / (m omega), and twice their sum is the Bloch-Siegert shift.

    Returns (omega_rwa_num, bs_shift_num) in rad/us.
    """
    coeffs = harmonic_coefficients(p, f, n_max=n_max)
    c0 = coeffs.get(0, 0.0)
    w2_complex = 2.0 * c0 * np.exp(2j * p.phase)
    bs = 0.0
    for m, cm in coeffs.items():
        if m == 0:
            continue
        bs += abs(cm) ** 2 / (m * p.mod_freq)
    return float(np.real(w2_complex)), 2.0 * bs
