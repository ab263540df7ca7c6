"""Physical drive parameters and the rotating-frame quantities derived from them.

Unit conventions
----------------
All internal frequencies are angular, in rad/us; time is in us.  All
user-facing constructors and accessors speak "frequency / 2pi in MHz",
because that is how experimental drive parameters are usually quoted.
Phases are radians internally, degrees at the I/O boundary.

The two-level system is driven along x by a low-frequency tone of
amplitude ``amp`` and angular frequency ``mod_freq`` on top of static
x and z splittings ``delta_x`` and ``delta_z``.  Diagonalizing the
static part gives the frame angle theta and the dressed splitting
omega0 = sqrt(delta_z**2 + delta_x**2); the modulation index
a = 2 * amp * sin(theta) / mod_freq controls every Bessel-function
amplitude downstream.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

#: Default spectral decay rate, 1/us.  Chosen as 1/T2 with T2 = 4 us;
#: the decay enters only the Fourier response, never the unitary dynamics.
DEFAULT_GAMMA = 0.25

#: |(omega0 - 2*mod_freq) / mod_freq| above which a configuration is
#: flagged as off the second-order resonance.  A warning threshold,
#: not a hard precondition.
RESONANCE_WARN_RATIO = 0.02


@dataclass(frozen=True)
class DriveParams:
    """Physical inputs of the driven two-level problem.

    Parameters
    ----------
    delta_x : float
        Static x splitting, angular, rad/us.
    delta_z : float
        Static z splitting (detuning), angular, rad/us.
    amp : float
        Low-frequency drive amplitude A, rad/us.  Non-negative.
    mod_freq : float
        Low-frequency drive angular frequency omega, rad/us.  Positive.
    phase : float
        Initial drive phase psi, radians.
    gamma : float
        Phenomenological spectral decay rate, 1/us.  Non-negative.
    """

    delta_x: float
    delta_z: float
    amp: float
    mod_freq: float
    phase: float = 0.0
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        for name in ("delta_x", "delta_z", "amp", "mod_freq", "phase", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.mod_freq <= 0:
            raise ValueError("mod_freq must be positive")
        if self.amp < 0:
            raise ValueError("amp must be non-negative")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.delta_x == 0 and self.delta_z == 0:
            raise ValueError("delta_x and delta_z must not both be zero "
                             "(frame angle undefined)")

    @classmethod
    def from_mhz(cls, delta_x_mhz, delta_z_mhz, amp_mhz, omega_mhz,
                 psi_deg=0.0, gamma_inv_us=DEFAULT_GAMMA):
        """Build from frequencies quoted as f/2pi in MHz and phase in degrees."""
        return cls(
            delta_x=TWO_PI * delta_x_mhz,
            delta_z=TWO_PI * delta_z_mhz,
            amp=TWO_PI * amp_mhz,
            mod_freq=TWO_PI * omega_mhz,
            phase=math.radians(psi_deg),
            gamma=gamma_inv_us,
        )

    @classmethod
    def from_amp_ratio(cls, delta_x_mhz, delta_z_mhz, amp_over_omega, omega_mhz,
                       psi_deg=0.0, gamma_inv_us=DEFAULT_GAMMA):
        """Build with the drive amplitude given as the dimensionless A/omega."""
        return cls.from_mhz(delta_x_mhz, delta_z_mhz,
                            amp_mhz=amp_over_omega * omega_mhz,
                            omega_mhz=omega_mhz,
                            psi_deg=psi_deg, gamma_inv_us=gamma_inv_us)

    # MHz-facing accessors (round-trip the from_mhz inputs)
    @property
    def delta_x_mhz(self):
        return self.delta_x / TWO_PI

    @property
    def delta_z_mhz(self):
        return self.delta_z / TWO_PI

    @property
    def amp_mhz(self):
        return self.amp / TWO_PI

    @property
    def mod_freq_mhz(self):
        return self.mod_freq / TWO_PI

    @property
    def phase_deg(self):
        return math.degrees(self.phase)

    @property
    def amp_over_omega(self):
        return self.amp / self.mod_freq

    def replace(self, **changes) -> "DriveParams":
        """Return a copy with the given fields replaced (re-validated)."""
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedFrame:
    """Quantities fixed by diagonalizing the static part of the Hamiltonian.

    omega0 = sqrt(delta_z**2 + delta_x**2); sin_theta = delta_x/omega0;
    cos_theta = delta_z/omega0; mod_index a = 2*amp*sin_theta/mod_freq;
    coupling_ratio = amp*cos_theta/mod_freq (the dressed-states coupling
    strength over the modulation quantum).
    """

    omega0: float
    sin_theta: float
    cos_theta: float
    mod_index: float
    coupling_ratio: float

    @property
    def omega0_mhz(self):
        return self.omega0 / TWO_PI


def derive_frame(p: DriveParams) -> DerivedFrame:
    """Compute the dressed-frame quantities for a parameter set.

    Raises
    ------
    ValueError
        If delta_x = delta_z = 0 (already rejected by DriveParams).
    """
    omega0 = math.hypot(p.delta_x, p.delta_z)
    if omega0 == 0:
        raise ValueError("omega0 = 0: frame angle undefined")
    sin_theta = p.delta_x / omega0
    cos_theta = p.delta_z / omega0
    return DerivedFrame(
        omega0=omega0,
        sin_theta=sin_theta,
        cos_theta=cos_theta,
        mod_index=2.0 * p.amp * sin_theta / p.mod_freq,
        coupling_ratio=p.amp * cos_theta / p.mod_freq,
    )


def resonance_detuning(f: DerivedFrame, p: DriveParams) -> float:
    """Signed detuning ratio (omega0 - 2*omega) / omega.

    Zero exactly at the second-order resonance omega0 = 2*omega.  Callers
    that care should compare |ratio| against RESONANCE_WARN_RATIO.
    """
    return (f.omega0 - 2.0 * p.mod_freq) / p.mod_freq
