import cmath
import math

import numpy as np
import pytest

from ramanrabi import (DriveParams, TWO_PI, TimeGrid, averaging_oracle,
                       bessel_j, bloch_siegert_shift, derive_frame,
                       effective_rabi, envelope_coefficients, j2_zero,
                       population_closed_form, population_degenerate,
                       rabi_rwa, raman_quantities, zero_crossing_amplitude)

A_STAR = 5.135622301840683


def reference_params(amp_over_omega=2.6808735472606733, psi_deg=0.0):
    return DriveParams.from_amp_ratio(10.0, 3.0, amp_over_omega, 5.22,
                                      psi_deg=psi_deg)


def params_at_index(a, psi=0.0):
    """Parameters with the reference frame but modulation index exactly a."""
    p0 = reference_params()
    f0 = derive_frame(p0)
    amp = a * p0.mod_freq / (2.0 * f0.sin_theta)
    return p0.replace(amp=amp, phase=psi)


# ---------------------------------------------------------------- rabi_rwa

def test_rabi_small_index_limit():
    # J2(a)/a -> a/8, so rabi/(amp*a*cos_theta) -> 1/2
    p = params_at_index(1e-4)
    f = derive_frame(p)
    ratio = rabi_rwa(p, f) / (p.amp * f.mod_index * f.cos_theta)
    assert ratio == pytest.approx(0.5, abs=1e-8)


def test_rabi_zero_at_crossing_amplitude():
    p0 = reference_params()
    f0 = derive_frame(p0)
    amp = zero_crossing_amplitude(f0, p0.mod_freq, k=1)
    p = p0.replace(amp=amp)
    f = derive_frame(p)
    assert abs(rabi_rwa(p, f)) <= 1e-10 * p.amp


def test_rabi_sign_change_across_crossing():
    for k in (1, 2):
        below = params_at_index(j2_zero(k) - 0.2)
        above = params_at_index(j2_zero(k) + 0.2)
        rb = rabi_rwa(below, derive_frame(below))
        ra = rabi_rwa(above, derive_frame(above))
        assert rb * ra < 0


def test_rabi_zero_amp():
    p = reference_params().replace(amp=0.0)
    assert rabi_rwa(p, derive_frame(p)) == 0.0


# ------------------------------------------------------ bloch_siegert_shift

def test_bs_zero_amp():
    p = reference_params().replace(amp=0.0)
    bs, tail = bloch_siegert_shift(p, derive_frame(p))
    assert bs == 0.0 and tail == 0.0


def test_bs_small_index_limit():
    # braces -> 4/3 as a -> 0, so shift -> (2/3) amp^2 cos^2 / omega
    p = params_at_index(1e-4)
    f = derive_frame(p)
    bs, _ = bloch_siegert_shift(p, f)
    limit = (2.0 / 3.0) * p.amp ** 2 * f.cos_theta ** 2 / p.mod_freq
    assert bs == pytest.approx(limit, rel=1e-7)


def test_bs_reference_value():
    # frozen from two independent routes (printed double sum and the
    # harmonic-pair sum, both evaluated with scipy Bessel functions)
    p = reference_params()
    f = derive_frame(p)
    bs, tail = bloch_siegert_shift(p, f)
    assert bs / TWO_PI == pytest.approx(-0.4698, abs=2e-4)
    assert tail < 1e-12 * abs(bs)


def test_bs_requires_minimum_n_max():
    p = reference_params()
    with pytest.raises(ValueError):
        bloch_siegert_shift(p, derive_frame(p), n_max=2)


# --------------------------------------------------------- raman_quantities

def test_effective_rabi_three_four_five():
    assert effective_rabi(3.0, 4.0) == pytest.approx(5.0, rel=1e-15)
    assert effective_rabi(-3.0, 4.0) == pytest.approx(5.0, rel=1e-15)


def test_quantities_at_crossing():
    p0 = reference_params()
    f0 = derive_frame(p0)
    p = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    f = derive_frame(p)
    q = raman_quantities(p, f)
    assert abs(q.omega_rwa) <= 1e-10 * p.amp
    assert q.omega_eff == pytest.approx(abs(q.bs_shift), rel=1e-14)
    assert q.tail_certified(p.mod_freq)


def test_quantities_zero_amp():
    p = reference_params().replace(amp=0.0)
    q = raman_quantities(p, derive_frame(p))
    assert q.omega_rwa == q.bs_shift == q.omega_eff == 0.0
    assert q.tail_certified(p.mod_freq)


def test_truncation_stability():
    p = reference_params(amp_over_omega=2.93)
    f = derive_frame(p)
    q1 = raman_quantities(p, f, n_max=40)
    q2 = raman_quantities(p, f, n_max=80)
    # comparison floor: a few ulp of the shift (the deeper recurrence
    # start moves the last bits even though the added terms vanish)
    floor = 64.0 * np.finfo(float).eps * abs(q1.bs_shift)
    assert abs(q2.bs_shift - q1.bs_shift) <= max(q1.tail_bound, floor)
    assert abs(q2.omega_rwa - q1.omega_rwa) == 0.0


def test_under_truncation_fails_certificate():
    p = reference_params()
    f = derive_frame(p)
    q = raman_quantities(p, f, n_max=6)
    assert not q.tail_certified(p.mod_freq)


# ---------------------------------------------------- envelope_coefficients

def bloch_amplitudes(p, f, q):
    """Independent route to the coefficient block via the effective-
    Hamiltonian rotation written with complex carrier amplitudes."""
    u = q.omega_rwa / q.omega_eff
    v = q.bs_shift / q.omega_eff
    psi = p.phase
    alpha0 = f.mod_index * math.cos(psi)
    kappa = u * f.sin_theta * math.cos(2 * psi - alpha0) - v * f.cos_theta
    z_e = 0.5 * f.sin_theta * u * kappa * cmath.exp(2j * psi)
    z_b = 0.5 * f.sin_theta * (f.sin_theta * cmath.exp(1j * alpha0)
                               - u * kappa * cmath.exp(2j * psi))
    z_d = 0.5j * f.sin_theta * (u * f.cos_theta * cmath.exp(2j * psi)
                                + v * f.sin_theta * cmath.exp(1j * alpha0))
    return z_e, z_b, z_d


@pytest.mark.parametrize("amp_over_omega", [2.43, 2.681, 2.93])
@pytest.mark.parametrize("psi_deg", [0.0, 30.0, 90.0, 217.0])
def test_coefficients_match_bloch_route(amp_over_omega, psi_deg):
    p = reference_params(amp_over_omega, psi_deg)
    f = derive_frame(p)
    q = raman_quantities(p, f)
    ec = envelope_coefficients(p, f, q)
    z_e, z_b, z_d = bloch_amplitudes(p, f, q)
    assert ec.e0 == pytest.approx(z_e.real, abs=1e-13)
    assert ec.e_half == pytest.approx(-z_e.imag, abs=1e-13)
    assert ec.b0 == pytest.approx(z_b.real, abs=1e-13)
    assert ec.b_half == pytest.approx(-z_b.imag, abs=1e-13)
    assert ec.d0 == pytest.approx(z_d.real, abs=1e-13)
    assert ec.d_half == pytest.approx(-z_d.imag, abs=1e-13)


def test_coefficient_quadrature_identities():
    p = reference_params(2.52, psi_deg=63.0)
    f = derive_frame(p)
    ec = envelope_coefficients(p, f, raman_quantities(p, f))
    assert ec.c == pytest.approx(math.hypot(ec.c1, ec.c2), abs=1e-12)
    assert ec.e == pytest.approx(math.hypot(ec.e0, ec.e_half), abs=1e-12)
    assert ec.b == pytest.approx(math.hypot(ec.b0, ec.b_half), abs=1e-12)
    assert ec.d == pytest.approx(math.hypot(ec.d0, ec.d_half), abs=1e-12)
    for amp, first, phi in ((ec.c, ec.c1, ec.phi_c), (ec.e, ec.e0, ec.phi_e),
                            (ec.b, ec.b0, ec.phi_b), (ec.d, ec.d0, ec.phi_d)):
        if amp > 0:
            assert math.cos(phi) == pytest.approx(first / amp, abs=1e-12)


@pytest.mark.parametrize("psi_deg", [0.0, 45.0, 120.0])
def test_coefficients_degenerate_point(psi_deg):
    p0 = reference_params(psi_deg=psi_deg)
    f0 = derive_frame(p0)
    p = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    f = derive_frame(p)
    q = raman_quantities(p, f)
    ec = envelope_coefficients(p, f, q)
    alpha0 = f.mod_index * math.cos(p.phase)
    assert abs(ec.c1) < 1e-12
    assert abs(ec.c2) < 1e-12
    assert abs(ec.e0) < 1e-12
    assert abs(ec.e_half) < 1e-12
    assert ec.b0 == pytest.approx(0.5 * f.sin_theta ** 2 * math.cos(alpha0),
                                  abs=1e-12)
    expected_d0 = (-q.bs_shift / (2.0 * q.omega_eff)
                   * f.sin_theta ** 2 * math.sin(alpha0))
    assert ec.d0 == pytest.approx(expected_d0, abs=1e-12)


def test_coefficients_reject_zero_effective_rabi():
    p = reference_params().replace(amp=0.0)
    f = derive_frame(p)
    q = raman_quantities(p, f)
    with pytest.raises(ValueError):
        envelope_coefficients(p, f, q)


def test_zero_cos_theta_is_error_path():
    # delta_z = 0 kills both frequencies; there is no transition to expand
    p = DriveParams.from_amp_ratio(10.0, 0.0, 2.0, 5.0)
    f = derive_frame(p)
    q = raman_quantities(p, f)
    assert q.omega_eff == 0.0
    with pytest.raises(ValueError):
        envelope_coefficients(p, f, q)


# ------------------------------------------------------- population traces

def closed_form_pack(p):
    f = derive_frame(p)
    q = raman_quantities(p, f)
    ec = envelope_coefficients(p, f, q)
    return f, q, ec


def test_population_initial_condition():
    p = reference_params(2.78, psi_deg=17.0)
    f, q, ec = closed_form_pack(p)
    grid = TimeGrid(0.0, 5e-4, 3)
    trace = population_closed_form(p, f, q, ec, grid)
    assert trace.samples[0] == pytest.approx(1.0, abs=1e-9)


def test_population_initial_condition_random_sweep():
    rng = np.random.default_rng(20260809)
    grid = TimeGrid(0.0, 1e-4, 2)
    for _ in range(100):
        dx = rng.uniform(1.0, 20.0)
        dz = rng.uniform(0.3, 10.0)
        omega0 = math.hypot(dx, dz)
        p = DriveParams.from_mhz(dx, dz, amp_mhz=rng.uniform(0.1, 4.0) *
                                 omega0 / 2.0, omega_mhz=omega0 / 2.0,
                                 psi_deg=rng.uniform(0.0, 360.0))
        f, q, ec = closed_form_pack(p)
        trace = population_closed_form(p, f, q, ec, grid)
        assert trace.samples[0] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("psi_deg", [0.0, 45.0, 90.0, 135.0])
def test_closed_form_degenerates_at_crossing(psi_deg):
    p0 = reference_params(psi_deg=psi_deg)
    f0 = derive_frame(p0)
    p = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    f, q, ec = closed_form_pack(p)
    grid = TimeGrid.from_span(0.0, 4.0, 2e-3)
    full = population_closed_form(p, f, q, ec, grid)
    degen = population_degenerate(p, f, q.bs_shift, grid)
    assert np.max(np.abs(full.samples - degen.samples)) <= 1e-9


def test_psi_periodicity():
    p = reference_params(2.55, psi_deg=73.0)
    f, q, ec = closed_form_pack(p)
    grid = TimeGrid.from_span(0.0, 1.0, 1e-3)
    base = population_closed_form(p, f, q, ec, grid).samples
    p2 = p.replace(phase=p.phase + 2.0 * math.pi)
    f2, q2, ec2 = closed_form_pack(p2)
    shifted = population_closed_form(p2, f2, q2, ec2, grid).samples
    assert np.max(np.abs(base - shifted)) < 1e-9


def test_degenerate_trace_range():
    p0 = reference_params()
    f0 = derive_frame(p0)
    p = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    f = derive_frame(p)
    q = raman_quantities(p, f)
    # window of at least 10 modulation periods
    grid = TimeGrid.from_span(0.0, 12.0 * TWO_PI / p.mod_freq, 2e-4)
    trace = population_degenerate(p, f, q.bs_shift, grid)
    assert trace.samples.max() == pytest.approx(1.0, abs=1e-6)
    assert trace.samples.min() == pytest.approx(f.cos_theta ** 2, abs=1e-6)


def test_degenerate_instantaneous_frequency():
    # derivative of the cosine argument is bs + 2w + a*w*sin(wt + psi)
    p0 = reference_params(psi_deg=30.0)
    f0 = derive_frame(p0)
    p = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    f = derive_frame(p)
    q = raman_quantities(p, f)
    t = np.linspace(0.05, 1.95, 400)
    h = 1e-6
    a = f.mod_index

    def arg(tt):
        return (q.bs_shift * tt + 2.0 * p.mod_freq * tt
                - a * np.cos(p.mod_freq * tt + p.phase)
                + a * math.cos(p.phase))

    inst = (arg(t + h) - arg(t - h)) / (2.0 * h)
    expected = (q.bs_shift + 2.0 * p.mod_freq
                + a * p.mod_freq * np.sin(p.mod_freq * t + p.phase))
    assert np.max(np.abs(inst - expected)) < 1e-4
    # averaged over whole modulation periods the sin term drops out and
    # the mean sits at 2*omega + bs
    period = TWO_PI / p.mod_freq
    t_full = 0.05 + np.arange(8000) / 8000.0 * 10.0 * period
    inst_full = (arg(t_full + h) - arg(t_full - h)) / (2.0 * h)
    assert np.mean(inst_full) == pytest.approx(2.0 * p.mod_freq + q.bs_shift,
                                               rel=1e-6)


def test_population_rejects_coarse_grid():
    p = reference_params()
    f, q, ec = closed_form_pack(p)
    with pytest.raises(ValueError):
        population_closed_form(p, f, q, ec, TimeGrid(0.0, 0.05, 100))


# --------------------------------------------------------- averaging oracle

@pytest.mark.parametrize("a", [0.5, 2.0, A_STAR])
@pytest.mark.parametrize("psi_deg", [0.0, 55.0])
def test_averaging_oracle_matches_closed_forms(a, psi_deg):
    p = params_at_index(a, psi=math.radians(psi_deg))
    f = derive_frame(p)
    w2_num, bs_num = averaging_oracle(p, f)
    w2 = rabi_rwa(p, f)
    bs, _ = bloch_siegert_shift(p, f)
    if abs(w2) > 1e-12:
        assert w2_num == pytest.approx(w2, rel=1e-10)
    else:
        assert abs(w2_num) <= 1e-10 * p.amp
    assert bs_num == pytest.approx(bs, rel=0.01)


def test_averaging_oracle_zero_amp():
    p = reference_params().replace(amp=0.0)
    w2_num, bs_num = averaging_oracle(p, derive_frame(p))
    assert w2_num == 0.0
    assert bs_num == 0.0


# ------------------------------------------------------- minimum structure

def test_effective_rabi_minimum_near_crossing():
    """omega_eff(A) dips to |bs_shift| at the J2 zero.

    The exact minimizer sits slightly above the crossing because the
    shift itself drifts with amplitude; analytically the offset is
    bs'*bs/(rabi'^2) in A, about +0.019 omega here, so the scan asserts
    the minimizer within [crossing - 0.005, crossing + 0.025] and the
    minimum value within 1 percent of |bs_shift(crossing)|.
    """
    p0 = reference_params()
    f0 = derive_frame(p0)
    ratios = np.arange(2.4, 3.0 + 1e-9, 0.005)
    effs = []
    for r in ratios:
        p = p0.replace(amp=r * p0.mod_freq)
        f = derive_frame(p)
        effs.append(raman_quantities(p, f).omega_eff)
    effs = np.array(effs)
    i = int(np.argmin(effs))
    crossing = 2.6808735472606733
    assert crossing - 0.005 <= ratios[i] <= crossing + 0.025
    p_star = p0.replace(amp=zero_crossing_amplitude(f0, p0.mod_freq, k=1))
    q_star = raman_quantities(p_star, derive_frame(p_star))
    assert effs[i] == pytest.approx(abs(q_star.bs_shift), rel=0.01)
    assert q_star.omega_eff == pytest.approx(abs(q_star.bs_shift), rel=1e-14)
