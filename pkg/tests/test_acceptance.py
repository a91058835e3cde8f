"""End-to-end acceptance gate.

Each test verifies one numbered behavior of the package against frozen
reference values and tolerances: referee agreement, exact normalization,
probability conservation, weak-pump zero frequencies, the vanishing-dip
continuation, decomposition identities, strong-pump splitting, the
reference-channel zero, sweep topologies, the detuned zero pair with its
conditional time shift, rate-rescaling invariance, and the closed-form
weight matrices.  Run with -s to see one PASS line per criterion.
"""

import math
import time
from dataclasses import replace

import numpy as np
import numpy.testing as npt
import pytest

from ionospec import (
    GROUND,
    NormalizedParams,
    PhysicalParams,
    bound_amplitudes,
    build_effective,
    continuum_amplitudes,
    discretize,
    evolve,
    fano_from_normalized,
    fano_like_zero,
    fano_spectrum,
    fano_zero,
    figure_preset,
    find_dynamical_zeros,
    find_peaks,
    from_normalized,
    longtime_amplitudes,
    poly_roots,
    spectrum_grid,
    sweep_preset,
    sweep_zero_traces,
    time_resolved_intensity,
    total_probability,
    weak_resonant_quintic,
)
from ionospec.errors import ExceptionalPointError
from ionospec.spectra import PRESET_NAMES

RESONANT = NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1.0, E_a=1.0, E_L=1.0)

# weak-pump dynamical-zero frequencies (E_D - E_a)/gamma_a
SMALL_Q_SET = np.array([-0.1, 0.0, 0.10208423834364044, 4.897915761656359])
UNIT_Q_SET = np.array([-1.0, 0.0])

# detuned-pump zeros at Omega = 2, q_a = gamma_a = 1, E_L = 0.8
DETUNED_J0 = np.array([-2.074145, -0.750316])
DETUNED_J1 = np.array([-2.168524, -0.609279, 0.905050, 1.139419])


def _report(num, text):
    print(f"CRITERION {num:02d} PASS: {text}")


def axis(values, p):
    return (np.asarray(values) - p.E_a) / p.gamma_a


def raw_intensity(params, energies):
    sys = build_effective(from_normalized(params))
    lta = longtime_amplitudes(sys, GROUND, np.atleast_1d(energies))
    return (np.abs(lta.d_xi1) ** 2 + np.abs(lta.d_xi2) ** 2).sum(axis=1)


def test_criterion_01_time_domain_referee_agreement():
    """Discretized-continuum integration reproduces the closed forms."""
    start = time.time()
    phys = from_normalized(RESONANT)
    esys = build_effective(phys)
    dsys = discretize(phys, window=40.0, n_levels=2001)
    ts = np.linspace(0.0, 8.0, 17)
    traj = evolve(dsys, 8.0, t_eval=ts)
    mask = np.abs(dsys.energies - phys.E_L) <= 20.0
    egrid = dsys.energies[mask]
    worst_c2 = 0.0
    worst_d2 = 0.0
    for i, t in enumerate(ts):
        c_num = traj.bound()[i]
        c_ana = bound_amplitudes(esys, GROUND, float(t))
        worst_c2 = max(
            worst_c2, float(np.abs(np.abs(c_num) ** 2 - np.abs(c_ana) ** 2).max())
        )
        d_num = traj.continuum()[i][mask]
        d_ana = continuum_amplitudes(esys, GROUND, egrid, float(t))
        err = (np.abs(d_num) ** 2 - np.abs(d_ana) ** 2).ravel()
        worst_d2 = max(worst_d2, float(np.sqrt(np.mean(err**2))))
    elapsed = time.time() - start
    assert worst_c2 <= 2e-3
    assert worst_d2 <= 2e-3
    assert elapsed <= 60.0
    _report(1, f"bound density err {worst_c2:.2e}, continuum rms {worst_d2:.2e}, "
               f"{elapsed:.1f}s")


def test_criterion_02_unit_spectral_mass_for_all_presets():
    """The raw long-time spectrum integrates to exactly one ionized unit."""
    worst = 0.0
    for name in PRESET_NAMES:
        base = figure_preset(name)
        for om in base.omegas:
            pre = figure_preset(name, omega=om)
            if pre.model == "fano":
                fp = fano_from_normalized(pre.params)
                e = np.linspace(pre.e_min, pre.e_max, pre.n_points)
                norm = fano_spectrum(fp, e=e).norm
            else:
                norm = spectrum_grid(
                    pre.params, pre.e_min, pre.e_max, pre.n_points
                ).norm
            worst = max(worst, abs(norm - 1.0))
    assert worst <= 1e-6
    _report(2, f"16 preset spectra, max |integral - 1| = {worst:.2e}")


def test_criterion_03_probability_conservation():
    """Bound plus continuum probability stays at one while ionizing."""
    phys = from_normalized(RESONANT)
    sys = build_effective(phys)
    core = np.linspace(phys.E_a - 30.0, phys.E_a + 30.0, 3001)
    lo = phys.E_a - np.geomspace(30.0, 8000.0, 500)[::-1][:-1]
    hi = phys.E_a + np.geomspace(30.0, 8000.0, 500)[1:]
    grid = np.concatenate([lo, core, hi])
    worst = 0.0
    for t in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0):
        worst = max(worst, abs(total_probability(sys, GROUND, t, grid) - 1.0))
    assert worst <= 1e-4
    _report(3, f"max |P(t) - 1| = {worst:.2e} over six times")


def test_criterion_04_weak_pump_zero_frequencies():
    """Scanned dynamical zeros land on the closed-form weak-pump sets."""
    p_small = NormalizedParams(q_a=0.1, gamma_a=1.0, Omega=1e-3, E_a=1.0, E_L=1.0)
    found = np.sort(axis(find_dynamical_zeros(p_small, j=0), p_small))
    assert len(found) == 4
    err_small = np.abs(found - SMALL_Q_SET).max()
    assert err_small <= 5e-3

    p_unit = NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1e-3, E_a=1.0, E_L=1.0)
    found_unit = np.sort(axis(find_dynamical_zeros(p_unit, j=0), p_unit))
    assert len(found_unit) == 2
    err_unit = np.abs(found_unit - UNIT_Q_SET).max()
    assert err_unit <= 5e-3
    _report(4, f"q=0.1 max dev {err_small:.1e}, q=1 set exactly "
               f"{{0, -1}} within {err_unit:.1e}")


def test_criterion_05_fano_like_dip_and_its_complex_continuation():
    """Resonant weak pump dips at E_a - q_a gamma_a; detuning lifts the dip
    by moving the zero off the real axis."""
    p = NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1e-3, E_a=1.0, E_L=1.0)
    dip_e = p.E_a - p.q_a * p.gamma_a
    peak = raw_intensity(p, np.linspace(p.E_a - 10.0, p.E_a + 10.0, 4001)).max()
    at_dip = raw_intensity(p, dip_e)[0]
    ratio = at_dip / peak
    assert ratio < 1e-6
    nb = raw_intensity(p, [dip_e - 0.1, dip_e + 0.1])
    contrast_res = at_dip / math.sqrt(nb[0] * nb[1])
    assert contrast_res < 1e-3  # a genuine local dip, not wing floor

    contrasts = []
    for el in (0.8, 1.1):
        pd = NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1e-3, E_a=1.0, E_L=el)
        z = fano_like_zero(pd)
        assert isinstance(z, complex)
        assert abs(z.imag - (pd.E_a - pd.E_L) / (pd.q_a * pd.gamma_a)) <= 1e-12
        assert z.imag != 0.0
        er = pd.E_a + z.real * pd.gamma_a
        center = raw_intensity(pd, er)[0]
        nbd = raw_intensity(pd, [er - 0.1, er + 0.1])
        c = center / math.sqrt(nbd[0] * nbd[1])
        contrasts.append(c)
        assert 1.0 / 3.0 <= c <= 3.0  # smooth wing, no dip survives detuning
    _report(5, f"resonant dip {ratio:.1e} of peak (contrast {contrast_res:.1e}); "
               f"detuned contrasts {contrasts[0]:.2f}, {contrasts[1]:.2f}")


def test_criterion_06_decomposition_identities():
    """Stationary/oscillating split obeys its exact constraints everywhere."""
    cases = (
        figure_preset("fig2b", omega=2.0),
        figure_preset("fig3b", omega=1.0),
        figure_preset("fig4"),
    )
    for pre in cases:
        dec = spectrum_grid(pre.params, pre.e_min, pre.e_max, pre.n_points)
        scale = dec.I_lt.max()
        assert np.abs(np.abs(dec.phi0 - dec.phi1) - math.pi).max() <= 1e-10
        osc0 = 2.0 * np.abs(dec.lta.d_xi1[:, 0]) * np.abs(dec.lta.d_xi2[:, 0])
        osc1 = 2.0 * np.abs(dec.lta.d_xi1[:, 1]) * np.abs(dec.lta.d_xi2[:, 1])
        assert np.abs(osc0 - osc1).max() <= 1e-12 * scale * dec.norm
        assert (dec.I_st0 - dec.I_osc).min() >= -1e-12 * scale
        assert (dec.I_st1 - dec.I_osc).min() >= -1e-12 * scale
        if pre.params.E_L == pre.params.E_a:
            assert np.abs(dec.I_st0 - dec.I_st1).max() <= 1e-12 * scale
    _report(6, "phase split pi to 1e-10, shared oscillation amplitude to "
               "1e-12, resonant conditional symmetry to 1e-12")


def test_criterion_07_strong_pump_peak_splitting():
    """Side peaks split by twice the coupling the reference channel shows."""
    pre_n = figure_preset("fig2b", omega=4.0)
    dec = spectrum_grid(pre_n.params, pre_n.e_min, pre_n.e_max, pre_n.n_points)
    pos_n, _ = find_peaks(dec.grid, dec.I_lt)
    assert len(pos_n) == 3
    phys = from_normalized(pre_n.params)
    target_n = 4.0 * abs(phys.mu_a * phys.alpha_L)
    sep_n = pos_n[-1] - pos_n[0]
    assert abs(sep_n - target_n) <= 0.3 * pre_n.params.gamma_a

    pre_f = figure_preset("fig2a", omega=4.0)
    fp = fano_from_normalized(pre_f.params)
    e = np.linspace(pre_f.e_min, pre_f.e_max, pre_f.n_points)
    spec = fano_spectrum(fp, e=e)
    pos_f, _ = find_peaks(spec.energies, spec.intensity)
    assert len(pos_f) == 2
    target_f = 2.0 * abs(fp.mu_b * fp.alpha_L)
    sep_f = pos_f[-1] - pos_f[0]
    assert abs(sep_f - target_f) <= 0.3 * pre_f.params.gamma_b
    assert abs(sep_n / sep_f - 2.0) <= 0.1
    _report(7, f"3 vs 2 peaks, separations {sep_n:.3f}/{sep_f:.3f} "
               f"(asymptotes {target_n:.3f}/{target_f:.3f}), ratio "
               f"{sep_n / sep_f:.3f}")


def test_criterion_08_reference_channel_exact_zero():
    """The reference-channel spectrum vanishes at E_b - gamma_b q_b for
    every pump strength."""
    worst = 0.0
    for om in (0.5, 1.0, 2.0):
        p = NormalizedParams(q_b=1.0, gamma_b=1.0, Omega=om, E_b=1.0, E_L=1.0)
        fp = fano_from_normalized(p)
        z0 = fano_zero(fp)
        assert abs(z0 - (p.E_b - p.gamma_b * p.q_b)) <= 1e-12
        e = np.sort(np.append(np.linspace(fp.E_b - 10.0, fp.E_b + 10.0, 2001), z0))
        spec = fano_spectrum(fp, e=e)
        depth = spec.intensity[np.argmin(np.abs(spec.energies - z0))]
        worst = max(worst, depth / spec.intensity.max())
    assert worst <= 1e-10
    _report(8, f"zero depth at most {worst:.1e} of peak for three pumps")


def test_criterion_09_pump_sweep_topologies():
    """Zero trajectories versus pump strength: distinct topologies, closed
    weak-pump intercepts, sign symmetry, channel-split branches."""
    start = time.time()
    traces = {}
    for name in ("fig6a", "fig6b", "fig6c", "fig7a", "fig7b"):
        spec = sweep_preset(name)
        for j in spec.js:
            traces[(name, j)] = sweep_zero_traces(spec.params, spec.omegas, j=j)

    ga = traces[("fig6a", 0)]
    p6 = sweep_preset("fig6a").params
    assert ga.branch_count(0.02) == 4 and ga.branch_count(2.0) == 0
    ann = [ev for ev in ga.events if ev.kind == "annihilation"]
    assert len(ann) == 2 and len(ga.events) == 2
    npt.assert_allclose(
        sorted(ev.omega for ev in ann), [0.39161, 0.98998], atol=5e-3
    )
    starts = np.sort(axis([b.E_D[0] for b in ga.branches if b.omega[0] <= 0.021], p6))
    npt.assert_allclose(starts[:2], SMALL_Q_SET[:2], atol=5e-3)
    npt.assert_allclose(starts[2:], SMALL_Q_SET[2:], atol=0.05)

    gb = traces[("fig6b", 0)]
    pb = sweep_preset("fig6b").params
    assert gb.branch_count(0.02) == 2 and gb.branch_count(2.0) == 2
    assert gb.events == []
    ends_b = np.sort(axis([b.E_D[-1] for b in gb.branches], pb))
    npt.assert_allclose(ends_b, [-1.9051, -0.3812], atol=2e-3)
    starts_b = np.sort(axis([b.E_D[0] for b in gb.branches], pb))
    npt.assert_allclose(starts_b, [-1.0, 0.0], atol=5e-3)
    assert ends_b[1] < starts_b[1]  # near-zero branch drifts down

    gc = traces[("fig6c", 0)]
    pc = sweep_preset("fig6c").params
    assert gc.branch_count(0.02) == 2 and gc.branch_count(2.0) == 2
    assert gc.events == []
    ends_c = np.sort(axis([b.E_D[-1] for b in gc.branches], pc))
    npt.assert_allclose(ends_c, [-3.9025, 0.0851], atol=2e-3)
    starts_c = np.sort(axis([b.E_D[0] for b in gc.branches], pc))
    npt.assert_allclose(starts_c, [-3.0, 0.0], atol=5e-3)
    assert ends_c[1] > starts_c[1]  # opposite drift: third topology

    for params, om in ((p6, 0.6), (sweep_preset("fig7a").params, 1.4)):
        plus = np.sort(find_dynamical_zeros(replace(params, Omega=om), j=0))
        minus = np.sort(find_dynamical_zeros(replace(params, Omega=-om), j=0))
        npt.assert_allclose(plus, minus, atol=1e-9)

    h0 = traces[("fig7a", 0)]
    p7 = sweep_preset("fig7a").params
    assert h0.branch_count(0.02) == 4 and h0.branch_count(2.0) == 2
    ann7 = [ev for ev in h0.events if ev.kind == "annihilation"]
    assert len(ann7) == 1 and len(h0.events) == 1
    assert abs(ann7[0].omega - 0.24075) <= 5e-3
    ends70 = np.sort(axis([b.E_D[-1] for b in h0.branches
                           if b.omega[-1] >= 1.999], p7))
    npt.assert_allclose(ends70, DETUNED_J0, atol=2e-3)

    h1 = traces[("fig7a", 1)]
    assert h1.branch_count(0.02) == 2 and h1.branch_count(2.0) == 4
    cre7 = [ev for ev in h1.events if ev.kind == "creation"]
    assert len(cre7) == 1 and len(h1.events) == 1
    assert abs(cre7[0].omega - 1.32198) <= 5e-3
    ends71 = np.sort(axis([b.E_D[-1] for b in h1.branches
                           if b.omega[-1] >= 1.999], p7))
    npt.assert_allclose(ends71, DETUNED_J1, atol=2e-3)
    split = min(abs(a - b) for a in ends70 for b in ends71)
    assert split > 0.05  # the two conditional spectra keep distinct zeros

    k0 = traces[("fig7b", 0)]
    pk = sweep_preset("fig7b").params
    assert k0.branch_count(0.02) == 4 and k0.branch_count(2.0) == 6
    crek = [ev for ev in k0.events if ev.kind == "creation"]
    assert len(crek) == 1 and len(k0.events) == 1
    assert abs(crek[0].omega - 1.90832) <= 5e-3

    k1 = traces[("fig7b", 1)]
    assert k1.branch_count(0.02) == 2 and k1.branch_count(2.0) == 2
    assert k1.events == []
    endsk1 = np.sort(axis([b.E_D[-1] for b in k1.branches], pk))
    npt.assert_allclose(endsk1, [-1.7879, -0.2656], atol=2e-3)
    endsk0 = np.sort(axis([b.E_D[-1] for b in k0.branches
                           if b.omega[-1] >= 1.999], pk))
    split_k = min(abs(a - b) for a in endsk0 for b in endsk1)
    assert split_k > 1e-3

    elapsed = time.time() - start
    assert elapsed <= 300.0
    _report(9, f"five sweeps, three resonant topologies, intercepts and "
               f"events as frozen, {elapsed:.1f}s")


def test_criterion_10_detuned_zero_pair_and_time_shift():
    """Both conditional spectra of the detuned preset carry a zero in
    [-0.9, -0.3], and their oscillations are half a beat apart."""
    pre = figure_preset("fig4")
    z0 = np.sort(axis(find_dynamical_zeros(pre.params, j=0), pre.params))
    z1 = np.sort(axis(find_dynamical_zeros(pre.params, j=1), pre.params))
    npt.assert_allclose(z0, DETUNED_J0, atol=2e-3)
    npt.assert_allclose(z1, DETUNED_J1, atol=2e-3)
    in0 = z0[(z0 >= -0.9) & (z0 <= -0.3)]
    in1 = z1[(z1 >= -0.9) & (z1 <= -0.3)]
    assert len(in0) == 1 and len(in1) == 1
    assert abs(in0[0] - in1[0]) > 0.05

    dec = spectrum_grid(pre.params, pre.e_min, pre.e_max, pre.n_points)
    idx = int(np.argmax(dec.I_osc))
    period = 2.0 * math.pi / dec.delta_xi
    t = np.linspace(0.0, period, 20001, endpoint=False)
    i0, i1 = time_resolved_intensity(dec, idx, t)
    shift = abs(t[np.argmax(i0)] - t[np.argmax(i1)])
    shift = min(shift, period - shift)
    assert abs(shift - 0.5 * period) <= 0.01 * 0.5 * period
    _report(10, f"zeros at {in0[0]:.4f}/{in1[0]:.4f}, conditional maxima "
                f"{shift:.4f} apart vs half period {0.5 * period:.4f}")


def test_criterion_11_rate_rescaling_overlay():
    """Spectra at rates scaled by s overlay after the gauge rescaling
    E -> E_a + gamma_a x, I -> gamma_a I, Omega -> s Omega."""
    scale = 1e-4
    x = np.linspace(-10.0, 10.0, 2001)
    worst = 0.0
    for om_small in figure_preset("fig5").omegas:
        pre = figure_preset("fig5", omega=om_small)
        dec_s = spectrum_grid(pre.params, pre.e_min, pre.e_max, pre.n_points)
        om_ref = om_small / scale
        if abs(om_ref - 1.0) < 1e-12:
            ref_pre = figure_preset("fig2b", omega=1.0)  # preset-to-preset pair
            ref_params = ref_pre.params
        else:
            ref_params = NormalizedParams(q_a=100.0, gamma_a=1.0, Omega=om_ref)
        dec_r = spectrum_grid(ref_params, 1.0 + x[0], 1.0 + x[-1], 2001)
        overlay = pre.params.gamma_a * dec_s.I_lt  # density in x = (E - E_a)/gamma_a
        rel = np.abs(overlay - dec_r.I_lt) / dec_r.I_lt.max()
        worst = max(worst, float(rel.max()))
    assert worst <= 1e-3
    _report(11, f"three pump pairs overlay to {worst:.1e} relative")


def test_criterion_12_weight_matrix_closed_form(rng):
    """Closed-form pole-weight matrices equal the defining projector
    product over random gauges; the degenerate weak-pump factorization
    collapses as required."""
    checked = 0
    rejected = 0
    worst = 0.0
    while checked < 1000:
        def c():
            return complex(rng.normal(), rng.normal()) / math.sqrt(2.0)

        phys = PhysicalParams(
            E_a=float(rng.normal()), E_L=float(rng.normal()),
            mu=c(), mu_a=c(), J=c(), alpha_L=c(),
        )
        try:
            sys = build_effective(phys)
        except ExceptionalPointError:
            rejected += 1
            assert rejected < 200
            continue
        if sys.D1 is None:
            continue
        bdag = sys.coupling_block()
        scale = max(abs(sys.D1).max(), abs(sys.D2).max())
        for kmat, dk in ((sys.K1, sys.D1), (sys.K2, sys.D2)):
            product = (kmat @ bdag @ sys.P) * sys.Pinv[:, 0][None, :]
            worst = max(worst, float(abs(dk - product).max() / scale))
        checked += 1
    assert worst <= 1e-10

    for q in (0.25, 0.8, 1.6):
        quintic = weak_resonant_quintic(1.0 / q)
        cubic = [1.0, q - 1.0 / (2.0 * q), 0.0, q / 2.0]
        got = np.sort_complex(poly_roots(quintic))
        want = np.sort_complex(np.append(poly_roots(cubic), 0.0))
        npt.assert_allclose(got, want, atol=1e-9)
    _report(12, f"1000 random gauges, worst relative deviation {worst:.1e}; "
                f"degenerate factorization verified for three couplings")
