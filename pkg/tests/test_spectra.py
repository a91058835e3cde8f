"""Long-time spectra: normalization, conditional decomposition, presets."""

import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy.integrate import quad

from ionospec import (
    GROUND,
    NormalizedParams,
    build_effective,
    figure_preset,
    find_peaks,
    from_normalized,
    pole_integral,
    quadrature_norm,
    residue_norm,
    spectrum_grid,
    time_resolved_intensity,
)
from ionospec.errors import DomainError, NoLongTimeLimitError, UnknownPresetError
from ionospec.spectra import PRESET_NAMES

CASES = (
    NormalizedParams(q_a=100.0, gamma_a=1.0, Omega=2.0),
    NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=0.5),
    NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=2.0, E_L=0.8),
)


def test_residue_norm_matches_quadrature():
    for p in CASES:
        sys = build_effective(from_normalized(p))
        r = residue_norm(sys, GROUND)
        q = quadrature_norm(sys, GROUND)
        assert abs(r - q) <= 1e-8 * r


def test_norm_equals_ionized_probability():
    # everything ionizes from a unit-norm bound start, so the raw
    # full-line integral of I^lt must be 1
    for p in CASES:
        dec = spectrum_grid(p, cross_check=True)
        assert abs(dec.norm - 1.0) <= 1e-9


def test_pole_integral_matches_numeric_quadrature(rng):
    poles = np.array(
        [complex(rng.normal(), -abs(rng.normal()) - 0.05) for _ in range(4)]
    )
    weights = (rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))) / 2.0
    exact = pole_integral(poles, weights)

    def density(e):
        amp = (weights / (e - poles)[:, None]).sum(axis=0)
        return float(np.sum(np.abs(amp) ** 2))

    numeric = sum(
        quad(density, a, b, limit=400)[0]
        for a, b in ((-np.inf, -30.0), (-30.0, 30.0), (30.0, np.inf))
    )
    assert abs(exact - numeric) <= 1e-6 * exact


def test_decomposition_identities_everywhere():
    for p in CASES:
        dec = spectrum_grid(p, cross_check=False)
        scale = dec.I_lt.max()
        npt.assert_allclose(dec.I_lt, dec.I_st0 + dec.I_st1, atol=1e-14 * scale)
        assert (dec.I_st0 - dec.I_osc).min() >= -1e-12 * scale
        assert (dec.I_st1 - dec.I_osc).min() >= -1e-12 * scale
        assert dec.I_osc.min() >= 0.0
        # the conditional phases stay exactly half a beat apart
        assert np.abs(np.abs(dec.phi0 - dec.phi1) - math.pi).max() <= 1e-10


def test_resonant_conditional_spectra_coincide():
    dec = spectrum_grid(NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1.0))
    scale = dec.I_lt.max()
    assert np.abs(dec.I_st0 - dec.I_st1).max() <= 1e-12 * scale


def test_time_resolved_sum_is_stationary():
    dec = spectrum_grid(NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=2.0, E_L=0.8))
    idx = int(np.argmax(dec.I_osc))
    t = np.linspace(0.0, 10.0, 301)
    i0, i1 = time_resolved_intensity(dec, idx, t)
    npt.assert_allclose(i0 + i1, dec.I_lt[idx], rtol=1e-12)
    assert i0.min() >= -1e-12 * dec.I_lt.max()
    with pytest.raises(DomainError):
        time_resolved_intensity(dec, idx, -0.5)


def test_default_grid_covers_ten_widths():
    p = NormalizedParams(q_a=100.0, gamma_a=0.5, Omega=2.0, E_a=2.0, E_L=2.0)
    dec = spectrum_grid(p)
    assert dec.grid.size == 2001
    assert abs(dec.grid[0] - (2.0 - 5.0)) <= 1e-12
    assert abs(dec.grid[-1] - (2.0 + 5.0)) <= 1e-12
    assert dec.window_mass > 0.99 and not dec.window_warning


def test_window_warning_on_truncated_grid():
    p = NormalizedParams(q_a=100.0, gamma_a=1.0, Omega=2.0)
    dec = spectrum_grid(p, e_min=0.9, e_max=1.1, n_points=501)
    assert dec.window_warning and dec.window_mass < 0.99


def test_no_long_time_limit_without_pump():
    # detuned so the dressed doublet survives alpha_L = 0; the undriven
    # ground state then never ionizes
    with pytest.raises(NoLongTimeLimitError):
        spectrum_grid(NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=0.0, E_L=0.8))


def test_figure_preset_catalog():
    assert set(PRESET_NAMES) == {"fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5"}
    weak = figure_preset("fig5")
    assert weak.model == "neighbor"
    assert weak.params.gamma_a == 1e-4 and weak.params.q_a == 100.0
    assert weak.omegas == (5e-5, 1e-4, 5e-4)
    assert weak.params.Omega == 5e-4  # default picks the strongest pump
    det = figure_preset("fig4")
    assert det.params.E_L == 0.8 and det.omegas == (2.0,)
    assert figure_preset("fig2a").model == "fano"
    assert figure_preset("fig3a", omega=0.5).params.Omega == 0.5
    with pytest.raises(UnknownPresetError):
        figure_preset("fig9z")


def test_find_peaks_on_synthetic_doublet():
    x = np.linspace(-6.0, 6.0, 4001)
    y = 1.0 / ((x - 2.0) ** 2 + 0.09) + 1.0 / ((x + 2.0) ** 2 + 0.09)
    pos, hts = find_peaks(x, y)
    assert len(pos) == 2
    npt.assert_allclose(pos, [-2.0, 2.0], atol=1e-3)
    assert hts.min() > 5.0
    with pytest.raises(DomainError):
        find_peaks(x[:5], y[:4])
