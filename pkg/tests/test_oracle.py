"""Discretized-continuum referee: guards, rates, frequencies, comparison."""

import numpy as np
import pytest

from ionospec import (
    GROUND,
    NormalizedParams,
    build_effective,
    compare,
    discretize,
    evolve,
    from_normalized,
    golden_rule_rate,
    rabi_frequency,
)
from ionospec.errors import DomainError, RevivalTimeError, WindowTooNarrowError

RESONANT = NormalizedParams(q_a=1.0, gamma_a=1.0, Omega=1.0, E_a=1.0, E_L=1.0)


@pytest.fixture(scope="module")
def physical():
    return from_normalized(RESONANT)


@pytest.fixture(scope="module")
def small_ladder(physical):
    return discretize(physical, window=20.0, n_levels=501)


def test_discretize_validation(physical):
    with pytest.raises(DomainError):
        discretize(physical, window=40.0, n_levels=500)
    with pytest.raises(DomainError):
        discretize(physical, window=40.0, n_levels=1)
    with pytest.raises(WindowTooNarrowError) as exc:
        discretize(physical, window=12.0, n_levels=501)
    assert exc.value.suggested_window > 12.0


def test_ladder_layout(small_ladder):
    assert small_ladder.n_levels == 501
    assert small_ladder.dE == pytest.approx(40.0 / 500.0)
    assert small_ladder.energies[0] == pytest.approx(1.0 - 20.0)
    assert small_ladder.energies[-1] == pytest.approx(1.0 + 20.0)


def test_revival_guard(physical):
    coarse = discretize(physical, window=20.0, n_levels=51)
    with pytest.raises(RevivalTimeError):
        evolve(coarse, 8.0)


def test_norm_conservation(small_ladder):
    traj = evolve(small_ladder, 6.0, t_eval=np.linspace(0.0, 6.0, 13))
    assert np.abs(traj.norms() - 1.0).max() <= 1e-8
    assert traj.bound().shape == (13, 2)
    assert traj.continuum().shape == (13, 501, 2)


def test_golden_rule_rate_converges(small_ladder, physical):
    rate = golden_rule_rate(small_ladder)
    assert abs(rate / physical.gamma_direct - 1.0) <= 1e-3


def test_rabi_frequency_matches_dressed_splitting(small_ladder, physical):
    esys = build_effective(physical)
    traj = evolve(small_ladder, 38.0, t_eval=np.linspace(0.0, 38.0, 512))
    freq = rabi_frequency(traj, channel=0)
    assert abs(freq / esys.delta_xi - 1.0) <= 0.03
    with pytest.raises(DomainError):
        rabi_frequency(
            evolve(small_ladder, 1.0, t_eval=[0.0, 0.3, 1.0]), channel=0
        )


def test_compare_small_ladder(small_ladder, physical):
    esys = build_effective(physical)
    rep = compare(small_ladder, esys, t=6.0)
    assert rep.max_err_c <= 8e-3
    assert rep.rms_err_d <= 2e-3
    assert rep.rms_err_spectrum <= 1.5e-2
    assert rep.spectrum_time_clamped
    assert rep.n_levels == 501
    head = list(rep.as_dict())[:5]
    assert head == ["max_err_c", "rms_err_d", "rms_err_spectrum", "t_final", "n_levels"]


def test_compare_rejects_mismatched_params(small_ladder):
    other = build_effective(
        from_normalized(NormalizedParams(q_a=2.0, gamma_a=1.0, Omega=1.0))
    )
    with pytest.raises(DomainError):
        compare(small_ladder, other, t=2.0)
