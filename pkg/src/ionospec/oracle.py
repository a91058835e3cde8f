"""Brute-force referee: discretized-continuum integration of the full model.

Replaces the flat continuum by n equally spaced levels over a window of
half-width W around the pump frequency, with the standard sqrt(dE) coupling
rescaling, and integrates the resulting finite Schrodinger system with a
tolerance-controlled adaptive scheme.  Nothing here reuses the closed forms
of :mod:`ionospec.core`; agreement between the two routes is the primary
correctness evidence for the package.

The discretized continuum is periodic: amplitudes rephase at the revival
time 2*pi/dE, so comparisons are only meaningful well before it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import EffectiveSystem, PhysicalParams, rabi_split, _as_c0
from .errors import (
    DomainError,
    NormDriftError,
    RevivalTimeError,
    WindowTooNarrowError,
)

__all__ = [
    "DiscretizedSystem",
    "DiscretizedFano",
    "OracleTrajectory",
    "ComparisonReport",
    "discretize",
    "discretize_fano",
    "evolve",
    "compare",
    "golden_rule_rate",
    "rabi_frequency",
]

#: fraction of the revival time past which evolve() refuses to integrate
REVIVAL_GUARD = 0.98


@dataclass(frozen=True, eq=False)
class DiscretizedSystem:
    """Neighbor model on a discrete level ladder.

    State layout: (c00, c10, d0[0..n), d1[0..n)), dimension 2 + 2n.
    Per-level couplings are mu*alpha_L*sqrt(dE) and J*sqrt(dE).
    """

    params: PhysicalParams
    n_levels: int
    window: float
    dE: float
    energies: np.ndarray

    @property
    def dim(self) -> int:
        return 2 + 2 * self.n_levels

    @property
    def revival_time(self) -> float:
        return 2.0 * math.pi / self.dE

    def initial_state(self, c0) -> np.ndarray:
        y0 = np.zeros(self.dim, dtype=complex)
        y0[:2] = _as_c0(c0)
        return y0

    def _blocks(self):
        p = self.params
        a = np.array(
            [
                [0.0, np.conj(p.mu_a * p.alpha_L)],
                [p.mu_a * p.alpha_L, p.delta_E_a],
            ],
            dtype=complex,
        )
        b = np.array(
            [
                [np.conj(p.mu * p.alpha_L), 0.0],
                [np.conj(p.J), np.conj(p.mu * p.alpha_L)],
            ],
            dtype=complex,
        )
        return a, b

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        a, b = self._blocks()
        sq = math.sqrt(self.dE)
        n = self.n_levels
        c = y[:2]
        d = np.stack([y[2 : 2 + n], y[2 + n :]], axis=1)  # (n, 2) channels
        dc = -1j * (a @ c + sq * (b @ d.sum(axis=0)))
        detuning = (self.energies - self.params.E_L)[:, None]
        dd = -1j * (sq * (b.conj().T @ c)[None, :] + detuning * d + d @ a.T)
        return np.concatenate([dc, dd[:, 0], dd[:, 1]])

    def to_dense(self) -> np.ndarray:
        """Full Hamiltonian matrix; intended for small n sanity checks."""
        a, b = self._blocks()
        sq = math.sqrt(self.dE)
        n = self.n_levels
        h = np.zeros((self.dim, self.dim), dtype=complex)
        h[:2, :2] = a
        for m in range(n):
            idx = np.array([2 + m, 2 + n + m])
            h[np.ix_([0, 1], idx)] = sq * b
            h[np.ix_(idx, [0, 1])] = sq * b.conj().T
            h[np.ix_(idx, idx)] = (self.energies[m] - self.params.E_L) * np.eye(
                2
            ) + a
        return h


@dataclass(frozen=True, eq=False)
class DiscretizedFano:
    """Single-continuum configuration-interaction reference on a ladder.

    State layout: (c0, c1, d[0..n)), dimension 2 + n; couplings
    mu*alpha_L*sqrt(dE) (ground to continuum) and V*sqrt(dE) (autoionizing
    state to continuum).
    """

    E_b: float
    E_L: float
    mu: complex
    mu_b: complex
    V: complex
    alpha_L: complex
    n_levels: int
    window: float
    dE: float
    energies: np.ndarray

    @property
    def dim(self) -> int:
        return 2 + self.n_levels

    @property
    def revival_time(self) -> float:
        return 2.0 * math.pi / self.dE

    def initial_state(self, c0) -> np.ndarray:
        y0 = np.zeros(self.dim, dtype=complex)
        y0[:2] = _as_c0(c0)
        return y0

    def _blocks(self):
        a = np.array(
            [
                [0.0, np.conj(self.mu_b * self.alpha_L)],
                [self.mu_b * self.alpha_L, self.E_b - self.E_L],
            ],
            dtype=complex,
        )
        b = np.array(
            [np.conj(self.mu * self.alpha_L), np.conj(self.V)], dtype=complex
        )
        return a, b

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        a, b = self._blocks()
        sq = math.sqrt(self.dE)
        c = y[:2]
        d = y[2:]
        dc = -1j * (a @ c + sq * b * d.sum())
        dd = -1j * (sq * np.conj(b) @ c + (self.energies - self.E_L) * d)
        return np.concatenate([dc, dd])

    def to_dense(self) -> np.ndarray:
        a, b = self._blocks()
        sq = math.sqrt(self.dE)
        n = self.n_levels
        h = np.zeros((self.dim, self.dim), dtype=complex)
        h[:2, :2] = a
        h[:2, 2:] = sq * b[:, None]
        h[2:, :2] = sq * np.conj(b)[None, :] * np.ones((n, 1))
        h[2:, 2:] = np.diag(self.energies - self.E_L)
        return h


@dataclass(frozen=True, eq=False)
class OracleTrajectory:
    """Sampled states of one discretized evolution."""

    system: object
    times: np.ndarray
    states: np.ndarray  # (dim, n_times)

    def bound(self) -> np.ndarray:
        """Bound amplitudes, shape (n_times, 2)."""
        return self.states[:2].T

    def continuum(self) -> np.ndarray:
        """Continuum amplitudes per unit sqrt(energy).

        Shape (n_times, n_levels, channels); dividing the level amplitudes
        by sqrt(dE) makes them directly comparable to the analytic d_j(E).
        """
        sys = self.system
        n = sys.n_levels
        sq = math.sqrt(sys.dE)
        if isinstance(sys, DiscretizedFano):
            return (self.states[2:].T / sq)[:, :, None]
        d0 = self.states[2 : 2 + n].T
        d1 = self.states[2 + n :].T
        return np.stack([d0, d1], axis=2) / sq

    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.states) ** 2, axis=0)


def _window_floor(p: PhysicalParams) -> float:
    _, _, delta_xi = rabi_split(p)
    return 20.0 * max(
        p.gamma_a,
        math.pi * abs(p.mu * p.alpha_L) ** 2,
        abs(p.delta_E_a),
        delta_xi,
    )


def discretize(p: PhysicalParams, window: float, n_levels: int) -> DiscretizedSystem:
    """Replace the flat continuum by n_levels points over E_L +/- window."""
    if n_levels < 3 or n_levels % 2 == 0:
        raise DomainError(f"n_levels must be odd and >= 3, got {n_levels}")
    floor = _window_floor(p)
    if window < floor:
        raise WindowTooNarrowError(
            f"window {window!r} below precondition {floor!r}",
            suggested_window=floor,
        )
    dE = 2.0 * window / (n_levels - 1)
    energies = p.E_L + np.linspace(-window, window, n_levels)
    return DiscretizedSystem(
        params=p, n_levels=n_levels, window=window, dE=dE, energies=energies
    )


def discretize_fano(
    E_b: float,
    E_L: float,
    mu: complex,
    mu_b: complex,
    V: complex,
    alpha_L: complex,
    window: float,
    n_levels: int,
) -> DiscretizedFano:
    """Discretized single-continuum reference system."""
    if n_levels < 3 or n_levels % 2 == 0:
        raise DomainError(f"n_levels must be odd and >= 3, got {n_levels}")
    gamma_b = math.pi * abs(V) ** 2
    floor = 20.0 * max(
        gamma_b,
        math.pi * abs(mu * alpha_L) ** 2,
        abs(E_b - E_L),
        2.0 * abs(mu_b * alpha_L),
    )
    if window < floor:
        raise WindowTooNarrowError(
            f"window {window!r} below precondition {floor!r}",
            suggested_window=floor,
        )
    dE = 2.0 * window / (n_levels - 1)
    energies = E_L + np.linspace(-window, window, n_levels)
    return DiscretizedFano(
        E_b=E_b,
        E_L=E_L,
        mu=mu,
        mu_b=mu_b,
        V=V,
        alpha_L=alpha_L,
        n_levels=n_levels,
        window=window,
        dE=dE,
        energies=energies,
    )


def evolve(
    sys,
    t_final: float,
    c0=(1.0, 0.0),
    rtol: float = 1e-10,
    atol: float = 1e-12,
    t_eval=None,
) -> OracleTrajectory:
    """Integrate the discretized model from the given bound-sector state.

    Refuses t_final at or beyond the discretization revival time 2*pi/dE
    (the level ladder rephases there and the run stops being a referee).
    Norm drift beyond 1e-9 per unit time raises NormDriftError.
    """
    if t_final < 0:
        raise DomainError(f"t_final must be >= 0, got {t_final!r}")
    t_rev = sys.revival_time
    if t_final >= REVIVAL_GUARD * t_rev:
        raise RevivalTimeError(
            f"t_final {t_final!r} reaches the discretization revival time "
            f"2*pi/dE = {t_rev!r}; increase n_levels or reduce t_final"
        )
    y0 = sys.initial_state(c0)
    if t_eval is None:
        t_eval = np.linspace(0.0, t_final, 9)
    else:
        t_eval = np.asarray(t_eval, dtype=float)
    if t_final == 0.0:
        states = np.repeat(y0[:, None], len(t_eval), axis=1)
        return OracleTrajectory(system=sys, times=t_eval, states=states)
    sol = solve_ivp(
        sys.rhs,
        (0.0, t_final),
        y0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        raise DomainError(f"integrator failed: {sol.message}")
    traj = OracleTrajectory(system=sys, times=sol.t, states=sol.y)
    norm0 = float(np.sum(np.abs(y0) ** 2))
    drift = float(np.abs(traj.norms() - norm0).max())
    bound = 1e-9 * max(t_final, 1.0)
    if drift > bound:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds {bound:.3e}; tighten rtol/atol"
        )
    return traj


@dataclass(frozen=True)
class ComparisonReport:
    """Analytic-vs-discretized error summary."""

    max_err_c: float
    rms_err_c: float
    max_err_d: float
    rms_err_d: float
    max_err_spectrum: float
    rms_err_spectrum: float
    t_final: float
    t_spectrum: float
    spectrum_time_clamped: bool
    n_levels: int

    def as_dict(self) -> dict:
        return {
            "max_err_c": self.max_err_c,
            "rms_err_d": self.rms_err_d,
            "rms_err_spectrum": self.rms_err_spectrum,
            "t_final": self.t_final,
            "n_levels": self.n_levels,
            "rms_err_c": self.rms_err_c,
            "max_err_d": self.max_err_d,
            "max_err_spectrum": self.max_err_spectrum,
            "t_spectrum": self.t_spectrum,
            "spectrum_time_clamped": self.spectrum_time_clamped,
        }


def compare(
    dsys: DiscretizedSystem,
    esys: EffectiveSystem,
    t: float,
    c0=(1.0, 0.0),
    compare_window: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> ComparisonReport:
    """Run the referee and report deviations from the closed forms.

    Compares bound amplitudes and conditional continuum densities
    |d_j(E, t)|^2 at time t on the level grid (restricted to
    |E - E_L| <= compare_window, default half the discretization window,
    where ladder-edge truncation effects are negligible), and the
    long-time spectrum at t_spectrum = 20 / min|Im Lambda|, clamped below
    the revival guard when necessary.
    """
    from .spectra import longtime_spectrum_on_grid

    if dsys.params != esys.params:
        raise DomainError("discretized and analytic parameters differ")
    if compare_window is None:
        compare_window = 0.5 * dsys.window
    lam_im = np.abs(np.array([esys.Lambda1.imag, esys.Lambda2.imag]))
    if lam_im.min() <= 0.0:
        t_spec_target = math.inf
    else:
        t_spec_target = 20.0 / lam_im.min()
    t_cap = 0.75 * dsys.revival_time
    clamped = t_spec_target > t_cap
    t_spec = min(t_spec_target, t_cap)
    t_spec = max(t_spec, t)

    traj = evolve(
        dsys, t_spec, c0=c0, rtol=rtol, atol=atol, t_eval=[0.0, t, t_spec]
    )
    from .core import bound_amplitudes, continuum_amplitudes

    mask = np.abs(dsys.energies - dsys.params.E_L) <= compare_window
    egrid = dsys.energies[mask]

    c_num = traj.bound()[1]
    c_ana = bound_amplitudes(esys, c0, t)
    err_c = np.abs(c_num - c_ana)

    d_num = traj.continuum()[1][mask]
    d_ana = continuum_amplitudes(esys, c0, egrid, t)
    err_d = np.abs(np.abs(d_num) ** 2 - np.abs(d_ana) ** 2).ravel()

    spec_num = np.sum(np.abs(traj.continuum()[2][mask]) ** 2, axis=1)
    spec_ana = longtime_spectrum_on_grid(esys, c0, egrid)
    err_s = np.abs(spec_num - spec_ana)

    return ComparisonReport(
        max_err_c=float(err_c.max()),
        rms_err_c=float(np.sqrt(np.mean(err_c**2))),
        max_err_d=float(err_d.max()),
        rms_err_d=float(np.sqrt(np.mean(err_d**2))),
        max_err_spectrum=float(err_s.max()),
        rms_err_spectrum=float(np.sqrt(np.mean(err_s**2))),
        t_final=float(t),
        t_spectrum=float(t_spec),
        spectrum_time_clamped=bool(clamped),
        n_levels=dsys.n_levels,
    )


def golden_rule_rate(dsys: DiscretizedSystem, width: float | None = None) -> float:
    """Golden-rule estimate of the direct ionization rate from the ladder.

    Sums |per-level coupling|^2 against a normalized Lorentzian centered on
    the pump frequency and divides by the same window-truncated integral, so
    the result isolates the level-density (Riemann) error and converges to
    pi*|mu*alpha_L|^2 as the ladder refines.
    """
    p = dsys.params
    if width is None:
        width = max(p.gamma_a, p.gamma_direct, 10.0 * dsys.dE)
    x = dsys.energies - p.E_L
    lor = (width / math.pi) / (x**2 + width**2)
    mass = dsys.dE * np.sum(lor)
    exact_mass = (2.0 / math.pi) * math.atan(dsys.window / width)
    g2 = abs(p.mu * p.alpha_L) ** 2 * dsys.dE
    return float(math.pi * (g2 / dsys.dE) * mass / exact_mass)


def rabi_frequency(
    traj: OracleTrajectory, channel: int = 0, skip_fraction: float = 0.1
) -> float:
    """Dominant oscillation frequency of one conditional continuum population.

    Detrends N_channel(t) = sum over levels of |d_channel|^2 with a cubic
    fit, then locates the FFT peak with parabolic refinement.  The sampled
    trajectory should cover several oscillation periods uniformly.
    """
    t = traj.times
    if len(t) < 16:
        raise DomainError("need at least 16 uniform samples to extract a frequency")
    dt = np.diff(t)
    if np.abs(dt - dt[0]).max() > 1e-9 * dt[0]:
        raise DomainError("frequency extraction requires uniform sampling")
    d = traj.continuum()
    pop = np.sum(np.abs(d[:, :, channel]) ** 2, axis=1)
    start = int(len(t) * skip_fraction)
    t_fit = t[start:]
    y = pop[start:]
    coeffs = np.polyfit(t_fit, y, 3)
    resid = y - np.polyval(coeffs, t_fit)
    window = np.hanning(len(resid))
    spec = np.abs(np.fft.rfft(resid * window))
    freqs = np.fft.rfftfreq(len(resid), d=dt[0])
    k = int(np.argmax(spec[1:]) + 1)
    if 1 <= k < len(spec) - 1:
        a, b, c = spec[k - 1], spec[k], spec[k + 1]
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    return float(2.0 * math.pi * (freqs[k] + shift * (freqs[1] - freqs[0])))
