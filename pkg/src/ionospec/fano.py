"""Reference model: a single autoionizing level driven through a flat continuum.

A laser couples the ground state to a structureless continuum (direct
photoionization, dipole mu) and to a discrete excited level (dipole mu_b)
that autoionizes into the same continuum through configuration interaction
V.  In the rotating frame the bound pair c = (c0, c1) and the scalar
continuum sheet d(E) obey

    i dc/dt   = A c + B  int dE d(E)
    i dd/dt   = B^H c + (E - E_L) d(E)

with A = [[0, conj(mu_b alpha_L)], [mu_b alpha_L, E_b - E_L]] and
B = (conj(mu alpha_L), conj(V))^T.  Eliminating the continuum gives the
non-Hermitian effective matrix M = A - i pi B B^H whose two complex
eigenvalues set the dressed-state energies and widths.  Because the
continuum here carries no internal structure, the long-time photoelectron
spectrum is a single stationary profile: the familiar asymmetric line
shape with one exact zero at E = E_b - gamma_b q_b, independent of pump
strength.

This module is the calibration reference for the neighbor-atom model in
:mod:`ionospec.core`: same elimination, same normalization machinery, but
a scalar continuum instead of a two-channel one, so nothing oscillates at
long times and the interference dip never moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NormalizedParams, _as_c0, eigen_decompose
from .errors import (
    DomainError,
    InvalidNormalizationError,
    NoLongTimeLimitError,
)
from .spectra import pole_integral

__all__ = [
    "FanoParams",
    "FanoSpectrum",
    "fano_from_normalized",
    "fano_effective_matrix",
    "fano_eigen",
    "fano_modes",
    "fano_amplitude",
    "fano_spectrum",
    "fano_zero",
]


@dataclass(frozen=True)
class FanoParams:
    """Physical couplings of the driven autoionizing level.

    E_b, E_L   : excited-level and laser photon energies
    mu, mu_b   : ground-continuum and ground-excited dipoles
    V          : configuration interaction (excited-continuum)
    alpha_L    : pump amplitude; the Rabi couplings are mu*alpha_L and
                 mu_b*alpha_L
    """

    E_b: float
    E_L: float
    mu: complex
    mu_b: complex
    V: complex
    alpha_L: complex

    @property
    def delta_E_b(self) -> float:
        return self.E_b - self.E_L

    @property
    def gamma_b(self) -> float:
        """Autoionization half-width pi |V|^2."""
        return math.pi * abs(self.V) ** 2

    @property
    def gamma_direct(self) -> float:
        """Direct photoionization half-width pi |mu alpha_L|^2."""
        return math.pi * abs(self.mu * self.alpha_L) ** 2

    @property
    def q_b(self) -> complex:
        """Line-shape asymmetry mu_b / (pi mu conj(V))."""
        den = math.pi * self.mu * np.conj(self.V)
        if den == 0:
            raise DomainError("q_b undefined: mu V = 0")
        return complex(self.mu_b / den)


def fano_from_normalized(p: NormalizedParams) -> FanoParams:
    """Build couplings from (q_b, gamma_b, Omega) in the real gauge.

    mu = 1, V = sqrt(gamma_b/pi), mu_b = q_b pi mu V and the pump is scaled
    so that Omega measures the peak separation: alpha_L = Omega /
    sqrt(4 pi Gamma (Q^2 + 1)) with Gamma = gamma_b, Q = q_b here (no
    neighbor channel).  Requires the neighbor couplings of p to be unset.
    """
    if p.q_a != 0 or p.gamma_a != 0:
        raise InvalidNormalizationError(
            "reference model takes q_b/gamma_b only; got nonzero q_a or gamma_a"
        )
    if p.gamma_b < 0:
        raise InvalidNormalizationError(f"gamma_b must be >= 0, got {p.gamma_b}")
    if p.gamma_b == 0:
        raise InvalidNormalizationError(
            "gamma_b = 0: no autoionization width, pump scale undefined"
        )
    mu = 1.0
    V = math.sqrt(p.gamma_b / math.pi)
    mu_b = p.q_b * math.pi * mu * V
    gamma_tot = p.gamma_b
    q_eff = p.q_b
    alpha_L = p.Omega / math.sqrt(4.0 * math.pi * gamma_tot * (q_eff**2 + 1.0))
    return FanoParams(
        E_b=p.E_b, E_L=p.E_L, mu=mu, mu_b=mu_b, V=V, alpha_L=alpha_L
    )


def _pump_column(p: FanoParams) -> np.ndarray:
    # column vector B: continuum reached from |0> by the pump, from |b> by V
    return np.array(
        [np.conj(p.mu * p.alpha_L), np.conj(p.V)], dtype=complex
    ).reshape(2, 1)


def fano_effective_matrix(p: FanoParams) -> np.ndarray:
    """Effective non-Hermitian 2x2 matrix M = A - i pi B B^H."""
    a = np.array(
        [
            [0.0, np.conj(p.mu_b * p.alpha_L)],
            [p.mu_b * p.alpha_L, p.delta_E_b],
        ],
        dtype=complex,
    )
    b = _pump_column(p)
    return a - 1j * math.pi * (b @ b.conj().T)


def fano_eigen(p: FanoParams) -> tuple[complex, complex]:
    """Dressed complex energies in closed form.

    With E_cal = (delta_E_b - i gamma_b)/2, x = pi |mu alpha_L|^2,
    M_b = mu_b - i pi mu conj(V) and M_b^c = conj(mu_b) - i pi conj(mu) V:

        Lambda_{1,2} = (E_cal - i x/2) -/+ sqrt((E_cal + i x/2)^2
                                               + M_b M_b^c |alpha_L|^2)

    principal square-root branch.  Matches the eigenvalues of
    fano_effective_matrix to rounding.
    """
    ecal = (p.delta_E_b - 1j * p.gamma_b) / 2.0
    x = p.gamma_direct
    mb = p.mu_b - 1j * math.pi * p.mu * np.conj(p.V)
    mbc = np.conj(p.mu_b) - 1j * math.pi * np.conj(p.mu) * p.V
    root = np.sqrt((ecal + 1j * x / 2.0) ** 2 + mb * mbc * abs(p.alpha_L) ** 2)
    return complex(ecal - 1j * x / 2.0 - root), complex(
        ecal - 1j * x / 2.0 + root
    )


def fano_modes(p: FanoParams, c0=(1.0, 0.0)):
    """Poles and weights of the long-time amplitude.

    d(E, t->inf) = e^{i(E_L - E)t} sum_l w_l / (E - p_l) with poles
    p_l = E_L + Lambda_l.  Returns (poles, weights) as 1-D arrays of
    length 2.  Zero-weight modes are kept (they drop out identically).
    """
    m = fano_effective_matrix(p)
    lam1, lam2, pmat, pinv = eigen_decompose(m)
    bdag = _pump_column(p).conj().T  # 1x2 row
    c0v = _as_c0(c0)
    row = (bdag @ pmat)[0, :]  # (B^H P)_l
    load = pinv @ c0v  # (P^-1 c0)_l
    weights = row * load
    poles = p.E_L + np.array([lam1, lam2], dtype=complex)
    return poles, weights


def fano_amplitude(p: FanoParams, e, t: float, c0=(1.0, 0.0)) -> np.ndarray:
    """Continuum amplitude d(E, t) at finite time (ground start by default).

    d(E,t) = sum_l w_l (e^{i(E_L - E)t} - e^{-i Lambda_l t}) / (E - p_l).
    """
    e = np.atleast_1d(np.asarray(e, dtype=float))
    poles, weights = fano_modes(p, c0)
    lams = poles - p.E_L
    osc = np.exp(1j * (p.E_L - e) * t)  # (nE,)
    dec = np.exp(-1j * lams * t)  # (2,)
    num = osc[:, None] - dec[None, :]
    den = e[:, None] - poles[None, :]
    return (weights[None, :] * num / den).sum(axis=1)


@dataclass(frozen=True)
class FanoSpectrum:
    """Normalized long-time spectrum of the reference model."""

    energies: np.ndarray
    intensity: np.ndarray
    poles: np.ndarray
    weights: np.ndarray
    norm: float


def fano_spectrum(p: FanoParams, e=None, n_points: int = 2001, c0=(1.0, 0.0)):
    """Long-time photoelectron spectrum, normalized to unit area.

    I(E) = |sum_l w_l / (E - p_l)|^2 / N with N from the exact residue
    integral, so int I dE = 1 over the full line regardless of the grid.
    Default grid: E_b +- 10 max(gamma_b, gamma_direct), 2001 points.
    """
    poles, weights = fano_modes(p, c0)
    populated = np.abs(weights) > 1e-14 * max(np.abs(weights).max(), 1e-300)
    if not populated.any():
        raise NoLongTimeLimitError(
            "no continuum amplitude: pump and couplings leave the atom dark"
        )
    lams = poles - p.E_L
    if np.any(lams[populated].imag >= -1e-14 * np.maximum(1.0, np.abs(lams[populated].real))):
        raise NoLongTimeLimitError(
            "populated non-decaying mode: long-time spectrum does not exist"
        )
    poles = poles[populated]
    weights = weights[populated]
    if e is None:
        half = 10.0 * max(p.gamma_b, p.gamma_direct)
        e = np.linspace(p.E_b - half, p.E_b + half, n_points)
    e = np.asarray(e, dtype=float)
    amp = (weights[None, :] / (e[:, None] - poles[None, :])).sum(axis=1)
    norm = pole_integral(poles, weights[:, None])
    if norm <= 0:
        raise NoLongTimeLimitError(f"nonpositive spectral norm {norm!r}")
    return FanoSpectrum(
        energies=e,
        intensity=np.abs(amp) ** 2 / norm,
        poles=poles,
        weights=weights,
        norm=norm,
    )


def fano_zero(p: FanoParams) -> float:
    """Exact interference zero of the long-time spectrum.

    The numerator of sum_l w_l/(E - p_l) is linear in E with root
    E = E_b - mu_b V / mu, independent of alpha_L.  In the real gauge
    this is E_b - gamma_b q_b.  Raises if the zero is not on the real
    axis (misaligned coupling phases) or if there is no interference
    path (V = 0 or mu = 0).
    """
    if p.V == 0 or p.mu == 0:
        raise DomainError("no interference path: need both mu and V nonzero")
    shift = p.mu_b * p.V / p.mu
    if abs(complex(shift).imag) > 1e-12 * max(abs(shift), 1.0):
        raise DomainError(
            f"coupling phases put the zero off the real axis: shift {shift!r}"
        )
    return float(p.E_b - complex(shift).real)
