"""Closed-form dynamics of laser ionization next to a two-level neighbor atom.

The model: a stationary pump at frequency ``E_L`` ionizes system b into a flat
continuum (bound-free dipole ``mu``) while a neighbor two-level atom a (bare
splitting ``E_a``, pump dipole ``mu_a``) exchanges energy with b through a
Coulomb-type transfer element ``J``.  In the rotating frame the two bound
amplitudes ``c = (c00, c10)`` couple to two continuum sheets
``d = (d0(E), d1(E))`` — photoelectron with the neighbor in its ground or
excited state — via

    i dc/dt = A c + B \int dE d(E),      i dd/dt = B^H c + K(E) d(E),

with 2x2 blocks ``A``, ``B``, ``K(E)`` built from the couplings.  A Laplace
transform eliminates the flat continuum exactly and leaves a non-Hermitian
effective matrix ``M = A - i*pi*B*B^H`` for the bound sector; the continuum
amplitudes follow in closed form as sums of four simple poles located at
``xi_k + Lambda_j`` (dressed-doublet frequency plus decaying eigenvalue).

Everything downstream (stationary spectra, Rabi-oscillating conditional
spectra, spectral zeros) is assembled from the quantities computed here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    DomainError,
    ExceptionalPointError,
    GridTooNarrowError,
    InvalidNormalizationError,
    PoleError,
)

__all__ = [
    "PhysicalParams",
    "NormalizedParams",
    "InitialState",
    "EffectiveSystem",
    "from_normalized",
    "to_normalized",
    "rabi_split",
    "k_projector",
    "effective_matrix",
    "transfer_moments",
    "eigen_decompose",
    "build_effective",
    "d_matrices",
    "mode_table",
    "bound_amplitudes",
    "continuum_amplitudes",
    "total_probability",
]

GROUND = (1.0 + 0.0j, 0.0 + 0.0j)


@dataclass(frozen=True)
class PhysicalParams:
    """Microscopic couplings of the neighbor-atom ionization model.

    E_a, E_L   bare neighbor splitting and pump frequency (real)
    mu         bound-free ionization dipole times field unit (complex)
    mu_a       neighbor pump dipole (complex)
    J          energy-transfer element between a and b (complex)
    alpha_L    classical pump amplitude (complex)
    """

    E_a: float
    E_L: float
    mu: complex
    mu_a: complex
    J: complex
    alpha_L: complex

    @property
    def delta_E_a(self) -> float:
        return self.E_a - self.E_L

    @property
    def gamma_a(self) -> float:
        """Transfer-induced decay rate pi*|J|^2 of the excited neighbor."""
        return math.pi * abs(self.J) ** 2

    @property
    def gamma_direct(self) -> float:
        """Direct photoionization amplitude decay rate pi*|mu*alpha_L|^2."""
        return math.pi * abs(self.mu * self.alpha_L) ** 2


@dataclass(frozen=True)
class NormalizedParams:
    """Figure-level parameters: Fano asymmetries, rates and pump strength.

    q_a, gamma_a parameterize the neighbor channel, q_b, gamma_b the
    configuration-interaction reference channel; Omega is the signed pump
    parameter scaled so spectra at fixed (q, Omega) are invariant under a
    common rescaling of all rates.
    """

    q_a: float = 0.0
    gamma_a: float = 0.0
    q_b: float = 0.0
    gamma_b: float = 0.0
    Omega: float = 0.0
    E_a: float = 1.0
    E_b: float = 1.0
    E_L: float = 1.0


@dataclass(frozen=True)
class InitialState:
    """Bound-sector amplitudes at t = 0; the continuum starts empty."""

    c00: complex = 1.0 + 0.0j
    c10: complex = 0.0 + 0.0j

    def __post_init__(self):
        norm = abs(self.c00) ** 2 + abs(self.c10) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise DomainError(f"initial state norm {norm!r} != 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.c00, self.c10], dtype=complex)


@dataclass(frozen=True, eq=False)
class EffectiveSystem:
    """All closed-form ingredients for one parameter set.

    xi1 <= xi2 are the dressed-doublet frequencies, K1/K2 their projectors,
    M the effective non-Hermitian matrix with eigenvalues Lambda1/Lambda2
    and eigenvector matrix P (columns), D1/D2 the ground-state pole weights
    (None when the closed form degenerates, e.g. alpha_L -> 0).
    """

    params: PhysicalParams
    xi1: float
    xi2: float
    delta_xi: float
    K1: np.ndarray
    K2: np.ndarray
    M: np.ndarray
    Lambda1: complex
    Lambda2: complex
    P: np.ndarray
    Pinv: np.ndarray
    Ma: complex
    Mac: complex
    Ecal: complex
    Etilde: complex | None
    Dden: complex | None
    D1: np.ndarray | None
    D2: np.ndarray | None

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([self.Lambda1, self.Lambda2])

    @property
    def xis(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2])

    def coupling_block(self) -> np.ndarray:
        """B^H, the bound-to-continuum coupling rows."""
        p = self.params
        return np.array(
            [[p.mu * p.alpha_L, p.J], [0.0, p.mu * p.alpha_L]], dtype=complex
        )


def _require_real_nonneg(value: float, name: str) -> None:
    if value < 0.0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")


def from_normalized(p: NormalizedParams) -> PhysicalParams:
    """Complete (q_a, gamma_a, Omega) into microscopic couplings.

    Gauge choice: mu = 1, J = sqrt(gamma_a/pi) >= 0, mu_a = q_a*pi*mu*J,
    all real; alpha_L = Omega / sqrt(4*pi*Gamma*(Q^2+1)) carries the sign
    of Omega, with Gamma = gamma_a + gamma_b and
    Q = (gamma_a*q_a + gamma_b*q_b) / Gamma.
    """
    _require_real_nonneg(p.gamma_a, "gamma_a")
    _require_real_nonneg(p.gamma_b, "gamma_b")
    if p.gamma_b != 0.0 or p.q_b != 0.0:
        raise DomainError("neighbor model requires q_b = gamma_b = 0")
    big_gamma = p.gamma_a + p.gamma_b
    if big_gamma == 0.0:
        raise InvalidNormalizationError(
            "Gamma = gamma_a + gamma_b = 0 does not define a pump amplitude"
        )
    q_mean = (p.gamma_a * p.q_a + p.gamma_b * p.q_b) / big_gamma
    alpha = p.Omega / math.sqrt(4.0 * math.pi * big_gamma * (q_mean**2 + 1.0))
    j = math.sqrt(p.gamma_a / math.pi)
    return PhysicalParams(
        E_a=p.E_a,
        E_L=p.E_L,
        mu=1.0 + 0.0j,
        mu_a=p.q_a * math.pi * j + 0.0j,
        J=j + 0.0j,
        alpha_L=alpha + 0.0j,
    )


def to_normalized(p: PhysicalParams) -> NormalizedParams:
    """Invert :func:`from_normalized` for real-gauge parameters."""
    gamma_a = p.gamma_a
    if gamma_a == 0.0:
        raise DomainError("q_a is undefined for J = 0")
    q_a_c = p.mu_a / (math.pi * p.mu * np.conj(p.J))
    alpha = complex(p.alpha_L)
    if abs(q_a_c.imag) > 1e-12 * max(1.0, abs(q_a_c)) or abs(alpha.imag) > 1e-12:
        raise DomainError("parameters are not in the real gauge")
    q_a = q_a_c.real
    omega = alpha.real * math.sqrt(4.0 * math.pi * gamma_a * (q_a**2 + 1.0))
    return NormalizedParams(
        q_a=q_a, gamma_a=gamma_a, Omega=omega, E_a=p.E_a, E_L=p.E_L, E_b=p.E_a
    )


def _pump_block(p: PhysicalParams) -> np.ndarray:
    """Hermitian bound-sector block A in the rotating frame."""
    c = p.mu_a * p.alpha_L
    return np.array([[0.0, np.conj(c)], [c, p.delta_E_a]], dtype=complex)


def rabi_split(p: PhysicalParams) -> tuple[float, float, float]:
    """Dressed-doublet frequencies (xi1, xi2) and their separation delta_xi.

    xi_{1,2} = E_L - (delta_E_a +/- delta_xi)/2 with
    delta_xi = sqrt(delta_E_a^2 + 4|mu_a alpha_L|^2), so xi2 - xi1 = delta_xi.
    """
    de = p.delta_E_a
    delta_xi = math.sqrt(de**2 + 4.0 * abs(p.mu_a * p.alpha_L) ** 2)
    xi1 = p.E_L - 0.5 * (de + delta_xi)
    xi2 = p.E_L - 0.5 * (de - delta_xi)
    return xi1, xi2, delta_xi


def k_projector(k: int, p: PhysicalParams) -> np.ndarray:
    """Spectral projector K_k of the pump block onto dressed state k.

    K_k = ((-1)^k / delta_xi) * [[dE_a + xi_k - E_L, -conj(mu_a alpha_L)],
                                 [-mu_a alpha_L,      xi_k - E_L       ]]

    satisfies K_1 + K_2 = 1 and K_k K_l = delta_kl K_k; the continuum
    resolvent decomposes as [eps - K(E)]^{-1} = sum_k K_k / (eps - E + xi_k).
    """
    if k not in (1, 2):
        raise DomainError(f"projector index must be 1 or 2, got {k!r}")
    xi1, xi2, delta_xi = rabi_split(p)
    if delta_xi == 0.0:
        raise DegenerateSpectrumError("delta_xi = 0: dressed doublet collapses")
    xi = xi1 if k == 1 else xi2
    c = p.mu_a * p.alpha_L
    mat = np.array(
        [
            [p.delta_E_a + xi - p.E_L, -np.conj(c)],
            [-c, xi - p.E_L],
        ],
        dtype=complex,
    )
    return ((-1.0) ** k / delta_xi) * mat


def transfer_moments(p: PhysicalParams) -> tuple[complex, complex]:
    """Dressed transfer moments M_a = mu_a - i*pi*mu*conj(J) and its partner
    M_a^c = conj(mu_a) - i*pi*conj(mu)*J."""
    ma = p.mu_a - 1j * math.pi * p.mu * np.conj(p.J)
    mac = np.conj(p.mu_a) - 1j * math.pi * np.conj(p.mu) * p.J
    return complex(ma), complex(mac)


def effective_matrix(p: PhysicalParams) -> np.ndarray:
    """Non-Hermitian bound-sector matrix M = A - i*pi*B*B^H.

    B = [[conj(mu alpha_L), 0], [conj(J), conj(mu alpha_L)]] collects the
    two continuum channels; the flat-continuum elimination is exact.
    """
    a = _pump_block(p)
    b = np.array(
        [
            [np.conj(p.mu * p.alpha_L), 0.0],
            [np.conj(p.J), np.conj(p.mu * p.alpha_L)],
        ],
        dtype=complex,
    )
    return a - 1j * math.pi * (b @ b.conj().T)


def eigen_decompose(m: np.ndarray) -> tuple[complex, complex, np.ndarray, np.ndarray]:
    """Closed-form eigensystem of a 2x2 matrix, Lambda1 = h - s first.

    h is the half-trace, s the principal square root of
    ((m22-m11)/2)^2 + m12*m21.  Columns of P are unit-norm eigenvectors;
    raises ExceptionalPointError when the matrix is defective.
    """
    m = np.asarray(m, dtype=complex)
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    half_gap = 0.5 * (m[1, 1] - m[0, 0])
    s = cmath.sqrt(half_gap**2 + m[0, 1] * m[1, 0])
    lam1 = half_tr - s
    lam2 = half_tr + s
    scale = max(abs(m).max(), 1e-300)
    offdiag = max(abs(m[0, 1]), abs(m[1, 0]))
    if abs(s) <= 1e-14 * scale and offdiag > 1e-14 * scale:
        raise ExceptionalPointError(
            f"defective effective matrix: |s| = {abs(s):.3e}, "
            f"off-diagonal coupling {offdiag:.3e}"
        )

    cols = []
    for lam in (lam1, lam2):
        v1 = np.array([m[0, 1], lam - m[0, 0]])
        v2 = np.array([lam - m[1, 1], m[1, 0]])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        nv = np.linalg.norm(v)
        if nv <= 1e-15 * scale:
            # diagonal-like matrix: pick the basis vector nearest this root
            v = (
                np.array([1.0, 0.0])
                if abs(lam - m[0, 0]) <= abs(lam - m[1, 1])
                else np.array([0.0, 1.0])
            )
            nv = 1.0
        cols.append(v / nv)
    p_mat = np.column_stack(cols).astype(complex)
    det = p_mat[0, 0] * p_mat[1, 1] - p_mat[0, 1] * p_mat[1, 0]
    if abs(det) <= 1e-13:
        raise ExceptionalPointError(
            f"eigenvectors nearly parallel: |det P| = {abs(det):.3e}"
        )
    p_inv = np.array(
        [[p_mat[1, 1], -p_mat[0, 1]], [-p_mat[1, 0], p_mat[0, 0]]], dtype=complex
    ) / det
    recon = p_mat @ np.diag([lam1, lam2]) @ p_inv
    if abs(recon - m).max() > 1e-12 * max(scale, abs(lam1), abs(lam2)):
        raise ExceptionalPointError("eigendecomposition failed to reconstruct M")
    return lam1, lam2, p_mat, p_inv


def d_matrices(
    p: PhysicalParams,
) -> tuple[np.ndarray, np.ndarray, complex, complex]:
    """Ground-state pole-weight matrices (D_1, D_2, Etilde, D).

    Closed form in terms of Etilde = -Ecal - sqrt(Ecal^2 + M_a M_a^c |a_L|^2)
    and D = -Etilde^2 - M_a M_a^c |a_L|^2, with Ecal = (dE_a - i gamma_a)/2.
    Sign convention fixed by the defining product formula
    [D_k]_{jl} = [K_k B^H P]_{jl} [P^{-1}]_{l1}: the two matrices agree with
    it to machine precision (cross-checked numerically over random gauges).
    """
    _, _, delta_xi = rabi_split(p)
    if delta_xi == 0.0:
        raise DegenerateSpectrumError("delta_xi = 0: dressed doublet collapses")
    ma, mac = transfer_moments(p)
    ecal = 0.5 * (p.delta_E_a - 1j * p.gamma_a)
    x = ma * mac * abs(p.alpha_L) ** 2
    etilde = -ecal - cmath.sqrt(ecal**2 + x)
    dden = -(etilde**2) - x
    scale = max(abs(ecal), abs(x) ** 0.5, abs(p.mu_a * p.alpha_L), 1e-300)
    if abs(dden) <= 1e-14 * scale**2:
        raise DegenerateSpectrumError(
            f"weight denominator D = {dden!r} degenerates at these parameters"
        )
    mu, al, j = p.mu, p.alpha_L, p.J
    mua = p.mu_a
    de2 = 0.5 * p.delta_E_a
    dx2 = 0.5 * delta_xi
    out = []
    for sign in (-1.0, +1.0):  # k = 1 pairs with the lower branch of each +/-
        d11 = (mu * etilde**2 + j * ma * etilde) * al * (sign * de2 + dx2) - (
            sign * mu * np.conj(mua) * ma * al * abs(al) ** 2 * etilde
        )
        d12 = (mu * ma * mac * al * abs(al) ** 2 - j * ma * al * etilde) * (
            sign * de2 + dx2
        ) + sign * mu * np.conj(mua) * ma * al * abs(al) ** 2 * etilde
        d21 = (
            -sign * mu * mua * al**2 * etilde**2
            - sign * j * mua * ma * al**2 * etilde
            + mu * ma * al**2 * etilde * (-sign * de2 + dx2)
        )
        d22 = (
            -sign * mu * mua * ma * mac * al**2 * abs(al) ** 2
            + sign * j * mua * ma * al**2 * etilde
            + mu * ma * al**2 * etilde * (sign * de2 - dx2)
        )
        out.append(
            -np.array([[d11, d12], [d21, d22]], dtype=complex) / (delta_xi * dden)
        )
    return out[0], out[1], complex(etilde), complex(dden)


def build_effective(p: PhysicalParams) -> EffectiveSystem:
    """Assemble every closed-form quantity needed downstream."""
    xi1, xi2, delta_xi = rabi_split(p)
    k1 = k_projector(1, p)
    k2 = k_projector(2, p)
    m = effective_matrix(p)
    lam1, lam2, pm, pminv = eigen_decompose(m)
    ma, mac = transfer_moments(p)
    ecal = 0.5 * (p.delta_E_a - 1j * p.gamma_a)
    try:
        d1, d2, etilde, dden = d_matrices(p)
    except DegenerateSpectrumError:
        d1 = d2 = None
        etilde = dden = None
    return EffectiveSystem(
        params=p,
        xi1=xi1,
        xi2=xi2,
        delta_xi=delta_xi,
        K1=k1,
        K2=k2,
        M=m,
        Lambda1=lam1,
        Lambda2=lam2,
        P=pm,
        Pinv=pminv,
        Ma=ma,
        Mac=mac,
        Ecal=ecal,
        Etilde=etilde,
        Dden=dden,
        D1=d1,
        D2=d2,
    )


def _as_c0(c0) -> np.ndarray:
    if isinstance(c0, InitialState):
        return c0.as_array()
    arr = np.asarray(c0, dtype=complex)
    if arr.shape != (2,):
        raise DomainError(f"initial state must have two components, got {arr.shape}")
    return arr


def mode_table(sys: EffectiveSystem, c0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pole table of the continuum amplitudes for initial state c0.

    Returns (poles, weights, labels): poles[m] = xi_k + Lambda_l, weights[m]
    the 2-vector residue of channel (k, l), labels[m] = (k index, l index).
    d_j(E, t) = sum_m weights[m, j] * (e^{i(xi_k - E)t} - e^{-i Lambda_l t})
                / (E - poles[m]).
    """
    vec = _as_c0(c0)
    rho = sys.Pinv @ vec
    bh = sys.coupling_block()
    poles = []
    weights = []
    labels = []
    for ki, kmat in ((0, sys.K1), (1, sys.K2)):
        w = kmat @ bh @ sys.P  # columns address Lambda_l
        for li in (0, 1):
            poles.append(sys.xis[ki] + sys.lambdas[li])
            weights.append(w[:, li] * rho[li])
            labels.append((ki, li))
    return np.array(poles), np.array(weights), np.array(labels)


def bound_amplitudes(sys: EffectiveSystem, c0, t) -> np.ndarray:
    """Bound amplitudes c(t) = P exp(-i Lambda t) P^{-1} c(0).

    t may be a scalar or an array; the trailing axis of the result indexes
    the two bound states.
    """
    vec = _as_c0(c0)
    tarr = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(tarr, sys.lambdas))
    out = np.einsum("jl,...l,l->...j", sys.P, phases, sys.Pinv @ vec)
    return out if tarr.shape else out.reshape(2)


def continuum_amplitudes(
    sys: EffectiveSystem, c0, e, t: float, method: str = "general"
) -> np.ndarray:
    """Continuum amplitudes d_j(E, t), vectorized over E.

    method="general" evaluates the projector route valid for any initial
    state; method="ground" uses the closed-form weight matrices D_k and
    requires c(0) = (1, 0).  Both return an array of shape E.shape + (2,).
    """
    vec = _as_c0(c0)
    earr = np.asarray(e, dtype=float)
    scalar = earr.ndim == 0
    earr = np.atleast_1d(earr)
    if method == "general":
        poles, weights, labels = mode_table(sys, vec)
    elif method == "ground":
        if abs(vec[0] - 1.0) > 1e-12 or abs(vec[1]) > 1e-12:
            raise DomainError("method='ground' requires the ground initial state")
        if sys.D1 is None or sys.D2 is None:
            raise DegenerateSpectrumError(
                "closed-form weights unavailable: D denominator degenerates"
            )
        poles, weights, labels = [], [], []
        for ki, dmat in ((0, sys.D1), (1, sys.D2)):
            for li in (0, 1):
                poles.append(sys.xis[ki] + sys.lambdas[li])
                weights.append(dmat[:, li])
                labels.append((ki, li))
        poles = np.array(poles)
        weights = np.array(weights)
        labels = np.array(labels)
    else:
        raise DomainError(f"unknown method {method!r}")

    wscale = max(np.abs(weights).max(), 1e-300)
    decaying = poles.imag < -1e-14 * np.maximum(1.0, np.abs(poles.real))
    populated = np.abs(weights).max(axis=1) > 1e-14 * wscale
    if np.any(~decaying & populated):
        denom_ok = np.abs(earr[:, None] - poles[None, ~decaying & populated])
        if denom_ok.size and denom_ok.min() < 1e-9:
            raise PoleError(
                "evaluation energy hits a non-decaying pole of the amplitude"
            )

    out = np.zeros(earr.shape + (2,), dtype=complex)
    for m in range(len(poles)):
        if not populated[m]:
            continue
        ki, li = labels[m]
        osc = np.exp(1j * (sys.xis[ki] - earr) * t)
        trans = np.exp(-1j * sys.lambdas[li] * t)
        g = (osc - trans) / (earr - poles[m])
        out += g[:, None] * weights[m][None, :]
    return out[0] if scalar else out


def total_probability(sys: EffectiveSystem, c0, t: float, grid) -> float:
    """Bound plus continuum probability at time t; equals 1 when exact.

    The continuum part is a Simpson quadrature of |d(E, t)|^2 over the
    supplied grid plus an analytic 1/E^2 tail correction.  Raises
    GridTooNarrowError when the residual tail estimate exceeds 1e-8.
    """
    vec = _as_c0(c0)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise DomainError("grid must be a 1-d array with at least 3 points")
    from scipy.integrate import simpson

    c_t = bound_amplitudes(sys, vec, t)
    bound = float(np.abs(c_t[0]) ** 2 + np.abs(c_t[1]) ** 2)
    d = continuum_amplitudes(sys, vec, grid, t)
    density = np.abs(d[:, 0]) ** 2 + np.abs(d[:, 1]) ** 2
    cont = float(simpson(density, x=grid))

    # 1/E^2 tail: d_j -> (e^{-iEt} A_j - B_j)/E with the coefficients below
    poles, weights, labels = mode_table(sys, vec)
    a_coef = np.zeros(2, dtype=complex)
    b_coef = np.zeros(2, dtype=complex)
    for m in range(len(poles)):
        ki, li = labels[m]
        a_coef += weights[m] * np.exp(1j * sys.xis[ki] * t)
        b_coef += weights[m] * np.exp(-1j * sys.lambdas[li] * t)
    c_sq = float(np.sum(np.abs(a_coef) ** 2 + np.abs(b_coef) ** 2))
    centers = poles.real
    left = abs(grid[0] - centers.max())
    right = abs(grid[-1] - centers.min())
    if grid[0] > centers.min() or grid[-1] < centers.max():
        raise GridTooNarrowError(
            "grid does not cover the spectral peaks",
            suggested_width=float(np.abs(centers).max() * 2),
        )
    tail = c_sq / left + c_sq / right
    total_est = bound + cont + tail
    # residual of the 1/E^2 model: next order falls off one power faster
    resid = c_sq * (np.abs(centers).max() + np.abs(poles.imag).max()) * (
        1.0 / left**2 + 1.0 / right**2
    )
    if resid > 1e-8 * max(total_est, 1e-300):
        need = c_sq * (np.abs(centers).max() + np.abs(poles.imag).max()) * 2.0 / (
            1e-8 * max(total_est, 1e-300)
        )
        raise GridTooNarrowError(
            f"tail residual estimate {resid:.3e} exceeds 1e-8 of the total; "
            f"extend the grid to roughly +/-{need**0.5:.3e}",
            suggested_width=float(need**0.5),
        )
    return total_est
