"""Long-time photoelectron spectra and their Rabi-oscillating decomposition.

Once every decaying eigenmode has died out (t >> 1/|Im Lambda_j|), the
continuum amplitudes reduce to two terms oscillating at the dressed-doublet
frequencies xi_1 and xi_2.  Each conditional spectrum (photoelectron with
the neighbor in state j) therefore splits into a stationary part I^st_j(E)
and a harmonic part I^osc(E) cos(delta_xi t - phi_j(E)) at the Rabi
frequency delta_xi = xi_2 - xi_1.  The two conditional phases differ by pi
and the two oscillation magnitudes coincide exactly, so the summed spectrum
I^lt(E) is time independent.

This module computes those quantities on energy grids, normalizes the total
spectrum to unit integral (with a residue-formula/quadrature double check),
and carries the parameter presets used by the bundled figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    GROUND,
    EffectiveSystem,
    NormalizedParams,
    PhysicalParams,
    _as_c0,
    build_effective,
    from_normalized,
    mode_table,
)
from .errors import DomainError, IonospecError, NoLongTimeLimitError, PoleError, UnknownPresetError

__all__ = [
    "LongTimeAmplitudes",
    "SpectralDecomposition",
    "PresetSpec",
    "longtime_amplitudes",
    "longtime_spectrum_on_grid",
    "decompose_intensity",
    "time_resolved_intensity",
    "pole_integral",
    "residue_norm",
    "quadrature_norm",
    "spectrum_grid",
    "figure_preset",
    "find_peaks",
    "PRESET_NAMES",
]


@dataclass(frozen=True, eq=False)
class LongTimeAmplitudes:
    """Stationary-envelope continuum amplitudes after the transients decay.

    The full long-time amplitude is
    d_j(E, t) = d_xi1[..., j] e^{i(xi1-E)t} + d_xi2[..., j] e^{i(xi2-E)t};
    the stored arrays are the energy-dependent coefficients with the phase
    factors taken out.  Shapes are E.shape + (2,).
    """

    energies: np.ndarray
    d_xi1: np.ndarray
    d_xi2: np.ndarray
    xi1: float
    xi2: float

    @property
    def delta_xi(self) -> float:
        return self.xi2 - self.xi1

    def reconstruct(self, t: float) -> np.ndarray:
        """Long-time amplitude with explicit phase factors at time t."""
        ph1 = np.exp(1j * (self.xi1 - self.energies) * t)[..., None]
        ph2 = np.exp(1j * (self.xi2 - self.energies) * t)[..., None]
        return self.d_xi1 * ph1 + self.d_xi2 * ph2

    def total_intensity(self) -> np.ndarray:
        """Time-independent summed spectrum I^lt(E)."""
        return np.sum(
            np.abs(self.d_xi1) ** 2 + np.abs(self.d_xi2) ** 2, axis=-1
        )


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Grid evaluation of the long-time spectrum and its components.

    All intensity arrays are normalized by `norm` (the analytic full-line
    integral of the raw I^lt, which equals the ionized probability and is 1
    for a unit-norm initial state).  `window_mass` is the fraction of the
    normalized spectrum inside the grid; `window_warning` flags < 99%.
    """

    grid: np.ndarray
    I_st0: np.ndarray
    I_st1: np.ndarray
    I_osc: np.ndarray
    phi0: np.ndarray
    phi1: np.ndarray
    I_lt: np.ndarray
    delta_xi: float
    xi1: float
    xi2: float
    norm: float
    window_mass: float
    window_warning: bool
    system: EffectiveSystem
    lta: LongTimeAmplitudes


def _longtime_modes(sys: EffectiveSystem, c0):
    """Mode table restricted to populated modes, with decay verified."""
    poles, weights, labels = mode_table(sys, c0)
    wscale = max(np.abs(weights).max(), 1e-300)
    keep = []
    for m in range(len(poles)):
        populated = np.abs(weights[m]).max() > 1e-14 * wscale
        if not populated:
            continue
        if sys.lambdas[labels[m][1]].imag >= -1e-14 * max(
            1.0, abs(sys.lambdas[labels[m][1]].real)
        ):
            raise NoLongTimeLimitError(
                "a populated eigenmode does not decay (Im Lambda >= 0); "
                "no long-time spectrum exists"
            )
        keep.append(m)
    return poles[keep], weights[keep], labels[keep]


def longtime_amplitudes(sys: EffectiveSystem, c0, e) -> LongTimeAmplitudes:
    """Evaluate the two stationary-envelope amplitude coefficients at e.

    Requires every populated eigenmode to decay; a non-decaying populated
    mode raises NoLongTimeLimitError.  alpha_L = 0 with a ground start
    populates nothing and legitimately yields zero amplitudes.
    """
    earr = np.atleast_1d(np.asarray(e, dtype=float))
    poles, weights, labels = _longtime_modes(sys, c0)
    d1 = np.zeros(earr.shape + (2,), dtype=complex)
    d2 = np.zeros(earr.shape + (2,), dtype=complex)
    for m in range(len(poles)):
        contrib = weights[m][None, :] / (earr[:, None] - poles[m])
        if labels[m][0] == 0:
            d1 += contrib
        else:
            d2 += contrib
    scalar = np.asarray(e).ndim == 0
    if scalar:
        return LongTimeAmplitudes(
            energies=earr[0], d_xi1=d1[0], d_xi2=d2[0], xi1=sys.xi1, xi2=sys.xi2
        )
    return LongTimeAmplitudes(
        energies=earr, d_xi1=d1, d_xi2=d2, xi1=sys.xi1, xi2=sys.xi2
    )


def longtime_spectrum_on_grid(sys: EffectiveSystem, c0, e) -> np.ndarray:
    """Unnormalized I^lt(E) on a grid (helper for referee comparisons)."""
    return longtime_amplitudes(sys, c0, e).total_intensity()


def decompose_intensity(lta: LongTimeAmplitudes):
    """Split the long-time amplitudes into (I_st0, I_st1, I_osc, phi0, phi1).

    I^st_j = |d^xi1_j|^2 + |d^xi2_j|^2, I^osc = 2|d^xi1_j||d^xi2_j| (equal
    for both j, enforced here), phi_j = arg(d^xi1_j conj(d^xi2_j)).
    """
    a1 = lta.d_xi1
    a2 = lta.d_xi2
    i_st = np.abs(a1) ** 2 + np.abs(a2) ** 2
    i_osc_both = 2.0 * np.abs(a1) * np.abs(a2)
    cross = a1 * np.conj(a2)
    phi = np.angle(cross)
    scale = max(float(i_st.max(initial=0.0)), 1e-300)
    mismatch = np.abs(i_osc_both[..., 0] - i_osc_both[..., 1]).max(initial=0.0)
    if mismatch > 1e-12 * scale:
        raise IonospecError(
            f"conditional oscillation magnitudes differ by {mismatch:.3e}; "
            "the amplitude orthogonality identity is violated"
        )
    return (
        i_st[..., 0],
        i_st[..., 1],
        i_osc_both[..., 0],
        phi[..., 0],
        phi[..., 1],
    )


def time_resolved_intensity(dec: SpectralDecomposition, e_index: int, t):
    """Conditional intensities (I^lt_0, I^lt_1) at grid point e_index.

    I^lt_j(E, t) = I^st_j(E) + I^osc(E) cos(delta_xi t - phi_j(E)); their
    sum is time independent and equals I_lt[e_index].
    """
    tarr = np.asarray(t, dtype=float)
    if np.any(tarr < 0):
        raise DomainError("t must be >= 0")
    i0 = dec.I_st0[e_index] + dec.I_osc[e_index] * np.cos(
        dec.delta_xi * tarr - dec.phi0[e_index]
    )
    i1 = dec.I_st1[e_index] + dec.I_osc[e_index] * np.cos(
        dec.delta_xi * tarr - dec.phi1[e_index]
    )
    return i0, i1


def pole_integral(poles: np.ndarray, weights: np.ndarray) -> float:
    """Exact full-line integral of sum_j |sum_m w_mj / (E - p_m)|^2.

    Valid for simple poles p_m strictly in the lower half-plane:
    each cross term integrates to 2*pi*i / (conj(p_m') - p_m).
    """
    poles = np.asarray(poles, dtype=complex)
    weights = np.asarray(weights, dtype=complex)
    if len(poles) == 0:
        return 0.0
    diff = np.conj(poles)[None, :] - poles[:, None]
    if np.abs(diff).min() < 1e-300:
        raise PoleError("coincident conjugate poles in the residue integral")
    kern = 2j * math.pi / diff
    val = np.einsum("mj,nj,mn->", weights, np.conj(weights), kern)
    if abs(val.imag) > 1e-9 * max(abs(val.real), 1.0):
        raise PoleError(f"residue integral not real: {val!r}")
    return float(val.real)


def residue_norm(sys: EffectiveSystem, c0) -> float:
    """Full-line integral of the raw I^lt via the residue formula."""
    poles, weights, _ = _longtime_modes(sys, c0)
    return pole_integral(poles, weights)


def quadrature_norm(sys: EffectiveSystem, c0) -> float:
    """Independent adaptive-quadrature evaluation of the same integral.

    Uses the substitution E = c + w tan(theta), which maps the full line to
    a finite interval while keeping both the Lorentzian peaks and the 1/E^2
    tails smooth; the residual beyond the clipped endpoints is added from
    the analytic tail coefficient.
    """
    from scipy.integrate import quad

    poles, weights, _ = _longtime_modes(sys, c0)
    if len(poles) == 0:
        return 0.0

    def intensity(en: float) -> float:
        amp = weights / (en - poles)[:, None]
        return float(np.sum(np.abs(amp.sum(axis=0)) ** 2))

    c_tail = float(np.sum(np.abs(weights.sum(axis=0)) ** 2))
    centers = np.sort(poles.real)
    center = float(centers.mean())
    width = max(
        float(np.abs(poles.imag).max()),
        0.5 * float(centers[-1] - centers[0]),
        1e-300,
    )

    def integrand(theta: float) -> float:
        ct = math.cos(theta)
        en = center + width * math.tan(theta)
        return intensity(en) * width / ct**2

    clip = 1e-9
    theta_max = math.pi / 2 - clip
    knots = sorted(math.atan((c - center) / width) for c in centers)
    knots = [-theta_max] + [k for k in knots if -theta_max < k < theta_max] + [
        theta_max
    ]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a < 1e-15:
            continue
        val, _ = quad(integrand, a, b, limit=500, epsabs=1e-12, epsrel=1e-11)
        total += val
    edge = width * math.tan(theta_max)
    total += c_tail / edge + c_tail / edge
    return total


def spectrum_grid(
    params,
    e_min: float | None = None,
    e_max: float | None = None,
    n_points: int = 2001,
    c0=GROUND,
    cross_check: bool = True,
) -> SpectralDecomposition:
    """Long-time spectral decomposition on a uniform energy grid.

    params may be NormalizedParams or PhysicalParams.  Defaults for the
    grid cover (E - E_a)/gamma_a in [-10, 10].  The intensities are
    normalized by the analytic full-line integral; when cross_check is
    true the residue value is verified against adaptive quadrature (1e-8).
    """
    if isinstance(params, NormalizedParams):
        phys = from_normalized(params)
        e_ref, g_ref = params.E_a, params.gamma_a
    elif isinstance(params, PhysicalParams):
        phys = params
        e_ref, g_ref = params.E_a, max(params.gamma_a, params.gamma_direct)
    else:
        raise DomainError(f"unsupported parameter object {type(params)!r}")
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    if g_ref <= 0:
        g_ref = 1.0
    if e_min is None:
        e_min = e_ref - 10.0 * g_ref
    if e_max is None:
        e_max = e_ref + 10.0 * g_ref
    if not e_min < e_max:
        raise DomainError(f"empty energy window [{e_min!r}, {e_max!r}]")

    sys = build_effective(phys)
    grid = np.linspace(e_min, e_max, n_points)
    lta = longtime_amplitudes(sys, c0, grid)
    i_st0, i_st1, i_osc, phi0, phi1 = decompose_intensity(lta)
    i_lt = i_st0 + i_st1

    norm = residue_norm(sys, c0)
    if norm <= 0.0:
        raise NoLongTimeLimitError("nothing is ionized at long times")
    if cross_check:
        qnorm = quadrature_norm(sys, c0)
        if abs(qnorm - norm) > 1e-8 * max(1.0, abs(norm)):
            raise IonospecError(
                f"normalization cross-check failed: residue {norm!r} "
                f"vs quadrature {qnorm!r}"
            )

    from scipy.integrate import simpson

    window_mass = float(simpson(i_lt, x=grid) / norm)
    return SpectralDecomposition(
        grid=grid,
        I_st0=i_st0 / norm,
        I_st1=i_st1 / norm,
        I_osc=i_osc / norm,
        phi0=phi0,
        phi1=phi1,
        I_lt=i_lt / norm,
        delta_xi=lta.delta_xi,
        xi1=sys.xi1,
        xi2=sys.xi2,
        norm=norm,
        window_mass=window_mass,
        window_warning=window_mass < 0.99,
        system=sys,
        lta=lta,
    )


@dataclass(frozen=True)
class PresetSpec:
    """One bundled figure preset: model flavor, parameters and grid."""

    name: str
    model: str  # "neighbor" | "fano"
    params: NormalizedParams
    omegas: tuple
    e_min: float
    e_max: float
    n_points: int = 2001


_PRESETS = {
    "fig2a": ("fano", NormalizedParams(q_b=100.0, gamma_b=1.0), (1.0, 2.0, 4.0)),
    "fig2b": ("neighbor", NormalizedParams(q_a=100.0, gamma_a=1.0), (1.0, 2.0, 4.0)),
    "fig3a": ("fano", NormalizedParams(q_b=1.0, gamma_b=1.0), (0.5, 1.0, 2.0)),
    "fig3b": ("neighbor", NormalizedParams(q_a=1.0, gamma_a=1.0), (0.5, 1.0, 2.0)),
    "fig4": (
        "neighbor",
        NormalizedParams(q_a=1.0, gamma_a=1.0, E_a=1.0, E_L=0.8),
        (2.0,),
    ),
    "fig5": (
        "neighbor",
        NormalizedParams(q_a=100.0, gamma_a=1e-4),
        (5e-5, 1e-4, 5e-4),
    ),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def figure_preset(name: str, omega: float | None = None) -> PresetSpec:
    """Parameters and default grid for one bundled figure.

    omega selects the pump variant; default is the strongest listed one.
    """
    if name not in _PRESETS:
        raise UnknownPresetError(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        )
    model, base, omegas = _PRESETS[name]
    if omega is None:
        omega = omegas[-1]
    params = replace(base, Omega=float(omega))
    if model == "fano":
        e_ref, g_ref = params.E_b, params.gamma_b
    else:
        e_ref, g_ref = params.E_a, params.gamma_a
    return PresetSpec(
        name=name,
        model=model,
        params=params,
        omegas=omegas,
        e_min=e_ref - 10.0 * g_ref,
        e_max=e_ref + 10.0 * g_ref,
    )


def find_peaks(x: np.ndarray, y: np.ndarray, rel_height: float = 0.01):
    """Local maxima of y(x) after 3-point smoothing, above rel_height*max.

    Returns (positions, heights) with parabolic sub-grid refinement.
    Intended for peak counting and location, not for height metrology.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 3:
        raise DomainError("need matching 1-d arrays of length >= 3")
    sm = y.copy()
    sm[1:-1] = (y[:-2] + y[1:-1] + y[2:]) / 3.0
    thresh = rel_height * sm.max()
    pos, height = [], []
    for i in range(1, len(x) - 1):
        if sm[i] > sm[i - 1] and sm[i] >= sm[i + 1] and sm[i] >= thresh:
            a, b, c = sm[i - 1], sm[i], sm[i + 1]
            denom = a - 2 * b + c
            shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
            shift = float(np.clip(shift, -0.5, 0.5))
            dx = x[i + 1] - x[i] if shift >= 0 else x[i] - x[i - 1]
            pos.append(x[i] + shift * dx)
            height.append(b - 0.25 * (a - c) * shift)
    return np.array(pos), np.array(height)
