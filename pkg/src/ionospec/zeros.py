"""Spectral zeros of the conditional ionization spectra.

Two families of zeros live in the long-time spectra of the
laser-driven ionization system with a two-level neighbor:

* Fano-like zeros: frequencies where a conditional spectrum vanishes
  identically, destroyed by detuning (the root moves into the complex
  plane) and, unlike a genuine Fano zero, surviving only in the
  weak-pump limit.

* Dynamical zeros: frequencies E_D where the oscillating part of a
  conditional spectrum momentarily cancels the stationary part, once
  per Rabi period.  The defining condition is

      |d_j^{xi_1}(E_D)| = |d_j^{xi_2}(E_D)|

  i.e. equal magnitudes of the two quasi-energy components of the
  long-time amplitude in channel j.

The weak-pump limit admits closed forms: a quintic in the normalized
frequency whose constant term always vanishes, collapsing for real q_a
to a cubic (resonant pumping), a pair of linear roots (non-resonant,
ground channel), and a quartic (non-resonant, excited channel).  The
numeric magnitude-matching solver is the ground truth against which
every closed form is checked; it makes no weak-pump assumption.

Sweeping the pump amplitude traces the zeros as branches E_D(Omega);
branches appear and disappear in pairs at fold points, and the whole
trace set is symmetric under Omega -> -Omega.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import (
    GROUND,
    NormalizedParams,
    PhysicalParams,
    build_effective,
    from_normalized,
)
from .errors import DomainError, IonospecError
from .spectra import _longtime_modes

__all__ = [
    "REALITY_BOUND",
    "ZeroProblem",
    "ZeroBranch",
    "PairEvent",
    "ZeroTrace",
    "SweepSpec",
    "SWEEP_PRESETS",
    "SWEEP_PRESET_NAMES",
    "fano_like_zero",
    "weak_resonant_zeros",
    "weak_offres_zeros_ground",
    "weak_offres_zeros_excited",
    "weak_resonant_quintic",
    "find_dynamical_zeros",
    "sweep_zero_traces",
    "sweep_preset",
    "poly_roots",
]

REALITY_BOUND = 1.0 / (2.0 * math.sqrt(2.0))  # |q_a| above this: quadratic pair complex


def _phys(params) -> PhysicalParams:
    if isinstance(params, NormalizedParams):
        return from_normalized(params)
    if isinstance(params, PhysicalParams):
        return params
    raise DomainError(f"expected parameter set, got {type(params).__name__}")


def _q_a_real(phys: PhysicalParams) -> float:
    """Asymmetry q_a = mu_a / (pi mu J); must come out real."""
    den = math.pi * phys.mu * phys.J
    if den == 0:
        raise DomainError("q_a undefined: mu J = 0")
    q = complex(phys.mu_a) / den
    if abs(q.imag) > 1e-9 * max(abs(q), 1.0):
        raise DomainError(f"complex asymmetry q_a = {q!r}; closed forms need real q_a")
    return q.real


@dataclass(frozen=True)
class ZeroProblem:
    """Normalized view of a zero-finding task for one conditional spectrum.

    Collects the dimensionless combinations the closed forms are written
    in: p_a = 1/q_a and delta_E_a_bar = (E_a - E_L)/gamma_a.  Frequencies
    are reported on the (E - E_a)/gamma_a axis; from_axis/to_axis convert.
    """

    params: NormalizedParams
    spectrum_index: int = 0

    def __post_init__(self):
        if self.spectrum_index not in (0, 1):
            raise DomainError(f"spectrum_index must be 0 or 1, got {self.spectrum_index}")
        if self.params.gamma_a <= 0:
            raise DomainError("gamma_a > 0 required for zero analysis")

    @property
    def p_a(self) -> float:
        if self.params.q_a == 0:
            raise DomainError("p_a = 1/q_a undefined for q_a = 0")
        return 1.0 / self.params.q_a

    @property
    def delta_E_a_bar(self) -> float:
        return (self.params.E_a - self.params.E_L) / self.params.gamma_a

    @property
    def resonant(self) -> bool:
        return self.params.E_a == self.params.E_L

    def to_axis(self, energy: float) -> float:
        return (energy - self.params.E_a) / self.params.gamma_a

    def from_axis(self, value: float) -> float:
        return self.params.E_a + self.params.gamma_a * value


def fano_like_zero(params):
    """Weak-pump zero of the ground-channel spectrum, as (E - E_a)/gamma_a.

    Resonant pumping puts it at -q_a on the real axis.  Any detuning
    pushes it off the axis: the return value is then complex with
    imaginary part Delta_E_a/(q_a gamma_a), meaning no real zero exists.
    Exact only as the pump amplitude tends to zero.
    """
    phys = _phys(params)
    if phys.gamma_a <= 0:
        raise DomainError("gamma_a > 0 required")
    q_a = _q_a_real(phys)
    if q_a == 0:
        raise DomainError("q_a = 0: no indirect path, no interference zero")
    if phys.delta_E_a == 0:
        return float(-q_a)
    d = phys.delta_E_a / phys.gamma_a
    return complex(-q_a - 2.0 * d, d / q_a)


def weak_resonant_zeros(q_a: float) -> np.ndarray:
    """Dynamical-zero frequencies (E_D - E_a)/gamma_a at resonant weak pump.

    Always {0, -q_a}; for |q_a| <= 1/(2 sqrt 2) additionally the real pair
    1/(4 q_a) +- (1/4) sqrt(1/q_a^2 - 8).  Both conditional spectra share
    the same set.  A double root at the reality boundary is listed twice.
    """
    if q_a == 0:
        raise DomainError("q_a = 0: zero structure degenerates")
    roots = [0.0, -float(q_a)]
    disc = 1.0 / q_a**2 - 8.0
    if disc >= 0.0:
        s = 0.25 * math.sqrt(disc)
        roots += [1.0 / (4.0 * q_a) - s, 1.0 / (4.0 * q_a) + s]
    return np.sort(np.array(roots))


def weak_offres_zeros_ground(params) -> np.ndarray:
    """Ground-channel dynamical zeros at non-resonant weak pump.

    Two frequencies on the (E_D - E_a)/gamma_a axis: {-q_a, -2 Delta_E_a/gamma_a}.
    Continuous in the detuning; at resonance the second root joins the
    resonant set's root at 0.
    """
    phys = _phys(params)
    if phys.gamma_a <= 0:
        raise DomainError("gamma_a > 0 required")
    q_a = _q_a_real(phys)
    if q_a == 0:
        raise DomainError("q_a = 0: zero structure degenerates")
    return np.sort(np.array([-q_a, -2.0 * phys.delta_E_a / phys.gamma_a]))


def weak_offres_zeros_excited(params) -> np.ndarray:
    """Excited-channel dynamical zeros at non-resonant weak pump.

    Real roots of a quartic in the pump-referenced frequency
    (E_D - E_L)/gamma_a with real q_a and d = Delta_E_a/gamma_a:

        [4 q_a - d/q_a^2] x^4 + [-2 + 4 q_a^2 + 2 d^2/q_a^2] x^3
        - [(3 + 1/q_a^2) d + 4 q_a d^2 + d^3/q_a^2] x^2
        + [2 q_a^2 - 2 q_a d] x + [q_a^2 d - 2 q_a d^2 + d^3] = 0.

    The sign of the d/q_a^2 term in the leading coefficient is fixed by
    the numeric magnitude-matching solver: with it, every real root is
    recovered by find_dynamical_zeros as the pump tends to zero (checked
    across q_a in [0.5, 3], d in [-0.3, 0.3] to a 1e-11 coefficient
    residual).  Returns 0, 2, or 4 values, converted to the
    (E_D - E_a)/gamma_a axis and sorted.  A vanishing leading coefficient
    drops the degree instead of failing.
    """
    phys = _phys(params)
    if phys.gamma_a <= 0:
        raise DomainError("gamma_a > 0 required")
    q = _q_a_real(phys)
    if q == 0:
        raise DomainError("q_a = 0: zero structure degenerates")
    d = phys.delta_E_a / phys.gamma_a
    coeffs = [
        4.0 * q - d / q**2,
        -2.0 + 4.0 * q**2 + 2.0 * d**2 / q**2,
        -((3.0 + 1.0 / q**2) * d + 4.0 * q * d**2 + d**3 / q**2),
        2.0 * q**2 - 2.0 * q * d,
        q**2 * d - 2.0 * q * d**2 + d**3,
    ]
    roots = poly_roots(coeffs)
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real)
    # quartic variable is referenced to the pump energy; report on the E_a axis
    return real - d


def weak_resonant_quintic(p_a: complex) -> list:
    """Coefficients of the weak-pump resonant zero condition, highest first.

    Quintic in (E - E_L)/gamma_a with p_a = 1/q_a allowed complex:

        [|p|^2 Im p] x^5 + [-2 Re p + Im p^2] x^4
        + [|p|^2 + |p|^2 Im p - 2] x^3 + [Im p^2] x^2 - x + 0.

    The constant term vanishes identically, so x = 0 is always a root.
    For real p_a the x^5 and x^2 coefficients vanish too and factoring
    out the zero root leaves a cubic equivalent to the resonant closed
    form.
    """
    p = complex(p_a)
    return [
        abs(p) ** 2 * p.imag,
        -2.0 * p.real + (p * p).imag,
        abs(p) ** 2 + abs(p) ** 2 * p.imag - 2.0,
        (p * p).imag,
        -1.0,
        0.0,
    ]


def poly_roots(coeffs) -> np.ndarray:
    """All roots of a polynomial given coefficients, highest degree first.

    Strips leading coefficients below 1e-14 of the largest magnitude
    (degree drop), solves via the companion matrix, polishes any root
    whose residual exceeds 1e-9 * max|c| * max(1, |r|)^deg with Newton
    steps, and fails loudly if a residual still violates the bound.
    """
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.size == 0 or not np.any(c != 0):
        raise DomainError("zero polynomial has no well-defined roots")
    cmax = np.abs(c).max()
    lead = 0
    while lead < c.size and abs(c[lead]) < 1e-14 * cmax:
        lead += 1
    c = c[lead:]
    if c.size < 2:
        raise DomainError("constant polynomial has no roots")
    deg = c.size - 1
    roots = np.roots(c)
    dc = c[:-1] * np.arange(deg, 0, -1)

    def resid(r):
        return np.abs(np.polyval(c, r))

    bound = 1e-9 * cmax * np.maximum(1.0, np.abs(roots)) ** deg
    bad = resid(roots) > bound
    for _ in range(50):
        if not bad.any():
            break
        dp = np.polyval(dc, roots[bad])
        step = np.where(dp != 0, np.polyval(c, roots[bad]) / np.where(dp == 0, 1, dp), 0)
        roots[bad] = roots[bad] - step
        bound = 1e-9 * cmax * np.maximum(1.0, np.abs(roots)) ** deg
        bad = resid(roots) > bound
    if bad.any():
        raise IonospecError(
            f"root polishing failed: residuals {resid(roots[bad])!r} exceed bound"
        )
    return roots


def _channel_modes(sys, j: int):
    """Poles and channel-j weights of the two quasi-energy components."""
    poles, weights, labels = _longtime_modes(sys, GROUND)
    k = labels[:, 0]
    return (
        poles[k == 0],
        weights[k == 0, j],
        poles[k == 1],
        weights[k == 1, j],
    )


def find_dynamical_zeros(params, j: int = 0, e_range=None, n_scan: int = 4001) -> np.ndarray:
    """Numerically locate all dynamical zeros of conditional spectrum j.

    Solves |d_j^{xi_1}(E)| = |d_j^{xi_2}(E)| with no weak-pump assumption:
    scans n_scan points of e_range for sign changes of the magnitude
    difference, refines each bracket to |dE| < 1e-10 gamma_a, and
    additionally picks up tangential zeros as local minima of the
    magnitude difference below 1e-9 of its scan-wide scale.

    e_range defaults to E_a +- 12 gamma_a, widened automatically so that
    every weak-pump closed-form root lies inside with margin.  Returns
    absolute energies E_D, sorted; an empty array is a valid outcome.
    """
    if j not in (0, 1):
        raise DomainError(f"spectrum index must be 0 or 1, got {j}")
    phys = _phys(params)
    gamma = phys.gamma_a
    if gamma <= 0:
        raise DomainError("gamma_a > 0 required")
    if phys.alpha_L == 0:
        raise DomainError("pump amplitude is zero: spectra vanish identically")
    sys = build_effective(phys)

    if e_range is None:
        lo = phys.E_a - 12.0 * gamma
        hi = phys.E_a + 12.0 * gamma
        try:
            if phys.delta_E_a == 0:
                cands = weak_resonant_zeros(_q_a_real(phys))
            elif j == 0:
                cands = weak_offres_zeros_ground(phys)
            else:
                cands = weak_offres_zeros_excited(phys)
            for c in cands:
                lo = min(lo, phys.E_a + gamma * c - 2.0 * gamma)
                hi = max(hi, phys.E_a + gamma * c + 2.0 * gamma)
        except DomainError:
            pass
    else:
        lo, hi = float(e_range[0]), float(e_range[1])
        if not hi > lo:
            raise DomainError(f"empty energy range ({lo}, {hi})")

    p1, w1, p2, w2 = _channel_modes(sys, j)

    def rdiff(e):
        a1 = (w1 / (e - p1)).sum()
        a2 = (w2 / (e - p2)).sum()
        return abs(a1) - abs(a2)

    grid = np.linspace(lo, hi, n_scan)
    a1 = (w1[None, :] / (grid[:, None] - p1[None, :])).sum(axis=1)
    a2 = (w2[None, :] / (grid[:, None] - p2[None, :])).sum(axis=1)
    rvals = np.abs(a1) - np.abs(a2)
    scale = max(float((np.abs(a1) + np.abs(a2)).max()), 1e-300)

    found = []
    crossing_cells = set()
    for i in np.nonzero(rvals[:-1] * rvals[1:] < 0)[0]:
        root = brentq(rdiff, grid[i], grid[i + 1], xtol=1e-10 * gamma, rtol=8.9e-16)
        found.append(root)
        crossing_cells.update((i - 1, i, i + 1))
    for i in np.nonzero(rvals == 0.0)[0]:
        found.append(grid[i])
        crossing_cells.update((i - 1, i, i + 1))

    def refine_window(lo_w, hi_w, depth):
        # catch sign-change pairs narrower than the scan step: zoom on the
        # local minimum of |R|, recentering each level so the window may
        # drift, until a bracket appears or the window is below tolerance
        g = np.linspace(lo_w, hi_w, 241)
        v = np.array([rdiff(x) for x in g])
        hits = []
        for ii in np.nonzero(v[:-1] * v[1:] < 0)[0]:
            hits.append(
                brentq(rdiff, g[ii], g[ii + 1], xtol=1e-10 * gamma, rtol=8.9e-16)
            )
        if hits:
            return hits
        im = int(np.argmin(np.abs(v)))
        if depth >= 10 or (hi_w - lo_w) < 1e-10 * gamma:
            if abs(v[im]) < 1e-9 * scale:
                res = minimize_scalar(
                    lambda e: abs(rdiff(e)),
                    bounds=(g[max(im - 1, 0)], g[min(im + 1, 240)]),
                    method="bounded",
                    options={"xatol": 1e-12 * gamma},
                )
                if res.fun < 1e-9 * scale:
                    return [float(res.x)]
            return []
        step = g[1] - g[0]
        lo2 = max(lo, g[im] - 3.0 * step)
        hi2 = min(hi, g[im] + 3.0 * step)
        return refine_window(lo2, hi2, depth + 1)

    # sub-grid features sit only where one component is narrow: a dip at a
    # near-real numerator root z, or a peak at a near-real pole p.  Either
    # crosses the other component's background B at a distance set by the
    # local linearization, which fixes the window half-width analytically.
    step0 = grid[1] - grid[0]

    def amp_mag(e, pp, ww):
        return abs((ww / (e - pp)).sum())

    windows = []
    for (pp, ww), (po, wo) in (((p1, w1), (p2, w2)), ((p2, w2), (p1, w1))):
        if len(pp) != 2:
            continue
        wsum = ww.sum()
        if abs(wsum) > 1e-300:
            z = (ww[0] * pp[1] + ww[1] * pp[0]) / wsum
            if lo <= z.real <= hi:
                bg = amp_mag(z.real, po, wo)
                den = abs(z.real - pp[0]) * abs(z.real - pp[1])
                est = bg * den / abs(wsum)
                windows.append((z.real, max(est, abs(z.imag), 1e-9 * gamma)))
        for pm, wm in zip(pp, ww):
            if abs(pm.imag) < step0 and lo <= pm.real <= hi and wm != 0:
                bg = max(amp_mag(pm.real, po, wo), 1e-300)
                est = abs(wm) / bg
                halfscale = min(max(est, abs(pm.imag)), 3.0 * step0)
                windows.append((pm.real, halfscale))
    for center, halfscale in windows:
        halfw = 12.0 * halfscale
        found.extend(
            refine_window(max(lo, center - halfw), min(hi, center + halfw), 0)
        )

    absr = np.abs(rvals)
    minima = [
        i
        for i in range(1, n_scan - 1)
        if i not in crossing_cells
        and absr[i] <= absr[i - 1]
        and absr[i] <= absr[i + 1]
        and absr[i] < 2e-2 * scale
    ]
    minima.sort(key=lambda i: absr[i])
    for i in minima[:64]:
        found.extend(refine_window(grid[i - 1], grid[i + 1], 0))

    if not found:
        return np.empty(0)
    found = np.sort(np.array(found))
    keep = [found[0]]
    for x in found[1:]:
        if x - keep[-1] > 1e-8 * gamma:
            keep.append(x)
    return np.array(keep)


@dataclass(frozen=True)
class ZeroBranch:
    """One continuously tracked zero: E_D(omega) over part of the sweep."""

    omega: np.ndarray
    E_D: np.ndarray
    spectrum_index: int


@dataclass(frozen=True)
class PairEvent:
    """Branch-count change: a fold where zeros appear or vanish in pairs.

    kind is "creation", "annihilation", or "edge" when a single branch
    enters or leaves the scanned energy window instead of folding.
    """

    omega: float
    E_D: float
    kind: str


@dataclass(frozen=True)
class ZeroTrace:
    """Assembled sweep result: all branches and pair events for one channel."""

    omega: np.ndarray
    branches: list
    events: list
    spectrum_index: int

    def branch_count(self, omega: float) -> int:
        n = 0
        for b in self.branches:
            if b.omega[0] <= omega <= b.omega[-1]:
                n += 1
        return n


def _worker_count() -> int:
    env = os.environ.get("IONOSPEC_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"IONOSPEC_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise DomainError(f"IONOSPEC_THREADS must be >= 1, got {n}")
        return n
    return min(8, os.cpu_count() or 1)


def sweep_zero_traces(params, omega_grid, j: int = 0, e_range=None) -> ZeroTrace:
    """Trace dynamical zeros of channel j across pump amplitudes.

    Runs find_dynamical_zeros at every omega (in parallel, capped by
    IONOSPEC_THREADS), bisects in omega wherever the zero count changes
    (fold localization, minimum step 1e-5), and assembles branches by
    nearest-neighbor continuation in E_D.  Ties go to the smallest jump.
    Zeros appearing or vanishing between the sweep boundaries are paired
    into creation and annihilation events; unpaired leftovers (window
    edge crossings) become edge events.  Branches alive at the first or
    last omega are boundary conditions, not events.
    """
    if j not in (0, 1):
        raise DomainError(f"spectrum index must be 0 or 1, got {j}")
    base = params if isinstance(params, NormalizedParams) else None
    if base is None:
        raise DomainError("sweep needs a normalized parameter template")
    omegas = np.asarray(omega_grid, dtype=float)
    if omegas.ndim != 1 or omegas.size < 2:
        raise DomainError("omega_grid must be a 1-D array with at least 2 points")
    if not np.all(np.diff(omegas) > 0):
        raise DomainError("omega_grid must be strictly ascending")
    if np.any(omegas == 0.0):
        raise DomainError("omega_grid must not contain 0 (spectra vanish)")
    gamma = base.gamma_a

    def at(om: float) -> np.ndarray:
        p = NormalizedParams(
            q_a=base.q_a, gamma_a=base.gamma_a, q_b=base.q_b, gamma_b=base.gamma_b,
            Omega=om, E_a=base.E_a, E_b=base.E_b, E_L=base.E_L,
        )
        return find_dynamical_zeros(p, j=j, e_range=e_range)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        coarse = list(pool.map(at, omegas))

    # localize every count change to a 1e-5-wide omega interval
    seq = [(float(om), zs) for om, zs in zip(omegas, coarse)]
    refined = [seq[0]]
    for right in seq[1:]:
        left = refined[-1]
        stack = [(left, right)]
        segment = []
        while stack:
            (om_a, za), (om_b, zb) = stack.pop()
            if len(za) == len(zb) or om_b - om_a <= 1e-5:
                segment.append((om_b, zb))
                continue
            om_m = 0.5 * (om_a + om_b)
            zm = at(om_m)
            # keep sub-intervals ordered: right half first onto the stack
            stack.append(((om_m, zm), (om_b, zb)))
            stack.append(((om_a, za), (om_m, zm)))
        segment.sort(key=lambda t: t[0])
        refined.extend(segment)

    # continuation: greedy nearest-in-E_D matching with per-branch allowance
    active = []  # dicts: oms, eds
    closed = []
    raw_born = []  # (omega, E_D) of zeros appearing after the sweep start
    raw_died = []  # (omega, E_D) of branches losing their zero before the end

    def allowance(br) -> float:
        base_tol = 0.25 * gamma
        if len(br["eds"]) >= 2:
            return max(base_tol, 6.0 * abs(br["eds"][-1] - br["eds"][-2]) + 1e-3 * gamma)
        return base_tol

    first_om = refined[0][0]
    for om, zs in refined:
        pairs = []
        for bi, br in enumerate(active):
            for zi, z in enumerate(zs):
                d = abs(z - br["eds"][-1])
                if d <= allowance(br):
                    pairs.append((d, bi, zi))
        pairs.sort(key=lambda t: t[0])
        used_b, used_z = set(), set()
        for d, bi, zi in pairs:
            if bi in used_b or zi in used_z:
                continue
            used_b.add(bi)
            used_z.add(zi)
            active[bi]["oms"].append(om)
            active[bi]["eds"].append(zs[zi])
        for zi in range(len(zs)):
            if zi not in used_z:
                active.append({"oms": [om], "eds": [zs[zi]]})
                if om != first_om:
                    raw_born.append((om, float(zs[zi])))
        for bi in sorted(
            (bi for bi in range(len(active)) if bi not in used_b and active[bi]["oms"][-1] != om),
            reverse=True,
        ):
            br = active.pop(bi)
            raw_died.append((om, br["eds"][-1]))
            closed.append(br)

    closed.extend(active)

    # Births and deaths pair into fold events when adjacent in omega and
    # E_D.  A fold crossing the solver's tangential sliver splits one
    # count change into two a few bisection steps apart, so a small omega
    # mismatch is tolerated; branches alive at a sweep boundary are not
    # events at all, and unpaired leftovers (window-edge crossings) are
    # recorded as edge events.
    events = []
    for raw, kind in ((raw_born, "creation"), (raw_died, "annihilation")):
        raw = sorted(raw)
        used = [False] * len(raw)
        for i in range(len(raw)):
            if used[i]:
                continue
            best = None
            for k in range(i + 1, len(raw)):
                if used[k]:
                    continue
                if raw[k][0] - raw[i][0] > 1.2e-4:
                    break
                d = abs(raw[k][1] - raw[i][1])
                if d <= 1.0 * gamma and (best is None or d < best[0]):
                    best = (d, k)
            used[i] = True
            if best is not None:
                k = best[1]
                used[k] = True
                events.append(
                    PairEvent(
                        omega=0.5 * (raw[i][0] + raw[k][0]),
                        E_D=0.5 * (raw[i][1] + raw[k][1]),
                        kind=kind,
                    )
                )
            else:
                events.append(PairEvent(omega=raw[i][0], E_D=raw[i][1], kind="edge"))
    events.sort(key=lambda ev: (ev.omega, ev.E_D))
    branches = [
        ZeroBranch(
            omega=np.array(br["oms"]), E_D=np.array(br["eds"]), spectrum_index=j
        )
        for br in closed
        if len(br["oms"]) >= 2
    ]
    branches.sort(key=lambda b: (b.omega[0], b.E_D[0]))
    all_oms = np.array(sorted({om for om, _ in refined}))
    return ZeroTrace(omega=all_oms, branches=branches, events=events, spectrum_index=j)


@dataclass(frozen=True)
class SweepSpec:
    """Named sweep configuration: parameter template, channels, pump grid."""

    name: str
    params: NormalizedParams
    js: tuple
    omegas: np.ndarray = field(
        default_factory=lambda: np.arange(0.02, 2.0 + 1e-12, 0.02)
    )


SWEEP_PRESETS = {
    "fig6a": SweepSpec(
        name="fig6a",
        params=NormalizedParams(q_a=0.1, gamma_a=1.0, E_a=1.0, E_L=1.0),
        js=(0,),
    ),
    "fig6b": SweepSpec(
        name="fig6b",
        params=NormalizedParams(q_a=1.0, gamma_a=1.0, E_a=1.0, E_L=1.0),
        js=(0,),
    ),
    "fig6c": SweepSpec(
        name="fig6c",
        params=NormalizedParams(q_a=3.0, gamma_a=1.0, E_a=1.0, E_L=1.0),
        js=(0,),
    ),
    "fig7a": SweepSpec(
        name="fig7a",
        params=NormalizedParams(q_a=1.0, gamma_a=1.0, E_a=1.0, E_L=0.8),
        js=(0, 1),
    ),
    "fig7b": SweepSpec(
        name="fig7b",
        params=NormalizedParams(q_a=1.0, gamma_a=1.0, E_a=1.0, E_L=1.1),
        js=(0, 1),
    ),
}

SWEEP_PRESET_NAMES = tuple(sorted(SWEEP_PRESETS))


def sweep_preset(name: str) -> SweepSpec:
    from .errors import UnknownPresetError

    try:
        return SWEEP_PRESETS[name]
    except KeyError:
        raise UnknownPresetError(
            f"unknown sweep preset {name!r}; choose from {', '.join(SWEEP_PRESET_NAMES)}"
        )
