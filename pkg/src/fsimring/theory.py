"""Closed-form dispersion of n-photon bound states of the fSim brickwork.

All quasi-energies are per cycle and reduced to (-pi, pi]; momenta are in
rad/site. The band has the one-particle functional form

    cos(E(k) - chi) = cos^2(alpha) - sin^2(alpha) cos(k)

with photon-number-dependent alpha and chi built from the rapidity eta.
The interaction regime splits at phi = 2*theta: for phi > 2*theta (strong
interaction) bound states exist at every momentum; for phi < 2*theta only
near the zone edge, and the hyperbolic functions of eta become circular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAPPED = "gapped"
GAPLESS = "gapless"

ARCCOS_CLAMP = 1e-12


def wrap_angle(x):
    """Reduce angle(s) to (-pi, pi]."""
    return -(np.mod(-np.asarray(x) + np.pi, 2 * np.pi) - np.pi)


def flux_quantum(n_sites: int) -> float:
    """Total flux that shifts every per-bond hopping phase by 2*pi."""
    return 2 * np.pi * n_sites


def rapidity(theta: float, phi: float) -> tuple[float, str]:
    """Rapidity eta and interaction regime for one gate-angle pair.

    Gapped (phi > 2*theta): sinh^2(eta) = (cos^2 th - cos^2(phi/2)) / sin^2 th.
    Gapless (phi < 2*theta): same with sinh -> sin, eta in (0, pi/2].
    """
    if not (0 < theta < np.pi / 2):
        raise ValueError("theta must lie in (0, pi/2)")
    if not (0 < phi < np.pi):
        raise ValueError("phi must lie in (0, pi)")
    num = np.cos(theta) ** 2 - np.cos(phi / 2) ** 2
    if num == 0.0:
        raise ValueError("phi = 2*theta is the degenerate regime boundary (eta = 0)")
    if num > 0:
        return float(np.arcsinh(np.sqrt(num) / np.sin(theta))), GAPPED
    return float(np.arcsin(np.sqrt(-num) / np.sin(theta))), GAPLESS


@dataclass(frozen=True)
class DispersionParams:
    """Band parameters of the n-photon bound state at one gate-angle pair."""

    n_ph: int
    theta: float
    phi: float
    regime: str
    eta: float
    alpha: float
    chi: float


def dispersion_params(n_ph: int, theta: float, phi: float) -> DispersionParams:
    """Effective hopping angle alpha and offset chi for the n-photon band.

    n_ph = 1 reduces to alpha = theta, chi = 0 independently of phi.
    """
    if n_ph < 1:
        raise ValueError("n_ph must be >= 1")
    if n_ph == 1:
        # regime still reported for downstream consumers
        try:
            eta, regime = rapidity(theta, phi)
        except ValueError:
            eta, regime = 0.0, GAPPED
        return DispersionParams(1, theta, phi, regime, eta, alpha=theta, chi=0.0)
    eta, regime = rapidity(theta, phi)
    n = n_ph
    if regime == GAPPED:
        chi = n * phi - 2 * np.arctan(np.tan(phi / 2) * np.tanh(eta) / np.tanh(n * eta))
        cos2a = (np.cos(theta) ** 2 * np.sinh(n * eta) ** 2) / (
            np.cos(theta) ** 2 * np.sinh(n * eta) ** 2
            + np.sin(theta) ** 2 * np.sinh(eta) ** 2
        )
    else:
        chi = n * phi - 2 * np.arctan(np.tan(phi / 2) * np.tan(eta) / np.tan(n * eta))
        cos2a = (np.cos(theta) ** 2 * np.sin(n * eta) ** 2) / (
            np.cos(theta) ** 2 * np.sin(n * eta) ** 2
            + np.sin(theta) ** 2 * np.sin(eta) ** 2
        )
    alpha = float(np.arccos(np.sqrt(np.clip(cos2a, 0.0, 1.0))))
    return DispersionParams(n_ph, theta, phi, regime, float(eta), alpha, float(chi))


def _band_argument(k, dp: DispersionParams):
    x = np.cos(dp.alpha) ** 2 - np.sin(dp.alpha) ** 2 * np.cos(k)
    over = np.max(np.abs(np.asarray(x, dtype=float))) - 1.0
    if over > ARCCOS_CLAMP:
        raise ValueError(f"band argument outside [-1, 1] by {over:.3e}")
    return np.clip(x, -1.0, 1.0)


def quasi_energy(k, dp: DispersionParams):
    """Both quasi-energy branches E+- = chi +- arccos(...) at momentum k,
    each reduced to (-pi, pi]. Accepts scalars or arrays."""
    x = _band_argument(k, dp)
    e = np.arccos(x)
    return wrap_angle(dp.chi + e), wrap_angle(dp.chi - e)


def group_velocity(k, dp: DispersionParams):
    """dE/dk of the upper branch in sites/cycle: -sin^2(a) sin k / sin(E - chi)."""
    x = _band_argument(k, dp)
    s = np.sqrt(1.0 - np.asarray(x) ** 2)
    if np.any(s < 1e-9):
        raise ValueError("group velocity is singular at the band edge")
    return -np.sin(dp.alpha) ** 2 * np.sin(k) / s


def max_group_velocity(dp: DispersionParams) -> float:
    """Propagation speed of the fastest visible wavefront, sin^2(a)/sqrt(1-cos^4 a),
    reached by the k = pi/2 components of the band."""
    c4 = np.cos(dp.alpha) ** 4
    if c4 >= 1.0:
        return 0.0
    return float(np.sin(dp.alpha) ** 2 / np.sqrt(1.0 - c4))


def band_width(dp: DispersionParams, n_grid: int = 2001) -> float:
    """Spread max_k E+ - min_k E+ on a dense grid (equals 2*alpha analytically)."""
    k = np.linspace(-np.pi, np.pi, n_grid)
    e = dp.chi + np.arccos(_band_argument(k, dp))  # unwrapped branch
    return float(e.max() - e.min())


def gapless_threshold(dp: DispersionParams) -> tuple[float, float]:
    """Momentum threshold 2*n_ph*eta bounding the bound-state window in the
    weak-interaction regime; returned raw and reduced to (-pi, pi]."""
    if dp.regime != GAPLESS:
        raise ValueError("threshold momentum exists only in the gapless regime")
    raw = 2.0 * dp.n_ph * dp.eta
    return raw, float(wrap_angle(raw))


def flux_shift(n_ph: int, flux: float, n_sites: int) -> float:
    """Momentum shift n_ph * flux / N of an n_ph-photon band, in (-pi, pi]."""
    return float(wrap_angle(n_ph * flux / n_sites))


@dataclass(frozen=True)
class Band:
    k_grid: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray


def build_band(dp: DispersionParams, n_k: int = 241) -> Band:
    k = np.linspace(-np.pi, np.pi, n_k)
    ep, em = quasi_energy(k, dp)
    return Band(k_grid=k, e_plus=ep, e_minus=em)


# ---------------------------------------------------------------------------
# map between the dispersion and the correlator transform coordinates

def correlator_peak_energies(k, dp: DispersionParams):
    """Quasi-energy branches as they appear in the correlator power spectrum
    at transform momentum k.

    The brickwork has a two-site unit cell, so the window-index transform
    momentum k corresponds to dispersion argument 2k; and the correlator
    conjugates the evolving amplitude against the static vacuum, mirroring
    the sign of the accumulated phase. Peaks therefore sit at -E(2k) for
    both branches.
    """
    ep, em = quasi_energy(np.asarray(k) * 2.0, dp)
    return wrap_angle(-ep), wrap_angle(-em)


def correlator_band_window(dp: DispersionParams, margin: float = 0.5) -> tuple[float, float]:
    """(center, halfwidth) of the energy window containing the observed band:
    the band spans -[chi, chi + 2 alpha], padded by `margin` rad."""
    center = float(wrap_angle(-(dp.chi + dp.alpha)))
    return center, float(dp.alpha + margin)
