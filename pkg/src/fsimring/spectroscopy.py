"""Many-body spectroscopy: vacuum-coupling correlators, their space-time
power spectra, flux-induced momentum shifts, and ringdown fits.

The protocol prepares a window of adjacent sites in |+>, evolves under the
cycle, and records the non-Hermitian window correlator

    C[j][t] = conj(amp of the window-occupied pattern) * (vacuum amp),

which is exact (no sampling) because the window operator couples only the
n-photon manifold to the vacuum when no higher sector is populated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .engine import (
    CircuitSpec,
    NoiseModel,
    SectorState,
    apply_noise,
    floquet_cycle,
    get_basis,
)
from .errors import ExtractionError, FitError
from .sectors import block_mask
from .theory import wrap_angle


def prepare_plus_window(n_sites: int, j0: int, n_ph: int) -> SectorState:
    """Product state with sites j0..j0+n_ph-1 (cyclic) in (|0>+|1>)/sqrt(2),
    the rest empty; spans sectors 0..n_ph with amplitude 2^(-n_ph/2) on every
    pattern supported inside the window."""
    if not 0 <= n_ph <= n_sites:
        raise ValueError("window size must lie in [0, N]")
    window = [(j0 + a) % n_sites for a in range(n_ph)]
    amp = 2.0 ** (-n_ph / 2.0)
    amplitudes = {}
    for m in range(n_ph + 1):
        basis = get_basis(n_sites, m)
        vec = np.zeros(len(basis), dtype=complex)
        for sites in combinations(window, m):
            mask = 0
            for s in sites:
                mask |= 1 << s
            vec[basis.rank(mask)] = amp
        amplitudes[m] = vec
    return SectorState(n_sites, amplitudes)


def correlator(state: SectorState, j: int, n_ph: int) -> complex:
    """Window correlator at window start j: exact amplitude product."""
    high = [m for m in state.sectors if m > n_ph]
    if high:
        raise ValueError(
            f"state populates sector(s) {high}; windows of {n_ph} photons would "
            "couple them to lower manifolds, the two-amplitude form is not exact"
        )
    vac = state.amplitudes.get(0)
    vac_amp = complex(vac[0]) if vac is not None else 0.0
    top = state.amplitudes.get(n_ph)
    if top is None:
        return 0.0
    mask = block_mask(state.n_sites, j % state.n_sites, n_ph)
    basis = get_basis(state.n_sites, n_ph)
    return complex(np.conj(top[basis.rank(mask)]) * vac_amp)


@dataclass
class CorrelatorSeries:
    n_sites: int
    n_ph: int
    values: np.ndarray  # complex, shape (N, T): window start x cycle


def time_series(
    spec: CircuitSpec,
    n_ph: int,
    cycles: int,
    j0: int = 0,
    noise: NoiseModel | None = None,
    rng: np.random.Generator | None = None,
    n_trajectories: int = 1,
) -> CorrelatorSeries:
    """Correlator matrix C[j][t] for t = 0..cycles-1 from one preparation
    window at j0. With a dephasing noise model the correlator is averaged
    over `n_trajectories` stochastic runs."""
    if cycles < 2:
        raise ValueError("need at least 2 cycles")
    n = spec.n_sites
    if noise is None or noise.is_trivial:
        n_trajectories = 1
    elif rng is None:
        raise ValueError("noisy runs need an rng")
    acc = np.zeros((n, cycles), dtype=complex)
    for traj in range(n_trajectories):
        state = prepare_plus_window(n, j0, n_ph)
        for t in range(cycles):
            for j in range(n):
                acc[j, t] += correlator(state, j, n_ph)
            if t + 1 < cycles:
                state = floquet_cycle(state, spec)
                if noise is not None and not noise.is_trivial:
                    state = apply_noise(state, noise, rng)
                    if state is None:
                        raise ValueError("amplitude damping is not usable in spectroscopy")
    return CorrelatorSeries(n_sites=n, n_ph=n_ph, values=acc / n_trajectories)


# ---------------------------------------------------------------------------
# transforms


def _centered(freqs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort DFT frequencies into ascending order on (-pi, pi]."""
    wrapped = wrap_angle(freqs)
    order = np.argsort(wrapped, kind="stable")
    return wrapped[order], order


@dataclass
class BandStructure:
    k_grid: np.ndarray  # ascending, (-pi, pi]
    w_grid: np.ndarray  # ascending, (-pi, pi]
    power: np.ndarray  # real, shape (len(k_grid), len(w_grid))


def band_structure(cs: CorrelatorSeries, window: str = "rect") -> BandStructure:
    """Space-time power spectrum |A(k, w)|^2 with
    A = sum_{j,t} C[j][t] w(t) exp(-i(w t - k j))."""
    c = cs.values
    n, t = c.shape
    if window == "rect":
        wt = np.ones(t)
    elif window == "hann":
        wt = np.hanning(t)
    else:
        raise ValueError(f"unknown window {window!r}")
    ft = np.fft.fft(c * wt[None, :], axis=1)  # e^{-i w t}
    a = np.fft.ifft(ft, axis=0) * n  # e^{+i k j}
    k_grid, k_order = _centered(2 * np.pi * np.fft.fftfreq(n))
    w_grid, w_order = _centered(2 * np.pi * np.fft.fftfreq(t))
    power = np.abs(a[np.ix_(k_order, w_order)]) ** 2
    return BandStructure(k_grid=k_grid, w_grid=w_grid, power=power)


def momentum_series(cs: CorrelatorSeries) -> tuple[np.ndarray, np.ndarray]:
    """Correlator transformed over the window index only: rows A(k, t),
    k ascending on (-pi, pi]. Input to ringdown fits."""
    c = cs.values
    n = c.shape[0]
    a = np.fft.ifft(c, axis=0) * n
    k_grid, order = _centered(2 * np.pi * np.fft.fftfreq(n))
    return k_grid, a[order]


def peak_energies(b: BandStructure) -> np.ndarray:
    """Per-momentum argmax of the power map, as quasi-energies."""
    return b.w_grid[np.argmax(b.power, axis=1)]


# ---------------------------------------------------------------------------
# momentum-shift extraction


def _circular_distance(a, b):
    return np.abs(wrap_angle(np.asarray(a) - b))


def extract_momentum_shift(
    b: BandStructure,
    ref: BandStructure,
    interp_points: int = 100,
    omega_window: tuple[float, float] | None = None,
) -> float:
    """Momentum displacement of `b` relative to `ref` from the cyclic
    cross-correlation of the two power maps, summed over energies.

    `omega_window` = (center, halfwidth) restricts the energy rows used;
    momentum rows are periodically interpolated to `interp_points` before
    correlation, so the resolution is 2*pi/interp_points.
    """
    if b.power.shape != ref.power.shape or not np.allclose(b.k_grid, ref.k_grid):
        raise ValueError("band structures live on different grids")
    if omega_window is None:
        cols = np.arange(len(b.w_grid))
    else:
        center, half = omega_window
        cols = np.nonzero(_circular_distance(b.w_grid, center) <= half)[0]
        if len(cols) == 0:
            raise ExtractionError("energy window contains no frequency bins")
    k_fine = np.linspace(0.0, 2 * np.pi, interp_points, endpoint=False)
    k_src = np.mod(b.k_grid, 2 * np.pi)
    order = np.argsort(k_src)
    corr = np.zeros(interp_points)
    contrast = 0.0
    for col in cols:
        pb = np.interp(k_fine, k_src[order], b.power[order, col], period=2 * np.pi)
        pr = np.interp(k_fine, k_src[order], ref.power[order, col], period=2 * np.pi)
        contrast += np.ptp(pb) + np.ptp(pr)
        corr += np.real(np.fft.ifft(np.fft.fft(pb) * np.conj(np.fft.fft(pr))))
    if contrast <= 1e-30:
        raise ExtractionError("power maps are flat inside the energy window")
    shift_bins = int(np.argmax(corr))
    return float(wrap_angle(2 * np.pi * shift_bins / interp_points))


# ---------------------------------------------------------------------------
# ringdown fit


@dataclass
class DecayFit:
    omega: float
    decay_rate: float  # 1/tau, per cycle
    amplitude: float

    @property
    def tau(self) -> float:
        return float("inf") if self.decay_rate == 0 else 1.0 / self.decay_rate


def fit_decay(values: np.ndarray, t: np.ndarray | None = None) -> DecayFit:
    """Least-squares fit of a complex ringdown amp*exp((i w - 1/tau) t):
    linear fit of log-magnitude for the decay rate, of unwrapped phase for
    the frequency. A non-decaying series fits to decay_rate ~ 0."""
    values = np.asarray(values, dtype=complex)
    if t is None:
        t = np.arange(len(values), dtype=float)
    if len(values) < 8:
        raise FitError("need at least 8 samples")
    mags = np.abs(values)
    if np.any(mags <= 0.0):
        raise FitError("series contains zero magnitudes")
    rate_slope, log_amp = np.polyfit(t, np.log(mags), 1)
    phase_slope, _ = np.polyfit(t, np.unwrap(np.angle(values)), 1)
    return DecayFit(omega=float(phase_slope), decay_rate=float(-rate_slope),
                    amplitude=float(np.exp(log_amp)))
