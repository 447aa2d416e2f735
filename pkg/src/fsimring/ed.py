"""Exact-diagonalization utilities for small sectors.

Quasi-energies are eigenphases arg(lambda) of the cycle unitary, reduced to
(-pi, pi]. Adjacent-pattern weight classifies an eigenvector as a bound
state; translation expectation values give an (approximate for brickwork)
momentum label used to localize bound states in the zone.
"""

from __future__ import annotations

import numpy as np

from .engine import get_basis, sector_unitary
from .sectors import bound_table, rotate_mask
from .theory import DispersionParams, quasi_energy, wrap_angle


def bound_eigenstates(
    n_sites: int, n_ph: int, layers, weight_threshold: float = 0.5
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonalize one sector of the cycle and keep eigenvectors with more
    than `weight_threshold` of their weight on adjacent patterns.

    Returns (eigenphases, adjacent_weights, momentum_labels); the momentum
    label is -arg <v|T|v> for the one-site translation T.
    """
    basis = get_basis(n_sites, n_ph)
    u = sector_unitary(n_sites, n_ph, layers)
    w, v = np.linalg.eig(u)
    ranks, _ = bound_table(basis)
    weights = np.sum(np.abs(v[ranks, :]) ** 2, axis=0)
    keep = weights > weight_threshold
    perm = np.array([basis.rank(rotate_mask(int(b), n_sites)) for b in basis.states])
    inv_perm = np.argsort(perm)
    phases, wts, ks = [], [], []
    for m in np.nonzero(keep)[0]:
        vec = v[:, m]
        t_exp = np.vdot(vec, vec[inv_perm])  # <v|T|v>
        phases.append(float(np.angle(w[m])))
        wts.append(float(weights[m]))
        ks.append(float(-np.angle(t_exp)))
    order = np.argsort(ks)
    return (
        np.asarray(phases)[order],
        np.asarray(wts)[order],
        np.asarray(ks)[order],
    )


def closed_form_multiset(n_sites: int, dp: DispersionParams) -> np.ndarray:
    """Both dispersion branches sampled on the ring momenta 2*pi*m/N."""
    ks = 2.0 * np.pi * np.arange(n_sites) / n_sites
    e_plus, e_minus = quasi_energy(ks, dp)
    return np.concatenate([np.atleast_1d(e_plus), np.atleast_1d(e_minus)])


def multiset_deviation(phases: np.ndarray, reference: np.ndarray) -> float:
    """Largest circular distance from any phase to its nearest reference value."""
    if len(phases) == 0:
        return float("nan")
    devs = [np.min(np.abs(wrap_angle(p - reference))) for p in phases]
    return float(np.max(devs))
