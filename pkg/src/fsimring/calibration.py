"""Synthetic-device gate calibration: a hidden quadratic pulse-response
model, the finite-difference gradient matrix with its Newton update, the
coherent control-error budget, and the closed form for repeated gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import FsimParams, fsim_matrix
from .errors import ConvergenceError


@dataclass(frozen=True)
class PulseModel:
    """Device response mapping pulse length t_p and peak coupling g_max to
    gate angles: theta = a * g * t + off, phi = b * g^2 * t + off.

    The swap angle grows with the coupling, the conditional phase with its
    square (dispersive shift), which is what makes the pair (t_p, g_max)
    invertible for a target (theta, phi). `noise_std` adds Gaussian read-out
    noise on measured angles when an rng is supplied.
    """

    coeff_theta: float
    coeff_phi: float
    offset_theta: float = 0.0
    offset_phi: float = 0.0
    noise_std: float = 0.0

    def __post_init__(self):
        if self.coeff_theta <= 0 or self.coeff_phi <= 0:
            raise ValueError("response coefficients must be positive")


def evaluate_model(m: PulseModel, t_p: float, g_max: float) -> tuple[float, float]:
    """Noiseless device response (theta, phi) at one pulse setting."""
    if t_p <= 0 or g_max <= 0:
        raise ValueError("pulse length and coupling must be positive")
    theta = m.coeff_theta * g_max * t_p + m.offset_theta
    phi = m.coeff_phi * g_max**2 * t_p + m.offset_phi
    return theta, phi


def measure_angles(
    m: PulseModel, t_p: float, g_max: float, rng: np.random.Generator | None = None
) -> tuple[float, float]:
    """Device response including measurement noise (the calibrator's view)."""
    theta, phi = evaluate_model(m, t_p, g_max)
    if rng is not None and m.noise_std > 0:
        theta += rng.normal(0.0, m.noise_std)
        phi += rng.normal(0.0, m.noise_std)
    return theta, phi


def gradient_matrix(
    m: PulseModel,
    t0: float,
    g0: float,
    dt: float,
    dg: float,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Forward-difference response matrix [[dphi/dt, dphi/dg],
    [dtheta/dt, dtheta/dg]] at (t0, g0)."""
    if dt <= 0 or dg <= 0:
        raise ValueError("finite-difference steps must be positive")
    th0, ph0 = measure_angles(m, t0, g0, rng)
    th_t, ph_t = measure_angles(m, t0 + dt, g0, rng)
    th_g, ph_g = measure_angles(m, t0, g0 + dg, rng)
    mg = np.array(
        [
            [(ph_t - ph0) / dt, (ph_g - ph0) / dg],
            [(th_t - th0) / dt, (th_g - th0) / dg],
        ]
    )
    if abs(np.linalg.det(mg)) < 1e-12:
        raise ValueError("degenerate response matrix: angles do not separate")
    return mg


@dataclass
class CalibrationResult:
    t_p: float
    g_max: float
    iterations: int
    residuals: list[tuple[float, float]] = field(default_factory=list)
    converged: bool = False


def calibrate(
    m: PulseModel,
    target_theta: float,
    target_phi: float,
    t0: float,
    g0: float,
    max_iter: int = 5,
    tol: float = 0.020,
    dt: float = 0.01,
    dg: float = 0.01,
    rng: np.random.Generator | None = None,
) -> CalibrationResult:
    """Newton iteration on the measured angle residuals until both |dtheta|
    and |dphi| drop below `tol` (20 mrad by default).

    Raises ConvergenceError (with the residual trace attached) after
    `max_iter` updates without reaching tolerance.
    """
    t_p, g_max = float(t0), float(g0)
    result = CalibrationResult(t_p=t_p, g_max=g_max, iterations=0)
    for it in range(max_iter + 1):
        theta, phi = measure_angles(m, t_p, g_max, rng)
        res = (target_theta - theta, target_phi - phi)
        result.residuals.append(res)
        result.t_p, result.g_max, result.iterations = t_p, g_max, it
        if abs(res[0]) < tol and abs(res[1]) < tol:
            result.converged = True
            return result
        if it == max_iter:
            break
        mg = gradient_matrix(m, t_p, g_max, dt, dg, rng)
        step = np.linalg.solve(mg, np.array([res[1], res[0]]))  # (phi, theta) order
        t_p += step[0]
        g_max += step[1]
    err = ConvergenceError(
        f"no convergence to {tol*1e3:.0f} mrad after {max_iter} updates; "
        f"last residuals {result.residuals[-1]}"
    )
    err.result = result
    raise err


# ---------------------------------------------------------------------------
# coherent control error


@dataclass(frozen=True)
class AngleErrors:
    """Angle deviations of one gate (rad) at operating swap angle `theta`.
    The single-qubit deviations d_gamma/d_alpha/d_beta are physical Z-rotation
    angles; they enter the gate unitary as half angles."""

    theta: float
    d_theta: float = 0.0
    d_phi: float = 0.0
    d_gamma: float = 0.0
    d_alpha: float = 0.0
    d_beta: float = 0.0


def control_error(e: AngleErrors) -> float:
    """Second-order coherent-infidelity budget of one miscalibrated gate."""
    th = e.theta
    return (
        0.4 * e.d_theta**2
        + 0.15 * e.d_phi**2
        + 0.1 * e.d_gamma**2
        + 0.2 * e.d_gamma * e.d_phi
        + 0.1 * np.cos(th) ** 2 * e.d_alpha**2
        + (np.sin(th) ** 2 / 80.0)
        * (7.0 + np.cos(2 * th) + 2.0 * np.sin(th) ** 2)
        * e.d_beta**2
    )


def control_error_direct(e: AngleErrors, phi: float = 0.0) -> float:
    """Exact 1 - F between target and miscalibrated gate unitaries:
    (1/(1+1/D)) * (1 - |Tr(U_t^dag U_a)|^2 / D^2) with D = 4."""
    target = fsim_matrix(FsimParams(theta=e.theta, phi=phi))
    actual = fsim_matrix(
        FsimParams(
            theta=e.theta + e.d_theta,
            phi=phi + e.d_phi,
            beta=e.d_beta / 2.0,
            gamma=e.d_gamma / 2.0,
            alpha=e.d_alpha / 2.0,
        )
    )
    tr = np.trace(target.conj().T @ actual)
    e_pauli = 1.0 - np.abs(tr) ** 2 / 16.0
    return float(e_pauli / (1.0 + 0.25))


# ---------------------------------------------------------------------------
# repeated-gate closed form


def fsim_power(p: FsimParams, n: int) -> np.ndarray:
    """n-th power of the gate unitary in closed form.

    The one-photon block is an SU(2) rotation by Omega per repetition with
    cos(Omega) = cos(theta) cos(alpha); the hopping phase beta does not
    accumulate, while gamma and phi add up linearly.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    c, al = np.cos(p.theta), p.alpha
    cos_om = c * np.cos(al)
    sin_om = np.sqrt(max(0.0, 1.0 - cos_om**2))
    if sin_om < 1e-14:
        # theta = alpha = 0 (mod pi): diagonal one-photon block
        a = complex(cos_om) ** n
        b = 0.0
    else:
        om = np.arccos(np.clip(cos_om, -1.0, 1.0))
        q = c * np.sin(al) / sin_om
        a = np.cos(n * om) - 1j * q * np.sin(n * om)
        b = np.sqrt(max(0.0, 1.0 - q**2)) * np.sin(n * om)
    g, be = p.gamma, p.beta
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    m[1, 1] = np.exp(1j * g * n) * a
    m[1, 2] = 1j * np.exp(1j * (g * n + be)) * b
    m[2, 1] = 1j * np.exp(1j * (g * n - be)) * b
    m[2, 2] = np.exp(1j * g * n) * np.conj(a)
    m[3, 3] = np.exp(1j * (2 * g + p.phi) * n)
    return m
