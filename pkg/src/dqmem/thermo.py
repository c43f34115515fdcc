"""Thermodynamics of damped pair memories.

Each pair at effective parameter Theta looks exactly thermal: its occupation
sinh^2(Theta) is a Bose factor at inverse temperature beta_kappa determined
by beta_kappa E_kappa = -ln tanh^2(Theta_kappa), and the entropy expectation
has the closed form

    s(Theta) = cosh^2 ln cosh^2 - sinh^2 ln sinh^2.

The free energy Sum E sinh^2 - S/beta is stationary in each Theta exactly at
beta = beta_kappa, which is where the effective temperature comes from.
Different pairs generally disagree about beta, so multi-mode reports carry
per-mode values plus an optional least-squares single-beta fit with its
residual, never a fabricated global temperature.

The first law is verified as a discrete ledger: per time step,
residual = dE - (1/beta) dS with beta taken at the step midpoint. The
midpoint rule is second order, and steps in which a damped pair crosses
Theta = 0 (where beta diverges) are flagged rather than smoothed over.

All functions evaluate the closed-form trajectory Theta(t) = gamma t - theta
of the written code; time grids are absolute ages since writing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .states import MemoryState, effective_theta, effective_thetas

__all__ = [
    "ThermoSnapshot",
    "FirstLawLedger",
    "entropy",
    "effective_beta",
    "bose_occupation",
    "free_energy",
    "stationarity_residual",
    "first_law_ledger",
    "entropy_trace",
    "thermo_snapshot",
]


def _entropy_per_mode(thetas: np.ndarray) -> np.ndarray:
    """s(Theta) elementwise, with the x ln x -> 0 limit at Theta = 0."""
    x = np.sinh(np.asarray(thetas, dtype=float)) ** 2
    return (1.0 + x) * np.log1p(x) - xlogy(x, x)


def _beta_energy(thetas: np.ndarray) -> np.ndarray:
    """beta_kappa * E_kappa = -ln tanh^2(Theta), elementwise, inf at Theta = 0.

    Stable form 2(ln(1 + e^{-2|T|}) - ln(1 - e^{-2|T|})): accurate to
    round-off even for |T| ~ 5 where tanh is within 1e-4 of 1, which is what
    the 1e-12 round-trip contract needs.
    """
    ez = np.exp(-2.0 * np.abs(np.asarray(thetas, dtype=float)))
    with np.errstate(divide="ignore"):
        return 2.0 * (np.log1p(ez) - np.log1p(-ez))


def _entropy_slope(thetas: np.ndarray) -> np.ndarray:
    """ds/dTheta = -sinh(2 Theta) ln tanh^2(Theta), with the 0 limit at 0."""
    t = np.asarray(thetas, dtype=float)
    y = _beta_energy(t)
    out = np.zeros_like(t)
    mask = t != 0.0
    out[mask] = np.sinh(2.0 * t[mask]) * y[mask]
    return out


def _energies(state: MemoryState) -> np.ndarray:
    return np.array([m.omega for m in state.modes], dtype=float)


@dataclass(frozen=True)
class ThermoSnapshot:
    """Thermodynamic readout of one state at one instant.

    beta_fit is the least-squares single inverse temperature over the modes
    with nonzero occupation (minimizing sum (y_k - beta E_k)^2 for
    y_k = beta_k E_k), with beta_fit_residual the root sum of squares left
    over; math.inf when every mode is empty. Empty modes (beta = inf) are
    excluded from the fit: no finite beta describes them and they carry no
    energy or entropy.
    """

    time: float
    entropy_per_mode: tuple[float, ...]
    entropy: float
    energy: float
    beta_per_mode: tuple[float, ...]
    beta_fit: float
    beta_fit_residual: float


@dataclass(frozen=True)
class FirstLawLedger:
    """Discrete first-law bookkeeping over a time grid.

    Per step i (between times[i] and times[i+1]):
    entropy_term[i] = sum_k ds_k / beta_k(midpoint) is the heat dQ by
    definition, residual[i] = delta_energy[i] - entropy_term[i], and
    flagged[i] marks steps where a damped mode's Theta changes sign (beta
    diverges inside the step, so the midpoint rule's premise fails there).
    """

    times: tuple[float, ...]
    delta_energy: tuple[float, ...]
    entropy_term: tuple[float, ...]
    residual: tuple[float, ...]
    flagged: tuple[bool, ...]

    @property
    def heat(self) -> tuple[float, ...]:
        """dQ per step; identical to entropy_term by the first law."""
        return self.entropy_term


def entropy(state: MemoryState) -> tuple[float, np.ndarray]:
    """Total and per-mode entropy of the state.

    Per mode s = cosh^2 Theta ln cosh^2 Theta - sinh^2 Theta ln sinh^2 Theta,
    which is the expectation of the modular entropy operator; even in Theta,
    zero only at Theta = 0.
    """
    per_mode = _entropy_per_mode(effective_thetas(state))
    return math.fsum(per_mode), per_mode


def effective_beta(state: MemoryState, kappa: int) -> float:
    """Inverse temperature of pair kappa: -ln tanh^2(Theta) / E.

    Returns math.inf at Theta = 0: an empty pair is a zero-temperature
    signal, not an error. The occupation round-trips through the Bose factor
    to 1e-12 relative over |Theta| in [0.05, 5].
    """
    t = effective_theta(state, kappa)
    return float(_beta_energy(np.array([t]))[0]) / state.modes[kappa].omega


def bose_occupation(beta: float, energy: float) -> float:
    """Thermal occupation 1/(e^{beta E} - 1)."""
    beta = float(beta)
    energy = float(energy)
    if not (beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta}")
    if not (energy > 0.0 and math.isfinite(energy)):
        raise ValueError(f"energy must be positive and finite, got {energy}")
    if math.isinf(beta):
        return 0.0
    x = beta * energy
    return math.exp(-x) if x > 700.0 else 1.0 / math.expm1(x)


def free_energy(state: MemoryState, beta: float) -> float:
    """F = sum_k E_k sinh^2(Theta_k) - S/beta at the probe temperature."""
    beta = float(beta)
    if not (beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta}")
    t = effective_thetas(state)
    energy = math.fsum(_energies(state) * np.sinh(t) ** 2)
    total_s, _ = entropy(state)
    return energy - total_s / beta


def stationarity_residual(state: MemoryState, beta: float) -> np.ndarray:
    """Analytic per-mode gradient dF/dTheta_kappa at the probe beta.

    Equals sinh(2 Theta)(E + ln tanh^2(Theta)/beta): zero at Theta = 0 for
    any beta (symmetric minimum) and zero at beta = effective_beta of that
    mode, which is the stationarity condition defining the effective
    temperature.
    """
    beta = float(beta)
    if not (beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta}")
    t = effective_thetas(state)
    e = _energies(state)
    y = _beta_energy(t)
    out = np.zeros_like(t)
    mask = t != 0.0
    out[mask] = np.sinh(2.0 * t[mask]) * (e[mask] - y[mask] / beta)
    return out


def _trajectory(state: MemoryState, times: np.ndarray) -> np.ndarray:
    """Theta(t) on the grid, shape (len(times), K)."""
    gammas = np.array([m.gamma for m in state.modes], dtype=float)
    thetas = np.asarray(state.code.thetas, dtype=float)
    return times[:, None] * gammas[None, :] - thetas[None, :]


def _checked_grid(times, minimum_points: int) -> np.ndarray:
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size < minimum_points:
        raise ValueError(f"time grid needs at least {minimum_points} points")
    if not np.all(np.isfinite(ts)) or np.any(ts < 0.0):
        raise ValueError("time grid must be finite and non-negative")
    if np.any(np.diff(ts) <= 0.0):
        raise ValueError("time grid must be strictly increasing")
    return ts


def entropy_trace(state: MemoryState, times) -> np.ndarray:
    """Total entropy along the trajectory, one value per grid time.

    For a single damped mode the trace falls strictly on (0, theta/gamma),
    hits exactly 0 at the forgetting time, and rises strictly after it.
    """
    ts = _checked_grid(times, minimum_points=1)
    return _entropy_per_mode(_trajectory(state, ts)).sum(axis=1)


def first_law_ledger(state: MemoryState, times) -> FirstLawLedger:
    """Step-by-step first-law check dE = dQ = (1/beta) dS over the grid.

    Midpoint per-mode beta weights each mode's entropy change; undamped
    modes change nothing and contribute nothing. Steps where a damped
    mode's Theta crosses or touches 0 are flagged: beta diverges there and
    the midpoint value is meaningless, so the residual is reported but not
    trusted. Residuals on unflagged steps converge to 0 at second order in
    the step size.
    """
    ts = _checked_grid(times, minimum_points=2)
    gammas = np.array([m.gamma for m in state.modes], dtype=float)
    energies = _energies(state)

    traj = _trajectory(state, ts)
    occ = np.sinh(traj) ** 2
    total_energy = occ @ energies
    s_per = _entropy_per_mode(traj)

    mid = _trajectory(state, 0.5 * (ts[:-1] + ts[1:]))
    y_mid = _beta_energy(mid)
    inv_beta_energy_weighted = energies[None, :] / y_mid  # 0 where y = inf

    ds = np.diff(s_per, axis=0)
    entropy_term = (ds * inv_beta_energy_weighted).sum(axis=1)
    delta_energy = np.diff(total_energy)
    residual = delta_energy - entropy_term
    crossings = (traj[:-1] * traj[1:] <= 0.0) & (gammas[None, :] > 0.0)
    flagged = crossings.any(axis=1)

    return FirstLawLedger(
        times=tuple(float(x) for x in ts),
        delta_energy=tuple(float(x) for x in delta_energy),
        entropy_term=tuple(float(x) for x in entropy_term),
        residual=tuple(float(x) for x in residual),
        flagged=tuple(bool(x) for x in flagged),
    )


def thermo_snapshot(state: MemoryState) -> ThermoSnapshot:
    """Full thermodynamic readout of the state at its current time."""
    t = effective_thetas(state)
    e = _energies(state)
    per_mode = _entropy_per_mode(t)
    y = _beta_energy(t)
    with np.errstate(invalid="ignore"):
        beta_per_mode = y / e
    finite = np.isfinite(y)
    if finite.any():
        ef = e[finite]
        yf = y[finite]
        beta_fit = float((ef * yf).sum() / (ef * ef).sum())
        beta_fit_residual = float(np.linalg.norm(yf - beta_fit * ef))
    else:
        beta_fit = math.inf
        beta_fit_residual = 0.0
    return ThermoSnapshot(
        time=state.time,
        entropy_per_mode=tuple(float(x) for x in per_mode),
        entropy=math.fsum(per_mode),
        energy=math.fsum(e * np.sinh(t) ** 2),
        beta_per_mode=tuple(float(x) for x in beta_per_mode),
        beta_fit=beta_fit,
        beta_fit_residual=beta_fit_residual,
    )
