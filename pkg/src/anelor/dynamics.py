"""Time integration of the reduced (A, B, C) and Lorenz (X, Y, Z) systems.

Both systems are driven through the same adaptive embedded Runge-Kutta 5(4)
pair with dense output, so a trajectory computed in reduced coordinates and
pushed through the scaling map can be compared pointwise against one
integrated directly in Lorenz coordinates. The module also provides the
decay/growth diagnostic used for onset checks (least-squares slope of the
log amplitude over the trailing part of a run) and a Benettin estimate of
the largest Lyapunov exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .lorenz import LorenzParams, ScalingMap
from .projection import GalerkinCoeffs

__all__ = [
    "IntegrationError",
    "Trajectory",
    "reduced_rhs",
    "lorenz_rhs",
    "integrate_reduced",
    "integrate_lorenz",
    "map_trajectory",
    "log_norm_slope",
    "amplitude_trend",
    "largest_lyapunov",
]

REDUCED_LABELS = ("t", "A", "B", "C")
LORENZ_LABELS = ("s", "X", "Y", "Z")


class IntegrationError(RuntimeError):
    """The adaptive integrator failed or produced a non-finite state."""


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution with the integrator settings that produced it."""

    times: np.ndarray
    states: np.ndarray
    labels: tuple[str, ...]
    rtol: float
    atol: float
    nfev: int

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if times.ndim != 1 or states.ndim != 2 or states.shape[0] != times.size:
            raise ValueError("need times (n,) and states (n, k)")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if len(self.labels) != 1 + states.shape[1]:
            raise ValueError("labels must cover the time column and every state")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def initial(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, target) -> None:
        """Write `labels` as a header then one row per sample, 17 significant
        digits, comma separator, LF line endings."""
        lines = [",".join(self.labels)]
        for t, row in zip(self.times, self.states):
            lines.append(",".join(f"{v:.17g}" for v in (t, *row)))
        text = "\n".join(lines) + "\n"
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", newline="\n") as handle:
                handle.write(text)


def reduced_rhs(t, state, e):
    A, B, C = state
    return np.array(
        [e[0] * A + e[1] * B, e[2] * A * C + e[3] * B + e[4] * A, e[5] * A * B + e[6] * C]
    )


def lorenz_rhs(s, state, lp: LorenzParams):
    X, Y, Z = state
    return np.array(
        [lp.sigma * (Y - X), lp.r * X - Y - X * Z, X * Y - lp.delta * Z]
    )


def _integrate(fun, initial, t_end, rtol, atol, labels, t_eval):
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    for name, tol in (("rtol", rtol), ("atol", atol)):
        if not 0.0 < tol < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {tol}")
    initial = np.asarray(initial, dtype=float)
    if initial.shape != (3,) or not np.all(np.isfinite(initial)):
        raise ValueError("initial state must be three finite components")
    if t_eval is None:
        t_eval = np.linspace(0.0, t_end, 801)
    solution = solve_ivp(
        fun, (0.0, float(t_end)), initial, method="RK45", t_eval=t_eval,
        rtol=rtol, atol=atol,
    )
    if not solution.success:
        raise IntegrationError(solution.message)
    if not np.all(np.isfinite(solution.y)):
        raise IntegrationError("integration produced non-finite state values")
    return Trajectory(
        times=solution.t, states=solution.y.T, labels=labels,
        rtol=rtol, atol=atol, nfev=int(solution.nfev),
    )


def integrate_reduced(
    coeffs: GalerkinCoeffs, initial, t_end, rtol=1e-10, atol=1e-12, t_eval=None
) -> Trajectory:
    """Integrate dA/dt = e1 A + e2 B, dB/dt = e3 A C + e4 B + e5 A,
    dC/dt = e6 A B + e7 C from t = 0 to t_end."""
    e = coeffs.as_array()
    return _integrate(
        lambda t, y: reduced_rhs(t, y, e), initial, t_end, rtol, atol,
        REDUCED_LABELS, t_eval,
    )


def integrate_lorenz(
    lp: LorenzParams, initial, s_end, rtol=1e-10, atol=1e-12, t_eval=None
) -> Trajectory:
    return _integrate(
        lambda s, y: lorenz_rhs(s, y, lp), initial, s_end, rtol, atol,
        LORENZ_LABELS, t_eval,
    )


def map_trajectory(traj: Trajectory, scaling: ScalingMap) -> Trajectory:
    """Push a reduced-coordinate trajectory onto Lorenz coordinates.

    Times rescale by d and the state columns by (a, b, c); the integrator
    metadata is carried over unchanged.
    """
    if tuple(traj.labels) != REDUCED_LABELS:
        raise ValueError("expected a reduced (t, A, B, C) trajectory")
    return replace(
        traj,
        times=scaling.time_to_lorenz(traj.times),
        states=scaling.apply(traj.states),
        labels=LORENZ_LABELS,
    )


def log_norm_slope(traj: Trajectory, tail_fraction: float = 0.5) -> float:
    """Least-squares growth rate of log ||state|| over the trailing samples."""
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")
    start = int(math.floor(traj.times.size * (1.0 - tail_fraction)))
    times = traj.times[start:]
    norms = np.linalg.norm(traj.states[start:], axis=1)
    keep = norms > 0.0
    if np.count_nonzero(keep) < 2:
        raise ValueError("not enough nonzero samples in the tail to fit a slope")
    slope, _ = np.polyfit(times[keep], np.log(norms[keep]), 1)
    return float(slope)


def amplitude_trend(
    traj: Trajectory, threshold: float = 1e-3, tail_fraction: float = 0.5
) -> str:
    """'decay', 'growth', or 'flat' from the trailing log-amplitude slope."""
    slope = log_norm_slope(traj, tail_fraction)
    if slope < -threshold:
        return "decay"
    if slope > threshold:
        return "growth"
    return "flat"


def largest_lyapunov(
    lp: LorenzParams,
    s_end: float = 500.0,
    initial=None,
    renorm_interval: float = 1.0,
    discard_fraction: float = 0.1,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    seed: int = 0,
) -> float:
    """Benettin estimate of the largest Lyapunov exponent.

    A unit tangent vector rides the trajectory through the linearized flow
    and is renormalized every `renorm_interval` time units; the exponent is
    the mean log stretching after discarding the leading transient. Requires
    s_end >= 500 so the average has settled.
    """
    if s_end < 500.0:
        raise ValueError(f"s_end must be at least 500, got {s_end}")
    if renorm_interval <= 0.0 or not 0.0 <= discard_fraction < 1.0:
        raise ValueError("bad renormalization settings")
    rng = np.random.default_rng(seed)
    if initial is None:
        initial = np.array([1.0, 1.0, 1.0]) + 0.1 * rng.standard_normal(3)
    state = np.asarray(initial, dtype=float)
    tangent = rng.standard_normal(3)
    tangent /= np.linalg.norm(tangent)

    def rhs(s, y):
        X, Y, Z = y[:3]
        v = y[3:]
        jacobian = np.array(
            [
                [-lp.sigma, lp.sigma, 0.0],
                [lp.r - Z, -1.0, -X],
                [Y, X, -lp.delta],
            ]
        )
        return np.concatenate((lorenz_rhs(s, y[:3], lp), jacobian @ v))

    steps = int(round(s_end / renorm_interval))
    stretches = np.empty(steps)
    for k in range(steps):
        solution = solve_ivp(
            rhs, (0.0, renorm_interval), np.concatenate((state, tangent)),
            method="RK45", rtol=rtol, atol=atol,
        )
        if not solution.success:
            raise IntegrationError(solution.message)
        state = solution.y[:3, -1]
        tangent = solution.y[3:, -1]
        size = np.linalg.norm(tangent)
        stretches[k] = math.log(size)
        tangent /= size
    keep = stretches[int(math.floor(steps * discard_fraction)):]
    return float(np.sum(keep) / (keep.size * renorm_interval))
