"""Mapping the reduced three-mode system onto the classic Lorenz form.

Rescaling amplitudes and time,

    X = a*A, Y = b*B, Z = c*C, s = d*t,

turns

    dA/dt = e1*A + e2*B
    dB/dt = e3*A*C + e4*B + e5*A
    dC/dt = e6*A*B + e7*C

into

    dX/ds = sigma*(Y - X)
    dY/ds = r*X - Y - X*Z
    dZ/ds = X*Y - delta*Z

with sigma = e1/e4, delta = e7/e4 and r = e2*e5/(e1*e4). Since e2 and e5
each carry a factor sqrt(Ra), r is linear in the Rayleigh number and the
critical value where the conducting state loses stability is simply
Ra* = Ra_ref / r(Ra_ref). The module also provides the rest points of the
Lorenz system, the exact eigenvalues of the conducting state, and a
one-dimensional minimizer of Ra* over the domain width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams
from .projection import GalerkinCoeffs, coefficients

__all__ = [
    "BracketError",
    "LorenzParams",
    "ScalingMap",
    "StabilityReport",
    "LengthOptimum",
    "scale_to_lorenz",
    "lorenz_parameters",
    "critical_points",
    "origin_eigenvalues",
    "classify_rest_state",
    "critical_rayleigh",
    "taylor_ratio",
    "minimize_over_length",
]


class BracketError(RuntimeError):
    """The scan found no interior minimum inside the given bracket."""


@dataclass(frozen=True)
class LorenzParams:
    """Classic Lorenz parameters; delta generalizes the usual 8/3."""

    sigma: float
    delta: float
    r: float

    def __post_init__(self):
        for name in ("sigma", "delta", "r"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.delta <= 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.r < 0.0:
            raise ValueError(f"r must be nonnegative, got {self.r}")


@dataclass(frozen=True)
class ScalingMap:
    """Amplitude and time scaling between the reduced and Lorenz systems.

    Forward: (X, Y, Z) = (a*A, b*B, c*C) and Lorenz time s = d*t. The sign
    convention fixes b > 0; a and c then follow from the coefficients.
    """

    a: float
    b: float
    c: float
    d: float

    def apply(self, states):
        """Reduced (A, B, C) states, shape (..., 3), to Lorenz (X, Y, Z)."""
        return np.asarray(states) * np.array([self.a, self.b, self.c])

    def invert(self, states):
        return np.asarray(states) / np.array([self.a, self.b, self.c])

    def time_to_lorenz(self, t):
        return np.asarray(t) * self.d

    def time_from_lorenz(self, s):
        return np.asarray(s) / self.d


@dataclass(frozen=True)
class StabilityReport:
    """Stability of the conducting (origin) state of the Lorenz system."""

    classification: str  # "stable" | "unstable" | "marginal"
    leading: float
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class LengthOptimum:
    length: float
    rayleigh: float
    evaluations: int


def scale_to_lorenz(coeffs: GalerkinCoeffs) -> tuple[LorenzParams, ScalingMap]:
    """Lorenz parameters and the scaling that realizes them.

    Requires e1*e4 > 0 (decay in both linear diagonals), e2 != 0 (a buoyancy
    coupling, so the Rayleigh number must be positive), and e3*e6 < 0
    (opposed temperature nonlinearities). The product e3*e6 changes sign at
    beta = 2*sqrt(2)*pi, beyond which no real amplitude scaling exists.
    """
    e1, e2, e3, e4, e5, e6, e7 = coeffs.as_array()
    if e1 * e4 <= 0.0 or e7 * e4 <= 0.0:
        raise ValueError("need matching signs in e1, e4, e7 to form sigma and delta")
    if e2 == 0.0:
        raise ValueError("e2 vanishes (zero Rayleigh number); the map is singular")
    if e3 * e6 >= 0.0:
        raise ValueError(
            "e3*e6 must be negative for a real amplitude scaling; "
            "it changes sign at beta = 2*sqrt(2)*pi"
        )
    params = LorenzParams(sigma=e1 / e4, delta=e7 / e4, r=e2 * e5 / (e1 * e4))
    d = -e4
    b = math.sqrt(-e3 * e6 * e2**2 / (e1**2 * e4**2))
    a = -e1 * b / e2
    c = d * a * b / e6
    return params, ScalingMap(a=a, b=b, c=c, d=d)


def lorenz_parameters(
    params: PhysicalParams, source: str = "oracle", rule=None
) -> LorenzParams:
    lp, _ = scale_to_lorenz(coefficients(params, source, rule))
    return lp


def critical_points(lp: LorenzParams) -> np.ndarray:
    """Rest points, shape (k, 3); the convecting pair exists for r > 1."""
    points = [np.zeros(3)]
    if lp.r > 1.0:
        wing = math.sqrt(lp.delta * (lp.r - 1.0))
        points.append(np.array([wing, wing, lp.r - 1.0]))
        points.append(np.array([-wing, -wing, lp.r - 1.0]))
    return np.array(points)


def origin_eigenvalues(lp: LorenzParams) -> np.ndarray:
    """Eigenvalues at the origin, ordered (lambda+, lambda-, -delta).

    The quadratic factor has discriminant (sigma + 1)^2 + 4*sigma*(r - 1)
    >= (sigma - 1)^2 for r >= 0, so all three are real. The closed form is
    cross-checked against the numeric spectrum of the Jacobian.
    """
    s, r = lp.sigma, lp.r
    disc = math.sqrt((s + 1.0) ** 2 + 4.0 * s * (r - 1.0))
    values = np.array(
        [0.5 * (-(s + 1.0) + disc), 0.5 * (-(s + 1.0) - disc), -lp.delta]
    )
    jacobian = np.array([[-s, s, 0.0], [r, -1.0, 0.0], [0.0, 0.0, -lp.delta]])
    numeric = np.sort(np.linalg.eigvals(jacobian).real)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.max(np.abs(np.sort(values) - numeric)) > 1e-12 * scale:
        raise ArithmeticError("origin eigenvalue formula disagrees with the Jacobian")
    return values


def classify_rest_state(lp: LorenzParams, tol: float = 1e-12) -> StabilityReport:
    """Linear stability of the conducting state; marginal within tol of zero."""
    eigenvalues = origin_eigenvalues(lp)
    leading = float(np.max(eigenvalues))
    if abs(leading) <= tol:
        classification = "marginal"
    elif leading < 0.0:
        classification = "stable"
    else:
        classification = "unstable"
    return StabilityReport(classification, leading, eigenvalues)


def critical_rayleigh(
    params: PhysicalParams, source: str = "oracle", rule=None
) -> float:
    """Rayleigh number where the conducting state loses stability (r = 1).

    r is exactly linear in Ra, so one evaluation at a reference Rayleigh
    number fixes the crossing.
    """
    reference = coefficients(params.with_rayleigh(1.0), source, rule)
    e1, e2, _, e4, e5, _, _ = reference.as_array()
    slope = float(e2 * e5 / (e1 * e4))
    if not slope > 0.0:
        raise ArithmeticError(f"r grows at rate {slope} per unit Ra; cannot cross 1")
    return 1.0 / slope


def taylor_ratio(
    params: PhysicalParams, beta: float | None = None, source: str = "closed_form"
) -> float:
    """First-order sensitivity (Ra*(beta)/Ra*(0) - 1) / beta.

    Tends to 1/2 as beta -> 0: weak stratification raises the onset of
    convection at half the relative rate of beta itself.
    """
    beta = params.beta if beta is None else beta
    if beta <= 0.0:
        raise ValueError("the ratio needs beta > 0")
    flat = critical_rayleigh(params.with_beta(0.0), source)
    lifted = critical_rayleigh(params.with_beta(beta), source)
    return (lifted / flat - 1.0) / beta


def minimize_over_length(
    beta: float = 0.0,
    prandtl: float = 10.0,
    gamma: float = 4.0 / 3.0,
    source: str = "closed_form",
    bracket: tuple[float, float] = (0.5, 10.0),
    tol: float = 1e-8,
) -> LengthOptimum:
    """Domain width that minimizes the critical Rayleigh number.

    Coarse scan over the bracket, then golden-section refinement to |dl| <=
    tol. Raises BracketError when the scan minimum sits on an edge. At
    beta = 0 the optimum is l = 2*sqrt(2) with Ra* = 27*pi^4/4.
    """
    lo, hi = bracket
    if not (0.0 < lo < hi):
        raise ValueError(f"bad bracket {bracket}")
    evaluations = 0

    def ra_star(length):
        nonlocal evaluations
        evaluations += 1
        p = PhysicalParams(
            beta=beta, prandtl=prandtl, rayleigh=0.0, gamma=gamma, length=length
        )
        return critical_rayleigh(p, source)

    grid = np.linspace(lo, hi, 41)
    values = [ra_star(l) for l in grid]
    k = int(np.argmin(values))
    if k == 0 or k == len(grid) - 1:
        raise BracketError(
            f"minimum over [{lo}, {hi}] sits at the edge l = {grid[k]:.6g}"
        )

    # golden-section on the bracketing triple
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    left, right = float(grid[k - 1]), float(grid[k + 1])
    x1 = right - invphi * (right - left)
    x2 = left + invphi * (right - left)
    f1, f2 = ra_star(x1), ra_star(x2)
    while right - left > tol:
        if f1 <= f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - invphi * (right - left)
            f1 = ra_star(x1)
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + invphi * (right - left)
            f2 = ra_star(x2)
    best = 0.5 * (left + right)
    return LengthOptimum(length=best, rayleigh=ra_star(best), evaluations=evaluations)
