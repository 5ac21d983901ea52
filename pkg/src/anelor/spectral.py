"""N-mode linear stability of the conducting state, validating the reduction.

The linearized equations couple one streamfunction parity family to one
temperature parity family (each coupling term carries exactly one horizontal
derivative, which flips parity, so the complementary pair is a mirror copy).
Expanding

    psi = sum_n A_n(t) * psi[-1, m, n],   tau = sum_n B_n(t) * psi[+1, m, n]

and projecting gives a generalized eigenproblem M xdot = L(Ra) x on the
stacked vector x = (A_1..A_N, B_1..B_N), with

    M      = blockdiag(I, G); the vorticity rows are normalized by their
             diagonal time-derivative projection, and G is the unweighted
             Gram matrix of the temperature modes (identity at beta = 0)
    L(Ra)  = L0 + sqrt(Ra) * L1, where L0 holds the diffusion blocks and L1
             only the buoyancy/source cross blocks

All entries are computed by quadrature with the same integrands the
coefficient oracle uses, so the N = 1 pencil reproduces the reduced model's
critical Rayleigh number by construction rather than by coincidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import ModeGrid, ModeIndex, QuadratureRule
from .params import PhysicalParams

__all__ = [
    "LinearOperatorPencil",
    "SpectralBracketError",
    "assemble_pencil",
    "leading_growth_rate",
    "critical_rayleigh_spectral",
]


class SpectralBracketError(RuntimeError):
    """No sign change of the growth rate inside the expandable bracket."""


@dataclass(frozen=True)
class LinearOperatorPencil:
    """Mass matrix and stiffness split of the linearized truncation.

    The stiffness at Rayleigh number Ra is l0 + sqrt(Ra) * l1.
    """

    params: PhysicalParams
    m: int
    n_modes: int
    mass: np.ndarray
    l0: np.ndarray
    l1: np.ndarray


def assemble_pencil(
    params: PhysicalParams,
    m: int = 1,
    n_modes: int = 4,
    rule: QuadratureRule | None = None,
    check_convergence: bool = False,
) -> LinearOperatorPencil:
    """Project the linearized equations onto n_modes vertical modes.

    The Rayleigh number of `params` is ignored; it enters only through the
    sqrt(Ra) factor applied to l1 later. With check_convergence=True the
    assembly is repeated at twice the quadrature order and a relative entry
    move above 1e-9 raises ValueError.
    """
    if n_modes < 1 or m < 1:
        raise ValueError("need n_modes >= 1 and m >= 1")
    if rule is None:
        rule = QuadratureRule(64, params.length)
    matrices = _assemble_matrices(params, m, n_modes, rule)
    if check_convergence:
        fine = _assemble_matrices(
            params, m, n_modes, QuadratureRule(2 * rule.order, params.length)
        )
        for name in ("mass", "l0", "l1"):
            a, b = matrices[name], fine[name]
            scale = max(float(np.max(np.abs(b))), 1.0)
            if float(np.max(np.abs(a - b))) > 1e-9 * scale:
                raise ValueError(f"{name} entries move at double quadrature order")
    return LinearOperatorPencil(params=params, m=m, n_modes=n_modes, **matrices)


def _assemble_matrices(params, m, n_modes, rule):
    _, Z, W = rule.grid()
    beta = params.beta
    pr = params.prandtl
    Eb = np.exp(beta * Z)
    E2 = np.exp(2.0 * beta * Z)

    psi = [ModeGrid(ModeIndex(-1, m, n), params, rule) for n in range(1, n_modes + 1)]
    tau = [ModeGrid(ModeIndex(+1, m, n), params, rule) for n in range(1, n_modes + 1)]

    def quad(field):
        return float(np.sum(W * field))

    def diffused(mode: ModeGrid):
        # Lap of the damped vorticity component, expanded in psi derivatives
        lap = mode.laplacian()
        lap_z = mode.partial(2, 1) + mode.partial(0, 3)
        bilap = mode.partial(4, 0) + 2.0 * mode.partial(2, 2) + mode.partial(0, 4)
        return -Eb * (
            bilap
            + 4.0 * beta * lap_z
            + beta**2 * lap
            + 4.0 * beta**2 * mode.partial(0, 2)
            + 2.0 * beta**3 * mode.partial(0, 1)
        )

    n = n_modes
    mass = np.zeros((2 * n, 2 * n))
    l0 = np.zeros((2 * n, 2 * n))
    l1 = np.zeros((2 * n, 2 * n))

    # vorticity rows: time-derivative projections are diagonal by weighted
    # orthonormality; normalize each row by its diagonal entry
    omega_gram = np.empty(n)
    for i in range(n):
        vort_i = -Eb * (psi[i].laplacian() + beta * psi[i].partial(0, 1))
        omega_gram[i] = quad(vort_i * psi[i].partial())
    for i in range(n):
        mass[i, i] = 1.0
        for j in range(n):
            entry = quad(Eb * diffused(psi[j]) * psi[i].partial())
            entry += params.gamma * beta**2 * quad(
                E2 * psi[j].partial(2, 0) * psi[i].partial()
            )
            l0[i, j] = pr * entry / omega_gram[i]
            l1[i, n + j] = (
                -pr * quad(Eb * tau[j].partial(1, 0) * psi[i].partial()) / omega_gram[i]
            )

    # temperature rows: unweighted Gram mass, weighted diffusion
    for i in range(n):
        for j in range(n):
            mass[n + i, n + j] = quad(tau[j].partial() * tau[i].partial())
            l0[n + i, n + j] = quad(Eb * tau[j].laplacian() * tau[i].partial())
            l1[n + i, j] = quad(Eb * psi[j].partial(1, 0) * tau[i].partial())

    return {"mass": mass, "l0": l0, "l1": l1}


def leading_growth_rate(pencil: LinearOperatorPencil, rayleigh: float) -> float:
    """Maximum real part over the 2N generalized eigenvalues at this Ra."""
    if rayleigh < 0.0:
        raise ValueError("rayleigh must be nonnegative")
    stiffness = pencil.l0 + math.sqrt(rayleigh) * pencil.l1
    eigenvalues = np.linalg.eigvals(np.linalg.solve(pencil.mass, stiffness))
    return float(np.max(eigenvalues.real))


def critical_rayleigh_spectral(
    params: PhysicalParams,
    m: int = 1,
    n_modes: int = 1,
    rule: QuadratureRule | None = None,
    tol: float = 1e-10,
) -> float:
    """Rayleigh number where the truncated system's growth rate crosses zero.

    Bisection from the bracket [0, 1e5], expanding the upper edge tenfold
    until the growth rate turns positive, then halving until |growth| < tol.
    """
    pencil = assemble_pencil(params, m, n_modes, rule)
    lo, hi = 0.0, 1e5
    if leading_growth_rate(pencil, lo) >= 0.0:
        raise SpectralBracketError("growth rate at Ra = 0 is not negative")
    while leading_growth_rate(pencil, hi) < 0.0:
        hi *= 10.0
        if hi > 1e12:
            raise SpectralBracketError("no instability below Ra = 1e12")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        growth = leading_growth_rate(pencil, mid)
        if abs(growth) < tol:
            return mid
        if growth > 0.0:
            hi = mid
        else:
            lo = mid
    raise ArithmeticError("bisection failed to settle the growth rate")
