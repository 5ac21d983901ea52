"""The damped-sine eigenbasis and its weighted orthonormality.

The vorticity operator Lap + beta * d/dz has eigenfunctions

    psi[parity, m, n] = phi[parity, m](x) * sqrt(2) sin(n pi z) exp(-beta z / 2)

which are orthonormal under the inner product weighted by exp(beta * z).
This script evaluates the Gram matrix of a handful of modes by quadrature,
checks the eigenvalue relation pointwise, and confirms the wall conditions.
"""

import numpy as np

from anelor.basis import (
    ModeIndex,
    QuadratureRule,
    mode_eval,
    vorticity_eigenvalue,
    vorticity_residual,
    weighted_inner_product,
)
from anelor.params import PhysicalParams

params = PhysicalParams(beta=0.9, rayleigh=0.0)
rule = QuadratureRule(48, params.length)
modes = [ModeIndex(parity, m, n)
         for parity in (-1, 1) for m in (1, 2) for n in (1, 2)]

print(f"beta = {params.beta}, l = {params.length:.6f}, "
      f"{len(modes)} modes, quadrature order {rule.order}")

gram = np.empty((len(modes), len(modes)))
for i, a in enumerate(modes):
    for j, b in enumerate(modes):
        gram[i, j] = weighted_inner_product(
            lambda x, z: mode_eval(a, x, z, params),
            lambda x, z: mode_eval(b, x, z, params),
            params.beta, rule)

print("\nweighted Gram matrix deviation from identity:",
      f"{np.max(np.abs(gram - np.eye(len(modes)))):.2e}")

print("\nmode (parity, m, n)   eigenvalue mu      max |(L - mu) psi|")
for j in modes:
    mu = vorticity_eigenvalue(j, params)
    resid = vorticity_residual(j, params)
    print(f"  ({j.parity:+d}, {j.horizontal}, {j.vertical})        "
          f"{mu:12.6f}        {resid:.2e}")

walls = max(abs(mode_eval(j, 0.3 * params.length, z, params))
            for j in modes for z in (0.0, 1.0))
print(f"\nlargest wall value over z = 0, 1: {walls:.1e} (exact zero expected)")
