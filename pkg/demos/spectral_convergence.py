"""Validating the 3-mode reduction against N-mode linear stability.

The reduction keeps a single vertical mode per field. An independent check
assembles the linearized operator pencil on N vertical modes and locates the
Rayleigh number where its leading eigenvalue crosses zero. With N = 1 the
pencil is, entry for entry, the linear block of the reduced system, so both
onsets must coincide; growing N shows how quickly the truncation converges.
"""

from anelor.lorenz import critical_rayleigh
from anelor.params import PhysicalParams
from anelor.spectral import (
    assemble_pencil,
    critical_rayleigh_spectral,
    leading_growth_rate,
)

for beta in (0.0, 0.2, 1.0):
    params = PhysicalParams(beta=beta, rayleigh=0.0)
    reduced = critical_rayleigh(params, "oracle")
    print(f"beta = {beta}: reduced-route Ra* = {reduced:.10f}")
    previous = None
    for n_modes in (1, 2, 4, 8):
        value = critical_rayleigh_spectral(params, n_modes=n_modes)
        move = "" if previous is None else f"  moved {abs(value - previous):.3e}"
        rel = abs(value - reduced) / reduced
        print(f"  N = {n_modes}:  Ra* = {value:.10f}  "
              f"(vs reduced {rel:.1e}){move}")
        previous = value
    print()

params = PhysicalParams(beta=0.2, rayleigh=0.0)
pencil = assemble_pencil(params, n_modes=4)
ra_star = critical_rayleigh_spectral(params, n_modes=4)
print("leading growth rate around the N = 4 onset:")
for factor in (0.5, 0.9, 1.0, 1.1, 2.0):
    rate = leading_growth_rate(pencil, factor * ra_star)
    print(f"  Ra = {factor:4.2f} Ra*: {rate:+.6e}")
