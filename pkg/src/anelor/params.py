"""Physical parameter bundle shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class PhysicalParams:
    """Parameters of the stratified convection layer.

    beta      compressibility of the background density exp(-beta*z); beta >= 0
    prandtl   Prandtl number, > 0
    rayleigh  Rayleigh number, >= 0; operations that determine a critical
              value ignore this field
    gamma     viscosity ratio (bulk over shear plus one third), >= 1/3
    length    horizontal period l of the layer (0, l) x (0, 1), > 0
    """

    beta: float = 0.0
    prandtl: float = 10.0
    rayleigh: float = 0.0
    gamma: float = 4.0 / 3.0
    length: float = 2.0 * math.sqrt(2.0)

    def __post_init__(self):
        for name in ("beta", "prandtl", "rayleigh", "gamma", "length"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.prandtl <= 0.0:
            raise ValueError(f"prandtl must be > 0, got {self.prandtl}")
        if self.rayleigh < 0.0:
            raise ValueError(f"rayleigh must be >= 0, got {self.rayleigh}")
        if self.gamma < 1.0 / 3.0:
            raise ValueError(f"gamma must be >= 1/3, got {self.gamma}")
        if self.length <= 0.0:
            raise ValueError(f"length must be > 0, got {self.length}")

    def with_rayleigh(self, rayleigh: float) -> "PhysicalParams":
        return replace(self, rayleigh=rayleigh)

    def with_beta(self, beta: float) -> "PhysicalParams":
        return replace(self, beta=beta)
