"""Physical constants for dry air (standard values)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class DryAir:
    c_p: float = 1004.0   # J kg^-1 K^-1
    R: float = 287.0      # J kg^-1 K^-1
    g: float = 9.81       # m s^-2
    p0: float = 1.0e5     # Pa, reference pressure

    @property
    def kappa(self) -> float:
        return self.R / self.c_p

    @property
    def c_v(self) -> float:
        return self.c_p - self.R

    @property
    def gamma(self) -> float:
        return self.c_p / self.c_v


CONST = DryAir()

# Reference Exner pressure for 0-D energy diagnostics (no pressure state
# exists in a pointwise transfer, only differences matter).
PI_REF = 1.0
