"""Transfer scheme configurations.

A scheme is identified by the transfer method (1: property-fraction
transfers with free time levels, 2: mass-weighted flux-form transfers),
the continuity off-centering alpha_c, the property off-centering alpha_a
(used for both temperature and momentum), and - for method 1 only - the
time levels q (numerator) and r (denominator) of the mass ratio.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum


class Method(Enum):
    METHOD1 = 1
    METHOD2 = 2


class TimeLevel(Enum):
    M = "m"
    NP1 = "n+1"


@dataclass(frozen=True)
class SchemeConfig:
    method: Method
    alpha_c: int
    alpha_a: int
    q: TimeLevel | None = None
    r: TimeLevel | None = None

    def __post_init__(self):
        if self.alpha_c not in (0, 1) or self.alpha_a not in (0, 1):
            raise ValueError("off-centering coefficients must be 0 or 1")
        if self.method is Method.METHOD1:
            if self.q is None or self.r is None:
                raise ValueError("method 1 requires time levels q and r")
        else:
            if self.q is not None or self.r is not None:
                raise ValueError("method 2 takes no q/r time levels")

    @property
    def label(self) -> str:
        num = self.scheme_number
        if num is not None:
            return f"scheme{num}"
        if self.method is Method.METHOD1:
            return (f"m1_c{self.alpha_c}_a{self.alpha_a}"
                    f"_q{'m' if self.q is TimeLevel.M else 'np1'}"
                    f"_r{'m' if self.r is TimeLevel.M else 'np1'}")
        return f"m2_c{self.alpha_c}_a{self.alpha_a}"

    @property
    def scheme_number(self) -> int | None:
        """Canonical number (1-6) for the named schemes, else None."""
        for n, cfg in NAMED_SCHEMES.items():
            if cfg == self:
                return n
        return None


def method1(alpha_c, alpha_a, q, r) -> SchemeConfig:
    return SchemeConfig(Method.METHOD1, alpha_c, alpha_a, q, r)


def method2(alpha_c, alpha_a) -> SchemeConfig:
    return SchemeConfig(Method.METHOD2, alpha_c, alpha_a)


M, NP1 = TimeLevel.M, TimeLevel.NP1

NAMED_SCHEMES: dict[int, SchemeConfig] = {
    1: method1(0, 0, M, NP1),
    2: method1(0, 1, M, M),
    3: method1(1, 0, NP1, NP1),
    4: method1(1, 1, NP1, M),
    5: method2(0, 0),
    6: method2(1, 1),
}


def all_method1() -> list[SchemeConfig]:
    return [method1(ac, aa, q, r)
            for ac, aa, q, r in itertools.product((0, 1), (0, 1), (M, NP1), (M, NP1))]


def all_method2() -> list[SchemeConfig]:
    return [method2(ac, aa) for ac, aa in itertools.product((0, 1), (0, 1))]


def all_schemes() -> list[SchemeConfig]:
    return all_method1() + all_method2()


def scheme_by_name(name: str) -> SchemeConfig:
    """Resolve '1'..'6', 'scheme3', or a label like 'm1_c0_a1_qm_rnp1'."""
    name = name.strip().lower()
    if name.startswith("scheme"):
        name = name[len("scheme"):]
    if name.isdigit() and int(name) in NAMED_SCHEMES:
        return NAMED_SCHEMES[int(name)]
    for cfg in all_schemes():
        if cfg.label == name:
            return cfg
    raise ValueError(f"unknown scheme: {name!r}")
