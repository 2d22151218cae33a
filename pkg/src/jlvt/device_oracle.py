"""Analytical threshold-voltage model of a junctionless double-gate MOSFET.

This is the slow reference the surrogate is trained against. The threshold
voltage is the largest of three per-region values; region 2 is the damaged
segment carrying the trap charge N_f.

The barrier product b_i*c_i depends implicitly on the region threshold and
is supplied through :class:`BarrierSpec`. The default is a stand-in,

    b_i*c_i = alpha_i * (V_D + beta_i) * max(0, 1 + gamma_i * V_Ti)

which is drain dependent and V_Ti implicit, but it is NOT the published
expression of the underlying analytical model. Swap it out when the real
coefficients are available.
"""
from dataclasses import dataclass, field
import math
from typing import Callable, Sequence, Tuple

from .errors import ConvergenceError, DataError, DomainError

NM_TO_CM = 1e-7

Q_ELEMENTARY = 1.602e-19  # C
EPS_OX_SIO2 = 3.9 * 8.854e-14  # F/cm

INPUT_NAMES = ("L", "Ld", "tsi", "tox", "VC", "VD")
REGIONS = (1, 2, 3)


@dataclass(frozen=True)
class DeviceInputs:
    """One operating point. Lengths in nm, voltages in V."""

    L: float
    Ld: float
    tsi: float
    tox: float
    VC: float
    VD: float

    def __post_init__(self):
        values = self.as_tuple()
        if not all(math.isfinite(v) for v in values):
            raise DataError(f"non-finite device input: {values}")
        if not self.L > 0:
            raise DataError(f"L must be > 0, got {self.L}")
        if not 0 <= self.Ld <= self.L:
            raise DataError(f"Ld must lie in [0, L], got Ld={self.Ld}, L={self.L}")
        if not self.tsi > 0:
            raise DataError(f"tsi must be > 0, got {self.tsi}")
        if not self.tox > 0:
            raise DataError(f"tox must be > 0, got {self.tox}")

    def as_tuple(self) -> Tuple[float, ...]:
        return (self.L, self.Ld, self.tsi, self.tox, self.VC, self.VD)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "DeviceInputs":
        if len(values) != len(INPUT_NAMES):
            raise DataError(f"expected {len(INPUT_NAMES)} inputs, got {len(values)}")
        return cls(*(float(v) for v in values))


BarrierFn = Callable[[int, float, float, DeviceInputs], float]


@dataclass(frozen=True)
class StandInBarrier:
    """Default barrier product alpha_i*(V_D + beta_i)*max(0, 1 + gamma_i*V_Ti)."""

    alpha: Tuple[float, float, float] = (0.02, 0.012, 0.03)
    beta: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    gamma: Tuple[float, float, float] = (0.2, 0.2, 0.2)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            vals = getattr(self, name)
            if len(vals) != 3:
                raise DataError(f"{name} needs one value per region, got {vals}")
            object.__setattr__(self, name, tuple(float(v) for v in vals))
        if min(self.alpha) < 0 or min(self.beta) < 0:
            raise DataError("alpha and beta must be >= 0")

    def __call__(self, region, vd, vti_guess, geometry):
        i = region - 1
        return self.alpha[i] * (vd + self.beta[i]) * max(0.0, 1.0 + self.gamma[i] * vti_guess)


@dataclass(frozen=True)
class ConstantBarrier:
    """Per-region constant products, independent of V_Ti. Handy for closed forms."""

    values: Tuple[float, float, float]

    def __call__(self, region, vd, vti_guess, geometry):
        return self.values[region - 1]


@dataclass(frozen=True)
class BarrierSpec:
    product: BarrierFn = field(default_factory=StandInBarrier)
    tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self):
        if not self.tol > 0:
            raise DataError(f"barrier tolerance must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise DataError(f"max_iter must be >= 1, got {self.max_iter}")

    @classmethod
    def constant(cls, values, **kw) -> "BarrierSpec":
        if len(values) != 3:
            raise DataError("constant barrier needs three values")
        return cls(ConstantBarrier(tuple(float(v) for v in values)), **kw)

    @classmethod
    def zero(cls) -> "BarrierSpec":
        return cls.constant((0.0, 0.0, 0.0))


@dataclass(frozen=True)
class OracleParams:
    q: float = Q_ELEMENTARY
    N_sub: float = 1e19  # cm^-3
    N_f: float = 1e12  # cm^-2
    V_FB0: float = 1.0  # V
    eps_ox: float = EPS_OX_SIO2  # F/cm
    barrier: BarrierSpec = field(default_factory=BarrierSpec)

    def __post_init__(self):
        if not self.q > 0:
            raise DataError(f"q must be > 0, got {self.q}")
        if not self.N_sub >= 0:
            raise DataError(f"N_sub must be >= 0, got {self.N_sub}")
        if not self.N_f >= 0:
            raise DataError(f"N_f must be >= 0, got {self.N_f}")
        if not self.eps_ox > 0:
            raise DataError(f"eps_ox must be > 0, got {self.eps_ox}")


def oxide_capacitance(params: OracleParams, inputs: DeviceInputs) -> float:
    """C_ox in F/cm^2."""
    return params.eps_ox / (inputs.tox * NM_TO_CM)


def vt0(params: OracleParams, inputs: DeviceInputs) -> float:
    """Undamaged-device threshold: the four-term flat-band expression."""
    cox = oxide_capacitance(params, inputs)
    if not cox > 0 or not math.isfinite(cox):
        raise DomainError(f"degenerate oxide capacitance {cox}")
    tsi = inputs.tsi * NM_TO_CM
    qn = params.q * params.N_sub
    value = params.V_FB0 + inputs.VC - qn * tsi / (2 * cox) - qn * tsi**2 / (8 * cox)
    if not math.isfinite(value):
        raise DomainError(f"vt0 is not finite (C_ox={cox})")
    return value


def trap_shift(params: OracleParams, inputs: DeviceInputs) -> float:
    """q*N_f/C_ox, the threshold drop applied to the damaged region only."""
    return params.q * params.N_f / oxide_capacitance(params, inputs)


def vti(params: OracleParams, inputs: DeviceInputs, region: int) -> float:
    """Threshold of one region, solved by fixed-point iteration from V_T0."""
    if region not in REGIONS:
        raise DataError(f"region must be one of {REGIONS}, got {region}")
    guess = base = vt0(params, inputs)
    if region == 2:
        base -= trap_shift(params, inputs)
    spec = params.barrier
    residual = math.inf
    for _ in range(spec.max_iter):
        prod = spec.product(region, inputs.VD, guess, inputs)
        if not prod >= 0:
            raise DomainError(f"negative barrier product {prod} in region {region}")
        new = base - 2.0 * math.sqrt(prod)
        residual = abs(new - guess)
        guess = new
        if residual < spec.tol:
            return new
    raise ConvergenceError(
        f"region {region} did not converge in {spec.max_iter} iterations "
        f"(last step {residual:.3e} V)",
        last_iterate=guess,
        residual=residual,
    )


def threshold_voltage(params: OracleParams, inputs: DeviceInputs) -> float:
    return max(vti(params, inputs, i) for i in REGIONS)
