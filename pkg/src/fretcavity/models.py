"""Data models for the fretcavity simulator."""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .const import (
    DEFAULT_N_CAV,
    HERMITIAN_TOL,
    MAX_N_CAV,
    MOMENT_CS_SLACK,
    POSITIVITY_TOL,
    QUBIT_DIM,
    TRACE_TOL,
    UNIT_VECTOR_TOL,
)
from .exceptions import (
    DimensionMismatchError,
    NonPhysicalStateError,
    UnphysicalMutualDecayError,
)

Vector3 = tuple[float, float, float]


def _frozen_array(value: Any) -> np.ndarray:
    """Copy to a complex array that cannot be written through."""
    arr = np.array(value, dtype=complex)
    arr.setflags(write=False)
    return arr


class HilbertLayout(BaseModel):
    """Ordered local dimensions of a composite Hilbert space."""

    model_config = ConfigDict(frozen=True)

    subsystem_dims: tuple[int, ...] = Field(
        min_length=1, description="Local dimensions (donor, acceptor, cavity)"
    )

    @field_validator("subsystem_dims")
    @classmethod
    def validate_dims(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(d < 1 for d in v):
            raise ValueError(f"Every local dimension must be >= 1, got {v}")
        return v

    @property
    def total_dim(self) -> int:
        """Product of the local dimensions."""
        return math.prod(self.subsystem_dims)

    @classmethod
    def donor_acceptor_cavity(cls, n_cav: int) -> HilbertLayout:
        """Layout for donor (2) x acceptor (2) x cavity (n_cav + 1)."""
        return cls(subsystem_dims=(QUBIT_DIM, QUBIT_DIM, n_cav + 1))


class EmitterRates(BaseModel):
    """Radiative, dephasing and non-radiative rates of the two emitters."""

    model_config = ConfigDict(frozen=True)

    gamma_D: float = Field(default=1.0, ge=0.0, description="Donor zero-phonon rate")
    gamma_A: float = Field(default=1.0, ge=0.0, description="Acceptor zero-phonon rate")
    gamma_prime: float = Field(default=0.0, ge=0.0, description="Extra radiative decay")
    gamma_phi: float = Field(default=0.0, ge=0.0, description="Pure dephasing rate")
    gamma_nr: float = Field(default=0.0, ge=0.0, description="Non-radiative rate")

    @property
    def gamma_tot_D(self) -> float:
        return self.gamma_D + self.gamma_prime

    @property
    def gamma_tot_A(self) -> float:
        return self.gamma_A + self.gamma_prime


class OrientationPreset(str, Enum):
    """Named dipole configurations: both dipoles parallel or perpendicular to d."""

    PARALLEL = "parallel"
    PERPENDICULAR = "perpendicular"


class GeometrySpec(BaseModel):
    """Separation, wavelength and dipole orientations of the emitter pair."""

    model_config = ConfigDict(frozen=True)

    separation: float = Field(ge=0.0, description="Separation d (units of wavelength)")
    wavelength: float = Field(default=1.0, gt=0.0, description="Wavelength lambda")
    mu_D: Vector3 = Field(default=(0.0, 0.0, 1.0), description="Donor dipole unit vector")
    mu_A: Vector3 = Field(default=(0.0, 0.0, 1.0), description="Acceptor dipole unit vector")
    d_hat: Vector3 = Field(default=(1.0, 0.0, 0.0), description="Interparticle axis")

    @field_validator("mu_D", "mu_A", "d_hat")
    @classmethod
    def validate_unit(cls, v: Vector3) -> Vector3:
        norm = math.sqrt(sum(c * c for c in v))
        if abs(norm - 1.0) > UNIT_VECTOR_TOL:
            raise ValueError(f"Expected a unit vector, got norm {norm}")
        return v

    @property
    def k(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def kd(self) -> float:
        return self.k * self.separation

    @classmethod
    def from_preset(
        cls,
        orientation: OrientationPreset | str,
        separation: float,
        wavelength: float = 1.0,
    ) -> GeometrySpec:
        """Equal dipoles either along or across the interparticle axis."""
        orientation = OrientationPreset(orientation)
        mu = (1.0, 0.0, 0.0) if orientation is OrientationPreset.PARALLEL else (0.0, 0.0, 1.0)
        return cls(
            separation=separation,
            wavelength=wavelength,
            mu_D=mu,
            mu_A=mu,
            d_hat=(1.0, 0.0, 0.0),
        )


class PumpMode(str, Enum):
    INCOHERENT = "incoherent"
    COHERENT = "coherent"
    NONE = "none"


class PumpSpec(BaseModel):
    """Incoherent pump/drain or coherent laser drive of the donor."""

    model_config = ConfigDict(frozen=True)

    mode: PumpMode = Field(default=PumpMode.INCOHERENT)
    Gamma: float = Field(default=0.0, ge=0.0, description="Incoherent pump/drain rate")
    eta: float = Field(default=0.0, description="Coherent drive amplitude")
    omega_L: float = Field(default=0.0, description="Laser detuning from the acceptor")


class SystemSpec(BaseModel):
    """Single source of truth for one simulation run (rates in units of gamma)."""

    model_config = ConfigDict(frozen=True)

    Delta: float = Field(default=0.0, description="Donor-acceptor detuning")
    delta: float = Field(default=0.0, description="Cavity-acceptor detuning")
    Omega: float = Field(default=0.0, description="Dipole-dipole shift")
    gamma_bar: float = Field(default=0.0, description="Mutual decay rate")
    rates: EmitterRates = Field(default_factory=EmitterRates)
    g_D: float = Field(default=0.0, description="Donor-cavity coupling")
    g_A: float = Field(default=0.0, description="Acceptor-cavity coupling")
    kappa: float = Field(default=1.0, ge=0.0, description="Cavity decay rate")
    pump: PumpSpec = Field(default_factory=PumpSpec)
    n_cav: int = Field(default=DEFAULT_N_CAV, ge=1, le=MAX_N_CAV, description="Photon number cutoff")

    @model_validator(mode="after")
    def validate_mutual_decay(self) -> SystemSpec:
        bound = math.sqrt(self.rates.gamma_D * self.rates.gamma_A)
        if abs(self.gamma_bar) > bound * (1.0 + 1e-12):
            raise UnphysicalMutualDecayError(self.gamma_bar, bound)
        return self

    @property
    def layout(self) -> HilbertLayout:
        return HilbertLayout.donor_acceptor_cavity(self.n_cav)

    def replace(self, **changes: Any) -> SystemSpec:
        """Validated copy; nested ``rates``/``pump`` accept partial dicts."""
        data = self.model_dump()
        for key, value in changes.items():
            if key in ("rates", "pump") and isinstance(value, dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        return SystemSpec.model_validate(data)


class OperatorSet(BaseModel):
    """Lowering operators embedded in the donor x acceptor x cavity space."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigma_D: np.ndarray
    sigma_A: np.ndarray
    a: np.ndarray
    layout: HilbertLayout

    @field_validator("sigma_D", "sigma_A", "a", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.layout.total_dim, dtype=complex)

    @staticmethod
    def sigma_z(sigma: np.ndarray) -> np.ndarray:
        """sigma^z = [sigma^dagger, sigma]."""
        return sigma.conj().T @ sigma - sigma @ sigma.conj().T

    @property
    def excitation_number(self) -> np.ndarray:
        """sigma_D^dag sigma_D + sigma_A^dag sigma_A + a^dag a."""
        return sum(op.conj().T @ op for op in (self.sigma_D, self.sigma_A, self.a))


class Dissipator(BaseModel):
    """One Lindblad channel: rate times D[collapse]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rate: float = Field(ge=0.0)
    collapse: np.ndarray
    label: str = ""

    @field_validator("collapse", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)


class CollectiveDissipator(BaseModel):
    """The gamma_bar cross term between sigma_D and sigma_A."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gamma_bar: float
    sigma_D: np.ndarray
    sigma_A: np.ndarray


class DissipatorList(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: tuple[Dissipator, ...] = ()
    collective: CollectiveDissipator | None = None


class DensityMatrix(BaseModel):
    """Hermitian, unit-trace, positive semidefinite state."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    layout: HilbertLayout

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_state(self) -> DensityMatrix:
        dim = self.layout.total_dim
        if self.matrix.shape != (dim, dim):
            raise DimensionMismatchError((dim, dim), self.matrix.shape, "density matrix")
        herm = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if herm > TRACE_TOL:
            raise NonPhysicalStateError(f"not Hermitian (deviation {herm:.3e})")
        trace = complex(np.trace(self.matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise NonPhysicalStateError(f"trace {trace:.12g} != 1")
        min_eig = float(np.linalg.eigvalsh(self.matrix).min())
        if min_eig < -POSITIVITY_TOL:
            raise NonPhysicalStateError(f"negative eigenvalue {min_eig:.3e}")
        return self

    @classmethod
    def from_ket(cls, psi: Any, layout: HilbertLayout) -> DensityMatrix:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(matrix=np.outer(psi, psi.conj()), layout=layout)


class Liouvillian(BaseModel):
    """Superoperator acting on row-major vectorised density matrices."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    layout: HilbertLayout

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    times: tuple[float, ...]
    states: tuple[DensityMatrix, ...]


class MomentState(BaseModel):
    """Second-order correlators of the linearised theory."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p_D: float = Field(ge=-MOMENT_CS_SLACK, le=1.0 + MOMENT_CS_SLACK)
    p_A: float = Field(ge=-MOMENT_CS_SLACK, le=1.0 + MOMENT_CS_SLACK)
    n: float = Field(ge=-MOMENT_CS_SLACK)
    c_DA: complex = Field(description="<sigma_D^dag sigma_A>")
    c_aD: complex = Field(description="<a^dag sigma_D>")
    c_aA: complex = Field(description="<a^dag sigma_A>")

    @field_validator("c_DA", "c_aD", "c_aA", mode="before")
    @classmethod
    def to_complex(cls, v: Any) -> complex:
        return complex(v)

    @model_validator(mode="after")
    def validate_cauchy_schwarz(self) -> MomentState:
        bound = math.sqrt(max(self.p_D, 0.0) * max(self.p_A, 0.0)) + MOMENT_CS_SLACK
        if abs(self.c_DA) > bound:
            raise ValueError(
                f"|c_DA| = {abs(self.c_DA):.3e} exceeds sqrt(p_D p_A) = {bound:.3e}"
            )
        return self


class EffectiveRates(BaseModel):
    """Cavity-modified decay rates from adiabatic elimination of the field."""

    model_config = ConfigDict(frozen=True)

    gamma_A_eff: float = Field(ge=0.0)
    gamma_D_eff: float = Field(ge=0.0)
    gamma_AD_eff: float = Field(ge=0.0)
    cooperativity_A: float = Field(ge=0.0, description="C_A(0) = 4 g_A^2/(kappa gamma_A)")
    cooperativity_D: float = Field(ge=0.0, description="C_D(Delta) = 4 g_D^2/(kappa gamma_D)")
    adiabatic_valid: bool = Field(description="kappa >> g_D, g_A holds")


class PolaritonSet(BaseModel):
    """Single-excitation polaritons: energies ascending, Hopfield rows (D, C, A)."""

    model_config = ConfigDict(frozen=True)

    energies: tuple[float, float, float]
    hopfield: tuple[Vector3, Vector3, Vector3]

    @model_validator(mode="after")
    def validate_completeness(self) -> PolaritonSet:
        weights = np.asarray(self.hopfield)
        if not np.allclose(weights.sum(axis=1), 1.0, atol=1e-10):
            raise ValueError("Hopfield rows must sum to 1")
        if not np.allclose(weights.sum(axis=0), 1.0, atol=1e-10):
            raise ValueError("Hopfield columns must sum to 1")
        return self

    @property
    def lower(self) -> Vector3:
        return self.hopfield[0]

    @property
    def middle(self) -> Vector3:
        return self.hopfield[1]

    @property
    def upper(self) -> Vector3:
        return self.hopfield[2]


class Normalization(str, Enum):
    PER_GAMMA = "per_Gamma"  # divided by the incoherent pump rate
    PER_ETA = "per_eta"
    RAW = "raw"


class FlowReport(BaseModel):
    """Energy flows and populations extracted from a state."""

    model_config = ConfigDict(frozen=True)

    J: float
    J_D: float
    J_A: float
    J_r: float
    p_D: float
    p_A: float
    n: float
    normalization: Normalization = Normalization.RAW

    @model_validator(mode="after")
    def validate_finite(self) -> FlowReport:
        for name in ("J", "J_D", "J_A", "J_r", "p_D", "p_A", "n"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")
        return self


class FormulaId(str, Enum):
    FREE_SPACE_FULL = "free_space_full"
    FREE_SPACE_SIMPLE = "free_space_simple"
    DISTINCT_EMITTERS = "distinct_emitters"
    COHERENT_FREE = "coherent_free"
    CAVITY_COOPERATIVITY = "cavity_cooperativity"
    COHERENT_CAVITY = "coherent_cavity"
    INTERMEDIATE_LEVEL = "intermediate_level"


class FlowResult(BaseModel):
    """Value of a closed-form flow expression, tagged with its origin."""

    model_config = ConfigDict(frozen=True)

    value: float
    formula_id: FormulaId
    singular: bool = Field(default=False, description="Evaluated on a singular surface")
    extras: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_finite(self) -> FlowResult:
        if not self.singular and not math.isfinite(self.value):
            raise ValueError("Non-finite flow value must be flagged singular")
        return self


class SolverKind(str, Enum):
    MASTER_EQUATION = "master_equation"
    MOMENTS = "moments"
    ANALYTIC = "analytic"


class AxisScale(str, Enum):
    LIN = "lin"
    LOG = "log"
    VALUES = "values"


class AxisSpec(BaseModel):
    """One swept parameter: a lin/log range or an explicit list of values."""

    model_config = ConfigDict(frozen=True)

    name: str
    scale: AxisScale = AxisScale.LIN
    start: float | None = None
    stop: float | None = None
    count: int | None = None
    values: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def validate_axis(self) -> AxisSpec:
        if self.scale is AxisScale.VALUES:
            if self.values is None or len(self.values) < 2:
                raise ValueError(f"Axis {self.name}: need at least 2 values")
            if not all(math.isfinite(v) for v in self.values):
                raise ValueError(f"Axis {self.name}: non-finite value")
            return self
        if self.start is None or self.stop is None or self.count is None:
            raise ValueError(f"Axis {self.name}: need min,max,count")
        if self.count < 2:
            raise ValueError(f"Axis {self.name}: point count must be >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError(f"Axis {self.name}: range must be finite")
        if self.scale is AxisScale.LOG and (self.start <= 0 or self.stop <= 0):
            raise ValueError(f"Axis {self.name}: log range must be positive")
        return self

    def grid(self) -> np.ndarray:
        if self.scale is AxisScale.VALUES:
            return np.asarray(self.values, dtype=float)
        if self.scale is AxisScale.LOG:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def size(self) -> int:
        return len(self.values) if self.scale is AxisScale.VALUES else int(self.count)


class SweepConfig(BaseModel):
    """Resolved sweep configuration."""

    model_config = ConfigDict(frozen=True)

    preset: str | None = None
    axes: tuple[AxisSpec, ...] = Field(min_length=1)
    fixed: dict[str, float | str] = Field(default_factory=dict)
    outputs: tuple[str, ...] = Field(min_length=1)
    solvers: tuple[SolverKind, ...] = (SolverKind.ANALYTIC,)
    normalization: Normalization = Normalization.RAW
    n_cav: int = Field(default=DEFAULT_N_CAV, ge=1, le=MAX_N_CAV)
    converge: bool = False
    output_path: str | None = None

    @property
    def point_count(self) -> int:
        return math.prod(axis.size for axis in self.axes)


class SweepResult(BaseModel):
    """Header metadata plus one row per grid point."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    header: dict[str, str]
    table: pd.DataFrame

    @property
    def row_count(self) -> int:
        return len(self.table)


class CheckResult(BaseModel):
    """Outcome of one analytic-versus-numeric cross-check."""

    model_config = ConfigDict(frozen=True)

    name: str
    description: str
    passed: bool
    value: float = Field(description="Measured deviation or quantity")
    tolerance: float = Field(description="Bound the value is compared against")
    detail: str = ""


def is_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """Entrywise check max|A - A^dagger| < tol."""
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) < tol)
