"""Experiment configuration models.

Complex numbers may be given as a plain number, ``{"re": .., "im": ..}`` or
``{"mod_log": .., "arg": ..}`` (the value ``exp(mod_log) * exp(i * arg)``).
Unknown keys are rejected everywhere.
"""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Rect(_Strict):
    re: float
    im: float = 0.0


class PolarLog(_Strict):
    mod_log: float
    arg: float = 0.0


ComplexIn = Union[float, Rect, PolarLog]


class WeightsModel(_Strict):
    kind: Literal["constant", "periodic", "explicit"] = "constant"
    values: list[ComplexIn] = [1.0]
    tail: ComplexIn = 1.0


class ShiftOp(_Strict):
    kind: Literal["shift"]
    r: int = Field(1, ge=1)
    lam: ComplexIn = Field(1.0, alias="lambda")
    weights: WeightsModel = WeightsModel()


class DiffOp(_Strict):
    kind: Literal["diff"]
    r: int = Field(1, ge=1)
    lam: ComplexIn = Field(1.0, alias="lambda")


class TranslationOp(_Strict):
    kind: Literal["translation"]
    a: ComplexIn
    lam: ComplexIn = Field(1.0, alias="lambda")


class ConvolutionOp(_Strict):
    kind: Literal["convolution"]
    coeffs: list[ComplexIn] = Field(min_length=1)
    A: float = Field(1.0, gt=0)
    B: float = Field(0.0, ge=0)


OperatorModel = Annotated[
    Union[ShiftOp, DiffOp, TranslationOp, ConvolutionOp], Field(discriminator="kind")
]


class CoeffElement(_Strict):
    type: Literal["vector", "polynomial"]
    coeffs: list[ComplexIn] = []


class ExpTerm(_Strict):
    c: ComplexIn
    lam: ComplexIn = Field(alias="lambda")


class ExpSumElement(_Strict):
    type: Literal["exp_sum"]
    terms: list[ExpTerm] = []


ElementModel = Annotated[Union[CoeffElement, ExpSumElement], Field(discriminator="type")]


class SpaceModel(_Strict):
    kind: Literal["c0", "ellq"] = "ellq"
    q: float | None = Field(2.0, ge=1)


class DiskModel(_Strict):
    center: ComplexIn = 0.0
    radius: float = Field(1.0, gt=0)


class _Common(_Strict):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)
    space: SpaceModel = SpaceModel()
    disk: DiskModel = DiskModel()
    samples: int = Field(128, ge=8)
    degree_cap: int = Field(512, ge=1)
    seed: int = Field(0, ge=0)
    out: str | None = None


class DecideConfig(_Common):
    command: Literal["decide"]
    operators: list[ShiftOp] = Field(min_length=1)
    k_max: int = Field(3, ge=0)
    m_max: int = Field(200, ge=1)
    Ms: list[float] | None = None


class ConstructConfig(_Common):
    command: Literal["construct"]
    operators: list[OperatorModel] = Field(min_length=1)
    target: ElementModel
    anchor: ElementModel | None = None
    eps: float = Field(gt=0)
    budget: int = Field(10**5, ge=1)
    degree: int = Field(30, ge=0)
    max_attempts: int = Field(200, ge=1)


class DirichletConfig(_Common):
    command: Literal["dirichlet"]
    angles: list[float] | None = None
    scalars: list[ComplexIn] | None = None
    eps_schedule: list[float] | None = None
    n_max: int = Field(10**6, ge=1)


class OrbitConfig(_Common):
    command: Literal["orbit"]
    operators: list[OperatorModel] = Field(min_length=1)
    x: ElementModel
    target: ElementModel
    N: int = Field(ge=1)
    csv: str | None = None


class BallModel(_Strict):
    center: ElementModel
    radius: float = Field(gt=0)


class ProbeConfig(_Common):
    command: Literal["probe"]
    operators: list[OperatorModel] = Field(min_length=1)
    U: BallModel
    V: BallModel
    N: int = Field(ge=1)
    trials: int = Field(100, ge=1)


ExperimentConfig = Annotated[
    Union[DecideConfig, ConstructConfig, DirichletConfig, OrbitConfig, ProbeConfig],
    Field(discriminator="command"),
]


def json_schema():
    """JSON schema of a single experiment config (a batch is a list of these)."""
    return TypeAdapter(ExperimentConfig).json_schema(by_alias=True)
