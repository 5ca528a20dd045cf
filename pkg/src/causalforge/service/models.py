"""Request bodies for the HTTP API.

These models check JSON shape only. Semantic rules (algorithm names,
parameter ranges, prior consistency) live in the task layer; a submission is
converted with to_task_config, which runs that validation and raises
InvalidConfig or PriorConflict on bad input.
"""

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..pipeline import TaskConfig


class GraphSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: str = "erdos_renyi"
    d: int = 10
    e: int = 20
    rank: Optional[int] = None
    weight_range: Tuple[float, float] = (0.5, 2.0)
    seed: int = 0


class NoiseSpecBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str = "gauss"
    scale: float = 1.0


class SimulateSourceBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["simulate"] = "simulate"
    graph: GraphSpec = Field(default_factory=GraphSpec)
    sem: str = "linear"
    noise: NoiseSpecBody = Field(default_factory=NoiseSpecBody)
    n: int = 1000


class CsvSourceBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["csv"]
    path: str
    truth_path: Optional[str] = None


DataSourceBody = Union[SimulateSourceBody, CsvSourceBody]


class PriorBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    required: List[Tuple[int, int]] = Field(default_factory=list)
    forbidden: List[Tuple[int, int]] = Field(default_factory=list)


class NeighborhoodBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["off", "lasso"] = "off"
    lambda_ns: Optional[float] = None


class TaskSubmission(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = 1
    data_source: DataSourceBody = Field(
        default_factory=SimulateSourceBody, discriminator="kind"
    )
    algorithm: str = "notears"
    params: dict = Field(default_factory=dict)
    prior: Optional[PriorBody] = None
    neighborhood_selection: NeighborhoodBody = Field(default_factory=NeighborhoodBody)
    threshold: Optional[float] = None
    seed: int = 0

    def to_task_config(self) -> TaskConfig:
        return TaskConfig.from_dict(self.model_dump(mode="json")).validate()


class AnnotationDelta(BaseModel):
    model_config = ConfigDict(extra="forbid")

    required: List[Tuple[int, int]] = Field(default_factory=list)
    forbidden: List[Tuple[int, int]] = Field(default_factory=list)
