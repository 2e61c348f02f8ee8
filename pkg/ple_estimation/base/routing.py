from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .space import SpaceConfig


class RoutingMode(str, Enum):
    """How the kth-nearest-neighbour routing study is evaluated."""

    ANALYTIC = "analytic"
    MONTE_CARLO = "mc"


class RoutingScenario(BaseModel):
    """A node routing to its kth nearest neighbour inside a local ball.

    ``space.field_radius`` is the ball radius R; the neighbour count n is
    derived from the density and the ball volume.
    """

    model_config = ConfigDict(frozen=True)

    space: SpaceConfig
    gamma: float = Field(gt=0)
    shadow_sigma: float = Field(default=0.0, ge=0)
    k_max: int = Field(ge=1)

    @property
    def n_neighbors(self) -> int:
        from ..geometry import node_count

        return node_count(self.space)

    @property
    def alpha(self) -> float:
        return self.gamma / self.space.dimension

    @model_validator(mode="after")
    def validate_k_max(self):
        if self.k_max > self.n_neighbors:
            raise ValueError(
                f"k_max={self.k_max} exceeds the neighbour count {self.n_neighbors}"
            )
        return self
