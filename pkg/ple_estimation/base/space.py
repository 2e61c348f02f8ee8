from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import readonly_array


class SpaceConfig(BaseModel):
    """A d-dimensional deployment region around the estimating node."""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(default=2, ge=1, le=3)
    field_radius: float = Field(gt=0)
    density: float = Field(gt=0, description="Nodes per unit length, area or volume")


class DeploymentField(BaseModel):
    """Node positions uniformly placed in a d-ball around ``origin``.

    Positions are exchangeable: their order carries no meaning.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    origin: np.ndarray
    positions: np.ndarray
    space: SpaceConfig

    @field_validator("origin", mode="before")
    @classmethod
    def _freeze_origin(cls, value):
        return readonly_array(value, ndim=1)

    @field_validator("positions", mode="before")
    @classmethod
    def _freeze_positions(cls, value):
        return readonly_array(value, ndim=2)

    @model_validator(mode="after")
    def validate_geometry(self):
        d = self.space.dimension
        if self.origin.shape != (d,):
            raise ValueError(f"Origin must have {d} coordinates")
        if self.positions.shape[1] != d:
            raise ValueError(f"Positions must have {d} coordinates")
        reach = np.linalg.norm(self.positions - self.origin, axis=1)
        if reach.size and reach.max() > self.space.field_radius * (1 + 1e-9):
            raise ValueError("Every position must lie within field_radius of the origin")
        return self

    @property
    def n_nodes(self) -> int:
        return int(self.positions.shape[0])

    def distances(self) -> np.ndarray:
        """Euclidean distance of every node to the origin, in input order."""
        return np.linalg.norm(self.positions - self.origin, axis=1)
