"""The resolved configuration of one command-line run, echoed into every JSON object the run prints."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ._config import get_default_precision_bits

type ConfigValue = str | int | float | bool | list[int] | None


class RunConfig(BaseModel):
    """
    Every knob of a run with its default.

    Knobs that only some subcommands read (ε, the digit cap, the g_psi method, ...) live in `parameters`.
    A window of None means a quarter of the horizon.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    subcommand: str
    map_source: str | None = None
    psi_source: str | None = None
    horizon: int = Field(ge=1, default=1_000)
    window: int | None = Field(ge=1, default=None)
    depth: int = Field(ge=0, default=10)
    tolerance: float = Field(gt=0, default=0.1)
    output_format: Literal["json", "csv"] = "json"
    seed: int = 0
    maximum_number_of_workers: int = Field(ge=1, default=1)
    precision_bits: int = Field(ge=53, default_factory=get_default_precision_bits)
    parameters: dict[str, ConfigValue] = Field(default_factory=dict)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
