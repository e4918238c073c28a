"""Run configuration with ``GSLAB_*`` environment overrides."""

from __future__ import annotations

import os
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from errors import InvalidParam

ENV_PREFIX = "GSLAB_"


class RunConfig(BaseModel):
    """Limits for the exhaustive searches plus the default output format."""

    enumeration_limit: int = Field(16, gt=0, description="Max qubits for 2^n group enumeration")
    statevec_limit: int = Field(14, gt=0, description="Max qubits for amplitude tables")
    orbit_limit: int = Field(12, gt=0, description="Max vertices for full LC orbit enumeration")
    pp_limit: int = Field(12, gt=0, description="Max vertices for the Pauli persistency search")
    bp_cap: int = Field(8, gt=0, description="Largest cover/partition size tried")
    canonical_limit: int = Field(12, gt=0, description="Max vertices for canonical_form")
    orbit_budget: int = Field(4096, gt=0, description="Max orbit members visited by one BFS")
    bp_search_limit: int = Field(24, gt=0, description="Max ones in a matrix for bp/bc search")
    kernel_limit: int = Field(20, gt=0, description="Max kernel dimension enumerated")
    schmidt_limit: int = Field(10, gt=0, description="Max vertices for the bipartition sweep")
    output_format: Literal["json", "dot", "text"] = "text"

    model_config = {"frozen": True}


DEFAULT_CONFIG = RunConfig()

_ENV_FIELDS = {
    "ENUMERATION_LIMIT": "enumeration_limit",
    "STATEVEC_LIMIT": "statevec_limit",
    "ORBIT_LIMIT": "orbit_limit",
    "PP_LIMIT": "pp_limit",
    "BP_CAP": "bp_cap",
    "CANONICAL_LIMIT": "canonical_limit",
    "ORBIT_BUDGET": "orbit_budget",
    "BP_SEARCH_LIMIT": "bp_search_limit",
    "KERNEL_LIMIT": "kernel_limit",
    "SCHMIDT_LIMIT": "schmidt_limit",
    "FORMAT": "output_format",
}


def load_config(**overrides: object) -> RunConfig:
    """Build a :class:`RunConfig` from ``.env``/environment plus ``overrides``.

    Raises:
        InvalidParam: if a ``GSLAB_*`` variable is not a valid value.
    """
    load_dotenv()
    values: dict[str, object] = {}
    for suffix, field in _ENV_FIELDS.items():
        raw = os.environ.get(ENV_PREFIX + suffix)
        if raw is None or raw == "":
            continue
        if field == "output_format":
            values[field] = raw.strip().lower()
            continue
        try:
            values[field] = int(raw)
        except ValueError as exc:
            raise InvalidParam(f"{ENV_PREFIX}{suffix} must be an integer, got {raw!r}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = first["loc"][0] if first["loc"] else "config"
        raise InvalidParam(f"invalid setting {field}: {first['msg']}") from exc
