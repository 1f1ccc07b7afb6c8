"""
Run report emitted by the CLI
"""
from typing import Dict, Optional

from pydantic import BaseModel, Field


class RunReport(BaseModel):
    """Flat record of one CLI command; serialized as key=value lines"""

    command: str
    input_digest: str = ""
    parameters: Dict[str, str] = Field(default_factory=dict)
    results: Dict[str, str] = Field(default_factory=dict)
    rounds: Optional[int] = None
    wall_time: Optional[float] = None

    def without_timing(self) -> "RunReport":
        return self.model_copy(update={"wall_time": None})
