"""
Base engine class for nsvalue solvers and engines
"""
from typing import Any, Dict, Optional

import structlog

from src.utils.config import NSValueConfig

logger = structlog.get_logger()


class BaseEngine:
    """Holds the configuration and a logger bound to the engine name"""

    def __init__(self, config: Optional[NSValueConfig] = None, name: str = "engine"):
        self.config = config or NSValueConfig()
        self.name = name
        self.logger = structlog.get_logger().bind(engine=name)

    def _create_context_summary(self, context: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        """Flatten a context dict into loggable scalars"""
        if not context:
            return {}

        summary: Dict[str, Any] = {}
        for key, value in context.items():
            if isinstance(value, (str, int, float, bool)) or value is None:
                summary[key] = value
            elif isinstance(value, (list, tuple, dict)):
                summary[key] = f"{type(value).__name__}[{len(value)}]"
            else:
                summary[key] = str(value)
        return summary

    def log_processing_start(self, operation: str, context: Optional[Dict[str, Any]] = None):
        """Log the start of processing"""
        self.logger.info("Starting engine processing", operation=operation, **self._create_context_summary(context))

    def log_processing_complete(self, operation: str, result: Dict[str, Any]):
        """Log the completion of processing"""
        self.logger.info("Engine processing complete", operation=operation, **self._create_context_summary(result))
