import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any
import json
import logging
from pathlib import Path

import jsonschema
import numpy as np
from jsonschema import validate

from ..errors import TriodFlowError


@dataclass
class ToolResult:
    success: bool
    output: Any
    error: str = None
    error_type: str = None
    retryable: bool = False


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)


class WorkflowContext:
    def __init__(self):
        self.data = {}
        self.execution_log = []

    def save_checkpoint(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(
                {"data": self.data, "execution_log": self.execution_log},
                f,
                default=_jsonable,
            )

    def log_execution(self, tool_name, duration, input_data, output_data):
        entry = {
            "tool": tool_name,
            "duration": duration,
            "input": input_data,
            "output": output_data,
        }
        self.execution_log.append(entry)


class BaseTool(ABC):
    def __init__(self, **kwargs):
        self.logger = logging.getLogger(
            f"{self.__class__.__module__}.{self.__class__.__name__}"
        )
        self._configure(**kwargs)
        self.logger.debug("Initialized %s tool", self.__class__.__name__)

    def _configure(self, **kwargs):
        """Set instance-specific configurations"""
        for key, value in kwargs.items():
            if hasattr(self, key):
                setattr(self, key, value)

    @property
    @abstractmethod
    def definition(self):
        pass

    @property
    def input_schema(self):
        return self.definition.get("function", {}).get("parameters", {})

    @abstractmethod
    def fn(self, *args, **kwargs):
        pass

    def execute(self, context: WorkflowContext, **kwargs) -> ToolResult:
        try:
            validate(kwargs, self.input_schema)
        except jsonschema.exceptions.ValidationError as err:
            self.logger.error("Invalid arguments for %s: %s", self.__class__.__name__, err.message)
            return ToolResult(
                success=False,
                output=None,
                error=err.message,
                error_type="ConfigValidationError",
            )

        try:
            start_time = time.time()
            result = self.fn(**kwargs)
            duration = time.time() - start_time

            context.log_execution(
                tool_name=self.__class__.__name__,
                duration=duration,
                input_data=kwargs,
                output_data=result,
            )

            return ToolResult(success=True, output=result)
        except TriodFlowError as e:
            self.logger.debug("%s failed: %s", self.__class__.__name__, e)
            return ToolResult(
                success=False,
                output=None,
                error=str(e),
                error_type=type(e).__name__,
            )
        except Exception as e:
            self.logger.exception("Unexpected failure in %s", self.__class__.__name__)
            return ToolResult(
                success=False,
                output=None,
                error=str(e),
                error_type=type(e).__name__,
                retryable=True,
            )
