import pytest

import triodflow  # noqa: F401  registers every tool
from triodflow.base import WorkflowContext
from triodflow.config import FunctionRegistry


@pytest.fixture
def tools():
    return [tool_class() for tool_class in FunctionRegistry._tools.values()]


@pytest.fixture
def context():
    return WorkflowContext()
