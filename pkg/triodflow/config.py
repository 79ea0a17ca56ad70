import os
from dotenv import load_dotenv
import logging


class ToolConfig:
    _instance = None

    def __init__(self):
        load_dotenv()
        self.config = {
            'log_level': os.getenv('TRIODFLOW_LOG_LEVEL', 'WARNING'),
            'output_dir': os.getenv('TRIODFLOW_OUTPUT_DIR'),
        }

    @classmethod
    def get(cls, key):
        if not cls._instance:
            cls._instance = ToolConfig()
        return cls._instance.config.get(key)

    @classmethod
    def reset(cls):
        cls._instance = None


class FunctionRegistry:
    _tools = {}

    @classmethod
    def register(cls, tool_class):
        cls._tools[tool_class().definition['function']['name']] = tool_class
        return tool_class

    @classmethod
    def get_tools(cls):
        return [cls._tools[name]().definition for name in cls._tools]

    @classmethod
    def get(cls, name):
        if name not in cls._tools:
            raise KeyError(f"No tool registered under '{name}'")
        return cls._tools[name]


def setup_logging():
    """Configure logging for the triodflow package."""
    logger = logging.getLogger('')
    log_level = os.getenv('TRIODFLOW_LOG_LEVEL', 'WARNING').upper()
    level = getattr(logging, log_level, logging.WARNING)
    if not isinstance(level, int):
        level = logging.WARNING

    # Clear existing handlers if any
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler()
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    logger.setLevel(level)
    logger.propagate = False

# Initialize logging when config is imported
setup_logging()
