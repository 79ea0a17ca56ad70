from .config import (
    RUN_CONFIG_SCHEMA,
    InitialSpec,
    OutputConfig,
    RunConfig,
    build_network,
    config_from_dict,
    load_config,
    parse_config,
    serialize_config,
)
from .emit import RunEmitter, format_value, read_series, render_frame
