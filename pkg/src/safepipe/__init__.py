"""safepipe: a statically checked DSL toolchain for data-science pipelines."""

__version__ = "0.1.0"

GRAPH_FORMAT_VERSION = 1
