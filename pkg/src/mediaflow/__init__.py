"""Local media-insights workflow engine.

Staged workflow orchestration over media assets with pluggable analysis
operators, a versioned metadata plane, an event-driven search index, a
multi-label evaluation toolkit, and an HTTP/CLI gateway.
"""

__version__ = "0.1.0"
