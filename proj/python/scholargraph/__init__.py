"""Python bindings for the scholargraph C++ core.

Errors raise ``scholargraph.Error`` with ``args == (code, message)``,
where ``code`` is a stable name such as ``"NOT_FOUND"``.
"""

from ._core import Error, Graph

__all__ = ["Error", "Graph"]
