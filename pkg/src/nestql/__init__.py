"""Workbench for monad algebra on complex values and a core XML query
language, with a shared deterministic-tree semantics, compilation to
nonrecursive logic programs, and translations between the two languages.
"""

__version__ = "0.1.0"
