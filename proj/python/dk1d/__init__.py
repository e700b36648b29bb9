"""Distortion-bound machinery for one-dimensional maps."""

try:
    from ._dk1d import *  # noqa: F401,F403  (installed package layout)
    from . import _dk1d as _core
except ImportError:  # build-tree layout: extension next to the package on sys.path
    from _dk1d import *  # noqa: F401,F403
    import _dk1d as _core

__version__ = "0.1.0"
__all__ = [name for name in dir(_core) if not name.startswith("_")]
