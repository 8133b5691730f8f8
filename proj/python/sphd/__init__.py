"""Sphere energies, equal-area partitions, and design certification."""

try:
    from ._sphd import *  # noqa: F401,F403  (installed package layout)
    from . import _sphd as _impl
except ImportError:
    from _sphd import *  # noqa: F401,F403  (build-tree layout)
    import _sphd as _impl

__version__ = "1.0.0"
__all__ = [name for name in dir(_impl) if not name.startswith("_")]
