"""Dirac scattering, entropy functionals, and NLS evolution."""

try:
    from ._nlscat import *  # noqa: F401,F403
    from ._nlscat import __doc__ as _core_doc  # noqa: F401
except ImportError:
    # Source-tree layout: the extension sits next to the package on sys.path.
    from _nlscat import *  # noqa: F401,F403

__version__ = "0.1.0"
