try:
    from ._core import *  # noqa: F401,F403
except ImportError:  # pragma: no cover - plain build-tree layout
    from _core import *  # noqa: F401,F403
