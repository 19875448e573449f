"""Fisher information laboratory for freely evolving 1-D wave packets.

The heavy lifting lives in the compiled extension ``_fisherlab``; this package
re-exports its entire public surface. In a development tree the extension sits
on ``sys.path`` next to the package rather than inside it, so fall back to the
top-level import when the relative one is unavailable.
"""

try:
    from ._fisherlab import *  # noqa: F401,F403
    from ._fisherlab import __version__  # noqa: F401
except ImportError:  # pragma: no cover - development layout
    from _fisherlab import *  # noqa: F401,F403
    from _fisherlab import __version__  # noqa: F401
