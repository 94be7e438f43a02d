import os
from contextlib import contextmanager

ENV_VAR = "LCSURF_TOL"
DEFAULT_BASE = 1e-9

_override = None


def base_tol():
    """Base zero tolerance.

    Precedence: an active :func:`tolerance` block, then ``LCSURF_TOL``, then
    the built-in 1e-9.
    """
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_BASE
    value = float(raw)
    if not value >= 0:
        raise ValueError(f"{ENV_VAR} must be a non-negative number, got {raw!r}")
    return value


@contextmanager
def tolerance(value):
    """Temporarily replace the base tolerance (``None`` leaves it unchanged)."""
    global _override
    saved = _override
    if value is not None:
        if not value >= 0:
            raise ValueError("tolerance must be non-negative")
        _override = float(value)
    try:
        yield
    finally:
        _override = saved
