"""Kernel compilation switch.

Set ``CLIQUEPERC_DISABLE_JIT=1`` to run every kernel as plain Python over
numpy arrays. The result of a run never depends on the switch; only speed does.
"""
import os

JIT_DISABLED = os.environ.get("CLIQUEPERC_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes")

if JIT_DISABLED:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn

else:
    from numba import njit  # noqa: F401

USING_NUMBA = not JIT_DISABLED
