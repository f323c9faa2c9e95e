"""Finite-difference helpers."""

import numpy as np

DEFAULT_STEP = 1e-5


def central_difference(f, t, h=DEFAULT_STEP, richardson=False):
    """Derivative of ``f`` at ``t`` by symmetric differences.

    ``f`` may return scalars or arrays (real or complex).  With
    ``richardson=True`` the O(h^2) estimates at steps h and h/2 are
    combined into an O(h^4) one.
    """
    def d(step):
        return (np.asarray(f(t + step)) - np.asarray(f(t - step))) / (2.0 * step)

    if not richardson:
        return d(h)
    return (4.0 * d(h / 2.0) - d(h)) / 3.0
