"""Dombrowski splitting of T(TP) for the exponential connection, and the triple (G, Omega, J).

An element of ``T_{[u]_p}(TP)`` is stored in split coordinates
``(foot, horizontal, vertical) = ([u]_p, [v]_p, [w]_p)``: the horizontal part is
the pushforward by the bundle projection, the vertical part is the output of
the connector of the exponential connection.
"""

from dataclasses import dataclass

import numpy as np

from ._fd import DEFAULT_STEP, central_difference
from .connections import (
    VectorFieldAlongCurve,
    exponential_derivative,
    exponential_geodesic,
    mixture_geodesic,
)
from .errors import BaseMismatch, DimensionMismatch, FootMismatch
from .simplex import (
    TangentVector,
    center_components,
    fisher_metric,
    make_distribution,
)

FOOT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SplitDoubleTangent:
    foot: TangentVector
    horizontal: TangentVector
    vertical: TangentVector

    def __post_init__(self):
        p = self.foot.base
        for part in (self.horizontal, self.vertical):
            if part.n != p.n:
                raise DimensionMismatch("split components have different dimensions")
            if not p.same_point(part.base):
                raise BaseMismatch("split components are based at different points")

    @property
    def base(self):
        return self.foot.base

    @property
    def n(self):
        return self.foot.n

    @classmethod
    def from_arrays(cls, p, u, v, w):
        """Build from raw arrays, which must already be centered at ``p``."""
        p = make_distribution(p)
        return cls(TangentVector(p, u), TangentVector(p, v), TangentVector(p, w))

    def __add__(self, other):
        _check_compatible(self, other)
        return SplitDoubleTangent(
            self.foot, self.horizontal + other.horizontal, self.vertical + other.vertical
        )

    def __mul__(self, scalar):
        return SplitDoubleTangent(self.foot, scalar * self.horizontal, scalar * self.vertical)

    __rmul__ = __mul__


def _check_compatible(x, y):
    if not x.base.same_point(y.base):
        raise BaseMismatch("double tangents over different points of the simplex")
    if not np.all(np.abs(x.foot.components - y.foot.components) <= FOOT_TOL):
        raise FootMismatch("double tangents at different feet")


def base_curve(x, kind="exponential"):
    """A curve through ``p`` with initial velocity ``[v]_p``.

    ``kind`` is ``"exponential"`` (the default e-geodesic) or ``"mixture"``.
    """
    if kind == "exponential":
        return exponential_geodesic(x.base, x.horizontal)
    if kind == "mixture":
        return mixture_geodesic(x.base, x.horizontal)
    raise ValueError(f"unknown base curve kind {kind!r}")


def phi_inverse_curve(x, kind="exponential"):
    """Curve ``t -> [u + t w]_{p(t)}`` in TP whose velocity at 0 is the split element ``x``.

    The returned field carries no analytic derivative, so the connector
    works from finite differences.
    """
    u = np.array(x.foot.components)
    w = np.array(x.vertical.components)
    return VectorFieldAlongCurve(base_curve(x, kind), lambda t: u + t * w)


def connector(gamma, t=0.0, h=DEFAULT_STEP, richardson=False):
    """Vertical part of the velocity of the TP-curve ``gamma``."""
    return exponential_derivative(gamma, t, h, richardson)


def bundle_projection_velocity(gamma, t=0.0, h=DEFAULT_STEP, richardson=False):
    """Horizontal part: finite-difference velocity of the foot curve of ``gamma``."""
    return gamma.curve.fd_velocity(t, h, richardson)


def split(gamma, t=0.0, h=DEFAULT_STEP, richardson=False):
    """Split coordinates of the velocity of ``gamma`` at ``t``."""
    return SplitDoubleTangent(
        gamma.at(t),
        bundle_projection_velocity(gamma, t, h, richardson),
        connector(gamma, t, h, richardson),
    )


def split_metric_G(x, y):
    _check_compatible(x, y)
    return fisher_metric(x.horizontal, y.horizontal) + fisher_metric(x.vertical, y.vertical)


def split_form_Omega(x, y):
    _check_compatible(x, y)
    return fisher_metric(x.horizontal, y.vertical) - fisher_metric(x.vertical, y.horizontal)


def split_J(x):
    """``(u, v, w) -> (u, -w, v)``."""
    return SplitDoubleTangent(x.foot, -x.vertical, x.horizontal)


# Global coordinates (theta, s) in R^{n-1} x R^{n-1} on TP:
#   p = softmax(theta, 0),  u = center(p, (s, 0)).
# Constant increments in these coordinates are commuting vector fields, so
# dOmega(X, Y, Z) reduces to the three directional-derivative terms.


def _pad(a):
    return np.append(np.asarray(a, dtype=float), 0.0)


def coordinate_point(theta, s):
    """Foot ``[u]_p`` at coordinates ``(theta, s)``."""
    z = _pad(theta)
    e = np.exp(z - z.max())
    p = make_distribution(e / e.sum())
    return TangentVector(p, center_components(p.weights, _pad(s)))


def coordinate_pushforward(theta, s, d_theta, d_s):
    """Split coordinates of the coordinate increment ``(d_theta, d_s)`` at ``(theta, s)``.

    The foot curve has velocity ``center(p, (d_theta, 0))``; the connector of
    ``t -> center(p(t), (s + t d_s, 0))`` is ``center(p, (d_s, 0))``.
    """
    foot = coordinate_point(theta, s)
    w = foot.base.weights
    return SplitDoubleTangent(
        foot,
        TangentVector(foot.base, center_components(w, _pad(d_theta))),
        TangentVector(foot.base, center_components(w, _pad(d_s))),
    )


def omega_exterior_derivative(theta, s, X, Y, Z, h=1e-4):
    """``dOmega(X, Y, Z)`` at coordinates ``(theta, s)`` by symmetric differences.

    ``X``, ``Y``, ``Z`` are pairs ``(d_theta, d_s)`` of constant coordinate
    increments; their brackets vanish, leaving
    ``X Omega(Y, Z) + Y Omega(Z, X) + Z Omega(X, Y)``.
    """
    theta = np.asarray(theta, dtype=float)
    s = np.asarray(s, dtype=float)

    def term(A, B, C):
        def omega_along(t):
            th = theta + t * np.asarray(A[0])
            ss = s + t * np.asarray(A[1])
            return split_form_Omega(
                coordinate_pushforward(th, ss, *B), coordinate_pushforward(th, ss, *C)
            )

        return float(central_difference(omega_along, 0.0, h))

    return term(X, Y, Z) + term(Y, Z, X) + term(Z, X, Y)


def random_split(p, seed):
    """Random element of T_{[u]_p}(TP) with standard normal raw components."""
    p = make_distribution(p)
    rng = np.random.default_rng(seed)
    u, v, w = (center_components(p.weights, r) for r in rng.standard_normal((3, p.n)))
    return SplitDoubleTangent.from_arrays(p, u, v, w)


INVARIANTS = (
    "dombrowski.J_squared",
    "dombrowski.G_hermitian",
    "dombrowski.omega_fundamental",
    "dombrowski.omega_closed",
    "dombrowski.connector_linearity",
    "dombrowski.connector_recovery",
    "dombrowski.projection_recovery",
    "dombrowski.curve_independence",
)
