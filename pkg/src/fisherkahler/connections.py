"""Alpha-connections on the simplex, expressed through covariant derivatives along curves.

For a field ``[V(t)]_{p(t)}`` along a curve with velocity ``[u(t)]``::

    D^a/dt V = center(p(t), dV/dt + (1 - a)/2 * u * V)

``a = 1`` is the exponential connection, ``a = -1`` the mixture connection
and ``a = 0`` the Levi-Civita connection of the Fisher metric.  Christoffel
symbols are never formed.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ._fd import DEFAULT_STEP, central_difference
from .errors import BaseMismatch, CurveDomain, LeftSimplex
from .simplex import (
    Curve,
    TangentVector,
    center_components,
    fisher_metric,
    make_distribution,
)

MIN_STEP = 1e-8
MAX_STEP = 1e-2
MIN_GEODESIC_STEPS = 16
SIMPLEX_FLOOR = 1e-9


@dataclass(frozen=True)
class Alpha:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"alpha must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def mixture(cls):
        return cls(-1.0)

    @classmethod
    def levi_civita(cls):
        return cls(0.0)

    @classmethod
    def exponential(cls):
        return cls(1.0)

    def dual(self):
        return Alpha(-self.value)

    def __float__(self):
        return self.value


def _alpha(alpha):
    return float(alpha.value if isinstance(alpha, Alpha) else Alpha(alpha).value)


class VectorFieldAlongCurve:
    """A field ``t -> V(t)`` along ``curve``; the tangent is its centering at ``p(t)``.

    ``derivative`` (optional) is the analytic ``dV/dt`` of the raw field.
    Any multiple of (1, ..., 1) in it is irrelevant, since every covariant
    derivative is centered at the end.
    """

    def __init__(self, curve, field, derivative=None):
        self.curve = curve
        self.field = field
        self.derivative = derivative

    def raw(self, t):
        return np.asarray(self.field(t), dtype=float)

    def centered_components(self, t):
        return center_components(self.curve.weights(t), self.raw(t))

    def at(self, t):
        return TangentVector(self.curve(t), self.centered_components(t))

    __call__ = at

    def derivative_components(self, t, h=DEFAULT_STEP, richardson=False):
        if self.derivative is not None:
            return np.asarray(self.derivative(t), dtype=float)
        return central_difference(self.centered_components, t, h, richardson)


def _check_step(h):
    if not MIN_STEP <= h <= MAX_STEP:
        raise ValueError(f"finite-difference step {h!r} outside [{MIN_STEP}, {MAX_STEP}]")


def covariant_derivative(alpha, vf, t, h=DEFAULT_STEP, richardson=False):
    """``D^alpha/dt`` of the field ``vf`` at time ``t``."""
    a = _alpha(alpha)
    _check_step(h)
    curve = vf.curve
    if not (curve.contains(t - h) and curve.contains(t + h)):
        raise CurveDomain(f"t = {t!r} +/- {h!r} leaves curve interval {curve.interval}")
    w = curve.weights(t)
    vdot = vf.derivative_components(t, h, richardson)
    if a == 1.0:
        raw = vdot
    else:
        u = curve.velocity_components(t, h, richardson)
        raw = vdot + 0.5 * (1.0 - a) * u * vf.centered_components(t)
    return TangentVector(make_distribution(w), center_components(w, raw))


def exponential_derivative(vf, t, h=DEFAULT_STEP, richardson=False):
    """``D^(1)/dt``: the centered ordinary derivative of the field."""
    _check_step(h)
    curve = vf.curve
    if not (curve.contains(t - h) and curve.contains(t + h)):
        raise CurveDomain(f"t = {t!r} +/- {h!r} leaves curve interval {curve.interval}")
    w = curve.weights(t)
    vdot = vf.derivative_components(t, h, richardson)
    return TangentVector(make_distribution(w), center_components(w, vdot))


def exponential_geodesic(p, v):
    """Closed-form e-geodesic ``p_i(t) ~ p_i exp(t v_i)``."""
    p = make_distribution(p)
    logp = np.log(p.weights)
    v = np.asarray(getattr(v, "components", v), dtype=float)

    def weights(t):
        s = logp + t * v
        e = np.exp(s - s.max())
        return e / e.sum()

    return Curve(weights, lambda t: v)


def mixture_geodesic(p, v):
    """Closed-form m-geodesic ``p(t) = p + t * p * v``, on its maximal open interval."""
    p = make_distribution(p)
    v = np.asarray(getattr(v, "components", v), dtype=float)
    c = p.weights * v
    with np.errstate(divide="ignore"):
        hi = np.min(np.where(v < 0, -1.0 / v, np.inf))
        lo = np.max(np.where(v > 0, -1.0 / v, -np.inf))
    return Curve(lambda t: p.weights + t * c, lambda t: v / (1.0 + t * v), (lo, hi))


class SampledCurve(Curve):
    """A curve known at grid times, with cubic Hermite interpolation in between.

    ``points`` are the weights, ``velocities`` the centered exponential
    velocities and ``accelerations`` their time derivatives at each node.
    """

    def __init__(self, times, points, velocities, accelerations):
        times = np.asarray(times, dtype=float)
        order = np.argsort(times)
        self.times = times
        self.points = np.asarray(points, dtype=float)
        self.velocities = np.asarray(velocities, dtype=float)
        self._p = CubicHermiteSpline(
            times[order], self.points[order], (self.points * self.velocities)[order]
        )
        self._u = CubicHermiteSpline(
            times[order], self.velocities[order], np.asarray(accelerations)[order]
        )
        super().__init__(self._weights_at, self._u, (times.min(), times.max()))

    def _weights_at(self, t):
        w = self._p(t)
        return w / w.sum()

    def velocity_field(self):
        """The velocity of the curve as a field along itself."""
        return VectorFieldAlongCurve(self, self._u)

    @property
    def final_point(self):
        return make_distribution(self.points[-1])

    def rows(self):
        return np.hstack([self.times[:, None], self.points, self.velocities])

    def write_csv(self, fh):
        n = self.points.shape[1]
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["t"] + [f"p_{i + 1}" for i in range(n)] + [f"u_{i + 1}" for i in range(n)]
        )
        for row in self.rows():
            writer.writerow([format(x, ".17g") for x in row])


def _rk4_step(rhs, t, y, dt):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _geodesic_rhs(a, n):
    def rhs(t, y):
        p, u = y[:n], y[n:]
        u2 = u * u
        udot = -0.5 * (1.0 - a) * u2 - 0.5 * (1.0 + a) * (p @ u2)
        return np.concatenate([p * u, udot])

    return rhs


def geodesic(alpha, p0, v0, t_end, steps=256):
    """Integrate ``D^alpha/dt p' = 0`` from ``p0`` with velocity ``v0`` by fixed-step RK4.

    In exponential coordinates the equation reads
    ``u' = -(1-a)/2 u^2 - (1+a)/2 E_p(u^2)``, ``p' = p u``.  After every step
    ``p`` is renormalized and ``u`` recentered.  Raises LeftSimplex if a
    weight leaves ``[1e-9, 1]``.
    """
    a = _alpha(alpha)
    p0 = make_distribution(p0)
    if not p0.same_point(v0.base):
        raise BaseMismatch("initial velocity is not based at p0")
    if steps < MIN_GEODESIC_STEPS:
        raise ValueError(f"need at least {MIN_GEODESIC_STEPS} steps, got {steps}")
    n = p0.n
    rhs = _geodesic_rhs(a, n)
    dt = float(t_end) / steps
    y = np.concatenate([p0.weights, v0.components])
    times = [0.0]
    states = [y]
    for k in range(steps):
        t = k * dt
        y = _rk4_step(rhs, t, y, dt)
        p = y[:n]
        if not np.all(np.isfinite(y)) or np.any(p < SIMPLEX_FLOOR) or np.any(p > 1.0):
            raise LeftSimplex(
                f"alpha={a} geodesic left the open simplex between t={t:.6g} and t={t + dt:.6g}",
                t_exit=t + dt,
            )
        p = p / p.sum()
        y = np.concatenate([p, center_components(p, y[n:])])
        times.append((k + 1) * dt)
        states.append(y)
    Y = np.array(states)
    acc = np.array([rhs(t, s)[n:] for t, s in zip(times, Y)])
    return SampledCurve(times, Y[:, :n], Y[:, n:], acc)


def parallel_transport(alpha, curve, v0, t_end, steps=256, h=DEFAULT_STEP):
    """Solve ``D^alpha/dt V = 0`` along ``curve`` from ``V(0) = v0`` by RK4.

    With ``E_p(V) = 0`` maintained, the equation becomes
    ``V' = -(1-a)/2 u V - (1+a)/2 E_p(u V)``.
    """
    a = _alpha(alpha)
    if not (curve.contains(0.0) and curve.contains(t_end)):
        raise CurveDomain(f"[0, {t_end}] not inside curve interval {curve.interval}")
    start = curve(0.0)
    if not start.same_point(v0.base):
        raise BaseMismatch("v0 is not based at curve(0)")

    def rhs(t, V):
        p = curve.weights(t)
        u = curve.velocity_components(t, h)
        uV = u * V
        return -0.5 * (1.0 - a) * uV - 0.5 * (1.0 + a) * (p @ uV)

    dt = float(t_end) / steps
    V = np.array(v0.components)
    for k in range(steps):
        t = k * dt
        V = _rk4_step(rhs, t, V, dt)
        V = center_components(curve.weights(t + dt), V)
    end = curve(float(t_end))
    return TangentVector(end, center_components(end.weights, V))


def check_duality(alpha, p, seed, samples=20, h=DEFAULT_STEP, richardson=False):
    """Largest residual of ``X g(Y,Z) - g(D^a_X Y, Z) - g(Y, D^-a_X Z)`` over random samples.

    Y and Z are constant raw vectors centered pointwise; X is the velocity of
    the e-geodesic through ``p`` in a random direction.  Both sides use
    central differences with step ``h``.
    """
    a = _alpha(alpha)
    p = make_distribution(p)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        y, z, x = rng.standard_normal((3, p.n))
        curve = exponential_geodesic(p, center_components(p.weights, x))
        Y = VectorFieldAlongCurve(curve, lambda t, y=y: y)
        Z = VectorFieldAlongCurve(curve, lambda t, z=z: z)

        def pairing(t):
            return 0.25 * float(
                np.sum(curve.weights(t) * Y.centered_components(t) * Z.centered_components(t))
            )

        lhs = float(central_difference(pairing, 0.0, h, richardson))
        rhs = fisher_metric(covariant_derivative(a, Y, 0.0, h, richardson), Z.at(0.0))
        rhs += fisher_metric(Y.at(0.0), covariant_derivative(-a, Z, 0.0, h, richardson))
        worst = max(worst, abs(lhs - rhs))
    return worst


INVARIANTS = (
    "connections.reduction",
    "connections.linearity",
    "connections.leibniz_levi_civita",
    "connections.duality",
    "connections.geodesic_e_oracle",
    "connections.geodesic_m_oracle",
)
