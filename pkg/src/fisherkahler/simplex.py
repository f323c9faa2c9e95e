"""The open probability simplex and its exponential-representation tangents.

A point is a strictly positive probability vector ``p``.  A tangent vector
at ``p`` is stored as a real vector ``u`` with ``E_p(u) = sum_i p_i u_i = 0``;
a curve ``p(t)`` has velocity ``u`` iff ``dp_i/dt = p_i u_i``, i.e.
``u_i = d/dt log p_i``.  The Fisher metric carries the factor 1/4, which is
what makes the map to projective space an isometry.
"""

from dataclasses import dataclass

import numpy as np

from ._fd import DEFAULT_STEP, central_difference
from .errors import (
    BaseMismatch,
    CurveDomain,
    DimensionMismatch,
    NonPositiveWeight,
    NotCentered,
    NotNormalized,
    SingularBasis,
)

NORMALIZATION_TOL = 1e-12
BASE_TOL = 1e-12
CENTERING_TOL = 1e-12
MAX_GRAM_CONDITION = 1e12
RANDOM_POINT_FLOOR = 1e-6


def _as_vector(x):
    return np.asarray(getattr(x, "weights", x), dtype=float)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Distribution:
    """Strictly positive weights summing to one (n >= 2)."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size < 2:
            raise DimensionMismatch(f"need a vector of length >= 2, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise NonPositiveWeight(f"weights must be strictly positive: {w}")
        if abs(w.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.weights.size

    def same_point(self, other, tol=BASE_TOL):
        other = _as_vector(other)
        return other.shape == self.weights.shape and bool(
            np.all(np.abs(other - self.weights) <= tol)
        )

    def to_list(self):
        return self.weights.tolist()

    def __repr__(self):
        return f"Distribution({self.weights.tolist()})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """The class ``[u]_p``: components ``u`` with ``E_p(u) = 0``."""

    base: Distribution
    components: np.ndarray

    def __post_init__(self):
        u = _frozen(self.components)
        if u.shape != self.base.weights.shape:
            raise DimensionMismatch(
                f"components of length {u.size} at a point of dimension {self.base.n}"
            )
        if not np.all(np.isfinite(u)):
            raise NotCentered("non-finite tangent components")
        scale = max(1.0, float(np.max(np.abs(u))))
        mean = float(self.base.weights @ u)
        if abs(mean) > CENTERING_TOL * scale:
            raise NotCentered(f"E_p(u) = {mean!r} is not zero")
        object.__setattr__(self, "components", u)

    @property
    def n(self):
        return self.base.n

    def to_list(self):
        return self.components.tolist()

    def __add__(self, other):
        _check_same_base(self, other)
        return TangentVector(self.base, self.components + other.components)

    def __sub__(self, other):
        _check_same_base(self, other)
        return TangentVector(self.base, self.components - other.components)

    def __mul__(self, scalar):
        return TangentVector(self.base, float(scalar) * self.components)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentVector(self.base, -self.components)

    def __repr__(self):
        return f"TangentVector(base={self.base.weights.tolist()}, components={self.components.tolist()})"


def _check_same_base(u, v):
    if u.base is v.base:
        return
    if u.base.n != v.base.n:
        raise DimensionMismatch(f"dimensions {u.base.n} and {v.base.n} differ")
    if not u.base.same_point(v.base):
        raise BaseMismatch("tangent vectors live at different points")


def make_distribution(weights):
    """Validate ``weights`` as a point of the open simplex (no repair)."""
    if isinstance(weights, Distribution):
        return weights
    return Distribution(np.asarray(weights, dtype=float))


def normalize(weights):
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise DimensionMismatch(f"need a vector of length >= 2, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise NonPositiveWeight(f"weights must be strictly positive: {w}")
    return Distribution(w / w.sum())


def expectation(p, x):
    w = _as_vector(p)
    x = np.asarray(x, dtype=float)
    if x.shape != w.shape:
        raise DimensionMismatch(f"vector of length {x.size} against dimension {w.size}")
    return float(w @ x)


def center_components(weights, raw):
    """``raw - E_p(raw) * (1, ..., 1)`` as a bare array."""
    return raw - (weights @ raw)


def center(p, raw):
    """Project ``raw`` onto the tangent space at ``p``."""
    p = make_distribution(p)
    raw = np.asarray(raw, dtype=float)
    if raw.shape != p.weights.shape:
        raise DimensionMismatch(f"vector of length {raw.size} against dimension {p.n}")
    return TangentVector(p, center_components(p.weights, raw))


def fisher_metric(u, v):
    """Fisher metric ``(1/4) sum_k p_k u_k v_k`` of two tangents at one point."""
    _check_same_base(u, v)
    # form u * v first so swapping the arguments is bitwise symmetric
    return 0.25 * float(np.sum(u.base.weights * (u.components * v.components)))


def tangent_basis(p):
    """The centered unit vectors ``center(p, e_k)``, k = 1..n-1."""
    p = make_distribution(p)
    eye = np.eye(p.n)
    return [center(p, eye[k]) for k in range(p.n - 1)]


def fisher_gram(p, basis):
    """Gram matrix of the Fisher metric on ``basis`` (all based at ``p``).

    Raises SingularBasis when the matrix condition number exceeds 1e12.
    """
    p = make_distribution(p)
    if len(basis) == 0:
        return np.zeros((0, 0))
    for b in basis:
        if b.n != p.n:
            raise DimensionMismatch("basis vector dimension differs from the point")
        if not p.same_point(b.base):
            raise BaseMismatch("basis vector is not based at p")
    B = np.stack([b.components for b in basis], axis=1)
    gram = 0.25 * B.T @ (p.weights[:, None] * B)
    gram = 0.5 * (gram + gram.T)
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > MAX_GRAM_CONDITION:
        raise SingularBasis(f"Gram matrix condition number {cond:.3g}")
    return gram


def random_point(n, seed):
    """Deterministic random point of the simplex.

    Draws ``n`` standard exponential variates (so the normalized vector is
    uniform on the simplex), clamps them to ``[1e-6, inf)`` and normalizes.
    Every weight is therefore at least ``1e-6 / (n * max variate)``.
    ``seed`` is anything accepted by ``numpy.random.default_rng``.
    """
    if n < 2:
        raise DimensionMismatch("n must be at least 2")
    rng = np.random.default_rng(seed)
    x = np.maximum(rng.exponential(size=n), RANDOM_POINT_FLOOR)
    return normalize(x)


def random_tangent(p, seed):
    """Standard normal components, centered at ``p``."""
    p = make_distribution(p)
    rng = np.random.default_rng(seed)
    return center(p, rng.standard_normal(p.n))


class Curve:
    """A smooth curve ``t -> p(t)`` in the simplex.

    ``fn`` returns weights (array or Distribution) for ``t`` in ``interval``.
    ``velocity_fn``, when given, returns the raw exponential-representation
    velocity at ``t``; otherwise the velocity is the central difference of
    ``log p(t)``.
    """

    def __init__(self, fn, velocity_fn=None, interval=(-np.inf, np.inf)):
        self._fn = fn
        self._velocity_fn = velocity_fn
        self.interval = (float(interval[0]), float(interval[1]))

    @property
    def has_analytic_velocity(self):
        return self._velocity_fn is not None

    def contains(self, t):
        return self.interval[0] <= t <= self.interval[1]

    def _require(self, *ts):
        for t in ts:
            if not self.contains(t):
                raise CurveDomain(f"t = {t!r} outside curve interval {self.interval}")

    def weights(self, t):
        self._require(t)
        return _as_vector(self._fn(t))

    def __call__(self, t):
        return make_distribution(self.weights(t))

    def velocity_components(self, t, h=DEFAULT_STEP, richardson=False):
        """Raw centered velocity components at ``t`` (no object wrapping)."""
        w = self.weights(t)
        if self._velocity_fn is not None:
            raw = np.asarray(self._velocity_fn(t), dtype=float)
        else:
            self._require(t - h, t + h)
            raw = central_difference(lambda s: np.log(self.weights(s)), t, h, richardson)
        return center_components(w, raw)

    def velocity(self, t, h=DEFAULT_STEP, richardson=False):
        return TangentVector(self(t), self.velocity_components(t, h, richardson))

    def fd_velocity(self, t, h=DEFAULT_STEP, richardson=False):
        """Finite-difference velocity, ignoring any analytic velocity."""
        self._require(t - h, t + h)
        raw = central_difference(lambda s: np.log(self.weights(s)), t, h, richardson)
        p = self(t)
        return TangentVector(p, center_components(p.weights, raw))

    def reversed(self, t_end):
        """The curve ``s -> p(t_end - s)``."""
        a, b = self.interval
        vel = None
        if self._velocity_fn is not None:
            vel = lambda s: -np.asarray(self._velocity_fn(t_end - s), dtype=float)  # noqa: E731
        return Curve(lambda s: self._fn(t_end - s), vel, (t_end - b, t_end - a))


def constant_curve(p):
    p = make_distribution(p)
    zero = np.zeros(p.n)
    return Curve(lambda t: p.weights, lambda t: zero)


INVARIANTS = (
    "simplex.distribution_validity",
    "simplex.fisher_positive_definite",
    "simplex.fisher_symmetry",
    "simplex.fisher_bilinearity",
    "simplex.center_projection",
    "simplex.curve_velocity",
)
