"""Complex projective space P(C^n) through unit-vector charts.

The Hermitian product is conjugate-linear in the first argument and linear in
the second: ``<a, b> = sum conj(a_i) b_i`` (``numpy.vdot``).  The chart centered
at a unit vector ``u`` is ``phi_u([z]) = z / <u, z> - u``, with values in the
orthogonal complement of ``u``, which also models the tangent space at ``[u]``.
There the Fubini-Study metric and symplectic form are the real and imaginary
parts of the Hermitian product.
"""

from dataclasses import dataclass

import numpy as np

from ._fd import central_difference
from .errors import BaseMismatch, DimensionMismatch, NotOrthogonal, NotUnitVector, OutsideChart

UNIT_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12
SAME_RAY_TOL = 1e-10
CHART_TOL = 1e-12
TRANSFER_STEP = 1e-4


def hermitian(a, b):
    return complex(np.vdot(a, b))


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A ray ``[z]`` stored through a unit representative ``z``."""

    representative: np.ndarray

    def __post_init__(self):
        z = _frozen(self.representative)
        if z.ndim != 1 or z.size < 2:
            raise DimensionMismatch(f"need a vector of length >= 2, got shape {z.shape}")
        if abs(np.linalg.norm(z) - 1.0) > UNIT_TOL:
            raise NotUnitVector(f"representative has norm {np.linalg.norm(z)!r}")
        object.__setattr__(self, "representative", z)

    @classmethod
    def from_vector(cls, z):
        z = np.asarray(z, dtype=complex)
        norm = np.linalg.norm(z)
        if norm == 0.0:
            raise NotUnitVector("the zero vector has no ray")
        return cls(z / norm)

    @property
    def n(self):
        return self.representative.size

    def same_ray(self, other, tol=SAME_RAY_TOL):
        """Phase-insensitive equality: ``|<z1, z2>| = 1`` within ``tol``."""
        return abs(abs(hermitian(self.representative, other.representative)) - 1.0) <= tol

    def distance(self, other):
        """``sqrt(1 - |<z1, z2>|^2)``, the sine of the Fubini-Study angle."""
        c = abs(hermitian(self.representative, other.representative))
        return float(np.sqrt(max(0.0, 1.0 - c * c)))

    def same_representative(self, other, tol=UNIT_TOL):
        return self.n == other.n and bool(
            np.all(np.abs(self.representative - other.representative) <= tol)
        )

    def to_json(self):
        return complex_to_json(self.representative)


@dataclass(frozen=True, eq=False)
class ProjectiveTangent:
    """Tangent vector at ``[base]`` in the chart centered at ``base``: ``<base, vector> = 0``."""

    base: ProjectivePoint
    vector: np.ndarray

    def __post_init__(self):
        xi = _frozen(self.vector)
        if xi.shape != self.base.representative.shape:
            raise DimensionMismatch("tangent and base have different lengths")
        scale = max(1.0, float(np.linalg.norm(xi)))
        if abs(hermitian(self.base.representative, xi)) > ORTHOGONALITY_TOL * scale:
            raise NotOrthogonal("tangent vector is not orthogonal to its base")
        object.__setattr__(self, "vector", xi)

    def to_json(self):
        return complex_to_json(self.vector)


def complex_to_json(z):
    """Interleave real and imaginary parts: ``[re_0, im_0, re_1, im_1, ...]``."""
    z = np.asarray(z, dtype=complex)
    return np.column_stack([z.real, z.imag]).ravel().tolist()


def complex_from_json(values):
    a = np.asarray(values, dtype=float)
    if a.ndim != 1 or a.size % 2:
        raise ValueError("expected an even-length flat list of floats")
    return a[0::2] + 1j * a[1::2]


def _rep(x):
    return np.asarray(getattr(x, "representative", x), dtype=complex)


def chart_forward(u, z):
    """``phi_u([z]) = z / <u, z> - u``."""
    u, z = _rep(u), _rep(z)
    c = hermitian(u, z)
    if abs(c) <= CHART_TOL * max(1.0, np.linalg.norm(z)):
        raise OutsideChart("point lies outside the chart domain (<u, z> = 0)")
    return z / c - u


def chart_backward(u, xi):
    """``phi_u^{-1}(xi) = [(u + xi) / |u + xi|]``."""
    u_rep = _rep(u)
    xi = np.asarray(xi, dtype=complex)
    if abs(hermitian(u_rep, xi)) > ORTHOGONALITY_TOL * max(1.0, np.linalg.norm(xi)):
        raise NotOrthogonal("chart coordinate is not orthogonal to the chart center")
    return ProjectivePoint.from_vector(u_rep + xi)


def fubini_study(u, xi1, xi2):
    """``(g_FS, omega_FS) = (Re <xi1, xi2>, Im <xi1, xi2>)`` at the chart center ``u``."""
    for xi in (xi1, xi2):
        if not xi.base.same_representative(u):
            raise BaseMismatch("tangent is not based at the chart center")
    c = hermitian(xi1.vector, xi2.vector)
    return c.real, c.imag


def J_FS(xi):
    """Complex structure: multiplication by i."""
    return ProjectiveTangent(xi.base, 1j * xi.vector)


def chart_differential(u_from, u_to, point, direction, h=TRANSFER_STEP):
    """Derivative of ``phi_{u_to} o phi_{u_from}^{-1}`` at chart coordinate ``point``.

    Symmetric differences with Richardson extrapolation.
    """
    point = np.asarray(point, dtype=complex)
    direction = np.asarray(direction, dtype=complex)
    return central_difference(
        lambda t: chart_forward(u_to, chart_backward(u_from, point + t * direction)),
        0.0,
        h,
        richardson=True,
    )


def transfer_tangent(u1, u2, xi, h=TRANSFER_STEP):
    """Re-express a tangent at the center of chart ``u1`` through chart ``u2``.

    The vector is pushed into chart ``u2`` (where ``[u1]`` is a non-central
    point ``phi_{u2}([u1])``), then re-charted at that point itself, i.e. in the
    chart centered at the unit representative ``normalize(u2 + phi_{u2}([u1]))``
    of ``[u1]``.  Both steps are finite-difference pushforwards.  When ``u2`` is
    ``lambda * u1`` the result is ``lambda * xi`` based at ``u2``.
    """
    if not isinstance(u1, ProjectivePoint):
        u1 = ProjectivePoint(u1)
    if not xi.base.same_representative(u1):
        raise BaseMismatch("tangent is not based at the center of the source chart")
    u1_rep, u2_rep = _rep(u1), _rep(u2)
    n = u1_rep.size
    eta_point = chart_forward(u2_rep, u1_rep)
    eta = chart_differential(u1_rep, u2_rep, np.zeros(n), xi.vector, h)
    target = chart_backward(u2_rep, eta_point)
    vec = chart_differential(u2_rep, target.representative, eta_point, eta, h)
    # project out the O(h^4) component along the base
    vec = vec - hermitian(target.representative, vec) * target.representative
    return ProjectiveTangent(target, vec)


def random_projective_point(n, seed):
    rng = np.random.default_rng(seed)
    return ProjectivePoint.from_vector(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_projective_tangent(u, seed):
    """Complex Gaussian vector projected onto ``u``-perp."""
    rng = np.random.default_rng(seed)
    z = _rep(u)
    xi = rng.standard_normal(z.size) + 1j * rng.standard_normal(z.size)
    xi = xi - hermitian(z, xi) * z
    return ProjectiveTangent(u if isinstance(u, ProjectivePoint) else ProjectivePoint(z), xi)


def real_basis(u):
    """Real basis ``(b_1, i b_1, ..., b_{n-1}, i b_{n-1})`` of ``u``-perp, b_k orthonormal."""
    z = _rep(u)
    n = z.size
    M = np.column_stack([z, np.eye(n, dtype=complex)])
    Q, _ = np.linalg.qr(M)
    b = [Q[:, k] for k in range(1, n)]
    out = []
    for v in b:
        out.extend([v, 1j * v])
    return out


def fubini_study_matrices(u):
    """Matrices of ``g_FS`` and ``omega_FS`` in :func:`real_basis`."""
    basis = real_basis(u)
    H = np.array([[hermitian(a, b) for b in basis] for a in basis])
    return H.real, H.imag


INVARIANTS = (
    "projective.unit_and_orthogonal",
    "projective.chart_roundtrip",
    "projective.fs_positive_nondegenerate",
    "projective.chart_independence",
)
