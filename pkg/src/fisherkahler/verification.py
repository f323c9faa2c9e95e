"""Registry of numerical checks, one per module invariant, and JSON reports.

Every check has the signature ``check(n, samples, seed) -> (max_abs_error, samples_used)``.
Sample ``i`` of a check draws from ``numpy.random.default_rng([seed, n, i])``
so results do not depend on evaluation order.  Boolean properties (positivity,
freeness, injectivity) report the number of violating samples against a
tolerance of zero.
"""

import itertools
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._fd import central_difference
from . import connections, covering, dombrowski, projective, simplex
from .connections import (
    VectorFieldAlongCurve,
    check_duality,
    covariant_derivative,
    exponential_derivative,
    exponential_geodesic,
    geodesic,
)
from .covering import (
    deck_action,
    random_pullback_pair,
    tau,
    tau_pushforward,
    tau_pushforward_fd,
    verify_pullback,
)
from .dombrowski import (
    SplitDoubleTangent,
    bundle_projection_velocity,
    connector,
    omega_exterior_derivative,
    phi_inverse_curve,
    split_form_Omega,
    split_J,
    split_metric_G,
)
from .projective import (
    J_FS,
    chart_backward,
    chart_forward,
    fubini_study,
    fubini_study_matrices,
    hermitian,
    random_projective_point,
    random_projective_tangent,
    transfer_tangent,
)
from .simplex import (
    Curve,
    TangentVector,
    center,
    center_components,
    fisher_metric,
    random_point,
)

DUALITY_ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
MAX_N = 64
# Difference quotients are exactly linear in the field, so linearity checks
# use a coarse step where rounding (~eps/h) is small.
LINEARITY_STEP = 1e-3


def _rng(seed, n, i):
    return np.random.default_rng([seed, n, i])


def _point_and_rng(n, seed, i):
    rng = _rng(seed, n, i)
    return random_point(n, rng), rng


def _tangent(p, rng):
    return center(p, rng.standard_normal(p.n))


def _polynomial_field(curve, rng):
    a, b, c = rng.standard_normal((3, curve.weights(0.0).size))
    return VectorFieldAlongCurve(curve, lambda t: a + t * b + t * t * c)


def _random_curve(p, rng):
    return exponential_geodesic(p, _tangent(p, rng))


# --- simplex -----------------------------------------------------------------


def check_distribution_validity(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, _ = _point_and_rng(n, seed, i)
        if p.weights.min() <= 0.0:
            return float("inf"), samples
        err = max(err, abs(p.weights.sum() - 1.0))
    return err, samples


def check_fisher_positive_definite(n, samples, seed):
    bad = 0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        u = _tangent(p, rng)
        if np.any(u.components != 0.0) and not fisher_metric(u, u) > 0.0:
            bad += 1
    return float(bad), samples


def check_fisher_symmetry(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        u, v = _tangent(p, rng), _tangent(p, rng)
        err = max(err, abs(fisher_metric(u, v) - fisher_metric(v, u)))
    return err, samples


def check_fisher_bilinearity(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        u, b, v = _tangent(p, rng), _tangent(p, rng), _tangent(p, rng)
        a = rng.standard_normal()
        lhs = fisher_metric(a * u + b, v)
        err = max(err, abs(lhs - a * fisher_metric(u, v) - fisher_metric(b, v)))
    return err, samples


def check_center_projection(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        once = center(p, rng.standard_normal(n))
        twice = center(p, once.components)
        err = max(err, float(np.max(np.abs(twice.components - once.components))))
    return err, samples


def check_curve_velocity(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        a = rng.standard_normal(n)
        logp = np.log(p.weights)

        def weights(t, a=a, logp=logp):
            e = np.exp(logp + t * a)
            return e / e.sum()

        fd = Curve(weights).velocity(0.0, h=1e-5)
        err = max(err, float(np.max(np.abs(fd.components - center(p, a).components))))
    return err, samples


# --- connections -------------------------------------------------------------


def check_reduction(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        vf = _polynomial_field(_random_curve(p, rng), rng)
        t = rng.uniform(-0.5, 0.5)
        d1 = covariant_derivative(1.0, vf, t)
        de = exponential_derivative(vf, t)
        err = max(err, float(np.max(np.abs(d1.components - de.components))))
    return err, samples


def check_linearity(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        curve = _random_curve(p, rng)
        V, W = _polynomial_field(curve, rng), _polynomial_field(curve, rng)
        c = rng.standard_normal()
        a = rng.uniform(-1.0, 1.0)
        S = VectorFieldAlongCurve(curve, lambda t: V.raw(t) + c * W.raw(t))
        lhs = covariant_derivative(a, S, 0.0, LINEARITY_STEP).components
        rhs = covariant_derivative(a, V, 0.0, LINEARITY_STEP).components
        rhs = rhs + c * covariant_derivative(a, W, 0.0, LINEARITY_STEP).components
        err = max(err, float(np.max(np.abs(lhs - rhs))))
    return err, samples


def check_leibniz_levi_civita(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        curve = _random_curve(p, rng)
        V, W = _polynomial_field(curve, rng), _polynomial_field(curve, rng)

        def pairing(t):
            return 0.25 * float(
                np.sum(curve.weights(t) * V.centered_components(t) * W.centered_components(t))
            )

        lhs = float(central_difference(pairing, 0.0))
        rhs = fisher_metric(covariant_derivative(0.0, V, 0.0), W.at(0.0))
        rhs += fisher_metric(V.at(0.0), covariant_derivative(0.0, W, 0.0))
        err = max(err, abs(lhs - rhs))
    return err, samples


def check_duality_all(n, samples, seed):
    err = 0.0
    for a in DUALITY_ALPHAS:
        for i in range(samples):
            p, _ = _point_and_rng(n, seed, i)
            err = max(err, check_duality(a, p, [seed, n, i, 1], samples=1))
    return err, samples


def _geodesic_start(n, seed, i):
    p, rng = _point_and_rng(n, seed, i)
    v = _tangent(p, rng).components
    # keep 1 + t v > 0 on [0, 1] so the mixture path stays inside
    v = 0.5 * v / max(1.0, float(np.max(-v)))
    return p, TangentVector(p, v)


def check_geodesic_e_oracle(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, v = _geodesic_start(n, seed, i)
        g = geodesic(1.0, p, v, 1.0, 256)
        e = p.weights * np.exp(np.outer(g.times, v.components))
        e /= e.sum(axis=1, keepdims=True)
        err = max(err, float(np.max(np.abs(g.points - e))))
    return err, samples


def check_geodesic_m_oracle(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, v = _geodesic_start(n, seed, i)
        g = geodesic(-1.0, p, v, 1.0, 256)
        m = p.weights + np.outer(g.times, p.weights * v.components)
        err = max(err, float(np.max(np.abs(g.points - m))))
    return err, samples


# --- dombrowski --------------------------------------------------------------


def _split_pair(n, seed, i):
    return random_pullback_pair(n, [seed, n, i])


def check_J_squared(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        jj = split_J(split_J(x))
        err = max(
            err,
            float(np.max(np.abs(jj.horizontal.components + x.horizontal.components))),
            float(np.max(np.abs(jj.vertical.components + x.vertical.components))),
        )
    return err, samples


def check_G_hermitian(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, y = _split_pair(n, seed, i)
        err = max(err, abs(split_metric_G(split_J(x), split_J(y)) - split_metric_G(x, y)))
    return err, samples


def check_omega_fundamental(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, y = _split_pair(n, seed, i)
        err = max(err, abs(split_form_Omega(x, y) - split_metric_G(split_J(x), y)))
    return err, samples


def check_omega_closed(n, samples, seed):
    err = 0.0
    for i in range(samples):
        rng = _rng(seed, n, i)
        theta, s = rng.standard_normal((2, n - 1))
        X, Y, Z = (tuple(rng.standard_normal((2, n - 1))) for _ in range(3))
        err = max(err, abs(omega_exterior_derivative(theta, s, X, Y, Z)))
    return err, samples


def check_connector_linearity(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        curve = _random_curve(p, rng)
        A, B = _polynomial_field(curve, rng), _polynomial_field(curve, rng)
        S = VectorFieldAlongCurve(curve, lambda t: A.raw(t) + B.raw(t))
        h = LINEARITY_STEP
        diff = connector(S, 0.0, h).components - connector(A, 0.0, h).components
        diff = diff - connector(B, 0.0, h).components
        err = max(err, float(np.max(np.abs(diff))))
    return err, samples


def check_connector_recovery(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        k = connector(phi_inverse_curve(x))
        err = max(err, float(np.max(np.abs(k.components - x.vertical.components))))
    return err, samples


def check_projection_recovery(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        v = bundle_projection_velocity(phi_inverse_curve(x))
        err = max(err, float(np.max(np.abs(v.components - x.horizontal.components))))
    return err, samples


def check_curve_independence(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        e = tau_pushforward_fd(x, kind="exponential").vector
        m = tau_pushforward_fd(x, kind="mixture").vector
        ge, gm = phi_inverse_curve(x, "exponential"), phi_inverse_curve(x, "mixture")
        err = max(
            err,
            float(np.max(np.abs(e - m))),
            float(np.max(np.abs(connector(ge).components - connector(gm).components))),
            float(
                np.max(
                    np.abs(
                        bundle_projection_velocity(ge).components
                        - bundle_projection_velocity(gm).components
                    )
                )
            ),
        )
    return err, samples


# --- projective --------------------------------------------------------------


def check_unit_and_orthogonal(n, samples, seed):
    err = 0.0
    for i in range(samples):
        u = random_projective_point(n, [seed, n, i, 0])
        xi = random_projective_tangent(u, [seed, n, i, 1])
        pts = [u, chart_backward(u, xi.vector), J_FS(xi).base]
        tans = [xi, J_FS(xi)]
        x, _ = _split_pair(n, seed, i)
        tans.append(tau_pushforward(x))
        pts.append(tau(x.foot))
        for q in pts:
            err = max(err, abs(np.linalg.norm(q.representative) - 1.0))
        for t in tans:
            err = max(err, abs(hermitian(t.base.representative, t.vector)))
    return err, samples


def check_chart_roundtrip(n, samples, seed):
    err = 0.0
    for i in range(samples):
        u = random_projective_point(n, [seed, n, i, 0])
        xi = random_projective_tangent(u, [seed, n, i, 1]).vector
        back = chart_forward(u, chart_backward(u, xi))
        err = max(err, float(np.max(np.abs(back - xi))))
    return err, samples


def check_fs_positive_nondegenerate(n, samples, seed):
    bad = 0
    for i in range(samples):
        u = random_projective_point(n, [seed, n, i, 0])
        g, om = fubini_study_matrices(u)
        if not (np.linalg.eigvalsh(g).min() > 0.0 and abs(np.linalg.det(om)) > 0.0):
            bad += 1
    return float(bad), samples


def check_chart_independence(n, samples, seed):
    err = 0.0
    for i in range(samples):
        u1 = random_projective_point(n, [seed, n, i, 0])
        u2 = random_projective_point(n, [seed, n, i, 1])
        a = random_projective_tangent(u1, [seed, n, i, 2])
        b = random_projective_tangent(u1, [seed, n, i, 3])
        A, B = transfer_tangent(u1, u2, a), transfer_tangent(u1, u2, b)
        g1, w1 = fubini_study(u1, a, b)
        g2, w2 = fubini_study(A.base, A, B)
        err = max(err, abs(g1 - g2), abs(w1 - w2))
    return err, samples


# --- covering ----------------------------------------------------------------


def _deck_elements(n, rng, count=8):
    """All k in [-3, 3]^{n-1} for n <= 3, otherwise ``count`` random ones plus the corners."""
    if n <= 3:
        return list(itertools.product(range(-3, 4), repeat=n - 1))
    ks = [tuple(rng.integers(-3, 4, size=n - 1)) for _ in range(count)]
    ks += [(3,) * (n - 1), (-3,) * (n - 1)]
    return ks


def check_deck_invariance(n, samples, seed):
    err = 0.0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        x = _tangent(p, rng)
        zx = tau(x).representative
        for k in _deck_elements(n, rng):
            zk = tau(deck_action(k, x)).representative
            err = max(err, abs(abs(hermitian(zx, zk)) - 1.0))
    return err, samples


def check_deck_free(n, samples, seed):
    bad = 0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        x = _tangent(p, rng)
        for k in _deck_elements(n, rng):
            if any(k) and np.array_equal(deck_action(k, x).components, x.components):
                bad += 1
    return float(bad), samples


def check_local_injectivity(n, samples, seed):
    bad = 0
    for i in range(samples):
        p, rng = _point_and_rng(n, seed, i)
        x = _tangent(p, rng)
        d = rng.standard_normal((2, n))
        d *= rng.uniform(1e-3, 1e-1) / np.linalg.norm(d)
        moved = exponential_geodesic(p, center_components(p.weights, d[0]))(1.0)
        y = TangentVector(moved, center_components(moved.weights, x.components + d[1]))
        if tau(x).same_ray(tau(y)):
            bad += 1
    return float(bad), samples


def _pullback_residual(n, samples, seed, attr, mode="analytic"):
    err = 0.0
    for i in range(samples):
        x, y = _split_pair(n, seed, i)
        err = max(err, getattr(verify_pullback(x, y, mode), attr))
    return err, samples


def check_pairing_identity(n, samples, seed):
    return _pullback_residual(n, samples, seed, "pairing")


def check_pullback_metric(n, samples, seed):
    return _pullback_residual(n, samples, seed, "metric")


def check_pullback_symplectic(n, samples, seed):
    return _pullback_residual(n, samples, seed, "symplectic")


def check_commutation(n, samples, seed):
    return _pullback_residual(n, samples, seed, "complex_structure")


def check_orthogonality(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        xi = tau_pushforward(x)
        err = max(err, abs(hermitian(tau(x.foot).representative, xi.vector)))
    return err, samples


def check_pushforward_fd(n, samples, seed):
    err = 0.0
    for i in range(samples):
        x, _ = _split_pair(n, seed, i)
        diff = tau_pushforward(x).vector - tau_pushforward_fd(x).vector
        err = max(err, float(np.max(np.abs(diff))))
    return err, samples


@dataclass(frozen=True)
class Check:
    function: object
    tolerance: float
    max_samples: int | None = None


# One configuration table for every tolerance; --tol-scale multiplies them all.
REGISTRY = {
    "simplex.distribution_validity": Check(check_distribution_validity, 1e-12),
    "simplex.fisher_positive_definite": Check(check_fisher_positive_definite, 0.0),
    "simplex.fisher_symmetry": Check(check_fisher_symmetry, 1e-14),
    "simplex.fisher_bilinearity": Check(check_fisher_bilinearity, 1e-12),
    "simplex.center_projection": Check(check_center_projection, 1e-14),
    "simplex.curve_velocity": Check(check_curve_velocity, 1e-8),
    "connections.reduction": Check(check_reduction, 1e-12),
    "connections.linearity": Check(check_linearity, 1e-10),
    "connections.leibniz_levi_civita": Check(check_leibniz_levi_civita, 1e-6),
    "connections.duality": Check(check_duality_all, 1e-6, 100),
    "connections.geodesic_e_oracle": Check(check_geodesic_e_oracle, 1e-6, 10),
    "connections.geodesic_m_oracle": Check(check_geodesic_m_oracle, 1e-6, 10),
    "dombrowski.J_squared": Check(check_J_squared, 1e-15),
    "dombrowski.G_hermitian": Check(check_G_hermitian, 1e-14),
    "dombrowski.omega_fundamental": Check(check_omega_fundamental, 1e-14),
    "dombrowski.omega_closed": Check(check_omega_closed, 1e-5, 200),
    "dombrowski.connector_linearity": Check(check_connector_linearity, 1e-10),
    "dombrowski.connector_recovery": Check(check_connector_recovery, 1e-8),
    "dombrowski.projection_recovery": Check(check_projection_recovery, 1e-8),
    "dombrowski.curve_independence": Check(check_curve_independence, 2e-6, 500),
    "projective.unit_and_orthogonal": Check(check_unit_and_orthogonal, 1e-12),
    "projective.chart_roundtrip": Check(check_chart_roundtrip, 1e-10),
    "projective.fs_positive_nondegenerate": Check(check_fs_positive_nondegenerate, 0.0, 200),
    "projective.chart_independence": Check(check_chart_independence, 1e-6, 200),
    "covering.deck_invariance": Check(check_deck_invariance, 1e-10, 200),
    "covering.deck_free": Check(check_deck_free, 0.0, 200),
    "covering.local_injectivity": Check(check_local_injectivity, 0.0),
    "covering.pairing_identity": Check(check_pairing_identity, 1e-10),
    "covering.orthogonality": Check(check_orthogonality, 1e-12),
    "covering.commutation": Check(check_commutation, 1e-12),
    "covering.pullback_metric": Check(check_pullback_metric, 1e-10),
    "covering.pullback_symplectic": Check(check_pullback_symplectic, 1e-10),
    "covering.pushforward_fd": Check(check_pushforward_fd, 2e-6, 500),
}


def declared_invariants():
    return set(
        simplex.INVARIANTS
        + connections.INVARIANTS
        + dombrowski.INVARIANTS
        + projective.INVARIANTS
        + covering.INVARIANTS
    )


class ConfigurationError(ValueError):
    pass


@dataclass
class CheckRecord:
    name: str
    n: int
    samples: int
    max_abs_error: float
    tolerance: float
    passed: bool
    seed: int
    wall_time_ms: float

    def to_json(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in (
            "name", "n", "samples", "max_abs_error", "tolerance", "pass", "seed", "wall_time_ms"
        )}


@dataclass
class Report:
    suite: str
    records: list = field(default_factory=list)
    artifact_version: str = __version__

    @property
    def overall_pass(self):
        return all(r.passed for r in self.records)

    def to_json(self):
        return {
            "suite": self.suite,
            "artifact_version": self.artifact_version,
            "records": [r.to_json() for r in self.records],
            "overall_pass": self.overall_pass,
        }

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


def run_check(name, n, samples, seed, tol_scale=1.0):
    check = REGISTRY[name]
    used = samples if check.max_samples is None else min(samples, check.max_samples)
    start = time.perf_counter()
    err, used = check.function(n, used, seed)
    elapsed = 1e3 * (time.perf_counter() - start)
    tol = check.tolerance * tol_scale
    err = float(err)
    return CheckRecord(name, n, int(used), err, tol, bool(err <= tol), int(seed), elapsed)


def _validate(n_list, samples, tol_scale):
    if samples < 1:
        raise ConfigurationError("samples must be at least 1")
    if not n_list:
        raise ConfigurationError("need at least one n")
    for n in n_list:
        if not 2 <= n <= MAX_N:
            raise ConfigurationError(f"n = {n} outside [2, {MAX_N}]")
    if not tol_scale > 0:
        raise ConfigurationError("tol-scale must be positive")


def run_verify(n_list=(2, 3, 5, 8), samples=1000, seed=42, tol_scale=1.0, out_path=None, names=None):
    """Run every registered check (or ``names``) for each ``n``."""
    _validate(n_list, samples, tol_scale)
    names = list(REGISTRY) if names is None else list(names)
    report = Report("verify")
    for name in names:
        for n in n_list:
            report.records.append(run_check(name, n, samples, seed, tol_scale))
    if out_path is not None:
        report.write(out_path)
    return report


PULLBACK_TOLERANCES = {
    "analytic": {"metric": 1e-10, "symplectic": 1e-10, "complex_structure": 1e-12},
    "fd": {"metric": 2e-6, "symplectic": 2e-6, "complex_structure": 2e-6},
}


def worked_example():
    """Uniform n = 2, u = 0, v = (1, -1), w = 0: G = g_FS = 0.25."""
    p = [0.5, 0.5]
    x = SplitDoubleTangent.from_arrays(p, [0.0, 0.0], [1.0, -1.0], [0.0, 0.0])
    return x, x


def run_pullback(n, samples, seed, mode="analytic", tol_scale=1.0, out_path=None, example=False):
    """Three records (metric, symplectic, complex structure) over a seeded batch.

    With ``example=True`` the single worked configuration is used instead.
    """
    if mode not in PULLBACK_TOLERANCES:
        raise ConfigurationError(f"unknown mode {mode!r}")
    if example:
        n, samples = 2, 1
    _validate([n], samples, tol_scale)
    start = time.perf_counter()
    if example:
        total = verify_pullback(*worked_example(), mode=mode)
    else:
        total = covering.verify_pullback_batch(n, samples, seed, mode)
    elapsed = 1e3 * (time.perf_counter() - start)
    report = Report(f"pullback-{mode}")
    for key, tol in PULLBACK_TOLERANCES[mode].items():
        err = float(getattr(total, key))
        tol = tol * tol_scale
        report.records.append(
            CheckRecord(f"pullback.{key}", n, samples, err, tol, err <= tol, seed, elapsed)
        )
    if out_path is not None:
        report.write(out_path)
    return report, total
