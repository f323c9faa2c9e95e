import io

import numpy as np
import pytest

from fisherkahler.connections import (
    Alpha,
    SampledCurve,
    VectorFieldAlongCurve,
    check_duality,
    covariant_derivative,
    exponential_derivative,
    exponential_geodesic,
    geodesic,
    mixture_geodesic,
    parallel_transport,
)
from fisherkahler.errors import BaseMismatch, CurveDomain, LeftSimplex
from fisherkahler.simplex import (
    Curve,
    TangentVector,
    center,
    constant_curve,
    fisher_metric,
    make_distribution,
    random_point,
    random_tangent,
)

ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0)


def test_alpha_named_values():
    assert Alpha.exponential().value == 1.0
    assert Alpha.mixture().value == -1.0
    assert Alpha.levi_civita().value == 0.0
    assert Alpha(0.3).dual().value == -0.3
    with pytest.raises(ValueError):
        Alpha(float("nan"))


@pytest.mark.parametrize("alpha", ALPHAS)
def test_constant_field_on_constant_curve(alpha):
    p = make_distribution([0.2, 0.3, 0.5])
    V = VectorFieldAlongCurve(constant_curve(p), lambda t: center(p, [1.0, -2.0, 0.5]).components)
    d = covariant_derivative(alpha, V, 0.0)
    np.testing.assert_allclose(d.components, 0.0, atol=1e-10)


def test_exponential_derivative_of_linear_field():
    p = make_distribution([0.2, 0.3, 0.5])
    w = np.array([1.0, 4.0, -2.0])
    V = VectorFieldAlongCurve(constant_curve(p), lambda t: t * w)
    d = exponential_derivative(V, 0.7)
    np.testing.assert_allclose(d.components, center(p, w).components, atol=1e-9)
    const = VectorFieldAlongCurve(constant_curve(p), lambda t: w)
    np.testing.assert_allclose(exponential_derivative(const, 0.0).components, 0.0, atol=1e-10)


def test_analytic_field_derivative_is_used():
    p = make_distribution([0.5, 0.5])
    w = np.array([1.0, -1.0])
    V = VectorFieldAlongCurve(constant_curve(p), lambda t: t * w, derivative=lambda t: w)
    assert exponential_derivative(V, 0.0).components.tolist() == [1.0, -1.0]


def test_reduction_to_exponential_derivative():
    for s in range(100):
        rng = np.random.default_rng(s)
        p = random_point(4, rng)
        curve = exponential_geodesic(p, center(p, rng.standard_normal(4)))
        a, b = rng.standard_normal((2, 4))
        V = VectorFieldAlongCurve(curve, lambda t, a=a, b=b: a + t * t * b)
        t = rng.uniform(-0.5, 0.5)
        d1 = covariant_derivative(1.0, V, t).components
        de = exponential_derivative(V, t).components
        np.testing.assert_allclose(d1, de, rtol=0, atol=1e-10)


def test_e_geodesic_velocity_is_e_parallel():
    for s in range(20):
        rng = np.random.default_rng(s)
        p = random_point(5, rng)
        v = center(p, rng.standard_normal(5))
        curve = exponential_geodesic(p, v)
        U = VectorFieldAlongCurve(curve, lambda t: v.components)
        for t in (-0.3, 0.0, 0.4):
            assert np.abs(exponential_derivative(U, t).components).max() <= 1e-8


def test_levi_civita_geodesic_velocity_is_parallel():
    p = random_point(4, 11)
    v = random_tangent(p, 12)
    g = geodesic(0.0, p, 0.5 * v, 1.0, 256)
    U = g.velocity_field()
    for t in (0.25, 0.5, 0.75):
        assert np.abs(covariant_derivative(0.0, U, t).components).max() <= 2e-6


def test_step_and_domain_checks():
    p = make_distribution([0.5, 0.5])
    V = VectorFieldAlongCurve(Curve(lambda t: p.weights, interval=(0.0, 1.0)), lambda t: [0.0, 0.0])
    with pytest.raises(ValueError):
        covariant_derivative(0.0, V, 0.5, h=1e-1)
    with pytest.raises(ValueError):
        covariant_derivative(0.0, V, 0.5, h=1e-9)
    with pytest.raises(CurveDomain):
        covariant_derivative(0.0, V, 1.0)
    with pytest.raises(CurveDomain):
        exponential_derivative(V, 0.0)


def test_closed_form_geodesics():
    p = make_distribution([0.5, 0.5])
    v = TangentVector(p, [1.0, -1.0])
    e = exponential_geodesic(p, v)
    np.testing.assert_allclose(e.weights(1.0), np.array([np.e, 1 / np.e]) / (np.e + 1 / np.e))
    m = mixture_geodesic(p, v)
    # 1 + t v_i > 0 on (-1, 1)
    assert m.interval == (-1.0, 1.0)
    np.testing.assert_allclose(m.weights(0.5), [0.75, 0.25])
    np.testing.assert_allclose(m.velocity(0.5).components, center(m(0.5), [2 / 3, -2]).components)


def test_geodesic_zero_velocity_is_constant():
    p = make_distribution([0.2, 0.3, 0.5])
    g = geodesic(0.3, p, TangentVector(p, [0.0, 0.0, 0.0]), 1.0, 32)
    assert np.all(g.points == p.weights)
    assert np.all(g.velocities == 0.0)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_geodesic_oracles(n):
    for s in range(3):
        rng = np.random.default_rng([n, s])
        p = random_point(n, rng)
        v = center(p, rng.standard_normal(n)).components
        v = 0.5 * v / max(1.0, -v.min())
        v = TangentVector(p, v)
        ge = geodesic(1.0, p, v, 1.0, 256)
        e = p.weights * np.exp(np.outer(ge.times, v.components))
        e /= e.sum(axis=1, keepdims=True)
        assert np.abs(ge.points - e).max() <= 1e-6
        gm = geodesic(-1.0, p, v, 1.0, 256)
        m = p.weights + np.outer(gm.times, p.weights * v.components)
        assert np.abs(gm.points - m).max() <= 1e-6


def test_geodesic_errors():
    p = make_distribution([0.5, 0.5])
    q = make_distribution([0.25, 0.75])
    with pytest.raises(BaseMismatch):
        geodesic(0.0, p, TangentVector(q, [3.0, -1.0]), 1.0)
    with pytest.raises(ValueError):
        geodesic(0.0, p, TangentVector(p, [1.0, -1.0]), 1.0, steps=8)
    # the m-geodesic p + t p v hits the boundary at t = 1/3
    with pytest.raises(LeftSimplex) as info:
        geodesic(-1.0, p, TangentVector(p, [3.0, -3.0]), 1.0, 256)
    assert 1 / 3 - 1e-2 < info.value.t_exit <= 1 / 3 + 1e-2


def test_sampled_curve_csv():
    p = make_distribution([0.5, 0.5])
    g = geodesic(1.0, p, TangentVector(p, [1.0, -1.0]), 1.0, 16)
    buf = io.StringIO()
    g.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,p_1,p_2,u_1,u_2"
    assert len(lines) == 18
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 1.0
    assert last[1:3] == g.points[-1].tolist()
    assert isinstance(g, SampledCurve)
    np.testing.assert_allclose(g.final_point.weights, g.points[-1])


def test_sampled_curve_interpolates_between_nodes():
    p = random_point(3, 5)
    v = random_tangent(p, 6)
    g = geodesic(1.0, p, 0.3 * v, 1.0, 64)
    exact = exponential_geodesic(p, 0.3 * v)
    for t in (0.013, 0.5111, 0.97):
        np.testing.assert_allclose(g.weights(t), exact.weights(t), atol=1e-9)


def test_parallel_transport_constant_curve():
    p = random_point(4, 0)
    v0 = random_tangent(p, 1)
    for a in ALPHAS:
        out = parallel_transport(a, constant_curve(p), v0, 1.0, 32)
        np.testing.assert_allclose(out.components, v0.components, atol=1e-14)


def test_parallel_transport_dual_pairing_is_preserved():
    for s in range(10):
        rng = np.random.default_rng(s)
        p = random_point(5, rng)
        curve = exponential_geodesic(p, center(p, rng.standard_normal(5)))
        y, z = center(p, rng.standard_normal(5)), center(p, rng.standard_normal(5))
        Y = parallel_transport(1.0, curve, y, 1.0)
        Z = parallel_transport(-1.0, curve, z, 1.0)
        assert abs(fisher_metric(Y, Z) - fisher_metric(y, z)) <= 1e-6


def test_parallel_transport_round_trip():
    p = random_point(4, 2)
    curve = mixture_geodesic(p, 0.3 * random_tangent(p, 3))
    v0 = random_tangent(p, 4)
    for a in ALPHAS:
        there = parallel_transport(a, curve, v0, 1.0)
        back = parallel_transport(a, curve.reversed(1.0), there, 1.0)
        np.testing.assert_allclose(back.components, v0.components, atol=1e-6)


def test_parallel_transport_errors():
    p = random_point(3, 0)
    curve = mixture_geodesic(p, random_tangent(p, 1))
    with pytest.raises(BaseMismatch):
        parallel_transport(0.0, curve, random_tangent(random_point(3, 9), 0), 0.1)
    with pytest.raises(CurveDomain):
        parallel_transport(0.0, curve, random_tangent(p, 2), 1e6)


def test_duality_levi_civita_n3_seed42():
    assert check_duality(0.0, random_point(3, 42), 42) <= 1e-6


@pytest.mark.parametrize("n", [2, 3, 5])
def test_duality_exponential(n):
    assert check_duality(1.0, random_point(n, n), 42) <= 1e-6


@pytest.mark.parametrize("alpha", ALPHAS)
def test_duality_residual_is_second_order(alpha):
    p = random_point(4, 7)
    coarse = check_duality(alpha, p, 3, h=1e-2)
    fine = check_duality(alpha, p, 3, h=5e-3)
    assert 4 * 0.7 <= coarse / fine <= 4 * 1.3
