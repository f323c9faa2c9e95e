import itertools

import numpy as np
import pytest

from fisherkahler.connections import exponential_geodesic
from fisherkahler.covering import (
    DeckElement,
    PullbackResidual,
    deck_action,
    random_pullback_pair,
    tau,
    tau_pushforward,
    tau_pushforward_fd,
    verify_pullback,
    verify_pullback_batch,
)
from fisherkahler.dombrowski import SplitDoubleTangent, split_J
from fisherkahler.errors import DimensionMismatch
from fisherkahler.projective import ProjectivePoint, hermitian
from fisherkahler.simplex import (
    TangentVector,
    center,
    make_distribution,
    random_point,
    random_tangent,
)

UNIFORM2 = make_distribution([0.5, 0.5])


# Maps of the quotient diagram for the deck action, in coordinates. They live only here.


def j1(x):
    u = x.components
    return x.base.weights, u[:-1] - u[-1]


def j2(z):
    z = z.representative
    phase = z[:-1] * np.conj(z[-1]) / np.abs(z[:-1] * z[-1])
    return np.abs(z) ** 2, phase


def tau_bar(p, s):
    return p, np.exp(0.5j * s)


def test_tau_examples():
    z = tau(TangentVector(UNIFORM2, [0.0, 0.0]))
    np.testing.assert_allclose(z.representative, [2**-0.5, 2**-0.5], rtol=0, atol=1e-16)
    w = tau(TangentVector(UNIFORM2, [np.pi, -np.pi]))
    np.testing.assert_allclose(w.representative, [1j * 2**-0.5, -1j * 2**-0.5], atol=1e-16)
    assert w.same_ray(ProjectivePoint.from_vector([1.0, -1.0]))
    for s in range(50):
        x = random_tangent(random_point(6, s), s)
        np.testing.assert_allclose(np.abs(tau(x).representative), np.sqrt(x.base.weights), atol=1e-15)


def test_diagram_commutes():
    for s in range(100):
        x = random_tangent(random_point(5, s), s)
        p1, ph1 = tau_bar(*j1(x))
        p2, ph2 = j2(tau(x))
        np.testing.assert_allclose(p1, p2, atol=1e-15)
        np.testing.assert_allclose(ph1, ph2, atol=1e-12)


def test_deck_action_in_quotient_coordinates():
    # in j1 coordinates the deck action is the plain 4 pi k shift
    x = random_tangent(random_point(4, 0), 1)
    k = (1, -2, 3)
    _, before = j1(x)
    _, after = j1(deck_action(k, x))
    np.testing.assert_allclose(after - before, 4 * np.pi * np.array(k), atol=1e-12)


def test_deck_identity_and_errors():
    x = random_tangent(random_point(3, 0), 1)
    assert deck_action((0, 0), x).components.tolist() == x.components.tolist()
    assert DeckElement((0, 0)).is_identity
    assert not DeckElement((0, 1)).is_identity
    with pytest.raises(DimensionMismatch):
        deck_action((1,), x)
    assert deck_action(DeckElement((1, 0)), x).base is x.base


@pytest.mark.parametrize("n", [2, 3])
def test_deck_invariance_and_freeness_exhaustive(n):
    for s in range(200):
        x = random_tangent(random_point(n, [n, s]), [n, s, 1])
        z = tau(x)
        for k in itertools.product(range(-3, 4), repeat=n - 1):
            y = deck_action(k, x)
            assert abs(abs(hermitian(z.representative, tau(y).representative)) - 1.0) <= 1e-10
            if any(k):
                assert not np.array_equal(y.components, x.components)


@pytest.mark.parametrize("n", [5, 8])
def test_deck_invariance_sampled(n):
    rng = np.random.default_rng(n)
    for s in range(200):
        x = random_tangent(random_point(n, [n, s]), [n, s, 1])
        z = tau(x)
        ks = [rng.integers(-3, 4, size=n - 1) for _ in range(10)]
        ks += [np.full(n - 1, 3), np.full(n - 1, -3)]
        for k in ks:
            y = deck_action(k, x)
            assert abs(abs(hermitian(z.representative, tau(y).representative)) - 1.0) <= 1e-10
            if np.any(k):
                assert not np.array_equal(y.components, x.components)


def test_phase_wrap_n2_exhaustive():
    # for n = 2, tau(x) = tau(y) at a common p exactly when u_1 - u_2 differs by 4 pi k
    x = TangentVector(UNIFORM2, [0.3, -0.3])
    zx = tau(x)
    for d in np.linspace(-12 * np.pi, 12 * np.pi, 2401):
        y = TangentVector(UNIFORM2, [0.3 + d / 2, -0.3 - d / 2])
        k = d / (4 * np.pi)
        is_deck = abs(k - round(k)) < 1e-9
        assert zx.same_ray(tau(y)) == is_deck


def test_local_injectivity():
    for n in (2, 3, 5, 8):
        for s in range(200):
            rng = np.random.default_rng([n, s])
            p = random_point(n, rng)
            x = center(p, rng.standard_normal(n))
            d = rng.standard_normal((2, n))
            d *= rng.uniform(1e-3, 1e-1) / np.linalg.norm(d)
            moved = exponential_geodesic(p, center(p, d[0]))(1.0)
            y = center(moved, x.components + d[1])
            if np.allclose(y.components, x.components) and moved.same_point(p):
                continue
            assert not tau(x).same_ray(tau(y))


def test_pushforward_worked_example():
    x = SplitDoubleTangent.from_arrays(UNIFORM2, [0.0, 0.0], [1.0, -1.0], [0.0, 0.0])
    xi = tau_pushforward(x)
    r = 2**0.5 / 4
    np.testing.assert_allclose(xi.vector, [r, -r], rtol=0, atol=1e-16)
    res = verify_pullback(x, x)
    assert res.values["G"] == 0.25
    assert res.values["g_FS"] == pytest.approx(0.25, abs=1e-16)
    assert res.metric <= 1e-16 and res.symplectic == 0.0 and res.complex_structure == 0.0


def test_pushforward_of_zero():
    x, _ = random_pullback_pair(4, 0)
    zero = SplitDoubleTangent.from_arrays(x.base, x.foot.components, np.zeros(4), np.zeros(4))
    assert np.all(tau_pushforward(zero).vector == 0)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_orthogonality_and_commutation(n):
    for s in range(300):
        x, _ = random_pullback_pair(n, [n, s])
        xi = tau_pushforward(x)
        assert xi.base.same_representative(tau(x.foot))
        assert abs(hermitian(xi.base.representative, xi.vector)) <= 1e-12
        jxi = tau_pushforward(split_J(x))
        assert np.abs(jxi.vector - 1j * xi.vector).max() <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_pullback_identities_analytic(n):
    r = verify_pullback_batch(n, 1000, 42)
    assert r.samples == 1000
    assert r.metric <= 1e-10
    assert r.symplectic <= 1e-10
    assert r.complex_structure <= 1e-12
    assert r.pairing <= 1e-10


def test_pullback_identity_for_rotated_arguments():
    for s in range(100):
        x, y = random_pullback_pair(4, s)
        r = verify_pullback(split_J(x), y)
        assert r.metric <= 1e-12 and r.symplectic <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_pushforward_matches_finite_differences(n):
    worst = 0.0
    for s in range(500):
        x, _ = random_pullback_pair(n, [n, s])
        worst = max(worst, np.abs(tau_pushforward(x).vector - tau_pushforward_fd(x).vector).max())
    assert worst <= 2e-6


def test_pushforward_fd_is_curve_independent():
    for s in range(100):
        x, _ = random_pullback_pair(4, s)
        e = tau_pushforward_fd(x, kind="exponential").vector
        m = tau_pushforward_fd(x, kind="mixture").vector
        assert np.abs(e - m).max() <= 2e-6


def test_pushforward_fd_error_is_second_order():
    coarse = fine = 0.0
    for s in range(50):
        x, _ = random_pullback_pair(3, s)
        exact = tau_pushforward(x).vector
        coarse = max(coarse, np.abs(tau_pushforward_fd(x, h=2e-4).vector - exact).max())
        fine = max(fine, np.abs(tau_pushforward_fd(x, h=1e-4).vector - exact).max())
    assert 4 * 0.7 <= coarse / fine <= 4 * 1.3


def test_fd_mode_pullback():
    r = verify_pullback_batch(3, 100, 7, mode="fd")
    assert max(r.metric, r.symplectic, r.complex_structure) <= 2e-6
    with pytest.raises(ValueError):
        verify_pullback(*random_pullback_pair(3, 0), mode="exact")


def test_batch_is_deterministic_and_seeded_per_sample():
    a = verify_pullback_batch(3, 20, 5)
    b = verify_pullback_batch(3, 20, 5)
    assert (a.metric, a.symplectic, a.pairing) == (b.metric, b.symplectic, b.pairing)
    # sample i only depends on [seed, i]
    x, y = random_pullback_pair(3, [5, 19])
    single = verify_pullback(x, y)
    assert single.pairing <= a.pairing


def test_residual_absorb():
    total = PullbackResidual()
    total.absorb(PullbackResidual(metric=1.0, samples=1))
    total.absorb(PullbackResidual(symplectic=2.0, samples=2))
    assert (total.metric, total.symplectic, total.samples) == (1.0, 2.0, 3)
