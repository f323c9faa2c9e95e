"""The covering map tau: TP -> P(C^n)^x and the pullback identities.

``tau([u]_p) = [sqrt(p_1) e^{i u_1 / 2}, ..., sqrt(p_n) e^{i u_n / 2}]``.  Its
differential, read in the chart centered at ``z = tau([u]_p)``, sends the split
element ``(u, v, w)`` to ``xi_j = 1/2 sqrt(p_j) e^{i u_j / 2} (v_j + i w_j)``, and

    <tau_* x, tau_* y> = G(x, y) + i Omega(x, y).

Deck transformations shift ``u_k`` by ``4 pi k_k`` for ``k`` in Z^{n-1}.
"""

from dataclasses import dataclass, field

import numpy as np

from ._fd import DEFAULT_STEP, central_difference
from .dombrowski import (
    SplitDoubleTangent,
    phi_inverse_curve,
    split_form_Omega,
    split_J,
    split_metric_G,
)
from .errors import DimensionMismatch
from .projective import (
    J_FS,
    ProjectivePoint,
    ProjectiveTangent,
    chart_forward,
    fubini_study,
    hermitian,
)
from .simplex import (
    TangentVector,
    center_components,
    random_point,
)


@dataclass(frozen=True)
class DeckElement:
    k: tuple

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)

    @property
    def is_identity(self):
        return not any(self.k)


def tau_vector(p_weights, u):
    """Unit representative ``sqrt(p) e^{i u / 2}`` as a bare array."""
    return np.sqrt(p_weights) * np.exp(0.5j * np.asarray(u))


def tau(x):
    return ProjectivePoint(tau_vector(x.base.weights, x.components))


def deck_action(k, x):
    """``center(p, u + 4 pi (k_1, ..., k_{n-1}, 0))``.

    Recentering only multiplies ``tau`` by a global phase.
    """
    k = k if isinstance(k, DeckElement) else DeckElement(tuple(k))
    if len(k.k) != x.n - 1:
        raise DimensionMismatch(f"deck element of length {len(k.k)} for n = {x.n}")
    if k.is_identity:
        return x
    shift = 4.0 * np.pi * np.append(np.asarray(k.k, dtype=float), 0.0)
    w = x.base.weights
    return TangentVector(x.base, center_components(w, x.components + shift))


def tau_pushforward(x):
    """Analytic ``(phi_z o tau)_* x`` in the chart centered at ``z = tau(foot)``."""
    w = x.base.weights
    z = tau_vector(w, x.foot.components)
    xi = 0.5 * z * (x.horizontal.components + 1j * x.vertical.components)
    return ProjectiveTangent(ProjectivePoint(z), xi)


def tau_pushforward_fd(x, h=DEFAULT_STEP, kind="exponential", richardson=False):
    """``(phi_z o tau)_* x`` by symmetric differences along :func:`phi_inverse_curve`."""
    gamma = phi_inverse_curve(x, kind)
    z = tau_vector(x.base.weights, x.foot.components)

    def chart_image(t):
        return chart_forward(z, tau_vector(gamma.curve.weights(t), gamma.centered_components(t)))

    xi = central_difference(chart_image, 0.0, h, richardson)
    # chart values lie in z-perp; drop the O(eps/h) rounding normal to it
    xi = xi - hermitian(z, xi) * z
    return ProjectiveTangent(ProjectivePoint(z), xi)


@dataclass
class PullbackResidual:
    """Residuals of the three pullback identities for one or many pairs."""

    metric: float = 0.0
    symplectic: float = 0.0
    complex_structure: float = 0.0
    pairing: float = 0.0
    samples: int = 0
    values: dict = field(default_factory=dict)

    def absorb(self, other):
        self.metric = max(self.metric, other.metric)
        self.symplectic = max(self.symplectic, other.symplectic)
        self.complex_structure = max(self.complex_structure, other.complex_structure)
        self.pairing = max(self.pairing, other.pairing)
        self.samples += other.samples


def verify_pullback(x, y, mode="analytic", h=DEFAULT_STEP):
    """Compare ``tau^* g_FS``, ``tau^* omega_FS`` and ``tau_* J`` with G, Omega, ``J_FS tau_*``.

    ``mode`` selects the analytic pushforward or the finite-difference one.
    """
    if mode == "analytic":
        push = tau_pushforward
    elif mode == "fd":
        def push(e):
            return tau_pushforward_fd(e, h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    G = split_metric_G(x, y)
    Om = split_form_Omega(x, y)
    xi, eta = push(x), push(y)
    g_fs, om_fs = fubini_study(xi.base, xi, eta)
    Jxi = push(split_J(x))
    pairing = hermitian(xi.vector, eta.vector)
    return PullbackResidual(
        metric=abs(g_fs - G),
        symplectic=abs(om_fs - Om),
        complex_structure=float(np.max(np.abs(Jxi.vector - J_FS(xi).vector))),
        pairing=abs(pairing - complex(G, Om)),
        samples=1,
        values={"G": G, "Omega": Om, "g_FS": g_fs, "omega_FS": om_fs},
    )


def random_pullback_pair(n, seed):
    """Random ``(p, u, v, w, v_bar, w_bar)`` as two split elements sharing their foot."""
    p = random_point(n, seed)
    rng = np.random.default_rng([*np.atleast_1d(seed), 1])
    u, v, w, vb, wb = (center_components(p.weights, r) for r in rng.standard_normal((5, n)))
    x = SplitDoubleTangent.from_arrays(p, u, v, w)
    y = SplitDoubleTangent.from_arrays(p, u, vb, wb)
    return x, y


def verify_pullback_batch(n, samples, seed, mode="analytic", h=DEFAULT_STEP):
    """Maximum residuals over ``samples`` configurations; sample ``i`` uses seed ``[seed, i]``."""
    total = PullbackResidual()
    for i in range(samples):
        x, y = random_pullback_pair(n, [seed, i])
        total.absorb(verify_pullback(x, y, mode, h))
    return total


INVARIANTS = (
    "covering.deck_invariance",
    "covering.deck_free",
    "covering.local_injectivity",
    "covering.pairing_identity",
    "covering.orthogonality",
    "covering.commutation",
    "covering.pullback_metric",
    "covering.pullback_symplectic",
    "covering.pushforward_fd",
)
