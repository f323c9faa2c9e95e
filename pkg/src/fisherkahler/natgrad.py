"""Natural-gradient descent on the simplex for the loss ``f(p) = sum (p_i - target_i)^2``.

The Fisher gradient is found by solving the Gram system of the Fisher metric
on the basis ``center(p, e_k)``.  Steps move along ``dp_i = p_i u_i``, which
preserves the total mass but may leave the simplex when the step is too large.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LeftSimplex
from .simplex import (
    TangentVector,
    fisher_gram,
    make_distribution,
    normalize,
    tangent_basis,
)


def squared_loss(p, target):
    d = np.asarray(getattr(p, "weights", p)) - np.asarray(target)
    return float(d @ d)


def natural_gradient(p, euclidean_grad):
    """Fisher gradient of a function with Euclidean gradient ``euclidean_grad`` at ``p``.

    Solves ``Gram a = b`` with ``b_k = df(p)[e_k-direction]`` where a tangent
    ``[u]_p`` acts by ``df[u] = sum_i grad_i p_i u_i``.
    """
    p = make_distribution(p)
    basis = tangent_basis(p)
    gram = fisher_gram(p, basis)
    B = np.stack([b.components for b in basis], axis=1)
    rhs = B.T @ (p.weights * np.asarray(euclidean_grad, dtype=float))
    coeffs = np.linalg.solve(gram, rhs)
    u = B @ coeffs
    return TangentVector(p, u - p.weights @ u)


@dataclass
class NatGradStep:
    iteration: int
    loss: float
    weights: np.ndarray


def natural_gradient_descent(start, target, iters, step):
    """Run ``iters`` iterations; returns the trace including the starting point.

    Raises LeftSimplex if an update produces a non-positive weight.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    target = make_distribution(target).weights
    p = make_distribution(start)
    trace = [NatGradStep(0, squared_loss(p, target), p.weights.copy())]
    for it in range(1, iters + 1):
        grad = natural_gradient(p, 2.0 * (p.weights - target))
        new = p.weights - step * p.weights * grad.components
        if np.any(new <= 0.0) or not np.all(np.isfinite(new)):
            raise LeftSimplex(f"update {it} left the open simplex (step {step})", t_exit=it)
        p = normalize(new)
        trace.append(NatGradStep(it, squared_loss(p, target), p.weights.copy()))
    return trace
