"""Numpy implementations of the hot kernels.

These are the reference semantics for the compiled module and the
fallback used when the extension is not built.
"""

from __future__ import annotations

import math

import numpy as np


def two_leader_totals(R: np.ndarray) -> np.ndarray:
    """Total two-leader resistance for every node pair.

    Given the pairwise resistance table ``R``, returns the symmetric matrix
    ``T`` with ``T[x, y] = sum_u r(u, {x, y})`` where

        r(u, {x, y}) = R[u, x] - (R[u, x] + R[x, y] - R[u, y])^2 / (4 R[x, y]).

    The leader terms themselves contribute zero, so the sum may run over all
    nodes. Expanding the square turns the u-sum into one Gram matrix plus
    column sums, which is what is evaluated here.
    """
    R = np.asarray(R, dtype=np.float64)
    n = R.shape[0]
    col = R.sum(axis=0)
    Q = R.T @ R
    q = np.diagonal(Q)
    num = (
        q[:, None]
        + q[None, :]
        - 2.0 * Q
        + 2.0 * R * (col[:, None] - col[None, :])
        + n * R * R
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        T = col[:, None] - num / (4.0 * R)
    np.fill_diagonal(T, 0.0)
    return T


def em_accumulate(A, X, noise, dt: float, skip: int, acc) -> int:
    """Advance Euler-Maruyama over one chunk of pre-generated noise.

    ``X`` has one column per trial and is updated in place with
    ``X <- X - dt * A X + sqrt(dt) * noise[s]``. For every step with index
    ``>= skip`` the per-trial squared norm of the state is added to ``acc``.
    Returns the number of accumulated steps.
    """
    sq = math.sqrt(dt)
    steps = noise.shape[0]
    kept = 0
    for s in range(steps):
        X -= dt * (A @ X)
        X += sq * noise[s]
        if s >= skip:
            acc += np.einsum("it,it->t", X, X)
            kept += 1
    return kept
