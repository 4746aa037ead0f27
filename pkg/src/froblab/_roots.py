"""Simultaneous polynomial root finding (Aberth–Ehrlich with Newton polish).

Used for characteristic polynomials of unitarised Frobenius classes and for
L-polynomials; degrees stay small (< 40) so a dense all-roots iteration with
deterministic starting points is the right tool.
"""

from __future__ import annotations

import numpy as np

from .errors import RootFindFailure

_MAX_ITER = 200


def _eval_and_deriv(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_roots(coeffs, tol: float = 1e-12) -> np.ndarray:
    """All complex roots of sum(coeffs[k] T^k); coeffs ascending, degree >= 1."""
    c = np.asarray(coeffs, dtype=complex)
    while len(c) > 1 and abs(c[-1]) == 0.0:
        c = c[:-1]
    n = len(c) - 1
    if n < 1:
        raise RootFindFailure("constant polynomial has no roots")
    if n == 1:
        return np.array([-c[0] / c[1]])
    # deterministic start: slightly shrunk circle at the geometric root radius
    radius = (abs(c[0] / c[n])) ** (1.0 / n) if c[0] != 0 else 1.0
    if radius == 0:
        radius = 1.0
    angles = 2 * np.pi * (np.arange(n) + 0.25) / n + 0.7
    z = 0.95 * radius * np.exp(1j * angles)
    for _ in range(_MAX_ITER):
        p, dp = _eval_and_deriv(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / dp, 0.1 + 0j)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            sums = inv.sum(axis=1)
            w = newton / (1.0 - newton * sums)
        z = z - w
        if np.max(np.abs(w)) < tol * max(1.0, float(np.max(np.abs(z)))):
            break
    else:
        raise RootFindFailure(f"no convergence after {_MAX_ITER} iterations")
    # one Newton polish step per root
    p, dp = _eval_and_deriv(c, z)
    mask = dp != 0
    z[mask] = z[mask] - p[mask] / dp[mask]
    order = np.lexsort((z.imag.round(9), z.real.round(9)))
    return z[order]
