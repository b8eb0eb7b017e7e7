"""Quadrature rules on the reference triangle and on [0, 1].

Assembly never needs these (it integrates exactly); they serve evaluation
of discrete functions and error checks.
"""

from __future__ import annotations

import math

import numpy as np

MAX_QUAD_DEGREE = 10


def quadrature(degree):
    """Positive-weight rule exact for polynomials of total degree ``degree``.

    Returns ``(points, weights)`` with points of shape (n, 2); the weights
    add up to the reference area 1/2.
    """
    degree = int(degree)
    if degree < 0 or degree > MAX_QUAD_DEGREE:
        raise ValueError(f"unsupported quadrature degree {degree}")
    if degree <= 1:
        return np.array([[1.0 / 3.0, 1.0 / 3.0]]), np.array([0.5])
    if degree == 2:
        pts = np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]])
        return pts, np.full(3, 1.0 / 6.0)
    # collapsed (Duffy) tensor Gauss rule: x = u, y = v (1 - u)
    n = int(math.ceil((degree + 2) / 2))
    t, w = edge_quadrature(2 * n - 1)
    U, V = np.meshgrid(t, t, indexing="ij")
    WU, WV = np.meshgrid(w, w, indexing="ij")
    pts = np.stack([U.ravel(), (V * (1.0 - U)).ravel()], axis=1)
    return pts, (WU * WV * (1.0 - U)).ravel()


def edge_quadrature(degree):
    """Gauss-Legendre rule on [0, 1] exact for degree ``degree``."""
    degree = int(degree)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    n = max(1, int(math.ceil((degree + 1) / 2)))
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w
