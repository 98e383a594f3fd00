"""Independent reference computations used only by the tests."""

import numpy as np
from scipy.optimize import linear_sum_assignment


def dense_eigvals(matrix):
    return np.linalg.eigvals(np.asarray(matrix, dtype=np.complex128))


def matched_distance(a, b):
    """Max distance between two multisets under the optimal one-to-one matching."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def rk4(matrix, p0, t_end, h=1e-4):
    """Fixed-step classical Runge-Kutta for dP/dt = A P."""
    a = np.asarray(matrix, dtype=np.complex128)
    p = np.asarray(p0, dtype=np.complex128).copy()
    steps = int(round(t_end / h))
    h = t_end / steps
    for _ in range(steps):
        k1 = a @ p
        k2 = a @ (p + 0.5 * h * k1)
        k3 = a @ (p + 0.5 * h * k2)
        k4 = a @ (p + h * k3)
        p = p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return p


def random_complex(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_annulus(rng, r_min=0.1, r_max=2.0):
    r = rng.uniform(r_min, r_max)
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi))
