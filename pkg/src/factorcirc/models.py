"""Named interaction families: Darboux midpoint pursuit and centroid gathering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circulant_core import FactorCirculant, _as_complex, principal_root


@dataclass(frozen=True)
class CentroidGatheringParams:
    """Self weight ``alpha``, forward weight ``beta_f`` and backward weight ``beta_b``."""

    n: int
    alpha: complex
    beta_f: complex
    beta_b: complex

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        for name in ("alpha", "beta_f", "beta_b"):
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))
        if self.beta_f == 0:
            raise ValueError("beta_f must be non-zero (the factor is beta_b / beta_f)")

    @property
    def factor(self) -> complex:
        return self.beta_b / self.beta_f


def darboux(n: int, factor=1.0) -> FactorCirculant:
    """Each agent moves to the midpoint of itself and its successor.

    The last agent's successor is agent 0 scaled by ``factor``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    m = np.zeros(n, dtype=np.complex128)
    m[:2] = 0.5
    return FactorCirculant(m, factor)


def darboux_eigenvalues(n: int, factor=1.0) -> np.ndarray:
    """``(1 + gamma * exp(-2j pi l / n)) / 2`` for l = 0..n-1."""
    gamma = principal_root(factor, n)
    l = np.arange(n)
    return 0.5 * (1 + gamma * np.exp(-2j * np.pi * l / n))


def centroid_gathering(params: CentroidGatheringParams) -> FactorCirculant:
    m = np.full(params.n, params.beta_f, dtype=np.complex128)
    m[0] = params.alpha
    return FactorCirculant(m, params.factor)


def _normalized_forward_weight(n: int, alpha: complex) -> complex:
    alpha = _as_complex(alpha, "alpha")
    if alpha == 1:
        raise ValueError("alpha = 1 makes the forward weight (1 - alpha)/(n - 1) vanish")
    return (1 - alpha) / (n - 1)


def normalized_gathering(n: int, alpha, factor=1.0) -> FactorCirculant:
    """Gathering with ``beta_f = (1 - alpha)/(n - 1)`` and ``beta_b = factor * beta_f``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    beta_f = _normalized_forward_weight(n, alpha)
    factor = _as_complex(factor, "factor")
    return centroid_gathering(CentroidGatheringParams(n, alpha, beta_f, factor * beta_f))


def gathering_mu0_closed_form(n: int, alpha, factor=1.0) -> complex:
    """Mode-0 eigenvalue of the normalized gathering matrix, summed in closed form.

    Uses ``sum_{k<n} gamma**k = (lam - 1)/(gamma - 1)``; when ``gamma == 1``
    the geometric sum is ``n`` and the result is exactly 1.
    """
    beta = _normalized_forward_weight(n, alpha)
    alpha = _as_complex(alpha, "alpha")
    gamma = principal_root(factor, n)
    if gamma == 1:
        return 1 + 0j
    lam = _as_complex(factor, "factor")
    return alpha - beta + beta * (lam - 1) / (gamma - 1)


def gathering_eigenvalues(n: int, alpha, beta_f, factor=1.0) -> np.ndarray:
    """All modes of the gathering matrix from the defining geometric sum.

    ``mu[l] = alpha - beta_f + beta_f * (lam - 1)/(gamma w**l - 1)`` with
    ``w = exp(-2j pi/n)``; terms where ``gamma w**l == 1`` sum to ``n``.
    """
    alpha = _as_complex(alpha, "alpha")
    beta_f = _as_complex(beta_f, "beta_f")
    lam = _as_complex(factor, "factor")
    gamma = principal_root(lam, n)
    ratio = gamma * np.exp(-2j * np.pi * np.arange(n) / n)
    geom = np.empty(n, dtype=np.complex128)
    degenerate = np.isclose(ratio, 1, rtol=0, atol=1e-14)
    geom[degenerate] = n
    geom[~degenerate] = (lam - 1) / (ratio[~degenerate] - 1)
    return alpha - beta_f + beta_f * geom
