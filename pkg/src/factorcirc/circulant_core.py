"""Circulant and lambda-factor circulant matrices.

A lambda-circulant of order N is fixed by its first row ``m`` and the factor
``lam``: entry (k, l) is ``m[(l - k) % N]``, multiplied by ``lam`` when it
sits strictly below the diagonal.  With ``gamma`` an N-th root of ``lam`` and
``FT`` the unitary DFT matrix, every such matrix factors as

    Phi = Diag(gamma**k) @ FT @ Diag(mu) @ FT^* @ Diag(gamma**-k)

with ``mu[l] = sum_k m[k] gamma**k exp(-2j pi k l / N)``.  Everything here is
built on that identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFactor, SingularSpectrum

__all__ = [
    "FactorCirculant",
    "ModalSpectrum",
    "Diagonalization",
    "MaskDecomposition",
    "principal_root",
    "dft_matrix",
    "circulant",
    "to_dense",
    "eigenvalues",
    "diagonalize",
    "mask_decompose",
    "multiply_vector",
    "multiply",
    "inverse",
    "SINGULAR_RTOL",
]

# relative threshold (against max |mu|) below which a mode counts as zero
SINGULAR_RTOL = 1e-12


def _as_complex(value, name="value") -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return z


def _frozen_vector(values, name) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FactorCirculant:
    """Compressed lambda-circulant: first row ``m`` plus ``factor``.

    ``factor=1`` gives an ordinary circulant.  Instances are immutable; ``m``
    is stored as a read-only complex array.
    """

    m: np.ndarray
    factor: complex = 1.0

    def __post_init__(self):
        m = _frozen_vector(self.m, "m")
        if m.size < 2:
            raise ValueError(f"need N >= 2 agents, got first row of length {m.size}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "factor", _as_complex(self.factor, "factor"))

    @property
    def n(self) -> int:
        return int(self.m.size)

    @classmethod
    def identity(cls, n: int, factor=1.0) -> "FactorCirculant":
        m = np.zeros(n, dtype=np.complex128)
        m[0] = 1.0
        return cls(m, factor)

    @classmethod
    def shift(cls, n: int, factor=1.0) -> "FactorCirculant":
        """The lambda-shift Z_lambda (first row e_1); Z_lambda**N = lambda * I."""
        m = np.zeros(n, dtype=np.complex128)
        m[1] = 1.0
        return cls(m, factor)

    def __repr__(self):
        return f"FactorCirculant(m={self.m.tolist()!r}, factor={self.factor!r})"


@dataclass(frozen=True, eq=False)
class ModalSpectrum:
    """Eigenvalues in DFT index order l = 0..N-1, with the root used."""

    mu: np.ndarray
    gamma: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", _frozen_vector(self.mu, "mu"))
        object.__setattr__(self, "gamma", _as_complex(self.gamma, "gamma"))

    @property
    def n(self) -> int:
        return int(self.mu.size)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.mu)


@dataclass(frozen=True, eq=False)
class Diagonalization:
    """``t = Diag(gamma**k) FT`` and its inverse; ``phi = t Diag(mu) t_inv``."""

    t: np.ndarray
    t_inv: np.ndarray
    spectrum: ModalSpectrum

    def reconstruct(self) -> np.ndarray:
        return (self.t * self.spectrum.mu) @ self.t_inv


@dataclass(frozen=True, eq=False)
class MaskDecomposition:
    """``Circ[c] * Circ[gamma**-k] * Lambda`` (elementwise) equals the dense matrix.

    ``c[k] = m[k] gamma**k``; Lambda holds ``factor`` strictly below the diagonal
    and 1 elsewhere.
    """

    base_circulant: np.ndarray
    gamma_circulant: np.ndarray
    factor: complex

    @property
    def n(self) -> int:
        return int(self.base_circulant.size)

    def lambda_mask(self) -> np.ndarray:
        n = self.n
        mask = np.ones((n, n), dtype=np.complex128)
        mask[np.tril_indices(n, -1)] = self.factor
        return mask

    def product(self) -> np.ndarray:
        return (
            circulant(self.base_circulant)
            * circulant(self.gamma_circulant)
            * self.lambda_mask()
        )


def principal_root(factor, n: int) -> complex:
    """Principal N-th root: ``|lam|**(1/n) * exp(1j * Arg(lam) / n)``, Arg in (-pi, pi]."""
    if n < 2:
        raise ValueError(f"root order must be >= 2, got {n}")
    lam = _as_complex(factor, "factor")
    if lam == 0:
        raise DegenerateFactor("factor is zero; its N-th root gives a singular scaling")
    arg = cmath.phase(lam)
    if arg == -math.pi:  # -1-0j reports -pi; fold onto the principal branch
        arg = math.pi
    radius = abs(lam) ** (1.0 / n)
    if arg == 0.0:
        return complex(radius, 0.0)
    return cmath.rect(radius, arg / n)


def _root_powers(gamma: complex, n: int) -> np.ndarray:
    return np.power(np.complex128(gamma), np.arange(n))


def _unit_roots(n: int) -> np.ndarray:
    """``exp(-2j pi k l / n)`` with the exponent reduced mod n for accuracy."""
    idx = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(idx, idx) % n) / n)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix, entry (k, l) = exp(-2j pi k l / n) / sqrt(n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _unit_roots(n) / math.sqrt(n)


def circulant(c) -> np.ndarray:
    """Dense circulant with first row ``c``: entry (k, l) = c[(l - k) % N]."""
    c = np.asarray(c, dtype=np.complex128)
    n = c.size
    idx = np.arange(n)
    return c[(idx[None, :] - idx[:, None]) % n]


def to_dense(phi: FactorCirculant) -> np.ndarray:
    n = phi.n
    idx = np.arange(n)
    offset = idx[None, :] - idx[:, None]
    dense = phi.m[offset % n].astype(np.complex128)
    dense[offset < 0] *= phi.factor
    return dense


def eigenvalues(phi: FactorCirculant) -> ModalSpectrum:
    gamma = principal_root(phi.factor, phi.n)
    c = phi.m * _root_powers(gamma, phi.n)
    return ModalSpectrum(_unit_roots(phi.n) @ c, gamma)


def diagonalize(phi: FactorCirculant) -> Diagonalization:
    spectrum = eigenvalues(phi)
    n = phi.n
    ft = dft_matrix(n)
    powers = _root_powers(spectrum.gamma, n)
    t = powers[:, None] * ft
    t_inv = ft.conj().T / powers[None, :]
    return Diagonalization(t, t_inv, spectrum)


def mask_decompose(phi: FactorCirculant) -> MaskDecomposition:
    gamma = principal_root(phi.factor, phi.n)
    powers = _root_powers(gamma, phi.n)
    return MaskDecomposition(
        _frozen_vector(phi.m * powers, "base_circulant"),
        _frozen_vector(1.0 / powers, "gamma_circulant"),
        phi.factor,
    )


def multiply_vector(phi: FactorCirculant, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (phi.n,):
        raise ValueError(f"vector of length {phi.n} expected, got shape {v.shape}")
    return to_dense(phi) @ v


def _check_compatible(a: FactorCirculant, b: FactorCirculant):
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    if a.factor != b.factor:
        raise ValueError(
            f"factor mismatch: {a.factor!r} vs {b.factor!r}; "
            "products of different factors are not factor circulants"
        )


def multiply(phi_a: FactorCirculant, phi_b: FactorCirculant) -> FactorCirculant:
    """Product of two lambda-circulants sharing the same factor."""
    _check_compatible(phi_a, phi_b)
    # row 0 of a product only needs row 0 of the left operand
    row0 = phi_a.m @ to_dense(phi_b)
    return FactorCirculant(row0, phi_a.factor)


def inverse(phi: FactorCirculant) -> FactorCirculant:
    """Inverse through the spectrum; raises SingularSpectrum on vanishing modes."""
    spectrum = eigenvalues(phi)
    mod = spectrum.moduli
    scale = mod.max()
    dead = np.flatnonzero(mod <= SINGULAR_RTOL * scale) if scale > 0 else np.arange(phi.n)
    if dead.size:
        raise SingularSpectrum(dead)
    n = phi.n
    # c = FT_unnormalized^{-1} (1/mu), then undo the gamma scaling
    c = _unit_roots(n).conj() @ (1.0 / spectrum.mu) / n
    m = c / _root_powers(spectrum.gamma, n)
    return FactorCirculant(m, phi.factor)
