"""Long-run behaviour read off the spectrum.

The mode(s) of largest modulus dominate ``P(t)`` as ``t`` grows: their modulus
decides growth or decay, their phase decides straight or spiralling motion, and
the corresponding column of ``T`` gives the limiting formation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circulant_core import FactorCirculant, ModalSpectrum, diagonalize, eigenvalues
from .dynamics import SwarmState, check_invariance
from .errors import MultiModal, PreconditionFailed

TIE_TOL = 1e-9
UNIT_TOL = 1e-12


class LimitKind(str, Enum):
    FIXED_POINT = "FixedPoint"
    CONVERGE_TO_POINT = "ConvergeToPoint"
    DECAY_TO_ORIGIN = "DecayToOrigin"
    DIVERGE = "Diverge"
    NEUTRAL_ROTATION = "NeutralRotation"


@dataclass(frozen=True)
class LimitClass:
    kind: LimitKind
    dominant_indices: tuple
    dominant_modulus: float
    limit_point: complex | None = None
    # "straight" (positive real dominant mu), "alternating" (negative real) or "spiral"
    motion: str = "straight"


@dataclass(frozen=True, eq=False)
class FormationPrediction:
    """``P(t) ~ growth**t * amplitude * direction`` for the single dominant mode."""

    mode: int
    direction: np.ndarray
    amplitude: complex
    growth: complex

    def at(self, t: int) -> np.ndarray:
        return self.growth ** t * self.amplitude * self.direction


@dataclass(frozen=True)
class EllipseLimit:
    """Residual of the circulant Darboux evolution once the centroid is removed.

    ``a`` multiplies the counter-clockwise polygon ``exp(2j pi k/N)``, which is
    the eigenvector of ``mu[N-1]``; ``b`` multiplies the clockwise polygon
    ``exp(-2j pi k/N)``, the eigenvector of ``mu[1]``.
    """

    a: complex
    b: complex
    mu1: complex
    muN1: complex
    centroid: complex
    n: int

    def residual(self, t: int) -> np.ndarray:
        k = np.arange(self.n)
        ccw = np.exp(2j * np.pi * k / self.n)
        return self.a * self.muN1 ** t * ccw + self.b * self.mu1 ** t * ccw.conj()


def dominant_modes(spectrum: ModalSpectrum | np.ndarray, tie_tol: float = TIE_TOL) -> tuple:
    """Indices l with ``|mu_l| >= (1 - tie_tol) * max |mu|``."""
    mu = spectrum.mu if isinstance(spectrum, ModalSpectrum) else np.asarray(spectrum)
    if mu.size == 0:
        raise ValueError("empty spectrum")
    if not 0 < tie_tol <= 1e-3:
        raise ValueError(f"tie_tol must lie in (0, 1e-3], got {tie_tol}")
    mod = np.abs(mu)
    return tuple(int(l) for l in np.flatnonzero(mod >= (1 - tie_tol) * mod.max()))


def _motion(mu_dom) -> str:
    phases = [abs(cmath.phase(complex(z))) for z in mu_dom]
    if all(p <= UNIT_TOL for p in phases):
        return "straight"
    if all(abs(p - math.pi) <= UNIT_TOL for p in phases):
        return "alternating"
    return "spiral"


def _gains(mu: np.ndarray, continuous: bool) -> np.ndarray:
    """Per-unit-time multipliers of each mode: ``mu`` or ``exp(mu)``."""
    return np.exp(mu) if continuous else mu


def classify(
    phi: FactorCirculant, state0: SwarmState, tie_tol: float = TIE_TOL, continuous: bool = False
) -> LimitClass:
    """Limit behaviour of ``P(t+1) = Phi P(t)`` (or ``dP/dt = Phi P`` when ``continuous``)."""
    gains = _gains(eigenvalues(phi).mu, continuous)
    dom = dominant_modes(gains, tie_tol)
    mu_dom = gains[list(dom)]
    r = float(np.abs(gains).max())
    motion = _motion(mu_dom)

    if r > 1 + UNIT_TOL:
        return LimitClass(LimitKind.DIVERGE, dom, r, None, motion)
    if r < 1 - UNIT_TOL:
        return LimitClass(LimitKind.DECAY_TO_ORIGIN, dom, r, 0j, motion)
    if not np.all(np.abs(mu_dom - 1) <= UNIT_TOL):
        return LimitClass(LimitKind.NEUTRAL_ROTATION, dom, r, None, motion)

    # every dominant mode is exactly 1: the state settles on a fixed formation,
    # which is a single point only for the circulant mode-0 limit
    rep = check_invariance(phi)
    collapses = (
        dom == (0,)
        and phi.factor == 1
        and (rep.continuous_ok if continuous else rep.discrete_ok)
    )
    if collapses:
        return LimitClass(LimitKind.CONVERGE_TO_POINT, dom, r, state0.centroid, motion)
    return LimitClass(LimitKind.FIXED_POINT, dom, r, None, motion)


def formation(
    phi: FactorCirculant, state0: SwarmState, tie_tol: float = TIE_TOL, continuous: bool = False
) -> FormationPrediction:
    """Rank-one limit along the uniquely dominant mode.

    For mode 0 the direction is ``[1, gamma, ..., gamma**(N-1)]`` and the
    amplitude ``mean(gamma**-k * P_k)``.  In continuous time ``growth`` is
    ``exp(mu)``, the gain over one time unit.
    """
    if state0.n != phi.n:
        raise ValueError(f"state has {state0.n} agents, matrix has order {phi.n}")
    diag = diagonalize(phi)
    gains = _gains(diag.spectrum.mu, continuous)
    dom = dominant_modes(gains, tie_tol)
    if len(dom) != 1:
        raise MultiModal(dom)
    l = dom[0]
    root_n = math.sqrt(phi.n)
    direction = diag.t[:, l] * root_n
    amplitude = complex(diag.t_inv[l] @ state0.positions) / root_n
    direction.setflags(write=False)
    return FormationPrediction(l, direction, amplitude, complex(gains[l]))


def predicted_state(
    phi: FactorCirculant, state0: SwarmState, t, continuous: bool = False
) -> SwarmState:
    """Asymptotic rank-one approximation of ``P(t)``; exact only in the limit."""
    pred = formation(phi, state0, continuous=continuous)
    return SwarmState(pred.at(t), state0.time + t)


def deflate(phi: FactorCirculant, state: SwarmState) -> np.ndarray:
    """``state`` minus its mode-0 component, removed in modal coordinates."""
    diag = diagonalize(phi)
    coords = diag.t_inv @ state.positions
    return state.positions - diag.t[:, 0] * coords[0]


def span_residual(phi: FactorCirculant, positions, modes) -> float:
    """Relative size of the part of ``positions`` outside the span of ``modes``."""
    diag = diagonalize(phi)
    positions = np.asarray(positions, dtype=np.complex128)
    coords = diag.t_inv @ positions
    other = np.ones(phi.n, dtype=bool)
    other[list(modes)] = False
    outside = diag.t[:, other] @ coords[other]
    total = np.linalg.norm(positions)
    if total == 0:
        return 0.0
    return float(np.linalg.norm(outside) / total)


def ellipse_residual(phi: FactorCirculant, state0: SwarmState, tie_tol: float = TIE_TOL) -> EllipseLimit:
    """Amplitudes of the two slowest non-trivial modes of a circulant evolution."""
    n = phi.n
    if state0.n != n:
        raise ValueError(f"state has {state0.n} agents, matrix has order {n}")
    if n < 3:
        raise PreconditionFailed("a residual ellipse needs at least 3 agents")
    if phi.factor != 1:
        raise PreconditionFailed(f"ellipse residual is defined for factor 1, got {phi.factor!r}")
    spectrum = eigenvalues(phi)
    mu = spectrum.mu
    if dominant_modes(spectrum, tie_tol) != (0,) or abs(mu[0] - 1) > UNIT_TOL:
        raise PreconditionFailed("mode 0 must be the unique dominant mode with mu_0 = 1")
    rest = np.abs(mu).copy()
    rest[0] = -np.inf
    if rest.max() <= UNIT_TOL:
        raise PreconditionFailed("all non-centroid modes vanish; there is no residual shape")
    pair = tuple(int(l) for l in np.flatnonzero(rest >= (1 - tie_tol) * rest.max()))
    if pair != (1, n - 1):
        raise PreconditionFailed(
            f"residual is dominated by modes {list(pair)}, not the pair [1, {n - 1}]"
        )
    k = np.arange(n)
    w = np.exp(-2j * np.pi * k / n)
    p = state0.positions
    return EllipseLimit(
        a=complex(w @ p) / n,
        b=complex(w.conj() @ p) / n,
        mu1=complex(mu[1]),
        muN1=complex(mu[n - 1]),
        centroid=state0.centroid,
        n=n,
    )
