"""Swarm evolution under a lambda-circulant interaction matrix.

Positions are complex numbers ``x + 1j*y``.  Discrete time applies
``P(t+1) = Phi P(t)``; continuous time solves ``dP/dt = Phi P``.  Both have a
closed form in the modal coordinates ``T^{-1} P`` where every mode evolves on
its own (``mu**t`` or ``exp(mu t)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .circulant_core import (
    Diagonalization,
    FactorCirculant,
    _as_complex,
    _frozen_vector,
    diagonalize,
    multiply_vector,
    to_dense,
)

Kind = Literal["continuous", "discrete"]

INVARIANCE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SwarmState:
    positions: np.ndarray
    time: float = 0

    def __post_init__(self):
        pos = _frozen_vector(self.positions, "positions")
        if pos.size < 1:
            raise ValueError("a swarm needs at least one agent")
        object.__setattr__(self, "positions", pos)
        if not math.isfinite(self.time) or self.time < 0:
            raise ValueError(f"time must be finite and >= 0, got {self.time!r}")

    @property
    def n(self) -> int:
        return int(self.positions.size)

    @property
    def centroid(self) -> complex:
        return complex(self.positions.mean())

    @property
    def xy(self) -> np.ndarray:
        """Positions as an (N, 2) real array."""
        return np.column_stack([self.positions.real, self.positions.imag])

    @classmethod
    def from_xy(cls, points, time=0) -> "SwarmState":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(pts[:, 0] + 1j * pts[:, 1], time)


@dataclass(frozen=True, eq=False)
class ModalState:
    coords: np.ndarray
    time: float = 0

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_vector(self.coords, "coords"))


@dataclass(frozen=True)
class SimilarityTransform:
    """``P -> scale * P + shift`` applied to every agent."""

    scale: complex = 1.0
    shift: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scale", _as_complex(self.scale, "scale"))
        object.__setattr__(self, "shift", _as_complex(self.shift, "shift"))
        if self.scale == 0:
            raise ValueError("similarity scale must be non-zero")


@dataclass(frozen=True, eq=False)
class InvarianceReport:
    row_sums: np.ndarray
    continuous_ok: bool
    discrete_ok: bool
    tolerance: float = INVARIANCE_TOL


@dataclass(frozen=True, eq=False)
class BeaconSystem:
    """``Phi`` bordered by a stationary beacon agent.

    The embedded matrix is ``[[Phi, s], [0, z]]`` acting on ``[P; P_B]``.
    """

    base: FactorCirculant
    correction: np.ndarray
    beacon_value: complex
    beacon_position: complex
    kind: Kind = field(default="discrete")

    @property
    def n(self) -> int:
        return self.base.n

    def embedded(self) -> np.ndarray:
        n = self.n
        big = np.zeros((n + 1, n + 1), dtype=np.complex128)
        big[:n, :n] = to_dense(self.base)
        big[:n, n] = self.correction
        big[n, n] = self.beacon_value
        return big


def _check_dims(phi: FactorCirculant, state: SwarmState):
    if state.n != phi.n:
        raise ValueError(f"state has {state.n} agents but the matrix is {phi.n}x{phi.n}")


def step_discrete(phi: FactorCirculant, state: SwarmState) -> SwarmState:
    _check_dims(phi, state)
    return SwarmState(multiply_vector(phi, state.positions), state.time + 1)


def iterate_discrete(phi: FactorCirculant, state: SwarmState, steps: int) -> list[SwarmState]:
    """All frames of ``steps`` direct steps, starting with ``state`` itself."""
    _check_dims(phi, state)
    dense = to_dense(phi)
    frames = [state]
    pos = state.positions
    for k in range(1, steps + 1):
        pos = dense @ pos
        frames.append(SwarmState(pos, state.time + k))
    return frames


def to_modal(diag: Diagonalization, state: SwarmState) -> ModalState:
    if state.n != diag.spectrum.n:
        raise ValueError(f"state has {state.n} agents, transform has {diag.spectrum.n}")
    return ModalState(diag.t_inv @ state.positions, state.time)


def from_modal(diag: Diagonalization, modal: ModalState) -> SwarmState:
    if modal.coords.size != diag.spectrum.n:
        raise ValueError(
            f"modal vector has {modal.coords.size} entries, transform has {diag.spectrum.n}"
        )
    return SwarmState(diag.t @ modal.coords, modal.time)


def _modal_evolve(diag: Diagonalization, state: SwarmState, gains, t) -> SwarmState:
    coords = diag.t_inv @ state.positions
    return SwarmState(diag.t @ (gains * coords), state.time + t)


def evolve_discrete(
    phi: FactorCirculant, state0: SwarmState, t: int, diag: Diagonalization | None = None
) -> SwarmState:
    """Closed-form ``t`` steps: ``T Diag(mu**t) T^{-1} P(0)``."""
    _check_dims(phi, state0)
    if int(t) != t or t < 0:
        raise ValueError(f"discrete time must be a non-negative integer, got {t!r}")
    t = int(t)
    diag = diag if diag is not None else diagonalize(phi)
    if t == 0:
        return state0
    return _modal_evolve(diag, state0, diag.spectrum.mu ** t, t)


def evolve_continuous(
    phi: FactorCirculant, state0: SwarmState, t: float, diag: Diagonalization | None = None
) -> SwarmState:
    """Exact solution of ``dP/dt = Phi P`` at time ``t`` via ``exp(mu t)``."""
    _check_dims(phi, state0)
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    diag = diag if diag is not None else diagonalize(phi)
    if t == 0:
        return state0
    return _modal_evolve(diag, state0, np.exp(diag.spectrum.mu * t), t)


def apply_similarity(state: SwarmState, s: SimilarityTransform) -> SwarmState:
    return SwarmState(s.scale * state.positions + s.shift, state.time)


def check_invariance(
    phi: Union[FactorCirculant, np.ndarray], tol: float = INVARIANCE_TOL
) -> InvarianceReport:
    """Row sums of ``phi`` and whether they are all 0 (continuous) or all 1 (discrete).

    Accepts a FactorCirculant or any square dense matrix (e.g. a beacon embedding).
    """
    dense = to_dense(phi) if isinstance(phi, FactorCirculant) else np.asarray(phi, complex)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError(f"square matrix expected, got shape {dense.shape}")
    sums = dense.sum(axis=1)
    sums.setflags(write=False)
    return InvarianceReport(
        row_sums=sums,
        continuous_ok=bool(np.all(np.abs(sums) <= tol)),
        discrete_ok=bool(np.all(np.abs(sums - 1) <= tol)),
        tolerance=tol,
    )


def embed_beacon(phi: FactorCirculant, kind: Kind, beacon_position=0.0) -> BeaconSystem:
    if kind not in ("continuous", "discrete"):
        raise ValueError(f"kind must be 'continuous' or 'discrete', got {kind!r}")
    sums = to_dense(phi).sum(axis=1)
    if kind == "continuous":
        s, z = -sums, 0j
    else:
        s, z = 1 - sums, 1 + 0j
    return BeaconSystem(
        base=phi,
        correction=_frozen_vector(s, "correction"),
        beacon_value=z,
        beacon_position=_as_complex(beacon_position, "beacon_position"),
        kind=kind,
    )


def step_embedded(system: BeaconSystem, extended: np.ndarray) -> np.ndarray:
    """One discrete step of the full (N+1)-agent system; last entry is the beacon."""
    if system.kind != "discrete":
        raise ValueError("stepping is defined for the discrete embedding only")
    extended = np.asarray(extended, dtype=np.complex128)
    if extended.shape != (system.n + 1,):
        raise ValueError(f"extended state of length {system.n + 1} expected")
    return system.embedded() @ extended


def step_beacon(system: BeaconSystem, state: SwarmState) -> SwarmState:
    """One discrete step with the beacon held at ``beacon_position``.

    Equals ``Phi (P - P_B) + P_B`` since ``s = 1 - Phi 1``.
    """
    if system.kind != "discrete":
        raise ValueError("stepping is defined for the discrete embedding only")
    _check_dims(system.base, state)
    pos = multiply_vector(system.base, state.positions) + system.correction * system.beacon_position
    return SwarmState(pos, state.time + 1)


def evolve_beacon_continuous(
    system: BeaconSystem, state0: SwarmState, t: float, diag: Diagonalization | None = None
) -> SwarmState:
    """``P(t) = P_B + exp(Phi t) (P(0) - P_B)`` for the continuous embedding."""
    if system.kind != "continuous":
        raise ValueError("continuous evolution needs the continuous embedding")
    shifted = SwarmState(state0.positions - system.beacon_position, state0.time)
    out = evolve_continuous(system.base, shifted, t, diag)
    return SwarmState(out.positions + system.beacon_position, out.time)


def random_uniform_state(n: int, seed: int) -> SwarmState:
    """``n`` agents uniform on the unit square, drawn x then y per agent from
    ``numpy.random.Generator(PCG64(seed))``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.random((n, 2))
    return SwarmState(pts[:, 0] + 1j * pts[:, 1])


def regular_polygon_state(n: int, radius: float = 1.0, center=0j) -> SwarmState:
    """Vertices ``center + radius * exp(2j pi k / n)``, counter-clockwise."""
    k = np.arange(n)
    return SwarmState(center + radius * np.exp(2j * np.pi * k / n))
