"""Scenario configs, simulation runs and text reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import asymptotics
from .circulant_core import FactorCirculant, diagonalize, eigenvalues, to_dense
from .dynamics import (
    SwarmState,
    check_invariance,
    embed_beacon,
    evolve_beacon_continuous,
    evolve_continuous,
    evolve_discrete,
    iterate_discrete,
    random_uniform_state,
    regular_polygon_state,
    step_beacon,
)
from .errors import ConfigError, MultiModal
from .models import CentroidGatheringParams, centroid_gathering, darboux, normalized_gathering

MODELS = ("darboux", "centroid_gathering", "custom")
MODES = ("discrete", "continuous")
INITS = ("random_uniform", "regular_polygon", "explicit")
PLOT_STYLES = ("overlay_first_step", "full_evolution", "final_zoom")

_KNOWN_FIELDS = {
    "model", "n", "lambda", "alpha", "beta_f", "beta_b", "m", "mode", "steps", "dt",
    "init", "seed", "points", "beacon", "outputs",
}


@dataclass(frozen=True)
class Beacon:
    position: complex
    kind: str


@dataclass(frozen=True)
class Outputs:
    trajectory: Optional[str] = None
    plot: Optional[str] = None
    plot_style: str = "full_evolution"


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    n: int
    lam: complex = 1.0
    alpha: Optional[complex] = None
    beta_f: Optional[complex] = None
    beta_b: Optional[complex] = None
    m: Optional[tuple] = None
    mode: str = "discrete"
    steps: int = 0
    dt: Optional[float] = None
    init: str = "random_uniform"
    seed: int = 0
    points: Optional[tuple] = None
    beacon: Optional[Beacon] = None
    outputs: Outputs = field(default_factory=Outputs)


@dataclass(frozen=True)
class Trajectory:
    frames: tuple

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise ValueError("a trajectory needs at least one frame")
        n = frames[0].n
        for prev, cur in zip(frames, frames[1:]):
            if cur.n != n:
                raise ValueError("agent count changes between frames")
            if not cur.time > prev.time:
                raise ValueError("frame times must be strictly increasing")
        object.__setattr__(self, "frames", frames)

    @property
    def n(self) -> int:
        return self.frames[0].n

    def __len__(self):
        return len(self.frames)


# -- parsing ------------------------------------------------------------------

def _complex_field(raw, name) -> complex:
    if isinstance(raw, bool):
        raise ConfigError(name, "expected a number, got a boolean")
    if isinstance(raw, (int, float, complex)):
        z = complex(raw)
    elif isinstance(raw, (list, tuple)) and len(raw) == 2:
        z = complex(_real_field(raw[0], name), _real_field(raw[1], name))
    elif isinstance(raw, dict) and set(raw) <= {"re", "im"}:
        z = complex(_real_field(raw.get("re", 0), name), _real_field(raw.get("im", 0), name))
    else:
        raise ConfigError(name, f"expected a number, [re, im] or {{'re', 'im'}}, got {raw!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(name, "must be finite")
    return z


def _real_field(raw, name) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(name, f"expected a real number, got {raw!r}")
    if not math.isfinite(raw):
        raise ConfigError(name, "must be finite")
    return float(raw)


def _int_field(raw, name, minimum) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(name, f"expected an integer, got {raw!r}")
    if raw < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {raw}")
    return raw


def _choice(raw, name, options) -> str:
    if raw not in options:
        raise ConfigError(name, f"expected one of {list(options)}, got {raw!r}")
    return raw


def _require(data, name):
    if name not in data:
        raise ConfigError(name, "missing required field")
    return data[name]


def config_from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    unknown = sorted(set(data) - _KNOWN_FIELDS)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")

    model = _choice(_require(data, "model"), "model", MODELS)
    n = _int_field(_require(data, "n"), "n", 2)
    mode = _choice(data.get("mode", "discrete"), "mode", MODES)
    steps = _int_field(data.get("steps", 0), "steps", 0)
    lam = _complex_field(data.get("lambda", 1.0), "lambda")
    alpha = beta_f = beta_b = None
    m = None

    if model == "centroid_gathering":
        alpha = _complex_field(_require(data, "alpha"), "alpha")
        has_f, has_b = "beta_f" in data, "beta_b" in data
        if has_f != has_b:
            raise ConfigError("beta_b" if has_f else "beta_f", "beta_f and beta_b must be given together")
        if has_f:
            if "lambda" in data:
                raise ConfigError("lambda", "lambda is implied by beta_b/beta_f; give one or the other")
            beta_f = _complex_field(data["beta_f"], "beta_f")
            beta_b = _complex_field(data["beta_b"], "beta_b")
            if beta_f == 0:
                raise ConfigError("beta_f", "must be non-zero")
            lam = beta_b / beta_f
        elif alpha == 1:
            raise ConfigError("alpha", "alpha = 1 leaves no weight for the neighbours")
    elif model == "custom":
        raw_m = _require(data, "m")
        if not isinstance(raw_m, list) or len(raw_m) != n:
            raise ConfigError("m", f"expected a list of {n} weights")
        m = tuple(_complex_field(v, "m") for v in raw_m)

    if lam == 0:
        raise ConfigError("lambda", "factor must be non-zero")

    dt = None
    if mode == "continuous":
        dt = _real_field(_require(data, "dt"), "dt")
        if dt <= 0:
            raise ConfigError("dt", "must be positive")

    init = _choice(data.get("init", "random_uniform"), "init", INITS)
    seed = _int_field(data.get("seed", 0), "seed", 0)
    if seed >= 2 ** 64:
        raise ConfigError("seed", "must fit in 64 unsigned bits")
    points = None
    if init == "explicit":
        raw_pts = _require(data, "points")
        if not isinstance(raw_pts, list) or len(raw_pts) != n:
            raise ConfigError("points", f"expected a list of {n} [x, y] pairs")
        pts = []
        for p in raw_pts:
            if not isinstance(p, list) or len(p) != 2:
                raise ConfigError("points", f"expected [x, y], got {p!r}")
            pts.append((_real_field(p[0], "points"), _real_field(p[1], "points")))
        points = tuple(pts)

    beacon = None
    if data.get("beacon") is not None:
        raw = data["beacon"]
        if not isinstance(raw, dict):
            raise ConfigError("beacon", "expected an object with x, y and kind")
        kind = _choice(raw.get("kind", mode), "beacon", MODES)
        if kind != mode:
            raise ConfigError("beacon", f"beacon kind {kind!r} does not match mode {mode!r}")
        beacon = Beacon(
            complex(_real_field(raw.get("x", 0.0), "beacon"), _real_field(raw.get("y", 0.0), "beacon")),
            kind,
        )

    raw_out = data.get("outputs") or {}
    if not isinstance(raw_out, dict):
        raise ConfigError("outputs", "expected an object")
    outputs = Outputs(
        trajectory=raw_out.get("trajectory"),
        plot=raw_out.get("plot"),
        plot_style=_choice(raw_out.get("plot_style", "full_evolution"), "outputs", PLOT_STYLES),
    )

    return ScenarioConfig(
        model=model, n=n, lam=lam, alpha=alpha, beta_f=beta_f, beta_b=beta_b, m=m,
        mode=mode, steps=steps, dt=dt, init=init, seed=seed, points=points,
        beacon=beacon, outputs=outputs,
    )


def parse_config(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return config_from_dict(data)


# -- running ------------------------------------------------------------------

def build_matrix(config: ScenarioConfig) -> FactorCirculant:
    if config.model == "darboux":
        return darboux(config.n, config.lam)
    if config.model == "custom":
        return FactorCirculant(np.array(config.m), config.lam)
    if config.beta_f is not None:
        return centroid_gathering(
            CentroidGatheringParams(config.n, config.alpha, config.beta_f, config.beta_b)
        )
    return normalized_gathering(config.n, config.alpha, config.lam)


def initial_state(config: ScenarioConfig) -> SwarmState:
    if config.init == "explicit":
        return SwarmState.from_xy(config.points)
    if config.init == "regular_polygon":
        return regular_polygon_state(config.n)
    return random_uniform_state(config.n, config.seed)


def run_scenario(config: ScenarioConfig) -> Trajectory:
    phi = build_matrix(config)
    s0 = initial_state(config)
    if config.mode == "discrete":
        if config.beacon is None:
            return Trajectory(iterate_discrete(phi, s0, config.steps))
        system = embed_beacon(phi, "discrete", config.beacon.position)
        frames = [s0]
        for _ in range(config.steps):
            frames.append(step_beacon(system, frames[-1]))
        return Trajectory(frames)

    diag = diagonalize(phi)
    times = [k * config.dt for k in range(config.steps + 1)]
    if config.beacon is None:
        frames = [evolve_continuous(phi, s0, t, diag) for t in times]
    else:
        system = embed_beacon(phi, "continuous", config.beacon.position)
        frames = [evolve_beacon_continuous(system, s0, t, diag) for t in times]
    return Trajectory(frames)


def spectrum_report(config: ScenarioConfig) -> str:
    phi = build_matrix(config)
    s0 = initial_state(config)
    spectrum = eigenvalues(phi)
    continuous = config.mode == "continuous"
    lc = asymptotics.classify(phi, s0, continuous=continuous)
    lines = [
        f"model {config.model}  n={config.n}  factor={_fmt_complex(phi.factor)}  "
        f"gamma={_fmt_complex(spectrum.gamma)}",
        f"{'l':>3}  {'re':>22}  {'im':>22}  {'modulus':>22}",
    ]
    for l, mu in enumerate(spectrum.mu):
        lines.append(f"{l:>3}  {mu.real:>22.15g}  {mu.imag:>22.15g}  {abs(mu):>22.15g}")
    if continuous:
        lines.append("continuous time: modes grow as exp(mu t); classified on exp(mu)")
    lines.append(f"dominant modes: {list(lc.dominant_indices)}  modulus={lc.dominant_modulus:.15g}")
    limit = "" if lc.limit_point is None else f"  limit point={_fmt_complex(lc.limit_point)}"
    lines.append(f"limit class: {lc.kind.value}  motion={lc.motion}{limit}")
    try:
        pred = asymptotics.formation(phi, s0, continuous=continuous)
    except MultiModal as exc:
        lines.append(f"formation: MultiModal (dominant modes tie: {list(exc.modes)})")
    else:
        lines.append(
            f"formation: mode {pred.mode}  growth={_fmt_complex(pred.growth)}  "
            f"amplitude={_fmt_complex(pred.amplitude)}"
        )
        lines.append("  direction: " + ", ".join(_fmt_complex(z) for z in pred.direction))
    return "\n".join(lines) + "\n"


def _fmt_complex(z) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}j"


# -- verification -------------------------------------------------------------

def _expm(a: np.ndarray) -> np.ndarray:
    """Dense matrix exponential by scaling and squaring a Taylor series."""
    norm = np.abs(a).sum(axis=1).max()
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    b = a / 2 ** squarings
    result = np.eye(a.shape[0], dtype=np.complex128)
    term = result.copy()
    for k in range(1, 30):
        term = term @ b / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def verify(config: ScenarioConfig) -> list[tuple[str, str, str]]:
    """Rows of (check, status, detail); status is PASS, FAIL or INFO."""
    phi = build_matrix(config)
    s0 = initial_state(config)
    rows = []
    diag = diagonalize(phi)
    dense = to_dense(phi)
    recon = float(np.abs(diag.reconstruct() - dense).max())
    rows.append(("reconstruction", "PASS" if recon < 1e-10 else "FAIL", f"max error {recon:.3e} (< 1e-10)"))

    if config.mode == "discrete":
        direct = iterate_discrete(phi, s0, config.steps)[-1].positions
        modal = evolve_discrete(phi, s0, config.steps, diag).positions
        label = f"modal vs direct ({config.steps} steps)"
    else:
        step = _expm(dense * config.dt)
        direct = s0.positions
        for _ in range(config.steps):
            direct = step @ direct
        modal = evolve_continuous(phi, s0, config.steps * config.dt, diag).positions
        label = f"modal vs matrix exponential (t={config.steps * config.dt:g})"
    scale = np.linalg.norm(direct)
    err = float(np.linalg.norm(modal - direct) / scale) if scale > 0 else float(np.linalg.norm(modal))
    rows.append((label, "PASS" if err < 1e-8 else "FAIL", f"relative error {err:.3e} (< 1e-8)"))

    rep = check_invariance(phi)
    needed = rep.discrete_ok if config.mode == "discrete" else rep.continuous_ok
    target = "1" if config.mode == "discrete" else "0"
    dev = float(np.abs(rep.row_sums - (1 if config.mode == "discrete" else 0)).max())
    rows.append((
        f"similarity invariance (row sums = {target})",
        "INFO",
        f"{'holds' if needed else 'does not hold'}; max deviation {dev:.3e}",
    ))
    if config.beacon is not None or not needed:
        system = embed_beacon(phi, config.mode, config.beacon.position if config.beacon else 0)
        big = check_invariance(system.embedded())
        ok = big.discrete_ok if config.mode == "discrete" else big.continuous_ok
        rows.append(("beacon embedding invariance", "PASS" if ok else "FAIL", f"{config.n + 1}-agent system"))
    return rows


def format_table(rows) -> str:
    width = max(len(r[0]) for r in rows)
    return "\n".join(f"{name:<{width}}  {status:<4}  {detail}" for name, status, detail in rows) + "\n"
