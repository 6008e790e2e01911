"""Ground-truth generators for the chaotic benchmarks, the RK4 integrator,
delay-equation handling, unit-interval normalization, and a small echo state
network used as a comparison baseline.

All generators are deterministic given their initial data.  Integration steps
default to 0.02 for the continuous systems; the quadratic map has no dt and
one iterate equals one reservoir step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .regression import fit_linear

DT_DEFAULT = 0.02

LORENZ_PARAMS = (10.0, 28.0, 8.0 / 3.0)
ROSSLER_PARAMS = (0.2, 0.2, 5.7)
MACKEY_GLASS_PARAMS = (0.2, 0.1, 10.0)
MACKEY_GLASS_DELAY = 17.0
HENON_DIVERGENCE_BOUND = 10.0


class DynamicsError(ValueError):
    """Raised on invalid integrator or generator input."""


@dataclass(frozen=True)
class OdeSystem:
    """Autonomous or time-dependent first-order ODE system."""

    dimension: int
    derivative: Callable[[np.ndarray, float], np.ndarray]
    params: dict = field(default_factory=dict)


def rk4_step(sys: OdeSystem, state: np.ndarray, t: float, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta update."""
    if dt <= 0.0:
        raise DynamicsError(f"dt must be positive, got {dt}")
    y = np.asarray(state, dtype=float)
    k1 = np.asarray(sys.derivative(y, t), dtype=float)
    k2 = np.asarray(sys.derivative(y + 0.5 * dt * k1, t + 0.5 * dt), dtype=float)
    k3 = np.asarray(sys.derivative(y + 0.5 * dt * k2, t + 0.5 * dt), dtype=float)
    k4 = np.asarray(sys.derivative(y + dt * k3, t + dt), dtype=float)
    out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise DynamicsError(f"non-finite state after RK4 step at t={t}")
    return out


def _integrate_x(
    sys: OdeSystem, initial: np.ndarray, length: int, dt: float, transient: int
) -> np.ndarray:
    if length < 1:
        raise DynamicsError("series length must be at least 1")
    state = np.asarray(initial, dtype=float)
    if state.shape != (sys.dimension,):
        raise DynamicsError(
            f"initial state must have dimension {sys.dimension}, got {state.shape}"
        )
    out = np.empty(length)
    t = 0.0
    for _ in range(transient):
        state = rk4_step(sys, state, t, dt)
        t += dt
    for k in range(length):
        out[k] = state[0]
        state = rk4_step(sys, state, t, dt)
        t += dt
    return out


def lorenz_system(params: tuple = LORENZ_PARAMS) -> OdeSystem:
    a, b, c = params

    def deriv(state: np.ndarray, _t: float) -> np.ndarray:
        x, y, z = state
        return np.array([a * (y - x), x * (b - z) - y, x * y - c * z])

    return OdeSystem(3, deriv, {"a": a, "b": b, "c": c})


def lorenz_series(
    length: int,
    dt: float = DT_DEFAULT,
    params: tuple = LORENZ_PARAMS,
    initial: tuple = (1.0, 1.0, 1.0),
    transient: int = 5000,
) -> np.ndarray:
    """x(t) samples of the Lorenz attractor after a transient discard."""
    return _integrate_x(lorenz_system(params), np.asarray(initial), length, dt, transient)


def rossler_system(params: tuple = ROSSLER_PARAMS) -> OdeSystem:
    a, b, c = params

    def deriv(state: np.ndarray, _t: float) -> np.ndarray:
        x, y, z = state
        return np.array([-y - z, x + a * y, b + z * (x - c)])

    return OdeSystem(3, deriv, {"a": a, "b": b, "c": c})


def rossler_series(
    length: int,
    dt: float = DT_DEFAULT,
    params: tuple = ROSSLER_PARAMS,
    initial: tuple = (1.0, 1.0, 1.0),
    transient: int = 5000,
) -> np.ndarray:
    """x(t) samples of the Roessler attractor after a transient discard."""
    return _integrate_x(rossler_system(params), np.asarray(initial), length, dt, transient)


def mackey_glass_series(
    length: int,
    dt: float = DT_DEFAULT,
    params: tuple = MACKEY_GLASS_PARAMS,
    delay: float = MACKEY_GLASS_DELAY,
    history: float = 1.2,
    transient: int = 5000,
) -> np.ndarray:
    """Mackey-Glass delay equation integrated with RK4 on a uniform grid.

    The delayed value at RK4 half-steps falls between grid points and is
    linearly interpolated from the stored trajectory; the constant initial
    history fills the first full delay window.
    """
    beta, gamma, exponent = params
    if delay <= 0.0:
        raise DynamicsError("delay must be positive")
    if history <= 0.0:
        raise DynamicsError("history value must be positive")
    if length < 1:
        raise DynamicsError("series length must be at least 1")
    lag_steps = delay / dt
    history_len = int(np.ceil(lag_steps)) + 1
    total = history_len + transient + length
    traj = np.empty(total)
    traj[:history_len] = history

    def delayed(position: float) -> float:
        # position is a fractional index into traj at (current time - delay).
        lo = int(np.floor(position))
        frac = position - lo
        if frac == 0.0:
            return traj[lo]
        return (1.0 - frac) * traj[lo] + frac * traj[lo + 1]

    def rhs(x: float, x_delayed: float) -> float:
        return beta * x_delayed / (1.0 + x_delayed**exponent) - gamma * x

    for i in range(history_len - 1, total - 1):
        x = traj[i]
        d0 = delayed(i - lag_steps)
        d_half = delayed(i + 0.5 - lag_steps)
        d1 = delayed(i + 1.0 - lag_steps)
        k1 = rhs(x, d0)
        k2 = rhs(x + 0.5 * dt * k1, d_half)
        k3 = rhs(x + 0.5 * dt * k2, d_half)
        k4 = rhs(x + dt * k3, d1)
        traj[i + 1] = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(traj[i + 1]):
            raise DynamicsError(f"non-finite Mackey-Glass value at step {i + 1}")
    return traj[history_len + transient :].copy()


def henon_series(
    length: int, initial: tuple = (0.0, 0.0), transient: int = 100
) -> np.ndarray:
    """Quadratic two-term recurrence x_{t+1} = 1 - 1.4 x_t^2 + 0.3 x_{t-1}.

    Off-attractor initial data can escape to infinity; the series is truncated
    with a warning once |x| exceeds the divergence bound.
    """
    if length < 1:
        raise DynamicsError("series length must be at least 1")
    x_curr, x_prev = float(initial[0]), float(initial[1])
    total = transient + length
    values = np.empty(total)
    for k in range(total):
        x_next = 1.0 - 1.4 * x_curr**2 + 0.3 * x_prev
        values[k] = x_next
        if abs(x_next) > HENON_DIVERGENCE_BOUND:
            warnings.warn(
                f"Henon iteration diverged at step {k}; truncating series",
                RuntimeWarning,
            )
            return values[transient : k + 1].copy()
        x_prev, x_curr = x_curr, x_next
    return values[transient:].copy()


@dataclass(frozen=True)
class AffineMap:
    """Invertible map raw -> scale * raw + offset used for unit-interval scaling."""

    scale: float
    offset: float

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.scale * np.asarray(values, dtype=float) + self.offset

    def invert(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=float) - self.offset) / self.scale


@dataclass
class NormalizedSeries:
    """Series mapped into [0, 1] plus the map and the out-of-range clamp count."""

    values: np.ndarray
    mapping: AffineMap
    clamped_count: int = 0


def normalize_unit_interval(
    series: np.ndarray, fit_slice: Optional[slice] = None
) -> NormalizedSeries:
    """Min-max scale into [0, 1] over the fitted segment.

    Values outside the fitted range (e.g. in a test segment) are clamped and
    counted rather than allowed to leave the unit interval.
    """
    values = np.asarray(series, dtype=float).reshape(-1)
    segment = values[fit_slice] if fit_slice is not None else values
    lo, hi = float(np.min(segment)), float(np.max(segment))
    if hi == lo:
        raise DynamicsError("cannot normalize a constant series")
    mapping = AffineMap(scale=1.0 / (hi - lo), offset=-lo / (hi - lo))
    mapped = mapping.apply(values)
    clamped = int(np.sum((mapped < 0.0) | (mapped > 1.0)))
    return NormalizedSeries(np.clip(mapped, 0.0, 1.0), mapping, clamped)


@dataclass(frozen=True)
class EsnConfig:
    """Random tanh echo state network: size, spectral radius, input scale, seed."""

    nodes: int
    spectral_radius: float = 0.95
    input_scale: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.nodes < 1:
            raise DynamicsError("ESN needs at least one node")
        if self.spectral_radius <= 0.0:
            raise DynamicsError("spectral radius must be positive")


class EchoStateNetwork:
    """Dense random recurrent network r(k+1) = tanh(W r(k) + W_in x_k)."""

    def __init__(self, cfg: EsnConfig):
        self.cfg = cfg
        if cfg.spectral_radius >= 1.0:
            warnings.warn(
                f"spectral radius {cfg.spectral_radius} >= 1 may break the echo "
                "state property",
                RuntimeWarning,
            )
        rng = np.random.default_rng(cfg.seed)
        w = rng.uniform(-1.0, 1.0, size=(cfg.nodes, cfg.nodes))
        radius = float(np.max(np.abs(np.linalg.eigvals(w))))
        self.w = w * (cfg.spectral_radius / radius)
        self.w_in = rng.uniform(-cfg.input_scale, cfg.input_scale, size=cfg.nodes)

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.w))))

    def run(
        self, inputs: np.ndarray, initial: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """Node states after each input; row k is the state driven by x_k."""
        inputs = np.asarray(inputs, dtype=float).reshape(-1)
        state = (
            np.zeros(self.cfg.nodes)
            if initial is None
            else np.asarray(initial, dtype=float).copy()
        )
        states = np.empty((inputs.shape[0], self.cfg.nodes))
        for k, x in enumerate(inputs):
            state = np.tanh(self.w @ state + self.w_in * x)
            states[k] = state
        return states


def esn_baseline(
    cfg: EsnConfig, inputs: np.ndarray, targets: np.ndarray, washout: int
) -> tuple:
    """Train a pseudoinverse readout on ESN states; returns (esn, weights, nmse).

    The design matrix is [states, 1]; the first ``washout`` rows are dropped.
    """
    from .regression import nmse as nmse_metric

    inputs = np.asarray(inputs, dtype=float).reshape(-1)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if inputs.shape[0] != targets.shape[0]:
        raise DynamicsError("inputs and targets must have equal length")
    if washout >= inputs.shape[0]:
        raise DynamicsError("washout leaves no training rows")
    esn = EchoStateNetwork(cfg)
    states = esn.run(inputs)
    design = np.column_stack([states, np.ones(states.shape[0])])
    weights = fit_linear(design[washout:], targets[washout:])
    predictions = weights.predict(design[washout:])
    return esn, weights, nmse_metric(predictions, targets[washout:])
