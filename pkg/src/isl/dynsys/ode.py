"""Attracting invariant sets: the planar limit cycle and the Lorenz system."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from numba import njit


class DivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LimitCycle:
    """``dr/dt = r (1 - r^2)``, ``dtheta/dt = 1`` in polar state ``(r, theta)``.

    Every trajectory with ``r > 0`` spirals onto the circle ``r = 1``.
    """

    columns = ("r", "theta")
    default_step = 1e-2
    kind = 0

    @property
    def params(self):
        return np.zeros(3)

    def field(self, x):
        r = x[0]
        return np.array([r * (1.0 - r * r), 1.0])


@dataclass(frozen=True)
class Lorenz:
    sigma: float = 10.0
    r: float = 28.0
    b: float = 8.0 / 3.0

    columns = ("X", "Y", "Z")
    default_step = 1e-3
    kind = 1

    @property
    def params(self):
        return np.array([self.sigma, self.r, self.b])

    def __post_init__(self):
        if min(self.sigma, self.r, self.b) <= 0:
            raise ValueError("Lorenz parameters must be strictly positive")

    def field(self, x):
        X, Y, Z = x
        return np.array([
            self.sigma * (Y - X),
            -X * Z + self.r * X - Y,
            X * Y - self.b * Z,
        ])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States at ``t = t0 + step, ..., t0 + n*step``; ``initial`` is the state at ``t0``."""

    times: np.ndarray
    states: np.ndarray
    step: float
    initial: np.ndarray
    columns: tuple = ()

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def after(self, t_discard: float) -> "Trajectory":
        drop = int(round(t_discard / self.step))
        init = self.states[drop - 1] if drop > 0 else self.initial
        return Trajectory(self.times[drop:], self.states[drop:], self.step, init, self.columns)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t",) + tuple(self.columns))
        for t, s in zip(self.times, self.states):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in s])
        return buf.getvalue()


@njit(cache=True)
def _field(kind, x, p):
    if kind == 0:
        return np.array([x[0] * (1.0 - x[0] * x[0]), 1.0])
    return np.array([
        p[0] * (x[1] - x[0]),
        -x[0] * x[2] + p[1] * x[0] - x[1],
        x[0] * x[1] - p[2] * x[2],
    ])


@njit(cache=True)
def _rk4_run(kind, x0, h, n, p):
    # returns (states, index of first non-finite step or -1)
    out = np.empty((n, x0.size))
    x = x0.copy()
    for i in range(n):
        k1 = _field(kind, x, p)
        k2 = _field(kind, x + 0.5 * h * k1, p)
        k3 = _field(kind, x + 0.5 * h * k2, p)
        k4 = _field(kind, x + h * k3, p)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        for v in x:
            if not np.isfinite(v):
                return out[:i], i
        out[i] = x
    return out, -1


def integrate(sys, x0, step: float | None = None, horizon: float = 10.0, t0: float = 0.0) -> Trajectory:
    """Fixed-step classical RK4 from ``t0`` to ``t0 + horizon``."""
    step = sys.default_step if step is None else float(step)
    if step <= 0 or horizon <= 0:
        raise ValueError("step and horizon must be positive")
    n = int(round(horizon / step))
    x = np.array(x0, dtype=float)
    if x.size != len(sys.columns):
        raise ValueError(f"state must have {len(sys.columns)} components")
    states, bad = _rk4_run(sys.kind, x, step, n, sys.params)
    if bad >= 0:
        raise DivergenceError(f"non-finite state at step {bad + 1} (t={t0 + (bad + 1) * step})")
    times = t0 + step * np.arange(1, n + 1)
    return Trajectory(times, states, step, x, tuple(sys.columns))


def polar_to_cartesian(states: np.ndarray) -> np.ndarray:
    r, theta = states[:, 0], states[:, 1]
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def lorenz_attractor_sample(horizon: float = 200.0, step: float = 1e-3, transient: float = 10.0,
                            x0=(1.0, 1.0, 1.0), params: Lorenz | None = None) -> Trajectory:
    """Trajectory on the Lorenz attractor with the first ``transient`` time units dropped."""
    traj = integrate(params or Lorenz(), x0, step, horizon + transient)
    return traj.after(transient)
