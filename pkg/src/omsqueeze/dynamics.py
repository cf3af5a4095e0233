"""Time integration of the covariance equation of motion.

Integrates sigma' = W sigma + sigma W^T + D with an adaptive embedded
Dormand-Prince 5(4) pair, records the covariance trace at every accepted
step, and detects relaxation to the steady state.  All times are in units
of 1/kappa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConvergenceError, DivergenceError, StiffnessError
from .matrices import covariance_to_json

MIN_STEP = 1e-14
DIVERGENCE_NORM = 1e150

# Dormand-Prince 5(4) tableau (autonomous right-hand side, so no stage
# times needed); the error row is b5 - b4.
_DP_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_ERR = (
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


def cm_derivative(w: np.ndarray, d: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Right-hand side W sigma + sigma W^T + D of the covariance ODE."""
    return w @ sigma + sigma @ w.T + d


@dataclass
class Trajectory:
    """Trace record of one covariance integration (times in 1/kappa)."""

    times: np.ndarray
    traces: np.ndarray
    snapshots: list[tuple[float, np.ndarray]] | None = None
    converged: bool = False
    t_converged: float | None = None

    def resample_log(
        self, count: int = 400, t_min: float = 1e-2
    ) -> tuple[np.ndarray, np.ndarray]:
        """Nearest-step samples on a log-spaced time grid (plot-friendly)."""
        t_last = self.times[-1]
        if t_last <= t_min:
            return self.times, self.traces
        grid = np.geomspace(t_min, t_last, count)
        idx = np.searchsorted(self.times, grid)
        idx = np.unique(np.clip(idx, 0, len(self.times) - 1))
        return self.times[idx], self.traces[idx]

    def to_csv(
        self, path, *, count: int = 400, t_min: float = 1e-2, full: bool = False
    ) -> None:
        if full:
            times, traces = self.times, self.traces
        else:
            times, traces = self.resample_log(count=count, t_min=t_min)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t_over_kappa,trace\n")
            for t, tr in zip(times, traces):
                fh.write(f"{t:.12g},{tr:.12g}\n")

    def snapshots_to_json(self) -> list[dict]:
        if not self.snapshots:
            return []
        return [
            {"t_over_kappa": float(t), "covariance": covariance_to_json(sigma)}
            for t, sigma in self.snapshots
        ]


def _accepted_steps(
    w: np.ndarray,
    d: np.ndarray,
    sigma0: np.ndarray,
    rel_tol: float,
    abs_tol: float,
    targets: list[float],
) -> Iterator[tuple[float, np.ndarray, float]]:
    """Yield (t, sigma, ||sigma'||_F) for t=0 and every accepted step.

    `targets` must be sorted ascending; the stepper lands on each exactly.
    Iteration ends after the last target is reached.
    """
    y = (sigma0 + sigma0.T) / 2.0
    t = 0.0
    f_cur = cm_derivative(w, d, y)
    yield t, y, float(np.linalg.norm(f_cur))

    pending = [x for x in targets if x > 0.0]
    if not pending:
        return
    h = 0.01 * (np.linalg.norm(y) + abs_tol) / (np.linalg.norm(f_cur) + 1e-300)
    h = min(max(h, MIN_STEP * 10), pending[-1] / 10, 1.0)

    k = [None] * 7
    rejected = False
    while pending:
        target = pending[0]
        clamped = target - t < h
        h_try = min(h, target - t)
        if h_try < MIN_STEP:
            raise StiffnessError(
                f"step size underflow ({h_try:.3e} < {MIN_STEP:.0e}) at t={t:.6g}"
            )

        k[0] = f_cur
        for i, row in enumerate(_DP_A):
            yi = y + h_try * sum(c * k[j] for j, c in enumerate(row) if c != 0.0)
            k[i + 1] = cm_derivative(w, d, yi)
        y_new = yi  # last stage argument is the 5th-order solution
        err_mat = h_try * sum(c * k[j] for j, c in enumerate(_DP_ERR) if c != 0.0)

        if not np.isfinite(y_new).all() or np.linalg.norm(y_new) > DIVERGENCE_NORM:
            raise DivergenceError(
                f"covariance diverged at t={t:.6g} (unstable drift integrated too long)"
            )

        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_mat / scale) ** 2)))
        if not np.isfinite(err):
            h = h_try * 0.2
            rejected = True
            continue

        if err <= 1.0:
            t = target if (target - t - h_try) < 1e-12 * max(1.0, target) else t + h_try
            y = (y_new + y_new.T) / 2.0
            f_cur = cm_derivative(w, d, y)
            yield t, y, float(np.linalg.norm(f_cur))
            while pending and t >= pending[0] - 1e-12 * max(1.0, pending[0]):
                pending.pop(0)
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            if rejected:
                factor = min(factor, 1.0)
            if not (clamped and factor >= 1.0):
                h = h_try * factor
            rejected = False
        else:
            h = h_try * max(0.2, 0.9 * err ** -0.2)
            rejected = True


def integrate(
    w: np.ndarray,
    d: np.ndarray,
    sigma0: np.ndarray,
    t_end: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    snapshot_times: list[float] | None = None,
) -> Trajectory:
    """Integrate the covariance ODE to t_end, recording Tr sigma per step."""
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be > 0")
    w = np.asarray(w, dtype=float)
    d = np.asarray(d, dtype=float)
    sigma0 = np.asarray(sigma0, dtype=float)

    wanted = sorted(set(snapshot_times or []))
    if any(ts < 0 or ts > t_end for ts in wanted):
        raise ValueError("snapshot times must lie in [0, t_end]")
    targets = sorted(set(wanted) | {t_end})

    times, traces = [], []
    snapshots: list[tuple[float, np.ndarray]] = []
    remaining = list(wanted)
    for t, sigma, _ in _accepted_steps(w, d, sigma0, rel_tol, abs_tol, targets):
        times.append(t)
        traces.append(float(np.trace(sigma)))
        while remaining and t >= remaining[0] - 1e-12 * max(1.0, remaining[0]):
            snapshots.append((t, sigma.copy()))
            remaining.pop(0)
    return Trajectory(
        times=np.asarray(times),
        traces=np.asarray(traces),
        snapshots=snapshots if wanted else None,
    )


def evolve_to_steady(
    w: np.ndarray,
    d: np.ndarray,
    sigma0: np.ndarray,
    window: float | None = None,
    eps: float = 1e-8,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    max_time: float | None = None,
) -> tuple[np.ndarray, Trajectory]:
    """Relax the covariance until ||sigma'||_F stays below eps ||D||_F.

    The drop below threshold must be sustained over a trailing window
    (default ten relaxation times, from the spectral abscissa).  Unstable
    drifts are not rejected up front: integration then grows exponentially
    and raises DivergenceError, which is itself the verdict.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    w = np.asarray(w, dtype=float)
    d = np.asarray(d, dtype=float)
    sigma0 = np.asarray(sigma0, dtype=float)

    abscissa = float(np.max(np.linalg.eigvals(w).real))
    rate = max(abs(abscissa), 1e-12)
    if window is None:
        window = 10.0 / rate
    elif window <= 0:
        raise ValueError("window must be > 0")
    if max_time is None:
        max_time = 1e4 / rate

    threshold = eps * float(np.linalg.norm(d))
    times, traces = [], []
    streak_start: float | None = None
    final_sigma: np.ndarray | None = None
    converged = False
    t_converged = None

    # Chunked targets keep steps aligned with the window bookkeeping.
    chunk = window / 4.0
    targets = list(np.arange(chunk, max_time + chunk / 2, chunk))
    for t, sigma, deriv_norm in _accepted_steps(w, d, sigma0, rel_tol, abs_tol, targets):
        times.append(t)
        traces.append(float(np.trace(sigma)))
        final_sigma = sigma
        if deriv_norm < threshold:
            if streak_start is None:
                streak_start = t
            elif t - streak_start >= window:
                converged = True
                t_converged = t
                break
        else:
            streak_start = None

    trajectory = Trajectory(
        times=np.asarray(times),
        traces=np.asarray(traces),
        converged=converged,
        t_converged=t_converged,
    )
    if not converged:
        raise ConvergenceError(
            f"no steady state within t={max_time:.3g}/kappa "
            f"(threshold {threshold:.3e}, window {window:.3g})"
        )
    return final_sigma, trajectory
