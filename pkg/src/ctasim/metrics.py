"""Post-processing of simulation traces: precision envelopes, convergence
time, and chattering measures."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plant import SimTrace


@dataclass(frozen=True)
class PrecisionReport:
    """Steady-window sup of |x_i| plus implied constants v_i = sup/h^p_i."""

    window: tuple[float, float]
    orders: tuple[float, float, float]
    sup_abs_x: tuple[float, float, float]
    v_constants: tuple[float, float, float]


@dataclass(frozen=True)
class ChatterReport:
    total_variation_u: float
    sign_flips_u_delta: int


def _window_indices(trace: SimTrace, window: tuple[float, float]) -> list[int]:
    t0, t1 = window
    # Row times are k*h, so boundary rows can miss the nominal window by an
    # ulp; use a grid-relative tolerance.
    tol = (trace.t[1] - trace.t[0]) * 1e-6 if trace.n >= 2 else 0.0
    idx = [i for i, t in enumerate(trace.t) if t0 - tol <= t <= t1 + tol]
    if not idx:
        raise ValueError(f"window {window} selects no trace records")
    return idx


def precision_envelope(
    trace: SimTrace,
    window: tuple[float, float],
    h: float,
    orders: tuple[float, float, float],
) -> PrecisionReport:
    """Exact maxima of |x_i| over the window, and v_i = sup|x_i| / h^p_i."""
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h!r}")
    idx = _window_indices(trace, window)
    sups = tuple(
        max(abs(col[i]) for i in idx) for col in (trace.x1, trace.x2, trace.x3)
    )
    v = tuple(s / h**p for s, p in zip(sups, orders))
    return PrecisionReport(window=window, orders=orders, sup_abs_x=sups, v_constants=v)


def convergence_time(trace: SimTrace, threshold: float) -> float:
    """Smallest t after which |z1| and |z2| both stay below the threshold.

    Returns math.inf if the final record still violates the threshold.
    """
    if not threshold > 0.0:
        raise ValueError(f"threshold must be positive, got {threshold!r}")
    last_bad = -1
    for i in range(trace.n):
        if abs(trace.z1[i]) >= threshold or abs(trace.z2[i]) >= threshold:
            last_bad = i
    if last_bad == trace.n - 1:
        return math.inf
    return trace.t[last_bad + 1]


def chatter_metrics(trace: SimTrace, window: tuple[float, float]) -> ChatterReport:
    """Total variation of u and sign changes of its increments over the window."""
    idx = _window_indices(trace, window)
    us = [trace.u[i] for i in idx]
    diffs = [us[i + 1] - us[i] for i in range(len(us) - 1)]
    tv = sum(abs(d) for d in diffs)
    flips = sum(1 for i in range(len(diffs) - 1) if diffs[i] * diffs[i + 1] < 0.0)
    return ChatterReport(total_variation_u=tv, sign_flips_u_delta=flips)
