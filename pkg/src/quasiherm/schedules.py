"""Time grids and time-dependent operator schedules.

A schedule is either CLOSED_FORM (analytic evaluator plus analytic time
derivative) or SAMPLED (uniform snapshots, piecewise-cubic Hermite
interpolation with finite-difference slopes). The derived omega schedule
wraps a metric schedule and serves omega, its inverse and its time
derivative, with a finite-difference fallback for the derivative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotPositiveDefinite, OutOfRange

_SPAN_SLACK = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.steps < 2:
            raise ValueError("need at least 2 steps")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps + 1)


class OperatorSchedule:
    """t -> A(t) on a fixed span; callable, with a .derivative method."""

    CLOSED_FORM = "closed_form"
    SAMPLED = "sampled"

    def __init__(self, kind, dim, span, value_fn, deriv_fn,
                 sample_times=None, snapshots=None, constant=None, label=""):
        self.kind = kind
        self.dim = dim
        self.span = (float(span[0]), float(span[1]))
        self._value = value_fn
        self._deriv = deriv_fn
        self.sample_times = sample_times
        self.snapshots = snapshots
        self.constant = constant  # set when the schedule is a fixed matrix
        self.label = label

    @classmethod
    def closed_form(cls, dim, span, value_fn, deriv_fn, label=""):
        return cls(cls.CLOSED_FORM, dim, span, value_fn, deriv_fn, label=label)

    @classmethod
    def constant_matrix(cls, matrix, span, label=""):
        m = linalg.as_matrix(matrix)
        zero = np.zeros_like(m)
        sched = cls(cls.CLOSED_FORM, m.shape[0], span,
                    lambda t: m, lambda t: zero, constant=m, label=label)
        return sched

    @classmethod
    def sampled(cls, times, snapshots):
        ts = np.asarray(times, dtype=float)
        if ts.ndim != 1 or ts.size < 4:
            raise ValueError("sampled schedules need at least 4 snapshot times")
        dt = np.diff(ts)
        if not (dt > 0).all():
            raise ValueError("snapshot times must be strictly increasing")
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise ValueError("snapshot times must be uniformly spaced")
        mats = np.stack([linalg.as_matrix(s) for s in snapshots])
        if mats.shape[0] != ts.size:
            raise ValueError("snapshot count must match snapshot times")
        dim = mats.shape[1]
        spacing = float(dt[0])
        slopes = np.empty_like(mats)
        slopes[1:-1] = (mats[2:] - mats[:-2]) / (2.0 * spacing)
        slopes[0] = (-3.0 * mats[0] + 4.0 * mats[1] - mats[2]) / (2.0 * spacing)
        slopes[-1] = (3.0 * mats[-1] - 4.0 * mats[-2] + mats[-3]) / (2.0 * spacing)

        def value_fn(t):
            j = min(int((t - ts[0]) / spacing), ts.size - 2)
            j = max(j, 0)
            s = (t - ts[j]) / spacing
            s2, s3 = s * s, s * s * s
            h00 = 2.0 * s3 - 3.0 * s2 + 1.0
            h10 = s3 - 2.0 * s2 + s
            h01 = -2.0 * s3 + 3.0 * s2
            h11 = s3 - s2
            return (h00 * mats[j] + h10 * spacing * slopes[j]
                    + h01 * mats[j + 1] + h11 * spacing * slopes[j + 1])

        sched = cls(cls.SAMPLED, dim, (ts[0], ts[-1]), value_fn, None,
                    sample_times=ts, snapshots=mats)

        def deriv_fn(t):
            return _fd_derivative(sched, t, spacing)

        sched._deriv = deriv_fn
        return sched

    def _check_span(self, t):
        lo, hi = self.span
        slack = _SPAN_SLACK * (hi - lo)
        if t < lo - slack or t > hi + slack:
            raise OutOfRange(f"t={t:g} outside schedule span [{lo:g}, {hi:g}]")

    def __call__(self, t) -> np.ndarray:
        self._check_span(t)
        return self._value(t)

    def derivative(self, t) -> np.ndarray:
        self._check_span(t)
        return self._deriv(t)


def _fd_derivative(eval_fn, t, step):
    """Central difference, falling back to second-order one-sided at span edges."""
    lo, hi = eval_fn.span
    if t - step >= lo and t + step <= hi:
        return (eval_fn(t + step) - eval_fn(t - step)) / (2.0 * step)
    if t - step < lo:
        return (-3.0 * eval_fn(t) + 4.0 * eval_fn(t + step) - eval_fn(t + 2.0 * step)) / (2.0 * step)
    return (3.0 * eval_fn(t) - 4.0 * eval_fn(t - step) + eval_fn(t - 2.0 * step)) / (2.0 * step)


class OmegaSchedule:
    """omega(t), omega(t)^-1 and d/dt omega(t) derived from a metric schedule.

    omega is the principal square root of theta(t) unless analytic forms
    are supplied. The derivative is analytic when available (and not
    suppressed), otherwise a central difference of omega with step fd_step.
    """

    def __init__(self, theta_schedule: OperatorSchedule, fd_step: float,
                 analytic=None, use_analytic_derivative=True,
                 eps_herm=linalg.EPS_HERM, eps_pos=linalg.EPS_POS,
                 cond_max=linalg.COND_MAX):
        self.theta = theta_schedule
        self.span = theta_schedule.span
        self.fd_step = float(fd_step)
        self._omega_fn = analytic[0] if analytic else None
        self._omega_dot_fn = analytic[1] if (analytic and use_analytic_derivative) else None
        self._omega_inv_fn = analytic[2] if (analytic and len(analytic) > 2) else None
        self.has_analytic_derivative = self._omega_dot_fn is not None
        self._eps_herm = eps_herm
        self._eps_pos = eps_pos
        self._cond_max = cond_max
        self._omega_cache: dict[float, np.ndarray] = {}
        self._inv_cache: dict[float, np.ndarray] = {}

    def omega(self, t) -> np.ndarray:
        got = self._omega_cache.get(t)
        if got is not None:
            return got
        if self._omega_fn is not None:
            w = np.asarray(self._omega_fn(t), dtype=complex)
        else:
            try:
                w = linalg.principal_sqrt(self.theta(t), self._eps_herm, self._eps_pos)
            except NotPositiveDefinite as e:
                raise NotPositiveDefinite(e.lambda_min, e.lambda_max, t=t) from None
        self._omega_cache[t] = w
        return w

    def omega_inv(self, t) -> np.ndarray:
        got = self._inv_cache.get(t)
        if got is not None:
            return got
        if self._omega_inv_fn is not None:
            wi = np.asarray(self._omega_inv_fn(t), dtype=complex)
        else:
            wi = linalg.inverse(self.omega(t), self._cond_max)
        self._inv_cache[t] = wi
        return wi

    def omega_dot(self, t) -> np.ndarray:
        if self._omega_dot_fn is not None:
            return np.asarray(self._omega_dot_fn(t), dtype=complex)
        return _fd_derivative(self._as_eval(), t, self.fd_step)

    def _as_eval(self):
        outer = self

        class _Eval:
            span = outer.span

            def __call__(self, t):
                return outer.omega(t)

        return _Eval()
