"""Pointwise reaction ODE dR/dt = Q(R) and cone-invariance experiments.

Q is the quadratic reaction term of the curvature evolution equation.  For
the homogeneous model tensors the full evolution reduces to this ODE
because the curvature is parallel; for generic inputs the ODE is studied
as a dynamical system in its own right, not as an approximation of the
PDE.

The frame-combination identity checked by ``decomposition_residual`` is
the normative anchor for the Q convention: it pins the overall scale and
sign used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conditions import MinimizeOpts, check_pic2, minimize_frame
from .frames import Frame, complete_basis
from .tensors import CurvatureTensor, SYM_TOL_DEFAULT, pad_euclidean, project_curvature, scalar_curvature

__all__ = [
    "FlowState",
    "TraceRow",
    "FlowTrace",
    "FlowOpts",
    "FlowBlowupError",
    "ConeMarginResult",
    "quadratic_reaction",
    "decomposition_sums",
    "decomposition_residual",
    "step",
    "integrate",
    "cone_margin_experiment",
    "sphere_kappa",
]

TRACE_COLUMNS = ("t", "kmin", "kmax", "min_iso", "min_pic2", "scalar", "dt", "err_est")


class FlowBlowupError(RuntimeError):
    """Raised when the integrated tensor exceeds the blow-up cap."""

    def __init__(self, t: float, size: float, cap: float):
        super().__init__(f"blow-up at t = {t:.6g}: max |component| = {size:.3e} exceeds cap {cap:.3e}")
        self.t = t
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class FlowState:
    """A point on a reaction trajectory."""

    t: float
    r: CurvatureTensor

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError("time must be finite")


@dataclass(frozen=True)
class TraceRow:
    """One diagnostic row: extremal curvatures, minimized functionals,
    scalar curvature, and the step size / error estimate that produced it."""

    t: float
    kmin: float
    kmax: float
    min_iso: float
    min_pic2: float
    scalar: float
    dt: float
    err_est: float

    def astuple(self) -> tuple[float, ...]:
        return (self.t, self.kmin, self.kmax, self.min_iso, self.min_pic2, self.scalar, self.dt, self.err_est)


@dataclass(frozen=True)
class FlowTrace:
    """Diagnostic rows of a trajectory, strictly increasing in time.

    ``final_state`` carries the end-of-integration tensor when the trace
    was produced by ``integrate`` (it is None for traces read from disk).
    """

    rows: tuple[TraceRow, ...]
    final_state: FlowState | None = None

    def __post_init__(self):
        if not self.rows:
            raise ValueError("trace must have at least one row")
        ts = [row.t for row in self.rows]
        if any(not np.all(np.isfinite(row.astuple())) for row in self.rows):
            raise ValueError("trace entries must be finite")
        if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
            raise ValueError("trace times must be strictly increasing")


@dataclass(frozen=True)
class FlowOpts:
    """Integrator options.

    ``ode_tol`` drives per-step Richardson halving; None disables it and
    runs plain fixed-step RK4 (used to measure the method order).
    ``normalize`` rescales after each step to hold scalar curvature at its
    initial value.  ``stride`` controls how many accepted steps separate
    diagnostic rows; the initial and final rows are always present.
    """

    dt: float = 0.01
    ode_tol: float | None = 1e-9
    normalize: bool = False
    blowup_cap: float = 1e12
    stride: int = 1
    minimize: MinimizeOpts = field(default=MinimizeOpts(restarts=8))
    max_halvings: int = 40

    def __post_init__(self):
        if self.dt <= 0 or not np.isfinite(self.dt):
            raise ValueError("dt must be positive and finite")
        if self.ode_tol is not None and self.ode_tol <= 0:
            raise ValueError("ode_tol must be positive or None")
        if self.blowup_cap <= 0:
            raise ValueError("blowup_cap must be positive")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")


# ---------------------------------------------------------------------------
# Reaction term


def _reaction_raw(r4: np.ndarray) -> np.ndarray:
    """Q_{ijkl} = sum_pq [ R_ijpq R_klpq + 2 (R_ipkq R_jplq - R_iplq R_jpkq) ]."""
    sq = np.tensordot(r4, r4, axes=([2, 3], [2, 3]))
    rt = np.ascontiguousarray(r4.transpose(0, 2, 1, 3))
    cross = np.tensordot(rt, rt, axes=([2, 3], [2, 3]))
    term2 = cross.transpose(0, 2, 1, 3)
    term3 = cross.transpose(0, 2, 3, 1)
    return sq + 2.0 * (term2 - term3)


def _wrap(raw: np.ndarray, n: int) -> CurvatureTensor:
    """Project and wrap, with the symmetry tolerance scaled to the data."""
    tol = max(SYM_TOL_DEFAULT, 1e-12 * float(np.abs(raw).max(initial=0.0)))
    return project_curvature(raw, n, sym_tol=tol)


def quadratic_reaction(r: CurvatureTensor) -> CurvatureTensor:
    """The quadratic reaction Q(R) of the curvature evolution equation.

    Maps the algebraic symmetry class to itself; on the constant-curvature
    ray Q(sphere(n, kappa)) = sphere(n, 2 (n-1) kappa^2).
    """
    return _wrap(_reaction_raw(r.array), r.n)


# ---------------------------------------------------------------------------
# Frame decomposition of the reaction


def _frame_components(r: CurvatureTensor, frame: Frame) -> np.ndarray:
    """Curvature components in a completed orthonormal basis led by the frame."""
    b = complete_basis(frame)
    t = r.array
    for _ in range(4):
        t = np.tensordot(t, b, axes=([0], [1]))
    return t


def _summand_matrix(s: np.ndarray) -> np.ndarray:
    """The (p, q) summand shared by the three block sums, as an n x n array."""
    a = s[0, :, 0, :] + s[1, :, 1, :]
    b = s[2, :, 2, :] + s[3, :, 3, :]
    c = s[0, 1, :, :] * s[2, 3, :, :]
    d = (s[0, :, 2, :] + s[1, :, 3, :]) * (s[2, :, 0, :] + s[3, :, 1, :])
    e = (s[0, :, 3, :] - s[1, :, 2, :]) * (s[3, :, 0, :] - s[2, :, 1, :])
    return a * b - c - d - e


def decomposition_sums(r: CurvatureTensor, frame: Frame) -> tuple[float, float, float]:
    """The three block sums of the reaction decomposition.

    The common summand is evaluated on curvature components in a completed
    orthonormal basis whose first four vectors are the frame; the blocks
    split the (p, q) index range at 4: both small, small-large, both large.
    For n = 4 the last two are empty.
    """
    frame.require_rows(4)
    if frame.n != r.n:
        raise ValueError(f"dimension mismatch: tensor n={r.n}, frame n={frame.n}")
    t = _summand_matrix(_frame_components(r, frame))
    i1 = float(t[:4, :4].sum())
    i2 = float(t[:4, 4:].sum())
    i3 = float(t[4:, 4:].sum())
    return i1, i2, i3


def decomposition_residual(r: CurvatureTensor, frame: Frame) -> float:
    """Residual of the reaction decomposition identity.

    The frame combination of Q(R) that defines the isotropic curvature
    equals two square sums plus 2 I1 + 4 I2 + 2 I3; the identity pins the
    Q convention, so the residual is round-off (< 1e-10) when the
    convention is right.
    """
    from .conditions import isotropic_curvature

    frame.require_rows(4)
    if frame.n != r.n:
        raise ValueError(f"dimension mismatch: tensor n={r.n}, frame n={frame.n}")
    lhs = isotropic_curvature(quadratic_reaction(r), frame)
    s = _frame_components(r, frame)
    sq13 = float(((s[0, 2, :, :] - s[1, 3, :, :]) ** 2).sum())
    sq14 = float(((s[0, 3, :, :] + s[1, 2, :, :]) ** 2).sum())
    t = _summand_matrix(s)
    i1 = float(t[:4, :4].sum())
    i2 = float(t[:4, 4:].sum())
    i3 = float(t[4:, 4:].sum())
    rhs = sq13 + sq14 + 2.0 * i1 + 4.0 * i2 + 2.0 * i3
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Integration


def _rk4(y: np.ndarray, h: float) -> np.ndarray:
    # Overflow near a blow-up yields non-finite entries; callers test for
    # them and either halve the step or raise, so the warnings are noise.
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = _reaction_raw(y)
        k2 = _reaction_raw(y + 0.5 * h * k1)
        k3 = _reaction_raw(y + 0.5 * h * k2)
        k4 = _reaction_raw(y + h * k3)
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(state: FlowState, dt: float) -> FlowState:
    """One classical fourth-order Runge-Kutta step of dR/dt = Q(R)."""
    if dt <= 0 or not np.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    y1 = _rk4(state.r.array, dt)
    if not np.all(np.isfinite(y1)):
        raise FlowBlowupError(state.t + dt, float("inf"), float("inf"))
    return FlowState(t=state.t + dt, r=_wrap(y1, state.r.n))


class _Diagnostics:
    """Warm-started per-row minimizations for trace diagnostics."""

    def __init__(self, opts: MinimizeOpts):
        self.opts = opts
        self.warm: dict[str, Frame] = {}

    def _run(self, key: str, r: CurvatureTensor, objective: str, negate: bool = False) -> float:
        warm = self.warm.get(key)
        init = (warm,) if warm is not None and warm.n == r.n else ()
        rep = minimize_frame(r, objective, self.opts, negate=negate, init_frames=init)
        self.warm[key] = rep.argmin_frame
        return rep.min_value

    def row(self, t: float, r: CurvatureTensor, dt: float, err: float) -> TraceRow:
        kmin = self._run("kmin", r, "sectional")
        kmax = -self._run("kmax", r, "sectional", negate=True)
        min_iso = self._run("iso", r, "isotropic")
        min_pic2 = self._run("pic2", pad_euclidean(r, 2), "isotropic")
        return TraceRow(
            t=t, kmin=kmin, kmax=kmax, min_iso=min_iso, min_pic2=min_pic2,
            scalar=scalar_curvature(r), dt=dt, err_est=err,
        )


def integrate(r0: CurvatureTensor, t_end: float, opts: FlowOpts | None = None) -> FlowTrace:
    """Integrate dR/dt = Q(R) from 0 to t_end with diagnostics.

    Classical RK4 with per-step Richardson halving: the step is compared
    against two half steps and halved until the error estimate
    max |full - halved| / 15 drops below ``opts.ode_tol``; the halved
    result is the one accepted.  With ``ode_tol=None`` the full fixed-step
    result is used and the estimate is only recorded.  The blow-up guard
    aborts with FlowBlowupError when components pass ``opts.blowup_cap``.
    """
    opts = opts or FlowOpts()
    if t_end <= 0 or not np.isfinite(t_end):
        raise ValueError("t_end must be positive and finite")
    n = r0.n
    y = r0.array.copy()
    scalar0 = scalar_curvature(r0)
    if opts.normalize and abs(scalar0) < 1e-12 * max(1.0, float(np.abs(y).max())):
        raise ValueError("cannot normalize: initial scalar curvature vanishes")
    diag = _Diagnostics(opts.minimize)
    rows = [diag.row(0.0, r0, 0.0, 0.0)]
    t = 0.0
    steps = 0
    err_since_row = 0.0
    while t < t_end - 1e-15:
        h = min(opts.dt, t_end - t)
        halvings = 0
        while True:
            full = _rk4(y, h)
            mid = _rk4(y, 0.5 * h)
            halved = _rk4(mid, 0.5 * h)
            err = float(np.abs(full - halved).max()) / 15.0
            if not np.isfinite(err):
                err = float("inf")
            if opts.ode_tol is None or err <= opts.ode_tol:
                break
            halvings += 1
            if halvings > opts.max_halvings:
                raise RuntimeError(f"step size underflow at t = {t:.6g}: error estimate {err:.3e}")
            h *= 0.5
        y = full if opts.ode_tol is None else halved
        if not np.all(np.isfinite(y)):
            raise FlowBlowupError(t + h, float("inf"), opts.blowup_cap)
        if opts.normalize:
            s_new = scalar_curvature(_wrap(y, n))
            if abs(s_new) < 1e-300 or (s_new > 0) != (scalar0 > 0):
                raise ValueError(f"normalization failed at t = {t + h:.6g}: scalar curvature degenerated")
            y = y * (scalar0 / s_new)
        size = float(np.abs(y).max())
        if size > opts.blowup_cap:
            raise FlowBlowupError(t + h, size, opts.blowup_cap)
        t += h
        steps += 1
        err_since_row = max(err_since_row, err)
        if steps % opts.stride == 0 or t >= t_end - 1e-15:
            r_now = _wrap(y, n)
            rows.append(diag.row(t, r_now, h, err_since_row))
            err_since_row = 0.0
    final = FlowState(t=t, r=_wrap(y, n))
    return FlowTrace(rows=tuple(rows), final_state=final)


@dataclass(frozen=True)
class ConeMarginResult:
    """Trace plus verdict of a cone-margin experiment."""

    trace: FlowTrace
    verdict: bool
    worst_pic2: float


def cone_margin_experiment(r0: CurvatureTensor, t_end: float, opts: FlowOpts | None = None) -> ConeMarginResult:
    """Track the padded-nonnegativity margin along a trajectory.

    Requires the initial tensor to pass check_pic2; the verdict is whether
    min_pic2 stays at or above the negative decision margin on every
    diagnostic row.
    """
    opts = opts or FlowOpts()
    ok0, _ = check_pic2(r0, opts.minimize)
    if not ok0:
        raise ValueError("initial tensor fails the padded nonnegativity check")
    trace = integrate(r0, t_end, opts)
    worst = min(row.min_pic2 for row in trace.rows)
    return ConeMarginResult(trace=trace, verdict=worst >= -opts.minimize.margin, worst_pic2=worst)


def sphere_kappa(n: int, kappa0: float, t: float) -> float:
    """Closed-form curvature of the constant-curvature ray.

    Solves kappa' = 2 (n-1) kappa^2, the scalar reduction of the reaction
    ODE on sphere(n, kappa)."""
    denom = 1.0 - 2.0 * (n - 1) * kappa0 * t
    if denom <= 0:
        raise ValueError(f"closed-form solution blows up before t = {t}")
    return kappa0 / denom
