import numpy as np
import pytest

from curvlab.conditions import MinimizeOpts, isotropic_curvature
from curvlab.flow import (
    FlowBlowupError,
    FlowOpts,
    FlowState,
    FlowTrace,
    TraceRow,
    cone_margin_experiment,
    decomposition_residual,
    decomposition_sums,
    integrate,
    quadratic_reaction,
    sphere_kappa,
    step,
)
from curvlab.frames import complete_basis, random_frame
from curvlab.tensors import (
    CurvatureTensor,
    product,
    project_curvature,
    random_tensor,
    sphere,
)

LIGHT = MinimizeOpts(restarts=2, seed=0)


def _zero(n):
    return CurvatureTensor(n=n, comps=np.zeros(n**4))


def test_reaction_zero_and_sphere_regression():
    q = quadratic_reaction(_zero(4))
    assert q.max_abs() == 0.0
    # frozen regression: Q(sphere(n, kappa)) = sphere(n, 2 (n-1) kappa^2)
    for n, kappa in ((4, 1.0), (5, 0.5), (6, -1.0)):
        q = quadratic_reaction(sphere(n, kappa))
        expect = sphere(n, 2.0 * (n - 1) * kappa**2)
        assert np.max(np.abs(q.comps - expect.comps)) < 1e-12
    q4 = quadratic_reaction(sphere(4, 1.0))
    assert q4.array[0, 1, 0, 1] == pytest.approx(6.0, abs=1e-13)  # c(4) = 6


def test_reaction_preserves_symmetry_class():
    for trial in range(100):
        n = 4 + trial % 5
        r = random_tensor(trial, n)
        q = quadratic_reaction(r)
        again = project_curvature(q.array, n, sym_tol=q.sym_tol)
        assert np.max(np.abs(again.comps - q.comps)) < 1e-10


def _sums_oracle(r, frame):
    # Naive translation of the three displayed block sums: an einsum change
    # of basis, then plain Python loops over (p, q).
    b = complete_basis(frame)
    n = r.n
    s = np.einsum("ijkl,ai,bj,ck,dl->abcd", r.array, b, b, b, b)

    def summand(p, q):
        return (
            (s[0, p, 0, q] + s[1, p, 1, q]) * (s[2, p, 2, q] + s[3, p, 3, q])
            - s[0, 1, p, q] * s[2, 3, p, q]
            - (s[0, p, 2, q] + s[1, p, 3, q]) * (s[2, p, 0, q] + s[3, p, 1, q])
            - (s[0, p, 3, q] - s[1, p, 2, q]) * (s[3, p, 0, q] - s[2, p, 1, q])
        )

    i1 = sum(summand(p, q) for p in range(4) for q in range(4))
    i2 = sum(summand(p, q) for p in range(4) for q in range(4, n))
    i3 = sum(summand(p, q) for p in range(4, n) for q in range(4, n))
    return i1, i2, i3


def test_decomposition_sums_against_loop_oracle():
    for seed in range(5):
        r = random_tensor(seed, 6)
        f = random_frame(seed, 6)
        got = decomposition_sums(r, f)
        expect = _sums_oracle(r, f)
        for g, e in zip(got, expect):
            assert abs(g - e) < 1e-12


def test_decomposition_sums_edge_cases():
    f = random_frame(0, 4)
    i1, i2, i3 = decomposition_sums(sphere(4, 1.0), f)
    assert i2 == 0.0 and i3 == 0.0  # empty index ranges at n = 4
    assert i1 == pytest.approx(8.0, abs=1e-12)
    assert decomposition_sums(_zero(5), random_frame(0, 5)) == (0.0, 0.0, 0.0)


def test_decomposition_identity_battery():
    worst = 0.0
    for i in range(60):
        n = 4 + i % 5
        r = random_tensor([i, 4], n)
        f = random_frame([i, 5], n)
        worst = max(worst, decomposition_residual(r, f))
    assert worst < 1e-10


def test_decomposition_identity_sphere():
    f = random_frame(3, 4)
    res = decomposition_residual(sphere(4, 1.0), f)
    assert res < 1e-12
    # both sides strictly positive: the frame combination of Q is 4 * 6
    val = isotropic_curvature(quadratic_reaction(sphere(4, 1.0)), f)
    assert val == pytest.approx(24.0, abs=1e-11)
    assert decomposition_residual(_zero(4), f) == 0.0


def test_step_advances_sphere():
    s0 = FlowState(t=0.0, r=sphere(4, 1.0))
    s1 = step(s0, 0.001)
    assert s1.t == pytest.approx(0.001)
    k = s1.r.array[0, 1, 0, 1]
    assert k == pytest.approx(sphere_kappa(4, 1.0, 0.001), abs=1e-12)
    with pytest.raises(ValueError):
        step(s0, 0.0)


def test_integrate_sphere_matches_closed_form():
    opts = FlowOpts(dt=0.01, ode_tol=1e-9, stride=10**9, minimize=LIGHT)
    trace = integrate(sphere(4, 1.0), 0.05, opts)
    k = trace.final_state.r.array[0, 1, 0, 1]
    assert abs(k - sphere_kappa(4, 1.0, 0.05)) < 1e-8
    assert trace.rows[0].t == 0.0
    assert trace.rows[-1].t == pytest.approx(0.05)


def test_integrator_order_is_four():
    errs = []
    for dt in (0.02, 0.01):
        opts = FlowOpts(dt=dt, ode_tol=None, stride=10**9, minimize=MinimizeOpts(restarts=1, seed=0))
        trace = integrate(sphere(4, 1.0), 0.08, opts)
        k = trace.final_state.r.array[0, 1, 0, 1]
        errs.append(abs(k - sphere_kappa(4, 1.0, 0.08)))
    order = np.log2(errs[0] / errs[1])
    assert 3.7 <= order <= 4.3


def test_constant_curvature_ray_invariant():
    opts = FlowOpts(dt=0.01, ode_tol=1e-9, stride=10**9, minimize=LIGHT)
    trace = integrate(sphere(5, 0.8), 0.05, opts)
    r_end = trace.final_state.r
    kappa_hat = r_end.array[0, 1, 0, 1]
    drift = np.max(np.abs(r_end.comps - sphere(5, kappa_hat).comps))
    assert drift < 1e-9


def test_normalized_sphere_is_fixed():
    opts = FlowOpts(dt=0.01, normalize=True, stride=2, minimize=LIGHT)
    trace = integrate(sphere(4, 1.0), 0.06, opts)
    assert np.max(np.abs(trace.final_state.r.comps - sphere(4, 1.0).comps)) < 1e-9
    for row in trace.rows:
        assert row.kmin == pytest.approx(1.0, abs=1e-9)
        assert row.kmax == pytest.approx(1.0, abs=1e-9)
        assert row.min_iso == pytest.approx(4.0, abs=1e-9)
        assert row.scalar == pytest.approx(12.0, abs=1e-9)


def test_normalize_rejects_scalar_flat():
    with pytest.raises(ValueError, match="normalize"):
        integrate(_zero(4), 0.01, FlowOpts(dt=0.01, normalize=True, minimize=LIGHT))


def test_zero_is_fixed_point():
    opts = FlowOpts(dt=0.01, stride=10**9, minimize=LIGHT)
    trace = integrate(_zero(4), 0.03, opts)
    assert trace.final_state.r.max_abs() == 0.0
    assert all(row.min_iso == 0.0 for row in trace.rows)


def test_blowup_guard():
    opts = FlowOpts(dt=0.02, ode_tol=None, blowup_cap=1e3, stride=10**9, minimize=MinimizeOpts(restarts=1, seed=0))
    with pytest.raises(FlowBlowupError) as err:
        integrate(sphere(4, 1.0), 0.5, opts)
    assert err.value.t < 0.5


def test_step_halving_underflow():
    opts = FlowOpts(dt=0.05, ode_tol=1e-30, max_halvings=3, stride=10**9, minimize=MinimizeOpts(restarts=1, seed=0))
    with pytest.raises(RuntimeError, match="underflow"):
        integrate(sphere(4, 1.0), 0.5, opts)


def test_trace_validation():
    row = TraceRow(t=0.0, kmin=1.0, kmax=1.0, min_iso=4.0, min_pic2=0.0, scalar=12.0, dt=0.0, err_est=0.0)
    later = TraceRow(t=-1.0, kmin=1.0, kmax=1.0, min_iso=4.0, min_pic2=0.0, scalar=12.0, dt=0.0, err_est=0.0)
    with pytest.raises(ValueError, match="increasing"):
        FlowTrace(rows=(row, later))
    with pytest.raises(ValueError, match="at least one"):
        FlowTrace(rows=())
    bad = TraceRow(t=1.0, kmin=np.nan, kmax=1.0, min_iso=4.0, min_pic2=0.0, scalar=12.0, dt=0.0, err_est=0.0)
    with pytest.raises(ValueError, match="finite"):
        FlowTrace(rows=(row, bad))


def test_cone_margin_experiment():
    opts = FlowOpts(dt=0.01, stride=2, minimize=MinimizeOpts(restarts=4, seed=0))
    result = cone_margin_experiment(product(sphere(2, 1.0), sphere(2, 1.0)), 0.04, opts)
    assert result.verdict
    assert result.worst_pic2 >= -1e-7
    # the explicit zero frame keeps u essentially zero along the ray
    assert all(abs(row.min_iso) < 1e-8 for row in result.trace.rows)

    with pytest.raises(ValueError, match="fails the padded"):
        cone_margin_experiment(sphere(4, -1.0), 0.01, opts)


def test_sphere_kappa_pole():
    with pytest.raises(ValueError, match="blows up"):
        sphere_kappa(4, 1.0, 1.0)
    assert sphere_kappa(4, 1.0, 0.0) == 1.0


def test_flow_opts_validation():
    with pytest.raises(ValueError):
        FlowOpts(dt=0.0)
    with pytest.raises(ValueError):
        FlowOpts(ode_tol=-1.0)
    with pytest.raises(ValueError):
        FlowOpts(stride=0)
    with pytest.raises(ValueError):
        integrate(sphere(4, 1.0), -1.0, FlowOpts(minimize=LIGHT))
