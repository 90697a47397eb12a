import numpy as np
import pytest

from curvlab.conditions import Weights
from curvlab.frames import (
    Frame,
    complete_basis,
    cyclic_frames,
    lift_frame,
    orthonormalize,
    random_block_rotation,
    random_frame,
    random_unitary,
    unitary_action,
)
from curvlab.tensors import standard_complex_structure


def test_frame_validation():
    v = np.eye(4)
    f = Frame(n=4, vectors=v)
    assert f.k == 4
    assert f.gram_residual() < 1e-15
    with pytest.raises(ValueError, match="orthonormal"):
        Frame(n=4, vectors=np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]]))
    with pytest.raises(ValueError):
        Frame(n=4, vectors=np.ones((2, 3)))
    with pytest.raises(ValueError, match="finite"):
        Frame(n=4, vectors=np.full((2, 4), np.nan))


def test_frame_immutable():
    f = random_frame(0, 5)
    with pytest.raises(ValueError):
        f.vectors[0, 0] = 2.0


def test_orthonormalize_fixed_points():
    e = np.eye(6)[:4]
    out = orthonormalize(e)
    assert np.max(np.abs(out.vectors - e)) < 1e-14

    m = np.array([np.eye(4)[0], np.eye(4)[0] + np.eye(4)[1], np.eye(4)[2], np.eye(4)[3]])
    out = orthonormalize(m)
    assert np.max(np.abs(out.vectors - np.eye(4))) < 1e-14


def test_orthonormalize_random_and_rank():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = rng.standard_normal((4, 6))
        assert orthonormalize(m).gram_residual() < 1e-12
    with pytest.raises(ValueError, match="rank"):
        rows = rng.standard_normal((3, 5))
        orthonormalize(np.vstack([rows, rows[0] + rows[1]]))


def test_random_frame_deterministic():
    a = random_frame(3, 6)
    b = random_frame(3, 6)
    c = random_frame(4, 6)
    assert np.array_equal(a.vectors, b.vectors)
    assert not np.array_equal(a.vectors, c.vectors)
    assert a.gram_residual() < 1e-12
    assert random_frame(0, 5, k=2).k == 2


def test_lift_frame_formulas():
    f = random_frame(1, 5)
    lifted = lift_frame(f, Weights(1.0, 1.0))
    expect = np.zeros((4, 7))
    expect[:, :5] = f.vectors
    assert np.max(np.abs(lifted.vectors - expect)) < 1e-15

    lifted = lift_frame(f, Weights(0.0, 1.0))
    e4 = lifted.vectors[3]
    assert abs(e4[5] - 1.0) < 1e-15
    assert np.max(np.abs(e4[:5])) < 1e-15 and abs(e4[6]) < 1e-15

    # mu scales row 2 and puts the complement in the last slot
    lifted = lift_frame(f, Weights(0.6, -0.8))
    assert np.max(np.abs(lifted.vectors[1][:5] + 0.8 * f.vectors[1])) < 1e-15
    assert abs(lifted.vectors[1][6] - 0.6) < 1e-15


def test_lift_frame_gram_grid():
    vals = [-1.0, -0.5, 0.0, 0.5, 1.0]
    worst = 0.0
    for i in range(50):
        n = 4 + i % 5
        f = random_frame(i, n)
        for lam in vals:
            for mu in vals:
                worst = max(worst, lift_frame(f, Weights(lam, mu)).gram_residual())
    assert worst < 1e-13


def test_cyclic_frames():
    f = random_frame(2, 6)
    f1, f2, f3 = cyclic_frames(f)
    assert f1 is f
    v = f.vectors
    assert np.array_equal(f2.vectors, v[[1, 2, 0, 3]])
    assert np.array_equal(f3.vectors, v[[2, 0, 1, 3]])
    # applying the underlying permutation three times is the identity
    perm = [1, 2, 0, 3]
    v3 = v[perm][perm][perm]
    assert np.array_equal(v3, v)
    # all spans agree
    p0 = v.T @ v
    for g in (f2, f3):
        pg = g.vectors.T @ g.vectors
        assert np.max(np.abs(pg - p0)) < 1e-12
        assert g.gram_residual() < 1e-14


def test_complete_basis():
    f = random_frame(5, 7)
    b = complete_basis(f)
    assert b.shape == (7, 7)
    assert np.max(np.abs(b[:4] - f.vectors)) == 0.0
    assert np.max(np.abs(b @ b.T - np.eye(7))) < 1e-12
    # deterministic
    assert np.array_equal(b, complete_basis(f))


def test_unitary_action():
    m = 3
    f = random_frame(0, 2 * m)
    u = random_unitary(4, m)
    j = standard_complex_structure(m)
    assert np.max(np.abs(u.T @ u - np.eye(2 * m))) < 1e-10
    assert np.max(np.abs(u @ j - j @ u)) < 1e-10
    moved = unitary_action(f, u)
    assert moved.gram_residual() < 1e-10
    assert np.max(np.abs(unitary_action(f, np.eye(2 * m)).vectors - f.vectors)) == 0.0


def test_unitary_action_rejects_bad_matrices():
    f = random_frame(0, 4)
    with pytest.raises(ValueError, match="orthogonal"):
        unitary_action(f, 2.0 * np.eye(4))
    # orthogonal but not J-commuting: swap within the first block
    p = np.eye(4)[[1, 0, 2, 3]]
    with pytest.raises(ValueError, match="commute"):
        unitary_action(f, p)


def test_random_unitary_deterministic():
    a = random_unitary(9, 2)
    b = random_unitary(9, 2)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, random_unitary(10, 2))


def test_random_block_rotation():
    u = random_block_rotation(3, (2, 3))
    assert u.shape == (5, 5)
    assert np.max(np.abs(u.T @ u - np.eye(5))) < 1e-12
    assert np.max(np.abs(u[:2, 2:])) == 0.0
    assert np.max(np.abs(u[2:, :2])) == 0.0
    assert abs(np.linalg.det(u) - 1.0) < 1e-10
