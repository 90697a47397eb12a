"""Orthonormal frames in R^n, their sampling, lifts, and holonomy actions.

The workhorse type is an ordered orthonormal k-frame stored as a k x n
matrix of rows.  Four-frames are the default (the isotropic functional
lives on them); two-frames appear in sectional-curvature minimization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .tensors import standard_complex_structure

__all__ = [
    "Frame",
    "orthonormalize",
    "random_frame",
    "lift_frame",
    "cyclic_frames",
    "complete_basis",
    "unitary_action",
    "random_unitary",
    "random_block_rotation",
]

ORTHO_TOL = 1e-10
RANK_TOL = 1e-10
COMPLETION_TOL = 1e-8


@dataclass(frozen=True)
class Frame:
    """Ordered orthonormal k-frame in R^n (rows of ``vectors``).

    Construction validates the Gram matrix against the identity in max-norm;
    violations are errors, not silent repairs.
    """

    n: int
    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.n:
            raise ValueError(f"expected a (k, {self.n}) row matrix, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("frame entries must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)
        resid = self.gram_residual()
        if resid > ORTHO_TOL:
            raise ValueError(f"rows are not orthonormal: Gram residual {resid:.3e} > {ORTHO_TOL:.0e}")

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    def gram_residual(self) -> float:
        g = self.vectors @ self.vectors.T
        return float(np.max(np.abs(g - np.eye(self.k))))

    def row(self, i: int) -> np.ndarray:
        return self.vectors[i]

    def require_rows(self, k: int) -> "Frame":
        if self.k != k:
            raise ValueError(f"expected a {k}-frame, got {self.k} rows")
        return self


def _gram_schmidt(rows: np.ndarray, rank_tol: float) -> np.ndarray:
    out = []
    for row in rows:
        v = row.astype(float).copy()
        for u in out:
            v -= (v @ u) * u
        # second pass for numerical orthogonality
        for u in out:
            v -= (v @ u) * u
        norm = np.linalg.norm(v)
        if norm <= rank_tol:
            raise ValueError(f"rank deficiency: residual norm {norm:.3e} <= {rank_tol:.0e}")
        out.append(v / norm)
    return np.array(out)


def orthonormalize(matrix, rank_tol: float = RANK_TOL) -> Frame:
    """Gram-Schmidt the rows of a k x n matrix into a Frame spanning the same flag."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] > m.shape[1]:
        raise ValueError(f"expected a k x n matrix with k <= n, got shape {m.shape}")
    return Frame(n=m.shape[1], vectors=_gram_schmidt(m, rank_tol))


def random_frame(seed, n: int, k: int = 4) -> Frame:
    """Orthonormalization of a seeded standard-normal k x n matrix.

    Deterministic per seed; the row distribution is rotation invariant.
    Resamples internally in the (measure-zero) event of rank failure.
    """
    if n < k:
        raise ValueError(f"ambient dimension {n} too small for a {k}-frame")
    rng = np.random.default_rng(seed)
    while True:
        m = rng.standard_normal((k, n))
        try:
            return orthonormalize(m)
        except ValueError:
            continue


def lift_frame(frame: Frame, weights) -> Frame:
    """Lift a 4-frame in R^n to R^{n+2} along the weight pair.

    With weights ``(lam, mu)`` the rows become::

        e1 -> (e1, 0, 0)
        e2 -> (mu * e2, 0, sqrt(1 - mu^2))
        e3 -> (e3, 0, 0)
        e4 -> (lam * e4, sqrt(1 - lam^2), 0)

    which is again orthonormal for any weights in [-1, 1]^2.
    """
    frame.require_rows(4)
    lam, mu = weights.lam, weights.mu
    n = frame.n
    v = np.zeros((4, n + 2))
    v[0, :n] = frame.row(0)
    v[1, :n] = mu * frame.row(1)
    v[1, n + 1] = np.sqrt(max(0.0, 1.0 - mu * mu))
    v[2, :n] = frame.row(2)
    v[3, :n] = lam * frame.row(3)
    v[3, n] = np.sqrt(max(0.0, 1.0 - lam * lam))
    return Frame(n=n + 2, vectors=v)


def cyclic_frames(frame: Frame) -> tuple[Frame, Frame, Frame]:
    """The three cyclic reorderings (e1,e2,e3,e4), (e2,e3,e1,e4), (e3,e1,e2,e4)."""
    frame.require_rows(4)
    v = frame.vectors
    return (
        frame,
        Frame(n=frame.n, vectors=v[[1, 2, 0, 3]]),
        Frame(n=frame.n, vectors=v[[2, 0, 1, 3]]),
    )


def complete_basis(frame: Frame, tol: float = COMPLETION_TOL) -> np.ndarray:
    """Deterministic completion of a frame to a full orthonormal basis of R^n.

    Gram-Schmidts the standard basis vectors against the frame in index
    order, skipping near-dependent candidates.  Returns an n x n row matrix
    whose first k rows are the frame.
    """
    n = frame.n
    rows = [frame.vectors[i].copy() for i in range(frame.k)]
    for idx in range(n):
        if len(rows) == n:
            break
        v = np.zeros(n)
        v[idx] = 1.0
        for u in rows:
            v -= (v @ u) * u
        norm = np.linalg.norm(v)
        if norm <= tol:
            continue
        v /= norm
        for u in rows:
            v -= (v @ u) * u
        rows.append(v / np.linalg.norm(v))
    if len(rows) != n:
        raise ValueError("basis completion failed (input frame not orthonormal?)")
    return np.array(rows)


def _check_unitary(u: np.ndarray, m: int, tol: float) -> None:
    n = 2 * m
    if u.shape != (n, n):
        raise ValueError(f"expected a {n} x {n} matrix, got {u.shape}")
    ortho = float(np.max(np.abs(u.T @ u - np.eye(n))))
    if ortho > tol:
        raise ValueError(f"matrix is not orthogonal: residual {ortho:.3e} > {tol:.0e}")
    j = standard_complex_structure(m)
    comm = float(np.max(np.abs(u @ j - j @ u)))
    if comm > tol:
        raise ValueError(f"matrix does not commute with J: residual {comm:.3e} > {tol:.0e}")


def unitary_action(frame: Frame, u: np.ndarray, tol: float = ORTHO_TOL) -> Frame:
    """Apply a unitary holonomy element (orthogonal, J-commuting) to a frame.

    Rows map by ``e_i -> U e_i``.  U must be orthogonal and commute with the
    standard complex structure on R^{2m} to within ``tol``.
    """
    if frame.n % 2 != 0:
        raise ValueError("unitary action needs an even ambient dimension")
    u = np.asarray(u, dtype=float)
    _check_unitary(u, frame.n // 2, tol)
    return Frame(n=frame.n, vectors=frame.vectors @ u.T)


def random_unitary(seed, m: int) -> np.ndarray:
    """Seeded element of U(m) acting on R^{2m}.

    Exponential of a J-commuting skew matrix [[X, -Y], [Y, X]] with X skew
    and Y symmetric; the result is orthogonal and commutes with J.
    """
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, m))
    b = rng.standard_normal((m, m))
    x = 0.5 * (a - a.T)
    y = 0.5 * (b + b.T)
    skew = np.block([[x, -y], [y, x]])
    return expm(skew)


def random_block_rotation(seed, dims: tuple[int, ...]) -> np.ndarray:
    """Seeded block-diagonal rotation, one independent SO(d) block per factor."""
    rng = np.random.default_rng(seed)
    blocks = []
    for d in dims:
        a = rng.standard_normal((d, d))
        blocks.append(expm(0.5 * (a - a.T)))
    n = sum(dims)
    out = np.zeros((n, n))
    at = 0
    for blk in blocks:
        d = blk.shape[0]
        out[at : at + d, at : at + d] = blk
        at += d
    return out
