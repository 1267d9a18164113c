# infinikit/eigen.py
"""Dense symmetric eigensolver: Householder tridiagonalization + implicit QL."""

from __future__ import annotations

import logging
import math

import numpy as np

from infinikit.errors import EigensolverError

log = logging.getLogger(__name__)

REL_TOL = 1e-14
MAX_SWEEPS_PER_EIGENVALUE = 60


def tridiagonalize(a: np.ndarray, *, with_vectors: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Householder reduction A = Q T Q^T. Returns (diagonal, offdiagonal, Q)."""
    t = np.array(a, dtype=np.float64, copy=True)
    n = t.shape[0]
    q = np.eye(n) if with_vectors else None
    for k in range(n - 2):
        x = t[k + 1 :, k]
        norm = math.sqrt(float(np.dot(x, x)))
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        vnorm = math.sqrt(float(np.dot(v, v)))
        if vnorm == 0.0:
            continue
        v /= vnorm
        # H = I - 2 v v^T on rows/cols k+1..n-1
        t[k + 1 :, :] -= 2.0 * np.outer(v, v @ t[k + 1 :, :])
        t[:, k + 1 :] -= 2.0 * np.outer(t[:, k + 1 :] @ v, v)
        if q is not None:
            q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v)
    return np.diag(t).copy(), np.diag(t, 1).copy(), q


def tql_implicit(
    d: np.ndarray,
    e: np.ndarray,
    z: np.ndarray | None = None,
    *,
    tol: float = REL_TOL,
    max_sweeps: int = MAX_SWEEPS_PER_EIGENVALUE,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Implicit-shift QL on a symmetric tridiagonal (d, e); rotations accumulate into z."""
    d = np.array(d, dtype=np.float64, copy=True)
    n = d.shape[0]
    off = np.zeros(n)
    off[: n - 1] = e
    sweeps = 0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(off[m]) <= tol * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                raise EigensolverError(
                    f"QL iteration did not converge for eigenvalue {l} after {max_sweeps} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * off[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + off[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * off[i]
                b = c * off[i]
                r = math.hypot(f, g)
                off[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    off[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
                i -= 1
            if deflated:
                continue
            d[l] -= p
            off[l] = g
            off[m] = 0.0
        sweeps += it
    log.debug("tql_implicit: n=%d, %d sweeps", n, sweeps)
    return d, z


def eigh_sym(a: np.ndarray, *, with_vectors: bool = True) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigenvalues (solver order) and, optionally, orthonormal eigenvectors as columns."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigensolverError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise EigensolverError("matrix has non-finite entries")
    n = a.shape[0]
    if n == 1:
        return a[0:1, 0].copy(), (np.ones((1, 1)) if with_vectors else None)
    sym = 0.5 * (a + a.T)
    d, e, q = tridiagonalize(sym, with_vectors=with_vectors)
    w, z = tql_implicit(d, e, q)
    return w, z
