"""Brute-force reference implementations.

Nothing in here knows about the trigonometric root equations used by the
structured solver; everything is generic dense linear algebra (LU,
Householder reductions, Sturm bisection, shifted QR) so that it can serve as
ground truth in tests and in ``kmsspec verify``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ConvergenceError, InvalidParameterError, SizeLimitError

GENERAL_LIMIT = 512
SYMMETRIC_LIMIT = 5000

SYMMETRIC = "symmetric-tridiagonal-reduction"
GENERAL = "general-dense"

_EPS = np.finfo(float).eps


@dataclass
class OracleSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    method: str


# --------------------------------------------------------------------------- LU


def lu_factor(a):
    """Partial-pivoting LU. Returns (lu, perm, sign) with a[perm] = L U."""
    lu = np.array(a, dtype=np.result_type(a, float), copy=True)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        if lu[k, k] == 0:
            continue
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, sign


def lu_det(a):
    a = np.asarray(a)
    if a.shape[0] == 0:
        return 1.0
    lu, _, sign = lu_factor(a)
    return sign * np.prod(np.diag(lu))


def lu_solve(factored, b):
    lu, perm, _ = factored
    n = lu.shape[0]
    x = np.array(b, dtype=np.result_type(lu, b), copy=True)[perm]
    for k in range(n):
        x[k + 1 :] -= lu[k + 1 :, k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = x[k] / lu[k, k]
        x[:k] -= lu[:k, k] * x[k]
    return x


# ------------------------------------------------------ real symmetric route


def householder_tridiagonal(a):
    """Reduce a real symmetric matrix to tridiagonal form; returns (diag, offdiag)."""
    h = np.array(a, dtype=float, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        alpha = -np.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        h[k + 1 :, :] -= 2.0 * np.outer(v, v @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
    return np.diag(h).copy(), np.diag(h, 1).copy()


def sturm_count(diag, off, x):
    """Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly below each x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    scale = max(np.max(np.abs(diag)), np.max(np.abs(off), initial=0.0), 1e-300)
    tiny = _EPS * scale
    off2 = off * off
    # an exact zero pivot is treated as -tiny, both in the count and in the recurrence
    q = diag[0] - x
    q = np.where(q == 0.0, -tiny, q)
    count = (q < 0).astype(int)
    for j in range(1, diag.shape[0]):
        q = diag[j] - x - off2[j - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def tridiagonal_eigvalsh(diag, off, max_iter: int = 200):
    """All eigenvalues (ascending) of a real symmetric tridiagonal matrix by Sturm bisection."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    n = diag.shape[0]
    if n == 1:
        return diag.copy()
    radius = np.zeros(n)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = np.full(n, np.min(diag - radius))
    hi = np.full(n, np.max(diag + radius))
    width0 = hi[0] - lo[0]
    lo -= 1e-12 * width0 + 1e-300
    hi += 1e-12 * width0 + 1e-300
    idx = np.arange(n)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = sturm_count(diag, off, mid) <= idx
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 2 * _EPS * np.maximum(np.abs(lo), np.abs(hi)) + 1e-300):
            break
    return 0.5 * (lo + hi)


def _kms_parameter(a):
    """Return rho if ``a`` is (numerically) a real KMS matrix with |rho| != 1, else None."""
    n = a.shape[0]
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        return None
    a = np.real(a)
    if n < 2 or a[0, 0] != 1.0:
        return None
    rho = float(a[0, 1])
    if abs(rho) == 1.0:
        return None
    idx = np.arange(n)
    ref = np.power(rho, np.abs(idx[:, None] - idx[None, :]))
    if not np.allclose(a, ref, rtol=1e-13, atol=0.0):
        return None
    return rho


def _kms_inverse_route(a, rho):
    n = a.shape[0]
    r2 = rho * rho
    diag = np.full(n, 1.0 + r2)
    diag[0] = diag[-1] = 1.0
    off = np.full(n - 1, -rho)
    # (1 - rho^2) K^{-1} must be exactly this Jacobi matrix.
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    prod = t @ a
    tol = 1e-12 * (1 + r2) * np.max(np.abs(a)) * 4
    if np.max(np.abs(prod - (1.0 - r2) * np.eye(n))) > tol:
        return None
    mu = tridiagonal_eigvalsh(diag, off)
    return np.sort((1.0 - r2) / mu)


# ------------------------------------------------------------ general route


def hessenberg(a):
    """Householder reduction of a square matrix to upper Hessenberg form."""
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm
        v /= np.linalg.norm(v)
        h[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        h[k + 2 :, k] = 0.0
    return h


def _wilkinson_shift(a, b, c, d):
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    m1 = 0.5 * (a + d) + disc
    m2 = 0.5 * (a + d) - disc
    return m1 if abs(m1 - d) < abs(m2 - d) else m2


def hessenberg_qr_eigvals(h, max_sweeps_per_eig: int = 60):
    """Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with deflation."""
    h = np.array(h, dtype=complex, copy=True)
    n = h.shape[0]
    eig = []
    hi = n - 1
    stall = 0
    budget = max_sweeps_per_eig * max(n, 1)
    while hi >= 0:
        if hi == 0:
            eig.append(h[0, 0])
            break
        lo = hi
        while lo > 0:
            if abs(h[lo, lo - 1]) <= _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig.append(h[hi, hi])
            hi -= 1
            stall = 0
            continue
        stall += 1
        budget -= 1
        if budget < 0:
            raise ConvergenceError("Hessenberg QR did not converge")
        if stall % 11 == 10:
            shift = h[hi, hi] + 1.5 * abs(h[hi, hi - 1])
        else:
            shift = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        blk = h[lo : hi + 1, lo : hi + 1]
        m = blk.shape[0]
        blk[np.diag_indices(m)] -= shift
        rots = []
        for k in range(m - 1):
            x, y = blk[k, k], blk[k + 1, k]
            r = np.hypot(abs(x), abs(y))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = x / r, y / r
            g = np.array([[np.conj(c), np.conj(s)], [-s, c]])
            blk[k : k + 2, k:] = g @ blk[k : k + 2, k:]
            rots.append(g)
        for k, g in enumerate(rots):
            top = min(k + 2, m - 1) + 1
            blk[:top, k : k + 2] = blk[:top, k : k + 2] @ g.conj().T
        blk[np.diag_indices(m)] += shift
    return np.array(eig[::-1])


def general_eigvals(a):
    return hessenberg_qr_eigvals(hessenberg(a))


# -------------------------------------------------------------- eigenvectors


def inverse_iteration(a, lam, steps: int = 3):
    """Eigenvector for an (approximate) eigenvalue ``lam``; normalized to max-|entry| = 1."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    scale = max(np.max(np.abs(a)), 1.0)
    shifted = a - (lam + 1e-10 * scale * (1 + 1j)) * np.eye(n)
    fac = lu_factor(shifted)
    v = np.ones(n, dtype=complex) + 0.1 * np.cos(np.arange(n) * 1.7)
    for _ in range(steps):
        v = lu_solve(fac, v)
        v /= v[np.argmax(np.abs(v))]
    return v


def _sort(vals):
    if np.iscomplexobj(vals) and np.all(vals.imag == 0):
        vals = vals.real
    return np.sort(vals)


def oracle_eig(a, vectors: bool = False, method: str | None = None) -> OracleSpectrum:
    """Dense eigenvalues of ``a`` (sorted), by a route independent of the structured solver.

    Real symmetric input goes through a symmetric tridiagonal form and Sturm
    bisection. When ``a`` is recognisably a real KMS matrix with |rho| != 1 the
    tridiagonal form is (1 - rho^2) K^{-1} itself, which gives eigenvalues with
    small relative error even when the entries of K are huge. Anything else uses
    Hessenberg reduction and shifted QR.
    """
    a = np.asarray(a)
    n = a.shape[0]
    real_sym = not (np.iscomplexobj(a) and np.any(a.imag != 0)) and np.allclose(a, a.T, rtol=0, atol=0)
    if method is None:
        method = SYMMETRIC if real_sym else GENERAL
    if method == SYMMETRIC:
        if not real_sym:
            raise InvalidParameterError("symmetric route needs a real symmetric matrix")
        if n > SYMMETRIC_LIMIT:
            raise SizeLimitError(f"n={n} exceeds the symmetric oracle limit {SYMMETRIC_LIMIT}")
        a = np.real(a)
        vals = None
        rho = _kms_parameter(a)
        if rho is not None:
            vals = _kms_inverse_route(a, rho)
        if vals is None:
            vals = np.sort(tridiagonal_eigvalsh(*householder_tridiagonal(a)))
    elif method == GENERAL:
        if n > GENERAL_LIMIT:
            raise SizeLimitError(f"n={n} exceeds the general oracle limit {GENERAL_LIMIT}")
        vals = _sort(general_eigvals(a))
    else:
        raise InvalidParameterError(f"unknown oracle method {method!r}")
    vecs = None
    if vectors:
        vecs = np.column_stack([inverse_iteration(a, lam) for lam in vals])
        if real_sym:
            vecs = vecs.real
    return OracleSpectrum(vals, vecs, method)


# ------------------------------------------------------------------ polynomials


def companion(poly: Polynomial):
    c = np.asarray(poly.coef, dtype=complex)
    m = c.shape[0] - 1
    mat = np.zeros((m, m), dtype=complex)
    mat[0, :] = -c[-2::-1] / c[-1]
    mat[np.arange(1, m), np.arange(m - 1)] = 1.0
    return mat


def newton_polish(poly: Polynomial, roots, steps: int = 3):
    """A few safeguarded Newton steps; a step is kept only if it reduces |p|."""
    dp = poly.deriv()
    roots = np.array(roots, dtype=complex, copy=True)
    for i, z in enumerate(roots):
        pz = poly(z)
        for _ in range(steps):
            d = dp(z)
            if d == 0 or pz == 0:
                break
            cand = z - pz / d
            pc = poly(cand)
            if abs(pc) >= abs(pz):
                break
            z, pz = cand, pc
        roots[i] = z
    return roots


def oracle_poly_roots(poly: Polynomial):
    c = np.asarray(poly.coef)
    if c.shape[0] < 2 or c[-1] == 0:
        raise InvalidParameterError("need degree >= 1 with nonzero leading coefficient")
    if c.shape[0] == 2:
        return np.array([-c[0] / c[1]], dtype=complex)
    return newton_polish(poly, hessenberg_qr_eigvals(companion(poly)))


# ------------------------------------------------------------------ minors

MINOR_LIMIT = 6


def oracle_minors(a, order: int | None = None) -> float:
    """Minimum over all order x order minors (all orders if ``order`` is None)."""
    a = np.asarray(a)
    n = a.shape[0]
    if n > MINOR_LIMIT:
        raise SizeLimitError(f"minor enumeration is capped at n={MINOR_LIMIT}")
    if np.iscomplexobj(a):
        if np.any(a.imag != 0):
            raise InvalidParameterError("minors are only ordered for real matrices")
        a = a.real
    orders = range(1, n + 1) if order is None else [order]
    best = np.inf
    for r in orders:
        for rows in itertools.combinations(range(n), r):
            sub = a[list(rows)]
            for cols in itertools.combinations(range(n), r):
                best = min(best, float(lu_det(sub[:, list(cols)])))
    return best


# ------------------------------------------------------------------ matching


def match_multisets(a, b):
    """Greedy minimum-distance matching of two equal-size multisets.

    Returns the permutation ``perm`` such that ``b[perm]`` is paired with ``a``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets must have the same size")
    dist = np.abs(a[:, None] - b[None, :])
    order = np.argsort(dist, axis=None, kind="stable")
    perm = np.full(a.shape[0], -1)
    used_a = np.zeros(a.shape[0], bool)
    used_b = np.zeros(b.shape[0], bool)
    for flat in order:
        i, j = divmod(int(flat), b.shape[0])
        if not used_a[i] and not used_b[j]:
            perm[i] = j
            used_a[i] = used_b[j] = True
    return perm
