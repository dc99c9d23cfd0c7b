"""Eigensystem of K_n(rho) for complex rho through the zeros of p_2n.

Every eigenvalue corresponds to an inverse pair {z, 1/z} of zeros of
p_2n(rho, z). The zeros are found separately for the two factors
s_{n+1} and c_{n+1} once their trivial zeros at z = +-1 are divided out, which
also fixes each zero's type.

The double-eigenvalue loci (parameters rho for which -n is a repeated
eigenvalue) come from the zeros t0 of the auxiliary polynomials q_1, q_2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .chebpoly import (
    ZeroType,
    char_poly_recurrence,
    chebyshev_u_poly,
    deflate,
    poly_c,
    poly_p2n,
    poly_s,
    zero_to_eigenvalue,
)
from .errors import ConvergenceError, InvalidParameterError, PoleError, VerificationError
from .matrix import KmsParams, _as_scalar, build_kms, symbol_sigma, xi
from .oracle import oracle_eig

_SNAP = 1e-14
PAIR_TOL = 1e-6


@dataclass(eq=False)
class ComplexEigenPair:
    lam: complex
    z: complex
    mu: complex
    vector: np.ndarray
    zero_type: ZeroType | None


@dataclass(frozen=True)
class DoubleEigenLocus:
    n: int
    type_tag: ZeroType
    t0: complex
    rho: complex
    residual: float
    derivative_residual: float


# ------------------------------------------------------------------ zeros


def _is_degenerate(n: int, rho) -> bool:
    x = xi(n)
    return any(abs(rho - d) <= _SNAP * max(1.0, abs(d)) for d in (0.0, 1.0, -1.0, x, -x))


def _factors(n: int, rho):
    """Deflated factors of s_{n+1} and c_{n+1} and their zero types."""
    s, c = poly_s(n, rho), poly_c(n, rho)
    s, _ = deflate(s, 1.0)
    if n % 2 == 0:
        c, _ = deflate(c, -1.0)
    else:
        s, _ = deflate(s, -1.0)
    return [(ZeroType.TYPE1, s, poly_s(n, rho)), (ZeroType.TYPE2, c, poly_c(n, rho))]


def _polish(full: Polynomial, roots: np.ndarray, steps: int = 2) -> np.ndarray:
    """Newton steps on the undeflated factor; a step is kept only if |p| decreases."""
    d = full.deriv()
    out = roots.astype(complex)
    for _ in range(steps):
        fz, dz = full(out), d(out)
        with np.errstate(all="ignore"):
            cand = out - fz / dz
        better = np.isfinite(cand) & (np.abs(full(cand)) < np.abs(fz))
        out = np.where(better, cand, out)
    return out


def _factor_zeros(n: int, rho):
    """Yield (zero_type, zeros) per factor."""
    result = []
    for ztype, reduced, full in _factors(n, rho):
        try:
            roots = reduced.roots()
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise ConvergenceError(f"root-finding failed for the {ztype.value} factor") from exc
        if not np.all(np.isfinite(roots)):
            raise ConvergenceError(f"non-finite zero in the {ztype.value} factor")
        result.append((ztype, _polish(full, roots)))
    return result


def p2n_zeros(p: KmsParams) -> np.ndarray:
    """All 2n zeros of p_2n(rho, .), found factor by factor."""
    if _is_degenerate(p.n, p.rho):
        raise InvalidParameterError("p2n_zeros needs rho outside {-xi_n, -1, 0, 1, xi_n}")
    return np.concatenate([z for _, z in _factor_zeros(p.n, p.rho)])


def pair_inverse(zeros: np.ndarray, tol: float = PAIR_TOL) -> list[tuple[complex, complex]]:
    """Greedy matching of zeros into inverse pairs; the first member has |z| >= 1."""
    zs = [complex(z) for z in sorted(zeros, key=lambda z: -abs(z))]
    used = [False] * len(zs)
    pairs = []
    for i, z in enumerate(zs):
        if used[i]:
            continue
        used[i] = True
        target = 1 / z
        best, best_d = None, math.inf
        for j in range(len(zs)):
            if not used[j]:
                d = abs(zs[j] - target)
                if d < best_d:
                    best, best_d = j, d
        if best is None or best_d > tol * (1 + abs(z)):
            raise ConvergenceError(f"zero {z!r} has no inverse partner (closest gap {best_d:.3g})")
        used[best] = True
        w = zs[best]
        big, small = (z, w) if abs(z) >= abs(w) else (w, z)
        if abs(abs(big) - 1) <= 1e-12 and big.imag < 0 and abs(small.imag) > 0:
            big, small = small, big
        pairs.append((big, small))
    return pairs


# ------------------------------------------------------------ eigenpairs


def _eigenvalue(n: int, rho, z: complex, ztype: ZeroType) -> complex:
    """Choose among the algebraically equivalent formulas the one least sensitive to z."""
    cands = []
    r2 = 1 - rho * rho
    try:
        lam = zero_to_eigenvalue(rho, z)
        cond = abs(1 / z - 1 / (z - rho) + rho / (1 - rho * z))
        cands.append((cond, lam))
    except PoleError:
        pass
    sign = 1 if ztype is ZeroType.TYPE1 else -1
    if abs(z - rho) > 1e-300:
        cands.append((abs((1 - n) / z - 2 / (z - rho)), sign * z ** (1 - n) * r2 / (z - rho) ** 2))
    if abs(1 - rho * z) > 1e-300:
        cands.append((abs((n + 1) / z + 2 * rho / (1 - rho * z)), sign * z ** (n + 1) * r2 / (1 - rho * z) ** 2))
    finite = [(c, v) for c, v in cands if cmath.isfinite(v)]
    if not finite:
        raise PoleError(f"no eigenvalue formula is usable at z={z!r}")
    return min(finite, key=lambda cv: cv[0])[1]


def _eigenvector(n: int, z: complex, ztype: ZeroType) -> np.ndarray:
    """z^{j-n+1} -+ z^{-j}, proportional to sin/cos(mu (j - (n-1)/2)) with mu = -i ln z."""
    j = np.arange(n)
    logz = cmath.log(z)
    a = np.exp(logz * (j - n + 1))
    b = np.exp(-logz * j)
    y = a - b if ztype is ZeroType.TYPE1 else a + b
    return _normalize_complex(y)


def _normalize_complex(y: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(y)))
    return y / y[i]


def _sort_pairs(pairs: list[ComplexEigenPair]) -> list[ComplexEigenPair]:
    def key(pr):
        return (-round(abs(pr.lam), 12), round(cmath.phase(pr.lam), 12))

    return sorted(pairs, key=key)


def _closed_form(p: KmsParams) -> list[ComplexEigenPair] | None:
    n, rho = p.n, p.rho
    if abs(rho) <= _SNAP:
        eye = np.eye(n, dtype=complex)
        return [ComplexEigenPair(1 + 0j, complex(math.inf), complex(0), eye[:, k], None) for k in range(n)]
    for sign in (1.0, -1.0):
        if abs(rho - sign) <= _SNAP:
            j = np.arange(n)
            ones = (sign**j).astype(complex)
            out = [ComplexEigenPair(complex(n), complex(sign), 0j if sign > 0 else complex(math.pi), ones, None)]
            for k in range(1, n):
                v = np.zeros(n, dtype=complex)
                v[0], v[k] = 1.0, -ones[k]
                out.append(ComplexEigenPair(0j, complex(sign), complex(math.nan), _normalize_complex(v), None))
            return out
    return None


def complex_spectrum(p: KmsParams, with_flags: bool = False):
    """All n eigenpairs of K_n(rho) for any rho, sorted by descending |lam| then phase.

    At rho = +-xi_n (where one zero pair collapses onto z = +-1) the eigenvalues
    come from the dense oracle; ``with_flags=True`` additionally returns a dict
    recording that fallback.
    """
    n, rho = p.n, p.rho
    flags = {"oracle_fallback": False, "closed_form": False}
    pairs = _closed_form(p)
    if pairs is not None:
        flags["closed_form"] = True
    elif _is_degenerate(n, rho):
        flags["oracle_fallback"] = True
        spec = oracle_eig(build_kms(p), vectors=True)
        pairs = [
            ComplexEigenPair(complex(lam), complex(math.nan), complex(math.nan), _normalize_complex(spec.eigenvectors[:, i].astype(complex)), None)
            for i, lam in enumerate(spec.eigenvalues)
        ]
    else:
        pairs = []
        for ztype, zeros in _factor_zeros(n, rho):
            for z, _ in pair_inverse(zeros):
                lam = _eigenvalue(n, rho, z, ztype)
                mu = -1j * cmath.log(z)
                pairs.append(ComplexEigenPair(complex(lam), z, mu, _eigenvector(n, z, ztype), ztype))
        if len(pairs) != n:
            raise ConvergenceError(f"expected {n} eigenvalues, found {len(pairs)}")
    pairs = _sort_pairs(pairs)
    return (pairs, flags) if with_flags else pairs


# ------------------------------------------------------------ double eigenvalues


def q_polynomial(n: int, type_tag: ZeroType) -> Polynomial:
    """q_1 (type-1) or q_2 (type-2): U_{n-1}(t) -+ n with the trivial factors at t = +-1 removed."""
    u = chebyshev_u_poly(n - 1)
    if type_tag is ZeroType.TYPE1:
        q, r1 = deflate(u - n, 1.0)
        rems = [r1]
        if n % 2 == 1:
            q, r2 = deflate(q, -1.0)
            rems.append(r2)
    else:
        q = u + n
        rems = []
        if n % 2 == 0:
            q, r1 = deflate(q, -1.0)
            rems.append(r1)
    if any(abs(r) > 1e-9 * n for r in rems):
        raise VerificationError("removable factor did not divide exactly")
    return Polynomial(np.real_if_close(q.coef))


def _cheb_t(nu: float, t: complex) -> complex:
    return cmath.cos(nu * cmath.acos(t))


def _locus_rho(n: int, type_tag: ZeroType, t0: complex) -> complex:
    num = _cheb_t((n + 1) / 2, t0)
    den = _cheb_t((n - 1) / 2, t0)
    ratio = num / den
    return xi(n) * ratio if type_tag is ZeroType.TYPE1 else ratio


def _verify_locus(n: int, rho: complex) -> tuple[float, float]:
    psi = char_poly_recurrence(n, rho)
    lam = -float(n)
    powers = np.abs(lam) ** np.arange(psi.degree() + 1)
    scale = float(np.sum(np.abs(psi.coef) * powers))
    d = psi.deriv()
    dscale = float(np.sum(np.abs(d.coef) * powers[: d.degree() + 1]))
    return abs(psi(lam)) / scale, abs(d(lam)) / dscale


def double_eigen_loci(n: int, type_tag: ZeroType, tol: float = 1e-7) -> list[DoubleEigenLocus]:
    """Parameters rho for which lambda = -n is a double eigenvalue of the given type."""
    need = 4 if type_tag is ZeroType.TYPE1 else 3
    if n < need:
        raise InvalidParameterError(f"{type_tag.value} loci need n >= {need}")
    q = q_polynomial(n, type_tag)
    out, bad = [], []
    for t0 in q.roots():
        t0 = complex(t0)
        rho = complex(_locus_rho(n, type_tag, t0))
        r0, r1 = _verify_locus(n, rho)
        loc = DoubleEigenLocus(n, type_tag, t0, _clean(rho), r0, r1)
        (out if max(r0, r1) <= tol else bad).append(loc)
    if bad:
        raise VerificationError("unverified loci: " + ", ".join(f"t0={b.t0:.6g} rho={b.rho:.6g}" for b in bad))
    return sorted(out, key=lambda l: (round(l.rho.real, 10), round(l.rho.imag, 10)))


def _clean(z: complex) -> complex:
    scale = max(1.0, abs(z))
    re = 0.0 if abs(z.real) <= 1e-13 * scale else z.real
    im = 0.0 if abs(z.imag) <= 1e-13 * scale else z.imag
    return complex(re, im)


# ------------------------------------------------------------ symbol range


def distance_to_symbol_range(p: KmsParams, lam, points: int = 4096) -> float:
    """min over theta of |lam - sigma(rho, theta)|, grid search plus golden-section refinement."""
    rho = _as_scalar(p.rho)
    lam = complex(lam)
    theta = np.linspace(-math.pi, math.pi, points, endpoint=False)
    den = 1.0 - 2.0 * rho * np.cos(theta) + rho * rho
    with np.errstate(all="ignore"):
        vals = (1.0 - rho * rho) / den
        dist = np.abs(lam - vals)
    dist = np.where(np.isfinite(dist), dist, np.inf)
    i = int(np.argmin(dist))
    best = float(dist[i])
    if not math.isfinite(best):
        return math.inf
    step = theta[1] - theta[0]

    def f(t):
        try:
            return abs(lam - symbol_sigma(rho, t))
        except PoleError:
            return math.inf

    a, b = theta[i] - step, theta[i] + step
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return float(min(best, fc, fd))
