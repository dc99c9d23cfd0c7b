"""Polynomials tied to the spectrum of K_n(rho).

Polynomials are :class:`numpy.polynomial.Polynomial` instances with
coefficients in ascending degree order. The central objects are

* ``psi_n(rho, lam)``, the characteristic polynomial det(lam I - K_n),
* ``p_2n(rho, z)``, whose zeros z map two-to-one onto eigenvalues,
* ``s_{n+1}`` and ``c_{n+1}``, the factors of ``(z^2 - 1) p_2n``.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import AmbiguousZeroError, PoleError
from .matrix import _as_scalar, xi


class ZeroType(str, enum.Enum):
    """Type-1 zeros kill s_{n+1} (odd eigenvector); type-2 zeros kill c_{n+1} (even eigenvector)."""

    TYPE1 = "type-1"
    TYPE2 = "type-2"


class Inversivity(str, enum.Enum):
    RECIPROCAL = "reciprocal"
    ANTI_RECIPROCAL = "anti-reciprocal"
    SELF_INVERSIVE = "general-self-inversive"
    NOT_SELF_INVERSIVE = "not-self-inversive"


@dataclass(frozen=True)
class SelfInversivity:
    kind: Inversivity
    epsilon: complex | None = None


def _dtype(*values):
    return complex if any(isinstance(_as_scalar(v), complex) for v in values) else float


def chebyshev_u(k: int, t):
    """U_k(t) by the three-term recurrence; ``t`` may be complex or an array."""
    if k < 0:
        raise ValueError("k must be >= 0")
    t = np.asarray(t)
    prev = np.ones_like(t, dtype=np.result_type(t, float))
    if k == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 2 * t + 0 * prev
    for _ in range(k - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur[()] if cur.ndim == 0 else cur


def chebyshev_u_poly(k: int) -> Polynomial:
    """U_k as a coefficient polynomial in t."""
    t = Polynomial([0.0, 1.0])
    prev, cur = Polynomial([1.0]), Polynomial([0.0, 2.0])
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def tau(rho, lam):
    """tau(rho, lam) = (rho^2 (lam+1) + lam - 1) / (2 lam rho)."""
    if rho == 0 or lam == 0:
        raise PoleError("tau is undefined for rho = 0 or lam = 0")
    return (rho * rho * (lam + 1) + lam - 1) / (2 * lam * rho)


def char_poly_recurrence(n: int, rho) -> Polynomial:
    """Coefficients (in lam) of psi_n(rho, lam) built from psi_0 = 1, psi_1 = lam - 1."""
    rho = _as_scalar(rho)
    dt = _dtype(rho)
    prev = Polynomial(np.array([1], dtype=dt))
    if n == 0:
        return prev
    cur = Polynomial(np.array([-1, 1], dtype=dt))
    r2 = rho * rho
    a = Polynomial(np.array([r2 - 1, 1 + r2], dtype=dt))
    b = Polynomial(np.array([0, 0, r2], dtype=dt))
    for _ in range(n - 1):
        prev, cur = cur, a * cur - b * prev
    return cur


def _char_poly_scalar_recurrence(n: int, rho, lam):
    prev, cur = 1.0, lam - 1.0
    if n == 0:
        return prev
    r2 = rho * rho
    for _ in range(n - 1):
        prev, cur = cur, (r2 - 1 + lam * (1 + r2)) * cur - (lam * lam * r2) * prev
    return cur


def char_poly_eval(n: int, rho, lam):
    """psi_n(rho, lam) via the Chebyshev closed form, recurrence fallback at removable cases."""
    rho = _as_scalar(rho)
    lam = _as_scalar(lam)
    if n < 2 or rho == 0 or rho in (1.0, -1.0) or lam == 0:
        return _as_scalar(_char_poly_scalar_recurrence(n, rho, lam))
    t = tau(rho, lam)
    bracket = chebyshev_u(n, t) - 2 * rho * chebyshev_u(n - 1, t) + rho * rho * chebyshev_u(n - 2, t)
    return _as_scalar((lam * rho) ** n / (1 - rho * rho) * bracket)


def poly_p2n(n: int, rho) -> Polynomial:
    """Monic degree-2n polynomial: 1 - 2 rho z + (1+rho^2) z^2 - ... - 2 rho z^{2n-1} + z^{2n}."""
    rho = _as_scalar(rho)
    c = np.empty(2 * n + 1, dtype=_dtype(rho))
    c[0::2] = 1 + rho * rho
    c[1::2] = -2 * rho
    c[0] = c[-1] = 1
    return Polynomial(c)


def poly_s(n: int, rho) -> Polynomial:
    """s_{n+1} = z^{n+1} - rho z^n + rho z - 1."""
    rho = _as_scalar(rho)
    c = np.zeros(n + 2, dtype=_dtype(rho))
    c[0], c[1], c[n], c[n + 1] = -1, rho, -rho, 1
    return Polynomial(c)


def poly_c(n: int, rho) -> Polynomial:
    """c_{n+1} = z^{n+1} - rho z^n - rho z + 1."""
    rho = _as_scalar(rho)
    c = np.zeros(n + 2, dtype=_dtype(rho))
    c[0], c[1], c[n], c[n + 1] = 1, -rho, -rho, 1
    return Polynomial(c)


def is_self_inversive(poly: Polynomial, rtol: float = 1e-12) -> SelfInversivity:
    """Find a unimodular epsilon with a_k = epsilon * conj(a_{m-k}), if one exists."""
    a = np.asarray(poly.coef, dtype=complex)
    if a[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    tol = rtol * np.max(np.abs(a))
    eps = a[0] / np.conj(a[-1])
    if abs(abs(eps) - 1) > rtol or np.max(np.abs(a - eps * np.conj(a[::-1]))) > tol:
        return SelfInversivity(Inversivity.NOT_SELF_INVERSIVE)
    if abs(eps - 1) <= rtol:
        return SelfInversivity(Inversivity.RECIPROCAL, 1 + 0j)
    if abs(eps + 1) <= rtol:
        return SelfInversivity(Inversivity.ANTI_RECIPROCAL, -1 + 0j)
    return SelfInversivity(Inversivity.SELF_INVERSIVE, complex(eps))


def cohn_predicate(poly: Polynomial, slack: float = 1e-8) -> bool:
    """Cohn's criterion for all zeros on the unit circle.

    True iff the polynomial is self-inversive and every zero of its derivative
    lies in the closed unit disc. Used as a test predicate only.
    """
    if is_self_inversive(poly).kind is Inversivity.NOT_SELF_INVERSIVE:
        return False
    droots = poly.deriv().roots()
    return bool(np.all(np.abs(droots) <= 1 + slack))


def zero_to_eigenvalue(rho, z):
    """lam = z (1 - rho^2) / ((z - rho)(1 - rho z)); invariant under z -> 1/z."""
    rho = _as_scalar(rho)
    z = complex(z)
    d1, d2 = z - rho, 1 - rho * z
    scale = 1e-14 * max(1.0, abs(z), abs(rho))
    if abs(d1) <= scale or abs(d2) <= scale * max(1.0, abs(rho)):
        raise PoleError(f"z={z!r} is at a pole (rho or 1/rho)")
    return z * (1 - rho * rho) / (d1 * d2)


def eigenvalue_to_zeros(rho, lam) -> tuple[complex, complex]:
    """The inverse pair (z, 1/z) with tau + sqrt(tau^2 - 1); the first has |z| >= 1."""
    t = complex(tau(_as_scalar(rho), _as_scalar(lam)))
    w = cmath.sqrt(t * t - 1)
    a, b = t + w, t - w
    if abs(abs(a) - abs(b)) <= 1e-12 * max(abs(a), abs(b)):
        z = a if a.imag >= 0 else b
    else:
        z = a if abs(a) > abs(b) else b
    return z, 1 / z


def typed_eigenvalue(n: int, rho, z, zero_type: ZeroType, form: int = 1):
    """Eigenvalue from a classified zero.

    ``form=1`` uses z^{1-n}(1-rho^2)/(z-rho)^2, ``form=2`` uses
    z^{n+1}(1-rho^2)/(1-rho z)^2; the sign is flipped for type-2 zeros.
    """
    rho = _as_scalar(rho)
    z = complex(z)
    if form == 1:
        val = z ** (1 - n) * (1 - rho * rho) / (z - rho) ** 2
    else:
        val = z ** (n + 1) * (1 - rho * rho) / (1 - rho * z) ** 2
    return val if zero_type is ZeroType.TYPE1 else -val


def classify_zero(n: int, rho, z) -> ZeroType:
    """Decide which of s_{n+1}, c_{n+1} vanishes at a zero of p_2n."""
    rho = _as_scalar(rho)
    rs = abs(poly_s(n, rho)(z))
    rc = abs(poly_c(n, rho)(z))
    tol = 1e-8 * (1 + abs(rho)) ** (n + 1)
    if min(rs, rc) > tol:
        raise AmbiguousZeroError(f"neither s nor c vanishes at z={z!r} (|s|={rs:.3g}, |c|={rc:.3g})")
    return ZeroType.TYPE1 if rs < rc else ZeroType.TYPE2


def deflate(poly: Polynomial, root) -> tuple[Polynomial, complex]:
    """Synthetic division by (x - root). Returns the quotient and the scalar remainder."""
    quo, rem = divmod(poly, Polynomial([-root, 1]))
    return quo, complex(rem.coef[0])


def degenerate_rhos(n: int) -> tuple[float, ...]:
    """rho values excluded from the type-1/type-2 classification."""
    x = xi(n)
    return (-x, -1.0, 1.0, x)
