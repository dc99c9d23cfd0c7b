"""The KMS matrix K_n(rho) = [rho^|j-k|], its inverse, determinant and symbol.

Matrices are plain numpy arrays: ``float64`` when rho is real, ``complex128``
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import InvalidParameterError, KmsOverflowError, PoleError, SingularParameterError

_MAX_LOG = math.log(np.finfo(float).max)


def _as_scalar(rho: Number) -> float | complex:
    """Collapse a complex number with zero imaginary part to a float."""
    if isinstance(rho, (complex, np.complexfloating)):
        if rho.imag == 0.0:
            return float(rho.real)
        return complex(rho)
    return float(rho)


@dataclass(frozen=True)
class KmsParams:
    """Identifies the instance K_n(rho)."""

    n: int
    rho: float | complex

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameterError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "rho", _as_scalar(self.rho))

    @property
    def is_real(self) -> bool:
        return isinstance(self.rho, float)

    @property
    def xi(self) -> float:
        """(n+1)/(n-1): the rho at which the second extraordinary eigenvalue appears."""
        return xi(self.n)


def xi(n: int) -> float:
    return (n + 1) / (n - 1)


@dataclass(frozen=True)
class SymbolRange:
    """Endpoints of range{sigma(rho, theta)} for real rho.

    For rho = +-1 the range is degenerate; ``lo``/``hi`` are then -inf/+inf so
    that every eigenvalue tests as inside (all eigenvalues are ordinary there).
    """

    lo: float
    hi: float
    degenerate: bool = False

    def contains(self, value: float, rtol: float = 1e-13) -> bool:
        slack = rtol * max(1.0, abs(value))
        return self.lo - slack <= value <= self.hi + slack


def _check_overflow(rho, n: int) -> None:
    if rho != 0 and (n - 1) * math.log(abs(rho)) > _MAX_LOG:
        raise KmsOverflowError(f"|rho|^(n-1) overflows double precision for n={n}, |rho|={abs(rho):g}")


def build_kms(p: KmsParams) -> np.ndarray:
    """Dense K_n(rho) with entry (j, k) = rho^|j-k|."""
    _check_overflow(p.rho, p.n)
    dtype = float if p.is_real else complex
    powers = np.power(np.asarray(p.rho, dtype=dtype), np.arange(p.n))
    idx = np.arange(p.n)
    return powers[np.abs(idx[:, None] - idx[None, :])]


def kms_inverse_tridiagonal(p: KmsParams) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of K_n(rho)^{-1} (O(n) storage)."""
    rho = p.rho
    if rho == 1 or rho == -1:
        raise SingularParameterError("K_n(rho) is singular for rho = +-1")
    dtype = float if p.is_real else complex
    scale = 1.0 / (1.0 - rho * rho)
    diag = np.full(p.n, (1.0 + rho * rho) * scale, dtype=dtype)
    diag[0] = diag[-1] = scale
    off = np.full(p.n - 1, -rho * scale, dtype=dtype)
    return diag, off


def kms_inverse(p: KmsParams) -> np.ndarray:
    diag, off = kms_inverse_tridiagonal(p)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def kms_determinant(p: KmsParams) -> float | complex:
    """Closed form (1 - rho^2)^(n-1)."""
    return _as_scalar((1.0 - p.rho * p.rho) ** (p.n - 1))


def symbol_sigma(rho, theta):
    """Poisson kernel (1-rho^2)/(1-2 rho cos(theta)+rho^2), continued analytically to |rho| >= 1.

    Accepts scalar or array ``theta``.
    """
    rho = _as_scalar(rho)
    theta = np.asarray(theta, dtype=float)
    den = 1.0 - 2.0 * rho * np.cos(theta) + rho * rho
    if np.any(np.abs(den) <= 1e-300):
        raise PoleError(f"symbol has a pole at rho={rho!r} for the requested theta")
    out = np.asarray((1.0 - rho * rho) / den)
    if out.ndim == 0:
        return _as_scalar(out[()])
    return out


def symbol_range(rho: float) -> SymbolRange:
    rho = float(rho)
    if rho == 1.0 or rho == -1.0:
        return SymbolRange(-math.inf, math.inf, degenerate=True)
    a = (1.0 - rho) / (1.0 + rho)
    b = (1.0 + rho) / (1.0 - rho)
    return SymbolRange(min(a, b), max(a, b))


def signature(n: int) -> np.ndarray:
    """Diagonal of J_n = diag(1, -1, 1, ...)."""
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def transform_negate(lam, y):
    """Map an eigenpair of K_n(rho) to one of K_n(-rho): (lambda, J_n y)."""
    y = np.asarray(y)
    return lam, signature(y.shape[0]) * y


def transform_conjugate(lam, y):
    """Map an eigenpair of K_n(rho) to one of K_n(conj(rho))."""
    return np.conj(lam), np.conj(np.asarray(y))
