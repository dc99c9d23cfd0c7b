"""Closed-form eigenvalue approximations and their measured errors.

* ``large_eigs``: the two exponentially large eigenpairs for |rho| > 1.
* ``regula_falsi_mu`` / ``regula_falsi_lambda``: one linear-interpolation step
  inside the bracket of each mu_k.
* ``near_one_eigs``: first-order expansions around rho = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexspectrum import complex_spectrum
from .errors import InvalidParameterError, KmsOverflowError
from .matrix import KmsParams, _as_scalar
from .realspectrum import GridPoints, real_spectrum

_MAX_LOG = math.log(np.finfo(float).max)


@dataclass(frozen=True, eq=False)
class ApproxReport:
    approx_values: np.ndarray
    exact_values: np.ndarray
    max_rel_error: float

    @classmethod
    def compare(cls, approx, exact, magnitudes: bool = False) -> "ApproxReport":
        a = np.asarray(approx)
        e = np.asarray(exact)
        if magnitudes:
            diff = np.abs(np.abs(a) - np.abs(e))
        else:
            diff = np.abs(a - e)
        small = np.abs(e) < 1e-12
        rel = np.where(small, diff, diff / np.where(small, 1.0, np.abs(e)))
        return cls(a, e, float(np.max(rel)))


# ------------------------------------------------------------ large |rho|


def large_eigs(n: int, rho):
    """(lambda0, lambda1, y0, y1) with lambda0,1 = +-rho^{n+1}/(rho^2 - 1)."""
    rho = _as_scalar(rho)
    if abs(rho) <= 1:
        raise InvalidParameterError("large_eigs needs |rho| > 1")
    if (n + 1) * math.log(abs(rho)) > _MAX_LOG:
        raise KmsOverflowError(f"|rho|^{n + 1} overflows double precision")
    big = rho ** (n + 1) / (rho * rho - 1)
    j = np.arange(n)
    # rho^{(n-1)/2-j} +- rho^{j-(n-1)/2}, scaled by rho^{-(n-1)/2}
    a = np.power(np.asarray(rho, dtype=complex if isinstance(rho, complex) else float), -j.astype(float))
    b = a[::-1]
    y0, y1 = a + b, a - b
    y0 = y0 / np.max(np.abs(y0))
    y1 = y1 / np.max(np.abs(y1))
    return big, -big, y0, y1


def large_eigs_report(n: int, rho) -> ApproxReport:
    """Magnitude errors of the large-|rho| formulas against the two largest exact eigenvalues."""
    lam0, lam1, _, _ = large_eigs(n, rho)
    exact = np.array([pr.lam for pr in complex_spectrum(KmsParams(n, rho))[:2]])
    approx = np.array([lam0, lam1], dtype=complex)
    # pair each approximation with its nearest exact value
    if abs(approx[0] - exact[0]) + abs(approx[1] - exact[1]) > abs(approx[0] - exact[1]) + abs(approx[1] - exact[0]):
        exact = exact[::-1]
    return ApproxReport.compare(approx, exact, magnitudes=True)


def vector_angle(u, v) -> float:
    """1 - |cos(u, v)| for real or complex vectors."""
    u = np.asarray(u)
    v = np.asarray(v)
    c = abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return float(1 - min(c, 1.0))


# ------------------------------------------------------------ regula falsi


def regula_falsi_mu(n: int, rho: float, k: int) -> float:
    """One interpolation step between the known endpoint roots of mu_k."""
    if rho < 0:
        raise InvalidParameterError("regula_falsi_mu needs rho >= 0")
    if not 0 <= k < n:
        raise InvalidParameterError(f"k must lie in 0..{n - 1}")
    g = GridPoints.for_n(n)
    if rho <= 1:
        return float(g.beta[k] * rho + g.gamma[k] * (1 - rho))
    if k < 2:
        raise InvalidParameterError("no interpolation formula for k in {0, 1} when rho > 1")
    return float((g.beta[k] - g.alpha[k]) / rho + g.alpha[k])


def _lambda_of_mu(rho: float, mu):
    mu = np.asarray(mu, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        return (1 - rho) * (1 + rho) / ((1 - rho) ** 2 + 4 * rho * np.sin(mu / 2) ** 2)


def regula_falsi_lambda(n: int, rho: float, ks=None) -> np.ndarray:
    """Eigenvalue approximations for the indices ``ks`` (default: every index the formula covers)."""
    if ks is None:
        ks = range(n) if rho <= 1 else range(2, n)
    mus = np.array([regula_falsi_mu(n, rho, k) for k in ks])
    lam = _lambda_of_mu(rho, mus)
    if rho == 1:
        # the formula is 0/0 at mu = 0; its limit is n
        lam = np.where(mus == 0, float(n), lam)
    return lam


def regula_falsi_report(n: int, rho: float) -> ApproxReport:
    ks = list(range(n)) if rho <= 1 else list(range(2, n))
    exact = real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues[ks]
    return ApproxReport.compare(regula_falsi_lambda(n, rho, ks), exact)


# ------------------------------------------------------------ near rho = 1


def near_one_eigs(n: int, rho: float) -> np.ndarray:
    """lambda_0 ~ n + (n^2-1)(rho-1)/3 and lambda_k ~ (1-rho)/(1-cos(k pi/n)), k >= 1."""
    k = np.arange(1, n)
    rest = (1 - rho) / (1 - np.cos(k * np.pi / n))
    return np.concatenate([[n + (n * n - 1) / 3 * (rho - 1)], rest])


def near_one_report(n: int, rho: float, ks=None) -> ApproxReport:
    ks = list(range(n)) if ks is None else list(ks)
    exact = real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues[ks]
    return ApproxReport.compare(near_one_eigs(n, rho)[ks], exact)
