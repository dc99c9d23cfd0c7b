"""Which structural matrix classes K_n(rho) belongs to.

``classify_params`` answers from closed-form conditions on (n, rho);
``bruteforce_flag`` recomputes each property from its definition on the dense
matrix so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import InvalidParameterError, SizeLimitError
from .matrix import KmsParams, build_kms
from .oracle import MINOR_LIMIT, lu_det, oracle_eig, oracle_minors

BRUTEFORCE_LIMIT = 12


@dataclass(frozen=True)
class MatrixClassReport:
    positive: bool
    real_symmetric: bool
    hermitian: bool
    bounded_symbol: bool
    positive_definite: bool
    positive_semidefinite: bool
    normal: bool
    greens: bool
    totally_positive: bool
    oscillatory: bool

    def as_dict(self) -> dict:
        return asdict(self)


FLAGS = tuple(f.name for f in fields(MatrixClassReport))


def classify_params(p: KmsParams) -> MatrixClassReport:
    rho = p.rho
    real = p.is_real
    r = rho if real else None
    return MatrixClassReport(
        positive=real and r > 0,
        real_symmetric=real,
        hermitian=real,
        bounded_symbol=abs(rho) < 1,
        positive_definite=real and -1 < r < 1,
        positive_semidefinite=real and -1 <= r <= 1,
        normal=real or p.n == 2,
        greens=real and r != 0,
        totally_positive=real and 0 <= r <= 1,
        oscillatory=real and 0 < r < 1,
    )


def greens_factors(p: KmsParams) -> tuple[np.ndarray, np.ndarray]:
    """alpha_j = rho^-j and beta_j = rho^j (j = 1..n), so that entry (j, k) = alpha_min(j,k) * beta_max(j,k)."""
    if not p.is_real or p.rho == 0:
        raise InvalidParameterError("Green's factors exist only for real nonzero rho")
    j = np.arange(1, p.n + 1)
    return float(p.rho) ** (-j.astype(float)), float(p.rho) ** j.astype(float)


def greens_reconstruct(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    idx = np.arange(alpha.shape[0])
    lo = np.minimum(idx[:, None], idx[None, :])
    hi = np.maximum(idx[:, None], idx[None, :])
    return alpha[lo] * beta[hi]


# ------------------------------------------------------------ brute force

_TOL = 1e-10


def _is_real(a):
    return not np.iscomplexobj(a) or bool(np.all(a.imag == 0))


def _eigs_if_hermitian(a):
    if not _is_real(a):
        return None
    return np.real(oracle_eig(np.real(a)).eigenvalues)


def _totally_positive(a) -> bool:
    if not _is_real(a):
        return False
    a = np.real(a)
    scale = max(1.0, float(np.max(np.abs(a))))
    return all(oracle_minors(a, r) >= -_TOL * scale**r for r in range(1, a.shape[0] + 1))


def _greens_attempt(a) -> bool:
    """Try alpha_0 = 1, beta_j = a_0j, alpha_j = a_jj / beta_j and check every entry."""
    if not _is_real(a):
        return False
    a = np.real(a)
    beta = a[0].copy()
    if np.any(beta == 0):
        return False
    alpha = np.diag(a) / beta
    recon = greens_reconstruct(alpha, beta)
    return bool(np.all(np.abs(recon - a) <= _TOL * np.maximum(1.0, np.abs(a))))


def _bounded_symbol(p: KmsParams) -> bool:
    """Partial sums of sum_k |a_k| over a long tail: bounded iff the tail is negligible."""
    r = abs(p.rho)
    if r == 0:
        return True
    n1, n2 = 1 << 15, 1 << 16
    k = np.arange(n1, n2, dtype=float)
    with np.errstate(over="ignore"):
        tail = float(np.sum(np.exp(k * np.log(r))))
    return tail < 1e-8


def bruteforce_flag(p: KmsParams, flag: str) -> bool:
    """Recompute one class flag from its definition on the dense matrix."""
    if flag not in FLAGS:
        raise InvalidParameterError(f"unknown class {flag!r}")
    limit = MINOR_LIMIT if flag in ("totally_positive", "oscillatory") else BRUTEFORCE_LIMIT
    if p.n > limit:
        raise SizeLimitError(f"brute-force check of {flag} is capped at n={limit}")
    a = build_kms(p)
    scale = max(1.0, float(np.max(np.abs(a))))
    if flag == "positive":
        return _is_real(a) and bool(np.all(np.real(a) > 0))
    if flag == "real_symmetric":
        return _is_real(a) and bool(np.array_equal(a, a.T))
    if flag == "hermitian":
        return bool(np.array_equal(a, a.conj().T))
    if flag == "bounded_symbol":
        return _bounded_symbol(p)
    if flag == "normal":
        ah = a.conj().T
        return float(np.max(np.abs(a @ ah - ah @ a))) <= _TOL * scale * scale
    if flag in ("positive_definite", "positive_semidefinite"):
        eigs = _eigs_if_hermitian(a)
        if eigs is None:
            return False
        floor = _TOL * p.n * scale
        return bool(np.min(eigs) > floor) if flag == "positive_definite" else bool(np.min(eigs) >= -floor)
    if flag == "greens":
        return _greens_attempt(a)
    if flag == "totally_positive":
        return _totally_positive(a)
    # oscillatory: totally positive, nonsingular, positive first off-diagonals
    if not _totally_positive(a):
        return False
    a = np.real(a)
    off = np.concatenate([np.diag(a, 1), np.diag(a, -1)])
    return abs(lu_det(a)) > _TOL and bool(np.all(off > 0))


def verify_class_bruteforce(p: KmsParams, flag: str) -> bool:
    """True when the closed-form flag agrees with its brute-force recomputation."""
    return getattr(classify_params(p), flag) == bruteforce_flag(p, flag)
