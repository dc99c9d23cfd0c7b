"""All eigenpairs of K_n(rho) for real rho in O(n) memory.

Each eigenvalue is indexed by k and comes from a parameter mu_k that is the
unique root of a trigonometric (ordinary eigenvalues) or hyperbolic
(extraordinary eigenvalues) equation on a known interval:

    c(mu) = cos(mu (n+1)/2) / cos(mu (n-1)/2) = rho    (k even)
    s(mu) = sin(mu (n+1)/2) / sin(mu (n-1)/2) = rho    (k odd)

with the interval endpoints built from alpha_k = (k-1) pi/(n-1),
beta_k = k pi/n and gamma_k = (k+1) pi/(n+1). All n roots are bracketed and
bisected simultaneously, so the cost per eigenvalue is O(1) vectorised
function evaluations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .chebpoly import ZeroType
from .errors import BracketError, ConsistencyError, InvalidParameterError, KmsOverflowError, PoleError
from .matrix import KmsParams, build_kms, signature, symbol_range, xi

_EPS = np.finfo(float).eps
_SNAP = 1e-14
RESIDUAL_LIMIT = 2000


class RootKind(str, enum.Enum):
    TRIGONOMETRIC = "trigonometric"
    HYPERBOLIC = "hyperbolic"


class EigenClass(str, enum.Enum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"


@dataclass(frozen=True, eq=False)
class GridPoints:
    """alpha_k, beta_k, gamma_k indexed by k = 0..n-1 (alpha_0 is undefined and stored as nan)."""

    n: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    @classmethod
    def for_n(cls, n: int) -> "GridPoints":
        k = np.arange(n, dtype=float)
        alpha = (k - 1) * np.pi / (n - 1)
        alpha[0] = np.nan
        return cls(n, alpha, k * np.pi / n, (k + 1) * np.pi / (n + 1))


@dataclass(frozen=True)
class MuRoot:
    """mu_k, or x_k with mu_k = i x_k when ``kind`` is hyperbolic."""

    k: int
    kind: RootKind
    value: float
    bracket: tuple[float, float]


@dataclass(eq=False)
class EigenPair:
    k: int
    lam: float
    mu: MuRoot
    vector: np.ndarray | None
    zero_type: ZeroType
    klass: EigenClass

    def __eq__(self, other):
        if not isinstance(other, EigenPair):
            return NotImplemented
        same_vec = (self.vector is None and other.vector is None) or (
            self.vector is not None and other.vector is not None and np.array_equal(self.vector, other.vector)
        )
        return (
            self.k == other.k
            and _same_float(self.lam, other.lam)
            and self.mu == other.mu
            and same_vec
            and self.zero_type == other.zero_type
            and self.klass == other.klass
        )


def _same_float(a, b):
    return a == b or (math.isnan(a) and math.isnan(b))


@dataclass(eq=False)
class SpectrumResult:
    params: KmsParams
    pairs: list[EigenPair]
    diagnostics: dict = field(default_factory=dict)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])

    def __eq__(self, other):
        if not isinstance(other, SpectrumResult):
            return NotImplemented
        return self.params == other.params and self.pairs == other.pairs and _diag_eq(self.diagnostics, other.diagnostics)

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "rho": self.params.rho,
            "pairs": [
                {
                    "k": p.k,
                    "lambda": p.lam,
                    "mu": {
                        "k": p.mu.k,
                        "kind": p.mu.kind.value,
                        "value": p.mu.value,
                        "bracket": list(p.mu.bracket),
                    },
                    "vector": None if p.vector is None else p.vector.tolist(),
                    "zero_type": p.zero_type.value,
                    "klass": p.klass.value,
                }
                for p in self.pairs
            ],
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectrumResult":
        pairs = []
        for d in data["pairs"]:
            m = d["mu"]
            mu = MuRoot(int(m["k"]), RootKind(m["kind"]), float(m["value"]), tuple(float(b) for b in m["bracket"]))
            vec = None if d["vector"] is None else np.asarray(d["vector"], dtype=float)
            pairs.append(
                EigenPair(int(d["k"]), float(d["lambda"]), mu, vec, ZeroType(d["zero_type"]), EigenClass(d["klass"]))
            )
        return cls(KmsParams(int(data["n"]), float(data["rho"])), pairs, dict(data["diagnostics"]))


def _diag_eq(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    for key in a:
        x, y = a[key], b[key]
        if isinstance(x, float) and isinstance(y, float):
            if not _same_float(x, y):
                return False
        elif x != y:
            return False
    return True


# ------------------------------------------------------------ ratio functions


def _require_nonzero(den, what):
    if np.any(np.abs(den) < 1e-14):
        raise PoleError(f"{what}: denominator vanishes")


def trig_c(n: int, mu):
    """cos(mu (n+1)/2) / cos(mu (n-1)/2)."""
    mu = np.asarray(mu, dtype=float)
    den = np.cos(mu * (n - 1) / 2)
    _require_nonzero(den, "trig_c")
    out = np.cos(mu * (n + 1) / 2) / den
    return out[()] if out.ndim == 0 else out


def trig_s(n: int, mu):
    """sin(mu (n+1)/2) / sin(mu (n-1)/2), equal to (n+1)/(n-1) at mu = 0."""
    mu = np.asarray(mu, dtype=float)
    at_zero = mu == 0
    den = np.sin(mu * (n - 1) / 2)
    _require_nonzero(np.where(at_zero, 1.0, den), "trig_s")
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(at_zero, xi(n), np.sin(mu * (n + 1) / 2) / np.where(at_zero, 1.0, den))
    return out[()] if out.ndim == 0 else out


def hyp_c(n: int, x):
    """cosh(x (n+1)/2) / cosh(x (n-1)/2) in overflow-free form, x >= 0."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.exp(x) * (1 + np.exp(-(n + 1) * x)) / (1 + np.exp(-(n - 1) * x))
    return out[()] if out.ndim == 0 else out


def hyp_s(n: int, x):
    """sinh(x (n+1)/2) / sinh(x (n-1)/2) in overflow-free form, x >= 0."""
    x = np.abs(np.asarray(x, dtype=float))
    at_zero = x == 0
    safe = np.where(at_zero, 1.0, x)
    out = np.where(at_zero, xi(n), np.exp(safe) * np.expm1(-(n + 1) * safe) / np.expm1(-(n - 1) * safe))
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------------ bisection


def _bisect(func, lo, hi, max_iter: int = 250):
    """Vectorised bisection; every (lo_i, hi_i) must straddle a sign change of func."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo, fhi = func(lo), func(hi)
    bad = (np.sign(flo) == np.sign(fhi)) & (flo != 0) & (fhi != 0)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise BracketError(f"no sign change on [{lo[i]!r}, {hi[i]!r}] (f={flo[i]!r}, {fhi[i]!r})")
    exact_lo, exact_hi = flo == 0, fhi == 0
    lo0, hi0 = lo.copy(), hi.copy()
    s_lo = np.sign(flo)
    settled = exact_lo | exact_hi  # overwritten below, no need to converge
    for i in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        # an exact hit lands on the hi side; later midpoints then close lo onto it
        left = fm * s_lo > 0
        np.copyto(lo, mid, where=left)
        np.copyto(hi, mid, where=~left)
        if i >= 40 and np.all(settled | (hi - lo <= 2 * _EPS * np.maximum(np.abs(lo), np.abs(hi)))):
            break
    root = 0.5 * (lo + hi)
    root[exact_lo] = lo0[exact_lo]
    root[exact_hi] = hi0[exact_hi]
    return root


def _trig_residual(n, rho, odd):
    """num(mu) - rho * den(mu): same zeros as the ratio equation, but no poles."""

    def f(mu):
        a, b = mu * (n + 1) / 2, mu * (n - 1) / 2
        return np.where(odd, np.sin(a) - rho * np.sin(b), np.cos(a) - rho * np.cos(b))

    return f


def _hyperbolic_upper(func, rho):
    x = max(1.0, math.log(rho) + 1.0)
    while func(np.array([x]))[0] < 0:
        x *= 2
    return x


def _solve_all(n: int, rho: float, ks: np.ndarray):
    """Roots mu_k for rho >= 0. Returns (kind_is_hyp, value, lo, hi) arrays aligned with ks."""
    g = GridPoints.for_n(n)
    ks = np.asarray(ks, dtype=int)
    m = ks.shape[0]
    hyp = np.zeros(m, bool)
    val = np.empty(m)
    lo = np.empty(m)
    hi = np.empty(m)
    x_n = xi(n)
    odd = ks % 2 == 1

    if rho <= _SNAP or abs(rho - 1) <= _SNAP:
        lo[:] = g.beta[ks]
        hi[:] = g.gamma[ks]
        val[:] = g.gamma[ks] if rho <= _SNAP else g.beta[ks]
        return hyp, val, lo, hi

    if rho < 1:
        lo[:] = g.beta[ks]
        hi[:] = g.gamma[ks]
        val[:] = _bisect(_trig_residual(n, rho, odd), lo, hi)
        return hyp, val, lo, hi

    rest = ks >= 2
    if np.any(rest):
        lo[rest] = g.alpha[ks[rest]]
        hi[rest] = g.beta[ks[rest]]
        val[rest] = _bisect(_trig_residual(n, rho, odd[rest]), lo[rest], hi[rest])

    for i in np.flatnonzero(ks == 0):
        f = lambda x: hyp_c(n, x) - rho  # noqa: E731
        top = _hyperbolic_upper(f, rho)
        hyp[i], lo[i], hi[i] = True, 0.0, top
        val[i] = _bisect(f, [0.0], [top])[0]

    for i in np.flatnonzero(ks == 1):
        if abs(rho - x_n) <= _SNAP * x_n:
            lo[i], hi[i], val[i] = 0.0, g.beta[1], 0.0
        elif rho < x_n:
            f = lambda mu: trig_s(n, mu) - rho  # noqa: E731
            lo[i], hi[i] = 0.0, g.beta[1]
            val[i] = _bisect(f, [0.0], [g.beta[1]])[0]
        else:
            f = lambda x: hyp_s(n, x) - rho  # noqa: E731
            top = _hyperbolic_upper(f, rho)
            hyp[i], lo[i], hi[i] = True, 0.0, top
            val[i] = _bisect(f, [0.0], [top])[0]
    return hyp, val, lo, hi


def _snap(n: int, r: float) -> float:
    """Map |rho| within 1e-14 of 0, 1 or xi_n onto that value, where closed forms take over."""
    if r <= _SNAP:
        return 0.0
    if abs(r - 1) <= _SNAP:
        return 1.0
    x = xi(n)
    if abs(r - x) <= _SNAP * x:
        return x
    return r


def solve_mu(n: int, rho: float, k: int) -> MuRoot:
    """The unique root mu_k (or x_k) for rho >= 0."""
    if rho < 0:
        raise InvalidParameterError("solve_mu expects rho >= 0; use real_spectrum for negative rho")
    if not 0 <= k < n:
        raise InvalidParameterError(f"k must lie in 0..{n - 1}")
    hyp, val, lo, hi = _solve_all(n, float(rho), np.array([k]))
    kind = RootKind.HYPERBOLIC if hyp[0] else RootKind.TRIGONOMETRIC
    return MuRoot(k, kind, float(val[0]), (float(lo[0]), float(hi[0])))


# ------------------------------------------------------------ eigenvalues


def _lambda_arrays(n: int, rho: float, ks, hyp, val):
    """Both eigenvalue formulas plus a rounding-error bound for each."""
    sign = np.where(ks % 2 == 0, 1.0, -1.0)
    one_minus = (1 - rho) * (1 + rho)
    t = hyp
    with np.errstate(all="ignore"):
        half = np.where(t, np.sinh(val / 2) ** 2, np.sin(val / 2) ** 2)
        d_abs = (1 - rho) ** 2 + 4 * rho * half
        d = np.where(t, (1 - rho) ** 2 - 4 * rho * half, d_abs)
        lam14 = one_minus / d

        # sin(n mu)/sin(mu) or sinh(n x)/sinh(x); the hyperbolic one is evaluated in scaled form.
        x = np.where(t, val, 0.0)
        xs = np.where(x == 0, 1.0, x)
        sinh_ratio = np.where(x == 0, float(n), np.exp((n - 1) * xs) * np.expm1(-2 * n * xs) / np.expm1(-2 * xs))
        mu = np.where(t, 0.0, val)
        smu = np.sin(mu)
        sin_ratio = np.where(mu == 0, float(n), np.sin(n * mu) / np.where(mu == 0, 1.0, smu))
        lam15 = sign * np.where(t, sinh_ratio, sin_ratio)

        dmu = 8 * _EPS * n * np.maximum(np.abs(val), 1.0)
        dl14 = np.abs(lam14) * 2 * rho * np.where(t, np.sinh(val), np.abs(np.sin(val))) / np.abs(d)
        d_err = 4 * _EPS * d_abs
        err14 = np.abs(lam14) * (4 * _EPS + d_err / np.abs(d)) + dl14 * dmu
        # the denominator is lost to cancellation: this formula carries no information
        err14 = np.where(d_err < 0.5 * np.abs(d), err14, np.inf)
        coth_term = np.where(x < 1e-8, 0.0, np.abs(n / np.tanh(n * xs) - 1 / np.tanh(xs)))
        trig_slope = np.where(
            mu == 0, 0.0, np.abs(n * np.cos(n * mu) * smu - np.sin(n * mu) * np.cos(mu)) / np.where(mu == 0, 1.0, smu * smu)
        )
        dl15 = np.where(t, np.abs(lam15) * coth_term, trig_slope)
        err15 = dl15 * dmu + 4 * _EPS * n * np.abs(lam15) + np.where(t | (mu == 0), 0.0, _EPS / np.abs(np.where(mu == 0, 1.0, smu)))
    use14 = (~t) & (val != 0)
    lam = np.where(use14, lam14, lam15)
    return lam, lam14, lam15, err14 + err15


def _check_consistency(lam, lam14, lam15, err):
    finite = np.isfinite(lam14) & np.isfinite(lam15) & np.isfinite(err)
    gap = np.abs(lam14 - lam15)
    allowed = 1e-9 * np.abs(lam) + 10 * err + 1e-13
    bad = finite & (gap > allowed)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ConsistencyError(f"eigenvalue formulas disagree at index {i}: {lam14[i]!r} vs {lam15[i]!r}")
    with np.errstate(all="ignore"):
        rel = np.where(finite & (lam != 0), gap / np.where(lam == 0, 1.0, np.abs(lam)), 0.0)
    return float(np.max(rel, initial=0.0)), int(np.count_nonzero(~finite))


def lambda_from_mu(n: int, rho: float, root: MuRoot) -> float:
    """Eigenvalue lambda_k from its root; both closed forms are evaluated and must agree."""
    ks = np.array([root.k])
    hyp = np.array([root.kind is RootKind.HYPERBOLIC])
    lam, lam14, lam15, err = _lambda_arrays(n, _snap(n, abs(float(rho))), ks, hyp, np.array([root.value]))
    _check_consistency(lam, lam14, lam15, err)
    return float(lam[0])


# ------------------------------------------------------------ eigenvectors


def _normalize_real(y):
    y = y / np.max(np.abs(y))
    nz = np.flatnonzero(np.abs(y) > 1e-12)
    if nz.size and y[nz[0]] < 0:
        y = -y
    return y


def eigenvector_from_mu(n: int, root: MuRoot) -> np.ndarray:
    """sin/cos(mu (j - (n-1)/2)) for odd/even k (sinh/cosh for hyperbolic roots), max-|entry| = 1."""
    t = np.arange(n) - (n - 1) / 2
    odd = root.k % 2 == 1
    v = root.value
    if root.kind is RootKind.TRIGONOMETRIC:
        if v == 0:
            y = t.copy() if odd else np.ones(n)
        else:
            y = np.sin(v * t) if odd else np.cos(v * t)
    elif v * (n - 1) / 2 < 600:
        if v == 0:
            y = t.copy() if odd else np.ones(n)
        else:
            y = np.sinh(v * t) if odd else np.cosh(v * t)
    else:
        # cosh/sinh(x t) scaled by exp(-x (n-1)/2)
        j = np.arange(n)
        a, b = np.exp(v * (j - n + 1)), np.exp(-v * j)
        y = a - b if odd else a + b
    return _normalize_real(y)


# ------------------------------------------------------------ classification


def classify_eigenvalue(n: int, rho: float, lam: float) -> EigenClass:
    """Ordinary iff lam lies in the range of the (continued) symbol; all ordinary at rho = +-1."""
    rng = symbol_range(rho)
    return EigenClass.ORDINARY if rng.contains(lam) else EigenClass.EXTRAORDINARY


def classify_by_modulus(n: int, lam: float) -> EigenClass:
    """The |lam| > n test, equivalent to range membership for real rho."""
    return EigenClass.EXTRAORDINARY if abs(lam) > n * (1 + 1e-13) else EigenClass.ORDINARY


def extraordinary_count(n: int, rho: float) -> int:
    r = abs(rho)
    if r > xi(n):
        return 2
    if r > 1:
        return 1
    return 0


# ------------------------------------------------------------ assembly


def _zero_types(n: int, rho: float, ks):
    odd = ks % 2 == 1
    if rho < 0 and n % 2 == 0:
        odd = ~odd
    return [ZeroType.TYPE1 if o else ZeroType.TYPE2 for o in odd]


def _diagnostics(p: KmsParams, lam, pairs, gap, skipped):
    n, rho = p.n, p.rho
    diag = {"formula_gap": gap, "formula_check_skipped": skipped}
    finite = bool(np.all(np.isfinite(lam)))
    diag["overflow"] = not finite
    if finite:
        scale = max(float(n), float(np.sum(np.abs(lam))))
        diag["trace_error"] = float(abs(np.sum(lam) - n) / scale)
        target = 1.0 - rho * rho
        if target == 0:
            diag["det_error"] = float(abs(np.prod(lam)))
        elif np.any(lam == 0):
            diag["det_error"] = 1.0
        else:
            log_gap = np.sum(np.log(np.abs(lam))) - (n - 1) * math.log(abs(target))
            sign_ok = np.prod(np.sign(lam)) == np.sign(target) ** (n - 1)
            diag["det_error"] = float(abs(math.expm1(log_gap))) if sign_ok else math.inf
    else:
        diag["trace_error"] = math.nan
        diag["det_error"] = math.nan
    diag["max_residual"] = None
    if pairs and pairs[0].vector is not None and n <= RESIDUAL_LIMIT:
        try:
            kmat = build_kms(p)
        except KmsOverflowError:
            kmat = None
        if kmat is not None and finite:
            knorm = np.max(np.sum(np.abs(kmat), axis=1))
            ys = np.column_stack([pair.vector for pair in pairs])
            lams = np.array([pair.lam for pair in pairs])
            res = np.max(np.abs(kmat @ ys - ys * lams), axis=0) / (knorm * np.max(np.abs(ys), axis=0))
            worst = float(np.max(res))
            diag["max_residual"] = worst
    return diag


def real_spectrum(p: KmsParams, vectors: bool = True) -> SpectrumResult:
    """All n eigenpairs of K_n(rho), rho real, sorted by the index k."""
    if not p.is_real:
        raise InvalidParameterError("real_spectrum needs real rho; use complex_spectrum")
    n, rho = p.n, p.rho
    r = _snap(n, abs(rho))
    ks = np.arange(n)
    hyp, val, lo, hi = _solve_all(n, r, ks)
    lam, lam14, lam15, err = _lambda_arrays(n, r, ks, hyp, val)
    gap, skipped = _check_consistency(lam, lam14, lam15, err)
    types = _zero_types(n, rho, ks)
    flip = signature(n) if rho < 0 else None
    pairs = []
    for k in range(n):
        root = MuRoot(k, RootKind.HYPERBOLIC if hyp[k] else RootKind.TRIGONOMETRIC, float(val[k]), (float(lo[k]), float(hi[k])))
        vec = None
        if vectors:
            vec = eigenvector_from_mu(n, root)
            if flip is not None:
                vec = _normalize_real(flip * vec)
        klass = EigenClass.EXTRAORDINARY if hyp[k] else EigenClass.ORDINARY
        pairs.append(EigenPair(k, float(lam[k]), root, vec, types[k], klass))
    return SpectrumResult(p, pairs, _diagnostics(p, lam, pairs, gap, skipped))


def ordering_chain(n: int, rho: float, lam) -> bool:
    """The strict ordering of lambda_0..lambda_{n-1} (indexed by k) for the regime of |rho|."""
    lam = [float(v) for v in lam]
    r = abs(float(rho))
    x = xi(n)
    r = _snap(n, r)
    if r == 0:
        return all(v == 1 for v in lam)
    if r < 1:
        seq = [(1 - r) / (1 + r)] + lam[::-1] + [(1 + r) / (1 - r)]
        return seq[0] > 0 and _strict(seq)
    if r == 1:
        return all(v == 0 for v in lam[1:]) and lam[0] == n
    tail = lam[2:] + [-(r - 1) / (r + 1), 0.0, float(n), lam[0]]
    if r < x:
        return _strict([-(r + 1) / (r - 1), lam[1]] + tail)
    if r == x:
        return lam[1] == -n and _strict([lam[1]] + lam[2:] + [-1 / n, 0.0, float(n), lam[0]])
    return _strict([lam[1], -float(n), -(r + 1) / (r - 1)] + tail)


def _strict(seq) -> bool:
    return all(a < b for a, b in zip(seq, seq[1:]))
