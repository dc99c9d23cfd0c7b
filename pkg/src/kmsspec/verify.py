"""Self-verification suite behind ``kmsspec verify``.

Each check returns a :class:`CheckResult`; nothing raises out of
:func:`run_checks`. ``inject_fault`` perturbs one coefficient of p_2n so the
polynomial checks must fail, which guards the suite against vacuous passes.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from .approx import large_eigs_report, near_one_report, regula_falsi_report
from .chebpoly import ZeroType, classify_zero, poly_c, poly_p2n, poly_s
from .classify import FLAGS, verify_class_bruteforce
from .complexspectrum import complex_spectrum, double_eigen_loci, pair_inverse
from .matrix import KmsParams, build_kms, xi
from .oracle import match_multisets, oracle_eig, oracle_poly_roots
from .realspectrum import real_spectrum


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _p2n(n, rho, fault):
    p = poly_p2n(n, rho)
    if fault:
        c = p.coef.astype(complex).copy()
        c[1] += 1e-3
        p = type(p)(c)
    return p


def _real_grid(ns, rhos_for):
    worst = 0.0
    for n in ns:
        for rho in rhos_for(n):
            p = KmsParams(n, rho)
            got = np.sort(real_spectrum(p, vectors=False).eigenvalues)
            ref = np.sort(np.real(oracle_eig(build_kms(p)).eigenvalues))
            err = np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1.0))
            worst = max(worst, float(err))
    return worst


def _complex_grid(ns, rhos):
    worst = 0.0
    for n in ns:
        for rho in rhos:
            p = KmsParams(n, rho)
            got = np.array([pr.lam for pr in complex_spectrum(p)])
            ref = oracle_eig(build_kms(p)).eigenvalues
            perm = match_multisets(got, ref)
            err = np.max(np.abs(got - ref[perm]) / np.maximum(np.abs(ref[perm]), 1.0))
            worst = max(worst, float(err))
    return worst


def check_regime_values(fault):
    r15 = real_spectrum(KmsParams(5, 1.5), vectors=False).eigenvalues
    r1 = real_spectrum(KmsParams(5, 1.0), vectors=False).eigenvalues
    r0 = real_spectrum(KmsParams(5, 0.0), vectors=False).eigenvalues
    ok = abs(r15[1] + 5) <= 1e-9 and np.allclose(r1, [5, 0, 0, 0, 0], rtol=0, atol=1e-9) and np.all(r0 == 1)
    return ok, f"lambda_1(1.5)={r15[1]:.12g}"


def check_real_oracle(level):
    ns = range(2, 7) if level == "quick" else range(2, 13)

    def rhos(n):
        return [0, 0.1, 0.5, 0.9, 0.99, 1, 1.01, xi(n), 1.5, 2, 3, -0.7, -2]

    worst = _real_grid(ns, rhos)
    return worst <= 1e-8, f"max rel error {worst:.2e}"


def check_complex_oracle(level):
    ns = range(2, 6) if level == "quick" else range(2, 11)
    worst = _complex_grid(ns, [0.5j, 0.3 + 0.8j, 1.5 + 0.5j, -1 + 2j, 2 * math.sqrt(2) * 1j])
    return worst <= 1e-7, f"max rel error {worst:.2e}"


def check_p2n_factorization(fault):
    worst = 0.0
    for n in range(2, 9):
        for rho in (0.4, 2.5, 0.3 + 0.8j):
            z2m1 = type(poly_s(n, rho))([-1, 0, 1])
            lhs = poly_s(n, rho) * poly_c(n, rho)
            rhs = z2m1 * _p2n(n, rho, fault)
            worst = max(worst, float(np.max(np.abs(lhs.coef - rhs.coef))))
    return worst <= 1e-12, f"max coefficient gap {worst:.2e}"


def check_inverse_pairs(fault):
    for n in range(2, 8):
        for rho in (0.4, 2.5, 0.3 + 0.8j, -1 + 2j):
            zeros = oracle_poly_roots(_p2n(n, rho, fault))
            try:
                pair_inverse(zeros, tol=1e-8)
            except Exception as exc:  # noqa: BLE001 - reported as a failed check
                return False, f"n={n} rho={rho}: {exc}"
    return True, "all zeros pair as z, 1/z"


def check_type_counts(fault):
    for n in range(2, 11):
        for rho in (0.3 + 0.8j, 2.5, -0.6, 1.5 + 0.5j):
            zeros = oracle_poly_roots(_p2n(n, rho, fault))
            try:
                types = [classify_zero(n, rho, z) for z in zeros]
            except Exception as exc:  # noqa: BLE001
                return False, f"n={n} rho={rho}: {exc}"
            t1 = sum(t is ZeroType.TYPE1 for t in types)
            if t1 != 2 * (n // 2) or len(types) - t1 != 2 * ((n + 1) // 2):
                return False, f"n={n} rho={rho}: {t1} type-1 zeros"
    return True, "2 floor(n/2) type-1, 2 ceil(n/2) type-2"


def check_classes(level):
    ns = (2, 3) if level == "quick" else (2, 3, 4, 5)
    grid = [-1.5, -1, -0.5, 0, 0.3, 0.9, 1, 1.2, 2, 0.5j, 1 + 1j]
    bad = [(n, rho, f) for n in ns for rho in grid for f in FLAGS if not verify_class_bruteforce(KmsParams(n, rho), f)]
    return not bad, f"{len(bad)} disagreements" + (f", first {bad[0]}" if bad else "")


def check_double_loci(level):
    cases = [(3, ZeroType.TYPE2)]
    if level == "full":
        cases += [(n, t) for n in range(4, 9) for t in (ZeroType.TYPE1, ZeroType.TYPE2)]
    count = 0
    for n, t in cases:
        for loc in double_eigen_loci(n, t):
            eigs = oracle_eig(build_kms(KmsParams(n, loc.rho))).eigenvalues
            hits = int(np.sum(np.abs(eigs + n) <= 1e-5))
            if hits != 2:
                return False, f"n={n} rho={loc.rho}: {hits} eigenvalues near -n"
            count += 1
    return True, f"{count} loci verified"


def check_approx(level):
    near = max(near_one_report(10, r, [0]).max_rel_error for r in (0.98, 1.02))
    if near > 0.0035:
        return False, f"near-one error {near:.4%}"
    if level == "quick":
        return True, f"near-one error {near:.4%}"
    large = max(large_eigs_report(10, 3 * cmath.exp(2j * math.pi * k / 24)).max_rel_error for k in range(24))
    rf = [regula_falsi_report(n, 3.0).max_rel_error for n in (10, 40, 160)]
    ok = large <= 6e-4 and rf[0] <= 0.028 * 1.2 and rf[0] > rf[1] > rf[2]
    return ok, f"large-rho {large:.4%}, regula falsi {', '.join(f'{e:.3%}' for e in rf)}"


def run_checks(level: str = "quick", inject_fault: bool = False) -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    checks = [
        ("regime-values", lambda: check_regime_values(inject_fault)),
        ("real-oracle-grid", lambda: check_real_oracle(level)),
        ("complex-oracle-grid", lambda: check_complex_oracle(level)),
        ("p2n-factorization", lambda: check_p2n_factorization(inject_fault)),
        ("p2n-inverse-pairs", lambda: check_inverse_pairs(inject_fault)),
        ("zero-type-counts", lambda: check_type_counts(inject_fault)),
        ("class-predicates", lambda: check_classes(level)),
        ("double-eigenvalue-loci", lambda: check_double_loci(level)),
        ("approximation-errors", lambda: check_approx(level)),
    ]
    out = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out
