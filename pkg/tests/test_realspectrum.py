import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import residual
from kmsspec.chebpoly import ZeroType
from kmsspec.errors import InvalidParameterError, PoleError
from kmsspec.matrix import KmsParams, build_kms, kms_determinant, xi
from kmsspec.oracle import oracle_eig
from kmsspec.realspectrum import (
    EigenClass,
    GridPoints,
    MuRoot,
    RootKind,
    SpectrumResult,
    classify_by_modulus,
    classify_eigenvalue,
    eigenvector_from_mu,
    extraordinary_count,
    hyp_c,
    hyp_s,
    lambda_from_mu,
    ordering_chain,
    real_spectrum,
    solve_mu,
    trig_c,
    trig_s,
)


def ratio(n, root):
    odd = root.k % 2 == 1
    if root.kind is RootKind.TRIGONOMETRIC:
        return (trig_s if odd else trig_c)(n, root.value)
    return (hyp_s if odd else hyp_c)(n, root.value)


class TestRatioFunctions:
    def test_s_limit_at_zero(self):
        assert abs(trig_s(5, 1e-8) - 1.5) <= 1e-6
        assert trig_s(5, 0.0) == 1.5
        assert hyp_s(5, 0.0) == 1.5

    def test_c_at_beta(self):
        assert trig_c(6, 2 * math.pi / 6) == pytest.approx(1, abs=1e-12)

    def test_hyperbolic_growth(self):
        assert 0.999 <= hyp_s(5, 10.0) / math.exp(10) <= 1.001

    def test_hyperbolic_matches_direct(self):
        n, x = 7, 0.4
        assert hyp_c(n, x) == pytest.approx(math.cosh(x * (n + 1) / 2) / math.cosh(x * (n - 1) / 2))
        assert hyp_s(n, x) == pytest.approx(math.sinh(x * (n + 1) / 2) / math.sinh(x * (n - 1) / 2))

    def test_no_overflow(self):
        assert np.isfinite(hyp_c(10**5, 5.0))

    @pytest.mark.parametrize("n", [4, 7])
    def test_endpoint_values(self, n):
        g = GridPoints.for_n(n)
        for k in range(2, n):
            f = trig_s if k % 2 else trig_c
            assert f(n, g.beta[k]) == pytest.approx(1, abs=1e-12)
            assert abs(f(n, g.gamma[k])) <= 1e-12

    def test_pole(self):
        with pytest.raises(PoleError):
            trig_c(5, math.pi / 4)


class TestGrid:
    @pytest.mark.parametrize("n", [2, 3, 8, 31])
    def test_interleaving(self, n):
        g = GridPoints.for_n(n)
        chain_a = [0.0]
        for k in range(1, n):
            chain_a += [g.alpha[k], g.beta[k]]
        assert chain_a[1] == 0
        assert all(a < b for a, b in zip(chain_a[1:], chain_a[2:])) and chain_a[-1] < math.pi
        chain_b = []
        for k in range(n):
            chain_b += [g.beta[k], g.gamma[k]]
        assert chain_b[0] == 0
        assert all(a < b for a, b in zip(chain_b, chain_b[1:])) and chain_b[-1] < math.pi


class TestSolveMu:
    def test_special_values(self):
        g = GridPoints.for_n(5)
        for k in range(5):
            assert solve_mu(5, 0.0, k).value == g.gamma[k]
            assert solve_mu(5, 1.0, k).value == g.beta[k]
        assert solve_mu(5, 1.5, 1).value == 0

    def test_negative_rejected(self):
        with pytest.raises(InvalidParameterError):
            solve_mu(5, -0.5, 1)

    @pytest.mark.parametrize("n", range(2, 13))
    @pytest.mark.parametrize("rho", [0.01, 0.3, 0.9, 0.999, 1.001, 1.2, 1.5, 2.0, 3.0, 4.0])
    def test_residual_small_n(self, n, rho):
        for k in range(n):
            root = solve_mu(n, rho, k)
            assert abs(ratio(n, root) - rho) <= 1e-13 * (1 + rho)

    @pytest.mark.parametrize("n", [40, 97])
    @pytest.mark.parametrize("rho", [0.3, 0.999, 1.001, 2.0, 10.0, 100.0])
    def test_root_is_ulp_accurate(self, n, rho):
        # for larger n the ratio is too steep for a 1e-13 residual; require a sign change within 8 ulps instead
        for k in range(n):
            root = solve_mu(n, rho, k)
            if abs(ratio(n, root) - rho) <= 1e-13 * (1 + rho):
                continue
            s = 8 * np.spacing(root.value)
            lo, hi = max(root.value - s, root.bracket[0]), min(root.value + s, root.bracket[1])
            left = ratio(n, MuRoot(k, root.kind, lo, root.bracket)) - rho
            right = ratio(n, MuRoot(k, root.kind, hi, root.bracket)) - rho
            assert left * right <= 0, (k, root)

    @pytest.mark.parametrize("n", [3, 6, 11])
    def test_branch_selection(self, n):
        x = xi(n)
        assert solve_mu(n, 0.5, 0).kind is RootKind.TRIGONOMETRIC
        assert solve_mu(n, 1.01, 0).kind is RootKind.HYPERBOLIC
        assert solve_mu(n, (1 + x) / 2, 1).kind is RootKind.TRIGONOMETRIC
        assert solve_mu(n, x + 0.01, 1).kind is RootKind.HYPERBOLIC
        assert solve_mu(n, 50.0, n - 1).kind is RootKind.TRIGONOMETRIC or n == 2

    @pytest.mark.parametrize("n", [4, 9])
    def test_brackets(self, n):
        g = GridPoints.for_n(n)
        for rho in (0.0, 0.2, 0.7, 1.0):
            for k in range(n):
                m = solve_mu(n, rho, k)
                assert g.beta[k] <= m.value <= g.gamma[k]
        for rho in (1.0001, 1.7, 25.0):
            for k in range(2, n):
                m = solve_mu(n, rho, k)
                assert g.alpha[k] < m.value <= g.beta[k]


class TestLambda:
    def test_examples(self):
        assert lambda_from_mu(2, 0.5, solve_mu(2, 0.5, 0)) == pytest.approx(1.5)
        assert lambda_from_mu(5, 1.0, solve_mu(5, 1.0, 0)) == 5
        assert lambda_from_mu(5, 1.5, solve_mu(5, 1.5, 1)) == -5

    def test_two_by_two_hyperbolic(self):
        res = real_spectrum(KmsParams(2, 4.0))
        assert res.pairs[0].lam == pytest.approx(5)
        assert res.pairs[1].lam == pytest.approx(-3)
        assert sum(p.klass is EigenClass.EXTRAORDINARY for p in res.pairs) == 2


class TestVectors:
    def test_linear_at_xi(self):
        y = eigenvector_from_mu(5, solve_mu(5, 1.5, 1))
        # [-4, -2, 0, 2, 4] after scaling to max |entry| 1 with a positive first entry
        np.testing.assert_allclose(y, [1, 0.5, 0, -0.5, -1], atol=1e-15)

    @pytest.mark.parametrize("n", [2, 5, 12])
    def test_ones_at_rho_one(self, n):
        np.testing.assert_array_equal(eigenvector_from_mu(n, solve_mu(n, 1.0, 0)), np.ones(n))

    def test_skew_with_small_residual(self):
        root = solve_mu(6, 0.5, 3)
        y = eigenvector_from_mu(6, root)
        np.testing.assert_allclose(y, -y[::-1], atol=1e-15)
        assert residual(6, 0.5, lambda_from_mu(6, 0.5, root), y) <= 1e-10

    def test_hyperbolic_large_n_finite(self):
        res = real_spectrum(KmsParams(3000, 1.01), vectors=False)
        y = eigenvector_from_mu(3000, res.pairs[0].mu)
        assert np.all(np.isfinite(y)) and np.max(np.abs(y)) == 1


class TestSpectrum:
    def test_examples(self):
        assert np.all(real_spectrum(KmsParams(5, 0.0)).eigenvalues == 1)
        np.testing.assert_array_equal(real_spectrum(KmsParams(5, 1.0)).eigenvalues, [5, 0, 0, 0, 0])

    def test_complex_rejected(self):
        with pytest.raises(InvalidParameterError):
            real_spectrum(KmsParams(3, 0.5j))

    @pytest.mark.parametrize("n", range(2, 13))
    @pytest.mark.parametrize("rho", [0, 0.1, 0.5, 0.9, 0.99, 1, 1.01, "xi", 1.5, 2, 3, -0.7, -2, -1, "-xi"])
    def test_matches_oracle(self, n, rho):
        rho = {"xi": xi(n), "-xi": -xi(n)}.get(rho, rho)
        p = KmsParams(n, rho)
        got = np.sort(real_spectrum(p, vectors=False).eigenvalues)
        ref = oracle_eig(build_kms(p)).eigenvalues
        assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1.0)) <= 1e-8

    @pytest.mark.parametrize("n", [2, 3, 10, 57, 200])
    @pytest.mark.parametrize("rho", [-4.0, -1.3, -0.6, 0.0, 0.25, 0.95, 1.0, 1.04, 2.5, 4.0])
    def test_residuals_and_identities(self, n, rho):
        res = real_spectrum(KmsParams(n, rho))
        d = res.diagnostics
        assert d["max_residual"] <= 1e-8
        assert d["trace_error"] <= 1e-9
        if math.isfinite(kms_determinant(KmsParams(n, rho))) and kms_determinant(KmsParams(n, rho)) != 0:
            assert d["det_error"] <= 1e-8

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 13])
    def test_ordering_chains(self, n):
        x = xi(n)
        for rho in (0.0, 0.2, 0.5, 0.97, 1.0, 1.02, (1 + x) / 2, x, x + 0.3, 3.5, 12.0, -0.5, -(1 + x) / 2, -5.0):
            assert ordering_chain(n, rho, real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues), rho

    @pytest.mark.parametrize("n", [3, 6, 9])
    def test_lemma_bounds(self, n):
        for rho in np.linspace(0, 1, 11):
            assert real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues[0] <= n + 1e-12
        for rho in np.linspace(1, xi(n), 11):
            assert real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues[1] >= -n - 1e-12

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_continuity(self, n):
        for rho in (0.5, 1.0, xi(n), 2.0):
            a = real_spectrum(KmsParams(n, rho), vectors=False).eigenvalues
            for d in (1e-6, -1e-6):
                b = real_spectrum(KmsParams(n, rho + d), vectors=False).eigenvalues
                assert np.max(np.abs(a - b)) <= 1e-6 * 10 * n * n

    @pytest.mark.parametrize("n", [2, 3, 6, 7])
    @pytest.mark.parametrize("rho", [0.4, 1.3, 3.0, -0.4, -1.3, -3.0])
    def test_parity_and_type(self, n, rho):
        for pr in real_spectrum(KmsParams(n, rho)).pairs:
            skew = np.allclose(pr.vector, -pr.vector[::-1], atol=1e-12)
            sym = np.allclose(pr.vector, pr.vector[::-1], atol=1e-12)
            assert skew != sym
            assert (pr.zero_type is ZeroType.TYPE1) == skew
            if rho > 0:
                assert skew == (pr.k % 2 == 1)

    @pytest.mark.parametrize("n", [2, 4, 9, 16])
    def test_extraordinary_counts_and_modulus(self, n):
        x = xi(n)
        for rho in (0.0, 0.3, 1.0, 1.01, (1 + x) / 2, x, x + 0.01, 3.0, -0.3, -1.2, -(x + 1)):
            res = real_spectrum(KmsParams(n, rho), vectors=False)
            klasses = [p.klass for p in res.pairs]
            assert klasses.count(EigenClass.EXTRAORDINARY) == extraordinary_count(n, rho)
            for p in res.pairs:
                assert classify_eigenvalue(n, rho, p.lam) is p.klass
                assert classify_by_modulus(n, p.lam) is p.klass

    def test_distinct(self):
        for rho in (0.3, 0.999, 1.001, 2.0, -0.8):
            lam = np.sort(real_spectrum(KmsParams(12, rho), vectors=False).eigenvalues)
            assert np.min(np.diff(lam)) > 0

    def test_large_n(self):
        res = real_spectrum(KmsParams(100_000, 0.7), vectors=False)
        assert len(res.pairs) == 100_000
        assert res.diagnostics["trace_error"] <= 1e-9

    def test_overflow_flagged(self):
        res = real_spectrum(KmsParams(2000, 3.0), vectors=False)
        assert res.diagnostics["overflow"]
        assert math.isinf(res.pairs[0].lam) and res.pairs[0].lam > 0
        assert math.isinf(res.pairs[1].lam) and res.pairs[1].lam < 0
        assert np.all(np.isfinite(res.eigenvalues[2:]))

    def test_json_round_trip(self):
        for p in (KmsParams(6, 1.7), KmsParams(4, -0.3), KmsParams(3, 1.0)):
            res = real_spectrum(p)
            again = SpectrumResult.from_dict(json.loads(json.dumps(res.to_dict())))
            assert again == res

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 30), st.floats(-5, 5))
    def test_property_residual(self, n, rho):
        res = real_spectrum(KmsParams(n, rho))
        assert res.diagnostics["max_residual"] <= 1e-8
        assert ordering_chain(n, rho, res.eigenvalues)
