import cmath
import math

import numpy as np
import pytest

from kmsspec.approx import (
    ApproxReport,
    large_eigs,
    large_eigs_report,
    near_one_eigs,
    near_one_report,
    regula_falsi_lambda,
    regula_falsi_mu,
    regula_falsi_report,
    vector_angle,
)
from kmsspec.errors import InvalidParameterError, KmsOverflowError
from kmsspec.matrix import KmsParams
from kmsspec.realspectrum import GridPoints, real_spectrum

PHASES = [3 * cmath.exp(2j * math.pi * k / 24) for k in range(24)]


class TestReport:
    def test_relative(self):
        r = ApproxReport.compare([1.1, 2.0], [1.0, 2.0])
        assert r.max_rel_error == pytest.approx(0.1)

    def test_tiny_exact_is_absolute(self):
        r = ApproxReport.compare([1e-3], [0.0])
        assert r.max_rel_error == pytest.approx(1e-3)

    def test_magnitudes(self):
        r = ApproxReport.compare([-2.0], [2.0], magnitudes=True)
        assert r.max_rel_error == 0


class TestLargeEigs:
    @pytest.mark.parametrize("rho", PHASES)
    def test_n10_all_phases(self, rho):
        assert large_eigs_report(10, rho).max_rel_error <= 6e-4

    def test_n2_crude(self):
        lam0, lam1, _, _ = large_eigs(2, 4.0)
        assert lam0 == pytest.approx(64 / 15)
        assert lam1 == pytest.approx(-64 / 15)

    def test_sign(self):
        lam0, lam1, _, _ = large_eigs(7, 2.5)
        assert lam1 < 0 < lam0

    def test_decay(self):
        assert large_eigs_report(14, 3.0).max_rel_error < large_eigs_report(10, 3.0).max_rel_error

    def test_vector_shape(self):
        _, _, y0, y1 = large_eigs(10, 3.0)
        exact = real_spectrum(KmsParams(10, 3.0)).pairs
        assert vector_angle(y0, exact[0].vector) <= 1e-3
        assert vector_angle(y1, exact[1].vector) <= 1e-3

    def test_vectors_normalized(self):
        _, _, y0, y1 = large_eigs(9, 1.5 + 1j)
        assert np.max(np.abs(y0)) == pytest.approx(1)
        assert np.max(np.abs(y1)) == pytest.approx(1)

    def test_domain(self):
        with pytest.raises(InvalidParameterError):
            large_eigs(5, 0.5)
        with pytest.raises(KmsOverflowError):
            large_eigs(1000, 3.0)


class TestRegulaFalsi:
    @pytest.mark.parametrize("n", [5, 10])
    def test_endpoints(self, n):
        g = GridPoints.for_n(n)
        for k in range(n):
            assert regula_falsi_mu(n, 0.0, k) == g.gamma[k]
            assert regula_falsi_mu(n, 1.0, k) == g.beta[k]

    @pytest.mark.parametrize("k", [0, 1])
    def test_hyperbolic_branch_rejected(self, k):
        with pytest.raises(InvalidParameterError):
            regula_falsi_mu(10, 3.0, k)

    def test_rejects_negative_rho(self):
        with pytest.raises(InvalidParameterError):
            regula_falsi_mu(10, -0.5, 3)

    @pytest.mark.parametrize(
        "rho, quoted",
        [(3.0, (0.028, 0.0071, 0.0018)), (0.3, (0.021, 0.0055, 0.0014))],
    )
    def test_error_decay(self, rho, quoted):
        errs = [regula_falsi_report(n, rho).max_rel_error for n in (10, 40, 160)]
        assert errs[0] > errs[1] > errs[2]
        for e, q in zip(errs, quoted):
            assert e <= 1.2 * q

    def test_quoted_examples(self):
        assert regula_falsi_report(10, 3.0).max_rel_error <= 0.028
        assert regula_falsi_report(40, 0.3).max_rel_error <= 0.0055

    def test_rho_one_limit(self):
        lam = regula_falsi_lambda(6, 1.0)
        assert lam[0] == 6
        np.testing.assert_allclose(lam[1:], 0, atol=1e-15)


class TestNearOne:
    def test_values(self):
        assert near_one_eigs(10, 0.98)[0] == pytest.approx(9.34)
        assert near_one_eigs(10, 1.02)[0] == pytest.approx(10.66)

    @pytest.mark.parametrize("rho, quoted", [(0.98, 0.0029), (1.02, 0.0028)])
    def test_perron_error(self, rho, quoted):
        err = near_one_report(10, rho, [0]).max_rel_error
        assert abs(err - quoted) <= 0.0002

    def test_exact_at_one(self):
        approx = near_one_eigs(8, 1.0)
        exact = real_spectrum(KmsParams(8, 1.0), vectors=False).eigenvalues
        np.testing.assert_array_equal(approx, [8, 0, 0, 0, 0, 0, 0, 0])
        np.testing.assert_allclose(approx, exact, atol=1e-12)

    def test_error_shrinks_near_one(self):
        assert near_one_report(10, 0.999).max_rel_error < near_one_report(10, 0.98).max_rel_error
