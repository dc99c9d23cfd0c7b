import numpy as np
import pytest
from hypothesis import given, strategies as st

from kmsspec.classify import (
    FLAGS,
    bruteforce_flag,
    classify_params,
    greens_factors,
    greens_reconstruct,
    verify_class_bruteforce,
)
from kmsspec.errors import InvalidParameterError, SizeLimitError
from kmsspec.matrix import KmsParams, build_kms

GRID = [-1.5, -1, -0.5, 0, 0.3, 0.9, 1, 1.2, 2, 0.5j, 1 + 1j]


def test_real_inside_unit_interval():
    r = classify_params(KmsParams(5, 0.5))
    assert all(r.as_dict().values())


def test_two_by_two_complex_is_normal():
    r = classify_params(KmsParams(2, 0.3 + 0.4j))
    assert r.normal and not r.hermitian and not r.real_symmetric


def test_large_real():
    r = classify_params(KmsParams(5, 3.0))
    assert r.greens and r.normal and r.positive
    assert not (r.totally_positive or r.positive_definite or r.bounded_symbol)


@pytest.mark.parametrize(
    "rho, pd, psd, tp, osc",
    [(-1.0, False, True, False, False), (0.0, True, True, True, False), (1.0, False, True, True, False)],
)
def test_boundaries(rho, pd, psd, tp, osc):
    r = classify_params(KmsParams(4, rho))
    assert (r.positive_definite, r.positive_semidefinite, r.totally_positive, r.oscillatory) == (pd, psd, tp, osc)
    assert r.greens == (rho != 0)


def _implications(r):
    return (
        (not r.oscillatory or r.totally_positive)
        and (not r.totally_positive or r.positive_semidefinite)
        and (not r.positive_definite or r.positive_semidefinite)
    )


@given(
    n=st.integers(2, 40),
    re=st.floats(-5, 5, allow_nan=False),
    im=st.sampled_from([0.0, 0.5, -2.0]),
)
def test_implication_chain(n, re, im):
    rho = re if im == 0 else complex(re, im)
    assert _implications(classify_params(KmsParams(n, rho)))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("rho", GRID)
@pytest.mark.parametrize("flag", FLAGS)
def test_grid_agrees_with_definitions(n, rho, flag):
    assert verify_class_bruteforce(KmsParams(n, rho), flag)


@pytest.mark.parametrize(
    "n, rho, flag, expected",
    [(4, 0.6, "totally_positive", True), (3, 0.5j, "normal", False), (2, 1 - 2j, "normal", True)],
)
def test_bruteforce_examples(n, rho, flag, expected):
    p = KmsParams(n, rho)
    assert bruteforce_flag(p, flag) is expected
    assert verify_class_bruteforce(p, flag)


def test_size_caps():
    with pytest.raises(SizeLimitError):
        verify_class_bruteforce(KmsParams(7, 0.5), "totally_positive")
    with pytest.raises(SizeLimitError):
        verify_class_bruteforce(KmsParams(13, 0.5), "normal")
    assert verify_class_bruteforce(KmsParams(12, 0.5), "positive_definite")
    with pytest.raises(InvalidParameterError):
        bruteforce_flag(KmsParams(3, 0.5), "unitary")


class TestGreens:
    def test_example(self):
        a, b = greens_factors(KmsParams(3, 2.0))
        np.testing.assert_array_equal(a, [0.5, 0.25, 0.125])
        np.testing.assert_array_equal(b, [2, 4, 8])
        assert a[0] * b[1] == 2

    def test_reconstruction(self):
        p = KmsParams(5, 0.7)
        np.testing.assert_allclose(greens_reconstruct(*greens_factors(p)), build_kms(p), rtol=1e-15)

    @pytest.mark.parametrize("rho", [-0.4, 1.0, 3.0])
    def test_reconstruction_other_rho(self, rho):
        p = KmsParams(6, rho)
        np.testing.assert_allclose(greens_reconstruct(*greens_factors(p)), build_kms(p), rtol=1e-13)

    @pytest.mark.parametrize("rho", [0.0, 0.5j])
    def test_rejected(self, rho):
        with pytest.raises(InvalidParameterError):
            greens_factors(KmsParams(3, rho))
