import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import C1, C2
from qsubspace.errors import QuantizationError
from qsubspace.quantize import Quantizer, fit_bank, fit_quantizer, nint, quantize, quantize_to_ket
from qsubspace.statevec import basis_ket


@pytest.fixture
def q_example():
    return fit_quantizer(C1 + C2)


@pytest.mark.parametrize("c,expected", [(-2.24697, -2), (0.5, 0), (1.5, 2), (-0.5, 0), (2.5, 2), (3.05605, 3), (-1.9828, -2)])
def test_nint(c, expected):
    assert nint(c) == expected


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_nint_rejects_nonfinite(bad):
    with pytest.raises(QuantizationError):
        nint(bad)


def test_fit_example(q_example):
    assert (q_example.q_min, q_example.q_max, q_example.dim) == (-2, 4, 8)


def test_fit_small():
    q = fit_quantizer([0.0])
    assert (q.q_min, q.q_max, q.dim) == (0, 1, 3)
    q = fit_quantizer([-0.4, 0.4])
    assert (q.q_min, q.q_max, q.dim) == (0, 1, 3)


def test_fit_prose_convention():
    q = fit_quantizer(C1 + C2, dim_convention="prose")
    assert (q.q_min, q.q_max, q.dim) == (-2, 3, 7)


def test_fit_empty():
    with pytest.raises(QuantizationError):
        fit_quantizer([])


def test_quantizer_invariants_checked():
    with pytest.raises(QuantizationError):
        Quantizer(0, 1, 4)
    with pytest.raises(QuantizationError):
        Quantizer(2, 1, 1)


@pytest.mark.parametrize("x,expected", [(-0.0344292, 3), (-4, 0), (4, 7), (0.836746, 4), (100.0, 7), (-2.6, 0)])
def test_quantize_example(q_example, x, expected):
    assert quantize(q_example, x) == expected


def test_quantize_example_learning_set(q_example):
    # rounded boundary: every learning value is interior
    assert [quantize(q_example, x) for x in C1] == [1, 2, 2, 1]
    assert [quantize(q_example, x) for x in C2] == [4, 5, 6, 3]


def test_quantize_raw_boundary_matches_listing():
    # the listing compares the raw value with qMin, so -2.24697 < -2 hits sentinel 0
    q = fit_quantizer(C1 + C2, boundary="raw")
    assert [quantize(q, x) for x in C1] == [0, 2, 2, 1]
    assert [quantize(q, x) for x in C2] == [4, 5, 6, 3]
    assert quantize(q, -2.0) == 1 and quantize(q, -2.01) == 0
    assert quantize(q, 4.0) == 7 and quantize(q, 4.4) == 7


def test_quantize_to_ket(q_example):
    assert quantize_to_ket(q_example, 0.836746).allclose(basis_ket(4, 8), atol=0)
    assert quantize_to_ket(fit_quantizer([0.0]), 0.2).allclose(basis_ket(1, 3), atol=0)
    assert quantize_to_ket(q_example, 100.0).allclose(basis_ket(7, 8), atol=0)


def test_quantize_rejects_nonfinite(q_example):
    with pytest.raises(QuantizationError):
        quantize(q_example, math.nan)
    with pytest.raises(QuantizationError):
        q_example.indices([0.0, math.inf])


def test_fit_bank_one_feature(example_1d):
    bank = fit_bank(example_1d)
    assert bank.p == 1
    assert bank[0] == Quantizer(-2, 4, 8)


def test_fit_bank_two_point(two_point_2d):
    bank = fit_bank(two_point_2d)
    assert bank.p == 2
    for j, q in enumerate(bank.quantizers):
        assert q.dim >= 2
        i0 = quantize(q, two_point_2d[0][j])
        i1 = quantize(q, two_point_2d[1][j])
        assert 1 <= i0 < i1 <= q.dim - 2


def test_fit_bank_constant_feature():
    bank = fit_bank([[5.2, 1.0], [5.2, 3.0], [5.2, -1.0]])
    assert bank[0].dim == 3


def test_fit_bank_errors():
    with pytest.raises(QuantizationError):
        fit_bank([])
    with pytest.raises(QuantizationError):
        fit_bank([[1.0, 2.0], [3.0]])


def test_batch_matches_scalar(q_example):
    xs = np.linspace(-6, 6, 241)
    for boundary in ("rounded", "raw"):
        q = Quantizer(q_example.q_min, q_example.q_max, q_example.dim, boundary)
        assert q.indices(xs).tolist() == [quantize(q, x) for x in xs]


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.lists(finite, min_size=1, max_size=20), st.sampled_from(["rounded", "raw"]), finite, finite)
def test_quantize_total_monotone(values, boundary, x, y):
    q = fit_quantizer(values, boundary=boundary)
    a, b = sorted((x, y))
    ia, ib = quantize(q, a), quantize(q, b)
    assert 0 <= ia <= ib <= q.dim - 1


@given(st.lists(finite, min_size=1, max_size=20))
def test_learning_values_interior(values):
    q = fit_quantizer(values)
    assert all(1 <= quantize(q, v) <= q.dim - 2 for v in values)


@given(st.lists(finite, min_size=1, max_size=20), st.floats(1e-9, 1e3))
def test_sentinels_reachable(values, gap):
    # q_min may sit up to 0.5 below min(values), and q_min - 0.5 itself rounds to q_min
    q = fit_quantizer(values)
    assert quantize(q, q.q_min - 0.5 - gap) == 0
    assert quantize(q, min(values) - 1 - gap) == 0
    assert quantize(q, q.q_max + gap) == q.dim - 1


@given(st.lists(finite, min_size=1, max_size=20))
def test_refit_deterministic(values):
    assert fit_quantizer(values) == fit_quantizer(list(values))
