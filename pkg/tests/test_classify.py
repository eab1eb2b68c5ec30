import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import C1, C2
from qsubspace import Dataset
from qsubspace.classify import fit, predict, predict_batch, predict_knn
from qsubspace.errors import DimensionError, ModelError
from qsubspace.represent import Mode

EXAMPLE_LABELS = ["1", "1", "1", "1", "2", "2", "2", "2", "1"]


def test_fit_flat_example(example_1d):
    model = fit(example_1d, "flat1d")
    assert model.labels == ("1", "2")
    assert model.bank.dims == (8,)
    np.testing.assert_allclose(model.reps[1].flat.amplitudes[3:7], 0.5, atol=1e-12)


def test_fit_rejects_single_class(two_point_2d):
    with pytest.raises(ModelError):
        fit(Dataset.from_classes({"a": two_point_2d}), "nonseparable")


def test_fit_flat_needs_one_feature(two_point_2d):
    data = Dataset.from_classes({"a": two_point_2d, "b": [[3.0, 3.0]]})
    with pytest.raises(ModelError):
        fit(data, "flat1d")


def test_fit_gaussian_nonseparable_dims():
    rng = np.random.default_rng(3)
    data = Dataset.from_classes({"a": rng.normal(1, 1, (8, 2)), "b": rng.normal(-2, 1, (8, 2))})
    model = fit(data, Mode.NONSEPARABLE)
    d1, d2 = model.bank.dims
    assert all(r.product.dim == d1 * d2 for r in model.reps)


@pytest.mark.parametrize("mode", ["flat1d", "separable", "nonseparable"])
def test_predict_integers_example(example_1d, mode):
    model = fit(example_1d, mode)
    preds = [predict(model, [x]) for x in range(-4, 5)]
    assert [p.label for p in preds] == EXAMPLE_LABELS
    assert [x for x, p in zip(range(-4, 5), preds) if p.tie] == [-4, -3, 4]


def test_predict_tie_at_four(example_1d):
    p = predict(fit(example_1d, "flat1d"), [4])
    assert p.tie and p.label == "1"
    assert p.scores == {"1": 0.0, "2": 0.0}


def test_predict_listing_boundary_example(example_1d):
    # raw boundary: same labels, only 4 is a tie because |0> belongs to class 1
    model = fit(example_1d, "flat1d", boundary="raw")
    preds = [predict(model, [x]) for x in range(-4, 5)]
    assert [p.label for p in preds] == EXAMPLE_LABELS
    assert [x for x, p in zip(range(-4, 5), preds) if p.tie] == [4]
    assert preds[0].scores["1"] == pytest.approx(1 / math.sqrt(6), abs=1e-12)


def test_predict_learning_element_of_singleton_class():
    data = Dataset.from_classes({"a": [[0.0, 0.0], [0.2, 1.1]], "b": [[5.0, 5.0]]})
    model = fit(data, "nonseparable")
    p = predict(model, [5.0, 5.0])
    assert p.label == "b" and p.scores["b"] == pytest.approx(1.0) and not p.tie


def test_predict_dimension_mismatch(example_1d):
    model = fit(example_1d, "flat1d")
    with pytest.raises(DimensionError):
        predict(model, [1.0, 2.0])
    with pytest.raises(DimensionError):
        predict_batch(model, np.zeros((3, 2)))


def test_random_tie_policy_deterministic(example_1d):
    model = fit(example_1d, "flat1d", tie_policy="random", tie_seed=11)
    p1 = predict(model, [4])
    assert p1.tie
    assert all(predict(model, [4.2]).label == p1.label for _ in range(5))
    labels = {predict(fit(example_1d, "flat1d", tie_policy="random", tie_seed=s), [4]).label for s in range(40)}
    assert labels == {"1", "2"}
    assert predict_batch(model, [[4], [4.2]])[0].label == p1.label


def test_knn(example_1d):
    model = fit(example_1d, "flat1d", store_elements=True)
    assert predict_knn(model, [C2[2]], 1).label == "2"
    assert predict_knn(model, [0], 1).label == "2"
    # x = 4 lies on the upper sentinel, orthogonal to every stored ket
    p = predict_knn(model, [4], 8)
    assert p.tie and p.label == "1"
    assert p.scores == {"1": 0.5, "2": 0.5}


def test_knn_separable_partial_overlap():
    data = Dataset.from_classes({"a": [[0, 0], [0, 3]], "b": [[3, 3], [3, 0]]})
    model = fit(data, "separable", store_elements=True)
    # (0, 0.2) matches a's first element on both features
    assert predict_knn(model, [0, 0.2], 1).label == "a"
    # (3, 0.1) matches b's second element exactly
    assert predict_knn(model, [3, 0.1], 1).label == "b"


def test_knn_errors(example_1d):
    with pytest.raises(ModelError):
        predict_knn(fit(example_1d, "flat1d"), [0], 1)
    model = fit(example_1d, "flat1d", store_elements=True)
    with pytest.raises(ModelError):
        predict_knn(model, [0], 0)
    with pytest.raises(ModelError):
        predict_knn(model, [0], 9)


# properties

cls_points = st.lists(
    st.tuples(st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)), min_size=1, max_size=8
)


def _two_class(a, b):
    return Dataset.from_classes({"a": a, "b": b})


@given(cls_points, cls_points, st.sampled_from(["separable", "nonseparable"]),
       st.lists(st.tuples(st.floats(-8, 8), st.floats(-8, 8)), min_size=1, max_size=10))
@settings(max_examples=60)
def test_predict_properties(a, b, mode, xs):
    model = fit(_two_class(a, b), mode)
    batch = predict_batch(model, xs)
    for i, x in enumerate(xs):
        p = predict(model, x)
        q = predict(model, x)
        assert (p.label, p.scores, p.tie) == (q.label, q.scores, q.tie)
        best = max(p.scores.values())
        assert p.scores[p.label] == best
        assert p.tie == (sum(s >= best - 1e-12 for s in p.scores.values()) > 1)
        bp = batch[i]
        assert (bp.label, bp.scores, bp.tie) == (p.label, p.scores, p.tie)


@given(cls_points, cls_points, st.sampled_from(["separable", "nonseparable"]),
       st.tuples(st.floats(-8, 8), st.floats(-8, 8)), st.tuples(st.floats(-0.49, 0.49), st.floats(-0.49, 0.49)))
@settings(max_examples=60)
def test_quantization_cell_constancy(a, b, mode, x, jitter):
    model = fit(_two_class(a, b), mode)
    y = (x[0] + jitter[0], x[1] + jitter[1])
    if model.bank.indices(x) != model.bank.indices(y):
        return
    p, q = predict(model, x), predict(model, y)
    assert (p.label, p.scores, p.tie) == (q.label, q.scores, q.tie)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8), st.lists(st.floats(-5, 5), min_size=1, max_size=8),
       st.lists(st.floats(-8, 8), min_size=1, max_size=20))
@settings(max_examples=60)
def test_one_feature_label_equivalence(a, b, xs):
    data = Dataset.from_classes({"a": a, "b": b})
    X = np.array(xs).reshape(-1, 1)
    seqs = [predict_batch(fit(data, m), X).class_index.tolist() for m in Mode]
    assert seqs[0] == seqs[1] == seqs[2]
