#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from functions.errors import DimensionError, NumericError, ParameterError
from functions.numerics import tensor as tn
from functions.numerics.gradcheck import check_gradients
from functions.numerics.spectral import dft, idft
from functions.numerics.tensor import ComputationTape, Tensor, no_recording, recording


def leaf(values):
    return Tensor(np.asarray(values, dtype=np.float64), requires_grad=True)


def test_matmul_values():
    b = np.array([[5.0, 6.0], [7.0, 8.0]])
    assert np.array_equal(tn.matmul(Tensor(np.eye(2)), Tensor(b)).data, b)
    out = tn.matmul(Tensor([[1.0, 2.0], [3.0, 4.0]]), Tensor(b))
    assert np.array_equal(out.data, [[19.0, 22.0], [43.0, 50.0]])


def test_matmul_shape_error_names_both_shapes():
    with pytest.raises(DimensionError) as info:
        tn.matmul(Tensor(np.zeros((2, 3))), Tensor(np.zeros((4, 2))))
    assert "(2, 3)" in str(info.value) and "(4, 2)" in str(info.value)


def test_matmul_gradient_is_ones_times_b_transpose(rng):
    a, b = leaf(rng.normal(size=(3, 4))), Tensor(rng.normal(size=(4, 2)))
    with recording():
        tn.sum(tn.matmul(a, b)).backward()
    assert np.allclose(a.grad, np.ones((3, 2)) @ b.data.T)


def test_matmul_associativity(rng):
    a, b, c = (Tensor(rng.normal(size=s)) for s in [(3, 4), (4, 5), (5, 2)])
    left = tn.matmul(tn.matmul(a, b), c).data
    right = tn.matmul(a, tn.matmul(b, c)).data
    assert np.allclose(left, right, rtol=1e-9, atol=0)


def test_softmax_examples():
    assert np.allclose(tn.softmax(Tensor([0.0, 0.0])).data, [0.5, 0.5])
    assert np.allclose(tn.softmax(Tensor([1000.0, 0.0])).data, [1.0, 0.0])
    assert np.allclose(tn.softmax(Tensor([1.0, 2.0, 3.0])).data, [0.09003, 0.24473, 0.66524], atol=1e-5)


def test_softmax_rows_and_shift_invariance(rng):
    x = rng.normal(size=(5, 7))
    out = tn.softmax(Tensor(x)).data
    assert np.all(out >= 0)
    assert np.allclose(out.sum(axis=-1), 1.0, atol=1e-12)
    shifted = tn.softmax(Tensor(x + rng.normal(size=(5, 1)) * 10)).data
    assert np.allclose(out, shifted, atol=1e-12)


def test_softmax_nan_raises():
    with pytest.raises(NumericError):
        tn.softmax(Tensor([np.nan, 0.0]))


def test_layer_norm_examples():
    gamma, beta = Tensor(np.ones(3)), Tensor(np.zeros(3))
    assert np.allclose(tn.layer_norm(Tensor([[2.0, 2.0, 2.0]]), gamma, beta).data, 0.0)
    out = tn.layer_norm(Tensor([[-1.0, 0.0, 1.0]]), gamma, beta, eps=1e-12).data
    assert np.allclose(out, [[-1.2247, 0.0, 1.2247]], atol=1e-4)
    shifted = tn.layer_norm(Tensor([[-1.0, 0.5, 3.0]]), gamma, Tensor(np.full(3, 0.7))).data
    assert np.isclose(shifted.mean(), 0.7)


def test_dft_cases(rng):
    spectrum = dft(np.full(8, 3.0))
    assert np.isclose(spectrum[0], 24.0)
    assert np.allclose(spectrum[1:], 0.0)
    impulse = np.zeros(16)
    impulse[0] = 1.0
    assert np.allclose(np.abs(dft(impulse)), 1.0)
    x = rng.normal(size=64)
    assert np.max(np.abs(idft(dft(x)) - x)) < 1e-9
    long = rng.normal(size=1024)
    assert np.max(np.abs(idft(dft(long), real=True) - long)) < 1e-9


PRIMITIVES = {
    "add": lambda a, b: tn.add(a, b),
    "sub": lambda a, b: tn.sub(a, b),
    "mul": lambda a, b: tn.mul(a, b),
    "div": lambda a, b: tn.div(a, tn.add(tn.exp(b), 1.0)),
    "matmul": lambda a, b: tn.matmul(a, tn.transpose(b, (1, 0))),
    "exp": lambda a, b: tn.exp(a),
    "log": lambda a, b: tn.log(tn.add(tn.mul(a, a), 1.0)),
    "tanh": lambda a, b: tn.tanh(a),
    "gelu": lambda a, b: tn.gelu(a),
    "softmax": lambda a, b: tn.mul(tn.softmax(a), b),
    "log_softmax": lambda a, b: tn.mul(tn.log_softmax(a), b),
    "mean": lambda a, b: tn.mean(tn.mul(a, b), axis=0, keepdims=True),
    "reshape": lambda a, b: tn.mul(tn.reshape(a, (4, 3)), tn.reshape(b, (4, 3))),
    "getitem": lambda a, b: tn.getitem(a, (slice(1, 3), [0, 2, 2])),
    "concat": lambda a, b: tn.concat([a, tn.mul(b, 2.0)], axis=1),
    "broadcast": lambda a, b: tn.add(a, tn.getitem(b, (slice(0, 1),))),
}


@pytest.mark.parametrize("name", sorted(PRIMITIVES))
def test_primitive_gradients(name, rng):
    theta = {"a": leaf(rng.normal(size=(3, 4))), "b": leaf(rng.normal(size=(3, 4)))}
    weights = Tensor(rng.normal(size=PRIMITIVES[name](theta["a"], theta["b"]).shape))

    def f(p):
        return tn.sum(tn.mul(PRIMITIVES[name](p["a"], p["b"]), weights))

    assert check_gradients(f, theta) < 1e-4


def test_layer_norm_and_cross_entropy_gradients(rng):
    theta = {"x": leaf(rng.normal(size=(4, 5))), "g": leaf(rng.normal(size=5)), "b": leaf(rng.normal(size=5))}
    labels = np.array([0, 2, 4, 1])

    def f(p):
        return tn.cross_entropy(tn.layer_norm(p["x"], p["g"], p["b"]), labels)

    assert check_gradients(f, theta) < 1e-4


def test_check_gradients_oracles(rng):
    theta = {"w": leaf(rng.normal(size=6))}
    assert check_gradients(lambda p: tn.sum(tn.mul(p["w"], p["w"])), theta) < 1e-7
    assert check_gradients(lambda p: tn.mul(tn.sum(p["w"]), 0.0), theta) == 0.0


def test_check_gradients_constant_function():
    theta = {"w": leaf([1.0, 2.0])}
    assert check_gradients(lambda p: Tensor(3.0), theta) == 0.0
    assert theta["w"].grad is None


def test_check_gradients_two_layer_net(rng):
    theta = {"w1": leaf(rng.normal(size=(5, 8)) * 0.5), "w2": leaf(rng.normal(size=(8, 3)) * 0.5)}
    x, y = Tensor(rng.normal(size=(6, 5))), rng.integers(0, 3, size=6)

    def f(p):
        return tn.cross_entropy(tn.matmul(tn.tanh(tn.matmul(x, p["w1"])), p["w2"]), y)

    assert check_gradients(f, theta) < 1e-4


def test_check_gradients_rejects_bad_eps_and_non_finite():
    theta = {"w": leaf([1.0, 2.0])}
    with pytest.raises(ParameterError):
        check_gradients(lambda p: tn.sum(p["w"]), theta, eps=1e-2)
    with pytest.raises(NumericError):
        check_gradients(lambda p: tn.sum(tn.log(tn.mul(p["w"], 0.0))), theta)


def test_backward_populates_every_reachable_leaf(rng):
    a, b, unused = leaf(rng.normal(size=3)), leaf(rng.normal(size=3)), leaf(rng.normal(size=3))
    with recording() as tape:
        tn.sum(tn.mul(tn.exp(a), b)).backward()
    assert a.grad is not None and a.grad.shape == a.shape
    assert b.grad is not None and b.grad.shape == b.shape
    assert unused.grad is None
    assert len(tape) > 0
    tape.clear()
    assert len(tape) == 0


def test_inference_records_nothing(rng):
    a = leaf(rng.normal(size=3))
    with no_recording():
        out = tn.exp(a)
    assert out._tape is None
    tape = ComputationTape()
    with recording(tape):
        tn.exp(Tensor(rng.normal(size=3)))
    assert len(tape) == 0


def test_scalar_operand_keeps_float32():
    x = Tensor(np.ones(3, dtype=np.float32))
    assert tn.mul(x, 0.5).dtype == np.float32
    assert tn.add(1.0, x).dtype == np.float32
