"""Minimal reverse-mode automatic differentiation over numpy arrays.

Just enough graph ops for the denoiser: linear algebra, tanh, softmax,
max-pooling, and the pieces of a masked L1 loss. Gradient correctness is
pinned by finite-difference tests, not taken on faith.
"""

from __future__ import annotations

import contextlib

import numpy as np

_grad_enabled = True


@contextlib.contextmanager
def no_grad():
    """Disable graph recording, e.g. for sampling chains."""
    global _grad_enabled
    previous = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = previous


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents: tuple[Tensor, ...] = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        if self.data.size != 1:
            raise ValueError(f"item() needs a single element, shape is {self.data.shape}")
        return float(self.data.reshape(()))

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"


def _result(data, parents, backward_fn) -> Tensor:
    """Build an op result; skip graph bookkeeping when no parent needs grads."""
    out = Tensor(data)
    if _grad_enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward_fn
    return out


def _accumulate(t: Tensor, grad: np.ndarray) -> None:
    if not t.requires_grad:
        return
    if t.grad is None:
        t.grad = np.zeros_like(t.data)
    t.grad += grad


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for i, s in enumerate(shape):
        if s == 1 and grad.shape[i] != 1:
            grad = grad.sum(axis=i, keepdims=True)
    return grad


def _wrap(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def add(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def backward(out):
        _accumulate(a, _unbroadcast(out.grad, a.data.shape))
        _accumulate(b, _unbroadcast(out.grad, b.data.shape))

    return _result(a.data + b.data, (a, b), backward)


def sub(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def backward(out):
        _accumulate(a, _unbroadcast(out.grad, a.data.shape))
        _accumulate(b, _unbroadcast(-out.grad, b.data.shape))

    return _result(a.data - b.data, (a, b), backward)


def mul(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def backward(out):
        _accumulate(a, _unbroadcast(out.grad * b.data, a.data.shape))
        _accumulate(b, _unbroadcast(out.grad * a.data, b.data.shape))

    return _result(a.data * b.data, (a, b), backward)


def scale(a, s: float) -> Tensor:
    a = _wrap(a)

    def backward(out):
        _accumulate(a, out.grad * s)

    return _result(a.data * s, (a,), backward)


def matmul(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def backward(out):
        _accumulate(a, out.grad @ b.data.T)
        _accumulate(b, a.data.T @ out.grad)

    return _result(a.data @ b.data, (a, b), backward)


def transpose(a) -> Tensor:
    a = _wrap(a)

    def backward(out):
        _accumulate(a, out.grad.T)

    return _result(a.data.T, (a,), backward)


def tanh(a) -> Tensor:
    a = _wrap(a)
    y = np.tanh(a.data)

    def backward(out):
        _accumulate(a, out.grad * (1.0 - y * y))

    return _result(y, (a,), backward)


def softmax(a) -> Tensor:
    """Row softmax over the last axis, numerically shifted by the row max."""
    a = _wrap(a)
    shifted = a.data - a.data.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=-1, keepdims=True)

    def backward(out):
        inner = (out.grad * y).sum(axis=-1, keepdims=True)
        _accumulate(a, y * (out.grad - inner))

    return _result(y, (a,), backward)


def maxpool_rows(a) -> Tensor:
    """Column-wise max over axis 0, keepdims; grad flows to the first argmax."""
    a = _wrap(a)
    idx = a.data.argmax(axis=0)
    data = a.data[idx, np.arange(a.data.shape[1])][None, :]

    def backward(out):
        g = np.zeros_like(a.data)
        g[idx, np.arange(a.data.shape[1])] = out.grad[0]
        _accumulate(a, g)

    return _result(data, (a,), backward)


def absolute(a) -> Tensor:
    a = _wrap(a)

    def backward(out):
        _accumulate(a, out.grad * np.sign(a.data))

    return _result(np.abs(a.data), (a,), backward)


def total(a) -> Tensor:
    a = _wrap(a)

    def backward(out):
        _accumulate(a, np.full_like(a.data, float(out.grad)))

    return _result(a.data.sum(), (a,), backward)


def mean(a) -> Tensor:
    a = _wrap(a)
    n = a.data.size

    def backward(out):
        _accumulate(a, np.full_like(a.data, float(out.grad) / n))

    return _result(a.data.mean(), (a,), backward)


def narrow(a, axis: int, start: int, size: int) -> Tensor:
    a = _wrap(a)
    index = [slice(None)] * a.data.ndim
    index[axis] = slice(start, start + size)
    index = tuple(index)

    def backward(out):
        g = np.zeros_like(a.data)
        g[index] = out.grad
        _accumulate(a, g)

    return _result(a.data[index], (a,), backward)


def concat(tensors, axis: int = -1) -> Tensor:
    tensors = [_wrap(t) for t in tensors]
    sizes = [t.data.shape[axis] for t in tensors]

    def backward(out):
        offset = 0
        for t, s in zip(tensors, sizes):
            index = [slice(None)] * out.grad.ndim
            index[axis] = slice(offset, offset + s)
            _accumulate(t, out.grad[tuple(index)])
            offset += s

    return _result(np.concatenate([t.data for t in tensors], axis=axis), tensors, backward)


def backward(out: Tensor) -> None:
    """Backpropagate from a scalar output through the recorded graph."""
    if out.data.size != 1:
        raise ValueError("backward requires a scalar output")
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(out, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad:
                stack.append((p, False))
    out.grad = np.ones_like(out.data)
    for node in reversed(order):
        if node._backward is not None:
            node._backward(node)


def zero_grads(tensors) -> None:
    for t in tensors:
        t.grad = None
