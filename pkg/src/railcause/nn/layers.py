"""Stateful layer wrappers around the functional ops, for network assembly.

Layers cache whatever the backward pass needs during forward; a network
is just an ordered list of layers driven by the training loop.  Single
writer per layer instance: forward/backward pairs must not interleave
across threads.
"""

from __future__ import annotations

import numpy as np

from railcause.nn import ops
from railcause.nn.ops import GruParams


class Layer:
    """Base layer: parameter-free, identity semantics."""

    def params(self) -> dict[str, np.ndarray]:
        return {}

    def grads(self) -> dict[str, np.ndarray]:
        return {}

    def forward(self, x: np.ndarray, train: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class Dense(Layer):
    def __init__(self, d_in: int, d_out: int, rng: np.random.Generator):
        scale = 1.0 / np.sqrt(d_in)
        self.w = rng.uniform(-scale, scale, size=(d_in, d_out))
        self.b = np.zeros(d_out)
        self._x: np.ndarray | None = None
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)

    def params(self):
        return {"w": self.w, "b": self.b}

    def grads(self):
        return {"w": self.dw, "b": self.db}

    def forward(self, x, train=False, rng=None):
        self._x = x
        return ops.dense(x, self.w, self.b)

    def backward(self, grad_out):
        dx, self.dw, self.db = ops.dense_backward(self._x, self.w, grad_out)
        return dx


class Relu(Layer):
    def __init__(self):
        self._x: np.ndarray | None = None

    def forward(self, x, train=False, rng=None):
        self._x = x
        return ops.relu(x)

    def backward(self, grad_out):
        return ops.relu_backward(self._x, grad_out)


class Dropout(Layer):
    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")
        self.rate = rate
        self._mask: np.ndarray | None = None

    def forward(self, x, train=False, rng=None):
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        self._mask = ops.dropout_mask(x.shape, self.rate, rng)
        return x * self._mask

    def backward(self, grad_out):
        if self._mask is None:
            return grad_out
        return ops.dropout_backward(self._mask, grad_out)


class Conv1D(Layer):
    def __init__(self, n_filters: int, kernel_size: int, d_in: int, rng: np.random.Generator):
        scale = 1.0 / np.sqrt(kernel_size * d_in)
        self.kernels = rng.uniform(-scale, scale, size=(n_filters, kernel_size, d_in))
        self.bias = np.zeros(n_filters)
        self._x: np.ndarray | None = None
        self.dkernels = np.zeros_like(self.kernels)
        self.dbias = np.zeros_like(self.bias)

    def params(self):
        return {"kernels": self.kernels, "bias": self.bias}

    def grads(self):
        return {"kernels": self.dkernels, "bias": self.dbias}

    def forward(self, x, train=False, rng=None):
        self._x = x
        return ops.conv1d(x, self.kernels, self.bias)

    def backward(self, grad_out):
        dx, self.dkernels, self.dbias = ops.conv1d_backward(self._x, self.kernels, grad_out)
        return dx


class MaxPool1D(Layer):
    def __init__(self, size: int, stride: int | None = None):
        self.size = size
        self.stride = size if stride is None else stride
        self._x_shape: tuple[int, ...] | None = None
        self._argmax: np.ndarray | None = None

    def forward(self, x, train=False, rng=None):
        self._x_shape = x.shape
        out, self._argmax = ops.maxpool1d_with_argmax(x, self.size, self.stride)
        return out

    def backward(self, grad_out):
        return ops.maxpool1d_backward(self._x_shape, self._argmax, grad_out, self.size, self.stride)


class Flatten(Layer):
    def __init__(self):
        self._shape: tuple[int, ...] | None = None

    def forward(self, x, train=False, rng=None):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1) if x.ndim == 3 else x.reshape(-1)

    def backward(self, grad_out):
        return grad_out.reshape(self._shape)


class Gru(Layer):
    """GRU over a full sequence.

    With ``return_sequences`` the layer emits every hidden state (for
    stacking); otherwise only the final state (for a classifier head).
    """

    def __init__(self, d_in: int, d_h: int, rng: np.random.Generator, return_sequences: bool = True):
        self.d_in = d_in
        self.d_h = d_h
        self.return_sequences = return_sequences
        w_scale = 1.0 / np.sqrt(d_in)
        u_scale = 1.0 / np.sqrt(d_h)
        def w():
            return rng.uniform(-w_scale, w_scale, size=(d_in, d_h))
        def u():
            return rng.uniform(-u_scale, u_scale, size=(d_h, d_h))
        self.p = GruParams(
            Wz=w(), Uz=u(), bz=np.zeros(d_h),
            Wr=w(), Ur=u(), br=np.zeros(d_h),
            Wh=w(), Uh=u(), bh=np.zeros(d_h),
        )
        self.dp = GruParams.zeros(d_in, d_h)
        self._caches: list | None = None
        self._seq_len: int = 0

    def params(self):
        return self.p.arrays()

    def grads(self):
        return self.dp.arrays()

    def forward(self, x, train=False, rng=None):
        hs, self._caches = ops.gru_layer_forward(x, self.p)
        self._seq_len = x.shape[-2]
        if self.return_sequences:
            return hs
        return hs[..., -1, :]

    def backward(self, grad_out):
        if self.return_sequences:
            dhs = grad_out
        else:
            dhs = np.zeros((*grad_out.shape[:-1], self._seq_len, self.d_h))
            dhs[..., -1, :] = grad_out
        dxs, _, dp = ops.gru_layer_backward(self._caches, self.p, dhs)
        self.dp = dp
        return dxs


class EmbeddingLookup(Layer):
    """Maps integer index sequences to rows of an embedding matrix.

    When frozen (the default) the matrix exposes no parameters and is
    never touched by the optimizer.
    """

    def __init__(self, vectors: np.ndarray, trainable: bool = False):
        self.vectors = vectors
        self.trainable = trainable
        self._indices: np.ndarray | None = None
        self.dvectors = np.zeros_like(vectors) if trainable else None

    def params(self):
        return {"vectors": self.vectors} if self.trainable else {}

    def grads(self):
        return {"vectors": self.dvectors} if self.trainable else {}

    def forward(self, x, train=False, rng=None):
        self._indices = x
        return self.vectors[x]

    def backward(self, grad_out):
        if self.trainable:
            self.dvectors = np.zeros_like(self.vectors)
            np.add.at(self.dvectors, self._indices, grad_out)
        return np.zeros(self._indices.shape)


class Network:
    """An ordered stack of layers producing class logits."""

    def __init__(self, layers: list[Layer]):
        self.layers = layers

    def forward(self, x: np.ndarray, train: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x, train=train, rng=rng)
        return x

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            grad_out = layer.backward(grad_out)
        return grad_out

    def params(self) -> dict[str, np.ndarray]:
        out = {}
        for i, layer in enumerate(self.layers):
            for name, arr in layer.params().items():
                out[f"layer{i}.{name}"] = arr
        return out

    def grads(self) -> dict[str, np.ndarray]:
        out = {}
        for i, layer in enumerate(self.layers):
            for name, arr in layer.grads().items():
                out[f"layer{i}.{name}"] = arr
        return out

    def param_count(self) -> int:
        return sum(int(a.size) for a in self.params().values())

    def set_params(self, values: dict[str, np.ndarray]) -> None:
        current = self.params()
        for name, arr in values.items():
            if name not in current:
                raise KeyError(f"unknown parameter {name!r}")
            if current[name].shape != arr.shape:
                raise ValueError(f"shape mismatch for {name!r}")
            current[name][...] = arr
