"""Differentiable array operations with hand-derived backward passes.

Every forward op here has a matching backward that computes exact
gradients; the test suite validates each pair against central finite
differences in double precision.  Ops are shape-polymorphic: functions
documented for a single sample (e.g. an L x D sequence) also accept a
leading batch dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic sigmoid."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def relu(x: np.ndarray) -> np.ndarray:
    """Elementwise max(0, x)."""
    return np.maximum(x, 0.0)


def relu_backward(x: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    """Pass gradient where x > 0; the subgradient at exactly 0 is 0."""
    return grad_out * (x > 0)


def softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    """Softmax with max-subtraction for overflow safety."""
    z = np.asarray(z, dtype=np.float64)
    m = z.max(axis=axis, keepdims=True)
    e = np.exp(z - m)
    return e / e.sum(axis=axis, keepdims=True)


def cross_entropy(probs: np.ndarray, target: int | np.ndarray) -> float:
    """Negative log probability of the target class.

    For a 1-D probability vector ``target`` is a class index; for a 2-D
    batch it is an index array and the mean loss is returned.
    """
    probs = np.asarray(probs)
    if probs.ndim == 1:
        t = int(target)
        if not 0 <= t < probs.shape[0]:
            raise ValueError(f"target {t} out of range for {probs.shape[0]} classes")
        return float(-np.log(probs[t]))
    targets = np.asarray(target, dtype=np.int64)
    if targets.min() < 0 or targets.max() >= probs.shape[-1]:
        raise ValueError("target out of range")
    picked = probs[np.arange(probs.shape[0]), targets]
    return float(-np.log(picked).mean())


def softmax_cross_entropy(logits: np.ndarray, target: int | np.ndarray) -> tuple[float, np.ndarray]:
    """Fused softmax + cross-entropy.

    Returns (loss, dlogits) where dlogits is probs - onehot(target),
    divided by the batch size when logits are batched (mean loss).
    """
    probs = softmax(logits, axis=-1)
    if probs.ndim == 1:
        loss = cross_entropy(probs, target)
        d = probs.copy()
        d[int(target)] -= 1.0
        return loss, d
    targets = np.asarray(target, dtype=np.int64)
    loss = cross_entropy(probs, targets)
    d = probs.copy()
    d[np.arange(probs.shape[0]), targets] -= 1.0
    return loss, d / probs.shape[0]


def dense(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Affine map x @ w + b."""
    if x.shape[-1] != w.shape[0]:
        raise ValueError(f"dense shape mismatch: x {x.shape} vs w {w.shape}")
    return x @ w + b


def dense_backward(
    x: np.ndarray, w: np.ndarray, grad_out: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of dense() for x, w, and b."""
    dx = grad_out @ w.T
    x2 = x.reshape(-1, w.shape[0])
    g2 = grad_out.reshape(-1, w.shape[1])
    dw = x2.T @ g2
    db = g2.sum(axis=0)
    return dx, dw, db


def dropout_mask(shape: tuple[int, ...], rate: float, rng: np.random.Generator) -> np.ndarray:
    """Inverted-dropout mask: zeros with probability ``rate``, survivors
    scaled by 1/(1-rate) so inference needs no rescaling."""
    if not 0.0 <= rate < 1.0:
        raise ValueError("dropout rate must lie in [0, 1)")
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def dropout(
    x: np.ndarray, rate: float, mode: str = "train", rng: np.random.Generator | None = None
) -> np.ndarray:
    """Apply inverted dropout in train mode; identity in infer mode."""
    if mode == "infer":
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")
        return x
    if mode != "train":
        raise ValueError(f"unknown dropout mode {mode!r}")
    if rng is None:
        raise ValueError("train-mode dropout needs an rng")
    return x * dropout_mask(x.shape, rate, rng)


def dropout_backward(mask: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    """Backward masks exactly as the forward did."""
    return grad_out * mask


def conv1d(x: np.ndarray, kernels: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Valid 1-D convolution with stride 1.

    x is (L, D) or (B, L, D); kernels are (F, k, D); output is
    (..., L-k+1, F) with out[i, f] = bias[f] + sum_j,d x[i+j, d] * kernels[f, j, d].
    """
    f_count, k, d = kernels.shape
    length = x.shape[-2]
    if x.shape[-1] != d:
        raise ValueError(f"conv1d depth mismatch: x {x.shape} vs kernels {kernels.shape}")
    if length < k:
        raise ValueError(f"conv1d input length {length} shorter than kernel {k}")
    out_len = length - k + 1
    out = np.broadcast_to(bias, (*x.shape[:-2], out_len, f_count)).astype(np.float64).copy()
    for j in range(k):
        out += x[..., j : j + out_len, :] @ kernels[:, j, :].T
    return out


def conv1d_backward(
    x: np.ndarray, kernels: np.ndarray, grad_out: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of conv1d() for x, kernels, and bias."""
    f_count, k, d = kernels.shape
    out_len = grad_out.shape[-2]
    dx = np.zeros_like(x, dtype=np.float64)
    dk = np.zeros_like(kernels, dtype=np.float64)
    g2 = grad_out.reshape(-1, f_count)
    for j in range(k):
        dx[..., j : j + out_len, :] += grad_out @ kernels[:, j, :]
        xs = x[..., j : j + out_len, :].reshape(-1, d)
        dk[:, j, :] = g2.T @ xs
    db = g2.sum(axis=0)
    return dx, dk, db


def _pool_windows(x: np.ndarray, size: int, stride: int) -> tuple[np.ndarray, np.ndarray]:
    length = x.shape[-2]
    if length < size:
        raise ValueError(f"maxpool1d input length {length} shorter than window {size}")
    n_windows = (length - size) // stride + 1
    starts = np.arange(n_windows) * stride
    # (..., n_windows, size, F)
    windows = x[..., starts[:, None] + np.arange(size), :]
    return windows, starts


def maxpool1d(x: np.ndarray, size: int = 5, stride: int | None = None) -> np.ndarray:
    """Windowed maxima over the length axis; stride defaults to size."""
    out, _ = maxpool1d_with_argmax(x, size, stride)
    return out


def maxpool1d_with_argmax(
    x: np.ndarray, size: int = 5, stride: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Maxima plus window-relative argmax (first index on ties)."""
    stride = size if stride is None else stride
    windows, _ = _pool_windows(x, size, stride)
    argmax = windows.argmax(axis=-2)
    out = np.take_along_axis(windows, argmax[..., None, :], axis=-2).squeeze(-2)
    return out, argmax


def maxpool1d_backward(
    x_shape: tuple[int, ...],
    argmax: np.ndarray,
    grad_out: np.ndarray,
    size: int = 5,
    stride: int | None = None,
) -> np.ndarray:
    """Route each window's gradient to its argmax position."""
    stride = size if stride is None else stride
    n_windows, f_count = argmax.shape[-2], argmax.shape[-1]
    starts = np.arange(n_windows) * stride
    abs_pos = argmax + starts[:, None]
    dx = np.zeros(x_shape, dtype=np.float64)
    dx2 = dx.reshape(-1, x_shape[-2], f_count)
    pos2 = abs_pos.reshape(-1, n_windows, f_count)
    g2 = grad_out.reshape(-1, n_windows, f_count)
    b_idx = np.arange(dx2.shape[0])[:, None, None]
    f_idx = np.arange(f_count)[None, None, :]
    np.add.at(dx2, (b_idx, pos2, f_idx), g2)
    return dx


@dataclass
class GruParams:
    """Parameters of one GRU layer.

    W_* map the input (D_in x D_h), U_* map the previous hidden state
    (D_h x D_h), b_* are biases (D_h).
    """

    Wz: np.ndarray
    Uz: np.ndarray
    bz: np.ndarray
    Wr: np.ndarray
    Ur: np.ndarray
    br: np.ndarray
    Wh: np.ndarray
    Uh: np.ndarray
    bh: np.ndarray

    @classmethod
    def zeros(cls, d_in: int, d_h: int) -> "GruParams":
        return cls(
            Wz=np.zeros((d_in, d_h)), Uz=np.zeros((d_h, d_h)), bz=np.zeros(d_h),
            Wr=np.zeros((d_in, d_h)), Ur=np.zeros((d_h, d_h)), br=np.zeros(d_h),
            Wh=np.zeros((d_in, d_h)), Uh=np.zeros((d_h, d_h)), bh=np.zeros(d_h),
        )

    def arrays(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def hidden_size(self) -> int:
        return self.bz.shape[0]


def gru_cell(x_t: np.ndarray, h_prev: np.ndarray, p: GruParams) -> np.ndarray:
    """One GRU step.

    z = sigmoid(x W_z + h U_z + b_z)
    r = sigmoid(x W_r + h U_r + b_r)
    h' = z * h + (1 - z) * tanh(x W_h + (r * h) U_h + b_h)

    The update gate retains the previous state (z near 1 keeps h).
    """
    h_t, _ = gru_cell_forward(x_t, h_prev, p)
    return h_t


def gru_cell_forward(
    x_t: np.ndarray, h_prev: np.ndarray, p: GruParams
) -> tuple[np.ndarray, tuple]:
    if x_t.shape[-1] != p.Wz.shape[0] or h_prev.shape[-1] != p.Uz.shape[0]:
        raise ValueError(
            f"gru_cell shape mismatch: x {x_t.shape}, h {h_prev.shape}, "
            f"Wz {p.Wz.shape}, Uz {p.Uz.shape}"
        )
    z = sigmoid(x_t @ p.Wz + h_prev @ p.Uz + p.bz)
    r = sigmoid(x_t @ p.Wr + h_prev @ p.Ur + p.br)
    rh = r * h_prev
    c = np.tanh(x_t @ p.Wh + rh @ p.Uh + p.bh)
    h_t = z * h_prev + (1.0 - z) * c
    return h_t, (x_t, h_prev, z, r, rh, c)


def gru_cell_backward(
    cache: tuple, p: GruParams, dh: np.ndarray, dp: GruParams
) -> tuple[np.ndarray, np.ndarray]:
    """Backward through one GRU step.

    Accumulates parameter gradients into ``dp`` and returns
    (dx_t, dh_prev), differentiating through every path including the
    reset-gated recurrent term.
    """
    x_t, h_prev, z, r, rh, c = cache

    dz = dh * (h_prev - c)
    dc = dh * (1.0 - z)
    dh_prev = dh * z

    dc_pre = dc * (1.0 - c * c)
    dx = dc_pre @ p.Wh.T
    drh = dc_pre @ p.Uh.T
    dr = drh * h_prev
    dh_prev = dh_prev + drh * r

    dr_pre = dr * r * (1.0 - r)
    dx += dr_pre @ p.Wr.T
    dh_prev += dr_pre @ p.Ur.T

    dz_pre = dz * z * (1.0 - z)
    dx += dz_pre @ p.Wz.T
    dh_prev += dz_pre @ p.Uz.T

    x2 = x_t.reshape(-1, p.Wz.shape[0])
    h2 = h_prev.reshape(-1, p.Uz.shape[0])
    rh2 = rh.reshape(-1, p.Uh.shape[0])
    for name, pre in (("z", dz_pre), ("r", dr_pre), ("h", dc_pre)):
        pre2 = pre.reshape(-1, p.hidden_size)
        getattr(dp, f"W{name}")[...] += x2.T @ pre2
        getattr(dp, f"b{name}")[...] += pre2.sum(axis=0)
    dp.Uz[...] += h2.T @ dz_pre.reshape(-1, p.hidden_size)
    dp.Ur[...] += h2.T @ dr_pre.reshape(-1, p.hidden_size)
    dp.Uh[...] += rh2.T @ dc_pre.reshape(-1, p.hidden_size)
    return dx, dh_prev


def gru_layer(xs: np.ndarray, p: GruParams, h0: np.ndarray | None = None) -> np.ndarray:
    """Run a GRU left-to-right over a sequence, emitting every hidden state.

    xs is (L, D_in) or (B, L, D_in); output matches with D_h in place of
    D_in.  Stacked layers consume the full output sequence; a classifier
    head consumes the final step.
    """
    hs, _ = gru_layer_forward(xs, p, h0)
    return hs


def gru_layer_forward(
    xs: np.ndarray, p: GruParams, h0: np.ndarray | None = None
) -> tuple[np.ndarray, list[tuple]]:
    d_h = p.hidden_size
    length = xs.shape[-2]
    lead = xs.shape[:-2]
    h = np.zeros((*lead, d_h)) if h0 is None else h0
    hs = np.zeros((*lead, length, d_h))
    caches = []
    for t in range(length):
        h, cache = gru_cell_forward(xs[..., t, :], h, p)
        hs[..., t, :] = h
        caches.append(cache)
    return hs, caches


def gru_layer_backward(
    caches: list[tuple], p: GruParams, dhs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, GruParams]:
    """Backpropagation through time given gradients on every output step.

    Returns (dxs, dh0, dparams).
    """
    length = len(caches)
    d_in = p.Wz.shape[0]
    lead = dhs.shape[:-2]
    dxs = np.zeros((*lead, length, d_in))
    dp = GruParams.zeros(d_in, p.hidden_size)
    dh = np.zeros((*lead, p.hidden_size))
    for t in range(length - 1, -1, -1):
        dh = dh + dhs[..., t, :]
        dx, dh = gru_cell_backward(caches[t], p, dh, dp)
        dxs[..., t, :] = dx
    return dxs, dh, dp


def grad_check(
    loss_fn: Callable[[], float],
    tensors: Sequence[np.ndarray],
    analytic: Sequence[np.ndarray],
    eps: float = 1e-5,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``loss_fn`` re-evaluates the scalar loss from the current contents of
    ``tensors``, which are perturbed in place one coordinate at a time.
    Relative error is |a - n| / max(|a|, |n|, 1e-8).  Requires float64
    tensors.
    """
    worst = 0.0
    for arr, grad in zip(tensors, analytic):
        if arr.shape != grad.shape:
            raise ValueError(f"gradient shape {grad.shape} does not match tensor {arr.shape}")
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            f_plus = loss_fn()
            flat[i] = orig - eps
            f_minus = loss_fn()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * eps)
            rel = abs(numeric - gflat[i]) / max(abs(numeric), abs(gflat[i]), 1e-8)
            worst = max(worst, rel)
    return worst
