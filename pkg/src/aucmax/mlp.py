"""Small feed-forward scorer with analytic forward/backward passes.

The model is a plain affine/activation chain in float64.  The last layer has
no activation: for classification it emits one raw logit per sample and the
sigmoid is applied separately, for contrastive pretraining it emits the
embedding vector.  Backprop is hand-written so gradients can be checked
against finite differences without an autodiff framework.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64
from .validation import as_float_matrix

ACTIVATIONS = ("relu", "tanh")


@dataclass(frozen=True)
class ModelSpec:
    """Layer widths (input dim first) and hidden activation."""

    layer_dims: tuple[int, ...]
    activation: str = "relu"

    def __post_init__(self):
        dims = tuple(int(d) for d in self.layer_dims)
        object.__setattr__(self, "layer_dims", dims)
        if len(dims) < 2:
            raise ValueError("layer_dims needs an input dim and at least one layer")
        if any(d < 1 for d in dims):
            raise ValueError(f"layer_dims must all be >= 1, got {dims}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}, got {self.activation!r}")

    @property
    def in_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def out_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def n_layers(self) -> int:
        return len(self.layer_dims) - 1

    def require_single_logit(self) -> "ModelSpec":
        """Scorers used for binary classification must end in one output neuron."""
        if self.out_dim != 1:
            raise ValueError(f"scorer spec must end in a single output, got out_dim={self.out_dim}")
        return self


@dataclass
class ModelParams:
    """Per-layer weight matrices (out x in) and bias vectors.

    Also used structurally as the gradient container returned by
    :func:`backward`, so optimizers can zip parameters with gradients.
    """

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: str = "relu"

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("weights and biases must be non-empty lists of equal length")
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.ndim != 2 or b.ndim != 1 or W.shape[0] != b.shape[0]:
                raise ValueError(f"layer {i}: weight {W.shape} and bias {b.shape} are inconsistent")
            if i > 0 and W.shape[1] != self.weights[i - 1].shape[0]:
                raise ValueError(f"layer {i}: input width {W.shape[1]} does not match previous layer")

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(W.shape[0] for W in self.weights)

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec(self.layer_dims, self.activation)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def copy(self) -> "ModelParams":
        return ModelParams(
            [W.copy() for W in self.weights],
            [b.copy() for b in self.biases],
            self.activation,
        )

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(W)) for W in self.weights) and all(
            np.all(np.isfinite(b)) for b in self.biases
        )


@dataclass
class ForwardTrace:
    """Per-layer caches from one forward pass, consumed by :func:`backward`."""

    layer_inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)


def init_params(spec: ModelSpec, seed: int) -> ModelParams:
    """Glorot-uniform weights, zero biases; deterministic in the seed."""
    rng = SplitMix64(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(spec.layer_dims[:-1], spec.layer_dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        u = rng.uniforms(fan_out * fan_in).reshape(fan_out, fan_in)
        weights.append((2.0 * u - 1.0) * limit)
        biases.append(np.zeros(fan_out, dtype=np.float64))
    return ModelParams(weights, biases, spec.activation)


def forward(params: ModelParams, batch: np.ndarray) -> tuple[np.ndarray, ForwardTrace]:
    """Run the affine/activation chain on a batch.

    Returns the raw final-layer outputs with shape (n, out_dim) plus the
    trace :func:`backward` needs.  No activation is applied to the last layer.
    """
    X = as_float_matrix(batch, "batch")
    if X.shape[1] != params.layer_dims[0]:
        raise ValueError(f"batch width {X.shape[1]} does not match model input dim {params.layer_dims[0]}")
    trace = ForwardTrace()
    a = X
    last = params.n_layers - 1
    for l, (W, b) in enumerate(zip(params.weights, params.biases)):
        trace.layer_inputs.append(a)
        z = a @ W.T + b
        trace.pre_activations.append(z)
        if l < last:
            a = np.maximum(z, 0.0) if params.activation == "relu" else np.tanh(z)
        else:
            a = z
    if not np.all(np.isfinite(a)):
        raise ValueError("forward pass produced non-finite outputs")
    return a, trace


def backward(params: ModelParams, trace: ForwardTrace, d_out: np.ndarray) -> ModelParams:
    """Exact analytic gradients for the upstream gradient ``d_out``.

    ``d_out`` carries any loss scaling (e.g. the 1/n of a batch mean); this
    routine only applies the chain rule.  Shape (n,) is accepted for
    single-output models, otherwise (n, out_dim).  ReLU uses derivative 0 at
    exactly zero pre-activation.
    """
    if len(trace.pre_activations) != params.n_layers:
        raise ValueError("trace does not match the model's layer count")
    n = trace.layer_inputs[0].shape[0]
    dZ = np.asarray(d_out, dtype=np.float64)
    if dZ.ndim == 1:
        dZ = dZ.reshape(n, 1)
    if dZ.shape != trace.pre_activations[-1].shape:
        raise ValueError(
            f"d_out shape {dZ.shape} does not match forward output {trace.pre_activations[-1].shape}"
        )
    grad_w: list[np.ndarray] = [None] * params.n_layers  # type: ignore[list-item]
    grad_b: list[np.ndarray] = [None] * params.n_layers  # type: ignore[list-item]
    for l in range(params.n_layers - 1, -1, -1):
        grad_w[l] = dZ.T @ trace.layer_inputs[l]
        grad_b[l] = dZ.sum(axis=0)
        if l > 0:
            dA = dZ @ params.weights[l]
            z_prev = trace.pre_activations[l - 1]
            if params.activation == "relu":
                dZ = dA * (z_prev > 0.0)
            else:
                a_prev = trace.layer_inputs[l]  # tanh(z_prev), cached by forward
                dZ = dA * (1.0 - a_prev**2)
    return ModelParams(grad_w, grad_b, params.activation)


def sigmoid(z):
    """Numerically stable logistic function; accepts scalars or arrays."""
    arr = np.asarray(z, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ez = np.exp(arr[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out) if out.ndim == 0 else out


def zeros_like_params(params: ModelParams) -> ModelParams:
    return ModelParams(
        [np.zeros_like(W) for W in params.weights],
        [np.zeros_like(b) for b in params.biases],
        params.activation,
    )
