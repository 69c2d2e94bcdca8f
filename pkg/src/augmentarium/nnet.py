"""From-scratch feedforward softmax classifier trained with Adam.

The default architecture is two ReLU hidden layers of 64 units and a
softmax output. Cross-entropy is computed against soft label targets so
one-hot and mixed labels share a single code path; evaluation always uses
hard argmax labels. Everything is plain numpy, seeded, and deterministic
on a fixed platform.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, NonFiniteLoss, UnknownId
from .rng import derive_rng

HIDDEN_DIMS = (64, 64)
LOG_CLAMP = 1e-12


@dataclass
class TrainConfig:
    epochs: int = 30
    batch_size: int = 32
    seed: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass
class MLP:
    """Weight matrices are (fan_in, fan_out); one bias vector per layer."""

    weights: list
    biases: list

    @property
    def dims(self) -> list[int]:
        return [int(w.shape[0]) for w in self.weights] + [int(self.weights[-1].shape[1])]

    def copy(self) -> "MLP":
        return MLP([w.copy() for w in self.weights], [b.copy() for b in self.biases])


def init_mlp(dims, seed: int) -> MLP:
    """Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases."""
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValueError(f"invalid layer dims {dims}")
    rng = derive_rng(seed, "mlp-init")
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MLP(weights, biases)


def default_mlp(input_dim: int, num_classes: int, seed: int) -> MLP:
    return init_mlp([input_dim, *HIDDEN_DIMS, num_classes], seed)


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    expd = np.exp(shifted)
    return expd / expd.sum(axis=1, keepdims=True)


def forward_batch(model: MLP, X) -> np.ndarray:
    """Class probabilities for a (n, d) batch."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.dims[0]:
        raise DimensionMismatch(
            f"input shape {X.shape} does not match model input dim {model.dims[0]}"
        )
    h = X
    for W, b in zip(model.weights[:-1], model.biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
    return _softmax(h @ model.weights[-1] + model.biases[-1])


def forward(model: MLP, vec) -> np.ndarray:
    """Class probabilities for a single vector."""
    return forward_batch(model, np.asarray(vec, dtype=float)[None, :])[0]


def _loss_and_grads(model: MLP, X, Y):
    """Mean soft-label cross-entropy and its analytic gradients."""
    activations = [X]
    h = X
    for W, b in zip(model.weights[:-1], model.biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        activations.append(h)
    probs = _softmax(h @ model.weights[-1] + model.biases[-1])
    n = X.shape[0]
    loss = float(-np.sum(Y * np.log(np.maximum(probs, LOG_CLAMP))) / n)

    delta = (probs - Y) / n
    grads_w = []
    grads_b = []
    for layer in reversed(range(len(model.weights))):
        grads_w.append(activations[layer].T @ delta)
        grads_b.append(delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ model.weights[layer].T) * (activations[layer] > 0.0)
    return loss, grads_w[::-1], grads_b[::-1]


def loss_on(model: MLP, X, Y) -> float:
    """Mean cross-entropy without gradients (used by the gradient oracle)."""
    probs = forward_batch(model, X)
    return float(-np.sum(np.asarray(Y) * np.log(np.maximum(probs, LOG_CLAMP))) / len(X))


class AdamState:
    """First/second moment accumulators with bias correction.

    Defaults are the canonical lr=0.001, beta1=0.9, beta2=0.999,
    epsilon=1e-8; ``t`` increments once per step.
    """

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    @classmethod
    def for_model(cls, model: MLP, cfg: TrainConfig) -> "AdamState":
        return cls(
            model.weights + model.biases,
            lr=cfg.lr,
            beta1=cfg.beta1,
            beta2=cfg.beta2,
            epsilon=cfg.epsilon,
        )

    def step(self, params, grads) -> None:
        """One in-place Adam update over the parameter list."""
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * np.square(g)
            p -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.epsilon)


def _stack(data):
    if len(data) == 0:
        raise EmptyInput("no training data")
    X = np.stack([np.asarray(v, dtype=float) for v, _ in data])
    Y = np.stack([np.asarray(y, dtype=float) for _, y in data])
    return X, Y


def _run_epoch(model: MLP, X, Y, batch_size: int, state: AdamState) -> None:
    params = model.weights + model.biases
    for start in range(0, X.shape[0], batch_size):
        stop = start + batch_size
        loss, gw, gb = _loss_and_grads(model, X[start:stop], Y[start:stop])
        if not math.isfinite(loss):
            raise NonFiniteLoss(f"loss became {loss!r} at Adam step {state.t + 1}")
        state.step(params, gw + gb)


def train(model: MLP, data, cfg: TrainConfig, rng=None) -> MLP:
    """Mini-batch cross-entropy training; mutates and returns ``model``.

    ``data`` is a sequence of (vector, soft label) pairs. Each epoch is a
    fresh shuffle from the seeded RNG followed by consecutive batches.
    """
    X, Y = _stack(data)
    if X.shape[1] != model.dims[0] or Y.shape[1] != model.dims[-1]:
        raise DimensionMismatch(
            f"data shapes {X.shape}/{Y.shape} do not fit model dims {model.dims}"
        )
    if rng is None:
        rng = derive_rng(cfg.seed, "train")
    state = AdamState.for_model(model, cfg)
    for _ in range(cfg.epochs):
        order = rng.permutation(X.shape[0])
        _run_epoch(model, X[order], Y[order], cfg.batch_size, state)
    return model


def train_on_plans(model: MLP, pool, schedule, cfg: TrainConfig) -> MLP:
    """Train one epoch per plan, in plan order (plans carry their own
    within-epoch shuffle). ``pool`` maps sample id to a TrainItem."""
    state = AdamState.for_model(model, cfg)
    for plan in schedule.plans:
        try:
            X = np.stack([np.asarray(pool[i].vec, dtype=float) for i in plan.sample_ids])
            Y = np.stack([np.asarray(pool[i].probs, dtype=float) for i in plan.sample_ids])
        except KeyError as exc:
            raise UnknownId(f"epoch plan references unknown id {exc.args[0]!r}") from exc
        _run_epoch(model, X, Y, cfg.batch_size, state)
    return model


def per_sample_losses(model: MLP, data) -> list[float]:
    """Cross-entropy per sample, in input order, with probabilities
    clamped at 1e-12 before the log."""
    X, Y = _stack(data)
    probs = forward_batch(model, X)
    losses = -np.sum(Y * np.log(np.maximum(probs, LOG_CLAMP)), axis=1)
    return [float(x) for x in losses]


def accuracy(model: MLP, vectors, labels) -> float:
    """Fraction of argmax predictions equal to the hard labels.

    Argmax ties resolve to the lowest class index.
    """
    vectors = np.asarray(vectors, dtype=float)
    labels = np.asarray(labels)
    if vectors.shape[0] == 0:
        raise EmptyInput("no evaluation data")
    preds = forward_batch(model, vectors).argmax(axis=1)
    return float(np.mean(preds == labels))


def save_model(model: MLP, path) -> None:
    payload = {
        "dims": model.dims,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_model(path) -> MLP:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    weights = [np.asarray(w, dtype=float) for w in payload["weights"]]
    biases = [np.asarray(b, dtype=float) for b in payload["biases"]]
    model = MLP(weights, biases)
    if model.dims != payload["dims"]:
        raise DimensionMismatch("checkpoint dims do not match stored parameters")
    return model


__all__ = [
    "HIDDEN_DIMS",
    "LOG_CLAMP",
    "TrainConfig",
    "MLP",
    "AdamState",
    "init_mlp",
    "default_mlp",
    "forward",
    "forward_batch",
    "loss_on",
    "train",
    "train_on_plans",
    "per_sample_losses",
    "accuracy",
    "save_model",
    "load_model",
]
