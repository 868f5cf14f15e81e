"""Optimizers and learning-rate schedules for the two training paths.

The cross-entropy path uses classic SGD with momentum and L2-in-gradient
weight decay.  The AUC-margin path uses a primal-dual step: gradient descent
on the model weights and the class centers, projected gradient ascent on the
dual variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .losses import LossGrad
from .mlp import ModelParams, zeros_like_params


@dataclass
class SgdState:
    """Momentum SGD state; velocity buffers are allocated on first use."""

    lr: float
    momentum: float = 0.9
    weight_decay: float = 0.0
    velocity: ModelParams | None = None

    def __post_init__(self):
        if self.lr <= 0.0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if not (0.0 <= self.momentum < 1.0):
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.weight_decay < 0.0:
            raise ValueError(f"weight_decay must be >= 0, got {self.weight_decay}")


def sgd_step(params: ModelParams, grads: ModelParams, state: SgdState) -> tuple[ModelParams, SgdState]:
    """v <- momentum*v + (grad + wd*param); param <- param - lr*v."""
    if grads.layer_dims != params.layer_dims:
        raise ValueError("gradient shapes do not match parameter shapes")
    if state.velocity is None:
        state.velocity = zeros_like_params(params)
    new_w, new_b, vel_w, vel_b = [], [], [], []
    for W, b, gW, gb, vW, vb in zip(
        params.weights, params.biases, grads.weights, grads.biases,
        state.velocity.weights, state.velocity.biases,
    ):
        vW = state.momentum * vW + (gW + state.weight_decay * W)
        vb = state.momentum * vb + (gb + state.weight_decay * b)
        new_w.append(W - state.lr * vW)
        new_b.append(b - state.lr * vb)
        vel_w.append(vW)
        vel_b.append(vb)
    state.velocity = ModelParams(vel_w, vel_b, params.activation)
    return ModelParams(new_w, new_b, params.activation), state


@dataclass
class PesgState:
    """Primal-dual step sizes for the AUC-margin path.

    ``epoch_decay`` adds an optional pull gamma*(w - w_ref) toward a reference
    point refreshed via :meth:`update_reference`; it is off by default.
    Weight decay applies to model weights only, never to a, b, or alpha.
    """

    primal_lr: float
    dual_lr: float | None = None
    weight_decay: float = 0.0
    epoch: int = 0
    epoch_decay: float = 0.0
    reference: ModelParams | None = None

    def __post_init__(self):
        if self.primal_lr <= 0.0:
            raise ValueError(f"primal_lr must be > 0, got {self.primal_lr}")
        if self.dual_lr is None:
            self.dual_lr = self.primal_lr
        if self.dual_lr <= 0.0:
            raise ValueError(f"dual_lr must be > 0, got {self.dual_lr}")
        if self.weight_decay < 0.0 or self.epoch_decay < 0.0:
            raise ValueError("weight_decay and epoch_decay must be >= 0")

    def update_reference(self, params: ModelParams) -> None:
        self.reference = params.copy()


def pesg_step(
    params: ModelParams,
    a: float,
    b: float,
    alpha: float,
    grads: ModelParams,
    loss_grad: LossGrad,
    state: PesgState,
) -> tuple[ModelParams, float, float, float]:
    """One primal-dual update; alpha is projected onto [0, inf) on exit."""
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0 on entry, got {alpha}")
    if grads.layer_dims != params.layer_dims:
        raise ValueError("gradient shapes do not match parameter shapes")
    if not grads.all_finite():
        raise ValueError("non-finite model gradient in pesg_step; lower the learning rate or check inputs")
    for name, g in (("d_a", loss_grad.d_a), ("d_b", loss_grad.d_b), ("d_alpha", loss_grad.d_alpha)):
        if not math.isfinite(g):
            raise ValueError(f"non-finite auxiliary gradient {name}={g} in pesg_step")

    new_w, new_b = [], []
    for l, (W, bias, gW, gb) in enumerate(zip(params.weights, params.biases, grads.weights, grads.biases)):
        stepW = gW + state.weight_decay * W
        stepb = gb + state.weight_decay * bias
        if state.epoch_decay > 0.0 and state.reference is not None:
            stepW = stepW + state.epoch_decay * (W - state.reference.weights[l])
            stepb = stepb + state.epoch_decay * (bias - state.reference.biases[l])
        new_w.append(W - state.primal_lr * stepW)
        new_b.append(bias - state.primal_lr * stepb)
    a_new = a - state.primal_lr * loss_grad.d_a
    b_new = b - state.primal_lr * loss_grad.d_b
    alpha_new = max(0.0, alpha + state.dual_lr * loss_grad.d_alpha)
    return ModelParams(new_w, new_b, params.activation), a_new, b_new, alpha_new


@dataclass(frozen=True)
class Schedule:
    """Per-epoch learning rate: step decay at milestones, or cosine annealing."""

    kind: str
    base_lr: float
    milestones: tuple[int, ...] = ()
    factor: float = 0.1
    total_epochs: int = 30

    def __post_init__(self):
        if self.kind not in ("step_decay", "cosine"):
            raise ValueError(f"kind must be 'step_decay' or 'cosine', got {self.kind!r}")
        if self.base_lr <= 0.0:
            raise ValueError(f"base_lr must be > 0, got {self.base_lr}")
        if not (0.0 < self.factor < 1.0):
            raise ValueError(f"factor must lie in (0, 1), got {self.factor}")
        ms = tuple(int(m) for m in self.milestones)
        object.__setattr__(self, "milestones", ms)
        if any(m2 <= m1 for m1, m2 in zip(ms, ms[1:])):
            raise ValueError(f"milestones must be strictly increasing, got {ms}")
        if self.total_epochs < 1:
            raise ValueError(f"total_epochs must be >= 1, got {self.total_epochs}")


def schedule_lr(schedule: Schedule, epoch: int) -> float:
    """Learning rate at a 0-indexed epoch; cosine clamps past total_epochs."""
    if epoch < 0:
        raise ValueError(f"epoch must be >= 0, got {epoch}")
    if schedule.kind == "step_decay":
        hits = sum(1 for m in schedule.milestones if m <= epoch)
        return schedule.base_lr * schedule.factor**hits
    e = min(epoch, schedule.total_epochs)
    return schedule.base_lr * (1.0 + math.cos(math.pi * e / schedule.total_epochs)) / 2.0
