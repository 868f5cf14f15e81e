"""Training objectives: cross-entropy baseline and the min-max AUC-margin loss.

The AUC-margin objective is optimized as a saddle problem: the model scores
and the running class centers ``a``/``b`` are minimized while the dual
variable ``alpha`` (constrained non-negative) is maximized.  Both losses
return exact analytic partial derivatives so the optimizers never need
autodiff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mlp import sigmoid
from .validation import as_binary_labels, as_float_vector, check_same_length


@dataclass(frozen=True)
class AucState:
    """Auxiliaries of the AUC-margin objective.

    ``a`` and ``b`` track the positive/negative score centers, ``alpha`` is
    the dual variable of the margin hinge, ``margin`` the target separation
    between class centers, and ``prior`` the positive-class fraction of the
    training split (estimated once, not per batch).
    """

    prior: float
    a: float = 0.0
    b: float = 0.0
    alpha: float = 0.0
    margin: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.prior < 1.0):
            raise ValueError(f"prior must lie in (0, 1), got {self.prior}")
        if self.margin <= 0.0:
            raise ValueError(f"margin must be > 0, got {self.margin}")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        for name in ("prior", "a", "b", "alpha", "margin"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class LossGrad:
    """A loss value with its partial derivatives.

    ``d_scores`` is taken with respect to whatever score vector the loss
    consumed: raw logits for :func:`bce_with_logits`, sigmoid outputs for
    :func:`auc_margin_batch` (chaining through the sigmoid is the caller's
    job).  The auxiliary derivatives are zero for losses without auxiliaries.
    """

    loss: float
    d_scores: np.ndarray
    d_a: float = 0.0
    d_b: float = 0.0
    d_alpha: float = 0.0


def bce_with_logits(logits: np.ndarray, labels: np.ndarray) -> LossGrad:
    """Mean binary cross-entropy on raw logits, stable for |z| up to ~1e3.

    loss_i = max(z, 0) - z*y + log(1 + exp(-|z|));  d/dz_i = (sigmoid(z_i) - y_i)/n.
    """
    z = as_float_vector(logits, "logits")
    if z.size == 0:
        raise ValueError("bce_with_logits requires a non-empty batch")
    y = as_binary_labels(labels, "labels")
    check_same_length(z, y, "logits/labels")
    per_sample = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    grad = (sigmoid(z) - y) / z.size
    return LossGrad(loss=float(per_sample.mean()), d_scores=grad)


def auc_margin_batch(probs: np.ndarray, labels: np.ndarray, state: AucState) -> LossGrad:
    """Prior-weighted AUC-margin loss on sigmoid scores, with all gradients.

    Per-sample term (p = prior, m = margin, h = score):

        f_i = (1-p) (h_i - a)^2 [y_i=1] + p (h_i - b)^2 [y_i=0]
              + 2 alpha (p(1-p) m + p h_i [y_i=0] - (1-p) h_i [y_i=1])
              - p(1-p) alpha^2

    The returned loss is the batch mean of f_i; derivatives are exact with
    respect to each h_i, a, b, and alpha.
    """
    h = as_float_vector(probs, "probs")
    if h.size == 0:
        raise ValueError("auc_margin_batch requires a non-empty batch")
    if np.any(h <= 0.0) or np.any(h >= 1.0):
        raise ValueError("probs must lie strictly inside (0, 1)")
    y = as_binary_labels(labels, "labels")
    check_same_length(h, y, "probs/labels")

    n = h.size
    p, m, a, b, alpha = state.prior, state.margin, state.a, state.b, state.alpha
    pos = (y == 1).astype(np.float64)
    neg = 1.0 - pos

    hinge = p * (1.0 - p) * m + p * h * neg - (1.0 - p) * h * pos
    per_sample = (
        (1.0 - p) * (h - a) ** 2 * pos
        + p * (h - b) ** 2 * neg
        + 2.0 * alpha * hinge
        - p * (1.0 - p) * alpha**2
    )
    d_scores = (
        2.0 * (1.0 - p) * (h - a) * pos
        + 2.0 * p * (h - b) * neg
        + 2.0 * alpha * (p * neg - (1.0 - p) * pos)
    ) / n
    d_a = -2.0 * (1.0 - p) * float(((h - a) * pos).sum()) / n
    d_b = -2.0 * p * float(((h - b) * neg).sum()) / n
    d_alpha = 2.0 * float(hinge.mean()) - 2.0 * p * (1.0 - p) * alpha
    return LossGrad(
        loss=float(per_sample.mean()),
        d_scores=d_scores,
        d_a=d_a,
        d_b=d_b,
        d_alpha=d_alpha,
    )


def inner_optima(
    probs: np.ndarray, labels: np.ndarray, prior: float, margin: float
) -> tuple[float, float, float]:
    """Closed-form stationary point of the margin loss in (a, b, alpha).

    For fixed scores, the loss is minimized at a = mean positive score and
    b = mean negative score, and (for batches whose class fractions equal
    the prior) maximized over alpha >= 0 at max(0, margin + b - a).  Used as
    the oracle for the saddle-point optimizer.
    """
    h = as_float_vector(probs, "probs")
    y = as_binary_labels(labels, "labels", require_both_classes=True)
    check_same_length(h, y, "probs/labels")
    a_star = float(h[y == 1].mean())
    b_star = float(h[y == 0].mean())
    alpha_star = max(0.0, margin + b_star - a_star)
    return a_star, b_star, alpha_star


def estimate_prior(labels: np.ndarray) -> float:
    """Positive-class fraction of a label vector; requires both classes."""
    y = as_binary_labels(labels, "labels", require_both_classes=True)
    return float(y.mean())
