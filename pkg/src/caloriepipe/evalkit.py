"""Metrics, mean/random baselines, and the multi-task loss
(smooth L1 on the four regression targets + gamma * BCE on the ingredient
logits), with analytic gradients for a small affine reference model.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

REGRESSION_KEYS = ("kcal", "fat", "protein", "carbs")


@dataclass(frozen=True)
class MultiTaskOutput:
    kcal: float
    fat_g: float
    protein_g: float
    carbs_g: float
    ingredient_logits: np.ndarray

    @property
    def regression(self) -> np.ndarray:
        return np.array([self.kcal, self.fat_g, self.protein_g, self.carbs_g])


@dataclass(frozen=True)
class MultiTaskTarget:
    kcal: float
    fat_g: float
    protein_g: float
    carbs_g: float
    label: np.ndarray  # multi-hot, same length as logits

    @property
    def regression(self) -> np.ndarray:
        return np.array([self.kcal, self.fat_g, self.protein_g, self.carbs_g])


@dataclass(frozen=True)
class LossBreakdown:
    l1_kcal: float
    l1_fat: float
    l1_prot: float
    l1_carb: float
    bce: float
    gamma: float
    total: float


@dataclass(frozen=True)
class MetricsTable:
    kcal_rel: float
    kcal_abs: float
    protein_abs: float
    fat_abs: float
    carbs_abs: float


def rel_error(pred: float, truth: float) -> float:
    """|pred - truth| / truth; callers exclude samples with truth <= 0."""
    if truth <= 0:
        raise ValueError("rel_error requires positive truth")
    return abs(pred - truth) / truth


def smooth_l1(pred: float, truth: float, beta: float = 1.0) -> float:
    if beta <= 0:
        raise ValueError("beta must be positive")
    d = abs(pred - truth)
    if d < beta:
        return 0.5 * d * d / beta
    return d - 0.5 * beta


def _smooth_l1_grad(d: float, beta: float) -> float:
    """d(smooth_l1)/d(pred) at pred - truth = d."""
    if abs(d) < beta:
        return d / beta
    return math.copysign(1.0, d)


def bce(logits: np.ndarray, label: np.ndarray) -> float:
    """Mean binary cross entropy with logits; stable for |z| large."""
    z = np.asarray(logits, dtype=np.float64)
    y = np.asarray(label, dtype=np.float64)
    if z.shape != y.shape:
        raise ValueError("logits and label must have equal length")
    # max(z,0) - z*y + log(1 + exp(-|z|))
    per = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    return float(np.mean(per))


def multitask_loss(
    out: MultiTaskOutput, tgt: MultiTaskTarget, gamma: float, beta: float = 1.0
) -> LossBreakdown:
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    l1_kcal = smooth_l1(out.kcal, tgt.kcal, beta)
    l1_fat = smooth_l1(out.fat_g, tgt.fat_g, beta)
    l1_prot = smooth_l1(out.protein_g, tgt.protein_g, beta)
    l1_carb = smooth_l1(out.carbs_g, tgt.carbs_g, beta)
    b = bce(out.ingredient_logits, tgt.label)
    total = l1_kcal + l1_fat + l1_prot + l1_carb + gamma * b
    return LossBreakdown(l1_kcal, l1_fat, l1_prot, l1_carb, b, gamma, total)


def _prior_logits(labels: np.ndarray, clip: float = 30.0) -> np.ndarray:
    """Per-position log-odds of the label prior, clipped to stay finite."""
    p = labels.mean(axis=0)
    p = np.clip(p, 1e-12, 1 - 1e-12)
    return np.clip(np.log(p / (1 - p)), -clip, clip)


def calibrate_gamma(train_targets: list[MultiTaskTarget], beta: float = 1.0) -> float:
    """Ratio of the mean-baseline regression loss to the prior-logit BCE,
    so both loss groups start at roughly equal contribution."""
    if not train_targets:
        raise ValueError("empty training set")
    reg = np.stack([t.regression for t in train_targets])
    labels = np.stack([t.label for t in train_targets]).astype(np.float64)
    means = reg.mean(axis=0)
    l1_total = float(
        np.mean(
            [
                sum(smooth_l1(means[j], row[j], beta) for j in range(4))
                for row in reg
            ]
        )
    )
    logits = _prior_logits(labels)
    bce_total = float(np.mean([bce(logits, row) for row in labels]))
    if bce_total < 1e-12:
        logger.warning("degenerate labels: BCE denominator ~0, gamma set to 1")
        return 1.0
    return l1_total / bce_total


class MeanBaseline:
    """Constant predictor: train means for regression, prior log-odds logits."""

    def __init__(self, train: list[MultiTaskTarget]):
        if not train:
            raise ValueError("empty training set")
        reg = np.stack([t.regression for t in train])
        labels = np.stack([t.label for t in train]).astype(np.float64)
        self.means = reg.mean(axis=0)
        self.logits = _prior_logits(labels)

    def predict(self, count: int) -> list[MultiTaskOutput]:
        out = MultiTaskOutput(*self.means, ingredient_logits=self.logits)
        return [out] * count


class RandomBaseline:
    """Predicts the targets of a uniformly drawn training recipe per sample."""

    def __init__(self, train: list[MultiTaskTarget], seed: int = 0):
        if not train:
            raise ValueError("empty training set")
        self.train = train
        self.seed = seed

    def predict(self, count: int) -> list[MultiTaskOutput]:
        rng = np.random.default_rng(self.seed)
        picks = rng.integers(0, len(self.train), size=count)
        outs = []
        for i in picks:
            t = self.train[int(i)]
            logits = np.where(t.label > 0.5, 30.0, -30.0)
            outs.append(
                MultiTaskOutput(t.kcal, t.fat_g, t.protein_g, t.carbs_g, logits)
            )
        return outs


def evaluate(
    preds: list[MultiTaskOutput], tgts: list[MultiTaskTarget]
) -> MetricsTable:
    """Mean relative kcal error (positive-truth samples only) and mean
    absolute errors per regression component."""
    if len(preds) != len(tgts):
        raise ValueError("prediction/target count mismatch")
    rels = [
        rel_error(p.kcal, t.kcal) for p, t in zip(preds, tgts) if t.kcal > 0
    ]
    diffs = np.stack([p.regression - t.regression for p, t in zip(preds, tgts)])
    abs_means = np.abs(diffs).mean(axis=0)
    return MetricsTable(
        kcal_rel=float(np.mean(rels)) if rels else 0.0,
        kcal_abs=float(abs_means[0]),
        fat_abs=float(abs_means[1]),
        protein_abs=float(abs_means[2]),
        carbs_abs=float(abs_means[3]),
    )


# --- affine reference model for gradient verification -----------------------


@dataclass
class AffineModel:
    """out = W x + b with out laid out as [kcal, fat, protein, carbs, logits]."""

    weights: np.ndarray  # (4 + n, features)
    bias: np.ndarray  # (4 + n,)

    @property
    def n_labels(self) -> int:
        return self.weights.shape[0] - 4

    def forward(self, x: np.ndarray) -> MultiTaskOutput:
        out = self.weights @ x + self.bias
        return MultiTaskOutput(
            out[0], out[1], out[2], out[3], ingredient_logits=out[4:]
        )

    def batch_loss(
        self, batch: list[tuple[np.ndarray, MultiTaskTarget]], gamma: float,
        beta: float = 1.0,
    ) -> float:
        return float(
            np.mean(
                [
                    multitask_loss(self.forward(x), t, gamma, beta).total
                    for x, t in batch
                ]
            )
        )


def loss_gradient(
    model: AffineModel,
    batch: list[tuple[np.ndarray, MultiTaskTarget]],
    gamma: float,
    beta: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradient of the mean multi-task loss w.r.t. (weights, bias)."""
    grad_w = np.zeros_like(model.weights)
    grad_b = np.zeros_like(model.bias)
    n = model.n_labels
    for x, tgt in batch:
        out = model.weights @ x + model.bias
        g_out = np.empty_like(out)
        for j in range(4):
            g_out[j] = _smooth_l1_grad(out[j] - tgt.regression[j], beta)
        z = out[4:]
        y = np.asarray(tgt.label, dtype=np.float64)
        sigma = 1.0 / (1.0 + np.exp(-z))
        g_out[4:] = gamma * (sigma - y) / n
        grad_w += np.outer(g_out, x)
        grad_b += g_out
    grad_w /= len(batch)
    grad_b /= len(batch)
    return grad_w, grad_b


def finite_difference_check(
    model: AffineModel,
    batch: list[tuple[np.ndarray, MultiTaskTarget]],
    gamma: float,
    beta: float = 1.0,
    step: float = 1e-5,
    scale_floor: float = 1e-8,
) -> float:
    """Max relative error between analytic and central-difference gradients."""
    grad_w, grad_b = loss_gradient(model, batch, gamma, beta)
    analytic = np.concatenate([grad_w.ravel(), grad_b.ravel()])
    numeric = np.empty_like(analytic)
    flat_params = [model.weights, model.bias]
    idx = 0
    for arr in flat_params:
        flat = arr.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = model.batch_loss(batch, gamma, beta)
            flat[i] = orig - step
            down = model.batch_loss(batch, gamma, beta)
            flat[i] = orig
            numeric[idx] = (up - down) / (2 * step)
            idx += 1
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    mask = scale > scale_floor
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(analytic - numeric)[mask] / scale[mask]))
