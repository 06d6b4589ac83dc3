"""Hybrid training: least-squares consequents, gradient-descent premises.

Each epoch first identifies every rule's linear consequent in one shot by
solving the global linear least-squares problem (the model output is linear
in the stacked consequents once firing strengths are fixed), then takes a
full-batch gradient step on the membership shape parameters using the exact
chain-rule gradient of the dataset MSE.  Training stops on an epoch cap or
when the epoch-to-epoch MSE improvement falls below a tolerance, whichever
comes first.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInputError
from .membership import ParamBounds
from .network import ACTIVATION_FLOOR, AnfisModel, _ordered_sum

__all__ = [
    "TrainConfig",
    "TrainReport",
    "StopReason",
    "error_series",
    "mse",
    "build_design_matrix",
    "solve_consequents_lse",
    "premise_gradient",
    "train",
]


class StopReason(str, Enum):
    EPOCHS_EXHAUSTED = "epochs_exhausted"
    TOLERANCE_REACHED = "tolerance_reached"
    DEGENERATE_DATA = "degenerate_data"


@dataclass(frozen=True)
class TrainConfig:
    """Knobs of the hybrid loop.

    ``tolerance`` is compared against the absolute MSE improvement between
    consecutive epochs.  ``step_decay`` shrinks the learning rate whenever an
    epoch's MSE rose above the previous one.  ``param_bounds`` of None derives
    per-input bounds from each input's range (width floors at 1e-4 of range).
    """

    epochs: int = 6
    tolerance: float = 1e-5
    learning_rate: float = 0.01
    step_decay: float = 0.9
    param_bounds: Optional[ParamBounds] = None
    svd_cutoff: float = 1e-9

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise InvalidInputError("epochs must be >= 1")
        if self.tolerance < 0:
            raise InvalidInputError("tolerance must be >= 0")
        if self.learning_rate <= 0:
            raise InvalidInputError("learning_rate must be positive")
        if not 0 < self.step_decay <= 1:
            raise InvalidInputError("step_decay must be in (0, 1]")
        if not 0 <= self.svd_cutoff < 1:
            raise InvalidInputError("svd_cutoff must be in [0, 1)")


@dataclass
class TrainReport:
    mse_per_epoch: list[float] = field(default_factory=list)
    stop_reason: StopReason = StopReason.EPOCHS_EXHAUSTED
    wall_time: float = 0.0
    #: learning rate in effect at each epoch, after any decay
    learning_rates: list[float] = field(default_factory=list)

    @property
    def final_mse(self) -> float:
        return self.mse_per_epoch[-1] if self.mse_per_epoch else float("nan")


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.size != p.size:
        raise InvalidInputError(f"length mismatch: {a.size} vs {p.size}")
    if a.size == 0:
        raise InvalidInputError("need at least one sample")
    return a, p


def error_series(actual, predicted) -> np.ndarray:
    """Elementwise forecast error, observed minus predicted."""
    a, p = _pair(actual, predicted)
    return a - p


def mse(errors) -> float:
    """Mean of squared errors."""
    e = np.asarray(errors, dtype=float).ravel()
    if e.size == 0:
        raise InvalidInputError("need at least one error value")
    return float(np.mean(e**2))


def build_design_matrix(model: AnfisModel, X) -> np.ndarray:
    """Regression matrix whose product with the stacked consequents is the output.

    One row per sample; per rule i the column block is
    [wn_i*x_1, ..., wn_i*x_n, wn_i] with wn the normalized firing strengths,
    so ``design @ model.consequent_vector()`` reproduces ``evaluate_batch``
    bit for bit.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise InvalidInputError("X must be a non-empty 2-D matrix")
    _, normalized, _, _ = model._batch_parts(X)
    base = np.hstack([X, np.ones((X.shape[0], 1))])
    blocks = normalized[:, :, None] * base[:, None, :]
    return blocks.reshape(X.shape[0], model.n_rules * (model.n_inputs + 1))


def _lstsq(design: np.ndarray, targets: np.ndarray, cutoff: float):
    # Equilibrate columns to unit norm before the SVD solve: raw consequent
    # columns span three orders of magnitude (pressure ~1000 vs strengths ~1)
    # and would otherwise decide rank truncation by their units.
    norms = np.linalg.norm(design, axis=0)
    scale = np.where(norms > 0.0, norms, 1.0)
    theta_scaled, _, rank, _ = np.linalg.lstsq(
        design / scale, targets, rcond=cutoff if cutoff > 0 else None
    )
    return theta_scaled / scale, rank


def solve_consequents_lse(design, targets, cutoff: float = 1e-9) -> np.ndarray:
    """Least-squares solution of design @ theta ~ targets.

    Backed by an SVD solve on the column-equilibrated system; singular values
    below ``cutoff`` (relative to the largest) are truncated, so rank
    deficiency (near-dead rules producing almost-zero columns) yields the
    minimum-norm solution in equilibrated coordinates instead of blowing up.
    """
    design = np.asarray(design, dtype=float)
    targets = np.asarray(targets, dtype=float).ravel()
    if design.ndim != 2 or design.shape[0] != targets.size or targets.size == 0:
        raise InvalidInputError("design rows must match the number of targets")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(targets))):
        raise InvalidInputError("design matrix and targets must be finite")
    theta, _ = _lstsq(design, targets, cutoff)
    return theta


def premise_gradient(model: AnfisModel, X, targets) -> np.ndarray:
    """Exact gradient of the dataset MSE w.r.t. every MF shape parameter.

    Layout matches ``model.premise_params()``.  Samples whose total rule
    activation fell under the uniform-fallback floor contribute zero: their
    output no longer depends on the premises.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(targets, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.size or y.size == 0:
        raise InvalidInputError("X rows must match the number of targets")
    n, d = X.shape
    strengths, normalized, rule_outputs, degenerate = model._batch_parts(X)
    out = _ordered_sum(normalized * rule_outputs, 1)
    err = y - out

    totals = _ordered_sum(strengths, 1)
    safe_totals = np.where(degenerate, 1.0, totals)
    # dMSE/dw_i per sample: -(2/n) * e * (f_i - y) / sum(w)
    dmse_dw = (-2.0 / n) * (err / safe_totals)[:, None] * (
        rule_outputs - out[:, None]
    )
    dmse_dw[degenerate] = 0.0

    memb = model.memberships(X)
    ants = model._antecedents
    rule_memb = np.stack([memb[j][:, ants[:, j]] for j in range(d)], axis=2)

    grad_parts: list[np.ndarray] = []
    for j in range(d):
        # Product of the other inputs' memberships; avoids dividing by a
        # membership that may have underflowed to zero.
        others = np.prod(np.delete(rule_memb, j, axis=2), axis=2)
        weight = dmse_dw * others
        row = model.mf_grid[j]
        sens = np.empty((n, len(row)))
        for m in range(len(row)):
            sens[:, m] = weight[:, ants[:, j] == m].sum(axis=1)
        for m, mf in enumerate(row):
            pg = mf.grad(X[:, j])  # (n, n_params)
            grad_parts.append(pg.T @ sens[:, m])
    return np.concatenate(grad_parts)


def train(
    model: AnfisModel,
    data,
    cfg: TrainConfig = TrainConfig(),
    on_epoch: Callable[[int, AnfisModel, float], None] | None = None,
) -> tuple[AnfisModel, TrainReport]:
    """Run the hybrid loop and return the trained model plus its report.

    The input model is not mutated.  Per epoch: rebuild the design matrix,
    solve the consequents, record the training MSE, then (unless stopping)
    take one gradient step on the premises and clamp them back into bounds.
    ``on_epoch`` fires right after each epoch's MSE is recorded, with the
    consequents freshly solved.
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[0] != y.size:
        raise InvalidInputError("training data must be non-empty with matching rows")
    if X.shape[1] != model.n_inputs:
        raise InvalidInputError(
            f"model expects {model.n_inputs} features, data has {X.shape[1]}"
        )

    model = model.copy()
    bounds = cfg.param_bounds or [
        ParamBounds.for_input_range(s.lo, s.hi) for s in model.inputs
    ]
    report = TrainReport()
    lr = cfg.learning_rate
    t0 = time.perf_counter()

    for epoch in range(cfg.epochs):
        design = build_design_matrix(model, X)
        if not np.all(np.isfinite(design)):
            report.stop_reason = StopReason.DEGENERATE_DATA
            report.mse_per_epoch.append(mse(error_series(y, model.evaluate_batch(X))))
            break
        theta, rank = _lstsq(design, y, cfg.svd_cutoff)
        if rank == 0 or not np.all(np.isfinite(theta)):
            report.stop_reason = StopReason.DEGENERATE_DATA
            report.mse_per_epoch.append(mse(error_series(y, model.evaluate_batch(X))))
            break
        model.set_consequent_vector(theta)
        epoch_mse = mse(error_series(y, design @ theta))
        report.mse_per_epoch.append(epoch_mse)
        if on_epoch is not None:
            on_epoch(epoch, model, epoch_mse)

        if epoch > 0:
            previous = report.mse_per_epoch[-2]
            if abs(epoch_mse - previous) < cfg.tolerance:
                report.stop_reason = StopReason.TOLERANCE_REACHED
                report.learning_rates.append(lr)
                break
            if epoch_mse > previous:
                lr *= cfg.step_decay
        report.learning_rates.append(lr)
        if epoch < cfg.epochs - 1:
            grad = premise_gradient(model, X, y)
            model.set_premise_params(model.premise_params() - lr * grad)
            model.clamp_premises(bounds)
    else:
        report.stop_reason = StopReason.EPOCHS_EXHAUSTED

    report.wall_time = time.perf_counter() - t0
    return model, report
