"""First-order Takagi-Sugeno inference network over a grid rule base.

A model holds, per input, a row of membership functions; a rule picks one
set per input and owns a linear consequent (coefficients for each input
plus a trailing bias).  Inference runs in the usual stages: per-rule
firing strength as the product of the antecedent memberships, strength
normalization, per-rule linear output, and the strength-weighted sum.

Evaluation never mutates the model and is safe to call concurrently;
training code takes exclusive ownership while it rewrites parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .membership import BellMf, GaussianMf, MfKind, ParamBounds

__all__ = [
    "InputSpec",
    "Rule",
    "FiringTrace",
    "AnfisModel",
    "build_grid_model",
    "normalize_strengths",
]

#: Below this total activation the ratio form is numerically meaningless;
#: normalization falls back to the uniform vector and flags the trace.
ACTIVATION_FLOOR = 1e-12


def _ordered_sum(arr: np.ndarray, axis: int) -> np.ndarray:
    """Left-to-right sum along ``axis``.

    numpy's reductions pick shape-dependent accumulation orders; inference
    must produce bit-identical outputs whether called on one row or a batch,
    so the reduction order is fixed here.
    """
    moved = np.moveaxis(arr, axis, 0)
    out = moved[0].copy()
    for chunk in moved[1:]:
        out += chunk
    return out


def _ordered_prod(arr: np.ndarray, axis: int) -> np.ndarray:
    """Left-to-right product along ``axis``; see ``_ordered_sum``."""
    moved = np.moveaxis(arr, axis, 0)
    out = moved[0].copy()
    for chunk in moved[1:]:
        out *= chunk
    return out


@dataclass(frozen=True)
class InputSpec:
    """One model input: display name, observed range, and grid size."""

    name: str
    lo: float
    hi: float
    mf_count: int = 3

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lo) and np.isfinite(self.hi) and self.lo < self.hi):
            raise InvalidInputError(
                f"input '{self.name}': need finite lo < hi, got [{self.lo}, {self.hi}]"
            )
        if self.mf_count < 2:
            raise InvalidInputError(
                f"input '{self.name}': mf_count must be >= 2, got {self.mf_count}"
            )


@dataclass
class Rule:
    """Antecedent MF indices (one per input) plus linear consequent, bias last."""

    antecedent: tuple[int, ...]
    consequent: np.ndarray

    def __post_init__(self) -> None:
        self.antecedent = tuple(int(i) for i in self.antecedent)
        self.consequent = np.asarray(self.consequent, dtype=float)
        if self.consequent.shape != (len(self.antecedent) + 1,):
            raise InvalidInputError(
                "consequent must have one coefficient per input plus a bias"
            )


@dataclass
class FiringTrace:
    """Per-rule intermediates of a single evaluation."""

    strengths: np.ndarray
    normalized: np.ndarray
    rule_outputs: np.ndarray
    degenerate: bool = False


def normalize_strengths(strengths) -> np.ndarray:
    """Scale nonnegative firing strengths to sum to one.

    When the total activation falls below ``ACTIVATION_FLOOR`` the uniform
    vector is returned instead of an ill-conditioned ratio.
    """
    w = np.asarray(strengths, dtype=float)
    if w.size == 0:
        raise InvalidInputError("cannot normalize an empty strength vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidInputError("firing strengths must be finite and >= 0")
    total = w.sum()
    if total < ACTIVATION_FLOOR:
        return np.full(w.shape, 1.0 / w.size)
    return w / total


@dataclass
class AnfisModel:
    """Inputs, per-input MF grid, and the rule list of a Sugeno model."""

    inputs: list[InputSpec]
    mf_grid: list[list[MfKind]]
    rules: list[Rule]
    family: str = "gaussian"
    _antecedents: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.mf_grid) != len(self.inputs):
            raise InvalidInputError("one MF row required per input")
        for spec, row in zip(self.inputs, self.mf_grid):
            if len(row) != spec.mf_count:
                raise InvalidInputError(
                    f"input '{spec.name}' declares {spec.mf_count} MFs, "
                    f"grid row has {len(row)}"
                )
        for rule in self.rules:
            if len(rule.antecedent) != len(self.inputs):
                raise InvalidInputError("rule antecedent length != input count")
            for j, idx in enumerate(rule.antecedent):
                if not 0 <= idx < self.inputs[j].mf_count:
                    raise InvalidInputError(
                        f"rule references MF {idx} of input '{self.inputs[j].name}'"
                    )
        self._antecedents = np.array(
            [r.antecedent for r in self.rules], dtype=np.intp
        ).reshape(len(self.rules), len(self.inputs))

    # -- shape -------------------------------------------------------------

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    def copy(self) -> "AnfisModel":
        """Independent copy; MF instances are immutable and shared."""
        return AnfisModel(
            inputs=list(self.inputs),
            mf_grid=[list(row) for row in self.mf_grid],
            rules=[Rule(r.antecedent, r.consequent.copy()) for r in self.rules],
            family=self.family,
        )

    # -- inference ---------------------------------------------------------

    def _check_row(self, x) -> np.ndarray:
        row = np.asarray(x, dtype=float)
        if row.shape != (self.n_inputs,):
            raise InvalidInputError(
                f"expected {self.n_inputs} input values, got shape {row.shape}"
            )
        if not np.all(np.isfinite(row)):
            raise InvalidInputError("input values must be finite")
        return row

    def memberships(self, X: np.ndarray) -> list[np.ndarray]:
        """Per input, the (n_samples, mf_count) membership matrix."""
        return [
            np.stack([mf.value(X[:, j]) for mf in row], axis=1)
            for j, row in enumerate(self.mf_grid)
        ]

    def _batch_parts(self, X: np.ndarray):
        """Firing strengths, normalized strengths, rule outputs, degeneracy mask."""
        memb = self.memberships(X)
        ants = self._antecedents
        rule_memb = np.stack(
            [memb[j][:, ants[:, j]] for j in range(self.n_inputs)], axis=2
        )
        strengths = _ordered_prod(rule_memb, 2)
        totals = _ordered_sum(strengths, 1)
        degenerate = totals < ACTIVATION_FLOOR
        safe = np.where(degenerate, 1.0, totals)
        normalized = strengths / safe[:, None]
        normalized[degenerate] = 1.0 / self.n_rules
        design_base = np.hstack([X, np.ones((X.shape[0], 1))])
        rule_outputs = _ordered_sum(
            design_base[:, None, :] * self._consequent_matrix()[None, :, :], 2
        )
        return strengths, normalized, rule_outputs, degenerate

    def firing_strengths(self, x) -> FiringTrace:
        """Evaluate one input vector up to the raw firing strengths."""
        row = self._check_row(x)
        strengths, normalized, rule_outputs, degenerate = self._batch_parts(
            row[None, :]
        )
        return FiringTrace(
            strengths=strengths[0],
            normalized=normalized[0],
            rule_outputs=rule_outputs[0],
            degenerate=bool(degenerate[0]),
        )

    def evaluate(self, x) -> tuple[float, FiringTrace]:
        """Model output for one input vector, with the full firing trace."""
        trace = self.firing_strengths(x)
        y = float(_ordered_sum(trace.normalized * trace.rule_outputs, 0))
        return y, trace

    def evaluate_batch(self, X) -> np.ndarray:
        """Model output per row of ``X``; equals row-wise ``evaluate`` exactly."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or (X.size and X.shape[1] != self.n_inputs):
            raise InvalidInputError(
                f"expected an (n, {self.n_inputs}) matrix, got shape {X.shape}"
            )
        if X.shape[0] == 0:
            return np.zeros(0)
        bad = ~np.all(np.isfinite(X), axis=1)
        if bad.any():
            raise InvalidInputError(
                f"non-finite input values in row {int(np.flatnonzero(bad)[0])}"
            )
        _, normalized, rule_outputs, _ = self._batch_parts(X)
        return _ordered_sum(normalized * rule_outputs, 1)

    # -- parameter vectors (trainer / serialization contract) ---------------

    def _consequent_matrix(self) -> np.ndarray:
        return np.stack([r.consequent for r in self.rules])

    def consequent_vector(self) -> np.ndarray:
        """All rule consequents, rule-major, bias last within each rule."""
        return np.concatenate([r.consequent for r in self.rules])

    def set_consequent_vector(self, theta) -> None:
        theta = np.asarray(theta, dtype=float)
        width = self.n_inputs + 1
        if theta.shape != (self.n_rules * width,):
            raise InvalidInputError("consequent vector has the wrong length")
        for i, rule in enumerate(self.rules):
            rule.consequent = theta[i * width : (i + 1) * width].copy()

    def premise_params(self) -> np.ndarray:
        """All MF shape parameters: input-major, then MF, then parameter order."""
        flat: list[float] = []
        for row in self.mf_grid:
            for mf in row:
                flat.extend(mf.params)
        return np.array(flat)

    def set_premise_params(self, params) -> None:
        params = np.asarray(params, dtype=float)
        pos = 0
        for row in self.mf_grid:
            for k, mf in enumerate(row):
                row[k] = mf.with_params(params[pos : pos + mf.n_params])
                pos += mf.n_params
        if pos != params.size:
            raise InvalidInputError("premise parameter vector has the wrong length")

    def clamp_premises(self, bounds: ParamBounds | list[ParamBounds]) -> None:
        """Project every MF's parameters into bounds (per input when given a list)."""
        per_input = bounds if isinstance(bounds, list) else [bounds] * self.n_inputs
        for row, b in zip(self.mf_grid, per_input):
            for k, mf in enumerate(row):
                row[k] = mf.clamped(b)


def build_grid_model(inputs: list[InputSpec], family: str = "gaussian") -> AnfisModel:
    """Grid-partitioned model: evenly spaced centers, half-overlap widths.

    Centers sit on [lo, hi] inclusive.  Widths are chosen so adjacent sets
    cross at membership 0.5: for Gaussians sigma = spacing / (2*sqrt(2 ln 2)),
    for bells half_width = spacing / 2 with slope 2.  The rule list is the
    full cross product of MF indices with all consequents at zero; the first
    least-squares pass sets them, so the starting values only matter for the
    never-trained path.
    """
    if family not in ("gaussian", "bell"):
        raise InvalidInputError(f"unknown membership family '{family}'")
    if not inputs:
        raise InvalidInputError("at least one input is required")
    grid: list[list[MfKind]] = []
    for spec in inputs:
        centers = np.linspace(spec.lo, spec.hi, spec.mf_count)
        spacing = (spec.hi - spec.lo) / (spec.mf_count - 1)
        if family == "gaussian":
            sigma = spacing / (2.0 * np.sqrt(2.0 * np.log(2.0)))
            grid.append([GaussianMf(sigma=sigma, center=float(c)) for c in centers])
        else:
            grid.append(
                [
                    BellMf(half_width=spacing / 2.0, slope=2.0, center=float(c))
                    for c in centers
                ]
            )
    n_coeffs = len(inputs) + 1
    rules = [
        Rule(antecedent=combo, consequent=np.zeros(n_coeffs))
        for combo in itertools.product(*(range(s.mf_count) for s in inputs))
    ]
    return AnfisModel(inputs=list(inputs), mf_grid=grid, rules=rules, family=family)
