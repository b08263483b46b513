"""
Normalization and ranking for TOPSIS and SAW.

The array kernels accept any number of attributes and, for the weight
argument, either one vector (M,) or a batch (P, M); batched calls return one
row of scores per weight vector. The model-level functions wrap the kernels
for validated decision matrices.
"""
from typing import Sequence, Tuple

import numpy as np

from models import (
    ATTRIBUTES,
    Attribute,
    DecisionMatrix,
    DivisionByZeroError,
    Method,
    NormalizationKind,
    NormalizedMatrix,
    Ranking,
    TopsisDistances,
    WeightVector,
    WrongArityError,
    ZeroColumnError,
    benefit_mask,
)


# MARK: - Array kernels

def vector_normalize(values: np.ndarray) -> np.ndarray:
    """Divide every column by its Euclidean norm"""
    values = np.asarray(values, dtype=float)
    norms = np.sqrt(np.sum(values ** 2, axis=0))
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise ZeroColumnError(f"Column {zero[0]} has zero norm", col=int(zero[0]))
    return values / norms


def ratio_normalize(values: np.ndarray, benefit: np.ndarray) -> np.ndarray:
    """
    SAW normalization: benefit columns become value / column sum, cost columns
    become column sum / value. Cost entries are not rescaled and may exceed 1.
    """
    values = np.asarray(values, dtype=float)
    benefit = np.asarray(benefit, dtype=bool)
    if values.shape[1] != benefit.size:
        raise WrongArityError(f"{values.shape[1]} columns but {benefit.size} directions")

    sums = values.sum(axis=0)
    empty = np.flatnonzero(benefit & (sums == 0))
    if empty.size:
        raise DivisionByZeroError(f"Benefit column {empty[0]} sums to zero", col=int(empty[0]))
    zero_cost = (values == 0) & ~benefit[None, :]
    if zero_cost.any():
        row, col = np.argwhere(zero_cost)[0]
        raise DivisionByZeroError(
            f"Cost entry at row {row}, col {col} is zero", row=int(row), col=int(col)
        )

    normalized = np.empty_like(values)
    normalized[:, benefit] = values[:, benefit] / sums[benefit]
    normalized[:, ~benefit] = sums[~benefit] / values[:, ~benefit]
    return normalized


def topsis_distances(nm: np.ndarray, weights: np.ndarray, benefit: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Distances of every candidate to the ideal (S+) and negative-ideal (S-) points"""
    weights = np.asarray(weights, dtype=float)
    weighted = nm * weights[..., None, :]

    col_max = weighted.max(axis=-2)
    col_min = weighted.min(axis=-2)
    ideal = np.where(benefit, col_max, col_min)
    negative = np.where(benefit, col_min, col_max)

    s_plus = np.sqrt(np.sum((weighted - ideal[..., None, :]) ** 2, axis=-1))
    s_minus = np.sqrt(np.sum((weighted - negative[..., None, :]) ** 2, axis=-1))
    return s_plus, s_minus


def closeness(s_plus: np.ndarray, s_minus: np.ndarray) -> np.ndarray:
    """S- / (S- + S+); candidates with both distances zero score 0.5"""
    denominator = s_plus + s_minus
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(denominator > 0, s_minus / denominator, 0.5)


def topsis_scores(nm: np.ndarray, weights: np.ndarray, benefit: np.ndarray) -> np.ndarray:
    return closeness(*topsis_distances(nm, weights, benefit))


def saw_scores(nm: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weighted sum of normalized values"""
    return np.asarray(weights, dtype=float) @ np.asarray(nm, dtype=float).T


def method_scores(values: np.ndarray, weights: np.ndarray, method: Method, benefit: np.ndarray) -> np.ndarray:
    """Normalize raw values with the method's own scheme, then score"""
    if method is Method.TOPSIS:
        return topsis_scores(vector_normalize(values), weights, benefit)
    return saw_scores(ratio_normalize(values, benefit), weights)


def score_spread(scores: np.ndarray) -> np.ndarray:
    """Sum over candidate pairs i < j of |score_i - score_j| (last axis)"""
    scores = np.asarray(scores, dtype=float)
    n = scores.shape[-1]
    if n < 2:
        return np.zeros(scores.shape[:-1])
    first, second = np.triu_indices(n, k=1)
    return np.abs(scores[..., first] - scores[..., second]).sum(axis=-1)


# MARK: - Model-level operations

def _as_tuple_rows(array: np.ndarray) -> Tuple[Tuple[float, ...], ...]:
    return tuple(tuple(row) for row in array.tolist())


def _check_weights(w: WeightVector, attrs: Sequence[Attribute]) -> np.ndarray:
    if len(w.w) != len(attrs):
        raise WrongArityError(f"{len(w.w)} weights for {len(attrs)} attributes")
    return w.array


def normalize_topsis(dm: DecisionMatrix) -> NormalizedMatrix:
    return NormalizedMatrix(
        values=_as_tuple_rows(vector_normalize(dm.array)),
        source_method=NormalizationKind.TOPSIS_VECTOR,
    )


def normalize_saw(dm: DecisionMatrix, attrs: Sequence[Attribute] = ATTRIBUTES) -> NormalizedMatrix:
    return NormalizedMatrix(
        values=_as_tuple_rows(ratio_normalize(dm.array, benefit_mask(attrs))),
        source_method=NormalizationKind.SAW_RATIO,
    )


def topsis_rank(nm: NormalizedMatrix, w: WeightVector,
                attrs: Sequence[Attribute] = ATTRIBUTES) -> Tuple[Ranking, TopsisDistances]:
    if nm.source_method is not NormalizationKind.TOPSIS_VECTOR:
        raise ValueError("topsis_rank needs a vector-normalized matrix")
    s_plus, s_minus = topsis_distances(nm.array, _check_weights(w, attrs), benefit_mask(attrs))
    distances = TopsisDistances(s_plus=tuple(s_plus.tolist()), s_minus=tuple(s_minus.tolist()))
    return Ranking.from_scores(closeness(s_plus, s_minus), Method.TOPSIS), distances


def saw_rank(nm: NormalizedMatrix, w: WeightVector) -> Ranking:
    if nm.source_method is not NormalizationKind.SAW_RATIO:
        raise ValueError("saw_rank needs a ratio-normalized matrix")
    nm_array = nm.array
    if nm_array.shape[1] != len(w.w):
        raise WrongArityError(f"{len(w.w)} weights for {nm_array.shape[1]} columns")
    return Ranking.from_scores(saw_scores(nm_array, w.array), Method.SAW)


def rank(dm: DecisionMatrix, w: WeightVector, method: Method,
         attrs: Sequence[Attribute] = ATTRIBUTES) -> Ranking:
    """Normalize and rank a decision matrix with the chosen method"""
    if method is Method.TOPSIS:
        ranking, _ = topsis_rank(normalize_topsis(dm), w, attrs)
        return ranking
    return saw_rank(normalize_saw(dm, attrs), w)
