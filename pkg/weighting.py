"""
Weight vectors for the decision criteria: the AHP baseline, subjective BWM
weights, objective GWO weights and their convex combination.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from criteria_config import CRITERIA_CONFIG, consistency_index
from madm import (
    ratio_normalize,
    saw_scores,
    score_spread,
    topsis_scores,
    vector_normalize,
)
from models import (
    ATTRIBUTE_IDS,
    ATTRIBUTES,
    Attribute,
    BadParamsError,
    BwmComparisons,
    BwmSolution,
    DecisionMatrix,
    GwoConfig,
    HybridParams,
    ImportanceList,
    Method,
    TrafficClass,
    WeightVector,
    Weighting,
    benefit_mask,
)
from simplex import SimplexSolver, linprog_min

logger = logging.getLogger(__name__)


# MARK: - AHP baseline and importance lists

def ahp_weights(tc: TrafficClass) -> WeightVector:
    """Published AHP row for the traffic class, order (CB, S, DR, D, J, PLR)"""
    return WeightVector.published(CRITERIA_CONFIG["ahp_weights"][tc.value])


def derive_limpo(tc: TrafficClass) -> ImportanceList:
    """Criteria sorted by their AHP weight, heaviest first"""
    row = CRITERIA_CONFIG["ahp_weights"][tc.value]
    order = sorted(range(len(row)), key=lambda j: (-row[j], j))
    return ImportanceList(limpo=tuple(ATTRIBUTE_IDS[j] for j in order))


# MARK: - Best-worst method

def _scale_position(offset: int, m: int) -> int:
    lo, hi = CRITERIA_CONFIG["bwm"]["scale"]
    # Round half up so the mapping is monotone for every M
    return int(math.floor(lo + (hi - lo) * offset / (m - 1) + 0.5))


def bwm_vectors(il: ImportanceList) -> BwmComparisons:
    """
    Map Limpo positions onto the 1..9 scale.

    The criterion at position p (1-based) gets a_Bj = round(1 + 8(p-1)/(M-1))
    and a_jW = round(1 + 8(M-p)/(M-1)); vectors are indexed in canonical
    attribute order.
    """
    m = len(il.limpo)
    a_best = [0] * m
    a_worst = [0] * m
    for position, attr in enumerate(il.limpo):
        j = ATTRIBUTE_IDS.index(attr)
        a_best[j] = _scale_position(position, m)
        a_worst[j] = _scale_position(m - 1 - position, m)

    return BwmComparisons(
        best=ATTRIBUTE_IDS.index(il.limpo[0]),
        worst=ATTRIBUTE_IDS.index(il.limpo[-1]),
        a_best=tuple(a_best),
        a_worst=tuple(a_worst),
        criteria=tuple(a.value for a in ATTRIBUTE_IDS),
    )


def bwm_residual(cmp: BwmComparisons, w) -> float:
    """max_j max(|w_B - a_Bj w_j|, |w_j - a_jW w_W|)"""
    w = np.asarray(w, dtype=float)
    a_best = np.asarray(cmp.a_best, dtype=float)
    a_worst = np.asarray(cmp.a_worst, dtype=float)
    to_best = np.abs(w[..., cmp.best, None] - a_best * w)
    to_worst = np.abs(w - a_worst * w[..., cmp.worst, None])
    return np.maximum(to_best.max(axis=-1), to_worst.max(axis=-1))


def solve_bwm(cmp: BwmComparisons, solver: Optional[SimplexSolver] = None) -> BwmSolution:
    """
    Solve the min-max BWM program through its linear reformulation:
    minimize xi subject to |w_B - a_Bj w_j| <= xi, |w_j - a_jW w_W| <= xi,
    sum(w) = 1, w >= 0.
    """
    m = cmp.size
    rows = []
    for j in range(m):
        if j != cmp.best:
            row = np.zeros(m + 1)
            row[cmp.best] += 1.0
            row[j] -= cmp.a_best[j]
            row[m] = -1.0
            rows.append(row)
            rows.append(np.concatenate((-row[:m], [-1.0])))
        if j != cmp.worst:
            row = np.zeros(m + 1)
            row[j] += 1.0
            row[cmp.worst] -= cmp.a_worst[j]
            row[m] = -1.0
            rows.append(row)
            rows.append(np.concatenate((-row[:m], [-1.0])))

    c = np.zeros(m + 1)
    c[m] = 1.0
    A_eq = np.concatenate((np.ones(m), [0.0]))[None, :]
    result = linprog_min(c, A_ub=np.array(rows), b_ub=np.zeros(len(rows)),
                         A_eq=A_eq, b_eq=[1.0], solver=solver)

    w = np.clip(result.x[:m], 0.0, None)
    w = w / w.sum()
    xi = float(bwm_residual(cmp, w))

    index = consistency_index(cmp.a_best[cmp.worst])
    ratio = xi / index if index > 0 else 0.0
    logger.debug("BWM xi*=%.6g (LP objective %.6g), consistency ratio %.4f",
                 xi, result.objective, ratio)
    return BwmSolution(w_star=WeightVector.from_array(w), xi_star=xi, consistency_ratio=ratio)


@lru_cache(maxsize=None)
def bwm_weights(tc: TrafficClass) -> BwmSolution:
    """Subjective weights of a traffic class; they do not depend on the matrix"""
    return solve_bwm(bwm_vectors(derive_limpo(tc)))


# MARK: - Score spread objectives

def sv_topsis(dm: DecisionMatrix, w: WeightVector, attrs: Sequence[Attribute] = ATTRIBUTES) -> float:
    nm = vector_normalize(dm.array)
    return float(score_spread(topsis_scores(nm, w.array, benefit_mask(attrs))))


def sv_saw(dm: DecisionMatrix, w: WeightVector, attrs: Sequence[Attribute] = ATTRIBUTES) -> float:
    mask = benefit_mask(attrs)
    return float(score_spread(saw_scores(ratio_normalize(dm.array, mask), w.array)))


def sv_objective(values: np.ndarray, method: Method, benefit: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Batched SV over weight vectors (P, M) -> (P,); the normalization is computed once"""
    if method is Method.TOPSIS:
        nm = vector_normalize(values)

        def objective(weights: np.ndarray) -> np.ndarray:
            return score_spread(topsis_scores(nm, weights, benefit))
    else:
        nm = ratio_normalize(values, benefit)

        def objective(weights: np.ndarray) -> np.ndarray:
            return score_spread(saw_scores(nm, weights))

    return objective


# MARK: - Grey wolf optimizer

def gwo_schedule(t: int, iterations: int) -> float:
    """Control scalar a, descending linearly from 2 at t=0 to 0 at t=iterations"""
    return 2.0 * (1.0 - t / iterations)


@dataclass
class GwoState:
    positions: np.ndarray
    fitness: np.ndarray
    leaders: np.ndarray
    leader_fitness: np.ndarray
    a: float
    t: int


@dataclass(frozen=True)
class GwoResult:
    weights: WeightVector
    sv: float
    trace: Tuple[float, ...]
    state: GwoState = field(repr=False)


class GreyWolfOptimizer:
    """
    Maximizes an objective over the probability simplex.

    Positions are repaired onto the simplex after every move and rearranged
    so that min(important) >= max(non-important). The ordering still enters
    the fitness as a penalty for positions supplied from outside the pack.
    The returned weights are the best penalty-free position seen.
    """

    LEADERS = 3

    def __init__(
        self,
        objective: Callable[[np.ndarray], np.ndarray],
        dim: int,
        cfg: GwoConfig,
        important: Sequence[int] = (),
        non_important: Sequence[int] = (),
    ):
        self.objective = objective
        self.dim = dim
        self.cfg = cfg
        self.important = np.asarray(important, dtype=int)
        self.non_important = np.asarray(non_important, dtype=int)
        self.ordered = self.important.size > 0 and self.non_important.size > 0
        if self.ordered and sorted(np.concatenate((self.important, self.non_important))) != list(range(dim)):
            raise BadParamsError("important and non-important criteria must partition the dimensions")

    def violation(self, positions: np.ndarray) -> np.ndarray:
        if not self.ordered:
            return np.zeros(positions.shape[0])
        gap = positions[:, self.non_important].max(axis=1) - positions[:, self.important].min(axis=1)
        return np.maximum(gap, 0.0)

    def evaluate(self, positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        sv = np.asarray(self.objective(positions), dtype=float)
        violation = self.violation(positions)
        return sv - self.cfg.penalty_coeff * violation, sv, violation

    def arrange(self, positions: np.ndarray) -> np.ndarray:
        """
        Move the K largest entries of every row onto the important criteria.

        Relative order inside each group is kept, so an already ordered row
        is returned unchanged. Row sums are preserved.
        """
        if not self.ordered:
            return positions
        k = self.important.size
        descending = -np.sort(-positions, axis=1)
        rows = np.arange(positions.shape[0])[:, None]
        important = self.important[np.argsort(-positions[:, self.important], axis=1, kind="stable")]
        non_important = self.non_important[np.argsort(-positions[:, self.non_important], axis=1, kind="stable")]
        arranged = np.empty_like(positions)
        arranged[rows, important] = descending[:, :k]
        arranged[rows, non_important] = descending[:, k:]
        return arranged

    def repair(self, positions: np.ndarray) -> np.ndarray:
        """Clamp to [0, 1], rescale each row to sum to 1 and restore the ordering"""
        clipped = np.clip(positions, 0.0, 1.0)
        sums = clipped.sum(axis=1, keepdims=True)
        safe = np.where(sums > 0, sums, 1.0)
        return self.arrange(np.where(sums > 0, clipped / safe, 1.0 / self.dim))

    def initial_positions(self, rng: np.random.Generator) -> np.ndarray:
        raw = rng.dirichlet(np.ones(self.dim), size=self.cfg.pack_size)
        if self.ordered:
            descending = -np.sort(-raw, axis=1)
            for p in range(self.cfg.pack_size):
                slots = np.concatenate((rng.permutation(self.important), rng.permutation(self.non_important)))
                raw[p, slots] = descending[p]
        # Agent 0 starts at the centroid
        raw[0] = 1.0 / self.dim
        return raw

    def _select_leaders(self, positions: np.ndarray, fitness: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        top = np.argsort(-fitness, kind="stable")[:self.LEADERS]
        return positions[top].copy(), fitness[top].copy()

    def run(self) -> GwoResult:
        cfg = self.cfg
        rng = np.random.default_rng(cfg.seed)

        positions = self.initial_positions(rng)
        fitness, sv, violation = self.evaluate(positions)
        leaders, leader_fitness = self._select_leaders(positions, fitness)
        best, best_sv = None, -np.inf
        best, best_sv = self._track_feasible(positions, sv, violation, best, best_sv)

        state = GwoState(positions=positions, fitness=fitness, leaders=leaders,
                         leader_fitness=leader_fitness, a=gwo_schedule(0, cfg.iterations), t=0)
        trace: List[float] = [float(leader_fitness[0])]

        for t in range(cfg.iterations):
            a = gwo_schedule(t, cfg.iterations)
            moves = []
            for leader in state.leaders:
                r1 = rng.random((cfg.pack_size, self.dim))
                r2 = rng.random((cfg.pack_size, self.dim))
                A = 2.0 * a * r1 - a
                C = 2.0 * r2
                D = np.abs(C * leader - state.positions)
                moves.append(leader - A * D)

            positions = self.repair(np.mean(moves, axis=0))
            fitness, sv, violation = self.evaluate(positions)
            best, best_sv = self._track_feasible(positions, sv, violation, best, best_sv)

            # Incumbent leaders compete with the new pack, so alpha never worsens
            pool = np.vstack((state.leaders, positions))
            pool_fitness = np.concatenate((state.leader_fitness, fitness))
            leaders, leader_fitness = self._select_leaders(pool, pool_fitness)

            state = GwoState(positions=positions, fitness=fitness, leaders=leaders,
                             leader_fitness=leader_fitness, a=gwo_schedule(t + 1, cfg.iterations), t=t + 1)
            trace.append(float(leader_fitness[0]))

        logger.debug("GWO finished: alpha fitness %.6g, best feasible SV %.6g", trace[-1], best_sv)
        return GwoResult(weights=WeightVector.from_array(best), sv=float(best_sv),
                         trace=tuple(trace), state=state)

    @staticmethod
    def _track_feasible(positions, sv, violation, best, best_sv):
        feasible = np.flatnonzero(violation == 0.0)
        if feasible.size:
            k = feasible[np.argmax(sv[feasible])]
            if sv[k] > best_sv:
                return positions[k].copy(), float(sv[k])
        return best, best_sv


def run_gwo(dm: DecisionMatrix, il: ImportanceList, method: Method, cfg: GwoConfig,
            attrs: Sequence[Attribute] = ATTRIBUTES) -> GwoResult:
    objective = sv_objective(dm.array, method, benefit_mask(attrs))
    optimizer = GreyWolfOptimizer(objective, len(attrs), cfg,
                                  important=il.important_indices,
                                  non_important=il.non_important_indices)
    return optimizer.run()


def gwo_optimize(dm: DecisionMatrix, il: ImportanceList, method: Method, cfg: GwoConfig,
                 attrs: Sequence[Attribute] = ATTRIBUTES) -> WeightVector:
    """Objective weights W^O: the feasible weight vector with the largest score spread found"""
    result = run_gwo(dm, il, method, cfg, attrs)
    final = result.state
    logger.debug("GWO %s: SV %.6g after %d iterations, alpha %s (fitness %.6g)",
                 method.value, result.sv, final.t, np.round(final.leaders[0], 4), final.leader_fitness[0])
    return result.weights


# MARK: - Comprehensive weights

def combine_weights(ws: WeightVector, wo: WeightVector, hp: HybridParams) -> WeightVector:
    """W = alpha * W^S + beta * W^O"""
    if len(ws.w) != len(wo.w):
        raise BadParamsError(f"Cannot combine {len(ws.w)} and {len(wo.w)} weights")
    combined = hp.alpha * ws.array + hp.beta * wo.array
    return WeightVector.from_array(np.clip(combined, 0.0, 1.0))


@dataclass(frozen=True)
class WeightBundle:
    subjective: Optional[WeightVector]
    objective: Optional[WeightVector]
    combined: WeightVector
    bwm: Optional[BwmSolution] = None


def weights_for(weighting: Weighting, tc: TrafficClass, method: Method,
                dm: Optional[DecisionMatrix], gwo: GwoConfig, hybrid: HybridParams,
                objective: Optional[WeightVector] = None) -> WeightBundle:
    """
    Weights of one weighting scheme.

    Args:
        objective: Precomputed W^O to reuse instead of running GWO again
    """
    if weighting is Weighting.AHP:
        ahp = ahp_weights(tc)
        return WeightBundle(subjective=ahp, objective=None, combined=ahp)

    if weighting is Weighting.BWM:
        solution = bwm_weights(tc)
        return WeightBundle(subjective=solution.w_star, objective=None,
                            combined=solution.w_star, bwm=solution)

    if objective is None:
        if dm is None:
            raise BadParamsError(f"{weighting.value} weights need a decision matrix")
        objective = gwo_optimize(dm, derive_limpo(tc), method, gwo)

    if weighting is Weighting.GWO:
        return WeightBundle(subjective=None, objective=objective, combined=objective)

    solution = bwm_weights(tc)
    return WeightBundle(subjective=solution.w_star, objective=objective,
                        combined=combine_weights(solution.w_star, objective, hybrid), bwm=solution)
