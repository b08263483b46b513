"""
Monte-Carlo rank-reversal experiment: rank the candidates, remove the best or
worst one, re-rank with the same weights, and count how often the surviving
candidates change relative order.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from madm import method_scores
from models import (
    ATTRIBUTE_IDS,
    ATTRIBUTES,
    BadParamsError,
    ConfigKey,
    DecisionMatrix,
    ExperimentConfig,
    GwoConfig,
    HybridParams,
    Method,
    MismatchedCandidatesError,
    Ranking,
    Removal,
    RrpStats,
    ScenarioConfig,
    TrafficClass,
    WeightStudyResult,
    Weighting,
    benefit_mask,
    validate_matrix,
)
from scenario import derive_seed, derive_stream, generate_networks
from weighting import (
    ahp_weights,
    bwm_weights,
    combine_weights,
    derive_limpo,
    gwo_optimize,
    weights_for,
)

logger = logging.getLogger(__name__)

BENEFIT = benefit_mask(ATTRIBUTES)

# (raw values, weights, method) -> one score per candidate
Ranker = Callable[[np.ndarray, np.ndarray, Method], np.ndarray]


def madm_scores(values: np.ndarray, weights: np.ndarray, method: Method) -> np.ndarray:
    return method_scores(values, weights, method, BENEFIT)


def detect_rank_reversal(before: Ranking, after: Ranking, removed: int) -> bool:
    """
    True if any pair of surviving candidates is ordered differently in `after`
    than in `before` with `removed` deleted. Candidates of `after` are the
    candidates of `before` in their original order, minus `removed`.
    """
    if not 0 <= removed < len(before.order):
        raise MismatchedCandidatesError(f"Removed candidate {removed} is not in the ranking")
    if len(after.order) != len(before.order) - 1:
        raise MismatchedCandidatesError(
            f"Expected {len(before.order) - 1} candidates after removal, got {len(after.order)}"
        )

    # Both are total orders over the same survivors, so a pair flips iff the sequences differ
    induced = [c if c < removed else c - 1 for c in before.order if c != removed]
    return induced != list(after.order)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    flags: Dict[ConfigKey, Tuple[bool, ...]]


def removal_chain(
    values: np.ndarray,
    method: Method,
    removal: Removal,
    chain: bool,
    weights_at: Callable[[np.ndarray, int], np.ndarray],
    ranker: Ranker = madm_scores,
) -> Tuple[bool, ...]:
    """
    Remove candidates one at a time until two remain (or once when chain is
    false), returning one reversal flag per removal step.

    Args:
        weights_at: Weights for the current matrix at a given step
    """
    flags = []
    before = Ranking.from_scores(ranker(values, weights_at(values, 0), method), method)
    step = 0
    while values.shape[0] > 2:
        removed = before.best if removal is Removal.BEST else before.worst
        values = np.delete(values, removed, axis=0)
        step += 1
        after = Ranking.from_scores(ranker(values, weights_at(values, step), method), method)
        flags.append(detect_rank_reversal(before, after, removed))
        before = after
        if not chain:
            break
    return tuple(flags)


def _class_position(tc: TrafficClass) -> int:
    return list(TrafficClass).index(tc)


def _method_position(method: Method) -> int:
    return list(Method).index(method)


def run_iteration(it_index: int, cfg: ExperimentConfig,
                  dm: Optional[DecisionMatrix] = None,
                  ranker: Optional[Ranker] = None) -> IterationRecord:
    """
    One Monte-Carlo iteration: generate (or take) a matrix and run the removal
    chain for every configured (method, weighting, class, removal).
    Weights are computed once per iteration unless reweight_per_step is set.
    """
    ranker = ranker or madm_scores
    if dm is None:
        dm = generate_networks(cfg.scenario, derive_stream(cfg.seed, it_index))
    validate_matrix(dm)
    if dm.n_candidates < 3:
        raise BadParamsError("The removal experiment needs at least three candidates")
    values = dm.array

    flags: Dict[ConfigKey, Tuple[bool, ...]] = {}
    for tc in cfg.classes:
        for method in cfg.methods:
            seed_keys = (it_index, _class_position(tc), _method_position(method))
            objective = None

            for weighting in cfg.weightings:
                if weighting in (Weighting.GWO, Weighting.BWM_GWO) and objective is None:
                    gwo = cfg.gwo.model_copy(update={"seed": derive_seed(cfg.seed, *seed_keys, 0)})
                    objective = gwo_optimize(dm, derive_limpo(tc), method, gwo)

                bundle = weights_for(weighting, tc, method, dm, cfg.gwo, cfg.hybrid, objective=objective)
                fixed = bundle.combined.array

                def weights_at(current: np.ndarray, step: int,
                               weighting=weighting, tc=tc, method=method,
                               fixed=fixed, seed_keys=seed_keys) -> np.ndarray:
                    if step == 0 or not cfg.reweight_per_step or weighting in (Weighting.AHP, Weighting.BWM):
                        return fixed
                    gwo = cfg.gwo.model_copy(update={"seed": derive_seed(cfg.seed, *seed_keys, step)})
                    reduced = DecisionMatrix.from_array(current)
                    return weights_for(weighting, tc, method, reduced, gwo, cfg.hybrid).combined.array

                for removal in cfg.removals:
                    key = ConfigKey(method, weighting, tc, removal)
                    flags[key] = removal_chain(values, method, removal, cfg.chain, weights_at, ranker)

    return IterationRecord(index=it_index, flags=flags)


def _records(cfg: ExperimentConfig, ranker: Optional[Ranker]) -> Iterable[IterationRecord]:
    task = partial(run_iteration, cfg=cfg)
    if cfg.workers > 1 and ranker is None:
        chunksize = max(1, cfg.iterations // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            yield from executor.map(task, range(cfg.iterations), chunksize=chunksize)
    else:
        for it_index in range(cfg.iterations):
            yield run_iteration(it_index, cfg, ranker=ranker)


def run_experiment(cfg: ExperimentConfig, ranker: Optional[Ranker] = None) -> List[RrpStats]:
    """
    Aggregate rank-reversal counts over cfg.iterations iterations.

    Counts are pure sums, so the result does not depend on execution order or
    on the number of workers.
    """
    hp = cfg.hybrid
    keys = cfg.config_keys()
    logger.info(
        "Running %d iterations: %d configurations, %d networks, chain=%s, workers=%d, alpha=%.3g",
        cfg.iterations, len(keys), cfg.scenario.networks_per_iteration, cfg.chain, cfg.workers, hp.alpha,
    )

    # key -> [iterations_with_reversal, total_iterations, reversal_steps, total_steps]
    counts = {key: [0, 0, 0, 0] for key in keys}
    report_every = max(1, cfg.iterations // 10)
    started = time.perf_counter()

    for done, record in enumerate(_records(cfg, ranker), start=1):
        for key, steps in record.flags.items():
            tally = counts[key]
            tally[0] += int(any(steps))
            tally[1] += 1
            tally[2] += sum(steps)
            tally[3] += len(steps)
        if done % report_every == 0:
            logger.info("  %d/%d iterations", done, cfg.iterations)

    logger.info("Experiment finished in %.2fs", time.perf_counter() - started)
    return [
        RrpStats(
            method=key.method,
            weighting=key.weighting,
            traffic_class=key.traffic_class,
            removal=key.removal,
            iterations_with_reversal=tally[0],
            total_iterations=tally[1],
            reversal_steps=tally[2],
            total_steps=tally[3],
        )
        for key, tally in counts.items()
    ]


def weight_study(
    tc: TrafficClass,
    methods: Sequence[Method],
    scenarios: int,
    seed: int,
    scenario: ScenarioConfig = ScenarioConfig(),
    gwo: GwoConfig = GwoConfig(),
    hybrid: HybridParams = HybridParams(),
) -> List[WeightStudyResult]:
    """
    Subjective, objective and comprehensive weights over `scenarios` seeded
    matrices, compared against the AHP row of the class.
    """
    if scenarios < 1:
        raise BadParamsError("weight study needs at least one scenario")
    ahp = ahp_weights(tc).array
    subjective = bwm_weights(tc).w_star
    il = derive_limpo(tc)

    results = []
    for method in methods:
        objectives = []
        combined = []
        for s in range(scenarios):
            dm = generate_networks(scenario, derive_stream(seed, s))
            run_cfg = gwo.model_copy(update={"seed": derive_seed(seed, s, _method_position(method))})
            wo = gwo_optimize(dm, il, method, run_cfg)
            objectives.append(wo.array)
            combined.append(combine_weights(subjective, wo, hybrid).array)

        objectives = np.array(objectives)
        combined = np.array(combined)
        results.append(WeightStudyResult(
            method=method,
            traffic_class=tc,
            scenarios=scenarios,
            ahp=_keyed(ahp),
            mean_subjective=_keyed(subjective.array),
            mean_objective=_keyed(objectives.mean(axis=0)),
            mean_combined=_keyed(combined.mean(axis=0)),
            exceeds_ahp_share=_keyed((combined > ahp).mean(axis=0)),
        ))
        logger.info("Weight study %s/%s: DR above AHP in %.0f%% of %d scenarios",
                    method.value, tc.value, 100 * results[-1].exceeds_ahp_share["DR"], scenarios)
    return results


def _keyed(values: np.ndarray) -> Dict[str, float]:
    return {attr.value: float(v) for attr, v in zip(ATTRIBUTE_IDS, values)}
