import math
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    computed_field,
    field_validator,
    model_validator,
)

from criteria_config import CRITERIA_CONFIG


WEIGHT_SUM_TOLERANCE = 1e-9
PUBLISHED_SUM_TOLERANCE = CRITERIA_CONFIG["published_sum_tolerance"]


# MARK: - Errors

class MatrixError(ValueError):
    """Base class for decision matrix problems; names the offending cell when known"""

    def __init__(self, message: str, row: Optional[int] = None, col: Optional[int] = None):
        super().__init__(message)
        self.row = row
        self.col = col


class NonFiniteError(MatrixError):
    pass


class NegativeValueError(MatrixError):
    pass


class ZeroColumnError(MatrixError):
    pass


class WrongArityError(MatrixError):
    pass


class DivisionByZeroError(MatrixError):
    pass


class MatrixFormatError(MatrixError):
    """Raised for malformed matrix CSV input"""
    pass


class BadParamsError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class MismatchedCandidatesError(ValueError):
    pass


class InfeasibleError(RuntimeError):
    """Raised when a linear program has no feasible point or the solver gives up"""
    pass


class UnboundedError(RuntimeError):
    """Raised when a linear program is unbounded below"""
    pass


# MARK: - Enumerations

class AttributeId(str, Enum):
    CB = "CB"
    S = "S"
    DR = "DR"
    D = "D"
    J = "J"
    PLR = "PLR"


class Direction(str, Enum):
    BENEFIT = "benefit"
    COST = "cost"


class RatType(str, Enum):
    WIFI = "WiFi"
    WIMAX = "WiMAX"
    LTE = "LTE"
    FIVE_G = "FiveG"


RAT_ALIASES = {"5G": RatType.FIVE_G, "FIVEG": RatType.FIVE_G, "WIFI": RatType.WIFI,
               "WIMAX": RatType.WIMAX, "LTE": RatType.LTE}


class TrafficClass(str, Enum):
    CONVERSATIONAL = "conversational"
    BACKGROUND = "background"
    INTERACTIVE = "interactive"
    STREAMING = "streaming"


class Method(str, Enum):
    TOPSIS = "topsis"
    SAW = "saw"


class Weighting(str, Enum):
    AHP = "ahp"
    BWM = "bwm"
    GWO = "gwo"
    BWM_GWO = "bwm-gwo"


class Removal(str, Enum):
    BEST = "best"
    WORST = "worst"


class NormalizationKind(str, Enum):
    TOPSIS_VECTOR = "topsis-vector"
    SAW_RATIO = "saw-ratio"


# MARK: - Attributes

class Attribute(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: AttributeId
    direction: Direction
    units: str
    label: str = ""


ATTRIBUTES: Tuple[Attribute, ...] = tuple(
    Attribute(id=AttributeId(key), direction=Direction(entry["direction"]),
              units=entry["units"], label=entry["label"])
    for key, entry in CRITERIA_CONFIG["attributes"].items()
)
ATTRIBUTE_IDS: Tuple[AttributeId, ...] = tuple(a.id for a in ATTRIBUTES)
M_ATTRIBUTES = len(ATTRIBUTES)


def benefit_mask(attrs: Sequence[Attribute]) -> np.ndarray:
    """Boolean mask, True for benefit columns"""
    ids = [a.id for a in attrs]
    if len(set(ids)) != len(ids):
        raise WrongArityError("Attribute list repeats an attribute id")
    return np.array([a.direction is Direction.BENEFIT for a in attrs], dtype=bool)


# MARK: - Decision matrix

class CandidateLabel(BaseModel):
    model_config = ConfigDict(frozen=True)

    rat: RatType
    index: int = Field(0, ge=0)

    def __str__(self) -> str:
        return f"{self.rat.value}-{self.index}"


class DecisionMatrix(BaseModel):
    """N candidate networks x M attribute values, canonical column order"""
    model_config = ConfigDict(frozen=True)

    values: Tuple[Tuple[float, ...], ...]
    labels: Tuple[CandidateLabel, ...] = ()

    @classmethod
    def from_array(cls, values, labels: Sequence[CandidateLabel] = ()) -> "DecisionMatrix":
        array = np.asarray(values, dtype=float)
        return cls(values=tuple(tuple(row) for row in array.tolist()), labels=tuple(labels))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    @property
    def n_candidates(self) -> int:
        return len(self.values)

    def label(self, i: int) -> str:
        if self.labels:
            return str(self.labels[i])
        return f"#{i}"

    def drop(self, index: int) -> "DecisionMatrix":
        """Copy of the matrix without candidate `index`"""
        if not 0 <= index < self.n_candidates:
            raise MismatchedCandidatesError(f"No candidate {index} in a matrix of {self.n_candidates}")
        values = self.values[:index] + self.values[index + 1:]
        labels = self.labels[:index] + self.labels[index + 1:] if self.labels else ()
        return DecisionMatrix.model_construct(values=values, labels=labels)


def validate_matrix(dm: DecisionMatrix) -> DecisionMatrix:
    """
    Check the decision matrix invariants.

    Returns:
        The same matrix, unchanged

    Raises:
        WrongArityError, NonFiniteError, NegativeValueError, ZeroColumnError
    """
    if dm.n_candidates < 1:
        raise WrongArityError("Decision matrix has no candidates")
    if dm.labels and len(dm.labels) != dm.n_candidates:
        raise WrongArityError(
            f"Decision matrix has {dm.n_candidates} rows but {len(dm.labels)} labels"
        )

    for i, row in enumerate(dm.values):
        if len(row) != M_ATTRIBUTES:
            raise WrongArityError(
                f"Row {i} has {len(row)} values, expected {M_ATTRIBUTES}", row=i
            )
        for j, value in enumerate(row):
            if not math.isfinite(value):
                raise NonFiniteError(f"Non-finite value at row {i}, col {j}", row=i, col=j)
            if value < 0:
                raise NegativeValueError(f"Negative value {value} at row {i}, col {j}", row=i, col=j)

    for j in range(M_ATTRIBUTES):
        if all(row[j] == 0 for row in dm.values):
            raise ZeroColumnError(f"Column {j} ({ATTRIBUTE_IDS[j].value}) is entirely zero", col=j)

    return dm


# MARK: - Weights and rankings

class WeightVector(BaseModel):
    """Nonnegative weights summing to 1"""
    model_config = ConfigDict(frozen=True)

    w: Tuple[float, ...] = Field(..., min_length=1)

    @field_validator("w")
    @classmethod
    def validate_simplex(cls, v: Tuple[float, ...], info: ValidationInfo) -> Tuple[float, ...]:
        tolerance = WEIGHT_SUM_TOLERANCE
        if info.context and "sum_tolerance" in info.context:
            tolerance = info.context["sum_tolerance"]

        for i, value in enumerate(v):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Weight {i} = {value} is outside [0, 1]")
        total = math.fsum(v)
        if abs(total - 1.0) > tolerance:
            raise ValueError(f"Weights sum to {total}, expected 1")
        return v

    @classmethod
    def from_array(cls, values) -> "WeightVector":
        return cls(w=tuple(np.asarray(values, dtype=float).tolist()))

    @classmethod
    def published(cls, values: Sequence[float]) -> "WeightVector":
        """Accept a published row whose entries were rounded before printing"""
        return cls.model_validate(
            {"w": tuple(values)}, context={"sum_tolerance": PUBLISHED_SUM_TOLERANCE}
        )

    @property
    def array(self) -> np.ndarray:
        return np.array(self.w, dtype=float)

    def as_dict(self) -> Dict[str, float]:
        if len(self.w) != M_ATTRIBUTES:
            return {str(i): value for i, value in enumerate(self.w)}
        return {attr.value: value for attr, value in zip(ATTRIBUTE_IDS, self.w)}

    def __getitem__(self, attr: AttributeId) -> float:
        return self.w[ATTRIBUTE_IDS.index(attr)]


def ranking_order(scores) -> List[int]:
    """Indices sorted by score descending, ties to the lower index"""
    return np.argsort(-np.asarray(scores, dtype=float), kind="stable").tolist()


class Ranking(BaseModel):
    model_config = ConfigDict(frozen=True)

    scores: Tuple[float, ...]
    order: Tuple[int, ...]
    method: Method

    @model_validator(mode="after")
    def validate_order(self) -> "Ranking":
        n = len(self.scores)
        if sorted(self.order) != list(range(n)):
            raise ValueError("order must be a permutation of the candidate indices")
        for first, second in zip(self.order, self.order[1:]):
            a, b = self.scores[first], self.scores[second]
            if a < b or (a == b and first > second):
                raise ValueError("order must sort scores descending, ties by lower index")
        return self

    @classmethod
    def from_scores(cls, scores, method: Method) -> "Ranking":
        scores = np.asarray(scores, dtype=float)
        return cls(scores=tuple(scores.tolist()), order=tuple(ranking_order(scores)), method=method)

    @property
    def best(self) -> int:
        return self.order[0]

    @property
    def worst(self) -> int:
        return self.order[-1]


class NormalizedMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: Tuple[Tuple[float, ...], ...]
    source_method: NormalizationKind

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


class TopsisDistances(BaseModel):
    model_config = ConfigDict(frozen=True)

    s_plus: Tuple[float, ...]
    s_minus: Tuple[float, ...]

    @field_validator("s_plus", "s_minus")
    @classmethod
    def validate_nonnegative(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(d < 0 for d in v):
            raise ValueError("Distances must be nonnegative")
        return v


# MARK: - Weighting types

class ImportanceList(BaseModel):
    """Criteria of a traffic class, most important first (Limpo)"""
    model_config = ConfigDict(frozen=True)

    limpo: Tuple[AttributeId, ...]
    important_count: int = CRITERIA_CONFIG["bwm"]["important_count"]

    @model_validator(mode="after")
    def validate_limpo(self) -> "ImportanceList":
        if len(self.limpo) != M_ATTRIBUTES or set(self.limpo) != set(ATTRIBUTE_IDS):
            raise ValueError("limpo must list every attribute exactly once")
        if not 1 <= self.important_count < M_ATTRIBUTES:
            raise ValueError("important_count must leave both sublists non-empty")
        return self

    @property
    def important(self) -> Tuple[AttributeId, ...]:
        return self.limpo[:self.important_count]

    @property
    def non_important(self) -> Tuple[AttributeId, ...]:
        return self.limpo[self.important_count:]

    @property
    def important_indices(self) -> List[int]:
        return [ATTRIBUTE_IDS.index(a) for a in self.important]

    @property
    def non_important_indices(self) -> List[int]:
        return [ATTRIBUTE_IDS.index(a) for a in self.non_important]


class BwmComparisons(BaseModel):
    """Best-to-others and others-to-worst judgements on the 1..9 scale"""
    model_config = ConfigDict(frozen=True)

    best: int = Field(..., ge=0)
    worst: int = Field(..., ge=0)
    a_best: Tuple[int, ...]
    a_worst: Tuple[int, ...]
    criteria: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def validate_judgements(self) -> "BwmComparisons":
        lo, hi = CRITERIA_CONFIG["bwm"]["scale"]
        m = len(self.a_best)
        if m < 2 or len(self.a_worst) != m:
            raise ValueError("a_best and a_worst must have the same length >= 2")
        if self.criteria and len(self.criteria) != m:
            raise ValueError("criteria names must match the judgement vectors")
        if self.best >= m or self.worst >= m or self.best == self.worst:
            raise ValueError("best and worst must be distinct criterion indices")
        if any(not lo <= a <= hi for a in self.a_best + self.a_worst):
            raise ValueError(f"Judgements must lie in {lo}..{hi}")
        if self.a_best[self.best] != 1 or self.a_worst[self.worst] != 1:
            raise ValueError("a_BB and a_WW must equal 1")
        if self.a_best[self.worst] != max(self.a_best) or self.a_worst[self.best] != max(self.a_worst):
            raise ValueError("best-over-worst must be the largest judgement of each vector")
        return self

    @property
    def size(self) -> int:
        return len(self.a_best)


class BwmSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    w_star: WeightVector
    xi_star: float = Field(..., ge=0.0)
    consistency_ratio: Optional[float] = None


class GwoConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    pack_size: int = Field(30, ge=4)
    iterations: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    penalty_coeff: float = Field(10.0, ge=0.0)


class HybridParams(BaseModel):
    """Subjective (alpha) and objective (beta) shares of the comprehensive weight"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(0.2, ge=0.0)
    beta: float = Field(0.8, ge=0.0)

    @model_validator(mode="after")
    def validate_convex(self) -> "HybridParams":
        if abs(self.alpha + self.beta - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"alpha + beta must equal 1, got {self.alpha + self.beta}")
        return self


# MARK: - Scenario types

class RatProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    rat: RatType
    ranges: Dict[AttributeId, Tuple[float, float]]

    @field_validator("ranges")
    @classmethod
    def validate_ranges(cls, v: Dict[AttributeId, Tuple[float, float]]) -> Dict[AttributeId, Tuple[float, float]]:
        if set(v) != set(ATTRIBUTE_IDS):
            raise ValueError("A profile needs a range for every attribute")
        for attr, (lo, hi) in v.items():
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or lo > hi:
                raise ValueError(f"Invalid range [{lo}, {hi}] for {attr.value}")
        return v

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper bounds in canonical attribute order"""
        lows = np.array([self.ranges[a][0] for a in ATTRIBUTE_IDS], dtype=float)
        highs = np.array([self.ranges[a][1] for a in ATTRIBUTE_IDS], dtype=float)
        return lows, highs


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    networks_per_iteration: int = 8
    seed: int = Field(0, ge=0, lt=2 ** 64)
    profiles: Optional[Tuple[RatProfile, ...]] = None

    @field_validator("networks_per_iteration")
    @classmethod
    def validate_networks(cls, v: int) -> int:
        if v < 4 or v % 4 != 0:
            raise ValueError("networks_per_iteration must be a positive multiple of 4")
        return v

    @field_validator("profiles")
    @classmethod
    def validate_profiles(cls, v: Optional[Tuple[RatProfile, ...]]) -> Optional[Tuple[RatProfile, ...]]:
        if v is not None and [p.rat for p in v] != list(RatType):
            raise ValueError("profiles must cover WiFi, WiMAX, LTE, FiveG in that order")
        return v

    @property
    def instances_per_rat(self) -> int:
        return self.networks_per_iteration // 4


# MARK: - Experiment types

def _unique(values: Tuple, name: str) -> Tuple:
    if not values:
        raise ValueError(f"{name} must not be empty")
    if len(set(values)) != len(values):
        raise ValueError(f"{name} must not repeat entries")
    return values


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    iterations: int = Field(2000, ge=1)
    methods: Tuple[Method, ...] = (Method.TOPSIS, Method.SAW)
    weightings: Tuple[Weighting, ...] = tuple(Weighting)
    classes: Tuple[TrafficClass, ...] = tuple(TrafficClass)
    removals: Tuple[Removal, ...] = (Removal.WORST,)
    chain: bool = True
    reweight_per_step: bool = False
    seed: int = Field(2025, ge=0, lt=2 ** 64)
    workers: int = Field(1, ge=1)
    scenario: ScenarioConfig = ScenarioConfig()
    gwo: GwoConfig = GwoConfig()
    hybrid: HybridParams = HybridParams()

    @field_validator("methods", "weightings", "classes", "removals")
    @classmethod
    def validate_subsets(cls, v: Tuple, info: ValidationInfo) -> Tuple:
        return _unique(v, info.field_name)

    def config_keys(self) -> List["ConfigKey"]:
        """Stats rows in output order"""
        return [
            ConfigKey(method, weighting, traffic_class, removal)
            for method in self.methods
            for weighting in self.weightings
            for traffic_class in self.classes
            for removal in self.removals
        ]


class ConfigKey(NamedTuple):
    method: Method
    weighting: Weighting
    traffic_class: TrafficClass
    removal: Removal


class RrpStats(BaseModel):
    """Rank-reversal counts for one (method, weighting, class, removal) configuration"""
    model_config = ConfigDict(frozen=True)

    method: Method
    weighting: Weighting
    traffic_class: TrafficClass
    removal: Removal
    iterations_with_reversal: int = Field(..., ge=0)
    total_iterations: int = Field(..., ge=0)
    reversal_steps: int = Field(..., ge=0)
    total_steps: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_counts(self) -> "RrpStats":
        if self.iterations_with_reversal > self.total_iterations:
            raise ValueError("more reversal iterations than iterations")
        if not self.iterations_with_reversal <= self.reversal_steps <= self.total_steps:
            raise ValueError("reversal step counts are inconsistent")
        return self

    @computed_field
    @property
    def incidence(self) -> float:
        if self.total_iterations == 0:
            return 0.0
        return self.iterations_with_reversal / self.total_iterations

    @computed_field
    @property
    def step_ratio(self) -> float:
        if self.total_steps == 0:
            return 0.0
        return self.reversal_steps / self.total_steps

    @property
    def key(self) -> ConfigKey:
        return ConfigKey(self.method, self.weighting, self.traffic_class, self.removal)


class WeightStudyResult(BaseModel):
    """Subjective, objective and comprehensive weights averaged over seeded scenarios"""
    model_config = ConfigDict(frozen=True)

    method: Method
    traffic_class: TrafficClass
    scenarios: int
    ahp: Dict[str, float]
    mean_subjective: Dict[str, float]
    mean_objective: Dict[str, float]
    mean_combined: Dict[str, float]
    exceeds_ahp_share: Dict[str, float]
