import math

import numpy as np
import pytest
from pydantic import ValidationError

from models import (
    ATTRIBUTE_IDS,
    ATTRIBUTES,
    AttributeId,
    BwmComparisons,
    CandidateLabel,
    DecisionMatrix,
    Direction,
    ExperimentConfig,
    HybridParams,
    ImportanceList,
    Method,
    NegativeValueError,
    NonFiniteError,
    RatType,
    Ranking,
    Removal,
    RrpStats,
    ScenarioConfig,
    TrafficClass,
    WeightVector,
    Weighting,
    WrongArityError,
    ZeroColumnError,
    benefit_mask,
    validate_matrix,
)


class TestAttributes:
    """Test suite for the attribute catalogue"""

    def test_canonical_order(self):
        """Test columns follow CB, S, DR, D, J, PLR"""
        assert [a.value for a in ATTRIBUTE_IDS] == ["CB", "S", "DR", "D", "J", "PLR"]

    def test_directions(self):
        """Test S and DR are benefit criteria and the rest are costs"""
        assert benefit_mask(ATTRIBUTES).tolist() == [False, True, True, False, False, False]
        assert ATTRIBUTES[0].direction is Direction.COST

    def test_repeated_attribute_rejected(self):
        """Test a direction mask cannot be built from a list with duplicates"""
        with pytest.raises(WrongArityError):
            benefit_mask([ATTRIBUTES[0], ATTRIBUTES[0]])


class TestDecisionMatrix:
    """Test suite for decision matrix validation"""

    def _row(self, **overrides):
        row = [5.0, 50.0, 10.0, 100.0, 10.0, 20.0]
        for key, value in overrides.items():
            row[ATTRIBUTE_IDS.index(AttributeId(key))] = value
        return row

    def test_valid_matrix(self):
        """Test a well-formed matrix passes unchanged"""
        dm = DecisionMatrix.from_array([self._row(), self._row(CB=7.0)])
        assert validate_matrix(dm) is dm
        assert dm.n_candidates == 2
        assert dm.array.shape == (2, 6)

    def test_single_row_allowed(self):
        """Test a single candidate is a valid matrix"""
        validate_matrix(DecisionMatrix.from_array([self._row()]))

    def test_wrong_arity(self):
        """Test a short row is reported with its index"""
        dm = DecisionMatrix(values=(tuple(self._row()), (1.0, 2.0, 3.0)))
        with pytest.raises(WrongArityError) as exc:
            validate_matrix(dm)
        assert exc.value.row == 1

    def test_negative_value(self):
        """Test a negative entry names its row and column"""
        dm = DecisionMatrix.from_array([self._row(), self._row(D=-1.0)])
        with pytest.raises(NegativeValueError) as exc:
            validate_matrix(dm)
        assert (exc.value.row, exc.value.col) == (1, 3)

    def test_non_finite_value(self):
        """Test NaN and infinity are rejected"""
        for bad in (math.nan, math.inf):
            dm = DecisionMatrix.from_array([self._row(J=bad)])
            with pytest.raises(NonFiniteError) as exc:
                validate_matrix(dm)
            assert exc.value.col == 4

    def test_zero_column(self):
        """Test a column of zeros is rejected"""
        dm = DecisionMatrix.from_array([self._row(PLR=0.0), self._row(PLR=0.0)])
        with pytest.raises(ZeroColumnError) as exc:
            validate_matrix(dm)
        assert exc.value.col == 5

    def test_label_count_must_match(self):
        """Test labels must cover every row"""
        dm = DecisionMatrix.from_array([self._row(), self._row()], [CandidateLabel(rat=RatType.LTE)])
        with pytest.raises(WrongArityError):
            validate_matrix(dm)

    def test_drop_candidate(self):
        """Test dropping a row keeps the others in order"""
        labels = [CandidateLabel(rat=RatType.WIFI, index=i) for i in range(3)]
        dm = DecisionMatrix.from_array([self._row(CB=1.0), self._row(CB=2.0), self._row(CB=3.0)], labels)
        reduced = dm.drop(1)
        assert reduced.array[:, 0].tolist() == [1.0, 3.0]
        assert [reduced.label(i) for i in range(2)] == ["WiFi-0", "WiFi-2"]

    def test_label_text(self):
        """Test candidate labels print as RAT-index"""
        assert str(CandidateLabel(rat=RatType.FIVE_G, index=3)) == "FiveG-3"


class TestWeightVector:
    """Test suite for weight vector validation"""

    def test_valid_weights(self):
        """Test weights on the simplex are accepted"""
        w = WeightVector(w=(0.5, 0.25, 0.25))
        assert w.array.sum() == 1.0

    def test_sum_must_be_one(self):
        """Test a vector that does not sum to one is rejected"""
        with pytest.raises(ValidationError):
            WeightVector(w=(0.5, 0.4))

    def test_entries_must_be_bounded(self):
        """Test negative entries are rejected"""
        with pytest.raises(ValidationError):
            WeightVector(w=(1.5, -0.5))

    def test_published_rows_within_rounding(self):
        """Test published rows summing to 0.997 are accepted only with the rounding tolerance"""
        row = (0.036, 0.124, 0.104, 0.325, 0.307, 0.102)
        assert WeightVector.published(row).w == row
        with pytest.raises(ValidationError):
            WeightVector(w=row)

    def test_lookup_by_attribute(self):
        """Test weights are addressable by attribute id"""
        w = WeightVector(w=(0.1, 0.1, 0.5, 0.1, 0.1, 0.1))
        assert w[AttributeId.DR] == 0.5
        assert w.as_dict()["DR"] == 0.5


class TestRanking:
    """Test suite for rankings"""

    def test_from_scores_descending(self):
        """Test the order lists candidates by score, best first"""
        ranking = Ranking.from_scores([0.2, 0.9, 0.5], Method.TOPSIS)
        assert ranking.order == (1, 2, 0)
        assert ranking.best == 1
        assert ranking.worst == 0

    def test_ties_break_to_lower_index(self):
        """Test equal scores are ordered by candidate index"""
        ranking = Ranking.from_scores([0.5, 0.5, 0.5], Method.SAW)
        assert ranking.order == (0, 1, 2)

    def test_order_must_be_permutation(self):
        """Test an order repeating a candidate is rejected"""
        with pytest.raises(ValidationError):
            Ranking(scores=(0.1, 0.2), order=(1, 1), method=Method.SAW)

    def test_order_must_follow_scores(self):
        """Test an order that contradicts the scores is rejected"""
        with pytest.raises(ValidationError):
            Ranking(scores=(0.1, 0.2), order=(0, 1), method=Method.SAW)
        with pytest.raises(ValidationError):
            Ranking(scores=(0.5, 0.5), order=(1, 0), method=Method.SAW)


class TestWeightingTypes:
    """Test suite for importance lists and BWM judgements"""

    def test_importance_split(self):
        """Test the first three criteria are the important ones"""
        il = ImportanceList(limpo=(AttributeId.D, AttributeId.J, AttributeId.S,
                                   AttributeId.DR, AttributeId.PLR, AttributeId.CB))
        assert il.important == (AttributeId.D, AttributeId.J, AttributeId.S)
        assert il.important_indices == [3, 4, 1]
        assert il.non_important_indices == [2, 5, 0]

    def test_importance_list_needs_every_attribute(self):
        """Test a list with a repeated attribute is rejected"""
        with pytest.raises(ValidationError):
            ImportanceList(limpo=(AttributeId.D,) * 6)

    def test_valid_comparisons(self):
        """Test a consistent judgement pair is accepted"""
        cmp = BwmComparisons(best=0, worst=2, a_best=(1, 2, 4), a_worst=(4, 2, 1))
        assert cmp.size == 3

    def test_best_self_comparison_must_be_one(self):
        """Test a_BB must equal 1"""
        with pytest.raises(ValidationError):
            BwmComparisons(best=0, worst=2, a_best=(2, 2, 4), a_worst=(4, 2, 1))

    def test_best_over_worst_must_be_largest(self):
        """Test a_BW must be the largest judgement"""
        with pytest.raises(ValidationError):
            BwmComparisons(best=0, worst=2, a_best=(1, 5, 4), a_worst=(4, 2, 1))

    def test_scale_bounds(self):
        """Test judgements outside 1..9 are rejected"""
        with pytest.raises(ValidationError):
            BwmComparisons(best=0, worst=1, a_best=(1, 10), a_worst=(10, 1))

    def test_hybrid_must_be_convex(self):
        """Test alpha + beta must equal one"""
        assert HybridParams(alpha=0.3, beta=0.7).alpha == 0.3
        with pytest.raises(ValidationError):
            HybridParams(alpha=0.5, beta=0.6)


class TestExperimentTypes:
    """Test suite for experiment configuration and stats"""

    def test_networks_multiple_of_four(self):
        """Test the scenario size must split evenly over the four RATs"""
        assert ScenarioConfig(networks_per_iteration=12).instances_per_rat == 3
        with pytest.raises(ValidationError):
            ScenarioConfig(networks_per_iteration=6)

    def test_config_key_order(self):
        """Test stats rows enumerate method, weighting, class, removal"""
        cfg = ExperimentConfig(
            methods=(Method.TOPSIS, Method.SAW),
            weightings=(Weighting.AHP, Weighting.BWM_GWO),
            classes=(TrafficClass.STREAMING,),
            removals=(Removal.BEST, Removal.WORST),
        )
        keys = cfg.config_keys()
        assert len(keys) == 8
        assert keys[0] == (Method.TOPSIS, Weighting.AHP, TrafficClass.STREAMING, Removal.BEST)
        assert keys[-1] == (Method.SAW, Weighting.BWM_GWO, TrafficClass.STREAMING, Removal.WORST)

    def test_repeated_selection_rejected(self):
        """Test a method listed twice is rejected"""
        with pytest.raises(ValidationError):
            ExperimentConfig(methods=(Method.SAW, Method.SAW))

    def test_stats_ratios(self):
        """Test incidence and step ratio are derived from the counts"""
        stats = RrpStats(method=Method.TOPSIS, weighting=Weighting.AHP,
                         traffic_class=TrafficClass.BACKGROUND, removal=Removal.WORST,
                         iterations_with_reversal=3, total_iterations=4,
                         reversal_steps=6, total_steps=24)
        assert stats.incidence == 0.75
        assert stats.step_ratio == 0.25
        assert stats.model_dump()["incidence"] == 0.75

    def test_stats_counts_consistent(self):
        """Test fewer reversal steps than reversal iterations is rejected"""
        with pytest.raises(ValidationError):
            RrpStats(method=Method.SAW, weighting=Weighting.BWM,
                     traffic_class=TrafficClass.BACKGROUND, removal=Removal.BEST,
                     iterations_with_reversal=3, total_iterations=4,
                     reversal_steps=2, total_steps=24)

    def test_empty_stats(self):
        """Test zero iterations give zero ratios"""
        stats = RrpStats(method=Method.SAW, weighting=Weighting.BWM,
                         traffic_class=TrafficClass.BACKGROUND, removal=Removal.BEST,
                         iterations_with_reversal=0, total_iterations=0,
                         reversal_steps=0, total_steps=0)
        assert stats.incidence == 0.0
        assert np.isclose(stats.step_ratio, 0.0)
