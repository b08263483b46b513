"""File persistence for decision matrices, weight vectors and experiment stats"""
import json
import logging
import re
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from models import (
    ATTRIBUTE_IDS,
    RAT_ALIASES,
    CandidateLabel,
    DecisionMatrix,
    MatrixFormatError,
    RatType,
    RrpStats,
    WeightStudyResult,
    WeightVector,
    validate_matrix,
)

logger = logging.getLogger(__name__)

MATRIX_COLUMNS = ["rat"] + [a.value.lower() for a in ATTRIBUTE_IDS]
STATS_COLUMNS = ["method", "weighting", "class", "removal", "iterations", "incidence", "step_ratio"]
FLOAT_FORMAT = "%.15g"

PathLike = Union[str, Path]

_LABEL_PATTERN = re.compile(r"^(?P<rat>.+?)(?:-(?P<index>\d+))?$")


# MARK: - Decision matrices

def parse_label(text: str) -> CandidateLabel:
    """
    Parse a candidate label such as "WiFi-1", "LTE" or "5G-0".

    Raises:
        ValueError: if the RAT name is unknown
    """
    match = _LABEL_PATTERN.match(text.strip())
    if match is None:
        raise ValueError("Empty RAT label")
    name = match.group("rat")
    index = int(match.group("index") or 0)
    try:
        rat = RatType(name)
    except ValueError:
        rat = RAT_ALIASES.get(name.upper())
        if rat is None:
            raise ValueError(f"Unknown RAT '{name}'")
    return CandidateLabel(rat=rat, index=index)


def read_matrix_csv(path: PathLike) -> DecisionMatrix:
    """
    Read a decision matrix with header `rat,cb,s,dr,d,j,plr`.

    Raises:
        MatrixFormatError: on a missing file, a wrong header or an unparsable cell,
            naming the offending row and column
        MatrixError: if the parsed values fail validation
    """
    path = Path(path)
    if not path.is_file():
        raise MatrixFormatError(f"Matrix file not found: {path}")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise MatrixFormatError(f"Cannot parse {path}: {e}")

    header = [str(c).strip().lower() for c in frame.columns]
    for col, (found, expected) in enumerate(zip(header, MATRIX_COLUMNS)):
        if found != expected:
            raise MatrixFormatError(
                f"Header column {col} is '{found}', expected '{expected}'", col=col
            )
    if len(header) != len(MATRIX_COLUMNS):
        raise MatrixFormatError(
            f"Header has {len(header)} columns, expected {len(MATRIX_COLUMNS)}: {','.join(MATRIX_COLUMNS)}"
        )
    if frame.empty:
        raise MatrixFormatError(f"{path} has no candidate rows")

    labels = []
    rows = []
    for row, record in enumerate(frame.itertuples(index=False)):
        try:
            labels.append(parse_label(record[0]))
        except ValueError as e:
            raise MatrixFormatError(f"Row {row}, column 'rat': {e}", row=row, col=0)

        values = []
        for col, cell in enumerate(record[1:]):
            try:
                values.append(float(cell))
            except ValueError:
                raise MatrixFormatError(
                    f"Row {row}, column '{MATRIX_COLUMNS[col + 1]}': '{cell}' is not a number",
                    row=row, col=col + 1,
                )
        rows.append(values)

    return validate_matrix(DecisionMatrix.from_array(np.array(rows), labels))


def write_matrix_csv(dm: DecisionMatrix, path: PathLike) -> Path:
    """Write a decision matrix in the format read_matrix_csv accepts"""
    path = Path(path)
    labels = [dm.label(i) for i in range(dm.n_candidates)]
    frame = pd.DataFrame(dm.array, columns=MATRIX_COLUMNS[1:])
    frame.insert(0, "rat", labels)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info("Wrote %d candidates to %s", dm.n_candidates, path)
    return path


# MARK: - Experiment stats

RRP_METRICS_NOTE = (
    "The rank reversal ratio has no single published formula. 'incidence' is the share "
    "of iterations with at least one reversal along the removal chain; 'step_ratio' is the "
    "share of removal steps that reversed any surviving pair."
)


def stats_frame(stats: Sequence[RrpStats]) -> pd.DataFrame:
    """Stats rows in the given order, columns as in the stats CSV"""
    return pd.DataFrame(
        [
            {
                "method": s.method.value,
                "weighting": s.weighting.value,
                "class": s.traffic_class.value,
                "removal": s.removal.value,
                "iterations": s.total_iterations,
                "incidence": s.incidence,
                "step_ratio": s.step_ratio,
            }
            for s in stats
        ],
        columns=STATS_COLUMNS,
    )


def stats_payload(stats: Sequence[RrpStats], metadata: Optional[Dict] = None) -> Dict:
    return {
        "metadata": {"rrp_metrics": RRP_METRICS_NOTE, **(metadata or {})},
        "stats": [s.model_dump(mode="json") for s in stats],
    }


def write_stats(stats: Sequence[RrpStats], path: PathLike, fmt: str = "csv",
                metadata: Optional[Dict] = None) -> Path:
    """
    Write experiment stats as CSV (summary columns) or JSON (full counts).

    Args:
        fmt: "csv" or "json"
        metadata: Extra JSON metadata, e.g. the experiment config
    """
    path = Path(path)
    if fmt == "csv":
        stats_frame(stats).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    elif fmt == "json":
        path.write_text(dumps(stats_payload(stats, metadata)))
    else:
        raise ValueError(f"Unknown output format '{fmt}'")
    logger.info("Wrote %d stats rows to %s", len(stats), path)
    return path


# MARK: - Weights

def weights_frame(vectors: Dict[str, Optional[WeightVector]]) -> pd.DataFrame:
    """One row per named weight vector, one column per attribute"""
    rows = {name: w.as_dict() for name, w in vectors.items() if w is not None}
    return pd.DataFrame.from_dict(rows, orient="index", columns=[a.value for a in ATTRIBUTE_IDS])


def weights_payload(vectors: Dict[str, Optional[WeightVector]], extra: Optional[Dict] = None) -> Dict:
    payload = {name: w.as_dict() for name, w in vectors.items() if w is not None}
    payload.update(extra or {})
    return payload


def weight_study_frame(results: Sequence[WeightStudyResult]) -> pd.DataFrame:
    """Long table: one row per (method, vector) with one column per attribute"""
    rows = []
    for result in results:
        for name in ("ahp", "mean_subjective", "mean_objective", "mean_combined", "exceeds_ahp_share"):
            rows.append({
                "method": result.method.value,
                "class": result.traffic_class.value,
                "vector": name,
                **getattr(result, name),
            })
    return pd.DataFrame(rows, columns=["method", "class", "vector"] + [a.value for a in ATTRIBUTE_IDS])


def dumps(payload: Dict) -> str:
    # repr of a float is the shortest string that round-trips
    return json.dumps(payload, indent=2) + "\n"
