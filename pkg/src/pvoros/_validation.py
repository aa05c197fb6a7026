"""Input validation helpers shared by the functional API and the estimators."""

import math

import numpy as np
from sklearn.utils import assert_all_finite, check_consistent_length, column_or_1d

from .exceptions import DataError


def check_scores_labels(scores, labels):
    """Validate a score vector and its binary labels.

    Returns float64 scores and int8 labels as 1-d arrays.
    """
    scores = column_or_1d(np.asarray(scores, dtype=float), warn=True)
    labels = column_or_1d(np.asarray(labels), warn=True)
    if scores.size == 0:
        raise DataError("empty input: need at least one score")
    check_consistent_length(scores, labels)
    assert_all_finite(scores, input_name="scores")
    bad = ~np.isin(labels, (0, 1))
    if bad.any():
        first = labels[np.argmax(bad)].item()
        raise DataError(f"labels must be 0 or 1, found {first!r}")
    labels = labels.astype(np.int8)
    if not labels.any():
        raise DataError("labels contain no positive examples (class 1 missing)")
    if labels.all():
        raise DataError("labels contain no negative examples (class 0 missing)")
    return scores, labels


def check_fraction(value, name, *, low_open=False, high_open=False):
    """Return ``value`` as float after checking it lies in [0, 1]."""
    value = float(value)
    if math.isnan(value):
        raise ValueError(f"{name} must be a number, got nan")
    lo_ok = value > 0 if low_open else value >= 0
    hi_ok = value < 1 if high_open else value <= 1
    if not (lo_ok and hi_ok):
        lo = "(" if low_open else "["
        hi = ")" if high_open else "]"
        raise ValueError(f"{name} must lie in {lo}0, 1{hi}, got {value}")
    return value


def check_count(value, name, *, minimum=0):
    value = float(value)
    if not math.isfinite(value) or value < minimum:
        raise ValueError(f"{name} must be a finite number >= {minimum}, got {value}")
    return value
