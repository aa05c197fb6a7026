"""CSV ingestion, CSV/JSON writers and the synthetic score generator.

Two tabular inputs are understood, both UTF-8 with a header row:

* scores: ``id,score,label`` with label 0 or 1, one row per example;
* rocpoints: ``fpr,tpr`` or ``fpr,tpr,threshold``, one row per operating point.

Every file written here goes through :func:`atomic_write_text`, and every
float is printed with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import DataError
from .roc_core import RocCurve, build_roc_curve

SCORES = "scores"
ROCPOINTS = "rocpoints"
SCORES_HEADER = ["id", "score", "label"]


def fmt_float(x) -> str:
    """17-significant-digit text for a float; infinities become ``inf``/``-inf``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def dumps_json(obj, indent=2) -> str:
    """JSON text with every float at 17 significant digits.

    Non-finite floats are emitted as the strings ``"inf"``, ``"-inf"`` and
    ``"nan"`` so the output stays strict JSON.
    """

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None or isinstance(o, bool):
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            text = fmt_float(o)
            return text if math.isfinite(o) else json.dumps(text)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            if len(o) == 0:
                return "[]"
            if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0) + "\n"


def atomic_write_text(path, text: str):
    """Write ``text`` (UTF-8, LF newlines) to a temporary sibling, then rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _read_rows(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError("file not found", path=path) from None
    except UnicodeDecodeError as exc:
        raise DataError(f"not valid UTF-8 ({exc.reason})", path=path) from None
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text, newline="")), start=1) if r]
    if len(rows) < 2:
        raise DataError("no rows", path=path)
    return path, rows[0], rows[1:]


def _parse_float(text, what, line, path):
    try:
        return float(text)
    except ValueError:
        raise DataError(f"{what} {text!r} is not a number", line=line, path=path) from None


@dataclass(frozen=True)
class ScoreTable:
    name: str
    ids: tuple
    scores: np.ndarray
    labels: np.ndarray
    path: Optional[Path] = None

    def curve(self) -> RocCurve:
        try:
            return build_roc_curve(self.scores, self.labels, name=self.name)
        except DataError as exc:
            raise DataError(str(exc), path=self.path) from None


def read_scores(path) -> ScoreTable:
    """Parse a scores file; the table name is the file stem."""
    path, header, body = _read_rows(path)
    if [h.strip() for h in header[1]] != SCORES_HEADER:
        raise DataError(f"header must be {','.join(SCORES_HEADER)}, got {','.join(header[1])}", line=header[0], path=path)
    ids, scores, labels = [], [], []
    for line, row in body:
        if len(row) != 3:
            raise DataError(f"expected 3 fields, got {len(row)}", line=line, path=path)
        s = _parse_float(row[1].strip(), "score", line, path)
        if not math.isfinite(s):
            raise DataError(f"score {row[1]!r} is not finite", line=line, path=path)
        lab = row[2].strip()
        if lab not in ("0", "1"):
            raise DataError(f"label must be 0 or 1, got {lab!r}", line=line, path=path)
        ids.append(row[0])
        scores.append(s)
        labels.append(int(lab))
    return ScoreTable(path.stem, tuple(ids), np.array(scores), np.array(labels, dtype=np.int8), path)


def read_rocpoints(path) -> RocCurve:
    """Parse a rocpoints file into a sorted curve named after the file stem."""
    path, header, body = _read_rows(path)
    cols = [h.strip() for h in header[1]]
    if cols not in (["fpr", "tpr"], ["fpr", "tpr", "threshold"]):
        raise DataError(f"header must be fpr,tpr[,threshold], got {','.join(header[1])}", line=header[0], path=path)
    width = len(cols)
    pts, thr = [], []
    for line, row in body:
        if len(row) != width:
            raise DataError(f"expected {width} fields, got {len(row)}", line=line, path=path)
        x = _parse_float(row[0].strip(), "fpr", line, path)
        y = _parse_float(row[1].strip(), "tpr", line, path)
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise DataError(f"point ({row[0]}, {row[1]}) lies outside the unit square", line=line, path=path)
        pts.append((x, y))
        if width == 3:
            t = _parse_float(row[2].strip(), "threshold", line, path)
            if math.isnan(t):
                raise DataError("threshold is nan", line=line, path=path)
            thr.append(t)
    return RocCurve.from_points(pts, thr if width == 3 else None, name=path.stem)


def ingest(path, fmt: str = SCORES):
    """Load one candidate file: a :class:`ScoreTable` for scores, a curve for rocpoints."""
    if fmt == SCORES:
        return read_scores(path)
    if fmt == ROCPOINTS:
        return read_rocpoints(path)
    raise ValueError(f"format must be {SCORES!r} or {ROCPOINTS!r}, got {fmt!r}")


def rocpoints_text(curve: RocCurve) -> str:
    if curve.has_thresholds:
        return csv_text(["fpr", "tpr", "threshold"], zip(curve.fpr, curve.tpr, curve.thresholds))
    return csv_text(["fpr", "tpr"], zip(curve.fpr, curve.tpr))


def write_rocpoints(path, curve: RocCurve):
    atomic_write_text(path, rocpoints_text(curve))


def scores_text(ids, scores, labels) -> str:
    return csv_text(SCORES_HEADER, zip(ids, map(float, scores), map(int, labels)))


def write_scores(path, ids, scores, labels):
    atomic_write_text(path, scores_text(ids, scores, labels))


def synth_generate(n_pos, n_neg, *, mu1=1.0, sigma1=1.0, mu0=0.0, sigma0=1.0, seed=0, path: Optional[str] = None):
    """Two-Gaussian scores: positives ~ N(mu1, sigma1), negatives ~ N(mu0, sigma0).

    Positives are drawn first, then negatives, from one seeded generator.
    Returns ``(ids, scores, labels)`` and writes a scores file when ``path``
    is given.
    """
    for name, n in (("n_pos", n_pos), ("n_neg", n_neg)):
        if int(n) != n or n < 1:
            raise ValueError(f"{name} must be an integer >= 1, got {n}")
    for name, s in (("sigma1", sigma1), ("sigma0", sigma0)):
        if not s > 0:
            raise ValueError(f"{name} must be > 0, got {s}")
    n_pos, n_neg = int(n_pos), int(n_neg)
    rng = np.random.default_rng(seed)
    scores = np.concatenate([rng.normal(mu1, sigma1, n_pos), rng.normal(mu0, sigma0, n_neg)])
    labels = np.concatenate([np.ones(n_pos, dtype=np.int8), np.zeros(n_neg, dtype=np.int8)])
    width = len(str(n_pos + n_neg))
    ids = [f"s{i:0{width}d}" for i in range(n_pos + n_neg)]
    if path is not None:
        write_scores(path, ids, scores, labels)
    return ids, scores, labels


__all__ = [
    "ScoreTable",
    "ingest",
    "read_scores",
    "read_rocpoints",
    "write_rocpoints",
    "write_scores",
    "rocpoints_text",
    "scores_text",
    "synth_generate",
    "atomic_write_text",
    "dumps_json",
    "fmt_float",
    "csv_text",
]
