"""Dataset file formats: CSV and JSONL ingestion and emission.

Binary CSV layout is ``score,label``; multi-class is
``score_0,...,score_{n-1},label``.  JSONL rows carry ``scores`` (array; length
1 means a binary positive-class score) and ``label``.  Simulator output may
append the sidecar columns ``signal`` and ``true_posterior`` (or
``true_posterior_0..n-1``); ingestion reads them into a sidecar and excludes
them from the dataset proper.  Floats are serialized at 17 significant
digits, which round-trips 64-bit values exactly.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import ScoredDataset
from .errors import EmptyDataset, ParseError, RangeError

SCORE_SLACK = 1e-9


def _fmt(x):
    return f"{x:.17g}"


def _parse_score(text, line):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse score {text!r}", line) from None
    if not math.isfinite(value):
        raise RangeError(f"score {text!r} is not finite", line)
    if value < -SCORE_SLACK or value > 1.0 + SCORE_SLACK:
        raise RangeError(f"score {value!r} outside [0, 1]", line)
    return min(max(value, 0.0), 1.0)


def _parse_label(text, line, n_classes):
    if isinstance(text, (bool, float)):
        raise ParseError(f"label {text!r} must be an integer", line)
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"cannot parse label {text!r} as an integer", line) from None
    if not 0 <= value < n_classes:
        raise RangeError(f"label {value} outside [0, {n_classes})", line)
    return value


@dataclass
class ParsedTable:
    """A parsed dataset file: the dataset, sidecar truth columns, raw rows."""

    data: ScoredDataset
    sidecar: dict = field(default_factory=dict)
    header: list | None = None
    raw_rows: list = field(default_factory=list)


def _csv_layout(header):
    """Split a CSV header into (n score columns, sidecar column names)."""
    if header and header[0] == "score":
        score_cols, rest = 1, header[1:]
    else:
        score_cols = 0
        while score_cols < len(header) and header[score_cols] == f"score_{score_cols}":
            score_cols += 1
        if score_cols < 2:
            raise ParseError(
                f"header must start with 'score' or 'score_0,score_1,...', got {header!r}",
                line=1,
            )
        rest = header[score_cols:]
    if not rest or rest[0] != "label":
        raise ParseError("expected a 'label' column after the scores", line=1)
    sidecar_cols = rest[1:]
    allowed = ["signal"]
    if score_cols == 1:
        allowed.append("true_posterior")
    else:
        allowed.extend(f"true_posterior_{j}" for j in range(score_cols))
    position = 0
    for name in sidecar_cols:
        while position < len(allowed) and allowed[position] != name:
            position += 1
        if position == len(allowed):
            raise ParseError(f"unknown column {name!r}", line=1)
        position += 1
    posterior_cols = [n for n in sidecar_cols if n.startswith("true_posterior_")]
    if posterior_cols and len(posterior_cols) != score_cols:
        raise ParseError(
            f"expected {score_cols} true_posterior_* columns, got {len(posterior_cols)}",
            line=1,
        )
    return score_cols, sidecar_cols


def _read_csv(path):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path} is empty") from None
        score_cols, sidecar_cols = _csv_layout([h.strip() for h in header])
        n_classes = 2 if score_cols == 1 else score_cols
        expected_fields = score_cols + 1 + len(sidecar_cols)

        scores, labels, raw_rows = [], [], []
        sidecar_values = {name: [] for name in sidecar_cols}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != expected_fields:
                raise ParseError(
                    f"expected {expected_fields} fields, got {len(row)}", line_no
                )
            row_scores = [_parse_score(row[j], line_no) for j in range(score_cols)]
            scores.append(row_scores[0] if score_cols == 1 else row_scores)
            labels.append(_parse_label(row[score_cols], line_no, n_classes))
            for offset, name in enumerate(sidecar_cols):
                text = row[score_cols + 1 + offset]
                if name == "signal":
                    sidecar_values[name].append(_parse_label(text, line_no, 2**31))
                else:
                    sidecar_values[name].append(_parse_score(text, line_no))
            raw_rows.append(row)
    if not labels:
        raise EmptyDataset(f"{path} contains a header but no rows")

    data = ScoredDataset(n_classes=n_classes, scores=np.array(scores), labels=np.array(labels))
    sidecar = {}
    if "signal" in sidecar_values:
        sidecar["signal"] = np.array(sidecar_values["signal"], dtype=np.int64)
    if "true_posterior" in sidecar_values:
        sidecar["true_posterior"] = np.array(sidecar_values["true_posterior"])
    posterior_cols = [n for n in sidecar_cols if n.startswith("true_posterior_")]
    if posterior_cols:
        sidecar["true_posterior"] = np.column_stack(
            [np.array(sidecar_values[n]) for n in posterior_cols]
        )
    return ParsedTable(data=data, sidecar=sidecar, header=[h.strip() for h in header], raw_rows=raw_rows)


def _read_jsonl(path):
    scores, labels, raw_rows = [], [], []
    signals, posteriors = [], []
    n_score_cols = None
    with open(path) as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line_no) from None
            if not isinstance(obj, dict) or "scores" not in obj or "label" not in obj:
                raise ParseError("row must be an object with 'scores' and 'label'", line_no)
            row_scores = obj["scores"]
            if not isinstance(row_scores, list) or not row_scores:
                raise ParseError("'scores' must be a nonempty array", line_no)
            if n_score_cols is None:
                n_score_cols = len(row_scores)
            elif len(row_scores) != n_score_cols:
                raise ParseError(
                    f"inconsistent score dimension ({len(row_scores)} vs {n_score_cols})",
                    line_no,
                )
            parsed = [_parse_score(repr(v), line_no) for v in row_scores]
            n_classes = 2 if n_score_cols == 1 else n_score_cols
            scores.append(parsed[0] if n_score_cols == 1 else parsed)
            labels.append(_parse_label(obj["label"], line_no, n_classes))
            if "signal" in obj:
                signals.append(_parse_label(obj["signal"], line_no, 2**31))
            if "true_posterior" in obj:
                value = obj["true_posterior"]
                if isinstance(value, list):
                    posteriors.append([_parse_score(repr(v), line_no) for v in value])
                else:
                    posteriors.append(_parse_score(repr(value), line_no))
            raw_rows.append(obj)
    if not labels:
        raise EmptyDataset(f"{path} contains no rows")
    n_classes = 2 if n_score_cols == 1 else n_score_cols
    data = ScoredDataset(n_classes=n_classes, scores=np.array(scores), labels=np.array(labels))
    sidecar = {}
    if signals:
        sidecar["signal"] = np.array(signals, dtype=np.int64)
    if posteriors:
        sidecar["true_posterior"] = np.array(posteriors)
    return ParsedTable(data=data, sidecar=sidecar, raw_rows=raw_rows)


def read_table(path, fmt="csv"):
    """Parse a dataset file, keeping sidecar columns and raw row text."""
    if fmt == "csv":
        return _read_csv(path)
    if fmt == "jsonl":
        return _read_jsonl(path)
    raise ParseError(f"unknown format {fmt!r}")


def ingest(path, fmt="csv"):
    """Load a dataset file, validating scores, labels, and layout."""
    return read_table(path, fmt).data


def emit_dataset(path, data, fmt="csv", sidecar=None):
    """Write a dataset (plus optional sidecar truth) in an ingestible format."""
    sidecar = sidecar or {}
    binary = data.is_binary
    posterior = sidecar.get("true_posterior")
    signal = sidecar.get("signal")
    if fmt == "csv":
        header = ["score"] if binary else [f"score_{j}" for j in range(data.n_classes)]
        header.append("label")
        if signal is not None:
            header.append("signal")
        if posterior is not None:
            if binary:
                header.append("true_posterior")
            else:
                header.extend(f"true_posterior_{j}" for j in range(data.n_classes))
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for i in range(data.n_rows):
                row = (
                    [_fmt(data.scores[i])]
                    if binary
                    else [_fmt(v) for v in data.scores[i]]
                )
                row.append(str(int(data.labels[i])))
                if signal is not None:
                    row.append(str(int(signal[i])))
                if posterior is not None:
                    if binary:
                        row.append(_fmt(posterior[i]))
                    else:
                        row.extend(_fmt(v) for v in posterior[i])
                writer.writerow(row)
        return
    if fmt == "jsonl":
        with open(path, "w") as handle:
            for i in range(data.n_rows):
                obj = {
                    "scores": (
                        [float(_fmt(data.scores[i]))]
                        if binary
                        else [float(_fmt(v)) for v in data.scores[i]]
                    ),
                    "label": int(data.labels[i]),
                }
                if signal is not None:
                    obj["signal"] = int(signal[i])
                if posterior is not None:
                    obj["true_posterior"] = (
                        float(_fmt(posterior[i]))
                        if binary
                        else [float(_fmt(v)) for v in posterior[i]]
                    )
                handle.write(json.dumps(obj) + "\n")
        return
    raise ParseError(f"unknown format {fmt!r}")
