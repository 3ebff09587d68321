"""CSV readers for interval and summary files.

Every reader takes a path or an open text stream.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .inference import SampleSummary
from .order import IntervalFamily

INTERVAL_COLUMNS = ("label", "lower", "upper")
SE_COLUMNS = ("label", "mean", "se")
SUMMARY_COLUMNS = ("label", "mean", "sd", "n")


class InputError(ValueError):
    pass


def _load(source) -> str:
    """Text of a CSV given as a path or an open text stream."""
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text(encoding="utf-8")


def _rows(source, required):
    """Yield (line number, row dict)."""
    text = _load(source)
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip().lower() for h in (reader.fieldnames or [])]
    if not header:
        raise InputError("no intervals: input is empty")
    missing = [c for c in required if c not in header]
    if missing:
        raise InputError(f"line 1: header must contain {','.join(required)}; missing {','.join(missing)}")
    reader.fieldnames = header
    for row in reader:
        if not any((v or "").strip() for v in row.values() if isinstance(v, str)):
            continue
        yield reader.line_num, row


def _number(row, key, line, kind=float):
    raw = (row.get(key) or "").strip()
    try:
        value = kind(raw)
    except ValueError:
        raise InputError(f"line {line}: {key} {raw!r} is not a valid number") from None
    if isinstance(value, float) and not math.isfinite(value):
        raise InputError(f"line {line}: {key} must be finite")
    return value


def _label(row, line, seen):
    label = (row.get("label") or "").strip()
    if not label:
        raise InputError(f"line {line}: empty label")
    if label in seen:
        raise InputError(f"line {line}: duplicate label {label!r}")
    seen.add(label)
    return label


def read_intervals(source) -> IntervalFamily:
    """``label,lower,upper`` rows."""
    labels, lefts, rights, seen = [], [], [], set()
    for line, row in _rows(source, INTERVAL_COLUMNS):
        label = _label(row, line, seen)
        lo = _number(row, "lower", line)
        hi = _number(row, "upper", line)
        if not lo < hi:
            raise InputError(f"line {line}: lower must be less than upper ({lo} >= {hi})")
        labels.append(label)
        lefts.append(lo)
        rights.append(hi)
    if not labels:
        raise InputError("no intervals")
    return IntervalFamily(lefts, rights, labels)


def read_standard_errors(source) -> tuple[list[str], list[float], list[float]]:
    """``label,mean,se`` rows."""
    labels, means, ses, seen = [], [], [], set()
    for line, row in _rows(source, SE_COLUMNS):
        labels.append(_label(row, line, seen))
        means.append(_number(row, "mean", line))
        se = _number(row, "se", line)
        if not se > 0:
            raise InputError(f"line {line}: se must be positive")
        ses.append(se)
    if not labels:
        raise InputError("no intervals")
    return labels, means, ses


def read_summaries(source) -> list[SampleSummary]:
    """``label,mean,sd,n`` rows."""
    out, seen = [], set()
    for line, row in _rows(source, SUMMARY_COLUMNS):
        label = _label(row, line, seen)
        try:
            out.append(SampleSummary(label, _number(row, "mean", line),
                                     _number(row, "sd", line), _number(row, "n", line, int)))
        except InputError:
            raise
        except ValueError as exc:
            raise InputError(f"line {line}: {exc}") from None
    if not out:
        raise InputError("no intervals")
    return out


def sniff_columns(text: str) -> list[str]:
    first = text.splitlines()[:1]
    return [h.strip().lower() for h in first[0].split(",")] if first else []
