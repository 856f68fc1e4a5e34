"""Deterministic report files: canonical JSON and CSV.

Floats are written with 17 significant digits so values round-trip
exactly, keys are sorted, and separators are fixed; two runs with the
same inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import json.encoder

import numpy as np

__all__ = ["fmt_float", "canonical_json", "write_json", "write_csv"]


def fmt_float(x):
    """17-significant-digit decimal form of a finite float."""
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite float in deterministic output")
    return format(x, ".17g")


class _SigFigEncoder(json.JSONEncoder):
    """JSONEncoder with the float path replaced by fmt_float."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None

        def floatstr(x, allow_nan=False, **_):
            return fmt_float(x)

        make = json.encoder._make_iterencode(
            markers, self.default, json.encoder.encode_basestring_ascii,
            self.indent, floatstr, self.key_separator, self.item_separator,
            self.sort_keys, self.skipkeys, False)
        return make(o, 0)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def canonical_json(obj):
    """Canonical JSON text with a trailing newline."""
    return _SigFigEncoder(
        sort_keys=True, indent=2, separators=(",", ": "),
    ).encode(_plain(obj)) + "\n"


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        fh.write(canonical_json(obj))


def write_csv(path, fieldnames, rows):
    """Rows of dicts to CSV, floats through fmt_float."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fieldnames),
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            out = {}
            for key in fieldnames:
                val = row[key]
                if isinstance(val, (float, np.floating)):
                    out[key] = fmt_float(val)
                else:
                    out[key] = val
            writer.writerow(out)
