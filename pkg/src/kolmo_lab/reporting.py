"""Machine-readable report envelopes: JSON (schema-validated) and CSV.

Every report embeds the library version, the command, the seed and a full
config echo, so identical configurations reproduce byte-identical files
(timestamps are optional and excluded under --no-timestamp).  Complex
numbers serialize as {"re": ..., "im": ...}; CSV uses '.' decimals and no
locale.
"""

from __future__ import annotations

import csv
import json
import math
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from . import __version__

__all__ = [
    "sanitize",
    "format_big_int",
    "int_log10",
    "int_digit_count",
    "build_report",
    "write_json_report",
    "write_csv",
    "load_schema",
]

_EXACT_INT_DIGITS = 60


def int_log10(n):
    """log10 of a positive integer of any size (no string conversion)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    bits = n.bit_length()
    if bits <= 900:
        return math.log10(float(n))
    shift = bits - 60
    return math.log10(float(n >> shift)) + shift * math.log10(2.0)


def int_digit_count(n):
    return 1 if n == 0 else int(int_log10(abs(n))) + 1


def format_big_int(n):
    """Decimal string for moderate integers, power notation beyond."""
    if n != 0 and int_digit_count(abs(n)) > _EXACT_INT_DIGITS:
        return f"~10^{int_log10(abs(n)):.3f}" if n > 0 else f"-~10^{int_log10(-n):.3f}"
    return str(n)


def sanitize(obj):
    """Recursively convert values into JSON-encodable structures."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, int):
        return obj if abs(obj) < 2**53 else format_big_int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(np.real(obj)), "im": float(np.imag(obj))}
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    return obj


def build_report(command, config_echo, results, seed=0, threads=1,
                 verdict=None, notes=(), no_timestamp=False):
    report = {
        "tool": "kolmo-lab",
        "version": __version__,
        "command": command,
        "seed": int(seed),
        "threads": int(threads),
        "config": sanitize(config_echo),
        "results": sanitize(results),
        "verdict": verdict,
        "notes": [str(n) for n in notes],
    }
    if not no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return report


def write_json_report(path, report):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def load_schema():
    text = resources.files("kolmo_lab").joinpath("report.schema.json").read_text()
    return json.loads(text)
