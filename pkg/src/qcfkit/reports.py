"""Machine-readable verification reports.

Reports hold only exact or decimal-string data: big integers and cyclotomic
residues are serialized as decimal strings / coefficient lists, and every
high-precision value is rendered as a decimal string with its source
precision recorded in the config echo, so a consumer can re-verify without
binary floats. Output is byte-deterministic for a fixed config except for
the volatile `run_meta` block (timestamp, elapsed time).
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from mpmath import mp

from . import __version__
from .polyring import CycloElem


def decimal_str(x, precision_bits: Optional[int] = None) -> str:
    """A decimal-string rendering of a high-precision real/complex value."""
    if x is None:
        return ""
    if x is mp.inf:
        return "inf"
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    bits = precision_bits if precision_bits is not None else mp.prec
    dps = max(8, int(bits * 0.30103) - 2)
    return mp.nstr(x, dps, strip_zeros=False)


def residue_payload(e: CycloElem) -> dict:
    return {
        "order": e.m,
        "coefficients": [str(c) for c in e.rep.coeffs],
    }


@dataclass
class Report:
    command: str
    config: dict
    items: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    banner: Optional[str] = None
    version: str = __version__
    _started: float = field(default_factory=time.monotonic, repr=False)

    def finalize(self, passed: int, failed: int, skipped: int = 0) -> "Report":
        self.summary = {
            "total": passed + failed + skipped,
            "passed": passed,
            "failed": failed,
            "skipped": skipped,
        }
        return self

    @property
    def ok(self) -> bool:
        return self.summary.get("failed", 0) == 0

    def payload(self, include_meta: bool = True) -> dict:
        out = {
            "tool": "qcfkit",
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "items": self.items,
            "summary": self.summary,
        }
        if self.banner:
            out["banner"] = self.banner
        if include_meta:
            out["run_meta"] = {
                "generated_at": datetime.now(timezone.utc).isoformat(),
                "elapsed_seconds": round(time.monotonic() - self._started, 3),
            }
        return out

    def to_json(self, include_meta: bool = True) -> str:
        return json.dumps(
            self.payload(include_meta), sort_keys=True, indent=2, ensure_ascii=False
        )

    def to_csv(self) -> str:
        """Flat CSV of the per-item results (header row, comma separator)."""
        buf = io.StringIO()
        if not self.items:
            return ""
        keys = sorted({k for item in self.items for k in item})
        writer = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore")
        writer.writeheader()
        for item in self.items:
            writer.writerow({k: _flatten(v) for k, v in item.items()})
        return buf.getvalue()


def _flatten(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    if isinstance(v, bool) or v is None:
        return v
    return v


def write_gap_csv(path, rows) -> None:
    """The witness gap trajectory: columns n, |Q_n(y)|, gap, threshold."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "abs_q_n_at_y", "gap", "threshold"])
        for n, abs_q, gap, threshold in rows:
            writer.writerow([n, decimal_str(abs_q), decimal_str(gap), decimal_str(threshold)])
