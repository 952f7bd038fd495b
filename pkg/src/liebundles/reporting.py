"""Check records and machine-readable report emission (JSON-lines, CSV)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import List, Optional

__all__ = ["CheckRecord", "summary_dict", "render_jsonl", "write_report", "records_to_csv"]


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one invariant check.

    ``mode`` is "max<=tol" for ordinary residual checks and "min>tol" for
    negative controls that must visibly fail.
    """

    check: str
    label: str
    scenario: str
    samples: int
    max_residual: float
    mean_residual: float
    tolerance: float
    passed: bool
    mode: str = "max<=tol"
    order_estimate: Optional[float] = None

    def to_dict(self):
        return {
            "check": self.check,
            "label": self.label,
            "scenario": self.scenario,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "order_estimate": self.order_estimate,
            "tolerance": self.tolerance,
            "mode": self.mode,
            "passed": self.passed,
        }


def make_record(check, label, scenario, residuals, tolerance, samples=None, order=None,
                mode="max<=tol"):
    residuals = [float(r) for r in residuals] or [0.0]
    mx = max(residuals)
    mean = sum(residuals) / len(residuals)
    if mode == "max<=tol":
        passed = mx <= tolerance
    elif mode == "min>tol":
        passed = min(residuals) > tolerance
    else:
        raise ValueError(f"unknown mode {mode}")
    return CheckRecord(
        check=check, label=label, scenario=scenario,
        samples=samples if samples is not None else len(residuals),
        max_residual=mx, mean_residual=mean, tolerance=float(tolerance),
        passed=bool(passed), mode=mode,
        order_estimate=None if order is None else float(order),
    )


def summary_dict(records: List[CheckRecord], scenario, seed, step):
    return {
        "summary": {
            "scenario": scenario,
            "seed": seed,
            "step": step,
            "checks": len(records),
            "failed": sorted(r.check for r in records if not r.passed),
            "all_passed": all(r.passed for r in records),
        }
    }


def render_jsonl(records, summary, meta=None):
    """Deterministic JSON-lines text: sorted records, then summary, then meta."""
    lines = [json.dumps(r.to_dict(), sort_keys=True) for r in
             sorted(records, key=lambda r: r.check)]
    lines.append(json.dumps(summary, sort_keys=True))
    if meta is not None:
        lines.append(json.dumps({"meta": meta}, sort_keys=True))
    return "\n".join(lines) + "\n"


def write_report(text, out_path=None):
    if out_path is None:
        print(text, end="")
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def records_to_csv(dicts):
    """CSV of residuals from parsed JSON-lines record dicts."""
    fields = ["check", "scenario", "samples", "max_residual", "mean_residual",
              "order_estimate", "tolerance", "mode", "passed"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
    writer.writeheader()
    for rec in dicts:
        writer.writerow(rec)
    return buf.getvalue()
