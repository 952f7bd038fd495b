#!/usr/bin/env python3
"""Run every preset's invariant suite and write one JSON-lines report each.

Usage:
    python scripts/run_all_validations.py [--out-dir reports] [--seed 0]
"""

import argparse
import pathlib
import sys

from liebundles.reporting import render_jsonl, summary_dict
from liebundles.scenarios import PRESET_NAMES, build_scenario
from liebundles.suites import run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="reports")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    any_failed = False
    for name in PRESET_NAMES:
        scenario = build_scenario(name)
        records = run_suite(scenario, seed=args.seed)
        summary = summary_dict(records, name, args.seed, scenario.config.get("step", 5e-3))
        path = out_dir / f"{name}.jsonl"
        path.write_text(render_jsonl(records, summary), encoding="utf-8")
        failed = [r.check for r in records if not r.passed]
        any_failed = any_failed or bool(failed)
        status = "ok" if not failed else f"FAILED: {', '.join(failed)}"
        print(f"{name:20s} {len(records):3d} checks  {status}  -> {path}")
    return 1 if any_failed else 0


if __name__ == "__main__":
    sys.exit(main())
