"""Command-line front end: validate | transport | curvature | report.

Reports are JSON-lines: one record per check (sorted by check id), then a
summary object, then optional environment metadata (suppressed by --no-meta
so runs are byte-reproducible).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bundles import TotalPoint
from .connections import transport_group, transport_multiplicativity_check
from .errors import LieBundleError, UsageError
from .gauge import ConnectionJet, GaugeSecondJet, apply_gauge_second_jet, curvature_map
from .principal import curvature as curvature_eval
from .principal import transport_compatibility_check, transport_total
from .reporting import records_to_csv, render_jsonl, summary_dict, write_report
from .scenarios import PRESET_NAMES, build_scenario, preset_config
from .suites import run_suite

__all__ = ["main", "build_parser"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liebundles",
        description="Validate multiplicative connections, transports, and curvature "
                    "identities on trivialized group-bundle scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (inline scenario or preset overrides)")
        p.add_argument("--scenario", help=f"preset name ({', '.join(PRESET_NAMES)})")
        p.add_argument("--seed", type=int, default=None, help="RNG seed")
        p.add_argument("--step", type=float, default=None, help="integrator step size")
        p.add_argument("--samples", type=int, default=None, help="sample count per check")
        p.add_argument("--out", help="write the JSON-lines report to this path")
        p.add_argument("--no-meta", action="store_true", help="omit environment metadata")

    p_validate = sub.add_parser("validate", help="run the invariant suite for a scenario")
    common(p_validate)
    p_validate.add_argument("--checks", help="comma-separated subset of check ids")

    p_transport = sub.add_parser("transport", help="transport fiber data along a named curve")
    common(p_transport)
    p_transport.add_argument("--curve", default="main", help="curve id from the scenario config")
    p_transport.add_argument("--fiber", help="JSON array of initial fiber algebra coordinates")

    p_curv = sub.add_parser("curvature", help="evaluate curvature at a point on a tangent pair")
    common(p_curv)
    p_curv.add_argument("--point", help="JSON array: base point")
    p_curv.add_argument("--u1", help="JSON array: first tangent")
    p_curv.add_argument("--u2", help="JSON array: second tangent")

    p_report = sub.add_parser("report", help="summarize a JSON-lines report, optionally as CSV")
    p_report.add_argument("--in", dest="in_path", required=True, help="JSON-lines report path")
    p_report.add_argument("--csv", help="write a CSV of residuals to this path")
    return parser


def _load_config(args):
    config = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    name = args.scenario or config.get("scenario")
    if name:
        base = preset_config(name)
        overrides = {k: v for k, v in config.items() if k != "scenario"}
        base.update(overrides)
        config = base
    if not config:
        raise UsageError("provide --scenario or --config")
    if args.seed is not None:
        config["seed"] = args.seed
    if args.step is not None:
        config["step"] = args.step
    if args.samples is not None:
        config["samples"] = args.samples
    _validate_config(config)
    return config


def _validate_config(config):
    if config.get("kind") not in ("principal", "affine", "gauge"):
        raise UsageError("config must declare kind principal|affine|gauge")
    for key in ("step",):
        if key in config and not float(config[key]) > 0:
            raise UsageError(f"config field {key} must be positive")
    for name, tol in config.get("tolerances", {}).items():
        if not float(tol) > 0:
            raise UsageError(f"tolerance for {name} must be positive")
    if "samples" in config and int(config["samples"]) <= 0:
        raise UsageError("samples must be positive")


def _meta(args):
    if args.no_meta:
        return None
    import time

    from . import __version__

    return {
        "package": f"liebundles {__version__}",
        "numpy": np.__version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }


def _emit(records, config, args, extra_summary=None):
    seed = int(config.get("seed", 0))
    step = float(config.get("step", 5e-3))
    summary = summary_dict(records, config.get("name", "inline"), seed, step)
    if extra_summary:
        summary["summary"].update(extra_summary)
    text = render_jsonl(records, summary, meta=_meta(args))
    write_report(text, args.out)
    return 0 if all(r.passed for r in records) else 1


def _cmd_validate(args):
    config = _load_config(args)
    scenario = build_scenario(config)
    only = None
    if args.checks is not None:
        only = args.checks.split(",")
    records = run_suite(
        scenario,
        seed=int(config.get("seed", 0)),
        samples=config.get("samples"),
        step=config.get("step"),
        only=only,
    )
    return _emit(records, config, args)


def _cmd_transport(args):
    from .reporting import make_record

    config = _load_config(args)
    scenario = build_scenario(config)
    if scenario.kind == "gauge":
        raise UsageError("transport applies to principal/affine scenarios; "
                         "use `validate` for gauge presets")
    if args.curve not in scenario.curves:
        raise UsageError(f"curve {args.curve!r} not defined; have {sorted(scenario.curves)}")
    curve = scenario.curves[args.curve]
    seed = int(config.get("seed", 0))
    step = float(config.get("step", 5e-3))
    rng = np.random.default_rng([seed, 1000])
    group = scenario.group
    if args.fiber:
        coords = np.asarray(json.loads(args.fiber), dtype=float)
    else:
        coords = rng.uniform(-1.0, 1.0, group.dim)
    g0 = group.exp(group.algebra(coords))

    nu_result = transport_group(scenario.nu, curve, g0, step=step, with_error_estimate=True)
    partner = group.random_element(rng)
    mult_res = transport_multiplicativity_check(scenario.nu, curve, g0, partner, step=step)
    omega = scenario.omega if scenario.kind == "affine" else scenario.omega_glued
    y0 = TotalPoint(np.asarray(curve.position(curve.a), float), g0)
    end, total_result = transport_total(omega, curve, y0, step=step, with_error_estimate=True)
    compat = transport_compatibility_check(omega, curve, y0, partner, step=step)

    records = [
        make_record("transport-endpoint-membership",
                    "transport endpoint stays on the group", scenario.name,
                    [nu_result.membership_residual, total_result.membership_residual],
                    1e-9),
        make_record("transport-error-estimate",
                    "step-halving error estimate", scenario.name,
                    [nu_result.error_estimate, total_result.error_estimate], 1e-6),
        make_record("transport-multiplicative",
                    "transport is a fiberwise homomorphism", scenario.name,
                    [mult_res], 1e-7),
        make_record("transport-compatibility",
                    "total transport intertwines the fiber action", scenario.name,
                    [compat], 1e-7),
    ]
    extra = {
        "curve": args.curve,
        "initial_fiber": coords.tolist(),
        "endpoint_fiber": group.log(nu_result.element).coords.tolist(),
        "total_endpoint_fiber": scenario.group.log(end.fiber).coords.tolist(),
        "steps": nu_result.steps,
    }
    return _emit(records, config, args, extra_summary=extra)


def _cmd_curvature(args):
    from .reporting import make_record

    config = _load_config(args)
    scenario = build_scenario(config)
    seed = int(config.get("seed", 0))
    rng = np.random.default_rng([seed, 2000])
    records = []
    extra = {}
    if scenario.kind == "gauge":
        worst = 0.0
        jets = int(config.get("samples", 1000))
        for _ in range(jets):
            jet = ConnectionJet.random(scenario.group, scenario.n, rng)
            gauge = GaugeSecondJet.random(scenario.group, scenario.n, rng)
            before = curvature_map(jet)
            after = curvature_map(apply_gauge_second_jet(jet, gauge))
            worst = max(worst, float(np.max(np.abs(after - before))))
        records.append(make_record(
            "curvature-map-invariance",
            "curvature map is invariant under identity-value second jets",
            scenario.name, [worst], 1e-12, samples=jets))
        sample_jet = ConnectionJet.random(scenario.group, scenario.n, rng)
        extra["curvature_sample"] = curvature_map(sample_jet).tolist()
    else:
        point = (np.asarray(json.loads(args.point), float) if args.point
                 else scenario.chart.center())
        u1 = np.asarray(json.loads(args.u1), float) if args.u1 else np.eye(scenario.chart.dim)[0]
        u2 = np.asarray(json.loads(args.u2), float) if args.u2 else np.eye(scenario.chart.dim)[-1]
        scenario.chart.require(point)
        y = TotalPoint(point, scenario.group.random_element(rng))
        omega = scenario.omega
        out = curvature_eval(omega, y, u1, u2, raise_on_gap=False)
        same = curvature_eval(omega, y, u1, u1, raise_on_gap=False)
        records.append(make_record(
            "curvature-two-path", "bracket and covariant-exterior paths agree",
            scenario.name, [out.gap], 1e-4))
        records.append(make_record(
            "curvature-antisymmetry", "curvature vanishes on a repeated argument",
            scenario.name, [float(np.linalg.norm(same.value.coords))], 1e-10))
        extra.update({
            "point": point.tolist(),
            "bracket_value": out.value.coords.tolist(),
            "exterior_value": out.exterior_value.coords.tolist(),
            "gap": out.gap,
        })
    return _emit(records, config, args, extra_summary=extra)


def _cmd_report(args):
    with open(args.in_path, "r", encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    records = [d for d in lines if "check" in d]
    summaries = [d["summary"] for d in lines if "summary" in d]
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(records_to_csv(records))
    failed = [r["check"] for r in records if not r.get("passed")]
    print(f"records: {len(records)}")
    for r in records:
        status = "PASS" if r.get("passed") else "FAIL"
        order = r.get("order_estimate")
        order_txt = f" order={order:.2f}" if order else ""
        print(f"  {status} {r['check']}: max={r['max_residual']:.3e} "
              f"tol={r['tolerance']:.0e}{order_txt}")
    if summaries:
        print(f"summary: {json.dumps(summaries[0], sort_keys=True)}")
    return 1 if failed else 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "transport": _cmd_transport,
        "curvature": _cmd_curvature,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except LieBundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
