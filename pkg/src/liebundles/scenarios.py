"""Named scenario fixtures and their construction from JSON-style configs.

Presets: "principal-so3" (rotation-group torsor with a classical connection
form and a coefficient-form group connection), "affine-constant" /
"affine-varying" (vector-group torsor with linear-plus-offset forms), and
"gauge-jet-so3" / "gauge-jet-abelian" (the semidirect jet-group algebra).

Configs are plain dicts: polynomial coefficient tables keyed by exponent
multi-indices, curve definitions, sample counts, seeds, steps, tolerances.
Everything built here is deterministic given the config.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from .bundles import FiberedAction, LieGroupBundle, Tangent, TotalPoint, TotalSpace
from .calculus import AlgebraOneForm, BaseCurve, ChartDomain, Polynomial
from .connections import LieGroupBundleConnection
from .errors import UsageError
from .gauge import EquivariantJetConnection, semidirect_jet_descriptor
from .groups import GroupDescriptor, descriptor_from_json, so3_descriptor, translation_descriptor
from .principal import (
    GeneralizedPrincipalConnection,
    WeightRamp,
    build_canonical_connection,
    build_two_chart_connection,
    constant_weight,
    validate_principal_connection,
)

__all__ = [
    "PRESET_NAMES",
    "preset_config",
    "build_scenario",
    "PrincipalScenario",
    "AffineScenario",
    "GaugeJetScenario",
    "principal_equivalence_report",
    "affine_equivalence_report",
    "affine_reconstruction_residual",
]


# ---------------------------------------------------------------------------
# config helpers
# ---------------------------------------------------------------------------


def _group_from_config(spec):
    if spec == "so3":
        return so3_descriptor()
    if isinstance(spec, str) and spec.startswith("translation:"):
        return translation_descriptor(int(spec.split(":")[1]))
    if isinstance(spec, dict):
        return descriptor_from_json(spec)
    raise UsageError(f"unknown group spec {spec!r}")


def _chart_from_config(spec):
    return ChartDomain(np.asarray(spec["lower"], float), np.asarray(spec["upper"], float),
                       spec.get("label", "chart"))


def _one_form_from_config(desc, spec, dim):
    tables = [spec.get(str(mu), {}) for mu in range(dim)]
    return AlgebraOneForm.from_polynomials(desc, tables, dim)


def _curve_from_config(spec, label):
    kind = spec.get("kind", "line")
    interval = tuple(spec.get("interval", (0.0, 1.0)))
    if kind == "line":
        return BaseCurve.line(spec["start"], spec["end"], interval, label=label)
    if kind == "wiggle":
        return BaseCurve.wiggle(spec["start"], spec["end"], spec["amplitudes"], interval, label=label)
    if kind == "loop":
        return BaseCurve.loop(spec["center"], spec["radius"], interval,
                              axes=tuple(spec.get("axes", (0, 1))), label=label)
    raise UsageError(f"unknown curve kind {kind!r}")


def random_curve(chart: ChartDomain, rng, interval=(0.0, 0.4)):
    """Smooth random curve staying inside the chart."""
    lo = chart.lower + 0.25 * (chart.upper - chart.lower)
    hi = chart.upper - 0.25 * (chart.upper - chart.lower)
    start = lo + (hi - lo) * rng.uniform(0.0, 1.0, chart.dim)
    end = lo + (hi - lo) * rng.uniform(0.0, 1.0, chart.dim)
    amps = 0.08 * rng.uniform(-1.0, 1.0, chart.dim)
    return BaseCurve.wiggle(start, end, amps, interval, label="random")


# ---------------------------------------------------------------------------
# principal scenario
# ---------------------------------------------------------------------------


@dataclass
class PrincipalScenario:
    name: str
    config: dict
    group: GroupDescriptor
    chart: ChartDomain
    action: FiberedAction
    base_form: AlgebraOneForm          # classical connection coefficient form
    nu_form: AlgebraOneForm            # coefficient form of the group connection
    nu: LieGroupBundleConnection       # coefficient-form group connection
    nu0: LieGroupBundleConnection      # trivial group connection
    omega: GeneralizedPrincipalConnection        # classical form over nu0
    omega_canonical: GeneralizedPrincipalConnection
    omega_glued: GeneralizedPrincipalConnection
    nu_glued: LieGroupBundleConnection
    curves: Dict[str, BaseCurve]
    kind: str = "principal"

    @property
    def default_step(self):
        return float(self.config.get("step", 5e-3))


def _build_principal(config) -> PrincipalScenario:
    group = _group_from_config(config["group"])
    chart = _chart_from_config(config["chart"])
    action = FiberedAction(TotalSpace(chart, chart, group), LieGroupBundle(chart, group))
    base_form = _one_form_from_config(group, config["base_form"], chart.dim)
    nu_form = _one_form_from_config(group, config["nu_form"], chart.dim)
    nu = LieGroupBundleConnection.from_base_form(action.bundle, nu_form)
    omega, nu0 = build_canonical_connection(action, base_form=base_form)
    omega_canonical, _ = build_canonical_connection(action)
    glue = config["two_chart"]
    omega_glued, nu_glued = build_two_chart_connection(
        action,
        sigma_gen=group.algebra(np.asarray(glue["sigma_gen"], float)),
        p=Polynomial(glue["sigma_poly"], chart.dim),
        tau_gen=group.algebra(np.asarray(glue["tau_gen"], float)),
        r=Polynomial(glue["tau_poly"], chart.dim),
        ramp=WeightRamp(glue["ramp"][0], glue["ramp"][1], axis=int(glue.get("ramp_axis", 0))),
    )
    curves = {k: _curve_from_config(v, k) for k, v in config.get("curves", {}).items()}
    return PrincipalScenario(
        name=config["name"], config=config, group=group, chart=chart, action=action,
        base_form=base_form, nu_form=nu_form, nu=nu, nu0=nu0, omega=omega,
        omega_canonical=omega_canonical, omega_glued=omega_glued, nu_glued=nu_glued,
        curves=curves,
    )


def classical_form_value(scenario, x, g, u, delta_right, drop_ad=False):
    """Connection coefficient form on the trivialized torsor in classical
    presentation: adjoint-twisted base form plus the left Maurer-Cartan term."""
    desc = scenario.group
    left = desc.Ad_matrix(g.inverse()) @ delta_right.coords
    base = scenario.base_form(x, u).coords
    if not drop_ad:
        base = desc.Ad_matrix(g.inverse()) @ base
    return desc.algebra(base + left)


def principal_equivalence_report(scenario, rng, samples=100, drop_ad=False):
    """Both directions of the classical equivalence on samples.

    (a) the classical axioms of the coefficient form: verticals are reproduced
    and right translation acts by the inverse adjoint; (b) the induced
    generalized form satisfies complementarity/equivariance against the
    trivial group connection.
    """
    desc = scenario.group
    chart = scenario.chart
    vert_worst = 0.0
    requiv_worst = 0.0
    for _ in range(samples):
        x = chart.sample(rng)
        g = desc.random_element(rng)
        xi = desc.random_algebra(rng)
        # right-action generator at g has left-trivialized value xi
        delta = desc.algebra(desc.Ad_matrix(g) @ xi.coords)
        got = classical_form_value(scenario, x, g, np.zeros(chart.dim), delta, drop_ad)
        vert_worst = max(vert_worst, float(np.linalg.norm(got.coords - xi.coords)))

        h = desc.random_element(rng)
        u = rng.standard_normal(chart.dim)
        dv = desc.random_algebra(rng)
        lhs = classical_form_value(scenario, x, g @ h, u, dv, drop_ad).coords
        rhs = desc.Ad_matrix(h.inverse()) @ classical_form_value(scenario, x, g, u, dv, drop_ad).coords
        requiv_worst = max(requiv_worst, float(np.linalg.norm(lhs - rhs)))

    if drop_ad:
        broken = GeneralizedPrincipalConnection(
            scenario.action,
            scenario.nu0,
            [(constant_weight(1.0),
              lambda y, u, d: scenario.base_form(y.q, u).coords
              + desc.Ad_matrix(y.fiber.inverse()) @ d.coords)],
            label="broken",
        )
        induced = validate_principal_connection(broken, rng, samples=samples, raise_on_failure=False)
    else:
        induced = validate_principal_connection(scenario.omega, rng, samples=samples,
                                                raise_on_failure=False)
    return {
        "classical_vertical": vert_worst,
        "classical_right_equivariance": requiv_worst,
        "induced_complementarity": induced["complementarity"],
        "induced_ad_equivariance": induced["ad_equivariance"],
        "samples": samples,
    }


# ---------------------------------------------------------------------------
# affine scenario
# ---------------------------------------------------------------------------


@dataclass
class AffineScenario:
    name: str
    config: dict
    fiber_dim: int
    group: GroupDescriptor
    chart: ChartDomain
    action: FiberedAction
    nu_coeff: Callable[[np.ndarray], np.ndarray]    # (n, m, m)
    gamma: Callable[[np.ndarray], np.ndarray]       # (n, m)
    nu: LieGroupBundleConnection
    omega: GeneralizedPrincipalConnection
    curves: Dict[str, BaseCurve]
    kind: str = "affine"

    @property
    def default_step(self):
        return float(self.config.get("step", 5e-3))

    def fiber_point(self, x, v):
        return TotalPoint(np.asarray(x, float), self.group.exp(self.group.algebra(v)))

    def fiber_coords(self, y: TotalPoint):
        return self.group.log(y.fiber).coords


def _affine_tables_to_fn(spec, n, m, two_index):
    if "constant" in spec:
        arr = np.asarray(spec["constant"], dtype=float)
        return lambda x: arr
    polys = {}
    for key, table in spec["polynomials"].items():
        idx = tuple(int(s) for s in key.split(","))
        polys[idx] = Polynomial(table, n)
    shape = (n, m, m) if two_index else (n, m)

    def fn(x):
        out = np.zeros(shape)
        for idx, p in polys.items():
            out[idx] = p(x)
        return out

    return fn


def _build_affine(config) -> AffineScenario:
    m = int(config["fiber_dim"])
    group = translation_descriptor(m)
    chart = _chart_from_config(config["chart"])
    n = chart.dim
    action = FiberedAction(TotalSpace(chart, chart, group), LieGroupBundle(chart, group))
    nu_coeff = _affine_tables_to_fn(config["nu_coeff"], n, m, two_index=True)
    gamma = _affine_tables_to_fn(config["gamma"], n, m, two_index=False)

    def cocycle(x, g, u):
        v = group.log(g).coords
        k = np.tensordot(np.asarray(u, float), nu_coeff(x), axes=(0, 0))
        return group.algebra(-(k @ v))

    nu = LieGroupBundleConnection(action.bundle, cocycle, tag="linear")
    # custom cocycles are validated at load
    from .connections import validate_group_connection

    validate_group_connection(
        nu, np.random.default_rng(int(config.get("seed", 0))), samples=25, tol=1e-9
    )

    def local_form(y, u, delta):
        x = y.q
        v = group.log(y.fiber).coords
        k = np.tensordot(np.asarray(u, float), nu_coeff(x), axes=(0, 0))
        g_val = np.asarray(u, float) @ gamma(x)
        return k @ v + g_val + delta.coords

    omega = GeneralizedPrincipalConnection(
        action, nu, [(constant_weight(1.0), local_form)], label="affine"
    )
    curves = {k: _curve_from_config(v, k) for k, v in config.get("curves", {}).items()}
    return AffineScenario(
        name=config["name"], config=config, fiber_dim=m, group=group, chart=chart,
        action=action, nu_coeff=nu_coeff, gamma=gamma, nu=nu, omega=omega, curves=curves,
    )


def affine_equivalence_report(scenario: AffineScenario, rng, samples=100):
    """Shifted-point equivariance of the affine form (the abelian form of the
    defining equivariance) plus the generic complementarity/equivariance."""
    group = scenario.group
    chart = scenario.chart
    m = scenario.fiber_dim
    shift_worst = 0.0
    for _ in range(samples):
        x = chart.sample(rng)
        yv = rng.uniform(-1, 1, m)
        w = rng.uniform(-1, 1, m)
        u = rng.standard_normal(chart.dim)
        dy = group.random_algebra(rng)
        y = scenario.fiber_point(x, yv)
        y_shift = scenario.fiber_point(x, yv + w)
        lhs = scenario.omega.value(y_shift, Tangent(u, dy)).coords
        k = np.tensordot(u, scenario.nu_coeff(x), axes=(0, 0))
        rhs = scenario.omega.value(y, Tangent(u, dy)).coords + k @ w
        shift_worst = max(shift_worst, float(np.linalg.norm(lhs - rhs)))
    generic = validate_principal_connection(scenario.omega, rng, samples=samples,
                                            raise_on_failure=False)
    return {
        "shift_equivariance": shift_worst,
        "complementarity": generic["complementarity"],
        "ad_equivariance": generic["ad_equivariance"],
        "samples": samples,
    }


def affine_reconstruction_residual(scenario: AffineScenario, omega_fn, rng, samples=50) -> float:
    """Fit the offset coefficients from the form at the zero section and verify
    the linear-plus-offset expression reconstructs the form exactly."""
    group = scenario.group
    chart = scenario.chart
    m = scenario.fiber_dim
    n = chart.dim
    worst = 0.0
    for _ in range(samples):
        x = chart.sample(rng)
        origin = scenario.fiber_point(x, np.zeros(m))
        gamma_fit = np.vstack([
            omega_fn(origin, Tangent(e, group.zero())).coords for e in np.eye(n)
        ])
        yv = rng.uniform(-1, 1, m)
        y = scenario.fiber_point(x, yv)
        linear_fit = np.stack([
            omega_fn(y, Tangent(e, group.zero())).coords - gamma_fit[mu]
            for mu, e in enumerate(np.eye(n))
        ])
        u = rng.standard_normal(n)
        dy = group.random_algebra(rng)
        recon = u @ gamma_fit + np.tensordot(u, linear_fit, axes=(0, 0)) + dy.coords
        got = omega_fn(y, Tangent(u, dy)).coords
        worst = max(worst, float(np.linalg.norm(recon - got)))
    return worst


# ---------------------------------------------------------------------------
# gauge jet scenario
# ---------------------------------------------------------------------------


@dataclass
class GaugeJetScenario:
    name: str
    config: dict
    group: GroupDescriptor
    n: int
    jet_descriptor: GroupDescriptor
    f_section: Callable[[np.ndarray], np.ndarray]
    g_section: Callable[[np.ndarray], np.ndarray]
    omega_hat: EquivariantJetConnection
    kind: str = "gauge"


def _build_gauge(config) -> GaugeJetScenario:
    group = _group_from_config(config["group"])
    n = int(config["n"])
    jet_desc = semidirect_jet_descriptor(group, n)
    f_fn = _affine_tables_to_fn(config["f_section"], n, group.dim, two_index=False) \
        if "f_section" in config else (lambda x: np.zeros((n, group.dim)))
    g_fn = _affine_gtable(config.get("g_section"), n, group.dim)
    omega_hat = EquivariantJetConnection(group, n, f=f_fn, g2=g_fn)
    return GaugeJetScenario(
        name=config["name"], config=config, group=group, n=n, jet_descriptor=jet_desc,
        f_section=f_fn, g_section=g_fn, omega_hat=omega_hat,
    )


def _affine_gtable(spec, n, d):
    if spec is None:
        return lambda x: np.zeros((n, n, d))
    if "constant" in spec:
        arr = np.asarray(spec["constant"], dtype=float)
        return lambda x: arr
    polys = {}
    for key, table in spec["polynomials"].items():
        idx = tuple(int(s) for s in key.split(","))
        polys[idx] = Polynomial(table, n)

    def fn(x):
        out = np.zeros((n, n, d))
        for idx, p in polys.items():
            out[idx] = p(x)
        return out

    return fn


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def _principal_so3_config():
    return {
        "name": "principal-so3",
        "kind": "principal",
        "group": "so3",
        "chart": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
        "base_form": {
            "0": {"0": {"0,0": 0.3}, "2": {"0,1": 0.8, "0,0": 0.4}},
            "1": {"1": {"1,0": 0.7}, "2": {"0,0": -0.2}},
        },
        "nu_form": {
            "0": {"0": {"0,0": 0.4}, "2": {"1,0": 0.8, "0,0": 0.3}},
            "1": {"1": {"0,1": 0.6}, "2": {"0,0": -0.2}},
        },
        "two_chart": {
            "sigma_gen": [0.0, 1.0, 0.0],
            "sigma_poly": {"1,0": 0.8, "0,1": 0.3},
            "tau_gen": [1.0, 0.0, 0.0],
            "tau_poly": {"0,1": 0.6, "1,1": 0.4},
            "ramp": [-0.2, 0.2],
            "ramp_axis": 0,
        },
        "curves": {
            "main": {"kind": "wiggle", "start": [-0.55, -0.4], "end": [0.55, 0.45],
                      "amplitudes": [0.05, -0.07], "interval": [0.0, 0.4]},
            "line": {"kind": "line", "start": [-0.6, -0.4], "end": [0.6, 0.5],
                      "interval": [0.0, 0.4]},
            "loop": {"kind": "loop", "center": [0.0, 0.0], "radius": 0.45,
                      "interval": [0.0, 1.0]},
        },
        "seed": 0,
        "step": 5e-3,
        "samples": 100,
    }


def _affine_config(name, constant):
    cfg = {
        "name": name,
        "kind": "affine",
        "group": "translation:2",
        "fiber_dim": 2,
        "chart": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
        "curves": {
            "main": {"kind": "line", "start": [-0.5, -0.3], "end": [0.5, 0.4],
                      "interval": [0.0, 1.0]},
        },
        "seed": 0,
        "step": 5e-3,
        "samples": 100,
    }
    if constant:
        # commuting (diagonal) coefficient matrices keep the linear connection flat
        cfg["nu_coeff"] = {"constant": [[[0.5, 0.0], [0.0, -0.3]],
                                         [[0.2, 0.0], [0.0, 0.4]]]}
        cfg["gamma"] = {"constant": [[0.3, -0.1], [0.2, 0.5]]}
    else:
        cfg["nu_coeff"] = {"polynomials": {
            "0,0,0": {"0,0": 0.5, "1,0": 0.3},
            "0,0,1": {"0,1": 0.4},
            "0,1,1": {"0,0": -0.3},
            "1,0,0": {"0,0": 0.2},
            "1,1,0": {"1,1": 0.6},
            "1,1,1": {"0,0": 0.4, "1,0": -0.2},
        }}
        cfg["gamma"] = {"polynomials": {
            "0,0": {"0,0": 0.3, "2,0": 0.5},
            "0,1": {"1,0": -0.4},
            "1,0": {"0,1": 0.7},
            "1,1": {"0,0": 0.5, "0,2": 0.2},
        }}
    return cfg


def _gauge_config(name, group):
    d = 3 if group == "so3" else 2
    return {
        "name": name,
        "kind": "gauge",
        "group": group,
        "n": 2,
        "f_section": {"polynomials": {
            "0,0": {"0,0": 0.3, "1,0": 0.5},
            "0,1": {"0,1": -0.4},
            f"1,{d - 1}": {"0,0": 0.25},
        }},
        "g_section": {"polynomials": {
            "0,1,0": {"0,0": 0.4},
            "1,0,0": {"1,0": -0.3},
            f"1,1,{d - 1}": {"0,0": 0.2},
        }},
        "seed": 0,
        "samples": 1000,
    }


_PRESET_BUILDERS = {
    "principal-so3": _principal_so3_config,
    "affine-constant": lambda: _affine_config("affine-constant", constant=True),
    "affine-varying": lambda: _affine_config("affine-varying", constant=False),
    "gauge-jet-so3": lambda: _gauge_config("gauge-jet-so3", "so3"),
    "gauge-jet-abelian": lambda: _gauge_config("gauge-jet-abelian", "translation:2"),
}

PRESET_NAMES = tuple(sorted(_PRESET_BUILDERS))


def preset_config(name) -> dict:
    if name not in _PRESET_BUILDERS:
        raise UsageError(f"unknown scenario preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    return _PRESET_BUILDERS[name]()


def build_scenario(config):
    """Build a scenario object from a config dict or a preset name."""
    if isinstance(config, str):
        config = preset_config(config)
    config = copy.deepcopy(config)
    kind = config.get("kind")
    if kind == "principal":
        return _build_principal(config)
    if kind == "affine":
        return _build_affine(config)
    if kind == "gauge":
        return _build_gauge(config)
    raise UsageError(f"config must declare kind principal|affine|gauge, got {kind!r}")
