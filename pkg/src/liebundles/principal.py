"""Equivariant connections on trivialized group-torsor total spaces.

A connection is an algebra-valued 1-form omega on the total space satisfying
complementarity (it reproduces generators) and adjoint equivariance with a
correction term coming from an associated group-bundle connection nu.  Forms
are assembled from weighted local pieces (partition-of-unity gluing); each
piece is the fiber left-Maurer-Cartan form of one trivializing presentation,
optionally shifted by a base 1-form.

Curvature is evaluated two independent ways: minus omega of the bracket of
horizontalized fields, and the covariant exterior derivative on constant
extensions; both run in an exponential fiber chart centered at the evaluation
point so the finite differences act on flat coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bundles import (
    AdjointBundlePoint,
    FiberedAction,
    SectionJet,
    Tangent,
    TotalPoint,
    adjoint_class_residual,
)
from .calculus import (
    AlgebraOneForm,
    BaseCurve,
    Polynomial,
    directional_derivative,
    numerical_bracket,
)
from .connections import AlgebraConnection, LieGroupBundleConnection, transport_group, validate_group_connection
from .errors import ConstructionError, InconsistencyError, UsageError, ValidationError
from .groups import AlgebraElement, GroupElement
from .integrators import integrate_on_group

__all__ = [
    "WeightRamp",
    "constant_weight",
    "canonical_local_form",
    "twisted_local_form",
    "twisted_cocycle",
    "GeneralizedPrincipalConnection",
    "build_canonical_connection",
    "build_two_chart_connection",
    "validate_principal_connection",
    "transport_total",
    "transport_compatibility_check",
    "jet_equivariance_check",
    "horizontal_transform_check",
    "TensorialAdjointForm",
    "connection_difference",
    "CurvatureValue",
    "curvature",
    "reduced_curvature_residual",
    "equivariant_product_connection_check",
    "necessity_check",
]


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


class WeightRamp:
    """Cosine ramp in one base coordinate: 1 below lo, 0 above hi."""

    def __init__(self, lo, hi, axis=0, invert=False):
        if not hi > lo:
            raise UsageError("ramp needs lo < hi")
        self.lo, self.hi, self.axis, self.invert = float(lo), float(hi), int(axis), invert

    def __call__(self, x):
        s = (float(np.asarray(x)[self.axis]) - self.lo) / (self.hi - self.lo)
        s = min(max(s, 0.0), 1.0)
        w = 0.5 * (1.0 + np.cos(np.pi * s))
        return 1.0 - w if self.invert else w


def constant_weight(value=1.0):
    return lambda x: value


# ---------------------------------------------------------------------------
# local forms
# ---------------------------------------------------------------------------


def canonical_local_form(descriptor, base_form: Optional[AlgebraOneForm] = None):
    """Fiber left-Maurer-Cartan form of the reference presentation.

    Value on a tangent (u, delta) at fiber point h is Ad_{h^{-1}}(A(u) + delta)
    where A is the optional adjoint-twisted base 1-form (zero by default).
    """

    def form(y: TotalPoint, u, delta: AlgebraElement) -> np.ndarray:
        hinv = y.fiber.inverse().matrix
        val = descriptor.algebra_matrix(delta.coords)
        if base_form is not None:
            val = val + descriptor.algebra_matrix(base_form(y.q, u).coords)
        return descriptor.matrix_coords(hinv @ val @ y.fiber.matrix)

    return form


class _Twist:
    """Analytic presentation change: group-chart automorphism by exp(p(x) Z_sigma)
    conjugation together with a section change by exp(r(x) Z_tau)."""

    def __init__(self, descriptor, sigma_gen: AlgebraElement, p: Polynomial, tau_gen: AlgebraElement, r: Polynomial):
        self.descriptor = descriptor
        self.sigma_gen = sigma_gen
        self.tau_gen = tau_gen
        self.p = p
        self.r = r
        self._dp = [p.partial(mu) for mu in range(p.dim)]
        self._dr = [r.partial(mu) for mu in range(r.dim)]

    def sigma(self, x):
        return self.descriptor.exp(self.descriptor.algebra(self.p(x) * self.sigma_gen.coords))

    def tau(self, x):
        return self.descriptor.exp(self.descriptor.algebra(self.r(x) * self.tau_gen.coords))

    def sigma_rate(self, x, u):
        """Right-trivialized derivative of sigma along u (exact: Z commutes)."""
        rate = sum(d(x) * ui for d, ui in zip(self._dp, np.asarray(u, float)))
        return rate * self.sigma_gen.coords

    def tau_rate(self, x, u):
        rate = sum(d(x) * ui for d, ui in zip(self._dr, np.asarray(u, float)))
        return rate * self.tau_gen.coords


def twisted_local_form(descriptor, twist: _Twist):
    """Canonical form of the twisted presentation, expressed in reference data.

    The twisted fiber coordinate of y = (x, h) is h_b = s^{-1} t^{-1} h s with
    s = sigma(x), t = tau(x); the form is the left-Maurer-Cartan value of the
    twisted coordinate, mapped back to reference algebra coordinates by Ad_s.
    """

    def form(y: TotalPoint, u, delta: AlgebraElement) -> np.ndarray:
        x = y.q
        h = y.fiber.matrix
        s = twist.sigma(x).matrix
        t = twist.tau(x).matrix
        s_inv = np.linalg.inv(s)
        t_inv = np.linalg.inv(t)
        s_dot = descriptor.algebra_matrix(twist.sigma_rate(x, u)) @ s
        t_dot = descriptor.algebra_matrix(twist.tau_rate(x, u)) @ t
        h_dot = descriptor.algebra_matrix(delta.coords) @ h
        m = s_inv @ t_inv @ h @ s
        m_dot = (
            -s_inv @ s_dot @ s_inv @ t_inv @ h @ s
            - s_inv @ t_inv @ t_dot @ t_inv @ h @ s
            + s_inv @ t_inv @ h_dot @ s
            + s_inv @ t_inv @ h @ s_dot
        )
        m_inv = np.linalg.inv(m)
        mc = m_inv @ m_dot  # left-trivialized velocity of the twisted coordinate
        return descriptor.matrix_coords(s @ mc @ s_inv)

    return form


def twisted_cocycle(descriptor, twist: _Twist):
    """Horizontal-lift cocycle of the connection that is trivial in the twisted
    group-bundle chart: h(x, g, u) = s - Ad_g s with s the automorphism rate."""

    def cocycle(x, g: GroupElement, u):
        s = twist.sigma_rate(x, u)
        return descriptor.algebra(s - descriptor.Ad_matrix(g) @ s)

    return cocycle


# ---------------------------------------------------------------------------
# the connection
# ---------------------------------------------------------------------------


class GeneralizedPrincipalConnection:
    """Algebra-valued 1-form glued from weighted local pieces.

    ``pieces`` is a sequence of (weight, form) with weight a function of the
    base point and form(y, u, delta) returning algebra coordinates.
    """

    def __init__(self, action: FiberedAction, nu: LieGroupBundleConnection, pieces, label="omega"):
        self.action = action
        self.nu = nu
        self.pieces = list(pieces)
        self.label = label
        self.descriptor = action.space.fiber

    def value(self, y: TotalPoint, tangent: Tangent) -> AlgebraElement:
        total = np.zeros(self.descriptor.dim)
        for weight, form in self.pieces:
            w = weight(y.q)
            if w != 0.0:
                total = total + w * form(y, tangent.u, tangent.delta)
        return self.descriptor.algebra(total)

    def weight_sum(self, x) -> float:
        return float(sum(w(x) for w, _ in self.pieces))

    def vertical_operator(self, y: TotalPoint) -> np.ndarray:
        """Matrix of delta -> omega(y, (0, delta)) on algebra coordinates."""
        n = self.action.space.quotient.dim
        zero_u = np.zeros(n)
        cols = [
            self.value(y, Tangent(zero_u, self.descriptor.algebra(e))).coords
            for e in np.eye(self.descriptor.dim)
        ]
        return np.column_stack(cols)

    def horizontal_lift(self, y: TotalPoint, u) -> Tangent:
        """Unique tangent over u annihilated by the form."""
        u = np.asarray(u, dtype=float)
        rhs = -self.value(y, Tangent(u, self.descriptor.zero())).coords
        op = self.vertical_operator(y)
        try:
            delta = np.linalg.solve(op, rhs)
        except np.linalg.LinAlgError as exc:
            raise ConstructionError("degenerate connection: vertical operator singular") from exc
        return Tangent(u, self.descriptor.algebra(delta))

    def horizontal_jet(self, y: TotalPoint) -> SectionJet:
        n = self.action.space.quotient.dim
        rows = [self.horizontal_lift(y, e).delta.coords for e in np.eye(n)]
        return SectionJet(y.q, y.fiber, np.vstack(rows))


def build_canonical_connection(action: FiberedAction, base_form: Optional[AlgebraOneForm] = None):
    """Single-chart connection: trivial nu plus the canonical fiber form."""
    desc = action.space.fiber
    nu = LieGroupBundleConnection.trivial(action.bundle)
    omega = GeneralizedPrincipalConnection(
        action, nu, [(constant_weight(1.0), canonical_local_form(desc, base_form))]
    )
    return omega, nu


def build_two_chart_connection(
    action: FiberedAction,
    sigma_gen: AlgebraElement,
    p: Polynomial,
    tau_gen: AlgebraElement,
    r: Polynomial,
    ramp: WeightRamp,
    rng=None,
    weight_tol=1e-12,
):
    """Two overlapping presentations glued with a cosine partition of unity.

    The first piece is the reference canonical form, the second the canonical
    form of the presentation twisted by exp(p(x) Z_sigma)-conjugation and an
    exp(r(x) Z_tau) section change; nu is glued from the matching trivial
    connections of each presentation.
    """
    desc = action.space.fiber
    twist = _Twist(desc, sigma_gen, p, tau_gen, r)
    w_a = ramp
    w_b = WeightRamp(ramp.lo, ramp.hi, ramp.axis, invert=not ramp.invert)
    pieces = [
        (w_a, canonical_local_form(desc)),
        (w_b, twisted_local_form(desc, twist)),
    ]
    cocycle_b = twisted_cocycle(desc, twist)

    def glued_cocycle(x, g, u):
        wb = w_b(x)
        if wb == 0.0:
            return desc.zero()
        return desc.algebra(wb * cocycle_b(x, g, u).coords)

    nu = LieGroupBundleConnection(action.bundle, glued_cocycle, tag="glued")
    omega = GeneralizedPrincipalConnection(action, nu, pieces, label="omega-glued")
    check_rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(25):
        x = action.space.quotient.sample(check_rng)
        s = omega.weight_sum(x)
        if abs(s - 1.0) > weight_tol or w_a(x) < -weight_tol or w_b(x) < -weight_tol:
            raise ConstructionError(f"partition of unity fails at {x}: sum {s}")
    return omega, nu


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_principal_connection(omega, rng, samples=200, tol=1e-8, raise_on_failure=True):
    """Residuals of complementarity, adjoint equivariance, and the weight
    partition (sums to one, nonnegative) on random samples."""
    action = omega.action
    desc = omega.descriptor
    nu = omega.nu
    comp_worst = 0.0
    equi_worst = 0.0
    weight_worst = 0.0
    for _ in range(samples):
        y = action.space.random_point(rng)
        xi = desc.random_algebra(rng)
        comp = omega.value(y, action.generator(y, xi))
        comp_worst = max(comp_worst, float(np.linalg.norm(comp.coords - xi.coords)))

        g = desc.random_element(rng)
        u = rng.standard_normal(action.space.quotient.dim)
        t_y = Tangent(u, desc.random_algebra(rng))
        t_g = Tangent(u, desc.random_algebra(rng))
        pushed = action.differential(y, g, t_y, t_g)
        lhs = omega.value(action.act(y, g), pushed).coords
        nu_val = nu.connection_form(y.q, g, u, t_g.delta).coords
        rhs = desc.Ad_matrix(g.inverse()) @ (omega.value(y, t_y).coords + nu_val)
        equi_worst = max(equi_worst, float(np.linalg.norm(lhs - rhs)))

        weight_worst = max(weight_worst, abs(omega.weight_sum(y.q) - 1.0))
        weight_worst = max(
            weight_worst, max((-w(y.q) for w, _ in omega.pieces), default=0.0)
        )
    report = {
        "complementarity": float(comp_worst),
        "ad_equivariance": float(equi_worst),
        "weight_partition": float(weight_worst),
        "samples": samples,
    }
    if raise_on_failure and max(comp_worst, equi_worst, weight_worst) > tol:
        raise ValidationError(
            f"connection fails complementarity/equivariance/weights "
            f"({comp_worst:.2e} / {equi_worst:.2e} / {weight_worst:.2e})",
            report,
        )
    return report


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------


def transport_total(omega, curve: BaseCurve, y0: TotalPoint, step=1e-2, with_error_estimate=False):
    """Transport y0 along a quotient curve by integrating the horizontal lift."""

    def rhs(t, h):
        y = TotalPoint(curve.position(t), h)
        return omega.horizontal_lift(y, curve.velocity(t)).delta

    result = integrate_on_group(rhs, y0.fiber, (curve.a, curve.b), step, with_error_estimate)
    end = TotalPoint(curve.position(curve.b), result.element)
    return end, result


def transport_compatibility_check(omega, curve, y, g, step=1e-2) -> float:
    """Transport of y.g against (transport of y).(nu-transport of g)."""
    action = omega.action
    end_yg, _ = transport_total(omega, curve, action.act(y, g), step)
    end_y, _ = transport_total(omega, curve, y, step)
    end_g = transport_group(omega.nu, curve, g, step).element
    recombined = action.act(end_y, end_g)
    return float(np.linalg.norm(end_yg.fiber.matrix - recombined.fiber.matrix))


def jet_equivariance_check(omega, y, g) -> float:
    """Jet of the horizontal section at y.g versus the jet-lifted action of the
    nu-horizontal jet at g on the horizontal jet at y."""
    from .bundles import jet_lift_action

    action = omega.action
    jet_y = omega.horizontal_jet(y)
    jet_g = omega.nu.jet_section(y.q, g, n=action.space.quotient.dim)
    pushed = jet_lift_action(action, jet_y, jet_g)
    target = omega.horizontal_jet(action.act(y, g))
    return float(
        np.linalg.norm(pushed.value.matrix - target.value.matrix)
        + np.max(np.abs(pushed.deriv - target.deriv))
    )


def horizontal_transform_check(omega, y, g, u, delta_g: AlgebraElement, eps=1e-5) -> float:
    """Finite-difference residual of pushing a horizontal lift through the
    action: the image is the horizontal lift at y.g plus the generator of the
    inverse-adjusted vertical part of the group tangent."""
    action = omega.action
    desc = omega.descriptor
    u = np.asarray(u, dtype=float)
    hor = omega.horizontal_lift(y, u)

    def composite(s):
        ys = TotalPoint(y.q + s * u, desc.exp(desc.algebra(s * hor.delta.coords)) @ y.fiber)
        gs = desc.exp(desc.algebra(s * delta_g.coords)) @ g
        return action.act(ys, gs)

    plus, minus = composite(eps), composite(-eps)
    yg = action.act(y, g)
    lhs_delta = desc.matrix_coords(
        ((plus.fiber.matrix - minus.fiber.matrix) / (2 * eps)) @ np.linalg.inv(yg.fiber.matrix),
        tol=1e-4,
    )

    hor_yg = omega.horizontal_lift(yg, u)
    nu_val = omega.nu.connection_form(y.q, g, u, delta_g)
    zeta = desc.Ad(g.inverse(), nu_val)
    gen = action.generator(yg, zeta)
    rhs_delta = hor_yg.delta.coords + gen.delta.coords
    return float(np.linalg.norm(lhs_delta - rhs_delta))


# ---------------------------------------------------------------------------
# tensorial forms and the affine family
# ---------------------------------------------------------------------------


class TensorialAdjointForm:
    """Horizontal, adjoint-equivariant algebra-valued 1-form on the total space."""

    def __init__(self, action: FiberedAction, eval_fn, label="difference"):
        self.action = action
        self.descriptor = action.space.fiber
        self.eval_fn = eval_fn
        self.label = label

    def value(self, y: TotalPoint, t: Tangent) -> AlgebraElement:
        return self.eval_fn(y, t)

    def validate(self, rng, samples=100, horiz_tol=1e-9, equi_tol=1e-7, raise_on_failure=True):
        action = self.action
        desc = self.descriptor
        horiz_worst = 0.0
        equi_worst = 0.0
        n = action.space.quotient.dim
        for _ in range(samples):
            y = action.space.random_point(rng)
            xi = desc.random_algebra(rng)
            vert = action.generator(y, xi)
            horiz_worst = max(horiz_worst, self.value(y, vert).norm())

            g = desc.random_element(rng)
            u = rng.standard_normal(n)
            t_y = Tangent(u, desc.random_algebra(rng))
            t_g = Tangent(u, desc.random_algebra(rng))
            pushed = action.differential(y, g, t_y, t_g)
            lhs = self.value(action.act(y, g), pushed).coords
            rhs = desc.Ad_matrix(g.inverse()) @ self.value(y, t_y).coords
            equi_worst = max(equi_worst, float(np.linalg.norm(lhs - rhs)))
        report = {"horizontality": horiz_worst, "ad_equivariance": equi_worst, "samples": samples}
        if raise_on_failure and (horiz_worst > horiz_tol or equi_worst > equi_tol):
            raise ValidationError(
                f"form is not tensorial of adjoint type "
                f"(horizontality {horiz_worst:.2e}, equivariance {equi_worst:.2e})",
                report,
            )
        return report


def connection_difference(omega1, omega2, rng=None, validate=True) -> TensorialAdjointForm:
    """Pointwise difference of two connections associated to the same nu.

    The difference must be horizontal and adjoint-equivariant; conversely
    omega2 plus the difference revalidates as a connection (checked on samples
    when a generator is supplied)."""
    if omega1.action is not omega2.action:
        raise UsageError("connection difference requires a common total space action")

    def eval_fn(y, t):
        return omega1.descriptor.algebra(
            omega1.value(y, t).coords - omega2.value(y, t).coords
        )

    form = TensorialAdjointForm(omega1.action, eval_fn)
    if validate and rng is not None:
        form.validate(rng)
        rebuilt = GeneralizedPrincipalConnection(
            omega2.action,
            omega2.nu,
            [(constant_weight(1.0), lambda y, u, d: omega2.value(y, Tangent(np.asarray(u, float), d)).coords
              + form.value(y, Tangent(np.asarray(u, float), d)).coords)],
            label="omega2+difference",
        )
        validate_principal_connection(rebuilt, rng, samples=50)
    return form


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


def _dexp_operator(descriptor, w_coords, terms=24):
    """Matrix of the right-trivialized differential of exp at w on coordinates."""
    ad = descriptor.ad_matrix(w_coords)
    out = np.eye(descriptor.dim)
    term = np.eye(descriptor.dim)
    for k in range(1, terms + 1):
        term = term @ ad / (k + 1.0)
        out = out + term
        if np.linalg.norm(term) < 1e-18:
            break
    return out


@dataclass(frozen=True)
class CurvatureValue:
    value: AlgebraElement
    exterior_value: AlgebraElement
    gap: float


def curvature(omega, y: TotalPoint, u1, u2, h=None, cross_tol=1e-4, raise_on_gap=True):
    """Curvature of the connection at y on base directions u1, u2.

    Primary path: minus the form on the numerical bracket of the horizontal
    lift fields of the (constant) base directions.  Cross-check path: the
    covariant exterior derivative evaluated on constant extensions of the
    horizontal lifts, using the algebra connection of nu for the covariant
    correction.  Both run in the exponential fiber chart at y.

    The form takes values in the algebra bundle pulled back over the total
    space; the covariant correction acts through the base projection of each
    field, which realizes that pullback.
    """
    desc = omega.descriptor
    n = omega.action.space.quotient.dim
    d = desc.dim
    h0 = y.fiber
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)

    def point(z):
        w = z[n:]
        return TotalPoint(z[:n], desc.exp(desc.algebra(w)) @ h0)

    def field(u):
        def f(z):
            yq = point(z)
            delta = omega.horizontal_lift(yq, u).delta.coords
            op = _dexp_operator(desc, z[n:])
            return np.concatenate([u, np.linalg.solve(op, delta)])

        return f

    z0 = np.concatenate([y.q, np.zeros(d)])
    br = numerical_bracket(field(u1), field(u2), z0, h)
    bracket_tangent = Tangent(br[:n], desc.algebra(br[n:]))
    primary = desc.algebra(-omega.value(y, bracket_tangent).coords)

    # exterior path on constant field extensions (their bracket vanishes)
    alg_conn = AlgebraConnection(omega.nu)
    w1 = np.concatenate([u1, omega.horizontal_lift(y, u1).delta.coords])
    w2 = np.concatenate([u2, omega.horizontal_lift(y, u2).delta.coords])

    def omega_along(wvec):
        def f(z):
            yq = point(z)
            op = _dexp_operator(desc, z[n:])
            delta = desc.algebra(op @ wvec[n:])
            return omega.value(yq, Tangent(wvec[:n], delta)).coords

        return f

    d1 = directional_derivative(omega_along(w2), z0, w1, h)
    d2 = directional_derivative(omega_along(w1), z0, w2, h)
    k1 = alg_conn.generator(y.q, u1)
    k2 = alg_conn.generator(y.q, u2)
    f2_at = omega_along(w2)(z0)
    f1_at = omega_along(w1)(z0)
    exterior = (d1 - k1 @ f2_at) - (d2 - k2 @ f1_at)
    exterior_val = desc.algebra(exterior)

    gap = float(np.linalg.norm(primary.coords - exterior.reshape(-1)))
    if raise_on_gap and gap > cross_tol:
        raise InconsistencyError(
            f"curvature paths disagree by {gap:.3e} (tolerance {cross_tol:.1e})"
        )
    return CurvatureValue(value=primary, exterior_value=exterior_val, gap=gap)


def reduced_curvature_residual(omega, y, g, u1, u2, h=None) -> float:
    """Representative independence of the reduced curvature: evaluate at y and
    at y.g and compare the induced adjoint-bundle classes."""
    action = omega.action
    val_y = curvature(omega, y, u1, u2, h, raise_on_gap=False).value
    val_yg = curvature(omega, action.act(y, g), u1, u2, h, raise_on_gap=False).value
    return adjoint_class_residual(
        AdjointBundlePoint(y, val_y), AdjointBundlePoint(action.act(y, g), val_yg)
    )


def equivariant_product_connection_check(omega, y, g, t_y: Tangent, t_g: Tangent, eps=1e-6) -> float:
    """Equivariance of the paired vertical projector (omega-generator, nu-form)
    under (y, g) -> (y.g, g), with the action differential by finite differences."""
    action = omega.action
    desc = omega.descriptor
    nu = omega.nu
    if not np.allclose(t_y.u, t_g.u):
        raise UsageError("tangent pair must share the base velocity")
    u = t_y.u

    omega_val = omega.value(y, t_y)
    nu_val = nu.connection_form(y.q, g, u, t_g.delta)

    # lhs: push the projected pair (generator of omega_val at y, vertical part
    # of t_g) through the action, by central differences of a product curve
    gen_y = action.generator(y, omega_val)

    def vertical_curve(s):
        ys = TotalPoint(y.q, desc.exp(desc.algebra(s * gen_y.delta.coords)) @ y.fiber)
        gs = desc.exp(desc.algebra(s * nu_val.coords)) @ g
        return action.act(ys, gs)

    plus, minus = vertical_curve(eps), vertical_curve(-eps)
    yg = action.act(y, g)
    lhs_first = desc.matrix_coords(
        ((plus.fiber.matrix - minus.fiber.matrix) / (2 * eps)) @ np.linalg.inv(yg.fiber.matrix),
        tol=1e-4,
    )
    lhs_second = nu_val.coords

    # rhs: apply the projector at (y.g, g) to the pushed pair (dPhi(t_y,t_g), t_g)
    pushed_full = action.differential(y, g, t_y, t_g)
    omega_pushed = omega.value(yg, pushed_full)
    rhs_first = action.generator(yg, omega_pushed).delta.coords
    rhs_second = nu.connection_form(y.q, g, u, t_g.delta).coords
    return float(
        np.linalg.norm(lhs_first - rhs_first) + np.linalg.norm(lhs_second - rhs_second)
    )


def necessity_check(omega, rng, samples=100, tol=1e-6):
    """A passing connection form must sit over a multiplicative nu."""
    omega_report = validate_principal_connection(omega, rng, samples=samples, raise_on_failure=False)
    nu_report = validate_group_connection(omega.nu, rng, samples=samples, tol=tol, raise_on_failure=False)
    omega_ok = max(omega_report["complementarity"], omega_report["ad_equivariance"]) <= 1e-6
    nu_ok = max(nu_report["unit_kernel"], nu_report["cocycle"]) <= tol
    report = {"omega": omega_report, "nu": nu_report, "omega_ok": omega_ok, "nu_ok": nu_ok}
    if omega_ok and not nu_ok:
        raise ValidationError(
            "connection form validates but its group connection is not multiplicative: "
            "scenario construction bug",
            report,
        )
    return report
