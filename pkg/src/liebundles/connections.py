"""Multiplicative connections on trivialized Lie group bundles.

A connection is encoded by its horizontal-lift cocycle h(x, g, u): the
horizontal lift of a base vector u at fiber point g has right-trivialized
fiber velocity h(x, g, u).  Multiplicativity of parallel transport is
equivalent to the cocycle law

    h(x, g g', u) = h(x, g, u) + Ad_g h(x, g', u),        h(x, 1, u) = 0.

The canonical constructor derives the cocycle from a base 1-form A:

    h(x, g, u) = Ad_g(A_x(u)) - A_x(u),

which satisfies the law identically; the induced transport of exp(eps xi)
then linearizes to the algebra transport ODE xi' = -[A(x'), xi].
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .bundles import LieGroupBundle, SectionJet
from .calculus import AlgebraOneForm, BaseCurve
from .errors import InconsistencyError, ValidationError
from .groups import AlgebraElement, GroupElement
from .integrators import TransportResult, integrate_linear, integrate_on_group

__all__ = [
    "LieGroupBundleConnection",
    "AlgebraConnection",
    "validate_group_connection",
    "transport_group",
    "transport_multiplicativity_check",
    "transport_unit_inverse_check",
    "algebra_transport",
    "algebra_transport_linearity_check",
    "ad_compatibility_check",
    "covariant_derivative_bracket_check",
    "horizontal_product_rule_check",
]


class LieGroupBundleConnection:
    """Connection on chart x G given by a horizontal-lift cocycle."""

    def __init__(self, bundle: LieGroupBundle, cocycle, tag="custom", base_form=None):
        self.bundle = bundle
        self.cocycle = cocycle
        self.tag = tag
        self.base_form = base_form

    @classmethod
    def from_base_form(cls, bundle: LieGroupBundle, form: AlgebraOneForm):
        desc = bundle.fiber

        def cocycle(x, g, u):
            a = form(x, u)
            return desc.algebra(desc.Ad_matrix(g) @ a.coords - a.coords)

        return cls(bundle, cocycle, tag="base-form", base_form=form)

    @classmethod
    def trivial(cls, bundle: LieGroupBundle):
        desc = bundle.fiber

        def cocycle(x, g, u):
            return desc.zero()

        return cls(bundle, cocycle, tag="trivial")

    # -- pointwise maps ----------------------------------------------------

    def horizontal_delta(self, x, g: GroupElement, u) -> AlgebraElement:
        return self.cocycle(np.asarray(x, float), g, np.asarray(u, float))

    def connection_form(self, x, g: GroupElement, u, delta: AlgebraElement) -> AlgebraElement:
        """Algebra-valued connection form: delta minus the horizontal part."""
        h = self.horizontal_delta(x, g, u)
        return g.descriptor.algebra(delta.coords - h.coords)

    def jet_section(self, x, g: GroupElement, n=None) -> SectionJet:
        """Jet of the horizontal section through g: derivative rows h(x, g, e_mu)."""
        x = np.asarray(x, dtype=float)
        n = self.bundle.base.dim if n is None else n
        rows = [self.horizontal_delta(x, g, e).coords for e in np.eye(n)]
        return SectionJet(x, g, np.vstack(rows))


def validate_group_connection(nu, rng, samples=100, tol=1e-6, raise_on_failure=True):
    """Residuals of the unit-kernel and cocycle laws plus the jet formulation.

    The jet formulation multiplies jets of horizontal sections through g and
    g' (value gh', derivative delta_g + Ad_g delta_g') and compares against
    the horizontal jet through g g'.
    """
    desc = nu.bundle.fiber
    chart = nu.bundle.base
    unit_worst = 0.0
    cocycle_worst = 0.0
    jet_worst = 0.0
    for _ in range(samples):
        x = chart.sample(rng)
        u = rng.standard_normal(chart.dim)
        g = desc.random_element(rng)
        gp = desc.random_element(rng)
        unit_worst = max(
            unit_worst, np.linalg.norm(nu.horizontal_delta(x, desc.identity(), u).coords)
        )
        lhs = nu.horizontal_delta(x, g @ gp, u).coords
        rhs = (
            nu.horizontal_delta(x, g, u).coords
            + desc.Ad_matrix(g) @ nu.horizontal_delta(x, gp, u).coords
        )
        cocycle_worst = max(cocycle_worst, float(np.linalg.norm(lhs - rhs)))
        jg = nu.jet_section(x, g)
        jgp = nu.jet_section(x, gp)
        prod_deriv = jg.deriv + (desc.Ad_matrix(g) @ jgp.deriv.T).T
        jet = nu.jet_section(x, g @ gp)
        jet_worst = max(jet_worst, float(np.max(np.abs(prod_deriv - jet.deriv))))
    report = {
        "unit_kernel": float(unit_worst),
        "cocycle": float(cocycle_worst),
        "jet_multiplicativity": float(jet_worst),
        "samples": samples,
    }
    if raise_on_failure and max(unit_worst, cocycle_worst, jet_worst) > tol:
        raise ValidationError(
            f"connection fails the multiplicative-lift laws "
            f"(unit {unit_worst:.2e}, cocycle {cocycle_worst:.2e}, jet {jet_worst:.2e})",
            report,
        )
    return report


def transport_group(
    nu: LieGroupBundleConnection,
    curve: BaseCurve,
    g0: GroupElement,
    step=1e-2,
    with_error_estimate=False,
) -> TransportResult:
    """Parallel transport of g0 along the curve: integrate the horizontal lift."""
    desc = nu.bundle.fiber
    if nu.tag == "base-form" and desc.ad_matrix_hook is not None:
        form = nu.base_form
        hook = desc.ad_matrix_hook
        cache = {}  # the half-step stage time repeats within each step

        def rhs_fast(t, gm):
            a = cache.get(t)
            if a is None:
                a = np.asarray(curve.velocity(t), float) @ form.coefficient_array(
                    curve.position(t)
                )
                cache.clear()
                cache[t] = a
            return hook(gm) @ a - a

        return integrate_on_group(
            rhs_fast, g0, (curve.a, curve.b), step, with_error_estimate, rhs_takes_matrix=True
        )

    def rhs(t, g):
        return nu.horizontal_delta(curve.position(t), g, curve.velocity(t))

    return integrate_on_group(rhs, g0, (curve.a, curve.b), step, with_error_estimate)


def transport_multiplicativity_check(nu, curve, g, h, step=1e-2) -> float:
    """|| transport(gh) - transport(g) transport(h) || via independent runs."""
    tg = transport_group(nu, curve, g, step).element
    th = transport_group(nu, curve, h, step).element
    tgh = transport_group(nu, curve, g @ h, step).element
    return float(np.linalg.norm(tgh.matrix - (tg @ th).matrix))


def transport_unit_inverse_check(nu, curve, g, step=1e-2):
    """Residuals of transporting the unit and of the inverse law."""
    desc = nu.bundle.fiber
    t1 = transport_group(nu, curve, desc.identity(), step).element
    unit_res = float(np.linalg.norm(t1.matrix - np.eye(desc.matrix_dim)))
    tg = transport_group(nu, curve, g, step).element
    tginv = transport_group(nu, curve, g.inverse(), step).element
    inv_res = float(np.linalg.norm(tginv.matrix - tg.inverse().matrix))
    return unit_res, inv_res


class AlgebraConnection:
    """Linear connection on the algebra bundle induced by a group connection.

    ``generator(x, u)`` is the matrix of the transport ODE xi' = K xi on
    coordinates; the covariant derivative of a section is then
    nabla_u xi = D xi(u) - K(x, u) xi.
    """

    def __init__(self, nu: LieGroupBundleConnection, fd_eps=1e-6):
        self.nu = nu
        self.descriptor = nu.bundle.fiber
        self._fd_eps = fd_eps

    def generator(self, x, u) -> np.ndarray:
        desc = self.descriptor
        if self.nu.tag == "base-form":
            a = self.nu.base_form(x, u)
            return -desc.ad_matrix(a.coords)
        # linearize the cocycle in the fiber around the identity
        eps = self._fd_eps
        cols = []
        for e in np.eye(desc.dim):
            gp = desc.exp(desc.algebra(eps * e))
            gm = desc.exp(desc.algebra(-eps * e))
            diff = (
                self.nu.horizontal_delta(x, gp, u).coords
                - self.nu.horizontal_delta(x, gm, u).coords
            ) / (2 * eps)
            cols.append(diff)
        return np.column_stack(cols)

    def covariant_coefficient(self, x, u) -> np.ndarray:
        return -self.generator(x, u)


def algebra_transport(
    nu, curve, xi: AlgebraElement, step=1e-2, cross_check=True, fd_eps=1e-4, cross_tol=1e-5
) -> AlgebraElement:
    """Induced linear transport of xi along the curve.

    Primary path integrates the linear ODE with generator K(x(t), x'(t));
    the cross-check differentiates eps -> transport_group(exp(eps xi)) at 0
    by central differences and must agree within ``cross_tol``.
    """
    desc = nu.bundle.fiber
    conn = AlgebraConnection(nu)

    def k_matrix(t):
        return conn.generator(curve.position(t), curve.velocity(t))

    out = integrate_linear(k_matrix, xi.coords, (curve.a, curve.b), step)
    if cross_check:
        scale = max(1.0, np.linalg.norm(xi.coords))
        eps = fd_eps / scale
        gp = transport_group(nu, curve, desc.exp(desc.algebra(eps * xi.coords)), step).element
        gm = transport_group(nu, curve, desc.exp(desc.algebra(-eps * xi.coords)), step).element
        fd = (desc.log(gp).coords - desc.log(gm).coords) / (2 * eps)
        gap = float(np.linalg.norm(fd - out))
        if gap > cross_tol * scale:
            raise InconsistencyError(
                f"algebra transport paths disagree by {gap:.3e} (tolerance {cross_tol:.1e})"
            )
    return desc.algebra(out)


def algebra_transport_linearity_check(nu, curve, xi, eta, a, b, step=1e-2) -> float:
    combo = nu.bundle.fiber.algebra(a * xi.coords + b * eta.coords)
    t_combo = algebra_transport(nu, curve, combo, step, cross_check=False)
    t_xi = algebra_transport(nu, curve, xi, step, cross_check=False)
    t_eta = algebra_transport(nu, curve, eta, step, cross_check=False)
    return float(
        np.linalg.norm(t_combo.coords - a * t_xi.coords - b * t_eta.coords)
    )


def ad_compatibility_check(nu, curve, g, xi, step=1e-2) -> float:
    """|| transport(Ad_g xi) - Ad_{transport(g)}(transport(xi)) ||."""
    desc = nu.bundle.fiber
    lhs = algebra_transport(nu, curve, desc.Ad(g, xi), step, cross_check=False)
    tg = transport_group(nu, curve, g, step).element
    txi = algebra_transport(nu, curve, xi, step, cross_check=False)
    rhs = desc.Ad(tg, txi)
    return float(np.linalg.norm(lhs.coords - rhs.coords))


def _restricted_curve(curve, t_lo, t_hi):
    return BaseCurve(t_lo, t_hi, curve.position, curve.velocity, label=curve.label)


def _covariant_group_derivative(nu, curve, g_path, t, ds, step):
    """nabla g(t)/dt as d/ds of pulling g(t+s) back to x(t), central differences."""
    desc = nu.bundle.fiber

    def pulled(s):
        if s == 0.0:
            return g_path(t).matrix
        if s > 0:
            seg = _restricted_curve(curve, t, t + s)
            return _reverse_transport(nu, seg, g_path(t + s), step).matrix
        seg = _restricted_curve(curve, t + s, t)
        return transport_group(nu, seg, g_path(t + s), step).element.matrix

    plus = pulled(ds)
    minus = pulled(-ds)
    return (plus - minus) / (2 * ds)


def _reverse_transport(nu, seg, g_end, step):
    """Transport from seg.b back to seg.a by reparametrizing the curve."""
    a, b = seg.a, seg.b

    def pos(t):
        return seg.position(a + b - t)

    def vel(t):
        return -np.asarray(seg.velocity(a + b - t))

    rev = BaseCurve(a, b, pos, vel, label=seg.label + "-rev")
    return transport_group(nu, rev, g_end, step).element


def covariant_derivative_bracket_check(
    nu, curve, g_path, xi_path, t, ds=1e-4, step=1e-3
) -> float:
    """Residual of the product rule tying nabla(Ad_g xi) to Ad_g nabla xi plus
    the bracket with the right-trivialized covariant velocity of g.

    All derivatives by central differences; transports by the group integrator.
    """
    desc = nu.bundle.fiber
    conn = AlgebraConnection(nu)

    def algebra_section(tt):
        return desc.Ad(g_path(tt), xi_path(tt)).coords

    x_t = curve.position(t)
    u_t = curve.velocity(t)
    k_t = conn.generator(x_t, u_t)

    def covariant_of(section):
        dsec = (np.asarray(section(t + ds)) - np.asarray(section(t - ds))) / (2 * ds)
        return dsec - k_t @ np.asarray(section(t))

    lhs = covariant_of(algebra_section)

    nabla_xi = covariant_of(lambda tt: xi_path(tt).coords)
    dg = _covariant_group_derivative(nu, curve, g_path, t, ds, step)
    g_t = g_path(t)
    rtd = desc.matrix_coords(dg @ np.linalg.inv(g_t.matrix), tol=1e-4)
    term = desc.bracket_coords(rtd, desc.Ad(g_t, xi_path(t)).coords)
    rhs = desc.Ad_matrix(g_t) @ nabla_xi + term
    return float(np.linalg.norm(lhs - rhs))


def horizontal_product_rule_check(nu, x, g, h, u, delta_h: AlgebraElement, eps=1e-5) -> float:
    """Finite-difference residual of the product rule for horizontal lifts:
    pushing (Hor_g(u), U_h) through the fiber product lands on Hor_{gh}(u)
    plus the left-translated vertical part of U_h."""
    desc = nu.bundle.fiber
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)

    def g_curve(s):
        return desc.exp(desc.algebra(s * nu.horizontal_delta(x, g, u).coords)) @ g

    def h_curve(s):
        return desc.exp(desc.algebra(s * delta_h.coords)) @ h

    prod_plus = g_curve(eps) @ h_curve(eps)
    prod_minus = g_curve(-eps) @ h_curve(-eps)
    lhs = (prod_plus.matrix - prod_minus.matrix) / (2 * eps)

    gh = g @ h
    hor_gh = nu.horizontal_delta(x, gh, u).coords
    nu_h = nu.connection_form(x, h, u, delta_h).coords
    # left translation of the vertical part: g . (nu_h h) expressed at gh
    rhs = desc.algebra_matrix(hor_gh) @ gh.matrix + g.matrix @ desc.algebra_matrix(nu_h) @ h.matrix
    return float(np.linalg.norm(lhs - rhs))
