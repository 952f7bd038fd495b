"""Trivialized group bundles, fibered actions, generators, and jets.

Everything lives in a single-chart presentation: the group bundle is
chart x G, the total space is quotient-chart x G with the fiber acting by
right multiplication (torsor model).  Vector fibers reuse the translation
group descriptor, so one code path covers both.

Tangent vectors at a total-space point carry the base component u and the
right-trivialized fiber velocity delta (so the fiber part of a curve h(t)
is recovered from h' = delta h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calculus import ChartDomain
from .errors import UsageError, ValidationError
from .groups import AlgebraElement, GroupDescriptor, GroupElement

__all__ = [
    "LieGroupBundle",
    "TotalSpace",
    "TotalPoint",
    "Tangent",
    "FiberedAction",
    "SectionJet",
    "jet_lift_action",
    "vertical_isomorphism_check",
    "equivariance_of_generators",
    "paired_generator_residual",
    "AdjointBundlePoint",
    "adjoint_class_residual",
    "adjoint_class_equal",
]


@dataclass(frozen=True)
class LieGroupBundle:
    """Trivialized Lie group bundle chart x G."""

    base: ChartDomain
    fiber: GroupDescriptor

    def validate_fiberwise_group(self, rng, samples=50, tol=1e-10):
        """Associativity and unit of the fiberwise product on random samples."""
        d = self.fiber
        worst = 0.0
        for _ in range(samples):
            g, h, k = (d.random_element(rng) for _ in range(3))
            left = (g @ h) @ k
            right = g @ (h @ k)
            worst = max(worst, left.distance(right))
            worst = max(worst, (g @ d.identity()).distance(g))
        if worst > tol:
            raise ValidationError(f"fiberwise group axioms fail (residual {worst:.2e})")
        return worst


@dataclass(frozen=True)
class TotalSpace:
    """Trivialized total space: quotient chart x fiber group (torsor model).

    The diagram base <- total -> quotient is realized with quotient = base
    chart; the two projections of a point are its base coordinates, so the
    projection compatibility is structural.
    """

    base: ChartDomain
    quotient: ChartDomain
    fiber: GroupDescriptor

    def point(self, q, fiber_element: GroupElement) -> "TotalPoint":
        return TotalPoint(np.asarray(q, dtype=float), fiber_element)

    def random_point(self, rng, scale=1.0) -> "TotalPoint":
        return TotalPoint(self.quotient.sample(rng), self.fiber.random_element(rng, scale))


@dataclass(frozen=True, eq=False)
class TotalPoint:
    q: np.ndarray
    fiber: GroupElement

    def distance(self, other: "TotalPoint") -> float:
        return float(
            np.linalg.norm(self.q - other.q) + np.linalg.norm(self.fiber.matrix - other.fiber.matrix)
        )


@dataclass(frozen=True, eq=False)
class Tangent:
    """Tangent (u, delta) at a total point: base velocity plus right-trivialized
    fiber velocity."""

    u: np.ndarray
    delta: AlgebraElement

    def norm(self):
        return float(np.linalg.norm(self.u) + np.linalg.norm(self.delta.coords))


class FiberedAction:
    """Vertical right action of the group bundle on the total space.

    The default torsor action is right multiplication in the fiber; custom
    actions may be supplied as act(y, g) together with optional analytic
    differential/generator hooks (finite differences otherwise).
    """

    def __init__(self, space: TotalSpace, bundle: LieGroupBundle, act=None, fd_eps=1e-6):
        if space.fiber is not bundle.fiber and act is None:
            raise UsageError("torsor action requires matching fiber descriptors")
        self.space = space
        self.bundle = bundle
        self._act = act
        self._fd_eps = fd_eps

    # -- the action ------------------------------------------------------

    def act(self, y: TotalPoint, g: GroupElement) -> TotalPoint:
        if self._act is not None:
            return self._act(y, g)
        return TotalPoint(y.q, y.fiber @ g)

    def differential(self, y: TotalPoint, g: GroupElement, ty: Tangent, tg: Tangent) -> Tangent:
        """d(action) applied to a fibered tangent pair over a common base velocity.

        Torsor closed form: d(h g) right-trivialized at hg equals
        delta_h + Ad_h(delta_g).
        """
        if not np.allclose(ty.u, tg.u):
            raise UsageError("fibered tangent pair must share the base velocity")
        if self._act is None:
            desc = self.space.fiber
            delta = desc.algebra(
                ty.delta.coords + desc.Ad_matrix(y.fiber) @ tg.delta.coords
            )
            return Tangent(ty.u, delta)
        return self._fd_differential(y, g, ty, tg)

    def _fd_differential(self, y, g, ty, tg):
        desc = self.space.fiber
        eps = self._fd_eps

        def at(s):
            ys = TotalPoint(
                y.q + s * ty.u, desc.exp(desc.algebra(s * ty.delta.coords)) @ y.fiber
            )
            gs = desc.exp(desc.algebra(s * tg.delta.coords)) @ g
            return self.act(ys, gs)

        plus, minus = at(eps), at(-eps)
        du = (plus.q - minus.q) / (2 * eps)
        dmat = (plus.fiber.matrix - minus.fiber.matrix) / (2 * eps)
        base = self.act(y, g)
        delta = desc.matrix_coords(dmat @ np.linalg.inv(base.fiber.matrix), tol=1e-5)
        return Tangent(du, desc.algebra(delta))

    # -- infinitesimal generators -----------------------------------------

    def generator(self, y: TotalPoint, xi: AlgebraElement) -> Tangent:
        """Vertical generator of xi at y: derivative of t -> y . exp(t xi).

        Torsor closed form: right-trivialized value Ad_h(xi)."""
        desc = self.space.fiber
        if self._act is None:
            return Tangent(np.zeros(self.space.quotient.dim), desc.Ad(y.fiber, xi))
        eps = self._fd_eps
        plus = self.act(y, desc.exp(desc.algebra(eps * xi.coords)))
        minus = self.act(y, desc.exp(desc.algebra(-eps * xi.coords)))
        dmat = (plus.fiber.matrix - minus.fiber.matrix) / (2 * eps)
        delta = desc.matrix_coords(dmat @ np.linalg.inv(y.fiber.matrix), tol=1e-5)
        return Tangent((plus.q - minus.q) / (2 * eps), desc.algebra(delta))

    def generator_matrix(self, y: TotalPoint) -> np.ndarray:
        """Columns are the fiber components of the basis generators at y."""
        desc = self.space.fiber
        cols = [self.generator(y, desc.algebra(e)).delta.coords for e in np.eye(desc.dim)]
        return np.column_stack(cols)

    # -- axioms -----------------------------------------------------------

    def validate(self, rng, samples=200, tol=1e-10, freeness_samples=None):
        """Verticality, compatibility, unit, and sampled freeness."""
        desc = self.space.fiber
        worst = 0.0
        for _ in range(samples):
            y = self.space.random_point(rng)
            g = desc.random_element(rng)
            h = desc.random_element(rng)
            yg = self.act(y, g)
            worst = max(worst, float(np.linalg.norm(yg.q - y.q)))
            two_step = self.act(self.act(y, h), g)
            one_step = self.act(y, h @ g)
            worst = max(worst, two_step.distance(one_step))
            worst = max(worst, self.act(y, desc.identity()).distance(y))
        if worst > tol:
            raise ValidationError(f"fibered action axioms fail (residual {worst:.2e})")
        n_free = freeness_samples if freeness_samples is not None else samples
        for _ in range(n_free):
            y = self.space.random_point(rng)
            g = desc.random_element(rng)
            if np.linalg.norm(g.matrix - np.eye(desc.matrix_dim)) > 1e-8:
                if self.act(y, g).distance(y) <= 1e-10:
                    raise ValidationError("sampled freeness violation: y.g = y with g far from 1")
        return worst


def vertical_isomorphism_check(action: FiberedAction, y: TotalPoint, tol=1e-10):
    """Rank test for xi -> generator(y, xi); reports the minimal singular value."""
    mat = action.generator_matrix(y)
    svals = np.linalg.svd(mat, compute_uv=False)
    dim = action.space.fiber.dim
    rank = int(np.sum(svals > tol * max(1.0, svals[0] if svals.size else 1.0)))
    report = {"rank": rank, "dim": dim, "min_singular_value": float(svals[-1]) if svals.size else 0.0}
    if rank < dim:
        raise ValidationError(
            f"generator map is rank-deficient ({rank} < {dim}): degenerate action", report
        )
    return report


def equivariance_of_generators(action, y, g, xi, eps=1e-5):
    """Residual of pushing a generator through the action versus the adjoint-
    twisted generator at the translated point, both by central differences."""
    desc = action.space.fiber

    def lhs(s):
        ys = action.act(y, desc.exp(desc.algebra(s * xi.coords)))
        return action.act(ys, g)

    p, m = lhs(eps), lhs(-eps)
    lhs_fiber = (p.fiber.matrix - m.fiber.matrix) / (2 * eps)
    lhs_base = (p.q - m.q) / (2 * eps)

    ad_xi = desc.Ad(g.inverse(), xi)
    yg = action.act(y, g)

    def rhs(s):
        return action.act(yg, desc.exp(desc.algebra(s * ad_xi.coords)))

    p, m = rhs(eps), rhs(-eps)
    rhs_fiber = (p.fiber.matrix - m.fiber.matrix) / (2 * eps)
    rhs_base = (p.q - m.q) / (2 * eps)
    return float(np.linalg.norm(lhs_fiber - rhs_fiber) + np.linalg.norm(lhs_base - rhs_base))


def paired_generator_residual(action, y, g, xi, eta, eps=1e-5):
    """Residual of d(action) on the generator pair (xi at y, left-flow eta at g)
    against the generator of Ad_{g^{-1}}(xi + eta) at y.g."""
    desc = action.space.fiber

    def curve(s):
        ys = action.act(y, desc.exp(desc.algebra(s * xi.coords)))
        gs = desc.exp(desc.algebra(s * eta.coords)) @ g
        return action.act(ys, gs)

    p, m = curve(eps), curve(-eps)
    lhs_fiber = (p.fiber.matrix - m.fiber.matrix) / (2 * eps)
    lhs_base = (p.q - m.q) / (2 * eps)

    target = desc.Ad(g.inverse(), desc.algebra(xi.coords + eta.coords))
    yg = action.act(y, g)

    def gen(s):
        return action.act(yg, desc.exp(desc.algebra(s * target.coords)))

    p, m = gen(eps), gen(-eps)
    rhs_fiber = (p.fiber.matrix - m.fiber.matrix) / (2 * eps)
    rhs_base = (p.q - m.q) / (2 * eps)
    return float(np.linalg.norm(lhs_fiber - rhs_fiber) + np.linalg.norm(lhs_base - rhs_base))


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SectionJet:
    """One-jet of a fiber-valued section at a base point.

    ``value`` is the fiber element; ``deriv`` has shape (n, dim_g) and holds
    the right-trivialized derivative along each base direction.
    """

    x: np.ndarray
    value: GroupElement
    deriv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "deriv", np.asarray(self.deriv, dtype=float))

    def section(self, descriptor: GroupDescriptor) -> Callable[[np.ndarray], GroupElement]:
        """Representative germ with this jet: exp(deriv . dx) value."""

        def rep(xq):
            dx = np.asarray(xq, dtype=float) - self.x
            return descriptor.exp(descriptor.algebra(dx @ self.deriv)) @ self.value

        return rep


def jet_lift_action(
    action: FiberedAction,
    y_jet: SectionJet,
    g_jet: SectionJet,
    fd: bool = False,
    eps: float = 1e-6,
) -> SectionJet:
    """Jet of the composite x -> action(y-section(x), g-section(x)).

    Uses the chain rule via the action differential (analytic for the torsor
    model); with ``fd=True`` recomputes slotwise from representative germs by
    central differences, as an independent cross-check path.
    """
    if y_jet.deriv.shape != g_jet.deriv.shape:
        raise UsageError("jet derivative arrays must have matching shapes")
    desc = action.space.fiber
    y0 = TotalPoint(y_jet.x, y_jet.value)
    value = action.act(y0, g_jet.value)
    n = y_jet.deriv.shape[0]
    if not fd:
        rows = []
        for mu in range(n):
            u = np.zeros(n)
            u[mu] = 1.0
            t = action.differential(
                y0,
                g_jet.value,
                Tangent(u, desc.algebra(y_jet.deriv[mu])),
                Tangent(u, desc.algebra(g_jet.deriv[mu])),
            )
            rows.append(t.delta.coords)
        return SectionJet(y_jet.x, value.fiber, np.vstack(rows))
    y_rep = y_jet.section(desc)
    g_rep = g_jet.section(desc)
    rows = []
    for mu in range(n):
        shift = np.zeros(n)
        shift[mu] = eps
        plus = action.act(TotalPoint(y_jet.x, y_rep(y_jet.x + shift)), g_rep(y_jet.x + shift))
        minus = action.act(TotalPoint(y_jet.x, y_rep(y_jet.x - shift)), g_rep(y_jet.x - shift))
        dmat = (plus.fiber.matrix - minus.fiber.matrix) / (2 * eps)
        rows.append(desc.matrix_coords(dmat @ np.linalg.inv(value.fiber.matrix), tol=1e-4))
    return SectionJet(y_jet.x, value.fiber, np.vstack(rows))


# ---------------------------------------------------------------------------
# adjoint bundle classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdjointBundlePoint:
    """Representative (y, xi) of a class under (y.g, Ad_{g^{-1}} xi)."""

    y: TotalPoint
    xi: AlgebraElement


def solve_torsor_transition(y1: TotalPoint, y2: TotalPoint) -> GroupElement:
    """Unique g with y1 . g = y2 in the torsor model."""
    if not np.allclose(y1.q, y2.q, atol=1e-9):
        raise UsageError("points lie over different base points")
    return y1.fiber.inverse() @ y2.fiber


def adjoint_class_residual(p1: AdjointBundlePoint, p2: AdjointBundlePoint) -> float:
    g = solve_torsor_transition(p1.y, p2.y)
    desc = p1.xi.descriptor
    expected = desc.Ad(g.inverse(), p1.xi)
    return float(np.linalg.norm(expected.coords - p2.xi.coords))


def adjoint_class_equal(p1: AdjointBundlePoint, p2: AdjointBundlePoint, tol=1e-9) -> bool:
    return adjoint_class_residual(p1, p2) <= tol
