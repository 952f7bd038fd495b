"""Chart-domain calculus: curves, algebra-valued forms, finite differences.

Everything operates on plain numpy arrays inside an open box chart.  Default
finite-difference step follows cbrt(machine epsilon) scaling, which balances
truncation and roundoff for second-order central stencils.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UsageError
from .groups import AlgebraElement, GroupDescriptor

__all__ = [
    "ChartDomain",
    "BaseCurve",
    "Polynomial",
    "AlgebraOneForm",
    "TwoIndexAlgebraForm",
    "fd_step",
    "finite_diff_jacobian",
    "directional_derivative",
    "numerical_bracket",
]

_EPS_CBRT = float(np.finfo(float).eps ** (1.0 / 3.0))


def fd_step(x, h=None):
    """Default central-difference step at x."""
    if h is not None:
        return float(h)
    return _EPS_CBRT * max(1.0, float(np.linalg.norm(x)))


@dataclass(frozen=True)
class ChartDomain:
    """Open box in R^n used as a trivializing chart domain."""

    lower: np.ndarray
    upper: np.ndarray
    label: str = "chart"

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise UsageError("chart bounds must be 1-d arrays of equal length")
        if not np.all(lo < hi):
            raise UsageError("chart lower bounds must be strictly below upper bounds")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self):
        return self.lower.shape[0]

    def contains(self, x, margin=0.0):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x > self.lower + margin) and np.all(x < self.upper - margin))

    def require(self, x, margin=0.0):
        if not self.contains(x, margin=margin):
            raise DomainError(f"point {np.asarray(x)} is outside chart {self.label}")

    def sample(self, rng, margin=0.05):
        span = self.upper - self.lower
        return self.lower + span * rng.uniform(margin, 1.0 - margin, size=self.dim)

    def center(self):
        return 0.5 * (self.lower + self.upper)


@dataclass
class BaseCurve:
    """Curve t -> x(t) in the chart with an (analytic or fallback) velocity.

    When no velocity is supplied a central-difference fallback is installed
    and flagged via ``velocity_is_fd`` so reports can mention it.
    """

    a: float
    b: float
    position: Callable[[float], np.ndarray]
    velocity: Optional[Callable[[float], np.ndarray]] = None
    label: str = "curve"
    velocity_is_fd: bool = field(default=False)

    def __post_init__(self):
        if not self.b > self.a:
            raise UsageError("curve interval must satisfy a < b")
        if self.velocity is None:
            h = 1e-6 * (self.b - self.a)
            pos = self.position

            def fd_velocity(t, _h=h, _pos=pos):
                return (np.asarray(_pos(t + _h)) - np.asarray(_pos(t - _h))) / (2 * _h)

            self.velocity = fd_velocity
            self.velocity_is_fd = True

    def validate(self, chart: Optional[ChartDomain] = None, samples=20, tol=1e-6):
        """Containment in the chart plus velocity consistency at sampled times."""
        ts = np.linspace(self.a, self.b, samples)
        h = 1e-6 * (self.b - self.a)
        worst = 0.0
        for t in ts:
            x = np.asarray(self.position(t), dtype=float)
            if chart is not None:
                chart.require(x)
            tt = min(max(t, self.a + h), self.b - h)
            fd = (np.asarray(self.position(tt + h)) - np.asarray(self.position(tt - h))) / (2 * h)
            worst = max(worst, float(np.linalg.norm(fd - np.asarray(self.velocity(tt)))))
        if worst > tol:
            raise UsageError(
                f"curve {self.label}: velocity inconsistent with position (residual {worst:.2e})"
            )
        return worst

    @staticmethod
    def line(start, end, interval=(0.0, 1.0), label="line"):
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        a, b = interval
        span = b - a

        def pos(t):
            s = (t - a) / span
            return (1.0 - s) * start + s * end

        def vel(t):
            return (end - start) / span

        return BaseCurve(a, b, pos, vel, label=label)

    @staticmethod
    def loop(center, radius, interval=(0.0, 1.0), axes=(0, 1), label="loop"):
        """Closed circle in the (axes) coordinate plane."""
        center = np.asarray(center, dtype=float)
        a, b = interval
        span = b - a
        i, j = axes

        def pos(t):
            s = 2.0 * np.pi * (t - a) / span
            x = center.copy()
            x[i] += radius * np.cos(s)
            x[j] += radius * np.sin(s)
            return x

        def vel(t):
            s = 2.0 * np.pi * (t - a) / span
            v = np.zeros_like(center)
            v[i] = -radius * np.sin(s) * 2.0 * np.pi / span
            v[j] = radius * np.cos(s) * 2.0 * np.pi / span
            return v

        return BaseCurve(a, b, pos, vel, label=label)

    @staticmethod
    def wiggle(start, end, amplitudes, interval=(0.0, 1.0), label="wiggle"):
        """Line plus sine perturbations vanishing at both endpoints."""
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        amp = np.asarray(amplitudes, dtype=float)
        a, b = interval
        span = b - a

        def pos(t):
            s = (t - a) / span
            return (1.0 - s) * start + s * end + amp * np.sin(np.pi * s) * np.sin(
                2.0 * np.pi * s + np.arange(start.size)
            )

        def vel(t):
            s = (t - a) / span
            base = (end - start) / span
            w = np.arange(start.size)
            d = (
                np.pi * np.cos(np.pi * s) * np.sin(2 * np.pi * s + w)
                + 2 * np.pi * np.sin(np.pi * s) * np.cos(2 * np.pi * s + w)
            )
            return base + amp * d / span

        return BaseCurve(a, b, pos, vel, label=label)


class Polynomial:
    """Multivariate polynomial from a coefficient table keyed by exponent strings.

    Table keys look like ``"2,0"`` (x1^2) or ``"1,1"`` (x1 x2); values are the
    real coefficients.  Kept deliberately simple: this is the exchange format
    for connection coefficients in scenario configs.
    """

    def __init__(self, table, dim):
        self.dim = int(dim)
        self.terms = []
        for key, coeff in table.items():
            exps = tuple(int(p) for p in str(key).split(","))
            if len(exps) != self.dim:
                raise UsageError(f"exponent key {key!r} does not match dimension {dim}")
            self.terms.append((exps, float(coeff)))
        self.terms.sort()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = 0.0
        for exps, coeff in self.terms:
            term = coeff
            for xi, e in zip(x, exps):
                if e:
                    term *= xi**e
            total += term
        return total

    def partial(self, mu):
        """Analytic partial derivative as a new Polynomial."""
        table = {}
        for exps, coeff in self.terms:
            e = exps[mu]
            if e == 0:
                continue
            new = list(exps)
            new[mu] = e - 1
            key = ",".join(str(v) for v in new)
            table[key] = table.get(key, 0.0) + coeff * e
        return Polynomial(table, self.dim)

    @staticmethod
    def constant(value, dim):
        return Polynomial({",".join(["0"] * dim): value}, dim)


class AlgebraOneForm:
    """Algebra-valued 1-form on the chart: (x, u) -> xi, linear in u."""

    def __init__(self, descriptor: GroupDescriptor, coefficients: Callable[[np.ndarray], np.ndarray], label="A"):
        # coefficients(x) returns an (n, dim_g) array: row mu holds the value on e_mu
        self.descriptor = descriptor
        self.coefficients = coefficients
        self.label = label

    def coefficient_array(self, x):
        return np.asarray(self.coefficients(np.asarray(x, dtype=float)), dtype=float)

    def __call__(self, x, u) -> AlgebraElement:
        arr = self.coefficient_array(x)
        return self.descriptor.algebra(np.asarray(u, dtype=float) @ arr)

    @staticmethod
    def zero(descriptor, n):
        return AlgebraOneForm(descriptor, lambda x: np.zeros((n, descriptor.dim)), label="0")

    @staticmethod
    def constant(descriptor, array):
        array = np.asarray(array, dtype=float)
        return AlgebraOneForm(descriptor, lambda x: array)

    @staticmethod
    def from_polynomials(descriptor, tables, dim):
        """tables[mu][k] is a Polynomial coefficient table for dx^mu x E_k."""
        n = len(tables)
        terms = []  # flat (mu, k, exponents, coefficient) list for fast eval
        for mu in range(n):
            for k in range(descriptor.dim):
                for exps, coeff in Polynomial(tables[mu].get(str(k), {}), dim).terms:
                    terms.append((mu, k, exps, coeff))
        shape = (n, descriptor.dim)

        def coeff(x):
            out = np.zeros(shape)
            for mu, k, exps, c in terms:
                val = c
                for xi, e in zip(x, exps):
                    if e:
                        val *= xi**e
                out[mu, k] += val
            return out

        return AlgebraOneForm(descriptor, coeff)

    def validate_linearity(self, rng, chart, samples=20, tol=1e-10):
        worst = 0.0
        for _ in range(samples):
            x = chart.sample(rng)
            u = rng.standard_normal(chart.dim)
            v = rng.standard_normal(chart.dim)
            a, b = rng.standard_normal(2)
            lhs = self(x, a * u + b * v).coords
            rhs = a * self(x, u).coords + b * self(x, v).coords
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        if worst > tol:
            raise UsageError(f"1-form {self.label} is not linear in u (residual {worst:.2e})")
        return worst


class TwoIndexAlgebraForm:
    """Algebra-valued bilinear form (x, u, v) -> xi."""

    def __init__(self, descriptor, coefficients, label="B"):
        # coefficients(x) returns an (n, n, dim_g) array
        self.descriptor = descriptor
        self.coefficients = coefficients
        self.label = label

    def coefficient_array(self, x):
        return np.asarray(self.coefficients(np.asarray(x, dtype=float)), dtype=float)

    def __call__(self, x, u, v) -> AlgebraElement:
        arr = self.coefficient_array(x)
        out = np.einsum("m,mnk,n->k", np.asarray(u, float), arr, np.asarray(v, float))
        return self.descriptor.algebra(out)

    def validate_bilinearity(self, rng, chart, samples=20, tol=1e-10):
        worst = 0.0
        for _ in range(samples):
            x = chart.sample(rng)
            u, v, w = (rng.standard_normal(chart.dim) for _ in range(3))
            a, b = rng.standard_normal(2)
            lhs = self(x, a * u + b * w, v).coords
            rhs = a * self(x, u, v).coords + b * self(x, w, v).coords
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            lhs = self(x, u, a * v + b * w).coords
            rhs = a * self(x, u, v).coords + b * self(x, u, w).coords
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        if worst > tol:
            raise UsageError(f"2-form {self.label} is not bilinear (residual {worst:.2e})")
        return worst


def finite_diff_jacobian(f, x, h=None, chart: Optional[ChartDomain] = None):
    """Central-difference Jacobian of f: R^n -> R^m, error O(h^2)."""
    x = np.asarray(x, dtype=float)
    step = fd_step(x, h)
    if chart is not None:
        for i in range(x.size):
            for s in (+step, -step):
                probe = x.copy()
                probe[i] += s
                chart.require(probe)
    cols = []
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        cols.append((np.asarray(f(xp), float) - np.asarray(f(xm), float)) / (2 * step))
    return np.column_stack(cols)


def directional_derivative(f, x, v, h=None):
    """Central difference of f along direction v (not normalized)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    vn = np.linalg.norm(v)
    if vn == 0.0:
        probe = np.asarray(f(x), float)
        return np.zeros_like(probe)
    step = fd_step(x, h) / max(1.0, vn)
    fp = np.asarray(f(x + step * v), float)
    fm = np.asarray(f(x - step * v), float)
    return (fp - fm) / (2 * step)


def numerical_bracket(v1, v2, z, h=None):
    """Lie bracket [v1, v2](z) of vector fields on R^N by central differences.

    [v1, v2] = (Dv2) v1 - (Dv1) v2, each directional derivative evaluated with
    a second-order stencil.
    """
    z = np.asarray(z, dtype=float)
    a = np.asarray(v1(z), dtype=float)
    b = np.asarray(v2(z), dtype=float)
    d_v2_along_v1 = directional_derivative(v2, z, a, h)
    d_v1_along_v2 = directional_derivative(v1, z, b, h)
    return d_v2_along_v1 - d_v1_along_v2
