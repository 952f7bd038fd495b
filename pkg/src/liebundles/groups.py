"""Matrix Lie group kernel.

Groups are embedded matrix groups described by a :class:`GroupDescriptor`: an
algebra basis, structure constants, a membership residual, and a retraction
that projects near-group matrices back onto the group.  Elements are thin
immutable wrappers around numpy arrays; every operation is a pure function, so
values are safe to share across threads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import DescriptorError, DomainError, RangeError, UsageError

__all__ = [
    "GroupDescriptor",
    "AlgebraElement",
    "GroupElement",
    "so3_descriptor",
    "translation_descriptor",
    "descriptor_from_json",
    "descriptor_to_json",
]


def _vec(m):
    return np.asarray(m, dtype=float).reshape(-1)


def derive_structure_constants(basis):
    """Structure constants c[k,i,j] with [E_i, E_j] = sum_k c[k,i,j] E_k.

    Solved by least squares against the flattened basis; raises if some
    commutator leaves the span of the basis.
    """
    basis = np.asarray(basis, dtype=float)
    d = basis.shape[0]
    flat = basis.reshape(d, -1).T  # (m*m, d)
    c = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            comm = basis[i] @ basis[j] - basis[j] @ basis[i]
            coef, res, *_ = np.linalg.lstsq(flat, _vec(comm), rcond=None)
            if np.linalg.norm(flat @ coef - _vec(comm)) > 1e-10:
                raise DescriptorError(
                    f"commutator [E_{i}, E_{j}] is not in the span of the algebra basis"
                )
            c[:, i, j] = coef
    c[np.abs(c) < 1e-12] = 0.0
    return 0.5 * (c - np.swapaxes(c, 1, 2))


@dataclass(frozen=True, eq=False)
class GroupDescriptor:
    """An embedded matrix Lie group together with its numerical controls.

    ``basis`` has shape (dim, m, m); ``structure_constants`` has shape
    (dim, dim, dim) indexed as c[k, i, j].  ``family`` tags the retraction /
    membership conventions ("orthogonal", "translation", "semidirect",
    "generic").
    """

    name: str
    matrix_dim: int
    basis: np.ndarray
    structure_constants: np.ndarray
    membership_tol: float = 1e-8
    family: str = "generic"
    injectivity_radius: float = np.inf
    retraction: Optional[Callable[[np.ndarray], np.ndarray]] = None
    membership_residual_fn: Optional[Callable[[np.ndarray], float]] = None
    exp_hook: Optional[Callable[[np.ndarray], np.ndarray]] = None
    log_hook: Optional[Callable[[np.ndarray], np.ndarray]] = None
    ad_matrix_hook: Optional[Callable[[np.ndarray], np.ndarray]] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(
            self, "structure_constants", np.asarray(self.structure_constants, dtype=float)
        )
        flat = basis.reshape(basis.shape[0], -1).T
        object.__setattr__(self, "_basis_flat", flat)
        object.__setattr__(self, "_basis_pinv", np.linalg.pinv(flat))

    # -- basic queries -------------------------------------------------

    @property
    def dim(self):
        return self.basis.shape[0]

    def identity(self):
        return GroupElement(np.eye(self.matrix_dim), self, check=False)

    def zero(self):
        return AlgebraElement(np.zeros(self.dim), self)

    def algebra(self, coords):
        return AlgebraElement(np.asarray(coords, dtype=float), self)

    def element(self, matrix, check=True):
        return GroupElement(np.asarray(matrix, dtype=float), self, check=check)

    # -- coordinates <-> matrices ---------------------------------------

    def algebra_matrix(self, coords):
        m = self.matrix_dim
        return (np.asarray(coords, dtype=float) @ self._basis_flat.T).reshape(m, m)

    def matrix_coords(self, matrix, tol=1e-9):
        """Coordinates of a matrix in the algebra basis; error if off-span."""
        coords = self._basis_pinv @ _vec(matrix)
        residual = np.linalg.norm(self._basis_flat @ coords - _vec(matrix))
        if residual > tol * max(1.0, np.linalg.norm(matrix)):
            raise DescriptorError(
                f"matrix is not in the span of the {self.name} algebra basis "
                f"(residual {residual:.3e})"
            )
        return coords

    # -- membership ------------------------------------------------------

    def membership_residual(self, matrix):
        if self.membership_residual_fn is not None:
            return float(self.membership_residual_fn(matrix))
        return 0.0

    def retract(self, matrix):
        if self.retraction is not None:
            return self.retraction(matrix)
        return matrix

    # -- core operations --------------------------------------------------

    def exp(self, xi: "AlgebraElement") -> "GroupElement":
        """Group exponential of an algebra element, retracted onto the group."""
        coords = np.asarray(xi.coords, dtype=float)
        if not np.all(np.isfinite(coords)):
            raise DomainError("exp: algebra coordinates must be finite")
        m = self.algebra_matrix(coords)
        if self.exp_hook is not None:
            g = self.exp_hook(m)
        else:
            g = scipy.linalg.expm(m)
        return GroupElement(self.retract(g), self, check=False)

    def log(self, g: "GroupElement") -> "AlgebraElement":
        """Principal logarithm; valid within the configured injectivity radius."""
        mat = g.matrix
        if self.log_hook is not None:
            m = self.log_hook(mat)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                m = scipy.linalg.logm(mat)
            if np.max(np.abs(np.imag(m))) > 1e-9:
                raise RangeError("log: matrix is outside the principal branch")
            m = np.real(m)
        coords = self.matrix_coords(m)
        if np.linalg.norm(coords) > self.injectivity_radius:
            raise RangeError(
                f"log: element lies outside the injectivity radius "
                f"{self.injectivity_radius:.3f} of {self.name}"
            )
        back = self.exp(self.algebra(coords))
        if np.linalg.norm(back.matrix - mat) > 1e-10 * max(1.0, np.linalg.norm(mat)):
            raise RangeError("log: exp(log(g)) does not reproduce g")
        return self.algebra(coords)

    def Ad(self, g: "GroupElement", xi: "AlgebraElement") -> "AlgebraElement":
        """Adjoint action g xi g^{-1}, expressed in algebra coordinates."""
        if xi.descriptor is not self:
            raise UsageError("Ad: element and algebra value use different descriptors")
        if self.ad_matrix_hook is not None:
            return self.algebra(self.ad_matrix_hook(g.matrix) @ xi.coords)
        conj = g.matrix @ self.algebra_matrix(xi.coords) @ g.inverse().matrix
        return self.algebra(self.matrix_coords(conj))

    def Ad_matrix(self, g: "GroupElement") -> np.ndarray:
        """Matrix of Ad_g on algebra coordinates, shape (dim, dim)."""
        if self.ad_matrix_hook is not None:
            return self.ad_matrix_hook(g.matrix)
        ginv = g.inverse().matrix
        cols = [
            self.matrix_coords(g.matrix @ self.basis[j] @ ginv) for j in range(self.dim)
        ]
        return np.column_stack(cols)

    def bracket(self, xi: "AlgebraElement", eta: "AlgebraElement") -> "AlgebraElement":
        if xi.descriptor is not eta.descriptor:
            raise UsageError("bracket: operands use different descriptors")
        out = np.einsum("kij,i,j->k", self.structure_constants, xi.coords, eta.coords)
        return self.algebra(out)

    def ad_matrix(self, coords) -> np.ndarray:
        """Matrix of ad_xi = [xi, .] on coordinates."""
        return np.einsum("kij,i->kj", self.structure_constants, np.asarray(coords, float))

    def bracket_coords(self, a, b):
        """Coordinate bracket on raw arrays; broadcasts over leading axes."""
        return np.einsum("kij,...i,...j->...k", self.structure_constants, a, b)

    # -- sampling ----------------------------------------------------------

    def random_algebra(self, rng, scale=1.0):
        return self.algebra(rng.uniform(-scale, scale, size=self.dim))

    def random_element(self, rng, scale=1.0):
        return self.exp(self.random_algebra(rng, scale))

    # -- self-validation ----------------------------------------------------

    def validate(self, tol=1e-12):
        """Check structure constants against commutators, antisymmetry, Jacobi."""
        c = self.structure_constants
        d = self.dim
        worst = 0.0
        for i in range(d):
            for j in range(d):
                comm = self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i]
                recon = np.tensordot(c[:, i, j], self.basis, axes=(0, 0))
                worst = max(worst, float(np.max(np.abs(comm - recon))))
        anti = float(np.max(np.abs(c + np.swapaxes(c, 1, 2))))
        jac = np.einsum("mil,ljk->mijk", c, c)
        jacobi = jac + np.einsum("mjl,lki->mijk", c, c) + np.einsum("mkl,lij->mijk", c, c)
        jwr = float(np.max(np.abs(jacobi)))
        if max(worst, anti, jwr) > tol:
            raise DescriptorError(
                f"{self.name}: structure constant check failed "
                f"(commutator {worst:.2e}, antisymmetry {anti:.2e}, jacobi {jwr:.2e})"
            )
        return {"commutator": worst, "antisymmetry": anti, "jacobi": jwr}


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Element of the Lie algebra in basis coordinates."""

    coords: np.ndarray
    descriptor: GroupDescriptor

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (self.descriptor.dim,):
            raise UsageError(
                f"algebra coordinates have shape {coords.shape}, expected ({self.descriptor.dim},)"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("algebra coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @property
    def matrix(self):
        return self.descriptor.algebra_matrix(self.coords)

    def norm(self):
        return float(np.linalg.norm(self.coords))

    def __add__(self, other):
        if other.descriptor is not self.descriptor:
            raise UsageError("cannot add algebra elements from different descriptors")
        return AlgebraElement(self.coords + other.coords, self.descriptor)

    def __sub__(self, other):
        if other.descriptor is not self.descriptor:
            raise UsageError("cannot subtract algebra elements from different descriptors")
        return AlgebraElement(self.coords - other.coords, self.descriptor)

    def __rmul__(self, scalar):
        return AlgebraElement(float(scalar) * self.coords, self.descriptor)

    def __neg__(self):
        return AlgebraElement(-self.coords, self.descriptor)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Group element stored as its embedding matrix."""

    matrix: np.ndarray
    descriptor: GroupDescriptor
    check: bool = True

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", mat)
        if self.check:
            res = self.descriptor.membership_residual(mat)
            if res > self.descriptor.membership_tol:
                raise DescriptorError(
                    f"matrix violates {self.descriptor.name} membership "
                    f"(residual {res:.3e} > {self.descriptor.membership_tol:.1e})"
                )

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if other.descriptor is not self.descriptor:
            raise UsageError("cannot multiply elements from different descriptors")
        return GroupElement(self.matrix @ other.matrix, self.descriptor, check=False)

    def inverse(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.matrix), self.descriptor, check=False)

    def membership_residual(self):
        return self.descriptor.membership_residual(self.matrix)

    def distance(self, other):
        return float(np.linalg.norm(self.matrix - other.matrix))


# ---------------------------------------------------------------------------
# standard descriptors
# ---------------------------------------------------------------------------


def _orthogonal_residual(m):
    return float(
        np.linalg.norm(m.T @ m - np.eye(m.shape[0])) + abs(np.linalg.det(m) - 1.0)
    )


def _orthogonal_retract(m):
    """Closest special-orthogonal matrix.

    Near the group a couple of Newton polar iterations suffice and are much
    cheaper than the SVD, which remains the fallback for large drift."""
    eye = np.eye(m.shape[0])
    gram_defect = m.T @ m - eye
    if np.linalg.norm(gram_defect) < 1e-4:
        r = m @ (eye - 0.5 * gram_defect)
        defect = r.T @ r - eye
        if np.linalg.norm(defect) > 1e-14:
            r = r @ (eye - 0.5 * defect)
        return r
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] *= -1.0
        r = u @ vt
    return r


def _so3_exp(m):
    w = np.array([m[2, 1], m[0, 2], m[1, 0]])
    theta = np.linalg.norm(w)
    if theta < 1e-8:
        return np.eye(3) + m + 0.5 * (m @ m)
    a = np.sin(theta) / theta
    b = (1.0 - np.cos(theta)) / theta**2
    return np.eye(3) + a * m + b * (m @ m)


def _so3_log(r):
    s = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    c = 0.5 * (np.trace(r) - 1.0)
    sn = np.linalg.norm(s)
    theta = np.arctan2(sn, c)
    if theta > np.pi - 0.05:
        raise RangeError("log: rotation angle too close to pi for the principal branch")
    if theta < 1e-7:
        w = s * (1.0 + theta**2 / 6.0)
    else:
        w = s * theta / sn
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


def so3_descriptor(membership_tol=1e-8):
    """Rotation group of R^3 with the standard antisymmetric basis."""
    e1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    e2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    e3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    basis = np.stack([e1, e2, e3])
    return GroupDescriptor(
        name="so3",
        matrix_dim=3,
        basis=basis,
        structure_constants=derive_structure_constants(basis),
        membership_tol=membership_tol,
        family="orthogonal",
        injectivity_radius=np.pi - 0.1,
        retraction=_orthogonal_retract,
        membership_residual_fn=_orthogonal_residual,
        exp_hook=_so3_exp,
        log_hook=_so3_log,
        # on the standard antisymmetric basis the adjoint matrix is the rotation
        ad_matrix_hook=lambda m: m,
    )


def _translation_residual(m):
    k = m.shape[0] - 1
    res = np.linalg.norm(m[:k, :k] - np.eye(k))
    res += np.linalg.norm(m[k, :k]) + abs(m[k, k] - 1.0)
    return float(res)


def _translation_retract(m):
    k = m.shape[0] - 1
    out = np.eye(k + 1)
    out[:k, k] = m[:k, k]
    return out


def translation_descriptor(m, membership_tol=1e-8):
    """Additive group (R^m, +) embedded as affine translation matrices."""
    basis = np.zeros((m, m + 1, m + 1))
    for i in range(m):
        basis[i, i, m] = 1.0
    return GroupDescriptor(
        name=f"translation{m}",
        matrix_dim=m + 1,
        basis=basis,
        structure_constants=np.zeros((m, m, m)),
        membership_tol=membership_tol,
        family="translation",
        injectivity_radius=np.inf,
        retraction=_translation_retract,
        membership_residual_fn=_translation_residual,
        exp_hook=lambda x: np.eye(m + 1) + x,
        log_hook=lambda g: g - np.eye(m + 1),
        ad_matrix_hook=lambda mat: np.eye(m),
        extra={"vector_dim": m},
    )


_FAMILY_BUILDERS = {
    "orthogonal": (_orthogonal_retract, _orthogonal_residual),
    "translation": (_translation_retract, _translation_residual),
    "generic": (None, None),
}


def descriptor_from_json(doc):
    """Build a descriptor from a JSON document (text, dict, or file path)."""
    if isinstance(doc, str):
        try:
            data = json.loads(doc)
        except json.JSONDecodeError:
            with open(doc, "r", encoding="utf-8") as fh:
                data = json.load(fh)
    else:
        data = doc
    try:
        name = data["name"]
        mdim = int(data["matrix_dim"])
        raw = data["basis"]
    except KeyError as exc:
        raise UsageError(f"descriptor document is missing field {exc}") from exc
    basis = np.array([np.asarray(b, dtype=float).reshape(mdim, mdim) for b in raw])
    family = data.get("family", "generic")
    if family not in _FAMILY_BUILDERS:
        raise UsageError(f"unknown descriptor family {family!r}")
    retract, residual = _FAMILY_BUILDERS[family]
    c = data.get("structure_constants")
    c = np.asarray(c, dtype=float) if c is not None else derive_structure_constants(basis)
    radius = data.get("injectivity_radius")
    if radius is None:
        radius = np.pi - 0.1 if family == "orthogonal" else np.inf
    desc = GroupDescriptor(
        name=name,
        matrix_dim=mdim,
        basis=basis,
        structure_constants=c,
        membership_tol=float(data.get("membership_tol", 1e-8)),
        family=family,
        injectivity_radius=float(radius),
        retraction=retract,
        membership_residual_fn=residual,
    )
    desc.validate()
    return desc


def descriptor_to_json(desc: GroupDescriptor):
    """Round-trippable JSON document (row-major basis arrays)."""
    return {
        "name": desc.name,
        "matrix_dim": desc.matrix_dim,
        "basis": [b.reshape(-1).tolist() for b in desc.basis],
        "structure_constants": desc.structure_constants.tolist(),
        "membership_tol": desc.membership_tol,
        "family": desc.family,
        "injectivity_radius": (
            desc.injectivity_radius if np.isfinite(desc.injectivity_radius) else None
        ),
    }
