"""Projector calculus: properties, compatibility, and state membership.

A property of a system is an orthogonal projector on its Hilbert space
(equivalently, the subspace it projects onto).  A state has the property
when its support lies inside the range, lacks it when the support lies in
the orthogonal complement, and otherwise the property is meaningless for
that state.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import Tolerances, active_tolerances
from .doubleket import swap_operator
from .linalg import as_matrix, frob


class Verdict(Enum):
    HAS = "has"
    HAS_NOT = "has_not"
    MEANINGLESS = "meaningless"


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of a membership judgment.

    ``overlap`` is ``Tr(P rho)``, attached for diagnostics only; the verdict
    never depends on it.
    """

    verdict: Verdict
    overlap: float


class Property:
    """Orthogonal projector with cached rank."""

    __slots__ = ("matrix", "rank")

    def __init__(self, matrix, *, tols: Tolerances | None = None):
        tols = tols or active_tolerances()
        m = as_matrix(matrix, name="property matrix")
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"property matrix must be square, got {m.shape}")
        if frob(m - m.conj().T) > tols.tol_herm:
            raise ValueError("property matrix is not Hermitian within tolerance")
        if frob(m @ m - m) > tols.tol_recon:
            raise ValueError("property matrix is not idempotent within tolerance")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        if np.any(np.minimum(np.abs(w), np.abs(w - 1.0)) > tols.tol_rank):
            raise ValueError("property eigenvalues are not all in {0, 1}")
        m = m.copy()
        m.setflags(write=False)
        self.matrix = m
        self.rank = int(np.sum(w > 0.5))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"Property(dim={self.dim}, rank={self.rank})"


class State:
    """Density matrix: Hermitian, positive semidefinite, unit trace."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, *, tols: Tolerances | None = None):
        tols = tols or active_tolerances()
        m = as_matrix(matrix, name="state matrix")
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"state matrix must be square, got {m.shape}")
        if frob(m - m.conj().T) > tols.tol_herm:
            raise ValueError("state matrix is not Hermitian within tolerance")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        if np.any(w < -tols.tol_rank):
            raise ValueError("state matrix is not positive semidefinite")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"state trace must be 1, got {tr!r}")
        m = m.copy()
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def property_from_span(vectors, dim: int, *, tols: Tolerances | None = None) -> Property:
    """Orthogonal projector onto the span of the given vectors.

    Linearly dependent inputs are harmless; the rank of the result is the
    dimension of the span.  An empty or all-zero list yields the zero
    property, which is trivial by construction.
    """
    tols = tols or active_tolerances()
    dim = int(dim)
    cols = []
    for v in vectors:
        c = np.asarray(v, dtype=complex).reshape(-1)
        if c.size != dim:
            raise ValueError(f"span vector has length {c.size}, expected {dim}")
        n = float(np.linalg.norm(c))
        if n > tols.tol_rank:
            cols.append(c / n)
    if not cols:
        return Property(np.zeros((dim, dim), dtype=complex), tols=tols)
    a = np.column_stack(cols)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > tols.tol_rank))
    ur = u[:, :r]
    return Property(ur @ ur.conj().T, tols=tols)


def is_nontrivial(p: Property) -> bool:
    """True when the projector is neither zero nor the identity."""
    return 0 < p.rank < p.dim


def _check_same_dim(p: Property, q: Property) -> None:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")


def compatible(p: Property, q: Property, *, tols: Tolerances | None = None) -> tuple[bool, float]:
    """Commutation test; returns (flag, commutator Frobenius norm)."""
    tols = tols or active_tolerances()
    _check_same_dim(p, q)
    norm = frob(p.matrix @ q.matrix - q.matrix @ p.matrix)
    return norm <= tols.tol_compat, norm


def product_if_property(p: Property, q: Property, *, tols: Tolerances | None = None) -> Property | None:
    """The product PQ, when the two commute (and PQ is itself a property)."""
    tols = tols or active_tolerances()
    ok, _ = compatible(p, q, tols=tols)
    if not ok:
        return None
    return Property(p.matrix @ q.matrix, tols=tols)


def mutually_exclusive(p: Property, q: Property, *, tols: Tolerances | None = None) -> bool:
    """True when PQ = QP = 0, a special case of compatibility."""
    tols = tols or active_tolerances()
    _check_same_dim(p, q)
    return (
        frob(p.matrix @ q.matrix) <= tols.tol_compat
        and frob(q.matrix @ p.matrix) <= tols.tol_compat
    )


def has_property(rho: State, p: Property, *, tols: Tolerances | None = None) -> PropertyCheck:
    """Three-valued membership judgment of a state against a property.

    Support inclusion is tested as ``||P rho P - rho|| <= tol_support``
    rather than by eigendecomposing ``rho``, which avoids rank decisions on
    near-zero state eigenvalues.
    """
    tols = tols or active_tolerances()
    if rho.dim != p.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs property {p.dim}")
    pm, rm = p.matrix, rho.matrix
    overlap = float(np.real(np.trace(pm @ rm)))
    if frob(pm @ rm @ pm - rm) <= tols.tol_support:
        return PropertyCheck(Verdict.HAS, overlap)
    comp = np.eye(p.dim, dtype=complex) - pm
    if frob(comp @ rm @ comp - rm) <= tols.tol_support:
        return PropertyCheck(Verdict.HAS_NOT, overlap)
    return PropertyCheck(Verdict.MEANINGLESS, overlap)


def symmetric_projector(d: int, *, tols: Tolerances | None = None) -> Property:
    """Projector onto the swap-invariant subspace of ``H_d (x) H_d``.

    Rank is ``d (d + 1) / 2``; idempotency follows from the swap operator
    being an involution.
    """
    if d < 2:
        raise ValueError("symmetric projector needs dimension >= 2")
    e = swap_operator(d)
    return Property((np.eye(d * d, dtype=complex) + e) / 2.0, tols=tols)
