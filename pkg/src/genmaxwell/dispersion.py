"""Momentum-space operators of the wave-equation families and their spectra.

Every square family is written as ``M(E, p) = E*A(p) + M(0, p)`` so that its
dispersion branches are the roots of the pencil ``det(E*A - B) = 0`` with
``B = -M(0, p)``. The spin-s family is an overdetermined stack and only
supports kernel extraction.
"""

from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clinalg import as_matrix, determinant, fix_phase, null_space, pencil_spectrum
from .reps import (
    Momentum,
    chiral_projector,
    check_spin,
    gamma,
    gamma5,
    pauli_lubanski,
    spin1_dot,
)

#: On-shell tolerance of ``solution_space`` (relative to the operator norm).
ON_SHELL_TOL = 1e-8

CSV_COLUMNS = ("kx", "ky", "kz", "branch_index", "re_E", "im_E", "residual")


class OffShellError(ValueError):
    """The requested (E, p) is not on a dispersion branch."""


class NotSquarePencilError(ValueError):
    """The family is not a square pencil in E (spin-s stack)."""


class Family(enum.Enum):
    DIRAC_TWO_MASS = "dirac-two-mass"
    WEYL_R = "weyl-r"
    WEYL_L = "weyl-l"
    CHIRAL_MASS = "chiral-mass"
    GERSTEN_CHI = "gersten-chi"
    SPIN_S = "spin-s"


DIRAC_LIKE = {Family.DIRAC_TWO_MASS, Family.WEYL_R, Family.WEYL_L, Family.CHIRAL_MASS}


@dataclass(frozen=True)
class EquationSpec:
    family: Family
    m1: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    B: np.ndarray | None = field(default=None, compare=False)
    s: object = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        for name in ("m1", "m2", "m3"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative")
            object.__setattr__(self, name, v)
        if fam is Family.DIRAC_TWO_MASS and self.m1 <= 0:
            raise ValueError("dirac-two-mass needs m1 > 0")
        if fam is Family.CHIRAL_MASS:
            if self.B is None:
                raise ValueError("chiral-mass needs a 4x4 mass matrix B")
            B = as_matrix(self.B)
            if B.shape != (4, 4):
                raise ValueError("B must be 4x4")
            object.__setattr__(self, "B", B)
        if fam is Family.SPIN_S:
            object.__setattr__(self, "s", check_spin(1 if self.s is None else self.s))

    @classmethod
    def dirac_two_mass(cls, m1, m2):
        return cls(Family.DIRAC_TWO_MASS, m1=m1, m2=m2)

    @classmethod
    def weyl_r(cls, m1):
        return cls(Family.WEYL_R, m1=m1)

    @classmethod
    def weyl_l(cls, m3):
        return cls(Family.WEYL_L, m3=m3)

    @classmethod
    def chiral_mass(cls, B):
        return cls(Family.CHIRAL_MASS, B=B)

    @classmethod
    def gersten_chi(cls):
        return cls(Family.GERSTEN_CHI)

    @classmethod
    def spin_s(cls, s):
        return cls(Family.SPIN_S, s=s)

    def mass_matrix(self) -> np.ndarray:
        """4x4 mass term of the Dirac-like families."""
        Pp, Pm = chiral_projector(+1), chiral_projector(-1)
        fam = self.family
        if fam is Family.DIRAC_TWO_MASS:
            return (self.m2**2 / self.m1) * Pm + self.m1 * Pp
        if fam is Family.WEYL_R:
            return self.m1 * Pp
        if fam is Family.WEYL_L:
            return self.m3 * Pm
        if fam is Family.CHIRAL_MASS:
            return self.B
        raise ValueError(f"{fam.value} has no 4x4 mass matrix")


@dataclass(frozen=True)
class DispersionResult:
    momentum: tuple[float, float, float]
    branches: np.ndarray
    residual: float


@dataclass(frozen=True)
class ChiralContent:
    left_weight: float
    right_weight: float


def _p3(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise ValueError("momentum must be a finite real 3-vector")
    return p


def momentum_operator(spec: EquationSpec, E, p) -> np.ndarray:
    """Matrix whose kernel is the plane-wave solution space at ``(E, p)``."""
    p = _p3(p)
    E = complex(E)
    fam = spec.family
    if fam in DIRAC_LIKE:
        return gamma(0) * E - sum(gamma(i + 1) * p[i] for i in range(3)) - spec.mass_matrix()
    if fam is Family.GERSTEN_CHI:
        M = np.zeros((4, 4), dtype=complex)
        M[:3, :3] = E * np.eye(3) + spin1_dot(p)
        M[:3, 3] = -p
        M[3, :3] = p
        M[3, 3] = -E
        return M
    if fam is Family.SPIN_S:
        # rows of (W^mu - s p^mu) psi = 0: mu = 0 is the helicity equation,
        # mu = 1..3 the subsidiary condition
        W = pauli_lubanski(spec.s, Momentum(p, E))
        p4 = np.array([E, *p])
        I = np.eye(W.components[0].shape[0])
        s = float(spec.s)
        return np.vstack([W.components[mu] - s * p4[mu] * I for mu in range(4)])
    raise ValueError(f"unknown family {fam!r}")


def _pencil(spec: EquationSpec, p) -> tuple[np.ndarray, np.ndarray]:
    if spec.family is Family.SPIN_S:
        raise NotSquarePencilError("spin-s system is overdetermined; use solution_space")
    M0 = momentum_operator(spec, 0.0, p)
    A = momentum_operator(spec, 1.0, p) - M0
    return A, -M0


def branch_residual(spec: EquationSpec, E, p) -> float:
    """``|det M(E, p)|`` scaled by ``||M||_2^n``."""
    M = momentum_operator(spec, E, p)
    scale = max(np.linalg.norm(M, 2), 1.0) ** M.shape[0]
    return abs(determinant(M)) / scale


def spectrum(spec: EquationSpec, p) -> DispersionResult:
    p = _p3(p)
    A, B = _pencil(spec, p)
    branches = pencil_spectrum(A, B)
    residual = max(branch_residual(spec, E, p) for E in branches)
    return DispersionResult(tuple(float(c) for c in p), branches, float(residual))


def is_massless(spec: EquationSpec, sample_momenta, tol: float = 1e-9) -> bool:
    """True iff every branch at every sample satisfies ``|E^2 - p^2| < tol (1 + p^2)``."""
    sample_momenta = list(sample_momenta)
    if not sample_momenta:
        raise ValueError("need at least one sample momentum")
    for p in sample_momenta:
        p = _p3(p)
        p2 = p @ p
        E = spectrum(spec, p).branches
        if np.any(np.abs(E**2 - p2) >= tol * (1 + p2)):
            return False
    return True


def _chirality_adapted(basis: list[np.ndarray]) -> list[np.ndarray]:
    """Rotate a kernel basis so that gamma5 restricted to it is diagonal.

    The kernel of a degenerate branch is only defined as a subspace; in this
    basis each vector carries an extremal chirality and the result does not
    depend on the SVD's arbitrary choice.
    """
    if len(basis) < 2:
        return basis
    K = np.column_stack(basis)
    _, U = np.linalg.eigh(K.conj().T @ gamma5() @ K)
    return [fix_phase(v) for v in (K @ U).T]


def solution_space(spec: EquationSpec, E, p, tol: float = ON_SHELL_TOL) -> list[np.ndarray]:
    """Orthonormal basis of plane-wave solutions at ``(E, p)``.

    For the Dirac-like families the basis diagonalises gamma5 within the
    kernel (see ``_chirality_adapted``).
    """
    M = momentum_operator(spec, E, p)
    basis = null_space(M, tol)
    if not basis:
        raise OffShellError(f"E={complex(E)} is not on a branch at p={tuple(_p3(p))}")
    if spec.family in DIRAC_LIKE:
        basis = _chirality_adapted(basis)
    return basis


def chiral_content(psi) -> ChiralContent:
    """``(|P- psi|^2, |P+ psi|^2) / |psi|^2`` for a 4-spinor."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"expected a 4-spinor, got shape {psi.shape}")
    n2 = np.vdot(psi, psi).real
    if n2 == 0:
        raise ValueError("zero spinor has no chirality content")
    left = np.linalg.norm(chiral_projector(-1) @ psi) ** 2 / n2
    right = np.linalg.norm(chiral_projector(+1) @ psi) ** 2 / n2
    return ChiralContent(float(left), float(right))


def chirality_mixing(spec: EquationSpec, E, p) -> float:
    """Largest ``min(left, right)`` over the chirality-adapted solution basis.

    Zero means every solution at ``(E, p)`` is a gamma5 eigenstate.
    """
    weights = [chiral_content(v) for v in solution_space(spec, E, p)]
    return max(min(w.left_weight, w.right_weight) for w in weights)


def sweep(spec: EquationSpec, momenta, workers: int = 1) -> list[DispersionResult]:
    """Spectra for many momenta; output order is that of ``momenta``."""
    momenta = [_p3(p) for p in momenta]
    if workers <= 1:
        return [spectrum(spec, p) for p in momenta]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: spectrum(spec, p), momenta))


def sweep_rows(results) -> list[tuple]:
    rows = []
    for r in results:
        for i, E in enumerate(r.branches):
            rows.append((*r.momentum, i, float(E.real), float(E.imag), r.residual))
    return rows


def to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in sweep_rows(results):
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
