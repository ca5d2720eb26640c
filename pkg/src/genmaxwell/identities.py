"""Randomised residual checks of the operator identities behind the
Dirac, Gersten and Pauli-Lubanski constructions.

Each check draws seeded samples with ``|E|, |p|, m <= 10`` and reports the
largest absolute entry of the residual matrix.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .clinalg import DimensionError, commutator, max_abs
from .reps import (
    I2,
    Momentum,
    check_spin,
    gamma5,
    pauli_lubanski,
    sigma_dot,
    slash,
    spin1_dot,
    spin_matrices,
)

DEFAULT_TOL = 1e-12
SAMPLE_BOUND = 10.0


@dataclass(frozen=True)
class IdentityReport:
    name: str
    samples: int
    seed: int
    tolerance: float
    max_residual: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise ValueError("samples must be >= 1")


def random_momenta(samples: int, seed: int):
    """Yield ``(E, p)`` pairs, ``E`` in [-10, 10] and ``|p| <= 10``.

    The stream is generated up front so the draw order does not depend on
    how the residual evaluations are scheduled.
    """
    rng = np.random.default_rng(seed)
    E = rng.uniform(-SAMPLE_BOUND, SAMPLE_BOUND, samples)
    p = rng.uniform(-1.0, 1.0, (samples, 3)) * SAMPLE_BOUND / np.sqrt(3)
    return list(zip(E, p))


def _report(name, residuals, samples, seed, tol) -> IdentityReport:
    return IdentityReport(name, samples, seed, tol, float(max(residuals)))


def kg_residual(E, p) -> float:
    sp = sigma_dot(p)
    lhs = (E * I2 - sp) @ (E * I2 + sp)
    return max_abs(lhs - (E**2 - np.dot(p, p)) * I2)


def gersten_residual(E, p) -> float:
    p = np.asarray(p, dtype=float)
    sp = spin1_dot(p)
    I3 = np.eye(3)
    lhs = (E * I3 - sp) @ (E * I3 + sp) - np.outer(p, p)
    return max_abs(lhs - (E**2 - p @ p) * I3)


def pl_factorization_residual(s, p0, p) -> float:
    s = check_spin(s)
    sf = float(s)
    pm = Momentum(p, p0)
    W = pauli_lubanski(s, pm)
    p4 = pm.four
    I = np.eye(W.components[0].shape[0])
    lhs = sum(
        g * (W.components[mu] - sf * p4[mu] * I) @ (W.components[mu] + sf * p4[mu] * I)
        for mu, g in enumerate((1, -1, -1, -1))
    )
    pp = p0**2 - np.dot(p, p)
    return max_abs(lhs + sf * (2 * sf + 1) * pp * I)


def check_kg_factorization(samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``(E - sigma.p)(E + sigma.p) = (E^2 - p^2) I``."""
    _check_samples(samples)
    res = [kg_residual(E, p) for E, p in random_momenta(samples, seed)]
    return _report("kg_factorization", res, samples, seed, tol)


def check_gersten_decomposition(samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``(E - S.p)(E + S.p) - p p^T = (E^2 - p^2) I`` for spin 1."""
    _check_samples(samples)
    res = [gersten_residual(E, p) for E, p in random_momenta(samples, seed)]
    return _report("gersten_decomposition", res, samples, seed, tol)


def check_pl_factorization(s, samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``(W_mu - s p_mu)(W^mu + s p^mu) = -s(2s+1) p^2 I``, off shell."""
    _check_samples(samples)
    s = check_spin(s)
    res = [pl_factorization_residual(s, p0, p) for p0, p in random_momenta(samples, seed)]
    return _report(f"pl_factorization_s{s}", res, samples, seed, tol)


def check_pauli_square(samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``(sigma.p)^2 = p^2 I``."""
    _check_samples(samples)
    res = []
    for _, p in random_momenta(samples, seed):
        sp = sigma_dot(p)
        res.append(max_abs(sp @ sp - (p @ p) * I2))
    return _report("pauli_square", res, samples, seed, tol)


def check_spin1_cube(samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``(S.p)^3 = p^2 (S.p)`` for spin 1 (the spin-1 matrices are singular)."""
    _check_samples(samples)
    res = []
    for _, p in random_momenta(samples, seed):
        sp = spin1_dot(p)
        res.append(max_abs(sp @ sp @ sp - (p @ p) * sp))
    return _report("spin1_cube", res, samples, seed, tol)


def check_pl_transversality(s, samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``W^mu p_mu = 0`` for arbitrary (off-shell) ``p^0``."""
    _check_samples(samples)
    s = check_spin(s)
    res = []
    for p0, p in random_momenta(samples, seed):
        pm = Momentum(p, p0)
        res.append(max_abs(pauli_lubanski(s, pm).contract(pm.four)))
    return _report(f"pl_transversality_s{s}", res, samples, seed, tol)


def check_pl_casimir(s, samples: int = 200, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``W_mu W^mu = -s(s+1) p_mu p^mu I``."""
    _check_samples(samples)
    s = check_spin(s)
    sf = float(s)
    res = []
    for p0, p in random_momenta(samples, seed):
        W = pauli_lubanski(s, Momentum(p, p0))
        I = np.eye(W.components[0].shape[0])
        res.append(max_abs(W.square() + sf * (sf + 1) * (p0**2 - p @ p) * I))
    return _report(f"pl_casimir_s{s}", res, samples, seed, tol)


def check_spin_algebra(s, samples: int = 1, tol: float = DEFAULT_TOL, seed: int = 0) -> IdentityReport:
    """``[S^i, S^j] = i eps_ijk S^k``; deterministic, ``samples`` is ignored."""
    from .reps import EPS

    S = spin_matrices(s)
    res = [
        max_abs(commutator(S[i], S[j]) - 1j * sum(EPS[i, j, k] * S[k] for k in range(3)))
        for i in range(3)
        for j in range(3)
    ]
    return _report(f"spin_algebra_s{check_spin(s)}", res, 9, seed, tol)


def check_chirality_commutator(pm: Momentum) -> float:
    """Frobenius norm of ``[gamma^mu p_mu, gamma5]``.

    Vanishes only for ``p^mu = 0``: every gamma^mu anticommutes with gamma5,
    so the commutator equals ``2 (gamma^mu p_mu) gamma5``.
    """
    return float(np.linalg.norm(commutator(slash(pm.four), gamma5())))


def gersten_lagrangian_density(E, pm: Momentum, psi, c: float = 1.0) -> complex:
    """Momentum-space density ``-c psi^dagger (E/c + S.p) psi``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (3,):
        raise DimensionError(f"psi must be a 3-vector, got shape {psi.shape}")
    op = (E / c) * np.eye(3) + spin1_dot(pm.vec)
    return complex(-c * (psi.conj() @ op @ psi))


def run_suite(samples: int = 200, seed: int = 0, tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """All identity checks used by the acceptance suite and the CLI."""
    reports = [
        check_kg_factorization(samples, tol, seed),
        check_gersten_decomposition(samples, tol, seed),
        check_pauli_square(samples, tol, seed),
        check_spin1_cube(samples, tol, seed),
    ]
    for s in ("1/2", 1):
        reports += [
            check_pl_factorization(s, samples, tol, seed),
            check_pl_transversality(s, samples, tol, seed),
            check_pl_casimir(s, samples, tol, seed),
            check_spin_algebra(s, tol=tol, seed=seed),
        ]
    return reports
