"""Representation matrices: Pauli, spin-1, Dirac (chiral basis) and
momentum-space Pauli-Lubanski components.

Conventions used across the package:

* natural units, ``c = hbar = 1``;
* metric ``g = diag(+1, -1, -1, -1)``;
* plane waves ``exp(i(k.x - E t))``, so ``E -> i d/dt`` and ``p -> -i grad``;
* gammas in the chiral basis, ``gamma5 = diag(-1, -1, +1, +1)``; the upper
  2-spinor is left-handed (``P-``), the lower one right-handed (``P+``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[i, k, j] = -1.0
    return eps


EPS = levi_civita()

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _axis(i: int) -> int:
    if i not in (1, 2, 3):
        raise IndexError(f"axis index must be 1, 2 or 3, got {i!r}")
    return i - 1


def pauli(i: int) -> np.ndarray:
    """Pauli matrix sigma_i for i in 1..3."""
    return _PAULI[_axis(i)].copy()


def spin1(i: int) -> np.ndarray:
    """Spin-1 generator with entries ``(S^i)_{jk} = -i eps_{ijk}``."""
    return -1j * EPS[_axis(i)].astype(complex)


def check_spin(s) -> Fraction:
    s = Fraction(s).limit_denominator(2)
    if s not in (Fraction(1, 2), Fraction(1)):
        raise ValueError(f"spin must be 1/2 or 1, got {s}")
    return s


def spin_matrices(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three generators S^1..S^3 for spin 1/2 (sigma/2) or spin 1."""
    s = check_spin(s)
    if s == 1:
        return tuple(spin1(i) for i in (1, 2, 3))
    return tuple(pauli(i) / 2 for i in (1, 2, 3))


def dot_vec(mats, p) -> np.ndarray:
    """``sum_i mats[i] * p[i]`` for a triple of matrices, e.g. sigma.p."""
    return sum(m * c for m, c in zip(mats, p))


def sigma_dot(p) -> np.ndarray:
    return dot_vec(_PAULI, p)


def spin1_dot(p) -> np.ndarray:
    return dot_vec(spin_matrices(1), p)


_GAMMA0 = np.block([[np.zeros((2, 2)), I2], [I2, np.zeros((2, 2))]])
_GAMMAS = (_GAMMA0,) + tuple(
    np.block([[np.zeros((2, 2)), s], [-s, np.zeros((2, 2))]]) for s in _PAULI
)
_GAMMA5 = 1j * _GAMMAS[0] @ _GAMMAS[1] @ _GAMMAS[2] @ _GAMMAS[3]


def gamma(mu: int) -> np.ndarray:
    """Dirac matrix gamma^mu (upper index) in the chiral basis."""
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"Lorentz index must be 0..3, got {mu!r}")
    return _GAMMAS[mu].copy()


def gamma5() -> np.ndarray:
    return _GAMMA5.copy()


def chiral_projector(sign: int) -> np.ndarray:
    """``(1 + sign*gamma5)/2``; ``sign=+1`` selects the right-handed block."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return (I4 + sign * _GAMMA5) / 2


def slash(p4) -> np.ndarray:
    """``gamma^mu p_mu = gamma^0 p^0 - gamma.p`` for an upper-index 4-vector."""
    p4 = np.asarray(p4, dtype=complex)
    return _GAMMAS[0] * p4[0] - sum(_GAMMAS[i] * p4[i] for i in (1, 2, 3))


def minkowski_dot(a, b) -> complex:
    """``a^mu b_mu`` for two upper-index 4-vectors (no complex conjugation)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return complex(a[0] * b[0] - a[1:] @ b[1:])


@dataclass(frozen=True)
class Momentum:
    """Spatial momentum ``p`` and energy ``E`` (= p^0), natural units."""

    p: tuple[float, float, float]
    E: complex = 0.0

    def __post_init__(self):
        p = tuple(float(c) for c in self.p)
        if len(p) != 3 or not all(np.isfinite(p)) or not np.isfinite(complex(self.E)):
            raise ValueError("momentum must be a finite 3-vector with finite energy")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "E", complex(self.E))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def four(self) -> np.ndarray:
        return np.array([self.E, *self.p], dtype=complex)

    @property
    def p_r(self) -> complex:
        return complex(self.p[0], self.p[1])

    @property
    def p_l(self) -> complex:
        return complex(self.p[0], -self.p[1])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.p))


@dataclass(frozen=True)
class PauliLubanski:
    """Components W^0..W^3 (upper index) for one spin and momentum."""

    spin: Fraction
    components: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]

    def lower(self) -> tuple[np.ndarray, ...]:
        return tuple(METRIC[mu, mu] * w for mu, w in enumerate(self.components))

    def contract(self, p4) -> np.ndarray:
        """``W^mu p_mu``."""
        return sum(METRIC[mu, mu] * w * p4[mu] for mu, w in enumerate(self.components))

    def square(self) -> np.ndarray:
        """``W_mu W^mu``."""
        return sum(METRIC[mu, mu] * w @ w for mu, w in enumerate(self.components))


def pauli_lubanski(s, pm: Momentum) -> PauliLubanski:
    """``W^0 = S.p`` and ``W^i = p^0 S^i + i (S x p)^i`` for spin ``s``."""
    s = check_spin(s)
    S = spin_matrices(s)
    p = pm.vec
    w0 = dot_vec(S, p)
    ws = tuple(
        pm.E * S[i] + 1j * sum(EPS[i, j, k] * S[j] * p[k] for j in range(3) for k in range(3))
        for i in range(3)
    )
    return PauliLubanski(s, (w0,) + ws)
