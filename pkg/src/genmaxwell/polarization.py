"""(1/2,1/2) polarization 4-vectors, the Lorentz condition, massless-limit
scans, and momentum-space residuals of the Proca-type and Weinberg-type
field equations.

Plane-wave substitution: ``d_mu -> -i p_mu`` with ``p^0 = E``.
Field strengths are stored as ``F[mu, nu] = F^{mu nu}`` (both indices up).
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .reps import METRIC, minkowski_dot

CSV_COLUMNS = (
    "sigma", "m", "N", "px", "py", "pz",
    "re_u0", "im_u0", "re_u1", "im_u1", "re_u2", "im_u2", "re_u3", "im_u3",
    "lorentz_residual",
)


class Helicity(enum.Enum):
    PLUS = "+1"
    MINUS = "-1"
    ZERO = "0"
    TIME = "0t"

    @classmethod
    def parse(cls, label) -> "Helicity":
        if isinstance(label, cls):
            return label
        aliases = {"+1": cls.PLUS, "1": cls.PLUS, "+": cls.PLUS, "-1": cls.MINUS, "-": cls.MINUS,
                   "0": cls.ZERO, "0t": cls.TIME, "0_t": cls.TIME, "t": cls.TIME}
        key = str(label).strip()
        if key not in aliases:
            raise ValueError(f"unknown helicity label {label!r}")
        return aliases[key]


def _p3(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise ValueError("momentum must be a finite real 3-vector")
    return p


def on_shell_energy(p, m: float) -> float:
    p = _p3(p)
    return math.sqrt(p @ p + m * m)


@dataclass(frozen=True)
class PolarizationVector:
    u: np.ndarray
    helicity: Helicity
    mass: float
    N: float
    p: tuple[float, float, float]

    @property
    def energy(self) -> float:
        return on_shell_energy(self.p, self.mass)

    @property
    def momentum4(self) -> np.ndarray:
        return np.array([self.energy, *self.p], dtype=complex)


def polarization_components(p, m: float, N: float, sigma) -> np.ndarray:
    """Closed-form ``u^mu(p, sigma)`` for ``m > 0``."""
    if not m > 0:
        raise ValueError("polarization vectors need m > 0; use limit_scan for m -> 0")
    sigma = Helicity.parse(sigma)
    p1, p2, p3 = _p3(p)
    E = on_shell_energy((p1, p2, p3), m)
    d = E + m
    if sigma is Helicity.PLUS:
        pr = complex(p1, p2)
        u = -N / (math.sqrt(2) * m) * np.array([pr, m + p1 * pr / d, 1j * m + p2 * pr / d, p3 * pr / d])
    elif sigma is Helicity.MINUS:
        pl = complex(p1, -p2)
        u = N / (math.sqrt(2) * m) * np.array([pl, m + p1 * pl / d, -1j * m + p2 * pl / d, p3 * pl / d])
    elif sigma is Helicity.ZERO:
        u = N / m * np.array([p3, p1 * p3 / d, p2 * p3 / d, m + p3 * p3 / d], dtype=complex)
    else:
        u = N / m * np.array([E, p1, p2, p3], dtype=complex)
    return u.astype(complex)


def polarization_vector(p, m: float, N: float = 1.0, sigma="+1") -> PolarizationVector:
    sigma = Helicity.parse(sigma)
    u = polarization_components(p, m, N, sigma)
    return PolarizationVector(u, sigma, float(m), float(N), tuple(float(c) for c in _p3(p)))


def lorentz_condition(pv: PolarizationVector) -> complex:
    """``p_mu u^mu`` on shell."""
    return minkowski_dot(pv.momentum4, pv.u)


def limit_scan(p, sigma, N: float = 1.0, masses=(1.0, 0.1, 0.01, 0.001)) -> list[float | None]:
    """Slope of ``log|u^mu|`` against ``log m``, one entry per component.

    A slope near -1 marks a ``1/m`` divergence. Components that vanish for
    every mass get ``None``.
    """
    masses = np.asarray(masses, dtype=float)
    if masses.size < 4:
        raise ValueError("need at least four masses")
    if np.any(masses <= 0) or np.any(np.diff(masses) >= 0):
        raise ValueError("masses must be positive and strictly decreasing")
    U = np.array([polarization_components(p, m, N, sigma) for m in masses])
    x = np.log(masses)
    out: list[float | None] = []
    for mu in range(4):
        a = np.abs(U[:, mu])
        if np.all(a == 0):
            out.append(None)
            continue
        if np.any(a == 0):
            raise ValueError(f"component {mu} vanishes for some masses only; slope undefined")
        out.append(float(np.polyfit(x, np.log(a), 1)[0]))
    return out


def _four(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise ValueError("expected a 4-vector")
    return v


def field_strength(p4, A, scale: float = 1.0) -> np.ndarray:
    """``F^{mu nu} = -i (p^mu A^nu - p^nu A^mu) / scale``."""
    p4, A = _four(p4), _four(A)
    return -1j * (np.outer(p4, A) - np.outer(A, p4)) / scale


def divergence(p4, F) -> np.ndarray:
    """Plane-wave ``d_alpha F^{alpha mu}`` = ``-i p_alpha F^{alpha mu}``."""
    p_low = METRIC @ _four(p4)
    return -1j * (p_low @ F)


def proca_residual_vector(variant: str, p, E, A, m: float) -> tuple[np.ndarray, np.ndarray]:
    """Field strength and residual 4-vector of the standard or modified Proca pair."""
    if not m > 0:
        raise ValueError("m must be positive")
    p4 = np.array([complex(E), *_p3(p)])
    if variant == "modified":
        F = field_strength(p4, A, 2 * m)
        return F, divergence(p4, F) + (m / 2) * _four(A)
    if variant == "standard":
        F = field_strength(p4, A)
        return F, divergence(p4, F) + m * m * _four(A)
    raise ValueError(f"variant must be 'standard' or 'modified', got {variant!r}")


def proca_residual(variant: str, p, E, A, m: float) -> tuple[np.ndarray, float]:
    F, r = proca_residual_vector(variant, p, E, A, m)
    return F, float(np.max(np.abs(r)))


def renormalization_map_residual(p, E, A, m: float) -> float:
    """Relative mismatch between the modified pair at ``2m A`` and the standard pair at ``A``.

    Under ``A -> 2m A`` (with ``F`` unchanged) the two sets coincide, so both
    the field strengths and the residual vectors must agree.
    """
    A = _four(A)
    F_std, r_std = proca_residual_vector("standard", p, E, A, m)
    F_mod, r_mod = proca_residual_vector("modified", p, E, 2 * m * A, m)
    scale = max(np.max(np.abs(r_std)), np.max(np.abs(F_std)), 1e-300)
    return float(max(np.max(np.abs(r_mod - r_std)), np.max(np.abs(F_mod - F_std))) / scale)


def weinberg_residual(p, E, F, m: float) -> float:
    """Max-entry residual of the second-order tensor equation for ``F``.

    Free indices ``mu`` (down) and ``nu`` (up):
    ``d_mu d^alpha F_alpha^nu - d^nu d^alpha F_{alpha mu} + m^2 F_mu^nu``.
    """
    F = np.asarray(F, dtype=complex)
    if F.shape != (4, 4) or np.max(np.abs(F + F.T)) > 1e-12 * max(1.0, np.max(np.abs(F))):
        raise ValueError("F must be an antisymmetric 4x4 matrix")
    g = METRIC
    p_up = np.array([complex(E), *_p3(p)])
    p_low = g @ p_up
    F_down_up = g @ F          # F_alpha^nu
    F_down = g @ F @ g         # F_{alpha mu}
    # d -> -i p, so each product of two derivatives carries a factor -1
    t1 = -np.outer(p_low, p_up @ F_down_up)
    t2 = -np.outer(p_up @ F_down, p_up)
    return float(np.max(np.abs(t1 - t2 + m * m * F_down_up)))


def massless_limit_equation_check(p, chi_amplitude, F=None) -> float:
    """Residual of ``d_alpha F^{alpha mu} = d^mu chi`` on the massless shell.

    With ``F`` given the residual of that field is returned. Otherwise the
    longitudinal-temporal ansatz ``F^{0j} = -F^{j0} = f p_j/|p|`` is fitted by
    least squares and the residual of the best fit is returned.
    """
    p = _p3(p)
    k = float(np.linalg.norm(p))
    if k == 0:
        raise ValueError("p must be non-zero")
    p4 = np.array([k, *p], dtype=complex)
    source = -1j * p4 * complex(chi_amplitude)
    if F is not None:
        return float(np.max(np.abs(divergence(p4, np.asarray(F, dtype=complex)) - source)))
    n = p / k
    basis = np.zeros((4, 4), dtype=complex)
    basis[0, 1:] = n
    basis[1:, 0] = -n
    col = divergence(p4, basis)
    f, *_ = np.linalg.lstsq(col[:, None], source, rcond=None)
    return float(np.max(np.abs(col * f[0] - source)))


def polarization_rows(vectors) -> list[tuple]:
    rows = []
    for pv in vectors:
        r = lorentz_condition(pv)
        comps = []
        for c in pv.u:
            comps += [float(c.real), float(c.imag)]
        rows.append((pv.helicity.value, pv.mass, pv.N, *pv.p, *comps, abs(r)))
    return rows


def to_csv(vectors) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in polarization_rows(vectors):
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
