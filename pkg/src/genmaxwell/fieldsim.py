"""Time-domain evolution of the chi-generalised Maxwell system.

The complex pair ``(psi, chi)`` with ``psi = E - iB`` obeys

    d psi/dt = c (i s curl psi - grad chi)
    d chi/dt = -c div psi

on a periodic grid, with ``s = +1`` (``s = -1`` gives the primed,
opposite-helicity system obeyed by ``(psi*, chi*)``). Splitting into real
and imaginary parts gives the generalised Maxwell set with a scalar field:

    curl E = -dB/dt/c + grad Im chi      div E = -d Re chi/dt / c
    curl B =  dE/dt/c + grad Re chi      div B =  d Im chi/dt / c

Spatial derivatives use the 4th-order compact centred (Pade) scheme,
``(f'_{i-1} + 4 f'_i + f'_{i+1})/6 = (f_{i+1} - f_{i-1})/(2 dx)``. On a
periodic grid its operator is circulant, so it is applied exactly through
its Fourier symbol ``i (3 sin t)/(dx (2 + cos t))``. Time stepping is the
classical four-stage RK4.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

MAX_CFL = 0.5
DIAG_COLUMNS = ("t", "norm", "max_abs_chi", "max_div_psi", "res_constraint_E", "res_constraint_B")
SNAPSHOT_VERSION = 1
SNAPSHOT_COLUMNS = (
    "index", "ix", "iy", "iz",
    "re_psi1", "im_psi1", "re_psi2", "im_psi2", "re_psi3", "im_psi3", "re_chi", "im_chi",
)


class CFLError(ValueError):
    """Time step violates the stability bound."""


class IncommensurateError(ValueError):
    """Wave vector is not a lattice wave vector of the periodic box."""


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid. ``dim=1`` varies along z only (shape 1x1xn)."""

    n: int
    L: float = 1.0
    dt: float | None = None
    cfl: float | None = None
    dim: int = 1
    c: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8:
            raise ValueError("n must be an integer >= 8")
        if self.dim not in (1, 3):
            raise ValueError("dim must be 1 or 3")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError("L must be positive")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("c must be positive")
        dx = self.L / self.n
        cfl, dt = self.cfl, self.dt
        if dt is None:
            cfl = 0.25 if cfl is None else cfl
            dt = cfl * dx / self.c
        elif cfl is None:
            cfl = dt * self.c / dx
        if not (dt > 0 and cfl > 0):
            raise ValueError("dt and cfl must be positive")
        if cfl > MAX_CFL:
            raise CFLError(f"cfl={cfl} exceeds {MAX_CFL}")
        if dt > cfl * dx / self.c * (1 + 1e-12):
            raise CFLError(f"dt={dt} exceeds cfl*dx/c={cfl * dx / self.c}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "dt", float(dt))
        object.__setattr__(self, "cfl", float(cfl))

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def shape(self) -> tuple[int, int, int]:
        return (1, 1, self.n) if self.dim == 1 else (self.n,) * 3

    @property
    def cell_volume(self) -> float:
        return self.dx**self.dim

    @property
    def period(self) -> float:
        """Light-crossing time of the box, the period of the lowest mode."""
        return self.L / self.c

    def coordinates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        axes = [np.arange(m) * self.dx for m in self.shape]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def check_stable(self) -> None:
        if self.cfl > MAX_CFL or self.dt > MAX_CFL * self.dx / self.c * (1 + 1e-12):
            raise CFLError("time step violates the CFL bound; refusing to step")


@dataclass
class FieldState:
    psi: np.ndarray          # shape (3, *grid.shape)
    chi: np.ndarray          # shape grid.shape
    t: float = 0.0

    @property
    def E(self) -> np.ndarray:
        return self.psi.real

    @property
    def B(self) -> np.ndarray:
        return -self.psi.imag

    def copy(self) -> "FieldState":
        return FieldState(self.psi.copy(), self.chi.copy(), self.t)


@dataclass(frozen=True)
class Diagnostics:
    t: float
    norm: float
    max_abs_chi: float
    max_div_psi: float
    constraint_res_E: float
    constraint_res_B: float

    def row(self) -> tuple[float, ...]:
        return (self.t, self.norm, self.max_abs_chi, self.max_div_psi,
                self.constraint_res_E, self.constraint_res_B)


# -- derivative symbols -------------------------------------------------------

def _angles(m: int) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(m)


def compact_symbol(m: int, dx: float) -> np.ndarray:
    """Fourier symbol of the 4th-order compact first derivative (purely imaginary)."""
    if m == 1:
        return np.zeros(1, dtype=complex)
    th = _angles(m)
    return 1j * 3 * np.sin(th) / (dx * (2 + np.cos(th)))


def spectral_symbol(m: int, dx: float) -> np.ndarray:
    """Exact derivative of the trigonometric interpolant; Nyquist mode dropped."""
    if m == 1:
        return np.zeros(1, dtype=complex)
    k = _angles(m) / dx
    if m % 2 == 0:
        k[m // 2] = 0.0
    return 1j * k


def _symbols(grid: GridSpec, kind: str) -> list[np.ndarray]:
    make = compact_symbol if kind == "compact" else spectral_symbol
    out = []
    for axis, m in enumerate(grid.shape):
        shape = [1, 1, 1]
        shape[axis] = m
        out.append(make(m, grid.dx).reshape(shape))
    return out


def _fft(a: np.ndarray) -> np.ndarray:
    return np.fft.fftn(a, axes=(-3, -2, -1))


def _ifft(a: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(a, axes=(-3, -2, -1))


def _rhs_hat(psi_h, chi_h, D, c: float, curl_sign: int):
    dx, dy, dz = D
    curl = np.stack([
        dy * psi_h[2] - dz * psi_h[1],
        dz * psi_h[0] - dx * psi_h[2],
        dx * psi_h[1] - dy * psi_h[0],
    ])
    grad = np.stack([dx * chi_h, dy * chi_h, dz * chi_h])
    div = dx * psi_h[0] + dy * psi_h[1] + dz * psi_h[2]
    return c * (1j * curl_sign * curl - grad), -c * div


def _check_state(state: FieldState, grid: GridSpec) -> None:
    if state.psi.shape != (3, *grid.shape) or state.chi.shape != grid.shape:
        raise ValueError("field arrays do not match the grid")


def step(state: FieldState, grid: GridSpec, curl_sign: int = 1) -> FieldState:
    """Advance by one RK4 step of length ``grid.dt``."""
    grid.check_stable()
    _check_state(state, grid)
    if curl_sign not in (1, -1):
        raise ValueError("curl_sign must be +1 or -1")
    D = _symbols(grid, "compact")
    h, c = grid.dt, grid.c
    p0, x0 = _fft(state.psi), _fft(state.chi)
    k1p, k1x = _rhs_hat(p0, x0, D, c, curl_sign)
    k2p, k2x = _rhs_hat(p0 + h / 2 * k1p, x0 + h / 2 * k1x, D, c, curl_sign)
    k3p, k3x = _rhs_hat(p0 + h / 2 * k2p, x0 + h / 2 * k2x, D, c, curl_sign)
    k4p, k4x = _rhs_hat(p0 + h * k3p, x0 + h * k3x, D, c, curl_sign)
    p1 = p0 + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
    x1 = x0 + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
    return FieldState(_ifft(p1), _ifft(x1), state.t + h)


# -- initial data -------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class TransversePlaneWave:
    k_index: tuple = (0, 0, 1)
    helicity: int = 1
    amplitude: complex = 1.0


@dataclass(frozen=True)
class LongitudinalScalarWave:
    k_index: tuple = (0, 0, 1)
    amplitude: complex = 1.0


@dataclass(frozen=True)
class GaussianPulse:
    """Gaussian envelope times a fixed polarization; chi starts at zero.

    ``center`` defaults to the box centre. Without ``polarization`` a unit
    vector is drawn from ``seed``.
    """

    width: float = 0.1
    center: tuple | None = None
    polarization: tuple | None = None
    amplitude: complex = 1.0
    seed: int = 0


def lattice_wavevector(grid: GridSpec, k_index) -> np.ndarray:
    k_index = np.asarray(k_index, dtype=float)
    if k_index.shape != (3,):
        raise ValueError("k_index must have three entries")
    if np.any(np.abs(k_index - np.round(k_index)) > 1e-9):
        raise IncommensurateError(f"k_index {tuple(k_index)} is not integral")
    k_index = np.round(k_index)
    if not k_index.any():
        raise ValueError("plane waves need a non-zero wave vector")
    if grid.dim == 1 and (k_index[0] or k_index[1]):
        raise IncommensurateError("1-d grids only carry wave vectors along z")
    if np.any(np.abs(k_index) >= grid.n / 2):
        raise IncommensurateError("k_index must lie below the Nyquist index")
    return 2 * np.pi * k_index / grid.L


def lattice_wavevector_from_k(grid: GridSpec, k) -> np.ndarray:
    """Validate a physical wave vector ``k`` against the box and return it."""
    idx = np.asarray(k, dtype=float) * grid.L / (2 * np.pi)
    return lattice_wavevector(grid, idx)


def transverse_polarization(k: np.ndarray, helicity: int) -> np.ndarray:
    """``e1 + i h e2`` with ``(e1, e2, k_hat)`` right-handed: eigenvector of S.k_hat
    with eigenvalue ``h``. Equals ``(1, i h, 0)`` for ``k`` along z."""
    if helicity not in (1, -1):
        raise ValueError("helicity must be +1 or -1")
    n = k / np.linalg.norm(k)
    trial = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = trial - (trial @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1 + 1j * helicity * e2


def init(grid: GridSpec, mode=Zero()) -> FieldState:
    shape = grid.shape
    if isinstance(mode, Zero):
        return FieldState(np.zeros((3, *shape), complex), np.zeros(shape, complex))
    X = grid.coordinates()
    if isinstance(mode, (TransversePlaneWave, LongitudinalScalarWave)):
        k = lattice_wavevector(grid, mode.k_index)
        phase = mode.amplitude * np.exp(1j * (k[0] * X[0] + k[1] * X[1] + k[2] * X[2]))
        if isinstance(mode, TransversePlaneWave):
            pol = transverse_polarization(k, mode.helicity)
            return FieldState(pol[:, None, None, None] * phase, np.zeros(shape, complex))
        khat = k / np.linalg.norm(k)
        return FieldState(khat[:, None, None, None] * phase, phase.astype(complex))
    if isinstance(mode, GaussianPulse):
        if not mode.width > 0:
            raise ValueError("pulse width must be positive")
        center = np.full(3, grid.L / 2) if mode.center is None else np.asarray(mode.center, float)
        r2 = np.zeros(shape)
        for axis in range(3):
            if shape[axis] == 1:
                continue
            d = X[axis] - center[axis]
            d -= grid.L * np.round(d / grid.L)
            r2 = r2 + d * d
        env = mode.amplitude * np.exp(-r2 / (2 * mode.width**2))
        if mode.polarization is None:
            v = np.random.default_rng(mode.seed).normal(size=3)
            pol = v / np.linalg.norm(v)
        else:
            pol = np.asarray(mode.polarization, dtype=complex)
        return FieldState(pol[:, None, None, None] * env, np.zeros(shape, complex))
    raise TypeError(f"unknown mode {mode!r}")


# -- diagnostics ---------------------------------------------------------------

def _divergence(psi_h, D) -> np.ndarray:
    return D[0] * psi_h[0] + D[1] * psi_h[1] + D[2] * psi_h[2]


def norm(state: FieldState, grid: GridSpec) -> float:
    dens = np.sum(np.abs(state.psi) ** 2, axis=0) + np.abs(state.chi) ** 2
    return float(np.sum(dens.ravel()) * grid.cell_volume)


def diagnostics(state: FieldState, prev: FieldState | None, grid: GridSpec) -> Diagnostics:
    """Norm, max|chi|, max|div psi| and the residuals of the two divergence equations.

    ``max_div_psi`` uses the scheme's own (compact) divergence. The
    constraint residuals are evaluated on the trigonometric interpolant of
    the grid data, so they measure the discretisation error instead of
    vanishing by construction. The time derivative of chi over
    ``[prev.t, state.t]`` is matched against the 4th-order Hermite average
    of ``div psi``, whose end-point slopes are ``-c lap chi``. Without
    ``prev`` the residuals are NaN.
    """
    _check_state(state, grid)
    psi_h = _fft(state.psi)
    max_div = float(np.max(np.abs(_ifft(_divergence(psi_h, _symbols(grid, "compact"))))))
    res_E = res_B = math.nan
    if prev is not None:
        _check_state(prev, grid)
        h = state.t - prev.t
        if not h > 0:
            raise ValueError("prev must be strictly earlier than state")
        S = _symbols(grid, "spectral")
        lap = sum(d * d for d in S)
        c = grid.c
        f_b = _divergence(psi_h, S)
        f_a = _divergence(_fft(prev.psi), S)
        df_b = -c * lap * _fft(state.chi)
        df_a = -c * lap * _fft(prev.chi)
        avg = 0.5 * (f_a + f_b) + h / 12 * (df_a - df_b)
        r = _ifft(avg) + (state.chi - prev.chi) / (c * h)
        res_E = float(np.max(np.abs(r.real)))
        res_B = float(np.max(np.abs(r.imag)))
    return Diagnostics(float(state.t), norm(state, grid), float(np.max(np.abs(state.chi))),
                       max_div, res_E, res_B)


def conjugate_map(state: FieldState) -> FieldState:
    """``(psi, chi) -> (psi*, chi*)``: a solution of the primed system (``curl_sign=-1``)."""
    return FieldState(state.psi.conj(), state.chi.conj(), state.t)


# -- driver --------------------------------------------------------------------

@dataclass
class RunResult:
    diagnostics: list[Diagnostics] = field(default_factory=list)
    snapshots: list[FieldState] = field(default_factory=list)
    final: FieldState | None = None


def run(grid: GridSpec, mode=Zero(), steps: int = 1, cadence: int = 1,
        snapshots: bool = False, curl_sign: int = 1, state: FieldState | None = None) -> RunResult:
    """Evolve for ``steps`` steps, recording diagnostics every ``cadence`` steps.

    A row is written for the initial state (residuals NaN), for every
    multiple of ``cadence`` and for the final step.
    """
    if steps < 1 or cadence < 1:
        raise ValueError("steps and cadence must be >= 1")
    cur = init(grid, mode) if state is None else state
    out = RunResult()
    out.diagnostics.append(diagnostics(cur, None, grid))
    if snapshots:
        out.snapshots.append(cur.copy())
    for i in range(1, steps + 1):
        prev, cur = cur, step(cur, grid, curl_sign)
        if i % cadence == 0 or i == steps:
            out.diagnostics.append(diagnostics(cur, prev, grid))
            if snapshots:
                out.snapshots.append(cur.copy())
    out.final = cur
    return out


def mode_amplitude(state: FieldState, grid: GridSpec, k_index, vector) -> complex:
    """Projection of ``(psi, chi)`` onto ``vector * exp(i k.x)``; ``vector`` has 4 entries."""
    k = lattice_wavevector(grid, k_index)
    X = grid.coordinates()
    wave = np.exp(-1j * (k[0] * X[0] + k[1] * X[1] + k[2] * X[2]))
    v = np.asarray(vector, dtype=complex)
    fields = np.concatenate([state.psi, state.chi[None]])
    proj = np.tensordot(v.conj(), fields, axes=1) * wave
    return complex(np.sum(proj.ravel()) / (proj.size * np.vdot(v, v).real))


def extract_frequency(times, amplitudes) -> float:
    """Angular frequency ``w`` of ``a(t) ~ exp(-i w t)`` by a linear phase fit."""
    times = np.asarray(times, dtype=float)
    phase = np.unwrap(np.angle(np.asarray(amplitudes, dtype=complex)))
    return float(-np.polyfit(times, phase, 1)[0])


def discrete_frequency(grid: GridSpec, k_index) -> float:
    """``c |k_eff|`` for the compact scheme's modified wave number."""
    idx = np.asarray(k_index, dtype=float)
    keff = []
    for i, m in zip(idx, grid.shape):
        th = 2 * np.pi * i / m if m > 1 else 0.0
        keff.append(3 * math.sin(th) / (grid.dx * (2 + math.cos(th))))
    return grid.c * float(np.linalg.norm(keff))


# -- I/O -----------------------------------------------------------------------

def _fmt(v) -> str:
    return repr(float(v))


def diagnostics_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DIAG_COLUMNS)
    for d in rows:
        w.writerow([_fmt(v) for v in d.row()])
    return buf.getvalue()


def snapshot_csv(state: FieldState, grid: GridSpec) -> str:
    """One snapshot record; points in C order of ``grid.shape``."""
    buf = io.StringIO()
    buf.write(f"# genmaxwell-snapshot v{SNAPSHOT_VERSION} t={_fmt(state.t)} n={grid.n} "
              f"L={_fmt(grid.L)} dim={grid.dim}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SNAPSHOT_COLUMNS)
    for index, (ix, iy, iz) in enumerate(np.ndindex(*grid.shape)):
        vals = [*state.psi[:, ix, iy, iz], state.chi[ix, iy, iz]]
        row = [index, ix, iy, iz]
        for v in vals:
            row += [_fmt(v.real), _fmt(v.imag)]
        w.writerow(row)
    return buf.getvalue()


def read_snapshots(text: str, grid: GridSpec) -> list[FieldState]:
    states = []
    blocks = [b for b in text.split("# genmaxwell-snapshot ") if b.strip()]
    for block in blocks:
        lines = block.splitlines()
        meta = dict(item.split("=", 1) for item in lines[0].split()[1:])
        if not lines[0].startswith(f"v{SNAPSHOT_VERSION}"):
            raise ValueError(f"unsupported snapshot version {lines[0].split()[0]}")
        data = np.loadtxt(io.StringIO("\n".join(lines[2:])), delimiter=",", ndmin=2)
        vals = data[:, 4::2] + 1j * data[:, 5::2]
        psi = vals[:, :3].T.reshape(3, *grid.shape)
        chi = vals[:, 3].reshape(grid.shape)
        states.append(FieldState(psi, chi, float(meta["t"])))
    return states


CONFIG_KEYS = {
    "n", "L", "dt", "cfl", "dim", "steps", "cadence", "mode", "k_index", "helicity",
    "c", "seed", "width", "diagnostics_out", "snapshot_out",
}


def parse_config(text: str) -> dict:
    """Flat ``key = value`` run configuration; ``#`` starts a comment."""
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def mode_from_params(name: str, k_index=(0, 0, 1), helicity: int = 1,
                     width: float = 0.1, seed: int = 0):
    if name == "zero":
        return Zero()
    if name == "transverse":
        return TransversePlaneWave(tuple(k_index), helicity)
    if name == "longitudinal":
        return LongitudinalScalarWave(tuple(k_index))
    if name == "gaussian":
        return GaussianPulse(width=width, seed=seed)
    raise ValueError(f"unknown mode {name!r}")


