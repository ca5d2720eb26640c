import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genmaxwell.polarization import (
    CSV_COLUMNS,
    Helicity,
    field_strength,
    lorentz_condition,
    limit_scan,
    massless_limit_equation_check,
    on_shell_energy,
    polarization_vector,
    proca_residual,
    proca_residual_vector,
    renormalization_map_residual,
    to_csv,
    weinberg_residual,
)

G = (1.0, -1.0, -1.0, -1.0)
TRANSVERSE = ("+1", "-1", "0")


def loop_proca(variant, p4, A, m):
    """Index-by-index plane-wave Proca residual (d -> -i p)."""
    scale = 2 * m if variant == "modified" else 1.0
    mass = m / 2 if variant == "modified" else m * m
    F = [[-1j * (p4[a] * A[b] - p4[b] * A[a]) / scale for b in range(4)] for a in range(4)]
    res = []
    for mu in range(4):
        div = sum(-1j * G[a] * p4[a] * F[a][mu] for a in range(4))
        res.append(div + mass * A[mu])
    return np.array(F), np.array(res)


def loop_weinberg(p4, F, m):
    out = 0.0
    low = [G[a] * p4[a] for a in range(4)]
    for mu in range(4):
        for nu in range(4):
            t1 = -low[mu] * sum(p4[a] * G[a] * F[a][nu] for a in range(4))
            t2 = -p4[nu] * sum(p4[a] * G[a] * F[a][mu] * G[mu] for a in range(4))
            out = max(out, abs(t1 - t2 + m * m * G[mu] * F[mu][nu]))
    return out


def test_rest_frame_time_like():
    np.testing.assert_allclose(polarization_vector([0, 0, 0], 1, 1, "0t").u, [1, 0, 0, 0])


def test_rest_frame_plus():
    np.testing.assert_allclose(polarization_vector([0, 0, 0], 1, 1, "+1").u,
                               -np.array([0, 1, 1j, 0]) / math.sqrt(2), atol=1e-15)


def test_longitudinal_along_z():
    np.testing.assert_allclose(polarization_vector([0, 0, 1], 1, 1, "0").u,
                               [1, 0, 0, math.sqrt(2)], atol=1e-15)


def test_minus_uses_its_own_formula():
    p, m = np.array([0.4, -1.1, 0.7]), 0.9
    E = on_shell_energy(p, m)
    pl = complex(p[0], -p[1])
    expected = 1 / (math.sqrt(2) * m) * np.array(
        [pl, m + p[0] * pl / (E + m), -1j * m + p[1] * pl / (E + m), p[2] * pl / (E + m)])
    np.testing.assert_allclose(polarization_vector(p, m, 1, "-1").u, expected, rtol=1e-15)


def test_mass_must_be_positive():
    with pytest.raises(ValueError):
        polarization_vector([0, 0, 1], 0.0)


def test_helicity_labels():
    assert Helicity.parse("0_t") is Helicity.TIME
    assert Helicity.parse("+1") is not Helicity.parse("0")
    with pytest.raises(ValueError):
        Helicity.parse("2")


def test_lorentz_time_like_example():
    assert lorentz_condition(polarization_vector([0, 0, 1], 1, 1, "0t")) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(
    p=st.tuples(*[st.floats(-10, 10)] * 3),
    m=st.floats(0.01, 10),
    N=st.floats(0.1, 3),
)
def test_lorentz_condition_holds(p, m, N):
    for s in TRANSVERSE:
        pv = polarization_vector(p, m, N, s)
        scale = np.max(np.abs(pv.u)) * np.max(np.abs(pv.momentum4))
        assert abs(lorentz_condition(pv)) < 1e-12 * max(1.0, scale)
    assert lorentz_condition(polarization_vector(p, m, N, "0t")) == pytest.approx(N * m, rel=1e-9)


def test_limit_scan_time_like_energy_component():
    slopes = limit_scan([0, 0, 1], "0t", 1.0, [1, 0.1, 0.01, 0.001])
    assert slopes[0] == pytest.approx(-1, abs=0.05)
    assert slopes[3] == pytest.approx(-1, abs=1e-12)
    assert slopes[1] is None and slopes[2] is None


def test_limit_scan_plus_along_x():
    slopes = limit_scan([1, 0, 0], "+1", 1.0, [1, 0.1, 0.01, 0.001])
    # u^2 = -i/sqrt(2) is mass independent when p_2 = 0; the rest diverge
    assert slopes[0] == pytest.approx(-1, abs=0.05)
    assert slopes[1] == pytest.approx(-1, abs=0.05)
    assert slopes[2] == pytest.approx(0, abs=1e-12)
    assert slopes[3] is None


def test_limit_scan_plus_along_z():
    slopes = limit_scan([0, 0, 1], "+1")
    assert slopes[0] is None and slopes[3] is None


def test_limit_scan_validates_masses():
    with pytest.raises(ValueError):
        limit_scan([1, 1, 1], "+1", masses=[1, 0.1, 0.01])
    with pytest.raises(ValueError):
        limit_scan([1, 1, 1], "+1", masses=[1, 0.1, 0.2, 0.01])


@pytest.mark.parametrize("variant", ["standard", "modified"])
@pytest.mark.parametrize("sigma", TRANSVERSE)
def test_proca_on_shell(variant, sigma):
    p, m = np.array([0.3, -0.8, 1.4]), 0.6
    pv = polarization_vector(p, m, 1.0, sigma)
    F, r = proca_residual(variant, p, pv.energy, pv.u, m)
    F_ref, r_ref = loop_proca(variant, pv.momentum4, pv.u, m)
    np.testing.assert_allclose(F, F_ref, atol=1e-14)
    assert r < 1e-10 and np.max(np.abs(r_ref)) < 1e-10


@pytest.mark.parametrize("variant", ["standard", "modified"])
def test_proca_pure_gauge(variant):
    p, E, m = np.array([0.2, 0.5, -1.0]), 0.9, 1.5
    A = np.array([E, *p], dtype=complex)
    F, r = proca_residual(variant, p, E, A, m)
    np.testing.assert_array_equal(F, np.zeros((4, 4)))
    mass = m / 2 if variant == "modified" else m * m
    assert r == pytest.approx(mass * np.max(np.abs(A)))


def test_proca_matches_loop_oracle_off_shell():
    rng = np.random.default_rng(0)
    for _ in range(20):
        p, E, m = rng.normal(size=3), rng.normal(), rng.uniform(0.1, 3)
        A = rng.normal(size=4) + 1j * rng.normal(size=4)
        for variant in ("standard", "modified"):
            _, r = proca_residual_vector(variant, p, E, A, m)
            _, r_ref = loop_proca(variant, np.array([E, *p]), A, m)
            np.testing.assert_allclose(r, r_ref, atol=1e-13)


def test_renormalization_map():
    rng = np.random.default_rng(1)
    for m in (0.1, 1.0, 10.0):
        for _ in range(30):
            p, E = rng.normal(size=3), rng.normal()
            A = rng.normal(size=4) + 1j * rng.normal(size=4)
            assert renormalization_map_residual(p, E, A, m) < 1e-12
            # equivalently: modified residual at A is the standard one scaled by 1/(2m)
            _, r_mod = proca_residual_vector("modified", p, E, A, m)
            _, r_std = proca_residual_vector("standard", p, E, A, m)
            np.testing.assert_allclose(r_mod, r_std / (2 * m), rtol=1e-12, atol=1e-300)


def test_proca_rejects_bad_input():
    with pytest.raises(ValueError):
        proca_residual("standard", [0, 0, 1], 1, np.ones(4), 0.0)
    with pytest.raises(ValueError):
        proca_residual("other", [0, 0, 1], 1, np.ones(4), 1.0)


@pytest.mark.parametrize("sigma", TRANSVERSE)
def test_weinberg_on_and_off_shell(sigma):
    p, m = np.array([0.5, 0.1, -0.9]), 0.8
    pv = polarization_vector(p, m, 1.0, sigma)
    F, _ = proca_residual("modified", p, pv.energy, pv.u, m)
    assert weinberg_residual(p, pv.energy, F, m) < 1e-10
    assert loop_weinberg(pv.momentum4, F, m) < 1e-10
    off = weinberg_residual(p, pv.energy + 0.5, F, m)
    assert off > 1e-3
    assert off == pytest.approx(loop_weinberg(np.array([pv.energy + 0.5, *p]), F, m), rel=1e-12)


def test_weinberg_zero_field():
    assert weinberg_residual([1, 2, 3], 1.0, np.zeros((4, 4)), 1.0) == 0


def test_weinberg_rejects_symmetric():
    with pytest.raises(ValueError):
        weinberg_residual([1, 2, 3], 1.0, np.ones((4, 4)), 1.0)


def test_massless_limit_equation():
    z = np.array([0.0, 0.0, 1.0])
    assert massless_limit_equation_check(z, 0.0) == 0
    # a transverse on-shell massless F cannot carry the chi source
    A = np.array([0, 1, 1j, 0])
    F = field_strength(np.array([1.0, *z]), A)
    assert massless_limit_equation_check(z, 1.0, F) == pytest.approx(1.0)
    assert massless_limit_equation_check(z, 1.0) < 1e-10
    assert massless_limit_equation_check(np.array([0.3, -0.2, 0.7]), 0.4 - 1.1j) < 1e-10
    with pytest.raises(ValueError):
        massless_limit_equation_check(np.zeros(3), 1.0)


def test_csv_table():
    vs = [polarization_vector([0, 0, 1], 1, 1, s) for s in ("+1", "0t")]
    rows = list(csv.reader(io.StringIO(to_csv(vs))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[2][0] == "0t" and float(rows[2][-1]) == pytest.approx(1.0)
    assert float(rows[1][-1]) < 1e-15
