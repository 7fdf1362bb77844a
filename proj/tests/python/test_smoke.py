"""Smoke tests for the python bindings: exercise one call per module."""

import math

import numpy as np
import pytest

import osatcom


def test_version():
    assert osatcom.__version__


def test_channel_sampling():
    spec = osatcom.FadingSpec.nakagami(0.8, 1.0)
    rng = osatcom.Rng(1)
    r = osatcom.sample_nakagami_amplitude(spec, rng)
    assert r > 0.0
    h = osatcom.sample_channel_matrix(spec, 2, rng)
    assert h.shape == (2, 2)
    d = osatcom.build_d_matrix(1.0, 1.0, 2)
    assert np.allclose(d.d, [[4.0, 2.0], [2.0, 4.0]])
    assert osatcom.apply_rain_attenuation(10.0, 10.0) == 1.0


def test_worst_case_bound():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q = a @ a.conj().T
    h2 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    ball = osatcom.UncertaintyBall(0.2, 2)
    bound = osatcom.worst_case_interference(q, h2, ball)
    realized = osatcom.realized_interference(np.linalg.cholesky(q), h2)
    assert bound.value >= realized
    assert osatcom.kron_lift_norm(np.eye(2)) == pytest.approx(2.0)


def test_beam_solver():
    p = osatcom.CellProblem()
    p.dim = 2
    p.d = 2.0 * np.eye(2)
    p.p_th = 1.0
    p.a_r_db = 0.0
    sol = osatcom.solve_cell(p)
    assert sol.capacity == pytest.approx(math.log2(3.0), rel=1e-8)
    assert sol.converged
    assert osatcom.capacity(0.5 * np.eye(2), np.eye(2), 0.0) == pytest.approx(1.0)


def test_pulse():
    cfg = osatcom.PulseConfig()
    cfg.amplitude_a_m = 10.0
    cfg.papr_th_db = 10.0 * math.log10(2.0)
    sol = osatcom.solve_pulse(cfg)
    assert sol.t1 == pytest.approx(0.5)
    assert sol.binding == osatcom.BindingConstraint.PAPR

    spec = osatcom.DispersionSpec()
    spec.coefficients_ps_per_km = [3.0, 4.0]
    spec.length_km = 2.0
    assert osatcom.total_dispersion(spec) == pytest.approx(10.0)


def test_spreading():
    code = osatcom.walsh_code(8, 3)
    chips = osatcom.spread([1.0, -1.0], code)
    assert osatcom.despread(chips, code) == pytest.approx([1.0, -1.0])
    assert osatcom.network_error_probability([0.1, 0.1]) == pytest.approx(0.19)


def test_errors_are_raised():
    with pytest.raises(ValueError):
        osatcom.papr_db(1.0, -1.0)
