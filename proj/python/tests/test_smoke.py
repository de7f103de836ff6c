import json
import math

import numpy as np
import pytest

import bubblegap as bg


def fig2_config():
    c = bg.CrystalConfig()
    c.R = 0.05
    c.epsilon = -0.2 * c.R
    return c


def test_specfun_wronskian():
    x = 0.7
    w = bg.specfun.bessel_j(2, x) * bg.specfun.bessel_y_prime(2, x) - bg.specfun.bessel_j_prime(
        2, x
    ) * bg.specfun.bessel_y(2, x)
    assert w == pytest.approx(2 / (math.pi * x), rel=1e-12)
    assert bg.specfun.eta(1.0).imag == -0.25


def test_greens_quasi_periodicity():
    a = bg.BlochVector(1.3, 2.1)
    g = bg.LatticeGreensEvaluator(0.05, a)
    v = g.gamma_quasi([0.1, 0.2])
    shifted = g.gamma_quasi([1.1, 0.2])
    assert abs(shifted - complex(math.cos(1.3), math.sin(1.3)) * v) < 1e-10


def test_grad_alpha_zero_at_corner():
    g = bg.grad_alpha_gamma0(bg.BlochVector(math.pi, math.pi))
    assert abs(g[0]) < 1e-9 and abs(g[1]) < 1e-9


def test_muller():
    root = bg.muller_find_root(lambda z: z * z + 1, 0.5j, 0.9j, 1.2j)
    assert abs(root - 1j) < 1e-12


def test_band_and_asymptotic():
    c = fig2_config()
    a = bg.BlochVector(math.pi, math.pi)
    w = bg.band_omega1(a, c)
    assert w == pytest.approx(bg.omega1_asymptotic(a, c), rel=0.05)
    assert bg.band_omega1(bg.BlochVector(0, 0), c) == 0.0


def test_matrices():
    c = fig2_config()
    A = bg.assemble_A_alpha(0.3, c, bg.BlochVector(math.pi, math.pi))
    assert A.shape == (22, 22)
    edge = bg.band_edge_omega_star(math.pi, c)
    M = bg.assemble_M(1.3 * edge, c, math.pi)
    n = 11
    assert (M[:n, :n] == np.eye(n)).all()
    assert (M[n:, :n] == 0).all()


def test_defect_and_dilute_agree():
    c = fig2_config()
    w = bg.defect_omega(math.pi, c)
    d = bg.dilute_defect_omega(math.pi, c)
    assert w is not None
    assert w == pytest.approx(d, rel=0.05)


def test_errors_map_to_python():
    c = fig2_config()
    c.epsilon = 0.0
    with pytest.raises(bg.NotFound):
        bg.dilute_defect_omega(math.pi, c)
    with pytest.raises(bg.SingularityError):
        bg.LatticeGreensEvaluator(0.0, bg.BlochVector(0, 0))
    c.rho_b = 0.0
    with pytest.raises(bg.ConfigError):
        c.validate()


def test_run_command_validate():
    cfg = {"rho_b": 1, "kappa_b": 1, "rho_w": 5000, "kappa_w": 5000, "R": 0.05}
    out = bg.run_command("validate", json.dumps(cfg))
    assert out["exit_code"] == 0
    assert len(out["rows"]) >= 6
    with pytest.raises(bg.ConfigError):
        bg.run_command("band", json.dumps({**cfg, "colour": 1}))
