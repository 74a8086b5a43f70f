import math

import numpy as np
import pytest

import rsdeig


def test_fd_reference_value():
    s = rsdeig.Session("laplace-fd:h=2^-2")
    ref = s.reference()
    assert abs(ref["lambda1"] - 128 * math.sin(math.pi / 8) ** 2) <= 1e-10
    assert s.dim == 9


def test_solve_converges_with_ddm():
    s = rsdeig.Session("laplace-fd:h=2^-4", "ddm:H=2^-2,overlap=0.5")
    out = s.solve(tol=1e-8, seed=1)
    assert out["converged"]
    lam1 = s.reference()["lambda1"]
    assert abs(out["lambda"] - lam1) <= 1e-8 * lam1
    assert len(out["trace"]["lambda"]) == out["iterations"] + 1
    again = s.solve(tol=1e-8, seed=1)
    assert np.array_equal(out["u"], again["u"])


def test_exact_preconditioner_phi():
    s = rsdeig.Session("laplace-fd:h=2^-3", "exact")
    q = s.phi()
    assert q["chi"] is None
    assert q["kappa_nu"] == pytest.approx(1.0)
    assert q["cos2_phi"] <= 1e-20


def test_operators_roundtrip():
    s = rsdeig.Session("laplace-fd:h=2^-3", "exact")
    v = np.linspace(-1.0, 1.0, s.dim)
    assert np.allclose(s.apply_inv(s.apply_a(v)), v, rtol=0, atol=1e-12)


def test_mixed_precision_kernel():
    s = rsdeig.Session("kernel-laplace:n=128,seed=7", "mp-chol")
    q = s.phi()
    assert q["cos_phi"] <= 0.05
    if q["epsilon_l_applicable"]:
        assert q["cos_phi"] <= math.sqrt(2 * q["epsilon_l"])
    p = s.success_probability("gaussian", 20, 1)
    assert p["classic_successes"] == 0
    assert p["new_successes"] >= 19


def test_validate_doubled_smoothness_is_clean():
    r = rsdeig.validate(8, "random", seed=3, samples=200, smoothness_factor=2.0)
    assert r["ok"]
    assert all(v == 0 for v in r["violations"].values())


def test_errors_are_translated():
    with pytest.raises(rsdeig.Error):
        rsdeig.Session("laplace-fd:h=0.3")
    s = rsdeig.Session("laplace-fd:h=2^-3")
    with pytest.raises(rsdeig.Error):
        s.solve(step="fixed:1e9")
    with pytest.raises(rsdeig.Error):
        rsdeig.table("nope")


def test_table_rows():
    header, rows, seconds = rsdeig.table("phi-ddm-fixedH", "h = 2^-4\n")
    assert "cos2_phi" in header
    assert len(rows) == len(seconds) == 1
    assert float(rows[0][header.index("cos2_phi")]) == pytest.approx(0.1961, abs=0.06)
