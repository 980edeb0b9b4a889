import json

import numpy as np
import pytest

import roqkit


def test_trapezoid_integrates_ones():
    r = roqkit.trapezoidal_rule(-1.0, 1.0, 17)
    one = np.ones(r.size, dtype=complex)
    assert abs(roqkit.inner_product(one, one, r.weights) - 2.0) < 1e-13


def test_legendre_pipeline_reproduces_parent_weights():
    r = roqkit.gauss_legendre_rule(30)
    fam = roqkit.analytic_family("legendre")
    s = roqkit.sample_family(fam, [[float(l)] for l in range(12)], r, True)
    b = roqkit.rb_greedy(s, 1e-10)
    assert b.size == 12
    assert b.greedy_errors[0] == 1.0
    G = b.V.conj().T @ np.diag(r.weights) @ b.V
    assert np.abs(G - np.eye(12)).max() < 1e-12
    op = roqkit.build_deim(b)
    q = roqkit.build_roq(b, op)
    assert q.size == 12
    assert roqkit.verify_basis_integration(q, b) < 1e-12
    # A polynomial of degree 5 is integrated exactly by the 12-point rule.
    x = np.asarray(r.x)[q.point_indices]
    assert abs(q.inner_product(np.ones(12, complex), x**4 + 0j) - 0.4) < 1e-12


def test_gw_products_small():
    p = roqkit.GwPreset()
    fam = roqkit.gw_family(p)
    r = roqkit.gauss_legendre_rule(300, p.fmin, p.fmax)
    params = [[m] for m in roqkit.log_training_set(p.mc_min_kg(), p.mc_max_kg(), 80)]
    first = roqkit.rb_greedy(roqkit.sample_family(fam, params, r), 1e-6)
    prod = roqkit.two_step_greedy(first, 1e-6)
    assert prod.greedy_errors[-1] < 1e-6
    op = roqkit.build_deim(prod)
    lc = roqkit.lebesgue_constants(op, prod)
    assert 1.0 - 1e-8 <= lc.lambda_2 <= lc.lambda_2_bound * (1 + 1e-10)
    q = roqkit.build_roq(prod, op)
    assert roqkit.truncate_roq(prod, op, 5).point_indices == q.point_indices[:5]


def test_fit_and_errors():
    k = np.arange(30)
    f = roqkit.fit_exponential_decay(list(4e-3 * np.exp(-0.9 * k**0.95)), 0)
    assert abs(f.alpha - 0.95) < 0.01
    with pytest.raises(ValueError):
        roqkit.default_config("nope")
    with pytest.raises(ValueError):
        roqkit.inner_product(np.ones(3, complex), np.ones(4, complex), [1.0, 1.0, 1.0])


def test_run_experiment(tmp_path):
    assert "gw_roq" in roqkit.experiments()
    out = roqkit.run_experiment("conditioning", str(tmp_path), {"K": 20})
    assert out["experiment"] == "conditioning"
    assert all(c["passed"] for c in out["criteria"] if c["hard"])
    report = json.loads((tmp_path / "report.json").read_text())
    assert len(report["criteria"]) == len(out["criteria"])
