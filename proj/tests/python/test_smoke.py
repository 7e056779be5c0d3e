import math
from pathlib import Path

import numpy as np
import pytest

import lathom

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_version_string():
    assert lathom.__version__.count(".") == 2


def test_constant_lambda_rve_collapses_to_identity():
    net = lathom.voronoi_rve(n_dim=2, size=0.15, l_min=0.01, seed=3)
    assert net.periodic and net.n_dim == 2
    assert net.positions.shape == (net.node_count, 2)
    assert net.connectivity.shape == (net.element_count, 2)
    lathom.set_lambda0(net, 2.0)
    np.testing.assert_allclose(lathom.effective_tensor(net), 2.0 * np.eye(2), atol=1e-12)
    sol = lathom.solve_rve(net, np.array([1.0, -0.5]))
    assert np.max(np.abs(sol["p1"])) < 1e-12
    np.testing.assert_allclose(sol["f"], [-2.0, 1.0], atol=1e-12)
    inv = net.invariants()
    assert inv["closure"] < 1e-9 and inv["fabric"] < 1e-9


def test_random_lambda_tensor_is_symmetric_and_bounded():
    net = lathom.voronoi_rve(seed=5)
    lathom.randomize_lambda0(net, 1.0, 0.2, 9)
    t = lathom.effective_tensor(net)
    assert t[0, 1] == pytest.approx(t[1, 0])
    assert 1.0 / 1.04 - 0.05 < t[0, 0] < 1.05


def test_toml_and_config_errors():
    assert lathom.parse_toml("a = [1, 2]\n[b]\nc = 'x'\n") == {"a": [1, 2], "b": {"c": "x"}}
    with pytest.raises(lathom.ConfigError):
        lathom.parse_config("[geometry]\nnot_a_key = 1\n")


def test_linear_prism_macro_matches_full():
    cfg = lathom.load_config(str(CONFIGS / "prism_linear.toml"))
    assert len(cfg.hash) == 16
    cfg.cov = 0.0
    macro = lathom.run_macro(cfg)
    full = lathom.run_full(cfg)
    right = macro["flux_columns"].index("right")
    analytic = 5.618e-12 * 1e6 * 0.3 / 1.2 * 1000 * 86400
    assert macro["fluxes"][-1][right] == pytest.approx(analytic, rel=1e-10)
    assert full["fluxes"][-1][right] == pytest.approx(analytic, rel=5e-3)
    assert len(macro["profiles"][0]["arc"]) == 49


def test_write_results(tmp_path):
    cfg = lathom.load_config(str(CONFIGS / "prism_linear.toml"))
    lathom.write_results(cfg, "macro", str(tmp_path))
    text = (tmp_path / "flux_history.csv").read_text()
    assert text.startswith("# lathom ")
    assert f"config_hash={cfg.hash}" in text


def test_verify_linear_suite():
    report = lathom.verify("linear", str(CONFIGS))
    assert report["passed"], report
    assert all(math.isfinite(c["measured"]) for c in report["checks"])
