import json
import math

from xyness import verify
from xyness.model import ChainParams

MODULES = {"model", "spectral", "scattering", "pfaffian", "correlation", "szego", "oracle"}


def test_suite_names_cover_every_module():
    names = list(verify.SUITES)
    assert len(names) == len(set(names))
    assert {n.split(".")[0] for n in names} == MODULES
    assert "correlation.path_equivalence" in names


def test_default_config_passes():
    results = verify.run_suites()
    failed = [(r.name, r.measured, r.detail) for r in results if not r.passed]
    assert not failed
    json.dumps([r.as_dict() for r in results])


def test_mode_a_is_caught():
    cfg = verify.VerifyConfig(hankel_mode="A")
    (res,) = verify.run_suites(cfg, ["correlation.path_equivalence"])
    assert not res.passed
    assert res.measured > 1e-4
    assert "mode A" in res.detail


def test_failures_do_not_abort(monkeypatch):
    def boom(cfg):
        raise RuntimeError("synthetic")

    monkeypatch.setitem(verify.SUITES, "model.evenness", boom)
    results = verify.run_suites(names=["model.evenness", "model.particle_hole_duality"])
    assert not results[0].passed and math.isinf(results[0].measured)
    assert "synthetic" in results[0].detail
    assert results[1].passed


def test_equal_temperature_ordering_suite():
    cfg = verify.VerifyConfig(params=ChainParams(1.0, 1.0, 0.3))
    (res,) = verify.run_suites(cfg, ["szego.rate_ordering"])
    assert res.passed
