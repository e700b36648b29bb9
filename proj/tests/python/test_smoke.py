"""End-to-end smoke tests for the python bindings."""

import json

import pytest

import dk1d


def test_map_and_structure():
    m = dk1d.MapModel.quadratic(4.0)
    assert m.eval(0.5) == pytest.approx(1.0)
    assert m.deriv(0.25) == pytest.approx(2.0)
    cs = dk1d.build_critical_structure(m, [0.1], 100)
    assert cs.cp == [0.5]
    assert cs.postcritical == [0.0, 1.0]
    assert [u.lo for u in cs.U] == [pytest.approx(0.4)]


def test_coordinate_and_lemma1():
    m = dk1d.MapModel.quadratic(4.0)
    cs = dk1d.build_critical_structure(m, [0.1], 100)
    cc = dk1d.build_coordinate_change(cs)
    assert cc.charts()[0].radius == pytest.approx(0.25)
    rep = dk1d.lemma1_check(m, cc, 0.5, 1e-2, 10)
    assert rep.left_limit == pytest.approx(4.0, abs=1e-4)
    assert rep.right_limit == pytest.approx(-4.0, abs=1e-4)


def test_exponent_and_asymmetry():
    m = dk1d.MapModel.normal_form(0.5, 2.0, 2.0, 2.0, 0.5, 1,
                                  dk1d.Interval(0.25, 0.75))
    fit = dk1d.estimate_exponent(m, 0.5, dk1d.Side.RIGHT)
    assert fit.gamma == pytest.approx(2.0, abs=1e-6)
    asym = dk1d.estimate_asymmetry(m, 0.5)
    assert asym.sigma == pytest.approx(2.0, abs=1e-6)


def test_distortion_bound_holds():
    m = dk1d.MapModel.quadratic(4.0)
    cs = dk1d.build_critical_structure(m, [0.1], 100)
    cc = dk1d.build_coordinate_change(cs)
    consts = dk1d.estimate_constants(m, cs, cc, 1.0, samples=2000, seed=5)
    seq = dk1d.build_suitable_sequence(m, cs, dk1d.Interval(0.62, 0.68),
                                       [1, 0, 1])
    rep = dk1d.distortion_along(m, seq, 0.63, 0.67)
    d = min(cs.distance_to_postcritical(0.63), cs.distance_to_postcritical(0.67))
    dk1d.apply_bound(rep, consts, d)
    assert rep.log_margin >= 0.0


def test_errors_surface_as_exceptions():
    m = dk1d.MapModel.quadratic(4.0)
    with pytest.raises(dk1d.DkError):
        m.eval(1.5)
    with pytest.raises(dk1d.DkError):
        dk1d.MapModel.quadratic(5.0)


CONFIG = {
    "map": {"family": "quadratic", "params": {"a": 4.0}, "domain": [0.0, 1.0]},
    "structure": {"radii": [0.1]},
    "verify": {"n_max": 6, "pairs_per_sequence": 10, "seed": 3},
    "sequences": {"seeds": [[0.62, 0.68]]},
}


def test_run_experiment_json_passes_and_is_deterministic():
    text = json.dumps(CONFIG)
    a = dk1d.run_experiment_json(text, 1)
    b = dk1d.run_experiment_json(text, 2)
    assert a == b
    report = json.loads(a)
    assert report["verdict"] == "pass"
    assert report["violations"] == []
    assert report["constants"]["tau"] == pytest.approx(0.5)


def test_enumerate_and_constants_json():
    text = json.dumps(CONFIG)
    enum = json.loads(dk1d.enumerate_json(text))
    assert enum["sequence_count"] > 0
    consts = json.loads(dk1d.constants_json(text))
    assert consts["constants"]["K1"] == pytest.approx(8.0, abs=1e-6)
    assert dk1d.config_hash(text) == enum["provenance"]["config_hash"]
