import math

import pytest

import qam


def test_version():
    assert qam.__version__


def test_memory():
    out = qam.build_memory(["001", "010", "100", "111"])
    assert out["gate_count"] == 37
    assert qam.memory_gate_count(4, 3) == 37
    amps = dict(out["amplitudes"])
    assert set(amps) == {"001", "010", "100", "111"}
    for a in amps.values():
        assert abs(a - 0.5) < 1e-12
    seq = qam.store_sequential(["001", "010", "100", "111"])
    for a in dict(seq["amplitudes"]).values():
        assert abs(a - 0.5) < 1e-12


def test_distributions():
    d = qam.analytic_distribution(["000", "111"], "100", 1)
    assert d["p_rec"] == pytest.approx(0.5)
    sim = qam.simulated_distribution(["000", "111"], "100", 1)
    assert sim["spurious_probability"] < 1e-12
    assert dict(sim["probs"])["000"] == pytest.approx(0.75)


def test_retrieve_is_seeded():
    a = qam.retrieve(["000", "111"], "100", b=1, T=8, seed=4)
    b = qam.retrieve(["000", "111"], "100", b=1, T=8, seed=4)
    assert a == b
    assert a["output"] in (None, "000", "111")


def test_amplification():
    theta = math.asin(math.sqrt(0.5))
    r = qam.amplitude_amplify(["000", "111"], "000", 1, 2)
    assert r["success_probability"] == pytest.approx(math.sin(5 * theta) ** 2, abs=1e-9)


def test_thermo_and_meanfield():
    assert qam.effective_distance(1e-6, 0, 20000, method="continuum") == pytest.approx(2 / 3, abs=0.01)
    assert qam.tune(0.01, 0.992, 20000)["b"] >= 1
    assert max(qam.solve_single(math.pi / 4)) == pytest.approx(1.0, abs=1e-6)
    assert qam.classify_phase(0.01, 1.0)["phase"] == "F"


def test_classical():
    rows = qam.capacity_experiment(100, [0.05], trials=2, seed=1)
    assert rows[0]["p"] == 5
    assert 0 <= rows[0]["mean_overlap"] <= 1


def test_errors():
    with pytest.raises(ValueError):
        qam.build_memory(["01", "01"])
    with pytest.raises(ArithmeticError):
        qam.tune(0.01, 0.99999, 20000)
