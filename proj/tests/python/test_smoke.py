import pytest

import rbm


def test_sample_is_deterministic():
    a = rbm.sample(50, 20, 3, seed=4)
    assert a == rbm.sample(50, 20, 3, seed=4)
    assert len(a) == 20
    assert all(len(c) == 3 and c == sorted(c) for c in a)


def test_rank_and_invert():
    m = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    assert rbm.rank(m) == 3
    inv = rbm.invert(m)
    prod = [[sum(m[i][t] * inv[t][j] for t in range(3)) % 2 for j in range(3)] for i in range(3)]
    assert prod == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rbm.rank([[1, 1], [1, 1]]) == 1


def test_singular_matrix_raises():
    with pytest.raises(rbm.RbmError):
        rbm.invert([[1, 1], [1, 1]])


def test_fano_has_rank_three():
    f = rbm.fano()
    assert len(f) == 3 and len(f[0]) == 7
    assert rbm.rank(f) == 3


def test_d_core():
    vertices, edges = rbm.d_core(4, [[0, 1], [1, 2], [2, 0], [2, 3]], 2)
    assert vertices == [0, 1, 2]
    assert edges == [0, 1, 2]


def test_core_prediction():
    p = rbm.core_prediction(20.0, 80, 8)
    assert not p["subcritical"]
    assert 16.0 < p["x"] <= 20.0
    assert rbm.core_prediction(7.5, 30, 3)["subcritical"]


def test_pipeline_finds_single_column():
    out = rbm.run_pipeline(500, 4000, 9, seed=10, target="single", eps0=0.1, omega=2000)
    assert out["success"]
    assert out["verified"]


def test_experiment_profile():
    assert "candidate-k3" in rbm.profiles()
    report = rbm.run_experiment("independence-k3", trials=2)
    assert report["schema_version"] == 1
    assert len(report["records"]) == 2
    assert report["all_passed"] in (True, False)
