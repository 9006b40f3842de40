import json

import pytest

import graphfactor as gf


def test_generate_and_factor():
    g = gf.gen_random_regular_bipartite(12, 3, 7)
    assert g.is_regular(3)
    h = gf.k_factor(g, 3, 1)
    assert gf.verify_factor(g, h.edge_ids, 1)


def test_parity_condition_raises():
    g = gf.gen_random_regular_bipartite(10, 4, 1)
    with pytest.raises(gf.UnsupportedParameters):
        gf.k_factor(g, 4, 1)


def test_json_round_trip():
    g = gf.gen_random_regular_bipartite(5, 2, 3)
    text = gf.graph_to_json(g)
    back = gf.graph_from_json(text)
    assert back.vertex_count() == g.vertex_count()
    assert json.loads(text)["vertices"][0]["side"] in ("L", "R")


def test_enumeration_oracle():
    # K_{3,3} as JSON.
    verts = [{"id": i, "side": "L" if i < 3 else "R", "boundary": False} for i in range(6)]
    edges = [
        {"id": 3 * i + j, "u": i, "v": 3 + j} for i in range(3) for j in range(3)
    ]
    g = gf.graph_from_json(json.dumps({"vertices": verts, "edges": edges}))
    assert gf.enumerate_k_factors(g, 1) == 6


def test_window_pipeline():
    oracle = gf.gen_oracle(2, [[0, 0], [1, 0], [0, 1]])
    w = gf.make_window(oracle, [0, 0], 6)
    res = gf.k_factor_window(w, 1)
    interior = sum(
        1
        for v in json.loads(w.to_json())["vertices"]
        if not v["boundary"]
    )
    assert len(res.unresolved) < interior


def test_residual_experiment_runs():
    oracle = gf.gen_oracle(2, [[0, 0], [1, 0], [0, 1]])
    reports = gf.window_residual_experiment(oracle, [4], 1, 2, 11, 1)
    assert len(reports) == 2
    for r in reports:
        num, den = r.residual
        assert 0 <= num <= den
