import numpy as np
import pytest
from scipy.optimize import minimize

from chromacst.colour.core import ChartObservation, Cst, HeadKind, WhitePoint, apply_cst, white_balance
from chromacst.colour.metrics import angular_error, chart_delta_e
from chromacst.errors import ConfigurationError, DegenerateMappingError, EncodingError, PathError
from chromacst.fitting.nearest import NnIndex, nearest_index, nn_build, nn_query
from chromacst.fitting.oracle import fit_features, least_squares_start, oracle_fit
from chromacst.mlp.encoding import EncodingKind, InputEncoding, fit_encoding
from chromacst.mlp.train import chart_features
from chromacst.pipeline.correct import correct_chart
from chromacst.pipeline.providers import FixedProvider

UNIT_RAW = InputEncoding(EncodingKind.RAW2D, [0.0, 0.0], [1.0, 1.0])


def test_oracle_recovers_realizable_mapping(make_chart, realizable_m):
    obs = make_chart()
    cst = oracle_fit(obs)
    np.testing.assert_allclose(cst.m, realizable_m / realizable_m[1, 1], atol=1e-8)
    predicted = apply_cst(white_balance(obs.patches_raw, obs.white), cst)
    assert np.max(angular_error(predicted, obs.gt_xyz)) < 1e-6


def test_oracle_is_centre_normalized(make_chart, realizable_m):
    cst = oracle_fit(make_chart(m=realizable_m * 3.0, seed=2))
    assert cst.m[1, 1] == 1.0


def test_oracle_never_worse_than_start(synthetic_charts):
    for obs in synthetic_charts[:5]:
        fit = fit_features(chart_features(obs), obs.gt_xyz)
        assert fit.loss <= fit.start_loss


def test_oracle_expanded_head(make_chart):
    obs = make_chart(seed=4)
    cst = oracle_fit(obs, HeadKind.ROOTPOLY, 13)
    assert cst.head is HeadKind.ROOTPOLY
    assert cst.m.shape == (3, 13)
    assert cst.m[1, 1] == 1.0


def test_least_squares_rejects_negative_centre():
    rng = np.random.default_rng(0)
    features = rng.uniform(0.1, 1.0, size=(24, 3))
    gt = features @ np.diag([1.0, -1.0, 1.0])
    with pytest.raises(DegenerateMappingError):
        least_squares_start(features, gt)


def _white(r, b):
    return WhitePoint.from_raw(r, b)


def test_nn_ties_go_to_lowest_index():
    enc = InputEncoding(EncodingKind.RAW2D, [0.0, 0.0], [1.0, 1.0])
    first, second = Cst(np.diag([1.0, 1.0, 2.0])), Cst(np.diag([2.0, 1.0, 1.0]))
    index = NnIndex([[0.25, 0.5], [0.75, 0.5]], [first, second], enc)
    assert nearest_index(index, np.array([0.5, 0.5])) == 0
    assert nn_query(index, _white(0.5, 0.5)) is first
    assert nn_query(index, _white(0.7, 0.5)) is second


def test_nn_index_checks_keys():
    with pytest.raises(ConfigurationError):
        NnIndex([[0.1, 0.2]], [], UNIT_RAW)
    with pytest.raises(EncodingError):
        NnIndex([[0.1, 0.2, 0.3]], [Cst.identity()], UNIT_RAW)


def test_nn_build_and_reload(tmp_path, make_chart):
    charts = [make_chart(white=(0.4 + 0.1 * i, 0.6), seed=i, illuminant_id=f"c{i}") for i in range(3)]
    enc = fit_encoding(EncodingKind.RAW2D, [obs.white for obs in charts])
    index = nn_build(charts, enc)
    assert len(index) == 3
    assert index.ids == ("c0", "c1", "c2")

    index.save(tmp_path / "nn_index.json")
    loaded = NnIndex.load(tmp_path / "nn_index.json")
    np.testing.assert_array_equal(loaded.keys, index.keys)
    assert nn_query(loaded, charts[2].white).m.tolist() == index.csts[2].m.tolist()


def test_nn_build_needs_charts():
    with pytest.raises(ConfigurationError):
        nn_build([], UNIT_RAW)


def test_nn_index_missing_file(tmp_path):
    with pytest.raises(PathError):
        NnIndex.load(tmp_path / "nn_index.json")


def test_oracle_of_manual_observation():
    m = np.array([[0.5, 0.3, 0.1], [0.2, 0.8, 0.1], [0.0, 0.1, 0.9]])
    balanced = np.random.default_rng(8).uniform(0.05, 0.9, size=(24, 3))
    obs = ChartObservation(balanced, WhitePoint.from_raw(1.0, 1.0), balanced @ m.T)
    np.testing.assert_allclose(oracle_fit(obs).m, m / m[1, 1], atol=1e-8)


def _noisy_instance(seed):
    rng = np.random.default_rng(seed)
    m = np.array([[0.6, 0.3, 0.1], [0.25, 0.7, 0.05], [0.05, 0.1, 0.85]])
    balanced = rng.uniform(0.05, 0.9, size=(24, 3))
    gt = (balanced @ m.T) * rng.uniform(0.9, 1.1, size=(24, 3))
    return ChartObservation(balanced, WhitePoint.from_raw(1.0, 1.0), gt, f"noisy_{seed}")


def _cosine_residual(theta, balanced, gt):
    m = np.insert(theta, 4, 1.0).reshape(3, 3)
    pred = balanced @ m.T
    cos = np.sum(pred * gt, axis=1) / (np.linalg.norm(pred, axis=1) * np.linalg.norm(gt, axis=1))
    return float(np.mean(1.0 - cos))


@pytest.mark.parametrize("seed", [0, 1])
def test_oracle_matches_restarted_search(seed):
    obs = _noisy_instance(seed)
    cst = oracle_fit(obs)
    residual = _cosine_residual(np.delete(cst.m.reshape(-1), 4), obs.patches_raw, obs.gt_xyz)

    rng = np.random.default_rng(100 + seed)
    best = None
    for _ in range(6):
        start = np.delete((np.eye(3) + rng.normal(0.0, 0.3, size=(3, 3))).reshape(-1), 4)
        found = minimize(
            _cosine_residual, start, args=(obs.patches_raw, obs.gt_xyz),
            method="Powell", options={"xtol": 1e-10, "ftol": 1e-14, "maxiter": 20000},
        )
        if best is None or found.fun < best.fun:
            best = found
    assert residual <= best.fun + 1e-6
    assert abs(residual - best.fun) <= 1e-6

    restarted = Cst(np.insert(best.x, 4, 1.0).reshape(3, 3))
    delta_oracle = chart_delta_e(correct_chart(obs, FixedProvider(cst)), obs.gt_xyz)
    delta_restart = chart_delta_e(correct_chart(obs, FixedProvider(restarted)), obs.gt_xyz)
    assert delta_oracle <= delta_restart + 0.05


@pytest.mark.parametrize("patch_scale, gt_scale", [(0.25, 1.0), (1.0, 7.5), (3.0, 0.2)])
def test_oracle_is_scale_invariant(patch_scale, gt_scale):
    obs = _noisy_instance(3)
    scaled = ChartObservation(obs.patches_raw * patch_scale, obs.white, obs.gt_xyz * gt_scale, obs.illuminant_id)
    np.testing.assert_allclose(oracle_fit(scaled).m, oracle_fit(obs).m, atol=1e-6)


def _linear_scan(keys, query):
    best, best_distance = 0, None
    for position, key in enumerate(keys):
        distance = (key[0] - query[0]) ** 2 + (key[1] - query[1]) ** 2
        if best_distance is None or distance < best_distance:
            best, best_distance = position, distance
    return best


def test_nn_query_agrees_with_linear_scan():
    rng = np.random.default_rng(21)
    keys = rng.uniform(0.0, 1.0, size=(40, 2))
    keys[30:] = keys[:10]
    csts = [Cst(np.diag([1.0, 1.0, 1.0 + i])) for i in range(len(keys))]
    index = NnIndex(keys, csts, UNIT_RAW)

    queries = rng.uniform(0.01, 1.0, size=(10000, 2))
    queries[:10] = np.clip(keys[:10], 0.01, None)
    for query in queries:
        expected = _linear_scan(index.keys, query)
        assert expected < 30
        assert nn_query(index, _white(*query)) is csts[expected]
