import numpy as np
import pytest

from chromacst.cct.interpolation import estimate_white_xy, interpolate_cst
from chromacst.colour.core import Chromaticity2D, Cst, WhitePoint, apply_cst, white_balance
from chromacst.colour.metrics import angular_error
from chromacst.dataset.images import RawImage
from chromacst.dataset.synthetic import planckian_illuminants, synthesize_chart
from chromacst.errors import (
    BlendingError,
    ComparisonError,
    ConfigurationError,
    DataError,
    DegenerateMappingError,
    UnsupportedEncodingError,
)
from chromacst.mlp.encoding import EncodingKind, InputEncoding
from chromacst.mlp.model import forward_encoded, init_model, predict_cst
from chromacst.pipeline.correct import BlendStack, correct_chart, correct_image_multi, correct_image_single
from chromacst.pipeline.evaluate import EvalReport, IlluminantResult, evaluate, load_report, percentiles, summarize, write_report
from chromacst.pipeline.lut import Lut, lut_export, lut_query, lut_query_encoded
from chromacst.pipeline.providers import (
    CstProvider,
    FixedProvider,
    InterpolatedProvider,
    LutProvider,
    MlpProvider,
    OracleProvider,
)
from chromacst.pipeline.report import merge_reports, rank_rows, render_table, write_summary
from chromacst.utils.rng import stream

UNIT_RAW = InputEncoding(EncodingKind.RAW2D, [0.3, 0.4], [0.5, 0.5])


@pytest.fixture
def trained_like_model():
    """A model with nonzero output weights, so its CSTs vary with the input."""
    model = init_model(UNIT_RAW, stream(3, "init"), hidden=8)
    rng = np.random.default_rng(3)
    weights = list(model.weights)
    weights[-1] = rng.normal(0.0, 0.2, size=weights[-1].shape)
    return model.with_parameters([p for pair in zip(weights, model.biases) for p in pair])


class FailingProvider(CstProvider):
    name = "failing"

    def cst_for(self, white: WhitePoint) -> Cst:
        raise DegenerateMappingError("no mapping")


def test_lut_is_exact_at_nodes(trained_like_model):
    lut = lut_export(trained_like_model, 5, margin=0.05)
    first, second = lut.nodes(0), lut.nodes(1)
    for i in (0, 2, 4):
        for j in (0, 3, 4):
            cst = lut_query_encoded(lut, (first[i], second[j]))
            np.testing.assert_array_equal(cst.m, lut.cells[i, j])
            expected = forward_encoded(trained_like_model, np.array((first[i], second[j])))
            np.testing.assert_allclose(np.delete(cst.m.reshape(-1), 4), expected, atol=1e-12)


def test_lut_is_bilinear_inside_cells(trained_like_model):
    lut = lut_export(trained_like_model, 4, margin=0.0)
    nodes = lut.nodes(0)
    centre = ((nodes[1] + nodes[2]) / 2, (nodes[1] + nodes[2]) / 2)
    expected = (lut.cells[1, 1] + lut.cells[2, 1] + lut.cells[1, 2] + lut.cells[2, 2]) / 4
    np.testing.assert_allclose(lut_query_encoded(lut, centre).m, expected, atol=1e-12)


def test_lut_clamps_outside_bounds(trained_like_model):
    lut = lut_export(trained_like_model, 4)
    np.testing.assert_array_equal(lut_query_encoded(lut, (-3.0, 5.0)).m, lut.cells[0, 3])


def test_lut_tracks_model(trained_like_model):
    lut = lut_export(trained_like_model, 33)
    w = WhitePoint.from_raw(0.52, 0.61)
    np.testing.assert_allclose(lut_query(lut, w).m, predict_cst(trained_like_model, w).m, atol=1e-2)


def test_lut_needs_2d_model():
    model = init_model(InputEncoding(EncodingKind.CCT1D, [100.0], [300.0]), stream(0, "init"))
    with pytest.raises(UnsupportedEncodingError):
        lut_export(model, 10)


def test_lut_grid_size(trained_like_model):
    with pytest.raises(ConfigurationError):
        lut_export(trained_like_model, 1)
    lut = lut_export(trained_like_model, 20)
    assert lut.size_bytes() == 20 * 20 * 9 * 4


def test_lut_file(tmp_path, trained_like_model):
    lut = lut_export(trained_like_model, 6)
    lut.save(tmp_path / "lut.json")
    loaded = Lut.load(tmp_path / "lut.json")
    np.testing.assert_array_equal(loaded.cells, lut.cells)
    assert loaded.encoding.kind is EncodingKind.RAW2D


def test_provider_costs(trained_like_model):
    fixed = FixedProvider(Cst.identity())
    assert fixed.size_bytes() == 36
    assert fixed.macs((1080, 720)) == pytest.approx(1080 * 720 * 9 / 1e6)
    mlp = MlpProvider(trained_like_model)
    assert mlp.size_bytes() == trained_like_model.parameter_count * 4
    assert mlp.macs((10, 10)) == pytest.approx((trained_like_model.macs() + 900) / 1e6)
    assert LutProvider(lut_export(trained_like_model, 4)).query_macs() == 36


def test_interpolated_provider_names(anchors):
    assert InterpolatedProvider(anchors.two).name == "cst2"
    assert InterpolatedProvider(anchors.three).name == "cst3"


@pytest.mark.parametrize("kelvin", [2800, 4000, 5600])
def test_three_point_provider_estimates_with_its_own_anchors(camera, anchors, kelvin):
    obs = synthesize_chart(camera, planckian_illuminants(camera, [kelvin])[0], anchors.two).observation
    expected = interpolate_cst(estimate_white_xy(obs.white.raw_vector(), anchors.three).cct, anchors.three)
    np.testing.assert_array_equal(InterpolatedProvider(anchors.three).cst_for(obs.white).m, expected.m)


def test_interpolated_provider_ignores_stored_cct(anchors, make_chart):
    white = make_chart().white
    provider = InterpolatedProvider(anchors.three)
    stale = white.with_xy(Chromaticity2D(0.3, 0.3), 20000.0)
    np.testing.assert_array_equal(provider.cst_for(stale).m, provider.cst_for(white).m)


def test_oracle_provider_needs_chart(make_chart):
    provider = OracleProvider()
    with pytest.raises(ConfigurationError):
        provider.cst_for(WhitePoint.from_raw(0.5, 0.5))
    obs = make_chart()
    assert np.max(angular_error(correct_chart(obs, provider), obs.gt_xyz)) < 1e-6


def test_correct_chart_names_the_illuminant(make_chart):
    with pytest.raises(DegenerateMappingError) as info:
        correct_chart(make_chart(illuminant_id="lamp_7"), FailingProvider())
    assert "while correcting illuminant lamp_7" in info.value.__notes__


def _image(seed=0, size=(6, 5)):
    return RawImage(np.random.default_rng(seed).uniform(0.05, 0.9, size=size + (3,)))


def test_one_hot_blend_matches_single(realizable_m):
    img = _image()
    w = WhitePoint.from_raw(0.6, 0.7)
    provider = FixedProvider(Cst(realizable_m))
    stack = BlendStack([w], np.ones((1, 6, 5)))
    illum_map = np.broadcast_to(np.array((0.6, 0.7)), (6, 5, 2))
    multi = correct_image_multi(img, stack, illum_map, provider)
    np.testing.assert_array_equal(multi.planes, correct_image_single(img, w, provider).planes)


def test_blending_one_illuminant_twice(realizable_m):
    img = _image(1)
    w = WhitePoint.from_raw(0.6, 0.7)
    provider = FixedProvider(Cst(realizable_m))
    weights = np.random.default_rng(2).uniform(size=(6, 5))
    stack = BlendStack([w, w], np.stack((weights, 1.0 - weights)))
    illum_map = np.broadcast_to(np.array((0.6, 0.7)), (6, 5, 2))
    multi = correct_image_multi(img, stack, illum_map, provider)
    np.testing.assert_allclose(multi.planes, correct_image_single(img, w, provider).planes, atol=1e-12)


def test_blend_stack_validation():
    w = WhitePoint.from_raw(0.6, 0.7)
    with pytest.raises(BlendingError):
        BlendStack([w, w], np.full((2, 3, 3), 0.4))
    with pytest.raises(BlendingError):
        BlendStack([w, w], np.stack((np.full((3, 3), -0.5), np.full((3, 3), 1.5))))
    with pytest.raises(BlendingError):
        BlendStack([w], np.ones((2, 3, 3)))


def test_blend_maps_must_match_image():
    w = WhitePoint.from_raw(0.6, 0.7)
    stack = BlendStack([w], np.ones((1, 4, 4)))
    with pytest.raises(BlendingError):
        correct_image_multi(_image(), stack, np.ones((4, 4, 2)), FixedProvider(Cst.identity()))


def test_percentiles_interpolate_linearly():
    assert percentiles([1.0, 2.0, 3.0, 4.0]) == pytest.approx({"p25": 1.75, "p50": 2.5, "p75": 3.25, "p90": 3.7})
    assert summarize([1.0, 2.0, 3.0, 4.0])["mean"] == 2.5


def test_evaluate_realizable_charts(make_chart, realizable_m):
    charts = [make_chart(seed=i, illuminant_id=f"c{i}") for i in (2, 0, 1)]
    report = evaluate(charts, FixedProvider(Cst(realizable_m)))
    assert [r.illuminant_id for r in report.results] == ["c0", "c1", "c2"]
    assert report.summary["angular"]["mean"] < 1e-6
    assert report.summary["delta_e"]["p90"] < 1e-6
    assert len(report.results[0].patch_errors) == 24


def test_evaluate_records_failures(make_chart):
    report = evaluate([make_chart(illuminant_id="a")], FailingProvider())
    assert report.results == ()
    assert "a" in report.failures
    assert report.summary == {}
    assert report.ids == ["a"]


def test_evaluate_needs_charts():
    with pytest.raises(DataError):
        evaluate([], FixedProvider(Cst.identity()))


def test_report_files(tmp_path, make_chart):
    charts = [make_chart(seed=i, illuminant_id=f"c{i}", xy=(0.35, 0.36), cct=4800.0) for i in range(3)]
    report = evaluate(charts, FixedProvider(Cst.identity()), white_offsets={"c1": 2.0})
    write_report(report, tmp_path)
    loaded = load_report(tmp_path)
    assert loaded.summary == report.summary
    assert loaded.results[1].white_offset_deg == 2.0
    lines = (tmp_path / "per_illuminant.csv").read_text().splitlines()
    assert lines[0] == "id,cct,x,y,angular_mean,delta_e,white_offset_deg"
    assert len(lines) == 4
    assert (tmp_path / "per_patch.csv").read_text().splitlines()[0].endswith("patch_23")


def _report(provider, angular, ids=("a", "b"), size_bytes=1024, failures=None):
    results = [IlluminantResult(i, None, None, a, 2 * a, [a]) for i, a in zip(ids, angular)]
    return EvalReport(provider, results, failures or {}, size_bytes, 1.5)


def test_merge_and_rank():
    rows = merge_reports([_report("mlp", [1.0, 2.0]), _report("nn", [1.0, 2.0]), _report("cst2", [3.0, 4.0], size_bytes=72)])
    assert [row["method"] for row in rows] == ["mlp", "nn", "cst2"]
    ranks = rank_rows(rows)
    assert ranks["angular_mean"] == [1, 1, 3]
    assert ranks["size_kb"] == [2, 2, 1]
    assert ranks["macs_millions"] == [1, 1, 1]


def test_merge_needs_same_test_set():
    with pytest.raises(ComparisonError):
        merge_reports([_report("mlp", [1.0, 2.0]), _report("nn", [1.0, 2.0], ids=("a", "c"))])
    with pytest.raises(ComparisonError):
        merge_reports([])
    with pytest.raises(ComparisonError):
        merge_reports([_report("mlp", [1.0, 2.0])], labels=["x", "y"])


def test_failed_ids_count_toward_the_test_set():
    failed = _report("cst3", [1.0], ids=("a",), failures={"b": "diverged"})
    rows = merge_reports([_report("mlp", [1.0, 2.0]), failed])
    assert rows[1]["failures"] == 1


def test_unranked_without_results():
    empty = EvalReport("broken", [], {"a": "x", "b": "y"})
    rows = merge_reports([_report("mlp", [1.0, 2.0]), empty], labels=["first", "second"])
    assert rank_rows(rows)["delta_e_p50"] == [1, None]
    assert "[2 failed]" in render_table(rows)


def test_summary_files(tmp_path):
    rows = merge_reports([_report("mlp", [1.0, 2.0]), _report("nn", [2.0, 3.0])])
    write_summary(rows, tmp_path)
    header = (tmp_path / "summary.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["method", "failures", "angular_mean", "angular_mean_rank"]
    table = (tmp_path / "summary.txt").read_text()
    assert table.splitlines()[0].startswith("Method")
    assert "(1)" in table.splitlines()[2]


def test_single_correction_matches_per_pixel_loop(realizable_m):
    img = _image(4)
    w = WhitePoint.from_raw(0.6, 0.7)
    cst = Cst(realizable_m)
    out = correct_image_single(img, w, FixedProvider(cst)).planes
    for y in range(img.height):
        for x in range(img.width):
            np.testing.assert_array_equal(out[y, x], apply_cst(white_balance(img.planes[y, x], w), cst))


@pytest.mark.parametrize("count", [2, 3])
def test_blend_matches_per_pixel_sum(count, anchors):
    rng = np.random.default_rng(count)
    img = _image(5)
    whites = [WhitePoint.from_raw(*rng.uniform(0.4, 0.9, size=2)) for _ in range(count)]
    maps = rng.uniform(size=(count, 6, 5))
    maps /= maps.sum(axis=0)
    illum_map = rng.uniform(0.4, 0.9, size=(6, 5, 2))
    provider = InterpolatedProvider(anchors.two)
    out = correct_image_multi(img, BlendStack(whites, maps), illum_map, provider).planes

    csts = [provider.cst_for(w) for w in whites]
    for y in range(6):
        for x in range(5):
            balanced = white_balance(img.planes[y, x], WhitePoint.from_raw(*illum_map[y, x]))
            expected = sum(maps[i, y, x] * apply_cst(balanced, csts[i]) for i in range(count))
            np.testing.assert_allclose(out[y, x], expected, rtol=0, atol=1e-12)


def test_percentiles_are_ordered(make_chart):
    charts = [make_chart(seed=i, illuminant_id=f"c{i}") for i in range(6)]
    summary = evaluate(charts, FixedProvider(Cst.identity())).summary
    for metric in ("angular", "delta_e"):
        stats = summary[metric]
        assert stats["p25"] <= stats["p50"] <= stats["p75"] <= stats["p90"]
