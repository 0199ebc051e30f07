import numpy as np
import pytest

from chromacst.colour.core import WhitePoint
from chromacst.colour.metrics import angular_error
from chromacst.config import CHART_PATCHES, PATCH_WINDOW, WHITE_PATCH_INDEX
from chromacst.dataset.charts import (
    build_observation,
    chart_from_json,
    chart_to_json,
    clip_filter,
    load_reference_chart,
    observation_from_image,
)
from chromacst.dataset.images import (
    RawImage,
    chart_centers,
    extract_patches,
    load_raw_image,
    read_tensor,
    render_chart_image,
    save_raw_image,
    synthesize_capture,
    write_tensor,
)
from chromacst.dataset.sampling import SplitSpec, perturb_white, sample_dirichlet_illuminants, split_dataset
from chromacst.dataset.spectra import (
    Spectrum,
    SpectrumKind,
    blackbody,
    check_grids,
    default_grid,
    load_bundle,
    load_spectrum_csv,
    render_chart,
    render_patch,
    save_bundle,
    save_spectrum_csv,
)
from chromacst.dataset.synthetic import planckian_illuminants, synthesize_chart
from chromacst.errors import (
    ConfigurationError,
    DataError,
    DegenerateWhiteError,
    ExtractionError,
    SpectralGridError,
    SplitError,
    SynthesisError,
)


def test_spectrum_validation():
    grid = default_grid()
    with pytest.raises(SpectralGridError):
        Spectrum(grid, np.ones(len(grid) - 1))
    with pytest.raises(SpectralGridError):
        Spectrum([400.0, 405.0, 415.0], [1.0, 1.0, 1.0])
    with pytest.raises(SpectralGridError):
        Spectrum([400.0, 405.0], [1.0, -0.1])
    with pytest.raises(SpectralGridError):
        Spectrum([400.0, 405.0], [1.0, 1.2], SpectrumKind.REFLECTANCE)


def test_grids_must_match():
    a = Spectrum([400.0, 405.0, 410.0], [1.0, 1.0, 1.0], name="a")
    b = Spectrum([400.0, 410.0, 420.0], [1.0, 1.0, 1.0], name="b")
    with pytest.raises(SpectralGridError):
        check_grids(a, b)


def test_render_chart_matches_single_patches(camera):
    spd = blackbody(4000.0, camera.grid)
    chart = render_chart(spd, camera.reflectances, camera.sensitivities)
    for index in (0, WHITE_PATCH_INDEX, 23):
        np.testing.assert_allclose(chart[index], render_patch(spd, camera.reflectances[index], camera.sensitivities), rtol=1e-12)


def test_render_is_linear_in_the_illuminant(camera):
    spd = blackbody(3000.0, camera.grid)
    np.testing.assert_allclose(camera.render(spd.scaled(2.5)), 2.5 * camera.render(spd), rtol=1e-12)


def test_leds_are_exposed(camera):
    for led in camera.bank.leds:
        assert camera.render(led)[WHITE_PATCH_INDEX].max() == pytest.approx(0.9, rel=1e-12)


def test_led_capture_matches_spectral_render(camera):
    alpha = np.array([0.1, 0.2, 0.05, 0.3, 0.15, 0.1, 0.1])
    image, clip_count = synthesize_capture(camera.led_images(), alpha)
    assert clip_count == 0
    patches = extract_patches(image, chart_centers(), PATCH_WINDOW)
    np.testing.assert_allclose(patches, camera.render(camera.bank.mix(alpha)), atol=1e-12)


def test_led_capture_counts_clipped_values(camera):
    image, clip_count = synthesize_capture(camera.led_images(), np.ones(7))
    assert clip_count > 0
    assert image.planes.max() == 1.0


def test_led_capture_rejects_bad_weights(camera):
    images = camera.led_images()
    with pytest.raises(SynthesisError):
        synthesize_capture(images, np.full(7, 1.5))
    with pytest.raises(SynthesisError):
        synthesize_capture(images, np.full(6, 0.1))


def test_clip_filter_bounds_are_inclusive():
    patches = np.full((24, 3), 0.5)
    patches[0] = 0.01
    patches[1] = 0.99
    assert clip_filter(patches, 0.0, 1.0, 0.01)
    patches[2, 0] = 0.0099
    assert not clip_filter(patches, 0.0, 1.0, 0.01)


def test_extract_patches_window_checks():
    image = render_chart_image(np.full((24, 3), 0.4))
    with pytest.raises(ExtractionError):
        extract_patches(image, chart_centers(), 4)
    with pytest.raises(ExtractionError) as info:
        extract_patches(image, [(10, 10), (2, 2)], 11)
    assert info.value.patch_index == 1


def test_observation_from_image_subtracts_black(camera):
    patches = np.random.default_rng(1).uniform(0.1, 0.8, size=(24, 3))
    image = render_chart_image(patches * 0.9, black_level=0.05, white_level=1.0)
    obs = observation_from_image(image, chart_centers(), PATCH_WINDOW, camera.gt_xyz)
    np.testing.assert_allclose(obs.patches_raw, patches * 0.9, atol=1e-12)


def test_raw_image_levels():
    with pytest.raises(SynthesisError):
        RawImage(np.zeros((2, 2, 3)), black_level=1.0, white_level=1.0)
    with pytest.raises(SynthesisError):
        RawImage(np.full((2, 2, 3), 2.0))


def test_tensor_files(tmp_path):
    array = np.random.default_rng(2).uniform(size=(3, 4, 3))
    write_tensor(tmp_path / "a.tensor", array)
    np.testing.assert_allclose(read_tensor(tmp_path / "a.tensor"), array.astype(np.float32))
    (tmp_path / "bad.tensor").write_bytes(b"NOTATENSOR")
    with pytest.raises(SynthesisError):
        read_tensor(tmp_path / "bad.tensor")


def test_raw_image_keeps_levels(tmp_path):
    image = render_chart_image(np.full((24, 3), 0.25), black_level=0.0625, white_level=1.0)
    save_raw_image(tmp_path / "chart.tensor", image)
    loaded = load_raw_image(tmp_path / "chart.tensor")
    assert (loaded.black_level, loaded.white_level) == (0.0625, 1.0)
    np.testing.assert_array_equal(loaded.planes, image.planes)


def test_spectrum_csv_and_bundle(tmp_path):
    spd = blackbody(5000.0)
    save_spectrum_csv(tmp_path / "bb.csv", spd)
    loaded = load_spectrum_csv(tmp_path / "bb.csv")
    np.testing.assert_array_equal(loaded.values, spd.values)
    assert loaded.name == "bb"

    save_bundle(tmp_path / "spds.json", [spd, blackbody(3000.0)])
    assert set(load_bundle(tmp_path / "spds.json")) == {"planckian_5000", "planckian_3000"}


def test_build_observation_white():
    patches = np.full((24, 3), 0.2)
    patches[WHITE_PATCH_INDEX] = (0.4, 0.8, 0.6)
    obs = build_observation(patches, np.full((24, 3), 0.5))
    assert obs.white.raw.a == pytest.approx(0.5)
    assert obs.white.raw.b == pytest.approx(0.75)
    patches[WHITE_PATCH_INDEX] = (0.4, 0.0, 0.6)
    with pytest.raises(DegenerateWhiteError):
        build_observation(patches, np.full((24, 3), 0.5))


def test_chart_document(make_chart):
    obs = make_chart(xy=(0.3457, 0.3585), cct=5000.0)
    restored = chart_from_json(chart_to_json(obs))
    assert restored.white == obs.white
    np.testing.assert_array_equal(restored.patches_raw, obs.patches_raw)
    with pytest.raises(DataError):
        chart_from_json({"white": [0.5, 0.5]})


def test_reference_chart():
    xyz = load_reference_chart()
    assert xyz.shape == (CHART_PATCHES, 3)
    assert 0.85 < xyz[WHITE_PATCH_INDEX, 1] < 0.95
    assert xyz[23, 1] < 0.05


def test_dirichlet_sampling(camera):
    spds = sample_dirichlet_illuminants(camera.bank, 20, [1.0] * 7, seed=5)
    assert [s.name for s in spds[:2]] == ["dirichlet_0000", "dirichlet_0001"]
    for spd in spds:
        assert sum(spd.meta["weights"]) == pytest.approx(1.0)
    again = sample_dirichlet_illuminants(camera.bank, 20, [1.0] * 7, seed=5)
    assert [s.meta["weights"] for s in again] == [s.meta["weights"] for s in spds]


def test_dirichlet_rejects_bad_concentration(camera):
    with pytest.raises(ConfigurationError):
        sample_dirichlet_illuminants(camera.bank, 5, [1.0] * 6, seed=0)
    with pytest.raises(ConfigurationError):
        sample_dirichlet_illuminants(camera.bank, 0, [1.0] * 7, seed=0)


def test_split_sizes_and_determinism():
    ids = [f"id_{i:04d}" for i in range(400)]
    split = split_dataset(ids, (0.5, 0.2, 0.3), seed=0)
    assert (len(split.train), len(split.val), len(split.test)) == (200, 80, 120)
    assert split.ids() == set(ids)
    assert split_dataset(ids, (0.5, 0.2, 0.3), seed=0) == split
    assert split_dataset(ids, (0.5, 0.2, 0.3), seed=1) != split


def test_split_errors(tmp_path):
    with pytest.raises(SplitError):
        split_dataset([], (0.5, 0.2, 0.3), 0)
    with pytest.raises(SplitError):
        split_dataset(["a", "b"], (0.5, 0.5, 0.5), 0)
    with pytest.raises(SplitError):
        SplitSpec(["a"], ["a"], [])
    with pytest.raises(SplitError):
        SplitSpec(["a"], [], []).part("holdout")


def test_split_file(tmp_path):
    split = split_dataset(["a", "b", "c", "d"], (0.5, 0.25, 0.25), 3)
    split.save(tmp_path / "split.json")
    assert SplitSpec.load(tmp_path / "split.json") == split


@pytest.mark.parametrize("offset", [0.5, 2.0, 5.0])
def test_perturb_white_offset(offset):
    w = WhitePoint.from_raw(0.55, 0.7)
    perturbed = perturb_white(w, offset, 0, 3)
    assert angular_error(w.raw_vector(), perturbed.raw_vector()) == pytest.approx(offset, abs=1e-6)
    assert perturb_white(w, offset, 0, 3) == perturbed
    assert perturb_white(w, offset, 0, 4) != perturbed


def test_perturb_white_zero_and_negative():
    w = WhitePoint.from_raw(0.55, 0.7)
    assert perturb_white(w, 0.0, 0) is w
    with pytest.raises(ConfigurationError):
        perturb_white(w, -1.0, 0)


def test_synthesized_chart(camera, anchors):
    spd = planckian_illuminants(camera, [4000])[0]
    chart = synthesize_chart(camera, spd, anchors.two)
    obs = chart.observation
    assert obs is not None
    assert obs.illuminant_id == "planckian_4000"
    assert obs.meta["true_cct"] == pytest.approx(4000.0, rel=0.01)
    assert obs.white.cct == pytest.approx(4000.0, rel=0.1)


def test_overexposed_chart_is_discarded(camera, anchors):
    spd = planckian_illuminants(camera, [4000])[0].scaled(3.0)
    chart = synthesize_chart(camera, spd, anchors.two)
    assert chart.observation is None
    assert chart.image.planes.max() == 1.0


def test_anchor_sets(anchors):
    assert anchors.two.cst_at(2500.0) is anchors.three.cst_at(2500.0)
    assert anchors.three.cst_at(5000.0).m[1, 1] == 1.0


def test_gt_is_below_diffuser(camera):
    assert np.all(camera.gt_xyz[:, 1] <= 1.0)
    assert camera.gt_xyz[WHITE_PATCH_INDEX, 1] > 0.5


@pytest.mark.parametrize("kelvin", [3000, 5000, 6500])
def test_white_xy_matches_illuminant(camera, anchors, kelvin):
    obs = synthesize_chart(camera, planckian_illuminants(camera, [kelvin])[0], anchors.two).observation
    true_x, true_y = obs.meta["true_xy"]
    assert abs(obs.white.xy.a - true_x) < 0.01
    assert abs(obs.white.xy.b - true_y) < 0.01


def test_dirichlet_captures_match_spectral_render(camera):
    images = camera.led_images()
    for spd in sample_dirichlet_illuminants(camera.bank, 25, [1.0 / 7] * 7, seed=11):
        weights = np.asarray(spd.meta["weights"])
        image, clip_count = synthesize_capture(images, weights)
        assert clip_count == 0
        patches = extract_patches(image, chart_centers(), PATCH_WINDOW)
        np.testing.assert_allclose(patches, camera.render(camera.bank.mix(weights)), rtol=1e-6, atol=1e-12)


def test_extract_patches_constant_image():
    image = RawImage(np.full((40, 60, 3), 0.37))
    centers = [(5, 5), (30, 20), (54, 34)]
    for window in (1, 3, 11):
        np.testing.assert_allclose(extract_patches(image, centers, window), np.full((3, 3), 0.37), rtol=1e-12)


def test_extract_patches_single_pixel_window():
    planes = np.random.default_rng(3).uniform(0.0, 1.0, size=(20, 30, 3))
    centers = [(0, 0), (29, 19), (7, 13)]
    np.testing.assert_array_equal(extract_patches(RawImage(planes), centers, 1), [planes[y, x] for x, y in centers])


def test_extract_patches_checkerboard():
    a, b = np.array([0.2, 0.4, 0.6]), np.array([0.7, 0.1, 0.3])
    ys, xs = np.mgrid[0:30, 0:30]
    planes = np.where(((xs + ys) % 2 == 0)[..., None], a, b)
    centers = [(10, 10), (11, 10), (15, 18), (14, 18)]
    means = extract_patches(RawImage(planes), centers, 11)
    for (x, y), mean in zip(centers, means):
        expected = (61 * a + 60 * b) / 121 if (x + y) % 2 == 0 else (60 * a + 61 * b) / 121
        np.testing.assert_allclose(mean, expected, rtol=1e-12)


def test_extract_patches_follows_translation():
    planes = np.random.default_rng(8).uniform(0.0, 1.0, size=(32, 32, 3))
    centers = [(8, 8), (20, 12), (15, 25)]
    before = extract_patches(RawImage(planes), centers, 5)
    shifted = np.pad(planes, ((3, 0), (7, 0), (0, 0)))
    after = extract_patches(RawImage(shifted), [(x + 7, y + 3) for x, y in centers], 5)
    np.testing.assert_allclose(after, before, rtol=1e-12)
