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
    LedBank,
    Spectrum,
    SpectrumKind,
    blackbody,
    load_bundle,
    load_spectrum_csv,
    render_chart,
    render_patch,
    save_bundle,
    save_spectrum_csv,
    tristimulus,
)
