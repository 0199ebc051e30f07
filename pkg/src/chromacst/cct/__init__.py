from chromacst.cct.interpolation import (
    CalibratedCstSet,
    InterpolationMode,
    WhiteEstimate,
    estimate_white_xy,
    interpolate_cst,
    mired_weight,
    white_raw_to_xy,
)
from chromacst.cct.planckian import (
    CctResult,
    PlanckianTable,
    cct_lookup,
    default_table,
    load_observer,
    mccamy_cct,
    planck_radiance,
    planckian_xy,
    xy_to_uv,
)
