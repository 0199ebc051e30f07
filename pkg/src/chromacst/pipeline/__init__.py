from chromacst.pipeline.correct import BlendStack, XyzImage, correct_chart, correct_image_multi, correct_image_single
from chromacst.pipeline.evaluate import EvalReport, IlluminantResult, evaluate, load_report, percentiles, write_report
from chromacst.pipeline.lut import Lut, lut_export, lut_query, lut_query_encoded
from chromacst.pipeline.providers import (
    CstProvider,
    FixedProvider,
    InterpolatedProvider,
    LutProvider,
    MlpProvider,
    NnProvider,
    OracleProvider,
)
from chromacst.pipeline.report import merge_reports, rank_rows, render_table, write_summary
