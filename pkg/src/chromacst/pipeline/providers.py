"""
providers.py
CST providers: every method that turns a white point into a CST, behind one interface.
Created 17/10/2026
"""

from __future__ import annotations

from chromacst.cct.interpolation import CalibratedCstSet, InterpolationMode, interpolate_cst, white_raw_to_xy
from chromacst.colour.core import ChartObservation, Cst, HeadKind, WhitePoint
from chromacst.config import EVAL_RESOLUTION
from chromacst.errors import ConfigurationError
from chromacst.fitting.nearest import NnIndex, nn_query
from chromacst.fitting.oracle import oracle_fit
from chromacst.mlp.model import MlpModel, predict_cst
from chromacst.pipeline.lut import Lut, lut_query

FLOAT_BYTES = 4


class CstProvider():
    """Base class of the CST providers. Providers are immutable and deterministic."""

    name = ""

    def cst_for(self, white: WhitePoint) -> Cst:
        raise NotImplementedError

    def cst_for_chart(self, obs: ChartObservation) -> Cst:
        return self.cst_for(obs.white)

    @property
    def size(self) -> int:
        """Feature count of the CSTs served."""
        return 3

    def size_bytes(self) -> int:
        """Parameter storage as float32."""
        return 0

    def query_macs(self) -> int:
        """Multiply-accumulates to obtain one CST."""
        return 0

    def macs(self, resolution: tuple[int, int] = EVAL_RESOLUTION) -> float:
        """
        Millions of multiply-accumulates to correct one image: one CST query
        plus the CST applied at every pixel.
        """
        width, height = resolution
        return (self.query_macs() + width * height * 3 * self.size) / 1e6


class FixedProvider(CstProvider):
    name = "fixed"

    def __init__(self, cst: Cst) -> None:
        self.cst = cst

    @property
    def size(self) -> int:
        return self.cst.size

    def cst_for(self, white: WhitePoint) -> Cst:
        return self.cst

    def size_bytes(self) -> int:
        return self.cst.m.size * FLOAT_BYTES


class InterpolatedProvider(CstProvider):
    """
    Classical interpolation of calibrated anchors. The CCT is always
    re-estimated from the raw white against this provider's own anchors.
    """

    def __init__(self, cst_set: CalibratedCstSet) -> None:
        self.cst_set = cst_set
        self.name = "cst2" if cst_set.mode is InterpolationMode.TWO else "cst3"

    def cst_for(self, white: WhitePoint) -> Cst:
        return interpolate_cst(white_raw_to_xy(white, self.cst_set).cct, self.cst_set)

    def size_bytes(self) -> int:
        return len(self.cst_set.anchors) * 9 * FLOAT_BYTES

    def query_macs(self) -> int:
        return 2 * 9


class NnProvider(CstProvider):
    name = "nn"

    def __init__(self, index: NnIndex) -> None:
        self.index = index

    @property
    def size(self) -> int:
        return self.index.csts[0].size

    def cst_for(self, white: WhitePoint) -> Cst:
        return nn_query(self.index, white)

    def size_bytes(self) -> int:
        return (self.index.keys.size + sum(cst.m.size for cst in self.index.csts)) * FLOAT_BYTES

    def query_macs(self) -> int:
        return self.index.keys.size


class MlpProvider(CstProvider):
    name = "mlp"

    def __init__(self, model: MlpModel) -> None:
        self.model = model

    @property
    def size(self) -> int:
        return self.model.size

    def cst_for(self, white: WhitePoint) -> Cst:
        return predict_cst(self.model, white)

    def size_bytes(self) -> int:
        return self.model.parameter_count * FLOAT_BYTES

    def query_macs(self) -> int:
        return self.model.macs()


class LutProvider(CstProvider):
    name = "lut"

    def __init__(self, lut: Lut) -> None:
        self.lut = lut

    @property
    def size(self) -> int:
        return self.lut.size

    def cst_for(self, white: WhitePoint) -> Cst:
        return lut_query(self.lut, white)

    def size_bytes(self) -> int:
        return self.lut.size_bytes()

    def query_macs(self) -> int:
        return 4 * 3 * self.lut.size


class OracleProvider(CstProvider):
    """Best-fit CST of each chart against its own references; a lower bound, not a method."""

    name = "oracle"

    def __init__(self, head: HeadKind = HeadKind.LINEAR, size: int = 3) -> None:
        self.head = head
        self._size = size

    @property
    def size(self) -> int:
        return self._size

    def cst_for(self, white: WhitePoint) -> Cst:
        raise ConfigurationError("The oracle provider needs a chart, not a white point.")

    def cst_for_chart(self, obs: ChartObservation) -> Cst:
        return oracle_fit(obs, self.head, self._size)
