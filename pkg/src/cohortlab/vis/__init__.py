from cohortlab.vis.bars import Bar, BarModel, EventMark, build_bars
from cohortlab.vis.config import (
    DEFAULT_LEGENDS,
    FoldConfig,
    LegendEntry,
    default_legend,
    is_bandable,
    outcome_band,
)
from cohortlab.vis.errors import UnknownOutcomeKey, UnknownSortKey, VisError
from cohortlab.vis.folding import cycle_distribution, fold, n_windows, unfold
from cohortlab.vis.matrix import MatrixCell, MatrixModel, MatrixRow, build_matrix
from cohortlab.vis.sortkeys import (
    ClinicalFieldKey,
    OutcomeKey,
    SortKey,
    WindowMeanKey,
    order_uids,
    parse_sort_key,
    sort_value,
)
from cohortlab.vis.spline import catmull_rom_chain
from cohortlab.vis.wrap import WrapConfig, WrapGeometry, WrapKnot, WrapSegment, build_wrap

__all__ = [
    "Bar",
    "BarModel",
    "ClinicalFieldKey",
    "DEFAULT_LEGENDS",
    "EventMark",
    "FoldConfig",
    "LegendEntry",
    "MatrixCell",
    "MatrixModel",
    "MatrixRow",
    "OutcomeKey",
    "SortKey",
    "UnknownOutcomeKey",
    "UnknownSortKey",
    "VisError",
    "WindowMeanKey",
    "WrapConfig",
    "WrapGeometry",
    "WrapKnot",
    "WrapSegment",
    "build_bars",
    "build_matrix",
    "build_wrap",
    "catmull_rom_chain",
    "cycle_distribution",
    "default_legend",
    "fold",
    "is_bandable",
    "n_windows",
    "order_uids",
    "outcome_band",
    "parse_sort_key",
    "sort_value",
    "unfold",
]
