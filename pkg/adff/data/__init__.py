from adff.data.corpus import ChorusRecord, load_pmemo
from adff.data.cutting import Window, cut_full, cut_simple
from adff.data.folds import FoldPlan, kfold_split
from adff.data.labels import scale_annotation, to_class_labels
from adff.data.segments import LabeledSegment, SegmentDataset, build_segments, segment_stack
from adff.data.synth import synth_generate

__all__ = [
    "ChorusRecord",
    "load_pmemo",
    "scale_annotation",
    "Window",
    "cut_simple",
    "cut_full",
    "LabeledSegment",
    "SegmentDataset",
    "segment_stack",
    "build_segments",
    "FoldPlan",
    "kfold_split",
    "to_class_labels",
    "synth_generate",
]
