from enum import Enum


class DatasetMode(str, Enum):
    """How choruses are cut into training windows."""

    SIMPLE = "simple"  # one random window per chorus
    FULL = "full"  # every sequential window, tail rule applied


class Task(str, Enum):
    """Prediction target of a run."""

    VALENCE = "valence"
    AROUSAL = "arousal"
    MULTI = "multi"
    TWO_V = "two_v"
    TWO_A = "two_a"
    FOUR = "four"

    @property
    def is_regression(self) -> bool:
        return self in (Task.VALENCE, Task.AROUSAL, Task.MULTI)

    @property
    def arity(self) -> int:
        """Width of the final head layer."""
        if self in (Task.VALENCE, Task.AROUSAL):
            return 1
        if self == Task.FOUR:
            return 4
        return 2


class ClassScheme(str, Enum):
    """Sign-based class derivations from scaled V/A labels."""

    TWO_V = "two_v"
    TWO_A = "two_a"
    FOUR = "four"


class Variant(str, Enum):
    """Network variant: the full model or one of the two ablations."""

    FULL = "full"
    NO_SE = "no_se"
    NO_TFLM = "no_tflm"

    @property
    def label(self) -> str:
        return {
            Variant.FULL: "ADFF",
            Variant.NO_SE: "w/o SE",
            Variant.NO_TFLM: "w/o TFLM",
        }[self]


class RunMode(str, Enum):
    """Batch-norm behaviour during a forward pass."""

    TRAIN = "train"
    EVAL = "eval"


class SweepAxis(str, Enum):
    SEG_NUM = "seg_num"
    SEG_LEN = "seg_len"
