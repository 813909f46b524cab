"""
Published figures for the PMEmo protocol, attached to aggregate rows on
request. They describe full-width 200-epoch runs on the real corpus and are
informational only.
"""

from typing import Dict, Optional, Tuple

from adff.core.enums import DatasetMode, Task, Variant
from adff.schemas.report import ResultRow

# (mode, seg_len, variant) -> {metric: value}, seg_num 6, single-task models
# The simple/20 s rows are the variant comparison figures (mean of 5 folds, headline
# result). The segment-length sweep reports rmse_v 0.2413 and r2_v 0.4405 for the
# same simple/20 s full model; the comparison figures are used here.
_SINGLE_TASK: Dict[Tuple[str, int, str], Dict[str, float]] = {
    ("simple", 20, "full"): {"rmse_a": 0.2213, "r2_a": 0.6394, "rmse_v": 0.2379, "r2_v": 0.4575},
    ("simple", 20, "no_se"): {"rmse_a": 0.2253, "r2_a": 0.6239, "rmse_v": 0.2429, "r2_v": 0.4332},
    ("simple", 20, "no_tflm"): {"rmse_a": 0.2228, "r2_a": 0.6316, "rmse_v": 0.2469, "r2_v": 0.4155},
    ("simple", 5, "full"): {"rmse_a": 0.2350, "r2_a": 0.5914, "rmse_v": 0.2532, "r2_v": 0.3850},
    ("simple", 10, "full"): {"rmse_a": 0.2259, "r2_a": 0.6233, "rmse_v": 0.2556, "r2_v": 0.3740},
    ("simple", 15, "full"): {"rmse_a": 0.2253, "r2_a": 0.6256, "rmse_v": 0.2573, "r2_v": 0.3651},
    ("simple", 25, "full"): {"rmse_a": 0.2281, "r2_a": 0.6121, "rmse_v": 0.2552, "r2_v": 0.3728},
    ("simple", 30, "full"): {"rmse_a": 0.2296, "r2_a": 0.6090, "rmse_v": 0.2507, "r2_v": 0.3959},
    ("full", 5, "full"): {"rmse_a": 0.2262, "r2_a": 0.6203, "rmse_v": 0.2337, "r2_v": 0.5013},
    ("full", 10, "full"): {"rmse_a": 0.2186, "r2_a": 0.6441, "rmse_v": 0.2312, "r2_v": 0.5083},
    ("full", 15, "full"): {"rmse_a": 0.2182, "r2_a": 0.6472, "rmse_v": 0.2359, "r2_v": 0.4864},
    ("full", 20, "full"): {"rmse_a": 0.2160, "r2_a": 0.6545, "rmse_v": 0.2378, "r2_v": 0.4785},
    ("full", 25, "full"): {"rmse_a": 0.2192, "r2_a": 0.6426, "rmse_v": 0.2460, "r2_v": 0.4477},
    ("full", 30, "full"): {"rmse_a": 0.2260, "r2_a": 0.6193, "rmse_v": 0.2521, "r2_v": 0.4172},
}

# seg_len -> metrics on full datasets, seg_num 6, one model per task
_FULL_MULTI_AND_CLASSES: Dict[int, Dict[str, float]] = {
    5: {"rmse_a": 0.2255, "r2_a": 0.6227, "rmse_v": 0.2351, "r2_v": 0.4955, "acc_a": 0.8240, "acc_v": 0.8100, "acc_four": 0.7148},
    10: {"rmse_a": 0.2190, "r2_a": 0.6428, "rmse_v": 0.2332, "r2_v": 0.5004, "acc_a": 0.8312, "acc_v": 0.8129, "acc_four": 0.7190},
    15: {"rmse_a": 0.2181, "r2_a": 0.6477, "rmse_v": 0.2407, "r2_v": 0.4647, "acc_a": 0.8327, "acc_v": 0.8027, "acc_four": 0.7084},
    20: {"rmse_a": 0.2188, "r2_a": 0.6449, "rmse_v": 0.2394, "r2_v": 0.4713, "acc_a": 0.8360, "acc_v": 0.8052, "acc_four": 0.7088},
    25: {"rmse_a": 0.2214, "r2_a": 0.6345, "rmse_v": 0.2501, "r2_v": 0.4313, "acc_a": 0.8330, "acc_v": 0.8067, "acc_four": 0.7070},
    30: {"rmse_a": 0.2248, "r2_a": 0.6252, "rmse_v": 0.2537, "r2_v": 0.4098, "acc_a": 0.8235, "acc_v": 0.8014, "acc_four": 0.7026},
}

_TASK_METRICS: Dict[Task, Tuple[str, ...]] = {
    Task.VALENCE: ("rmse_v", "r2_v"),
    Task.AROUSAL: ("rmse_a", "r2_a"),
    Task.MULTI: ("rmse_v", "r2_v", "rmse_a", "r2_a"),
    Task.TWO_V: ("acc_v",),
    Task.TWO_A: ("acc_a",),
    Task.FOUR: ("acc_four",),
}


def published_values(task: Task, mode: DatasetMode, seg_len: float, seg_num: int, variant: Variant) -> Optional[Dict[str, float]]:
    """Published metrics for a configuration, restricted to what ``task`` reports."""
    if seg_num != 6 or not float(seg_len).is_integer():
        return None
    seg_len = int(seg_len)
    task, mode, variant = Task(task), DatasetMode(mode), Variant(variant)
    if task in (Task.VALENCE, Task.AROUSAL):
        source = _SINGLE_TASK.get((mode.value, seg_len, variant.value))
    elif mode == DatasetMode.FULL and variant == Variant.FULL:
        source = _FULL_MULTI_AND_CLASSES.get(seg_len)
    else:
        source = None
    if source is None:
        return None
    return {name: source[name] for name in _TASK_METRICS[task]}


def attach_reference(row: ResultRow, task: Task, mode: DatasetMode, variant: Variant) -> ResultRow:
    values = published_values(task, mode, row.seg_len, row.seg_num, variant)
    if not values:
        return row
    return row.model_copy(update={f"ref_{name}": value for name, value in values.items()})
