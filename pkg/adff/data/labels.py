from adff.core.enums import ClassScheme
from adff.core.exceptions import DatasetError


def scale_annotation(raw: float) -> float:
    """Map a raw [0, 1] annotation onto [-1, 1]."""
    if not 0.0 <= raw <= 1.0:
        raise DatasetError(f"raw annotation out of range: {raw}", value=raw)
    return 2.0 * raw - 1.0


def to_class_labels(valence: float, arousal: float, scheme: ClassScheme) -> int:
    """Sign-based class index; zero counts as positive.

    ``four`` encodes quadrants as 2 * [arousal >= 0] + [valence >= 0], so the
    low bit is the ``two_v`` decision and the high bit the ``two_a`` one.
    """
    positive_v = int(valence >= 0)
    positive_a = int(arousal >= 0)
    scheme = ClassScheme(scheme)
    if scheme == ClassScheme.TWO_V:
        return positive_v
    if scheme == ClassScheme.TWO_A:
        return positive_a
    return 2 * positive_a + positive_v
