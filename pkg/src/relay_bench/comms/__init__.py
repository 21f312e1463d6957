"""Communication model - bearing offsets, array gains, SINR and the link predicate."""

from .antenna import (
    AntennaModel,
    ISOTROPIC,
    DIRECTIONAL,
    directional,
    steering_vector,
    array_gain,
    closed_form_gain,
)
from .link import (
    Link,
    LinkEvaluation,
    JAM_ABSENT,
    JAM_PRESENT,
    SINR_RTOL,
    bearing_offset,
    evaluate_link,
    sinr,
    can_communicate,
    meets_threshold,
    link_sinr_matrix,
)

__all__ = [
    # Antenna
    "AntennaModel",
    "ISOTROPIC",
    "DIRECTIONAL",
    "directional",
    "steering_vector",
    "array_gain",
    "closed_form_gain",
    # Link
    "Link",
    "LinkEvaluation",
    "JAM_ABSENT",
    "JAM_PRESENT",
    "SINR_RTOL",
    "bearing_offset",
    "evaluate_link",
    "sinr",
    "can_communicate",
    "meets_threshold",
    "link_sinr_matrix",
]
