"""Norden and almost contact B-metric structures: classification and natural connections."""

from ._core import (
    ContactBStructure,
    F_from_nijenhuis,
    NordenkitError,
    NordenStructure,
    __version__,
    classify,
    connection,
    nijenhuis,
    run_cli,
    sample_contact_b,
    sample_F,
    sample_norden,
)

__all__ = [
    "ContactBStructure",
    "F_from_nijenhuis",
    "NordenkitError",
    "NordenStructure",
    "__version__",
    "classify",
    "connection",
    "nijenhuis",
    "run_cli",
    "sample_contact_b",
    "sample_F",
    "sample_norden",
]
