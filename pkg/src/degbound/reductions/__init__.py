"""Instance generators for the lower-bound constructions, each returning a ReductionBundle."""

from .bundle import ReductionBundle, read_bundle, verify_bundle, write_bundle
from .pw import bdvd_pw_delta1, bdvd_pw_general, dc_pw_delta1, dc_pw_general
from .td import bdvd_td, dc_td, pad_mcc, random_mcc
from .vc import bdvd_vc, dc_vc
from .xsat import (
    XsatFormula,
    build_detecting_family,
    partition_variables_clauses,
    sat34_to_xsat34,
)

__all__ = [
    "ReductionBundle",
    "XsatFormula",
    "bdvd_pw_delta1",
    "bdvd_pw_general",
    "bdvd_td",
    "bdvd_vc",
    "build_detecting_family",
    "dc_pw_delta1",
    "dc_pw_general",
    "dc_td",
    "dc_vc",
    "pad_mcc",
    "partition_variables_clauses",
    "random_mcc",
    "read_bundle",
    "sat34_to_xsat34",
    "verify_bundle",
    "write_bundle",
]
