"""Exact counts of Galois extensions of p-adic fields with a single wild ramification jump.

Closed-form evaluation lives in ``counts``; ``oracle`` and ``galois_ring``
recount the same quantities by exhaustive subgroup enumeration.
"""

from .counts import CountResult, QueryParams, dispatch
from .errors import (BranchError, ConsistencyError, ParameterError, ResourceError,
                     WildcountError)
from .ff import FieldSpec, build_field

__all__ = [
    "CountResult", "QueryParams", "dispatch", "FieldSpec", "build_field",
    "WildcountError", "ParameterError", "BranchError", "ResourceError", "ConsistencyError",
]
__version__ = "0.1.0"
