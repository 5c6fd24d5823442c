"""Linear index coding with side information over finite fields.

Construction, validity, optimal length, and block and strong security of
scalar linear index codes, decided exactly by linear algebra and cross-checked
by exhaustive enumeration.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    ConstructionError,
    DecodeFailure,
    IndexCodingError,
    ValidationError,
)
from .gf import GF, FieldElem, field_new, parse_field
from .icsi import IcsiInstance, load_instance, save_instance, split_multi_demand
from .indexcode import (
    IndexCode,
    decode,
    decode_recipe,
    decode_with_errors,
    encode,
    is_delta_error_correcting,
    is_valid,
    kappa_q,
    load_code,
    minrank_fitting,
    save_code,
)
from .lincode import LinearCode, bounded_distance_decode, vandermonde_mds
from .matlin import MatGF, nullspace_left, rank, solve_left, span_member
from .security import (
    block_security_profile,
    completely_insecure_check,
    entropy_oracle,
    has_no_information,
    icsri_valid,
    kappa_star,
    restricted_distances,
)
from .strongsec import (
    RandomizedIndexCode,
    check_length_bounds,
    construct_a,
    decode_randomized,
    encode_randomized,
    verify_strong_security,
)

__all__ = [
    "BudgetExceeded",
    "ConstructionError",
    "DecodeFailure",
    "FieldElem",
    "GF",
    "IcsiInstance",
    "IndexCode",
    "IndexCodingError",
    "LinearCode",
    "MatGF",
    "RandomizedIndexCode",
    "ValidationError",
    "block_security_profile",
    "bounded_distance_decode",
    "check_length_bounds",
    "completely_insecure_check",
    "construct_a",
    "decode",
    "decode_randomized",
    "decode_recipe",
    "decode_with_errors",
    "encode",
    "encode_randomized",
    "entropy_oracle",
    "field_new",
    "has_no_information",
    "icsri_valid",
    "is_delta_error_correcting",
    "is_valid",
    "kappa_q",
    "kappa_star",
    "load_code",
    "load_instance",
    "minrank_fitting",
    "nullspace_left",
    "parse_field",
    "rank",
    "restricted_distances",
    "save_code",
    "save_instance",
    "solve_left",
    "span_member",
    "split_multi_demand",
    "vandermonde_mds",
    "verify_strong_security",
]
