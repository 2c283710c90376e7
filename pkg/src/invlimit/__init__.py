"""Inverse limits of the two-hyperbola unimodal family."""

from .codes import Tail, TypeCode, format_code, is_admissible, parse_code
from .embedding import Embedding, ExtendedCoord, Sheet, embedding_for
from .errors import InvLimitError, ParameterError
from .family import (
    CaseLabel,
    UnimodalMap,
    classify,
    conjugator,
    d_sequence,
    landmarks,
    load_preset,
    period_census,
    reference,
    tail_endpoint_a,
)
from .limit_space import LimitPoint, brick_interval, decode_point, shift
from .moebius import MoebiusTransform

__version__ = "0.1.0"

__all__ = [
    "CaseLabel",
    "Embedding",
    "ExtendedCoord",
    "InvLimitError",
    "LimitPoint",
    "MoebiusTransform",
    "ParameterError",
    "Sheet",
    "Tail",
    "TypeCode",
    "UnimodalMap",
    "brick_interval",
    "classify",
    "conjugator",
    "d_sequence",
    "decode_point",
    "embedding_for",
    "format_code",
    "is_admissible",
    "landmarks",
    "load_preset",
    "parse_code",
    "period_census",
    "reference",
    "shift",
    "tail_endpoint_a",
]
