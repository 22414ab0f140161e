"""Outer code: GF(2^m) arithmetic and systematic Reed-Solomon."""
from .gf2m import FieldSpec, PRIMITIVE_POLYNOMIALS, field_build, field_mul, field_inv, field_mul_reference
from .reed_solomon import (
    RsCode,
    PreimageResult,
    rs_build,
    rs_encode,
    rs_encode_many,
    rs_decode,
    rs_weight_distribution,
    rs_preimage_count,
    rs_enumerate_messages,
    rs_enumerate_codewords,
)

__all__ = [
    "FieldSpec",
    "PRIMITIVE_POLYNOMIALS",
    "field_build",
    "field_mul",
    "field_inv",
    "field_mul_reference",
    "RsCode",
    "PreimageResult",
    "rs_build",
    "rs_encode",
    "rs_encode_many",
    "rs_decode",
    "rs_weight_distribution",
    "rs_preimage_count",
    "rs_enumerate_messages",
    "rs_enumerate_codewords",
]
