"""End-to-end concatenated codec."""
from .concatenated import (
    ConcatCode,
    TransmissionResult,
    ThroughputReport,
    RsStatus,
    build_concat_code,
    encode,
    encode_symbols,
    decode,
    decode_outcomes,
    throughput_report,
    message_to_symbols,
    symbols_to_message,
    bits_to_hex,
    hex_to_bits,
    random_message,
)

__all__ = [
    "ConcatCode",
    "TransmissionResult",
    "ThroughputReport",
    "RsStatus",
    "build_concat_code",
    "encode",
    "encode_symbols",
    "decode",
    "decode_outcomes",
    "throughput_report",
    "message_to_symbols",
    "symbols_to_message",
    "bits_to_hex",
    "hex_to_bits",
    "random_message",
]
