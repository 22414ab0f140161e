"""Willie's detectors and detection experiments."""
from .detectors import (
    ObservationBatch,
    DetectionReport,
    RadiometerDesign,
    LrtResult,
    Detector,
    AlwaysAccuse,
    NeverAccuse,
    RadiometerDetector,
    ChunkWeightDetector,
    MicroLrtDetector,
    exact_report,
    radiometer_design,
    lrt_exact_micro,
    lrt_accept_region,
    chunk_thresholds,
    segment_thresholds,
    chunk_weight_detector,
)
from .experiments import (
    ObservationSource,
    SpreadCodeLaw,
    ConcentratedCodeLaw,
    MicroCodebook,
    ConcatCodeSource,
    detect_experiment,
    covertness_chain_micro,
)

__all__ = [
    "ObservationBatch",
    "DetectionReport",
    "RadiometerDesign",
    "LrtResult",
    "Detector",
    "AlwaysAccuse",
    "NeverAccuse",
    "RadiometerDetector",
    "ChunkWeightDetector",
    "MicroLrtDetector",
    "exact_report",
    "radiometer_design",
    "lrt_exact_micro",
    "lrt_accept_region",
    "chunk_thresholds",
    "segment_thresholds",
    "chunk_weight_detector",
    "ObservationSource",
    "SpreadCodeLaw",
    "ConcentratedCodeLaw",
    "MicroCodebook",
    "ConcatCodeSource",
    "detect_experiment",
    "covertness_chain_micro",
]
