"""Synthetic drift generators and CSV ingestion."""
from .agrawal import AgrawalConfig, AgrawalGenerator, agrawal_label, agrawal_next
from .base import Generator, StreamSchema
from .csvio import CsvStream, read_csv
from .drift import DriftSpec, DriftStream, drift_probability, make_generator
from .led import SEGMENTS, LedConfig, LedGenerator, led_next
from .rbf import RbfConfig, RbfGenerator
from .registry import STREAM_NAMES, make_stream

__all__ = [
    "AgrawalConfig", "AgrawalGenerator", "CsvStream", "DriftSpec", "DriftStream",
    "Generator", "LedConfig", "LedGenerator", "RbfConfig", "RbfGenerator", "SEGMENTS",
    "STREAM_NAMES", "StreamSchema", "agrawal_label", "agrawal_next", "drift_probability",
    "led_next", "make_generator", "make_stream", "read_csv",
]
