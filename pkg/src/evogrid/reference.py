"""Frozen reference statistics for the 30 benchmark functions.

Each entry carries the published optimum for the function (None where it is
unknown) and the mean/standard deviation of the best fitness over 50 trials
at the full-scale parameter profile.  The comparison report and the
order-of-magnitude miss count measure achieved results against these
numbers.  A checksum test guards the table against accidental edits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

__all__ = ["ReferenceEntry", "REFERENCE"]


@dataclass(frozen=True)
class ReferenceEntry:
    optimum: Optional[float]
    mean_best: float
    std_best: float


REFERENCE: Dict[int, ReferenceEntry] = {
    1: ReferenceEntry(0.0, 0.0000, 0.0000),
    2: ReferenceEntry(0.0, 0.0000, 0.0000),
    3: ReferenceEntry(0.0, 319.4241, 242.1950),
    4: ReferenceEntry(0.0, 0.9769, 0.2552),
    5: ReferenceEntry(0.0, 28.0095, 1.5109),
    6: ReferenceEntry(0.0, 0.0002, 0.0004),
    7: ReferenceEntry(0.0, 0.0800, 0.2425),
    8: ReferenceEntry(0.0, 0.0031, 0.0042),
    9: ReferenceEntry(None, -12558.8751, 29.1137),
    10: ReferenceEntry(0.0, 0.0000, 0.0000),
    11: ReferenceEntry(-1.0316, -1.0316, 0.0000),
    12: ReferenceEntry(0.3980, 0.3979, 0.0000),
    13: ReferenceEntry(3.0, 3.0000, 0.0000),
    14: ReferenceEntry(0.0, 2.46e5, 1.91e5),
    15: ReferenceEntry(0.0, 0.0000, 0.0000),
    16: ReferenceEntry(0.0, 0.3054, 0.1539),
    17: ReferenceEntry(0.0, 0.0027, 0.0018),
    18: ReferenceEntry(0.0, 2.6454, 0.5052),
    19: ReferenceEntry(-29.0, -28.9299, 0.1942),
    20: ReferenceEntry(0.0, 0.0000, 0.0000),
    21: ReferenceEntry(None, -25.9147, 0.9994),
    22: ReferenceEntry(0.0, 0.0000, 0.0000),
    23: ReferenceEntry(-4930.0, 2834.5739, 1627.9243),
    24: ReferenceEntry(None, -984105.1432, 3769.7065),
    25: ReferenceEntry(0.9, 1.0000, 0.0000),
    26: ReferenceEntry(0.0, 0.1859, 0.0351),
    27: ReferenceEntry(None, -6.25e34, 9.93e30),
    28: ReferenceEntry(-3.5, -3.5000, 0.0000),
    29: ReferenceEntry(None, -28.4301, 0.0179),
    30: ReferenceEntry(None, 13.5723, 11.8222),
}
