"""Key and signature sizes of post-quantum signature schemes.

Sizes are in kilobits, security levels are against classical attacks.
The ``total_kb`` column keeps the published rounding, so it does not
always equal ``pk_kb + sig_kb`` (RAINBOW lists 305).
"""

from __future__ import annotations

from dataclasses import dataclass

FAMILIES = {"I": "lattice", "II": "multivariate", "III": "hash", "IV": "code"}
SORT_KEYS = ("security_bits", "pk_kb", "sig_kb", "total_kb")


@dataclass(frozen=True)
class PqSignatureRecord:
    type_code: str
    name: str
    security_bits: int
    pk_kb: float
    sig_kb: float
    total_kb: float

    @property
    def family(self) -> str:
        return FAMILIES[self.type_code.split(".")[0]]


TABLE = (
    PqSignatureRecord("I.1", "GPV", 100, 300, 240, 540),
    PqSignatureRecord("I.2", "LYU", 100, 65, 103, 168),
    PqSignatureRecord("I.3", "BLISS", 128, 7, 5, 12),
    PqSignatureRecord("I.4", "DILITHIUM", 138, 11.8, 21.6, 33.4),
    PqSignatureRecord("II.1", "RAINBOW", 160, 305, 0.244, 305),
    PqSignatureRecord("III.1", "LMS", 128, 0.448, 20, 20.5),
    PqSignatureRecord("III.2", "XMSS", 128, 0.544, 20, 20.5),
    PqSignatureRecord("III.3", "SPHINCS", 128, 8, 328, 336),
    PqSignatureRecord("III.4", "NSW", 128, 0.256, 36, 36),
    PqSignatureRecord("IV.1", "CFS", 83, 9216, 0.1, 9216),
    PqSignatureRecord("IV.2", "QUARTZ", 80, 568, 0.128, 568),
)


def sorted_table(key: str = "total_kb", descending: bool = False) -> list[PqSignatureRecord]:
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}; expected one of {', '.join(SORT_KEYS)}")
    return sorted(TABLE, key=lambda r: getattr(r, key), reverse=descending)
