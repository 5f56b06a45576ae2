"""Bit <-> unit-energy complex symbol mapping for BPSK, QPSK, DBPSK and
DQPSK with hard-decision demodulation.

Mappings:
  BPSK   bit 0 -> +1, bit 1 -> -1.
  QPSK   Gray map, pair (b0, b1) -> ((1-2*b0) + 1j*(1-2*b1)) / sqrt(2).
  DBPSK  s[n] = s[n-1] * (1-2*b[n]) against an implicit reference +1.
  DQPSK  s[n] = s[n-1] * exp(1j*delta), quarter-turn increments Gray-coded
         as (0,0)->0, (0,1)->pi/2, (1,1)->pi, (1,0)->3*pi/2, against an
         implicit reference (1+1j)/sqrt(2).

The differential reference symbol is never transmitted; the receiver
assumes the same constellation point, so frame lengths stay exact.
Differential phase chains are tracked as integer quarter/half turns and
only converted to complex values once, which keeps long streams free of
cumulative-product drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ModulationScheme:
    name: str
    bits_per_symbol: int
    differential: bool


SCHEMES = {
    "bpsk": ModulationScheme("bpsk", 1, False),
    "qpsk": ModulationScheme("qpsk", 2, False),
    "dbpsk": ModulationScheme("dbpsk", 1, True),
    "dqpsk": ModulationScheme("dqpsk", 2, True),
}

# Quarter-turn lookup: i^k for k = 0..3.
_QUARTER_TURNS = np.array([1, 1j, -1, -1j], dtype=np.complex128)
_DQPSK_REF = (1 + 1j) / _SQRT2
# Gray code of the bit pair (b0, b1) packed as 2*b0 + b1 -> turn count.
_GRAY_TO_TURNS = np.array([0, 1, 3, 2], dtype=np.int64)
_TURNS_TO_BITS = np.zeros((4, 2), dtype=np.uint8)
for _pair, _turn in enumerate(_GRAY_TO_TURNS):
    _TURNS_TO_BITS[_turn] = (_pair >> 1, _pair & 1)


def get_scheme(scheme) -> ModulationScheme:
    if isinstance(scheme, ModulationScheme):
        return scheme
    try:
        return SCHEMES[str(scheme).lower()]
    except KeyError:
        raise ValueError(f"unknown modulation scheme {scheme!r} (choose from {sorted(SCHEMES)})")


def bits_per_symbol(scheme) -> int:
    return get_scheme(scheme).bits_per_symbol


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.int64).ravel()
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bits must be 0 or 1")
    return arr


def modulate(bits, scheme) -> np.ndarray:
    """Map a bit stream to unit-energy complex symbols."""
    sch = get_scheme(scheme)
    b = _as_bits(bits)
    if b.size % sch.bits_per_symbol:
        raise ValueError(
            f"bit count {b.size} is not divisible by {sch.bits_per_symbol} ({sch.name})"
        )
    if sch.name == "bpsk":
        return (1 - 2 * b).astype(np.complex128)
    if sch.name == "qpsk":
        pairs = b.reshape(-1, 2)
        return ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1])) / _SQRT2
    if sch.name == "dbpsk":
        # Sign chain in exact integers: s[n] = prod of (1-2b) up to n.
        return np.cumprod(1 - 2 * b).astype(np.complex128)
    # dqpsk: accumulate quarter turns modulo 4 from the reference.
    pairs = b.reshape(-1, 2)
    turns = _GRAY_TO_TURNS[2 * pairs[:, 0] + pairs[:, 1]]
    return _DQPSK_REF * _QUARTER_TURNS[np.cumsum(turns) % 4]


def demodulate(symbols, scheme) -> np.ndarray:
    """Hard-decision demodulation; exact inverse of modulate on clean symbols.

    Coherent minimum-distance decisions for BPSK/QPSK; differential
    detection of r[n]*conj(r[n-1]) against the implicit reference for
    DBPSK/DQPSK.
    """
    sch = get_scheme(scheme)
    r = np.asarray(symbols, dtype=np.complex128).ravel()
    if sch.name == "bpsk":
        return (r.real < 0).astype(np.uint8)
    if sch.name == "qpsk":
        return np.column_stack([(r.real < 0), (r.imag < 0)]).astype(np.uint8).ravel()
    if r.size == 0:
        return np.zeros(0, dtype=np.uint8)
    prev = np.concatenate([[1.0 if sch.name == "dbpsk" else _DQPSK_REF], r[:-1]])
    products = r * np.conj(prev)
    if sch.name == "dbpsk":
        return (products.real < 0).astype(np.uint8)
    turns = np.round(np.angle(products) / (np.pi / 2)).astype(np.int64) % 4
    return _TURNS_TO_BITS[turns].ravel()
