"""Binary (23,12) Golay block code: systematic cyclic encoding, perfect
3-error correction via a precomputed syndrome table, and stream framing.

Bit/word conventions: a 12-bit message m maps to the polynomial
m(X) = sum m[j] X^j, and a 23-bit codeword c to c(X) = sum c[j] X^j.
The codeword layout is [11 check bits][12 information bits], i.e. the
check bits occupy X^0..X^10 and the message occupies X^11..X^22.
Packed-integer helpers put list index j at bit j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

N_CODE = 23
K_MSG = 12
N_CHECK = N_CODE - K_MSG
CODE_RATE = K_MSG / N_CODE

# Generator polynomials, bit j = coefficient of X^j.
G1 = 0b110001110101  # 1 + X^2 + X^4 + X^5 + X^6 + X^10 + X^11
G2 = 0b101011100011  # 1 + X + X^5 + X^6 + X^7 + X^9 + X^11


def _poly_mod_g1(value: int, bits: int) -> int:
    """Remainder of value(X) modulo g1(X) over GF(2)."""
    for j in range(bits - 1, N_CHECK - 1, -1):
        if value >> j & 1:
            value ^= G1 << (j - N_CHECK)
    return value


def _poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


@dataclass(frozen=True, eq=False)
class GolayCodecTables:
    """Precomputed encode and syndrome-decode tables.

    syndrome_table maps each of the 2048 syndromes to the unique error
    pattern of weight <= 3 producing it; encode_table maps each 12-bit
    message to its 23-bit codeword; bit_syndromes[j] is the syndrome of
    a single error at position j.
    """

    generator: int
    encode_table: np.ndarray    # (4096,) uint32
    syndrome_table: np.ndarray  # (2048,) uint32
    bit_syndromes: np.ndarray   # (23,) uint32

    def __post_init__(self):
        for arr in (self.encode_table, self.syndrome_table, self.bit_syndromes):
            arr.setflags(write=False)


@lru_cache(maxsize=1)
def codec_tables() -> GolayCodecTables:
    tables = _build_tables()
    _check_tables(tables)
    return tables


def _build_tables() -> GolayCodecTables:
    bit_syndromes = np.array(
        [_poly_mod_g1(1 << j, N_CODE) for j in range(N_CODE)], dtype=np.uint32
    )

    # Parity of each single-bit message, then XOR-combine over set bits.
    basis = np.array(
        [_poly_mod_g1(1 << (N_CHECK + j), N_CODE) for j in range(K_MSG)], dtype=np.uint32
    )
    msgs = np.arange(1 << K_MSG, dtype=np.uint32)
    parity = np.zeros(1 << K_MSG, dtype=np.uint32)
    for j in range(K_MSG):
        parity[(msgs >> j) & 1 == 1] ^= basis[j]
    encode_table = (msgs << N_CHECK) | parity

    syndrome_table = np.zeros(1 << N_CHECK, dtype=np.uint32)
    filled = np.zeros(1 << N_CHECK, dtype=bool)
    for weight in range(4):
        for positions in combinations(range(N_CODE), weight):
            pattern = 0
            syndrome = 0
            for j in positions:
                pattern |= 1 << j
                syndrome ^= int(bit_syndromes[j])
            if filled[syndrome]:
                raise AssertionError("syndrome collision while building table")
            syndrome_table[syndrome] = pattern
            filled[syndrome] = True
    if not filled.all():
        raise AssertionError("syndrome table incomplete")

    return GolayCodecTables(G1, encode_table, syndrome_table, bit_syndromes)


def _check_tables(tables: GolayCodecTables) -> None:
    # (1+X) g1(X) g2(X) = X^23 + 1 over GF(2), checked once at build time.
    if _poly_mul(_poly_mul(0b11, G1), G2) != (1 << N_CODE) | 1:
        raise AssertionError("generator polynomials do not factor X^23 + 1")
    if _syndromes(tables.encode_table, tables).any():
        raise AssertionError("encoder produced a word with nonzero syndrome")


def _syndromes(words: np.ndarray, tables: GolayCodecTables) -> np.ndarray:
    out = np.zeros(words.shape, dtype=np.uint32)
    for j in range(N_CODE):
        out ^= ((words >> j) & 1) * tables.bit_syndromes[j]
    return out


def syndromes(words) -> np.ndarray:
    """Syndrome of each packed 23-bit word (vectorized)."""
    return _syndromes(np.asarray(words, dtype=np.uint32), codec_tables())


def encode_words(messages) -> np.ndarray:
    """Codewords for packed 12-bit messages (vectorized)."""
    messages = np.asarray(messages, dtype=np.uint32)
    if messages.size and messages.max() >= 1 << K_MSG:
        raise ValueError("message value exceeds 12 bits")
    return codec_tables().encode_table[messages]


def decode_words(words) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-codeword decode of packed 23-bit words.

    Returns (messages, corrected) where corrected is the weight of the
    error pattern removed from each word.  The code is perfect, so every
    word decodes; more than 3 channel errors decode to a wrong codeword.
    """
    words = np.asarray(words, dtype=np.uint32)
    if words.size and words.max() >= 1 << N_CODE:
        raise ValueError("received word exceeds 23 bits")
    patterns = codec_tables().syndrome_table[syndromes(words)]
    corrected = np.bitwise_count(patterns).astype(np.int64)
    return ((words ^ patterns) >> N_CHECK).astype(np.uint32), corrected


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack bit rows (n, width) into integers, list index j at bit j."""
    width = bits.shape[1]
    weights = (1 << np.arange(width, dtype=np.uint64))
    return (bits.astype(np.uint64) @ weights).astype(np.uint32)


def _unpack_words(words: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width, dtype=np.uint32)
    return ((words[:, None] >> shifts) & 1).astype(np.uint8)


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).ravel()
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


def encode_block(message) -> np.ndarray:
    """Encode exactly 12 message bits into a 23-bit codeword."""
    m = _as_bits(message)
    if m.size != K_MSG:
        raise ValueError(f"message block must have {K_MSG} bits, got {m.size}")
    word = encode_words(_pack_rows(m[None, :]))
    return _unpack_words(word, N_CODE)[0]


def decode_block(received) -> tuple[np.ndarray, int]:
    """Decode 23 received bits to (12 message bits, corrected count)."""
    r = _as_bits(received)
    if r.size != N_CODE:
        raise ValueError(f"received block must have {N_CODE} bits, got {r.size}")
    msg, corrected = decode_words(_pack_rows(r[None, :]))
    return _unpack_words(msg, K_MSG)[0], int(corrected[0])


def encode_stream(bits) -> tuple[np.ndarray, int]:
    """Encode an arbitrary-length bit stream blockwise.

    The input is padded with 0-bits to a multiple of 12 and each block is
    encoded; returns (coded bits, original length) with original length
    carried out-of-band for the decoder.
    """
    data = _as_bits(bits)
    original_length = data.size
    if original_length == 0:
        return np.zeros(0, dtype=np.uint8), 0
    pad = (-original_length) % K_MSG
    padded = np.concatenate([data, np.zeros(pad, dtype=np.uint8)])
    words = encode_words(_pack_rows(padded.reshape(-1, K_MSG)))
    return _unpack_words(words, N_CODE).ravel(), original_length


def decode_stream(bits, original_length: int) -> np.ndarray:
    """Blockwise decode, concatenate messages, truncate to original_length."""
    data = _as_bits(bits)
    if data.size % N_CODE:
        raise ValueError(f"coded stream length {data.size} is not a multiple of {N_CODE}")
    n_blocks = data.size // N_CODE
    if original_length > K_MSG * n_blocks or original_length < 0:
        raise ValueError(f"original_length {original_length} exceeds stream capacity")
    if data.size == 0:
        return np.zeros(0, dtype=np.uint8)
    msgs, _ = decode_words(_pack_rows(data.reshape(-1, N_CODE)))
    return _unpack_words(msgs, K_MSG).ravel()[:original_length]


def verify_golay_invariants() -> dict[str, int | bool]:
    """Exhaustive codec checks; used by the `fec verify` CLI command.

    Covers: all 4096 codewords x all 2048 weight<=3 patterns decode back
    to their message, cyclic-shift and complement closure, the generator
    factorization of X^23 + 1, and the codeword weight distribution.
    """
    tables = codec_tables()
    codewords = tables.encode_table
    msgs = np.arange(1 << K_MSG, dtype=np.uint32)

    patterns = np.unique(tables.syndrome_table)
    if patterns.size != 1 << N_CHECK:
        raise AssertionError("syndrome table patterns are not distinct")

    failures = 0
    for pattern in tables.syndrome_table:
        decoded, _ = decode_words(codewords ^ pattern)
        failures += int(np.count_nonzero(decoded != msgs))

    shifted_ok = True
    low_mask = (1 << (N_CODE - 1)) - 1
    shifted = codewords.copy()
    for _ in range(N_CODE - 1):
        shifted = ((shifted & low_mask) << 1) | (shifted >> (N_CODE - 1))
        if syndromes(shifted).any():
            shifted_ok = False
            break

    complement_ok = not syndromes(codewords ^ ((1 << N_CODE) - 1)).any()

    weights = np.bitwise_count(codewords)
    distribution = {int(w): int(c) for w, c in zip(*np.unique(weights, return_counts=True))}

    return {
        "cases": int(codewords.size) * int(tables.syndrome_table.size),
        "decode_failures": failures,
        "cyclic_invariance": shifted_ok,
        "complement_invariance": complement_ok,
        "factorization": _poly_mul(_poly_mul(0b11, G1), G2) == (1 << N_CODE) | 1,
        "weight_distribution": distribution,
        "min_nonzero_weight": int(weights[1:].min()) if weights.size > 1 else 0,
    }
