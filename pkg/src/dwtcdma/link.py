"""End-to-end transceiver chain: multi-user symbols are spread onto
wavelet coefficients by +-1 code rows, synthesized to a time-domain block
by the inverse wavelet transform, passed through AWGN, analyzed back,
despread, demodulated and optionally FEC-decoded.

Signal-to-noise convention: snr_db is Eb/N0 per information bit.  Noise
is calibrated against the empirically measured transmitted energy per
data symbol, so a coded link pays its 12/23 rate penalty in signal
energy and the definition stays correct for the non-orthonormal
biorthogonal transform.  In the optional total-power mode the transmit
signal is scaled by 1/sqrt(U) after calibration, holding total transmit
power constant so each of the U users keeps only a 1/U share of energy.

Randomness: all noise is drawn from the caller's generator, real parts
first then imaginary parts, one pair of draws per link run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fec
from .modem import ModulationScheme, get_scheme, modulate, demodulate
from .spreading import SpreadingMatrix
from .wavelet import WaveletSpec, dwt_forward, dwt_inverse


@dataclass(frozen=True)
class LinkConfig:
    """One experiment point of the transceiver."""

    spreading: SpreadingMatrix
    wavelet: WaveletSpec
    scheme: ModulationScheme
    num_users: int = 7
    coded: bool = False
    snr_db: float = 0.0
    total_power: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scheme", get_scheme(self.scheme))
        sf = self.spreading.spreading_factor
        if not 1 <= self.num_users <= sf:
            raise ValueError(f"num_users must be in 1..{sf}, got {self.num_users}")
        if self.wavelet.block_size % sf:
            raise ValueError(
                f"block size {self.wavelet.block_size} not divisible by spreading factor {sf}"
            )

    @property
    def symbols_per_block(self) -> int:
        return self.wavelet.block_size // self.spreading.spreading_factor


def spread_multiplex(user_symbols, spreading: SpreadingMatrix) -> np.ndarray:
    """Load U x G user symbols onto one coefficient block of length G*SF.

    coefficient[g*SF + j] = (1/sqrt(SF)) * sum_k s[k, g] * code[k, j];
    users are assigned code rows 0..U-1 and share every coefficient
    group, separated only by their codes.
    """
    s = np.asarray(user_symbols, dtype=np.complex128)
    if s.ndim != 2:
        raise ValueError("user_symbols must be a U x G matrix")
    n_users, _ = s.shape
    sf = spreading.spreading_factor
    if n_users > sf:
        raise ValueError(f"{n_users} users exceed the {sf} available code rows")
    rows = spreading.rows[:n_users].astype(np.float64)
    blocks = np.einsum("kg,kj->gj", s, rows) / np.sqrt(sf)
    return blocks.reshape(-1)


def despread(coefficients, spreading: SpreadingMatrix, user: int) -> np.ndarray:
    """Correlate one user's code row against each coefficient group."""
    sf = spreading.spreading_factor
    if not 0 <= user < sf:
        raise ValueError(f"user index {user} out of range 0..{sf - 1}")
    c = np.asarray(coefficients, dtype=np.complex128)
    if c.shape[-1] % sf:
        raise ValueError(f"coefficient length {c.shape[-1]} not divisible by {sf}")
    groups = c.reshape(c.shape[:-1] + (-1, sf))
    return groups @ (spreading.rows[user] / np.sqrt(sf))


def _despread_all(coefficients: np.ndarray, spreading: SpreadingMatrix, n_users: int) -> np.ndarray:
    sf = spreading.spreading_factor
    groups = coefficients.reshape(coefficients.shape[:-1] + (-1, sf))
    rows = spreading.rows[:n_users].astype(np.float64)
    return np.einsum("...gj,kj->k...g", groups, rows) / np.sqrt(sf)


def noise_sigma_for(snr_db: float, config: LinkConfig, mean_symbol_energy: float) -> float:
    """Per-dimension noise standard deviation for a requested Eb/N0.

    Eb = mean_symbol_energy / (bits_per_symbol * R) with code rate
    R = 12/23 when coded and 1 otherwise; N0 = Eb * 10^(-snr_db/10);
    sigma = sqrt(N0/2) for each real dimension of each time-domain sample.
    """
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    if mean_symbol_energy <= 0:
        raise ValueError(f"mean symbol energy must be positive, got {mean_symbol_energy}")
    rate = fec.CODE_RATE if config.coded else 1.0
    eb = mean_symbol_energy / (config.scheme.bits_per_symbol * rate)
    n0 = eb * 10.0 ** (-snr_db / 10.0)
    return float(np.sqrt(n0 / 2.0))


def apply_awgn(signal, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Add independent Gaussian noise of std sigma per real dimension."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    x = np.asarray(signal, dtype=np.complex128)
    if sigma == 0:
        return x.copy()
    return x + sigma * rng.standard_normal(x.shape) + 1j * sigma * rng.standard_normal(x.shape)


def run_link_once(info_bits, config: LinkConfig, rng: np.random.Generator):
    """Run the full chain on one batch of per-user payloads.

    info_bits has shape (num_users, n); every user carries independent
    data.  Returns (decoded bits of the same shape, total bit errors).
    FEC padding to 12, symbol padding to bits_per_symbol and zero-symbol
    padding of the final block are all tracked internally and stripped.
    """
    bits = np.asarray(info_bits, dtype=np.uint8)
    if bits.ndim != 2 or bits.shape[0] != config.num_users or bits.shape[1] == 0:
        raise ValueError(f"info_bits must have shape ({config.num_users}, n) with n >= 1")
    n_users, n_info = bits.shape
    scheme = config.scheme

    if config.coded:
        tx_streams = [fec.encode_stream(bits[k])[0] for k in range(n_users)]
    else:
        tx_streams = [bits[k] for k in range(n_users)]
    n_coded = len(tx_streams[0])

    bps = scheme.bits_per_symbol
    mod_pad = (-n_coded) % bps
    n_symbols = (n_coded + mod_pad) // bps
    symbols = np.empty((n_users, n_symbols), dtype=np.complex128)
    for k, stream in enumerate(tx_streams):
        padded = np.concatenate([stream, np.zeros(mod_pad, dtype=np.uint8)])
        symbols[k] = modulate(padded, scheme)

    group = config.symbols_per_block
    n_blocks = max(1, -(-n_symbols // group))
    slot_pad = n_blocks * group - n_symbols
    if slot_pad:
        symbols = np.pad(symbols, ((0, 0), (0, slot_pad)))

    sf = config.spreading.spreading_factor
    rows = config.spreading.rows[:n_users].astype(np.float64)
    # (blocks, G, U) x (U, SF) -> (blocks, G, SF) -> (blocks, block_size)
    grouped = symbols.reshape(n_users, n_blocks, group)
    coeff_blocks = np.einsum("kbg,kj->bgj", grouped, rows).reshape(n_blocks, -1) / np.sqrt(sf)
    tx_blocks = dwt_inverse(coeff_blocks, config.wavelet)

    tx = tx_blocks.reshape(-1)
    energy = float(np.sum(tx.real**2 + tx.imag**2))
    mean_symbol_energy = energy / max(1, n_users * n_symbols)
    sigma = noise_sigma_for(config.snr_db, config, mean_symbol_energy)
    if config.total_power:
        tx = tx / np.sqrt(n_users)

    rx = apply_awgn(tx, sigma, rng)

    rx_coeffs = dwt_forward(rx.reshape(n_blocks, -1), config.wavelet)
    rx_symbols = _despread_all(rx_coeffs, config.spreading, n_users).reshape(n_users, -1)
    rx_symbols = rx_symbols[:, :n_symbols]

    decoded = np.empty_like(bits)
    for k in range(n_users):
        hard = demodulate(rx_symbols[k], scheme)
        hard = hard[: n_coded]
        if config.coded:
            decoded[k] = fec.decode_stream(hard, n_info)
        else:
            decoded[k] = hard
    errors = int(np.count_nonzero(decoded != bits))
    return decoded, errors
