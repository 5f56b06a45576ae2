import numpy as np
import pytest

from dwtcdma.link import (
    LinkConfig,
    apply_awgn,
    despread,
    noise_sigma_for,
    run_link_once,
    spread_multiplex,
)
from dwtcdma.spreading import build_matrix, walsh_hadamard
from dwtcdma.wavelet import WaveletSpec


def config(family="wh", wavelet="haar", scheme="bpsk", users=7, coded=False,
           snr_db=300.0, sf=8, total_power=False):
    return LinkConfig(build_matrix(family, sf), WaveletSpec(wavelet), scheme,
                      users, coded, snr_db, total_power)


class TestSpreadMultiplex:
    def test_single_user_row_zero(self):
        sm = walsh_hadamard(8)
        coeffs = spread_multiplex(np.array([[1.0 + 0j]]), sm)
        assert np.allclose(coeffs[:8], 1 / np.sqrt(8))
        assert np.all(coeffs[8:] == 0) if coeffs.size > 8 else True
        assert coeffs.size == 8

    def test_two_user_roundtrip_exact(self):
        sm = walsh_hadamard(8)
        rng = np.random.default_rng(2)
        symbols = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        coeffs = spread_multiplex(symbols, sm)
        for k in range(2):
            assert np.allclose(despread(coeffs, sm, k), symbols[k], atol=1e-12)

    @pytest.mark.parametrize("family", ["wh", "gold", "gcs"])
    def test_seven_user_symbol_roundtrip(self, family):
        sm = build_matrix(family, 8)
        rng = np.random.default_rng(17)
        symbols = rng.standard_normal((7, 32)) + 1j * rng.standard_normal((7, 32))
        coeffs = spread_multiplex(symbols, sm)
        worst = max(
            float(np.max(np.abs(despread(coeffs, sm, k) - symbols[k])))
            for k in range(7)
        )
        assert worst < 1e-12

    def test_block_energy_preserved(self):
        sm = walsh_hadamard(8)
        rng = np.random.default_rng(3)
        symbols = rng.standard_normal((7, 32)) + 1j * rng.standard_normal((7, 32))
        coeffs = spread_multiplex(symbols, sm)
        assert abs(np.sum(np.abs(coeffs) ** 2) - np.sum(np.abs(symbols) ** 2)) < 1e-10

    def test_rejects_too_many_users(self):
        with pytest.raises(ValueError, match="users exceed"):
            spread_multiplex(np.ones((9, 2), dtype=complex), walsh_hadamard(8))


class TestDespread:
    def test_all_zero_coefficients(self):
        assert np.all(despread(np.zeros(256, dtype=complex), walsh_hadamard(8), 3) == 0)

    def test_interferer_leaves_user_unchanged(self):
        sm = walsh_hadamard(8)
        rng = np.random.default_rng(4)
        own = rng.standard_normal((1, 32)) + 1j * rng.standard_normal((1, 32))
        interferer = rng.standard_normal((1, 32)) + 1j * rng.standard_normal((1, 32))
        alone = despread(spread_multiplex(own, sm), sm, 0)
        both = despread(spread_multiplex(np.vstack([own, interferer]), sm), sm, 0)
        assert np.max(np.abs(alone - both)) < 1e-12

    def test_rejects_bad_user_index(self):
        with pytest.raises(ValueError, match="out of range"):
            despread(np.zeros(256, dtype=complex), walsh_hadamard(8), 8)


class TestNoiseSigma:
    def test_high_snr_limit(self):
        cfg = config()
        assert noise_sigma_for(300.0, cfg, 1.0) < 1e-15
        assert noise_sigma_for(40.0, cfg, 1.0) < noise_sigma_for(0.0, cfg, 1.0)

    def test_rate_penalty_factor(self):
        uncoded = noise_sigma_for(5.0, config(coded=False), 1.0)
        coded = noise_sigma_for(5.0, config(coded=True), 1.0)
        assert coded**2 / uncoded**2 == pytest.approx(23 / 12, rel=1e-12)

    def test_bits_per_symbol_scaling(self):
        bpsk = noise_sigma_for(5.0, config(scheme="bpsk"), 1.0)
        qpsk = noise_sigma_for(5.0, config(scheme="qpsk"), 1.0)
        assert bpsk**2 / qpsk**2 == pytest.approx(2.0, rel=1e-12)

    def test_rejects_bad_energy(self):
        with pytest.raises(ValueError, match="energy"):
            noise_sigma_for(5.0, config(), 0.0)
        with pytest.raises(ValueError):
            noise_sigma_for(float("inf"), config(), 1.0)


class TestApplyAwgn:
    def test_zero_sigma_identity(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        assert np.array_equal(apply_awgn(x, 0.0, rng), x)

    def test_sample_variance(self):
        rng = np.random.default_rng(6)
        x = np.zeros(1_000_000, dtype=complex)
        noisy = apply_awgn(x, 0.7, rng)
        assert np.var(noisy.real) == pytest.approx(0.49, rel=0.01)
        assert np.var(noisy.imag) == pytest.approx(0.49, rel=0.01)

    def test_deterministic_given_seed(self):
        x = np.ones(100, dtype=complex)
        a = apply_awgn(x, 0.3, np.random.default_rng(7))
        b = apply_awgn(x, 0.3, np.random.default_rng(7))
        assert np.array_equal(a, b)

    def test_rejects_negative_sigma(self):
        with pytest.raises(ValueError):
            apply_awgn(np.zeros(4, dtype=complex), -0.1, np.random.default_rng(0))


class TestLinkConfig:
    def test_rejects_too_many_users(self):
        with pytest.raises(ValueError, match="num_users"):
            config(users=9)

    def test_rejects_incompatible_block(self):
        with pytest.raises(ValueError, match="divisible"):
            LinkConfig(walsh_hadamard(8), WaveletSpec("haar", 4, 2), "bpsk", 1)

    def test_symbols_per_block(self):
        assert config(sf=8).symbols_per_block == 32
        assert config(sf=32, users=7).symbols_per_block == 8


class TestRunLinkOnce:
    @pytest.mark.parametrize("family", ["wh", "gold", "gcs"])
    @pytest.mark.parametrize("scheme", ["bpsk", "qpsk", "dbpsk", "dqpsk"])
    def test_noiseless_roundtrip(self, family, scheme):
        cfg = config(family=family, scheme=scheme)
        rng = np.random.default_rng(8)
        bits = rng.integers(0, 2, (7, 150), dtype=np.uint8)
        decoded, errors = run_link_once(bits, cfg, rng)
        assert errors == 0
        assert np.array_equal(decoded, bits)

    @pytest.mark.parametrize("wavelet", ["haar", "db2", "bior22"])
    @pytest.mark.parametrize("coded", [False, True])
    def test_noiseless_roundtrip_wavelets(self, wavelet, coded):
        cfg = config(wavelet=wavelet, coded=coded)
        rng = np.random.default_rng(9)
        bits = rng.integers(0, 2, (7, 97), dtype=np.uint8)
        _, errors = run_link_once(bits, cfg, rng)
        assert errors == 0

    def test_single_user_odd_payload(self):
        cfg = config(users=1, scheme="qpsk", coded=True)
        rng = np.random.default_rng(10)
        bits = rng.integers(0, 2, (1, 1), dtype=np.uint8)
        decoded, errors = run_link_once(bits, cfg, rng)
        assert errors == 0 and decoded.shape == (1, 1)

    def test_user_output_independent_of_interferers(self):
        cfg = config(users=3)
        rng = np.random.default_rng(11)
        own = rng.integers(0, 2, (1, 200), dtype=np.uint8)
        runs = []
        for seed in (100, 101):
            other = np.random.default_rng(seed).integers(0, 2, (2, 200), dtype=np.uint8)
            bits = np.vstack([own, other])
            decoded, _ = run_link_once(bits, cfg, np.random.default_rng(12))
            runs.append(decoded[0].copy())
        assert np.array_equal(runs[0], runs[1])
        assert np.array_equal(runs[0], own[0])

    def test_noise_draw_determinism(self):
        cfg = config(snr_db=3.0)
        bits = np.random.default_rng(13).integers(0, 2, (7, 300), dtype=np.uint8)
        d1, e1 = run_link_once(bits, cfg, np.random.default_rng(14))
        d2, e2 = run_link_once(bits, cfg, np.random.default_rng(14))
        assert e1 == e2 and np.array_equal(d1, d2)

    def test_coded_beats_uncoded_at_high_snr(self):
        rng_bits = np.random.default_rng(15)
        bits = rng_bits.integers(0, 2, (7, 4320), dtype=np.uint8)
        results = {}
        for coded in (False, True):
            cfg = config(coded=coded, snr_db=7.0)
            total = 0
            for trial in range(12):
                _, errors = run_link_once(bits, cfg, np.random.default_rng(500 + trial))
                total += errors
            results[coded] = total
        assert results[True] < results[False]

    def test_rejects_wrong_payload_shape(self):
        cfg = config(users=7)
        with pytest.raises(ValueError, match="info_bits"):
            run_link_once(np.zeros((3, 10), dtype=np.uint8), cfg, np.random.default_rng(0))
        with pytest.raises(ValueError, match="info_bits"):
            run_link_once(np.zeros((7, 0), dtype=np.uint8), cfg, np.random.default_rng(0))

    def test_total_power_mode_scales_noise_share(self):
        # With total power fixed, 7 users at 0 dB see much more noise per
        # user than a single user does.
        errors = {}
        for users in (1, 7):
            cfg = config(users=users, snr_db=0.0, total_power=True)
            rng = np.random.default_rng(16)
            bits = rng.integers(0, 2, (users, 3000), dtype=np.uint8)
            _, err = run_link_once(bits, cfg, rng)
            errors[users] = err / bits.size
        assert errors[7] > 2 * errors[1]
