import math

import pytest

from dwtcdma.sim import (
    BerRecord,
    PointSpec,
    SimConfig,
    link_config_for,
    point_seed,
    preset_config,
    read_results,
    run_point,
    run_sweep,
    theoretical_ber,
    write_outputs,
)

FAST = {"min_bit_errors": 4, "max_info_bits": 4000}


class TestRunPoint:
    def test_noise_free_point_honors_bit_cap(self):
        record = run_point(PointSpec(200.0, "bpsk", "wh", "haar", False, 7),
                           min_bit_errors=10, max_info_bits=30_000, seed=1)
        assert record.ber == 0.0
        assert record.bit_errors == 0
        assert record.bits_sent >= 30_000

    def test_same_seed_reproduces_record(self):
        point = PointSpec(2.0, "qpsk", "gcs", "db2", True, 3)
        a = run_point(point, 50, 100_000, seed=42)
        b = run_point(point, 50, 100_000, seed=42)
        assert a == b  # wall_time excluded from comparison

    def test_meets_error_target(self):
        record = run_point(PointSpec(4.0, "bpsk", "wh", "haar", False, 7),
                           min_bit_errors=150, max_info_bits=10_000_000, seed=7)
        assert record.bit_errors >= 150
        assert record.ber == record.bit_errors / record.bits_sent

    def test_matches_theory_at_4db(self):
        record = run_point(PointSpec(4.0, "bpsk", "wh", "haar", False, 7),
                           min_bit_errors=400, max_info_bits=10_000_000, seed=11)
        theory = theoretical_ber("bpsk", 4.0)
        assert abs(record.ber - theory) / theory < 0.15

    def test_gold_sf16_rejected(self):
        with pytest.raises(ValueError, match="degree 4"):
            run_point(PointSpec(0.0, "bpsk", "gold", "haar", False, 7, 16), 1, 100, 0)

    @pytest.mark.parametrize("scheme,coded", [("bpsk", False), ("qpsk", True),
                                              ("dqpsk", False)])
    def test_ber_non_increasing_in_snr(self, scheme, coded):
        # 2 dB steps shrink BER by well over the Monte-Carlo noise at
        # these operating points, so strict ordering is expected.
        bers = []
        for snr in (0.0, 2.0, 4.0, 6.0, 8.0):
            point = PointSpec(snr, scheme, "wh", "haar", coded, 7)
            bers.append(run_point(point, 250, 10_000_000,
                                  seed=point_seed(31, point)).ber)
        assert all(hi > lo for hi, lo in zip(bers, bers[1:]))


class TestRunSweep:
    def test_grid_count_fig2_shape(self):
        config = SimConfig(snr_db=(0.0, 1.0), schemes=("bpsk",), wavelets=("haar",),
                           user_counts=(7,), **FAST)
        records = run_sweep(config)
        assert len(records) == 2 * 3 * 2  # snr x families x coded

    def test_axis_permutation_invariance(self):
        base = dict(schemes=("bpsk",), families=("wh", "gcs"), wavelets=("haar",),
                    coded_flags=(False,), user_counts=(1,), master_seed=5, **FAST)
        forward = run_sweep(SimConfig(snr_db=(0.0, 2.0), **base))
        backward = run_sweep(SimConfig(snr_db=(2.0, 0.0), **base))
        assert forward == backward

    def test_parallel_equals_serial(self):
        config = SimConfig(snr_db=(0.0, 1.0), families=("wh",), user_counts=(2, 7),
                           master_seed=9, **FAST)
        assert run_sweep(config, jobs=1) == run_sweep(config, jobs=3)

    def test_empty_axis_rejected(self):
        with pytest.raises(ValueError, match="axis"):
            SimConfig(snr_db=())

    def test_user_sweep_grid(self):
        config = preset_config("fig6", **FAST)
        records = run_sweep(config)
        assert len(records) == 7 * 3 * 2
        assert {r.users for r in records} == set(range(1, 8))
        assert {r.snr_db for r in records} == {-10.0}


class TestSeeds:
    def test_point_seed_stable_and_distinct(self):
        p1 = PointSpec(0.0, "bpsk", "wh", "haar", False, 7)
        p2 = PointSpec(1.0, "bpsk", "wh", "haar", False, 7)
        assert point_seed(3, p1) == point_seed(3, p1)
        assert point_seed(3, p1) != point_seed(3, p2)
        assert point_seed(3, p1) != point_seed(4, p1)

    def test_link_config_for_carries_total_power(self):
        cfg = link_config_for(PointSpec(0.0, "bpsk", "wh", "haar", False, 2, 8, True))
        assert cfg.total_power


class TestTheory:
    def test_bpsk_reference_values(self):
        # Q(sqrt(2)) and Q(2.2414) evaluated independently via erfc.
        assert theoretical_ber("bpsk", 0.0) == pytest.approx(
            0.5 * math.erfc(math.sqrt(2) / math.sqrt(2)), rel=1e-12)
        assert theoretical_ber("bpsk", 0.0) == pytest.approx(7.865e-2, rel=1e-3)
        assert theoretical_ber("bpsk", 4.0) == pytest.approx(1.25e-2, rel=1e-2)

    def test_qpsk_equals_bpsk_per_bit(self):
        for snr in (0.0, 3.0, 8.0):
            assert theoretical_ber("qpsk", snr) == theoretical_ber("bpsk", snr)

    def test_dbpsk_closed_form_and_ordering(self):
        gamma = 10 ** 0.4
        assert theoretical_ber("dbpsk", 4.0) == pytest.approx(0.5 * math.exp(-gamma), rel=1e-12)
        assert theoretical_ber("dbpsk", 4.0) == pytest.approx(4.05e-2, rel=1e-2)
        for snr in (0.0, 4.0, 8.0):
            assert theoretical_ber("dbpsk", snr) > theoretical_ber("bpsk", snr)

    def test_dqpsk_between_dbpsk_and_worst(self):
        # Gray DQPSK with differential detection sits above coherent QPSK
        # and (at equal Eb/N0) above DBPSK as well.
        for snr in (2.0, 6.0, 10.0):
            assert theoretical_ber("dqpsk", snr) > theoretical_ber("qpsk", snr)
        assert theoretical_ber("dqpsk", 30.0) < 1e-20

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError):
            theoretical_ber("16qam", 4.0)


class TestOutputs:
    @staticmethod
    def records():
        return [
            BerRecord(0.0, "bpsk", "wh", "haar", False, 7, 1000, 80, 0.08, 17),
            BerRecord(0.0, "bpsk", "wh", "haar", True, 7, 1500, 30, 0.02, 18),
        ]

    def test_csv_roundtrip(self, tmp_path):
        write_outputs(self.records(), tmp_path)
        parsed = read_results(tmp_path / "results.csv")
        assert parsed == self.records()

    def test_csv_header_schema(self, tmp_path):
        write_outputs([], tmp_path)
        text = (tmp_path / "results.csv").read_text()
        assert text == "snr_db,scheme,family,wavelet,coded,users,bits_sent,bit_errors,ber,seed\n"

    def test_manifest_contents(self, tmp_path):
        config = SimConfig(master_seed=1234, **FAST)
        write_outputs([], tmp_path, config, preset=None)
        manifest = (tmp_path / "manifest.txt").read_text()
        assert "master_seed: 1234" in manifest
        assert "artifact_version:" in manifest

    def test_plot_file_shape_fig2(self, tmp_path):
        config = preset_config("fig2", master_seed=0, snr_db=tuple(float(s) for s in range(21)),
                               **FAST)
        points = config.points()
        records = [BerRecord(p.snr_db, p.scheme, p.family, p.wavelet, p.coded,
                             p.users, 100, 1, 0.01, 0) for p in points]
        write_outputs(records, tmp_path, config, preset="fig2")
        lines = [l for l in (tmp_path / "fig2.dat").read_text().splitlines()
                 if not l.startswith("#")]
        assert len(lines) == 21
        assert all(len(line.split()) == 7 for line in lines)

    def test_write_failure_has_path_context(self, tmp_path):
        target = tmp_path / "blocked"
        target.write_text("a file, not a directory")
        with pytest.raises(OSError, match="blocked"):
            write_outputs(self.records(), target)


class TestPresets:
    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset_config("fig9")

    def test_preset_axes(self):
        config = preset_config("fig3")
        assert config.schemes == ("dbpsk",)
        assert len(config.snr_db) == 21
        assert preset_config("fig7").snr_db == (0.0,)
