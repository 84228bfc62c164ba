import math
from dataclasses import replace

import pytest

from sfadrive.errors import InvalidParameterError
from sfadrive.experiments import (
    RunConfig,
    derive_seed,
    eta_table,
    noise_study,
    phase_transition_scan,
    run_single,
    sweep_qm,
    winner,
)

SMALL = RunConfig(nu_f=20.0, q=0.1, m=9, points=1500, k=3)


class TestRunSingle:
    def test_record_structure(self):
        record = run_single(SMALL)
        assert record.error is None
        assert 0.0 <= record.corr_full <= 1.0
        assert 0.0 <= record.corr_slow <= 1.0
        assert 0.0 <= record.corr_fast <= 1.0
        assert record.eta_y1 > 0 and record.eta_force > 0 and record.eta_slow > 0
        assert record.eta_ratio == pytest.approx(record.eta_y1 / record.eta_force)
        assert len(record.eta_components) == SMALL.k
        assert record.eta_components[0] == pytest.approx(record.eta_y1)
        assert record.rng == "pcg64"

    def test_deterministic(self):
        assert run_single(SMALL) == run_single(SMALL)

    def test_noisy_run_depends_on_seed(self):
        noisy = replace(SMALL, noise_percent=2.0)
        a = run_single(noisy)
        b = run_single(replace(noisy, seed=1))
        assert a.corr_full != b.corr_full

    def test_winner_helper(self):
        record = run_single(SMALL)
        assert winner(record) in ("slow", "full")
        assert (record.corr_slow > record.corr_full) == (winner(record) == "slow")


class TestPhaseTransitionScan:
    GRID = tuple(float(v) for v in range(10, 31, 5))

    def test_transition_matches_records(self):
        scan = phase_transition_scan(SMALL, self.GRID)
        assert len(scan.records) == len(self.GRID)
        qualifying = [
            r.config.nu_f
            for r in scan.records
            if r.error is None and r.corr_slow > r.corr_full
        ]
        assert scan.nu_pt == (qualifying[0] if qualifying else None)

    def test_early_stop_yields_prefix(self):
        full = phase_transition_scan(SMALL, self.GRID)
        stopped = phase_transition_scan(SMALL, self.GRID, early_stop=True)
        assert stopped.nu_pt == full.nu_pt
        assert stopped.records == full.records[: len(stopped.records)]
        if full.nu_pt is not None:
            assert stopped.records[-1].config.nu_f == full.nu_pt

    def test_deterministic(self):
        a = phase_transition_scan(SMALL, self.GRID)
        b = phase_transition_scan(SMALL, self.GRID)
        assert a == b

    @pytest.mark.parametrize("grid", [(), (5.0, 4.0), (-1.0, 2.0), (3.0, 3.0)])
    def test_rejects_bad_grids(self, grid):
        with pytest.raises(InvalidParameterError):
            phase_transition_scan(SMALL, grid)

    def test_predictable_regime_transitions_early(self):
        # long-term predictable map: the slow component wins from the lowest
        # frequencies, so the transition sits below 15
        config = RunConfig(q=0.7, m=19, k=1)
        grid = tuple(float(v) for v in range(10, 16))
        scan = phase_transition_scan(config, grid, early_stop=True)
        assert scan.nu_pt is not None and scan.nu_pt < 15.0


class TestSweepQm:
    def test_cells_in_row_major_order(self):
        cells = sweep_qm([0.1, 0.7], [5, 9], SMALL, nu_grid=(10.0, 15.0, 20.0))
        assert [(c.q, c.m) for c in cells] == [(0.1, 5), (0.1, 9), (0.7, 5), (0.7, 9)]
        assert sweep_qm([0.1, 0.7], [5, 9], SMALL, nu_grid=(10.0, 15.0, 20.0)) == cells

    def test_rank_deficient_cell_produces_error_records(self):
        base = replace(SMALL, degree=1, k=10)
        cells = sweep_qm([0.1], [1], base, nu_grid=(10.0, 12.0))
        cell = cells[0]
        assert cell.nu_pt is None
        assert all(r.error is not None for r in cell.records)
        assert "RankDeficiencyError" in cell.records[0].error

    def test_empty_grids_rejected(self):
        with pytest.raises(InvalidParameterError):
            sweep_qm([], [5], SMALL)
        with pytest.raises(InvalidParameterError):
            sweep_qm([0.1], [], SMALL)


class TestEtaTable:
    def test_small_table(self):
        cells = eta_table([3, 5], [0.1], replace(SMALL, points=800), nu_f=40.0)
        assert [(c.m, c.q) for c in cells] == [(3, 0.1), (5, 0.1)]
        for cell in cells:
            assert cell.nu_f == 40.0
            assert cell.error is None
            assert math.isfinite(cell.eta_y1) and cell.eta_y1 > 0

    def test_deterministic(self):
        base = replace(SMALL, points=800)
        assert eta_table([3], [0.1], base) == eta_table([3], [0.1], base)


class TestNoiseStudy:
    def test_noise_free_baseline_recovers_slow_component(self):
        config = RunConfig(nu_f=56.0, q=0.4, m=19, k=1)
        cells, records = noise_study(config, percents=[0.0], seeds=[0, 7])
        assert len(records) == 2
        for record in records:
            assert record.corr_slow >= 0.98
        assert cells[0].mean_corr_slow >= 0.98

    def test_structure_and_determinism(self):
        config = replace(SMALL, k=1)
        cells, records = noise_study(config, percents=[1.0, 5.0], seeds=[0, 1])
        assert [c.noise_percent for c in cells] == [1.0, 5.0]
        assert all(c.m == SMALL.m for c in cells)
        assert all(len(c.corr_values) == 2 for c in cells)
        assert len(records) == 4
        again, _ = noise_study(config, percents=[1.0, 5.0], seeds=[0, 1])
        assert again == cells

    def test_empty_inputs_rejected(self):
        with pytest.raises(InvalidParameterError):
            noise_study(SMALL, percents=[], seeds=[0])
        with pytest.raises(InvalidParameterError):
            noise_study(SMALL, percents=[1.0], seeds=[])


class TestHigherComponents:
    def test_slowness_jumps_within_first_components(self, record_nu80):
        etas = record_nu80.eta_components
        assert len(etas) == 10
        ratios = [etas[i + 1] / etas[i] for i in range(len(etas) - 1)]
        assert max(ratios) >= 2.0


class TestDeriveSeed:
    def test_deterministic_and_distinct(self):
        assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)
        assert derive_seed(0, 1, 2) != derive_seed(0, 2, 1)
        assert derive_seed(1, 1, 2) != derive_seed(0, 1, 2)
