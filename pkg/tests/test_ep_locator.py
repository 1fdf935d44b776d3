"""Exceptional point location, the mother EP, and strong-coupling formulas."""

import numpy as np
import pytest

from epspectra.ep_locator import (
    EPLocationError,
    complex_pair_count,
    ep_map,
    locate_eps,
    mother_ep_check,
    strong_coupling_predictions,
    strong_coupling_validation,
    width_split_heuristic,
)


class TestPairCount:
    def test_unbroken_region(self):
        assert complex_pair_count(0.5, particles=11, v=1.0, c=0.0) == 0

    def test_fully_broken_c0(self):
        # N odd: no n = 0 level, so all twelve values pair up
        assert complex_pair_count(1.5, particles=11, v=1.0, c=0.0) == 6

    def test_partially_broken_with_interaction(self):
        assert complex_pair_count(1.0, particles=11, v=1.0, c=0.1 / 11) == 4


class TestLocateEps:
    def test_n11_census(self):
        recs = locate_eps(11, 1.0, 0.1 / 11)
        assert len(recs) == 6
        assert sum(1 for r in recs if r.gamma < 1.0) == 4
        assert sum(1 for r in recs if r.gamma > 1.0) == 2
        assert all(r.order == 2 and r.method == "pair-count-bisection" for r in recs)
        assert all(r.bracket_width <= 1e-9 for r in recs)
        assert [r.gamma for r in recs] == sorted(r.gamma for r in recs)

    def test_n2_limits_to_mother_ep(self):
        # as c -> 0 the single second-order EP approaches gamma = v
        for c in (1e-5, 1e-8):
            recs = locate_eps(2, 1.0, c, gamma_range=(0.0, 2.0))
            assert len(recs) == 1
            assert abs(recs[0].gamma - 1.0) < 2e-3

    def test_coarse_cell_resolved_by_splitting(self):
        # a 2-point scan leaves all six transitions in one cell; positions
        # agree with the fine scan within the threshold-noise band (the
        # bracket is 1e-9 but the count flips inside a ~1e-6 noise window)
        fine = locate_eps(11, 1.0, 0.1 / 11)
        coarse = locate_eps(11, 1.0, 0.1 / 11, coarse_points=2)
        assert len(coarse) == 6
        for a, b in zip(fine, coarse):
            assert abs(a.gamma - b.gamma) <= 2e-6

    def test_refinement_limit_errors(self):
        with pytest.raises(EPLocationError):
            locate_eps(11, 1.0, 0.1 / 11, coarse_points=2, max_splits=1)


class TestWidthSplitHeuristic:
    @pytest.mark.parametrize("c", [0.1 / 11, 0.5 / 11])
    def test_agreement_with_pair_count(self, c):
        a = locate_eps(11, 1.0, c)
        b = width_split_heuristic(11, 1.0, c)
        assert len(a) == len(b)
        assert all(x.method == "width-split-heuristic" for x in b)
        for ra, rb in zip(a, b):
            assert abs(ra.gamma - rb.gamma) <= 1e-3

    def test_c0_single_detection_at_one(self):
        recs = width_split_heuristic(11, 1.0, 0.0, gamma_range=(0.0, 2.0))
        assert {round(r.gamma, 4) for r in recs} == {1.0}

    def test_threshold_stability(self):
        base = width_split_heuristic(11, 1.0, 0.1 / 11, threshold=1e-4)
        for thr in (1e-5, 1e-3):
            alt = width_split_heuristic(11, 1.0, 0.1 / 11, threshold=thr)
            for ra, rb in zip(base, alt):
                assert abs(ra.gamma - rb.gamma) < 1e-3


class TestEPMap:
    def test_n11_curves(self):
        grid = np.geomspace(0.05 / 11, 80.0 / 11, 6)
        emap = ep_map(11, 1.0, grid)
        assert all(len(recs) == 6 for recs in emap.records)
        # all but the top curve decrease toward gamma = 0 at large c
        for index in range(5):
            curve = [g for _, g in emap.curve(index)]
            assert curve[0] > curve[-1]
        top = [g for _, g in emap.curve(5)]
        assert top[-1] > top[0]
        assert top[-1] < 6.5  # heading toward the v (N+1)/2 = 6 asymptote

    def test_monotone_shrinkage_of_first_ep(self):
        # the exact-PT region shrinks with interaction strength; below the
        # classification resolution (gamma ~ 1e-3) the measured position is
        # a detection floor rather than the true EP, so only require it to
        # stay tiny there
        grid = np.geomspace(0.1 / 11, 80.0 / 11, 6)
        emap = ep_map(11, 1.0, grid)
        first = [g for _, g in emap.curve(0)]
        for a, b in zip(first, first[1:]):
            assert b < a or b < 1e-3
        assert first[0] > 0.7 and first[-1] < 1e-3

    def test_single_c_equals_locate(self):
        emap = ep_map(11, 1.0, [0.1 / 11])
        direct = locate_eps(11, 1.0, 0.1 / 11)
        assert [r.gamma for r in emap.records[0]] == [r.gamma for r in direct]

    def test_positive_grid_required(self):
        with pytest.raises(ValueError):
            ep_map(5, 1.0, [0.0, 0.1])


class TestMotherEP:
    @pytest.mark.parametrize("N,v", [(1, 1), (5, 1), (5, 2), (11, 1)])
    def test_passes(self, N, v):
        report = mother_ep_check(N, v)
        assert report.passed
        assert report.nilpotent_exact and report.power_n_nonzero
        assert report.max_modulus_charpoly_route <= report.modulus_tolerance

    def test_dense_route_reported(self):
        report = mother_ep_check(11, 1)
        # the dense solver cannot resolve an (N+1)-fold zero; its moduli are
        # reported for comparison and are far above the charpoly route
        assert report.max_modulus_dense_route > report.max_modulus_charpoly_route


class TestSquareRootScaling:
    def test_splitting_grows_as_square_root(self):
        # just above the first EP only one pair exists; its width must obey
        # the square-root law (a diabolical point would scale linearly)
        recs = locate_eps(11, 1.0, 0.1 / 11)
        g1 = recs[0].gamma
        from epspectra.operators import ModelParams, build_hamiltonian
        from epspectra import spectra

        deltas = np.geomspace(1e-6, 1e-3, 7)
        widths = []
        for d in deltas:
            H = build_hamiltonian(
                ModelParams(particles=11, gamma=g1 + d, v=1.0, c=0.1 / 11), "orthonormal"
            )
            widths.append(np.abs(spectra.eigenvalues(H).imag).max())
        slope = np.polyfit(np.log(deltas), np.log(widths), 1)[0]
        assert abs(slope - 0.5) <= 0.05


class TestStrongCoupling:
    def test_odd_n_defect_pair_and_asymptote(self):
        preds = strong_coupling_predictions(11, 1.0, 2.0)
        halves = [p for p in preds if abs(abs(p.m_z) - 0.5) < 1e-12]
        assert len(halves) == 2
        assert all(p.gamma_inf == pytest.approx(6.0) for p in halves)
        assert all(abs(p.e1.imag) < 1e-12 for p in halves)  # real below the asymptote
        others = [p for p in preds if abs(abs(p.m_z) - 0.5) >= 1e-12]
        assert all(p.e1.real == 0 for p in others)
        assert all(p.gamma_inf is None for p in others)

    def test_even_n_no_real_pair(self):
        preds = strong_coupling_predictions(10, 1.0, 1.0)
        assert all(p.gamma_inf is None for p in preds)
        assert all(p.e1.real == 0 for p in preds)  # purely imaginary corrections
        zero_state = [p for p in preds if p.m_z == 0]
        assert len(zero_state) == 1 and zero_state[0].e1 == 0

    def test_gamma_zero_real_corrections(self):
        preds = strong_coupling_predictions(7, 1.0, 0.0)
        assert all(abs(p.e1.imag) < 1e-12 for p in preds)

    def test_validation_n11(self):
        report = strong_coupling_validation(11, 1.0, 2.0, 200.0)
        assert report.passed
        assert len(report.levels) == 12

    def test_validation_zero_state(self):
        report = strong_coupling_validation(10, 1.0, 1.0, 200.0)
        assert report.passed
        zero_levels = [lv for lv in report.levels if lv[0] == 0]
        assert zero_levels and all(err <= bound for _, _, err, bound in zero_levels)

    def test_v_zero_exact(self):
        report = strong_coupling_validation(6, 0.0, 1.3, 50.0)
        assert all(err <= 1e-10 for _, _, err, _ in report.levels)
