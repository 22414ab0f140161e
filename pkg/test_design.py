"""Tests for design formulas, the k1 solver, parameter derivation and the analysis oracles."""
import math

import numpy as np
import pytest

from src.design import (
    ChannelModel,
    CornerRule,
    DesignMode,
    DesignOverrides,
    TailSide,
    aux_f,
    aux_g,
    aux_g_all,
    binary_entropy,
    chernoff_bound,
    contour_grid,
    default_l2,
    derive_params,
    design_k2,
    design_ru,
    gaussian_q,
    gaussian_q_inverse,
    rho_schedule,
    solve_k1,
    verify_corner_points,
    verify_tail_bound,
    verify_taylor_identity,
)
from src.exceptions import ConfigurationError, ContractError, DomainError, InfeasibleDesignError


class TestFormulas:
    """Closed-form quantities at known points."""

    def test_k2_paper(self):
        assert design_k2(0.25, 0.1) == pytest.approx(0.17320508, abs=1e-8)

    def test_k2_optimal_is_larger(self):
        optimal = design_k2(0.25, 0.1, DesignMode.OPTIMAL)
        assert optimal == pytest.approx(0.2176517, abs=1e-6)
        assert optimal > design_k2(0.25, 0.1, DesignMode.PAPER)

    def test_k2_paper_never_exceeds_optimal(self):
        for q in (0.05, 0.1, 0.25, 0.4, 0.45):
            for eps in np.linspace(0.01, 0.3, 30):
                assert design_k2(q, eps) <= design_k2(q, eps, DesignMode.OPTIMAL)

    def test_k2_optimal_zero_budget(self):
        assert design_k2(0.25, 0.0, "optimal") == 0.0

    def test_ru(self):
        assert design_ru(0.05, 0.25, 0.1) == pytest.approx(0.662188, abs=1e-6)

    def test_ru_requires_p_below_q(self):
        with pytest.raises(DomainError):
            design_ru(0.3, 0.25, 0.1)

    def test_unknown_mode(self):
        with pytest.raises(ContractError):
            design_k2(0.25, 0.1, "sharp")

    def test_aux_f_values(self):
        assert aux_f(0.0) == 0.0
        assert aux_f(1.0) == pytest.approx(0.557305, abs=1e-6)
        assert aux_f(0.5) == pytest.approx(0.156096, abs=1e-6)
        assert np.allclose(aux_f(np.array([0.0, 1.0])), [0.0, 0.557305], atol=1e-6)

    def test_aux_f_domain(self):
        with pytest.raises(DomainError):
            aux_f(-1.0)

    def test_g_corners_agree_at_origin(self):
        values = [aux_g(j, 0.25, 0.1, 0.0, 0.0) for j in (1, 2, 3, 4)]
        assert values == pytest.approx([-0.137263] * 4, abs=1e-6)

    def test_g_stack_shape(self):
        w = np.linspace(0.1, 0.9, 5)
        assert aux_g_all(0.25, 0.1, w[:, None], w[None, :]).shape == (4, 5, 5)

    def test_g_bad_corner_and_domain(self):
        with pytest.raises(ContractError):
            aux_g(5, 0.25, 0.1, 0.1, 0.1)
        with pytest.raises(DomainError):
            aux_g(1, 0.25, 0.1, 1.0, 0.1)

    def test_gaussian_tail_inverse(self):
        assert gaussian_q(0.0) == pytest.approx(0.5)
        assert gaussian_q_inverse(0.5) == 0.0
        x = gaussian_q_inverse(0.025)
        assert x == pytest.approx(1.959964, abs=1e-5)
        assert gaussian_q(x) == pytest.approx(0.025, rel=1e-8)
        with pytest.raises(DomainError):
            gaussian_q_inverse(0.7)

    def test_binary_entropy(self):
        assert binary_entropy(0.5) == pytest.approx(1.0)
        assert binary_entropy(0.0) == 0.0


class TestK1Solver:

    def test_reference_channel(self, k1_solution):
        assert k1_solution.k1 == pytest.approx(21.14, abs=0.05)
        assert k1_solution.binding_constraint == "phi2"
        assert 0.0 < k1_solution.d10 < 1.0 and 0.0 < k1_solution.d11 < 1.0
        assert 1 <= k1_solution.corner_index <= 4

    def test_certificates_hold(self, k1_solution, channel):
        assert all(k1_solution.certificates(channel.delta))

    def test_printed_rule_never_needs_more(self, channel, k1_solution):
        printed = solve_k1(channel, corner_rule=CornerRule.PRINTED)
        assert printed.k1 <= k1_solution.k1 + 0.05
        assert printed.corner_rule == "printed"

    def test_infeasible_phi1(self):
        # p just below q: every corner term outweighs r_u on the whole grid
        with pytest.raises(InfeasibleDesignError) as exc:
            solve_k1(ChannelModel(p=0.2499, q=0.25, eps_d=0.1))
        assert exc.value.constraint == "phi1"

    @pytest.mark.slow
    def test_halving_the_grid_moves_k1_by_under_one_percent(self, channel, k1_solution):
        finer = solve_k1(channel, grid_step=0.005, refine_step=5e-5)
        assert abs(finer.k1 - k1_solution.k1) < 0.01 * k1_solution.k1

    def test_solution_serializes(self, k1_solution):
        data = k1_solution.to_dict()
        assert data["mode"] == "paper"
        assert len(data["phi_values"]) == 3


class TestParameters:

    def test_channel_invariants(self):
        with pytest.raises(ConfigurationError, match="requires p < q"):
            ChannelModel(p=0.3, q=0.25, eps_d=0.1)
        with pytest.raises(ConfigurationError):
            ChannelModel(p=0.1, q=0.5, eps_d=0.1)
        with pytest.raises(ConfigurationError):
            ChannelModel(p=0.05, q=0.25, eps_d=0.0)

    def test_default_l2(self):
        assert default_l2(32, 131072) == (8, True)
        assert default_l2(4, 1_000_000) == (2, True)
        assert default_l2(4, 2 ** 60) == (2, False)

    def test_golden_derivation(self, channel, k1_solution):
        params = derive_params(channel, 32, 4096, overrides=DesignOverrides(m=5, l2=8, rho=0.03), k1_solution=k1_solution)
        assert params.n == 131072
        assert params.l1 + params.l2 == params.L
        assert params.l1 == 24
        assert params.message_bits == 120
        assert params.r_eff == pytest.approx(24 * 5 / math.sqrt(131072))
        assert set(params.off_paper) >= {"m", "l2", "rho"}

    def test_default_l2_is_flagged(self, channel, k1_solution):
        params = derive_params(channel, 32, 4096, k1_solution=k1_solution)
        assert params.l2 == 8
        assert "l2_override" in params.off_paper
        assert params.rho == pytest.approx(k1_solution.k2 / math.sqrt(131072))

    def test_field_degree_clamp_is_recorded(self, channel, k1_solution):
        params = derive_params(channel, 32, 4096, k1_solution=k1_solution)
        assert params.m <= 20
        if params.m == 20:
            assert "m_clamped" in params.off_paper

    def test_small_scale_contract(self, channel):
        with pytest.raises(ContractError):
            derive_params(channel, 3, 4096)
        with pytest.raises(ContractError):
            derive_params(channel, 8, 8)

    def test_too_many_chunks_for_field(self, channel, k1_solution):
        with pytest.raises(InfeasibleDesignError):
            derive_params(channel, 8, 1024, overrides=DesignOverrides(m=2, l2=2), k1_solution=k1_solution)

    def test_bad_overrides(self, channel, k1_solution):
        with pytest.raises(ConfigurationError):
            derive_params(channel, 8, 1024, overrides=DesignOverrides(l2=8), k1_solution=k1_solution)
        with pytest.raises(ConfigurationError):
            derive_params(channel, 8, 1024, overrides=DesignOverrides(m=4, rho=1.5), k1_solution=k1_solution)

    def test_params_hash_is_stable(self, codec_params, make_params):
        assert codec_params.params_hash() == make_params().params_hash()
        assert codec_params.params_hash() != make_params(rho=0.11).params_hash()


class TestOracles:

    def test_chernoff_bounds_sampled_binomial(self, rng):
        samples = rng.binomial(10_000, 0.01, size=100_000)
        bound = chernoff_bound(10_000, 100.0, 0.5)
        assert np.mean(samples >= 150) <= bound
        assert np.mean(samples <= 50) <= chernoff_bound(10_000, 100.0, 0.5, side="lower")

    def test_chernoff(self):
        assert chernoff_bound(100, 30.0, 0.5) == pytest.approx(math.exp(-2.5))
        with pytest.raises(ContractError):
            chernoff_bound(100, 30.0, 1.5)

    @pytest.mark.parametrize("q,rho,d10,d11", [(0.25, 0.01, 0.3, 0.3), (0.1, 0.05, 0.8, 0.5)])
    def test_box_maximum_at_a_corner(self, q, rho, d10, d11):
        report = verify_corner_points(q, rho, d10, d11, grid_steps=41)
        assert report.at_corner
        assert report.max_value == pytest.approx(max(report.corner_values))

    def test_scaled_corners_approach_g(self):
        fine = verify_corner_points(0.25, 1e-4, 0.3, 0.3, grid_steps=21, eps_d=0.1)
        coarse = verify_corner_points(0.25, 1e-3, 0.3, 0.3, grid_steps=21, eps_d=0.1)
        assert fine.scaling_gap < 1e-2
        assert fine.scaling_gap < coarse.scaling_gap
        n = (design_k2(0.25, 0.1) / 1e-4) ** 2
        assert fine.scaled_corners(n) == pytest.approx(list(fine.g_values), rel=1e-2)
        assert list(fine.g_values) == pytest.approx(list(aux_g_all(0.25, 0.1, 0.3, 0.3)))

    def test_corner_report_without_eps_has_no_scaling(self):
        report = verify_corner_points(0.25, 0.01, 0.3, 0.3, grid_steps=11)
        assert report.g_values is None
        assert report.scaling_gap is None

    @pytest.mark.parametrize("side", list(TailSide))
    def test_tail_bound_holds(self, channel, k1_solution, side):
        params = derive_params(channel, 4, 250_000, k1_solution=k1_solution)
        report = verify_tail_bound(params, side)
        assert report.holds
        assert report.log2_tail <= 0.0

    def test_taylor_identity(self, channel):
        k2 = design_k2(channel.q, channel.eps_d)
        report = verify_taylor_identity(channel.p, rho_schedule(k2, [1e4, 1e6, 1e8]))
        assert report.center_positive
        assert report.passed
        assert [row.n for row in report.rows] == [1e4, 1e6, 1e8]


class TestContour:

    def test_cells_below_diagonal_are_absent(self):
        frame = contour_grid([0.05, 0.3], [0.25], eps_d=0.1)
        assert frame["status"].tolist()[1] == "absent"
        assert frame["status"].tolist()[0] == "ok"
        assert frame["exponent"].iloc[0] == pytest.approx(0.662188 * 21.14 + 1.0, abs=0.1)

    def test_exponent_rises_at_both_ends(self):
        frame = contour_grid([0.005, 0.05, 0.24], [0.25], eps_d=0.1)
        exps = dict(zip(frame["p"], frame["exponent"]))
        assert exps[0.005] > exps[0.05]
        assert exps[0.24] > exps[0.05]

    def test_feasible_exponents_are_at_least_linear(self):
        frame = contour_grid((0.01, 0.2), (0.15, 0.4), eps_d=0.1, steps=(4, 3))
        feasible = frame[frame["status"] == "ok"]
        assert len(feasible) > 0
        assert (feasible["exponent"] >= 1.0).all()
        assert (feasible["k1"] >= 0.0).all()

    def test_grid_shape(self):
        frame = contour_grid((0.01, 0.2), (0.1, 0.4), eps_d=0.1, steps=(4, 3))
        assert len(frame) == 12
        assert list(frame.columns) == ["p", "q", "k1", "d10", "d11", "exponent", "status"]
