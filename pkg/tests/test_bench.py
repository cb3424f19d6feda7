import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import volseg as vs
from volseg.bench import aggregate_multi_cp, aggregate_single_cp
from volseg.configio import study_config_from_dict, study_config_to_dict
from volseg.errors import ConfigError, InvalidInputError


def tiny_single_cfg(**kw):
    defaults = dict(
        dgp=(vs.DgpSegmentSpec("garch11", vs.DGP1, 150, vs.gaussian()),
             vs.DgpSegmentSpec("garch11", vs.DGP2, 150, vs.gaussian())),
        estimators=(vs.EstimatorSpec("qmle"), vs.EstimatorSpec("smle")),
        replications=2,
        base_seed=11,
        min_seg=50,
        step_length=60,
        candidate_stride=50,
        workers=1,
    )
    defaults.update(kw)
    return vs.StudyConfig(**defaults)


class TestAccuracyBand:
    def test_both_within(self):
        est = vs.ChangePointSet(2000, (995, 1500))
        truth = vs.ChangePointSet(2000, (1000, 1500))
        assert vs.accuracy_band(est, truth, 10) == 1.0

    def test_only_exact_match(self):
        est = vs.ChangePointSet(2000, (995, 1500))
        truth = vs.ChangePointSet(2000, (1000, 1500))
        assert vs.accuracy_band(est, truth, 3) == 0.5

    def test_empty_estimates(self):
        assert vs.accuracy_band([], vs.ChangePointSet(2000, (1000,)), 50) == 0.0

    def test_one_to_one_matching(self):
        # a single estimate cannot serve two truths
        assert vs.accuracy_band([1000], [995, 1005], 10) == 0.5

    def test_empty_truth_rejected(self):
        with pytest.raises(InvalidInputError):
            vs.accuracy_band([10], [], 5)

    @given(st.lists(st.integers(1, 999), max_size=6),
           st.lists(st.integers(1, 999), min_size=1, max_size=4),
           st.integers(1, 200), st.integers(1, 200))
    @settings(max_examples=80, deadline=None)
    def test_monotone_in_m(self, est, truth, m1, m2):
        lo, hi = sorted((m1, m2))
        assert vs.accuracy_band(est, truth, lo) <= vs.accuracy_band(est, truth, hi)


class TestBiasVariance:
    def test_exact_positions(self):
        assert vs.bias_variance([0.5, 0.5], 0.5) == (0.0, 0.0)

    def test_hand_value(self):
        bias, var = vs.bias_variance([0.4, 0.6], 0.5)
        assert bias == pytest.approx(0.0, abs=1e-15)
        assert var == pytest.approx(0.02, abs=1e-15)  # ddof=1

    def test_single_value_convention(self):
        assert vs.bias_variance([0.52], 0.5) == (pytest.approx(0.02), 0.0)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            vs.bias_variance([], 0.5)


class TestSingleCpStudy:
    def test_runs_and_aggregates(self):
        res = vs.run_single_cp_study(tiny_single_cfg())
        assert res.kind == "single_cp"
        assert res.truth.cps == (150,)
        assert len(res.records) == 2
        for label in ("qmle[garch11,gaussian]", "smle"):
            assert label in res.aggregates
            assert "bias" in res.aggregates[label]

    def test_deterministic_rerun(self):
        a = vs.run_single_cp_study(tiny_single_cfg())
        b = vs.run_single_cp_study(tiny_single_cfg())
        assert a.records == b.records
        assert a.aggregates == b.aggregates

    def test_parallel_equals_serial(self):
        a = vs.run_single_cp_study(tiny_single_cfg(workers=1))
        b = vs.run_single_cp_study(tiny_single_cfg(workers=2))
        assert a.records == b.records

    def test_seed_discipline(self):
        # replication r uses base_seed + r: shifting the base by 1 makes
        # replication r+1 of the old run equal replication r of the new
        a = vs.run_single_cp_study(tiny_single_cfg(base_seed=11, replications=3))
        b = vs.run_single_cp_study(tiny_single_cfg(base_seed=12, replications=2))
        stripped_a = {k: v for k, v in a.records[1].items() if k not in ("rep", "seed")}
        stripped_b = {k: v for k, v in b.records[0].items() if k not in ("rep", "seed")}
        assert stripped_a == stripped_b

    def test_aggregates_recomputable_from_records(self):
        res = vs.run_single_cp_study(tiny_single_cfg(replications=3))
        assert aggregate_single_cp(res.records, res.truth) == res.aggregates

    def test_needs_two_segments(self):
        with pytest.raises(ConfigError):
            vs.run_single_cp_study(tiny_single_cfg(
                dgp=(vs.DgpSegmentSpec("garch11", vs.DGP1, 300, vs.gaussian()),)
            ))

    def test_dist_override(self):
        cfg = tiny_single_cfg(dist=vs.student_t(6), replications=1,
                              estimators=(vs.EstimatorSpec("qmle"),))
        assert all(s.dist == vs.student_t(6) for s in cfg.segments())
        res = vs.run_single_cp_study(cfg)
        assert len(res.records) == 1


class TestMultiCpStudy:
    def test_runs_and_aggregates(self):
        cfg = tiny_single_cfg(
            dgp=(vs.DgpSegmentSpec("garch11", vs.DGP1, 150, vs.gaussian()),
                 vs.DgpSegmentSpec("garch11", vs.DGP2, 150, vs.gaussian())),
            estimators=(vs.EstimatorSpec("qmle"),),
            replications=2,
        )
        res = vs.run_multi_cp_study(cfg)
        assert res.kind == "multi_cp"
        agg = res.aggregates["qmle[garch11,gaussian]"]
        assert sum(agg["k_hist"].values()) == 2
        assert len(agg["position_bins"]) == 4
        assert set(agg["accuracy"]) == {10, 25, 50}
        assert aggregate_multi_cp(res.records, res.truth, cfg.accuracy_bands,
                                  cfg.position_bin_fractions) == res.aggregates

    def test_no_change_design_no_accuracy(self):
        cfg = tiny_single_cfg(
            dgp=(vs.DgpSegmentSpec("garch11", vs.DGP1, 300, vs.gaussian()),),
            estimators=(vs.EstimatorSpec("qmle"),),
            replications=1,
        )
        res = vs.run_multi_cp_study(cfg)
        assert res.truth.k == 0
        assert "accuracy" not in res.aggregates["qmle[garch11,gaussian]"]

    def test_fixed_k_rejected(self):
        with pytest.raises(ConfigError):
            vs.run_multi_cp_study(tiny_single_cfg(fixed_k=1))


class TestPaperTrends:
    @pytest.mark.slow
    def test_gaussian_single_cp_bias_variance_and_position(self):
        # desk-scale reproduction of the n=1000 Gaussian row: small bias and
        # variance, with the accepted split near the designed fraction 1/2
        cfg = vs.StudyConfig(
            dgp=(vs.DgpSegmentSpec("garch11", vs.DGP1, 500, vs.gaussian()),
                 vs.DgpSegmentSpec("garch11", vs.DGP2, 500, vs.gaussian())),
            estimators=(vs.EstimatorSpec("smle"),),
            replications=30,
            base_seed=0,
            fixed_k=1,
        )
        res = vs.run_single_cp_study(cfg)
        agg = res.aggregates["smle"]
        assert abs(agg["bias"]) < 0.03, agg
        assert agg["variance"] < 0.02, agg
        scaled = [r["estimators"]["smle"]["scaled"] for r in res.records]
        near_half = sum(abs(s - 0.5) <= 0.1 for s in scaled) / len(scaled)
        assert near_half >= 0.80, (near_half, scaled)


class TestConfigRoundTrip:
    def test_study_config_round_trip(self):
        cfg = tiny_single_cfg(
            dist=vs.ged(1.5, xi=4.0),
            penalty=vs.PenaltySpec("sic", p=3, scale=2.0),
            estimators=(vs.EstimatorSpec("qmle", "gjr11", vs.student_t(6)),
                        vs.EstimatorSpec("smle")),
        )
        d = study_config_to_dict(cfg)
        back = study_config_from_dict(d)
        assert back == cfg
        # and the echo embeds everything needed to rerun
        assert study_config_to_dict(back) == d
