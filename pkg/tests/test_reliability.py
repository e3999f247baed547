"""Markov-model tests: recovery traffic, rates, and both MTTDL solvers."""

import io
from fractions import Fraction

import pytest

from widelrc import placement, presets, reliability
from widelrc.errors import ModelError
from widelrc.reliability import (
    MarkovChain,
    MarkovParams,
    build_chain,
    default_params,
    mttdl_exact,
    mttdl_product,
    recovery_cost,
    repair_rate,
)


def preset_cost(family, scheme="30-of-42", delta=Fraction(1, 10)):
    code = presets.build_preset(family, scheme)
    pmap = (
        placement.place_unilrc(code)
        if family == "unilrc"
        else placement.place_ecwide(code)
    )
    return code, recovery_cost(code, pmap, delta)


class TestRecoveryCost:
    def test_unilrc_42_exact(self):
        _, cost = preset_cost("unilrc")
        assert cost.c1 == 0
        assert cost.c2 == 6
        assert cost.combined == Fraction(3, 5)  # 0.6 blocks

    def test_delta_extremes(self):
        _, full = preset_cost("ulrc", delta=Fraction(1))
        assert full.combined == full.c1 + full.c2
        _, cheap_inner = preset_cost("ulrc", delta=Fraction(1, 10**9))
        assert abs(cheap_inner.combined - cheap_inner.c1) < Fraction(1, 10**6)

    def test_c1_c2_from_metrics(self):
        from widelrc import metrics

        code = presets.build_preset("ulrc", "30-of-42")
        pmap = placement.place_ecwide(code)
        rep = metrics.compute_metrics(code, pmap)
        cost = recovery_cost(code, pmap, Fraction(1, 10))
        assert cost.c1 == rep.carc
        assert cost.c2 == rep.arc - rep.carc


class TestRepairRate:
    def test_dimensional_analysis_frozen_value(self):
        # eps (N-1) B / (C S) with defaults and C = 0.6:
        # 0.1 * 399 * 125e6 B/s / (0.6 * 16e12 B) = 133/256000 per second
        params = default_params(7)
        _, cost = preset_cost("unilrc")
        mu = repair_rate(params, cost)
        assert mu == Fraction(133, 256000)
        assert mu > 0


class TestBuildChain:
    def test_unilrc_42_shape(self):
        params = default_params(7)
        _, cost = preset_cost("unilrc")
        chain = build_chain(params, cost, 42)
        # 8 failure arcs 42*lam .. 35*lam, one mu arc, six mu' arcs
        assert len(chain.failure_rates) == 8
        lam = params.failure_rate
        assert chain.failure_rates[0] == 42 * lam
        assert chain.failure_rates[-1] == 35 * lam
        assert len(chain.repair_rates) == 7
        mu_prime = Fraction(1) / params.detect_trigger_seconds
        assert chain.repair_rates[0] == repair_rate(params, cost)
        assert all(r == mu_prime for r in chain.repair_rates[1:])

    def test_f1_has_single_repair_arc(self):
        params = default_params(1)
        _, cost = preset_cost("unilrc")
        chain = build_chain(params, cost, 42)
        assert len(chain.repair_rates) == 1
        assert len(chain.failure_rates) == 2


class TestExactSolver:
    def test_single_state(self):
        chain = MarkovChain(n=5, failure_rates=(Fraction(1, 100),), repair_rates=())
        years = mttdl_exact(chain)
        assert years * reliability.SECONDS_PER_YEAR == 100

    def test_two_state_closed_form(self):
        lam1, lam2, mu = Fraction(1, 50), Fraction(1, 80), Fraction(3)
        chain = MarkovChain(n=2, failure_rates=(lam1, lam2), repair_rates=(mu,))
        expected_seconds = (lam1 + lam2 + mu) / (lam1 * lam2)
        assert mttdl_exact(chain) * reliability.SECONDS_PER_YEAR == expected_seconds

    def test_monotonicity(self):
        _, cost = preset_cost("unilrc")
        base = mttdl_exact(build_chain(default_params(7), cost, 42))
        slower_fail = MarkovParams(
            failure_rate=default_params(7).failure_rate / 2, tolerated_failures=7
        )
        assert mttdl_exact(build_chain(slower_fail, cost, 42)) > base
        faster_detect = MarkovParams(
            failure_rate=default_params(7).failure_rate,
            detect_trigger_seconds=Fraction(900),
            tolerated_failures=7,
        )
        assert mttdl_exact(build_chain(faster_detect, cost, 42)) > base

    def test_time_rescaling_invariance(self):
        _, cost = preset_cost("unilrc")
        chain = build_chain(default_params(7), cost, 42)
        scaled = MarkovChain(
            n=chain.n,
            failure_rates=tuple(3 * r for r in chain.failure_rates),
            repair_rates=tuple(3 * r for r in chain.repair_rates),
        )
        assert mttdl_exact(scaled) * 3 == mttdl_exact(chain)

    def test_degenerate_rates_rejected(self):
        chain = MarkovChain(
            n=2, failure_rates=(Fraction(0), Fraction(1)), repair_rates=(Fraction(1),)
        )
        with pytest.raises(ModelError):
            mttdl_exact(chain)


class TestProductSolver:
    def test_f1_reduces_to_classic_raid_formula(self):
        lam, mu = Fraction(1, 1000), Fraction(1, 2)
        n = 10
        chain = MarkovChain(
            n=n, failure_rates=(n * lam, (n - 1) * lam), repair_rates=(mu,)
        )
        expected = mu / (n * lam * (n - 1) * lam)
        assert mttdl_product(chain) * reliability.SECONDS_PER_YEAR == expected

    def test_agreement_with_exact_in_regime(self):
        # whenever every repair rate is >= 10x every failure rate, the
        # product form tracks the exact solver within 10%
        for scheme in presets.SCHEMES:
            for family in ("alrc", "olrc", "ulrc", "unilrc"):
                code, cost = preset_cost(family, scheme)
                f = presets.chain_failures(code, scheme)
                chain = build_chain(default_params(f), cost, code.spec.n)
                in_regime = min(chain.repair_rates) >= 10 * max(chain.failure_rates)
                if in_regime:
                    exact = mttdl_exact(chain)
                    product = mttdl_product(chain)
                    assert abs(exact - product) <= Fraction(1, 10) * exact, (
                        family,
                        scheme,
                    )

    def test_unilrc_defaults_always_in_regime(self):
        for scheme in presets.SCHEMES:
            code, cost = preset_cost("unilrc", scheme)
            f = presets.chain_failures(code, scheme)
            chain = build_chain(default_params(f), cost, code.spec.n)
            assert min(chain.repair_rates) >= 10 * max(chain.failure_rates)
            exact, product = mttdl_exact(chain), mttdl_product(chain)
            assert abs(exact - product) <= Fraction(1, 10) * exact

    def test_monotone_decreasing_in_traffic(self):
        params = default_params(7)
        code = presets.build_preset("unilrc", "30-of-42")
        pmap = placement.place_unilrc(code)
        prev = None
        for delta_num in (1, 2, 5, 10):
            cost = recovery_cost(code, pmap, Fraction(delta_num, 10))
            value = mttdl_product(build_chain(params, cost, 42))
            if prev is not None:
                assert value < prev
            prev = value


class TestOrdering:
    def test_table_ordering_all_schemes(self):
        for scheme in presets.SCHEMES:
            exact = {}
            for family in ("alrc", "olrc", "ulrc", "unilrc"):
                code, cost = preset_cost(family, scheme)
                f = presets.chain_failures(code, scheme)
                chain = build_chain(default_params(f), cost, code.spec.n)
                exact[family] = mttdl_exact(chain)
            assert exact["olrc"] > 100 * exact["unilrc"], scheme
            assert exact["unilrc"] > exact["ulrc"] > exact["alrc"], scheme
            assert exact["unilrc"] / exact["alrc"] > 1
            assert exact["unilrc"] / exact["ulrc"] > 1


class TestCsv:
    def test_columns(self):
        code, cost = preset_cost("unilrc")
        res = reliability.evaluate(default_params(7), cost, 42)
        buf = io.StringIO()
        reliability.write_reliability_csv(buf, [("30-of-42", "unilrc", res)])
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "scheme,family,c1,c2,c,mttdl_exact_years,mttdl_product_years"
        fields = lines[1].split(",")
        assert fields[:5] == ["30-of-42", "unilrc", "0", "6", "0.6"]
