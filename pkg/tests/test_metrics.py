"""Recovery-cost metric tests: the locality-study values and aggregates."""

import io
from fractions import Fraction

from widelrc import codes, metrics, placement, presets


def build_with_map(family, scheme="30-of-42"):
    code = presets.build_preset(family, scheme)
    if family == "unilrc":
        pmap = placement.place_unilrc(code)
    else:
        pmap = placement.place_ecwide(code)
    return code, pmap


class TestStudyValues:
    def test_recovery_locality_42(self):
        expected = {
            "alrc": Fraction(60, 7),  # 8.57
            "olrc": Fraction(25),
            "ulrc": Fraction(52, 7),  # 7.43
            "unilrc": Fraction(6),
        }
        for family, value in expected.items():
            code, pmap = build_with_map(family)
            rep = metrics.compute_metrics(code, pmap)
            assert rep.r_bar == value, family
            assert rep.arc == rep.r_bar

    def test_alrc_has_lowest_adrc(self):
        reports = {f: metrics.compute_metrics(*build_with_map(f))
                   for f in ("alrc", "olrc", "ulrc", "unilrc")}
        assert reports["alrc"].adrc == 5
        assert reports["alrc"].adrc < reports["unilrc"].adrc
        assert reports["unilrc"].adrc < reports["ulrc"].adrc < reports["olrc"].adrc

    def test_unilrc_optimal_columns_all_schemes(self):
        for scheme in presets.SCHEMES:
            code, pmap = build_with_map("unilrc", scheme)
            rep = metrics.compute_metrics(code, pmap)
            assert rep.adrc == rep.arc == code.spec.r
            assert rep.cdrc == 0 and rep.carc == 0
            assert rep.lbnr == 1

    def test_ulrc_lbnr(self):
        code, pmap = build_with_map("ulrc")
        rep = metrics.compute_metrics(code, pmap)
        # bottleneck cluster reads 7 data blocks; 6 clusters hold the stripe
        assert rep.lbnr == Fraction(7, 5)


class TestAggregateDefinitions:
    def test_arc_from_group_sizes_fully_local(self):
        # for fully-local families: arc = sum(size_i * (size_i - 1)) / n
        # over each block's cheapest group (uniform families only)
        code, pmap = build_with_map("unilrc")
        rep = metrics.compute_metrics(code, pmap)
        sizes = [len(m) for m in code.layout.groups]
        assert rep.arc == Fraction(sum(s * (s - 1) for s in sizes), code.spec.n)

        code, pmap = build_with_map("ulrc")
        rep = metrics.compute_metrics(code, pmap)
        sizes = [len(m) for m in code.layout.groups]
        assert rep.arc == Fraction(sum(s * (s - 1) for s in sizes), code.spec.n)

    def test_per_block_arrays_consistent(self):
        code, pmap = build_with_map("alrc")
        rep = metrics.compute_metrics(code, pmap)
        n, k = code.spec.n, code.spec.k
        assert len(rep.per_block_cost) == n
        assert rep.adrc == Fraction(sum(rep.per_block_cost[:k]), k)
        assert rep.arc == Fraction(sum(rep.per_block_cost), n)
        assert rep.cdrc == Fraction(sum(rep.per_block_cross_cost[:k]), k)
        assert rep.carc == Fraction(sum(rep.per_block_cross_cost), n)

    def test_zero_cross_iff_cluster_local(self):
        # CDRC/CARC vanish exactly when every repair set is cluster-local
        for family in ("alrc", "olrc", "ulrc", "unilrc"):
            code, pmap = build_with_map(family)
            rep = metrics.compute_metrics(code, pmap)
            all_local = all(c == 0 for c in rep.per_block_cross_cost)
            assert (rep.carc == 0) == all_local
            data_local = all(c == 0 for c in rep.per_block_cross_cost[: code.spec.k])
            assert (rep.cdrc == 0) == data_local

    def test_lbnr_uniform_spread_is_one(self):
        code, pmap = build_with_map("unilrc")
        assert metrics.lbnr_of(pmap, code) == 1


class TestCsv:
    def test_column_order_and_values(self):
        code, pmap = build_with_map("unilrc")
        rep = metrics.compute_metrics(code, pmap)
        buf = io.StringIO()
        metrics.write_metrics_csv(buf, [("unilrc", "30-of-42", rep)])
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "family,scheme,metric,value"
        assert lines[1] == "unilrc,30-of-42,adrc,6"
        assert any(line == "unilrc,30-of-42,lbnr,1" for line in lines)
