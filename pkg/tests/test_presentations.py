import math

import pytest

from kazhdan_lab.graphs import complete_graph, edgeless_graph, path_graph
from kazhdan_lab.presentations import (
    CoverRing,
    HilbertSeries,
    KmsRing,
    Presentation,
    Relator,
    eln_cover_presentation,
    gs1_series,
    gs2_construction,
    gs2_hypotheses,
    gs2_partition,
    gs2_series,
    gs_check,
    kms_basic_presentation,
    kms_mixed_presentation,
    series_from_dict,
)


def complete_topology(n):
    return complete_graph(n).topology


class TestKmsBasic:
    def test_compact_form_on_complete_prime_field(self):
        pres = kms_basic_presentation(complete_topology(6), KmsRing("F", 5))
        assert pres.generators == [f"x{i}" for i in range(1, 7)]
        assert pres.degree_multiset() == {5: 6, 3: 30}

    def test_edgeless_pair_over_f2(self):
        pres = kms_basic_presentation(edgeless_graph(2), KmsRing("F", 2))
        assert pres.render() == (
            "gens: x1(1) x2(1)\n"
            "x1(1) x1(1) = 1\n"
            "x2(1) x2(1) = 1\n"
            "[x1(1),x2(1)]\n"
        )

    def test_two_edge_chain_over_f2(self):
        topo = path_graph(3).topology
        pres = kms_basic_presentation(topo, KmsRing("F", 2))
        text = pres.render()
        # class-two relators for both edges, plain commutation only for the
        # missing edge 1-3
        assert "[x1(1),x2(1),x1(1)]" in text
        assert "[x2(1),x3(1),x2(1)]" in text
        assert "[x1(1),x3(1)]" in text
        assert "[x1(1),x2(1)]\n" not in text

    def test_ring_relations_over_z4(self):
        topo = path_graph(2).topology
        pres = kms_basic_presentation(topo, KmsRing("Z", 4))
        text = pres.render()
        assert "[x1(2),x2(3)] = [x1(1),x2(2)]" in text
        assert "x1(2) x1(2) = 1" in text

    def test_determinism(self):
        a = kms_basic_presentation(complete_topology(4), KmsRing("F", 7)).render()
        b = kms_basic_presentation(complete_topology(4), KmsRing("F", 7)).render()
        assert a == b

    def test_rejects_prime_power_field(self):
        with pytest.raises(ValueError):
            KmsRing("F", 4)


class TestKmsMixed:
    def test_gs2_instance_counts(self):
        pres = gs2_construction(99, 67)
        assert len(pres.generators) == 99
        assert pres.degree_multiset() == {67: 99, 2: 9 * 55, 3: 72 * 11**3}

    def test_partition_remainder(self):
        assert gs2_partition(100) == [12] + [11] * 8
        assert sum(gs2_partition(100)) == 100

    def test_rank_one_reduces_to_basic(self):
        topo = complete_topology(4)
        mixed = kms_mixed_presentation(topo, [1, 1, 1, 1], 5)
        basic = kms_basic_presentation(topo, KmsRing("F", 5))
        assert mixed.degree_multiset() == basic.degree_multiset()
        renamed = mixed.render().replace("_1", "")
        assert renamed == basic.render()

    def test_non_edges_commute(self):
        topo = path_graph(3).topology
        pres = kms_mixed_presentation(topo, [2, 1, 1], 5)
        assert "[x1_1,x3_1]" in pres.render()

    def test_validates_dimensions(self):
        with pytest.raises(ValueError):
            kms_mixed_presentation(complete_topology(3), [1, 1], 5)
        with pytest.raises(ValueError):
            kms_mixed_presentation(complete_topology(3), [1, 0, 1], 5)


class TestCoverPresentation:
    def test_generator_counts(self):
        cases = [
            (3, 0, CoverRing.integers()),
            (3, 1, CoverRing.integers()),
            (4, 0, CoverRing.integers()),
            (4, 2, CoverRing.integers()),
            (7, 0, CoverRing.integers()),
            (3, 0, CoverRing.prime_field(5)),
            (3, 1, CoverRing.prime_field(5)),
            (3, 2, CoverRing.prime_field(7)),
            (5, 1, CoverRing.prime_field(5)),
            (4, 1, CoverRing.prime_field(11)),
        ]
        for n, d, ring in cases:
            pres = eln_cover_presentation(n, d, ring)
            assert len(pres.generators) == n * (n - 1) * (d + 1) * ring.s

    def test_torsion_iff_finite_ring(self):
        field_pres = eln_cover_presentation(3, 1, CoverRing.prime_field(5))
        assert any(r.text == "e1_2(a1x0)^5" for r in field_pres.relators)
        int_pres = eln_cover_presentation(7, 0, CoverRing.integers())
        assert not any(r.text.endswith("^5") for r in int_pres.relators)

    def test_braid_power_iff_integers(self):
        int_pres = eln_cover_presentation(7, 0, CoverRing.integers())
        assert "(e1_2(a1x0) e2_1(a1x0)^-1 e1_2(a1x0))^4" in [r.text for r in int_pres.relators]
        field_pres = eln_cover_presentation(3, 1, CoverRing.prime_field(5))
        assert not any(")^4" in r.text for r in field_pres.relators)

    def test_structure_constant_relations(self):
        pres = eln_cover_presentation(3, 1, CoverRing.prime_field(5))
        texts = [r.text for r in pres.relators]
        assert "[e1_2(a1x1),e2_3(a1x0)] = e1_3(a1x1)" in texts
        assert "[e1_2(a1x0),e2_3(a1x1)] = e1_3(a1x1)" in texts

    def test_middle_index_relations_absent_for_n3(self):
        pres = eln_cover_presentation(3, 2, CoverRing.prime_field(5))
        assert not any(") = [" in r.text and r.text.count("[") == 2 for r in pres.relators)

    def test_middle_index_relations_present_for_n4(self):
        pres = eln_cover_presentation(4, 0, CoverRing.prime_field(5))
        assert "[e1_2(a1x0),e2_4(a1x0)] = [e1_3(a1x0),e3_4(a1x0)]" in [
            r.text for r in pres.relators
        ]

    def test_unit_validation(self):
        with pytest.raises(ValueError):
            CoverRing(5, 2, (((1, 0), (1, 0)), ((0, 1), (2, 0))))  # alpha_1 not the unit


class TestHilbertSeries:
    def test_evaluation(self):
        series = HilbertSeries(6, {3: 30, 5: 6})
        t = 1 / math.sqrt(15)
        assert series.evaluate(t) == pytest.approx(1 - 6 * t + 30 * t**3 + 6 * t**5, abs=1e-15)

    def test_gs1_witness_points(self):
        for d in range(6, 21):
            for p in (5, 7, 11, 13):
                series = gs1_series(d, p)
                t = 1 / math.sqrt(3 * (d - 1))
                assert float(series.evaluate(t)) < 0
                assert gs_check(series).satisfied

    def test_gs1_small_case_fails(self):
        report = gs_check(gs1_series(2, 2))
        assert not report.satisfied
        assert report.h_best > 0

    def test_gs2_witness_points(self):
        for s in range(11, 21):
            for p in (67, 71, 73):
                n = 9 * s
                series = gs2_series(n, p)
                t = 1 / (s * math.sqrt(24))
                assert float(series.evaluate(t)) < 0
                report = gs_check(series, t_hint=t)
                assert report.satisfied and report.h_hint < 0

    def test_free_group_series(self):
        report = gs_check(HilbertSeries(2, {}))
        assert report.satisfied
        assert report.h_best < 0

    def test_presentation_series_round_trip(self):
        pres = kms_basic_presentation(complete_topology(6), KmsRing("F", 5))
        series = pres.hilbert_series()
        assert series.gen_count == 6
        assert dict(series.coefficients) == {5: 6, 3: 30}

    def test_series_from_dict(self):
        series = series_from_dict(
            {"gens": 6, "relations": {"2": 0, "3": 30, "p": 6}, "p": 5}
        )
        assert series.gen_count == 6
        assert dict(series.coefficients) == {2: 0, 3: 30, 5: 6}

    def test_gs2_hypotheses_reported_separately(self):
        both = gs2_hypotheses(99, 67)
        assert both["statement"] == {"n_ge_99": True, "p_gt_64": True}
        assert both["witness_inequality"] == {"s_ge_11": True, "p_ge_5": True}
        mixed = gs2_hypotheses(90, 7)
        assert not mixed["statement"]["n_ge_99"]
        assert not mixed["statement"]["p_gt_64"]
        assert not mixed["witness_inequality"]["s_ge_11"]
        assert mixed["witness_inequality"]["p_ge_5"]


class TestPresentationType:
    def test_rejects_undeclared_generators(self):
        with pytest.raises(ValueError):
            Presentation(["a"], [Relator("[a,b]", ("a", "b"), degree=2)])

    def test_degree_multiset_skips_unassigned(self):
        pres = Presentation(
            ["a", "b"],
            [Relator("a^5", ("a",), degree=5), Relator("a b = b a", ("a", "b"))],
        )
        assert pres.degree_multiset() == {5: 1}
        with pytest.raises(ValueError):
            pres.hilbert_series()
