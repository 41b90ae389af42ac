from fractions import Fraction

import pytest

from conftest import substituted_case
from nilcohom.cxstruct import AlmostComplexStructure
from nilcohom.errors import (
    ParseError,
    StructureError,
    UnsupportedError,
)
from nilcohom.exact import QQ, Matrix, build_field
from nilcohom.exact.fields import QuadraticField
from nilcohom.exact.numbers import (
    QuadraticSurd,
    liouville_decimal,
    power_tower,
)
from nilcohom.toroidal import (
    NotToroidal,
    PeriodData,
    ThetaCertified,
    Undetermined,
    WildEvidence,
    check_irrationality,
    hausdorff_hodge,
    leaf_analysis,
    period_data_from_document,
    remmert_morimoto,
    theta_classify,
    toroidal_normalize,
)

LEAF_DOC = {
    "dimension": 2,
    "numbers": {"a": {"type": "formal"}},
    "generators": [["i", "0"], ["0", "1"], ["i*a", "-i"]],
}


@pytest.fixture()
def leaf_pd():
    return period_data_from_document(LEAF_DOC)


class TestNormalize:
    def test_worked_leaf_normal_form(self, leaf_pd):
        nf = toroidal_normalize(leaf_pd)
        assert (nf.a, nf.k, nf.q) == (0, 1, 1)
        cf = leaf_pd.cfield
        i = cf.i()
        a = cf.coerce(leaf_pd.field.gen())
        assert nf.display_rows() == (
            (cf.from_int(1), cf.zero(), a),
            (cf.zero(), cf.from_int(1), i),
        )

    def test_full_rank_torus(self):
        pd = period_data_from_document(
            {"dimension": 1, "numbers": {}, "generators": [["1"], ["i"]]})
        nf = toroidal_normalize(pd)
        assert (nf.a, nf.k, nf.q) == (0, 0, 1)
        assert [str(x) for x in nf.P.rows[0]] == ["1", "i"]

    def test_single_real_generator(self):
        pd = period_data_from_document(
            {"dimension": 2, "numbers": {}, "generators": [["1", "0"]]})
        nf = toroidal_normalize(pd)
        assert (nf.a, nf.k, nf.q, nf.b) == (1, 1, 0, 1)

    def test_lattice_preserved_by_column_bookkeeping(self, leaf_pd):
        nf = toroidal_normalize(leaf_pd)
        # new generators are signed originals run through the change of
        # coordinates: both memberships hold by construction
        assert sorted(nf.column_order) == [0, 1, 2]
        assert all(s in (1, -1) for s in nf.column_signs)
        rows = nf.display_rows()
        for pos, (j, s) in enumerate(zip(nf.column_order,
                                         nf.column_signs)):
            image = nf.change.apply(leaf_pd.generators[j])
            expected = tuple(x if s > 0 else -x for x in
                             (rows[0][pos], rows[1][pos]))
            assert image == expected

    def test_dependent_generators_rejected(self):
        with pytest.raises(StructureError):
            period_data_from_document(
                {"dimension": 1, "numbers": {},
                 "generators": [["1"], ["1/2"]]})


class TestRemmertMorimoto:
    def test_rank_zero(self):
        rm = remmert_morimoto(PeriodData(QQ, 2, []))
        assert (rm.a, rm.b, rm.toroidal) == (2, 0, None)

    def test_single_integral_direction(self):
        pd = period_data_from_document(
            {"dimension": 1, "numbers": {}, "generators": [["1"]]})
        rm = remmert_morimoto(pd)
        assert (rm.a, rm.b, rm.toroidal) == (0, 1, None)

    def test_worked_leaf_is_toroidal(self, leaf_pd):
        rm = remmert_morimoto(leaf_pd)
        assert (rm.a, rm.b) == (0, 0)
        assert rm.toroidal is not None and rm.toroidal.n == 2
        again = remmert_morimoto(rm.toroidal)
        assert (again.a, again.b) == (0, 0)
        # the splitting fixes the toroidal part: recomputing returns it
        assert again.toroidal.generators == rm.toroidal.generators

    def test_rational_glueing_splits_cstar(self):
        pd = period_data_from_document(
            {"dimension": 2, "numbers": {},
             "generators": [["1", "0"], ["0", "1"], ["1/2", "i"]]})
        rm = remmert_morimoto(pd)
        assert (rm.a, rm.b) == (0, 1)
        assert rm.toroidal is not None and rm.normal_form.q == 1
        assert rm.a + rm.b + rm.toroidal.n == 2

    def test_dimension_bookkeeping(self, leaf_pd):
        rm = remmert_morimoto(leaf_pd)
        assert rm.a + rm.b + (rm.toroidal.n if rm.toroidal else 0) \
            == leaf_pd.n


class TestIrrationality:
    def test_rational_witness(self):
        R = Matrix(QQ, [[Fraction(0), Fraction(1, 2)]])
        assert check_irrationality(R) == (2,)

    def test_surd_has_no_witness(self):
        K = QuadraticField(2)
        R = Matrix(K, [[K.zero(), K.gen()]])
        assert check_irrationality(R) is None

    def test_formal_has_no_witness(self):
        K = build_field(None, "t")
        R = Matrix(K, [[K.zero(), K.gen()]])
        assert check_irrationality(R) is None

    def test_witness_correctness_random(self):
        import random

        rng = random.Random(29)
        for _ in range(25):
            R = Matrix(QQ, [[Fraction(rng.randint(-3, 3),
                                      rng.randint(1, 4))
                             for _ in range(2)] for _ in range(2)])
            sigma = check_irrationality(R)
            assert sigma is not None  # rational matrices always fail
            assert any(sigma)
            prod = [sum(Fraction(sigma[i]) * R.rows[i][j]
                        for i in range(2)) for j in range(2)]
            assert all(x.denominator == 1 for x in prod)


class TestThetaClassification:
    def test_rational_entry_not_toroidal(self):
        R = Matrix(QQ, [[Fraction(0), Fraction(1, 2)]])
        v = theta_classify(R)
        assert isinstance(v, NotToroidal) and v.witness == (2,)

    def test_sqrt2_certified(self):
        K = QuadraticField(2)
        R = Matrix(K, [[K.zero(), K.gen()]])
        v = theta_classify(R, {(1, 0): QuadraticSurd(1, 0, -2)})
        assert isinstance(v, ThetaCertified)
        assert v.radius == 6  # 2|A|(ceil sqrt2 + 1) + |B| = 6
        assert v.certificate["min_poly"] == [1, 0, -2]
        assert v.certificate["cutoff_checked"] == 100

    def test_certified_shifted_surd(self):
        # entry 1/2 + sqrt3: still the certified shape
        K = QuadraticField(3)
        x = K.coerce(Fraction(1, 2)) + K.gen()
        R = Matrix(K, [[K.zero(), x]])
        v = theta_classify(R, {(1, 0): QuadraticSurd(1, 0, -3)})
        assert isinstance(v, ThetaCertified)

    def test_formal_undetermined(self):
        K = build_field(None, "t")
        R = Matrix(K, [[K.zero(), K.gen()]])
        v = theta_classify(R)
        assert isinstance(v, Undetermined)
        assert "formal" in v.reason

    def test_power_tower_wild_evidence(self):
        K = build_field(None, "t")
        R = Matrix(K, [[K.zero(), K.gen()]])
        v = theta_classify(R, convergent_source=power_tower(2, 4))
        assert isinstance(v, WildEvidence)
        assert len(v.ratios) == 4
        assert all(v.ratios[i] < v.ratios[i + 1]
                   for i in range(len(v.ratios) - 1))
        assert v.verdict == "divergent over computed range"

    def test_liouville_series_not_reported_wild(self):
        # the growth ratios of this series decrease, so the evidence
        # grading reports undetermined rather than wild
        K = build_field(None, "t")
        R = Matrix(K, [[K.zero(), K.gen()]])
        v = theta_classify(R, convergent_source=liouville_decimal())
        assert isinstance(v, Undetermined)

    def test_verdict_stability(self):
        # no input yields both a certificate and wild evidence
        K = QuadraticField(2)
        R = Matrix(K, [[K.zero(), K.gen()]])
        kinds = set()
        for scan in (10, 100):
            v = theta_classify(R, {(1, 0): QuadraticSurd(1, 0, -2)},
                               scan_bound=scan,
                               convergent_source=power_tower(2, 4))
            kinds.add(v.kind)
        assert kinds == {"theta-certified"}

    def test_certified_golden_ratio(self):
        K = QuadraticField(5)
        x = (K.gen() + 1) / K.from_int(2)
        R = Matrix(K, [[K.zero(), x]])
        v = theta_classify(R, {(1, 0): QuadraticSurd(1, 0, -5)},
                           scan_bound=25, certify_cutoff=25)
        assert isinstance(v, ThetaCertified)

    def test_numeric_scan_collects_evidence(self):
        # a convergent-bound entry with non-increasing ratios falls
        # through to the certified-enclosure scan and comes back
        # undetermined with the observed maximum growth ratio
        K = build_field(None, "t")
        R = Matrix(K, [[K.zero(), K.gen()]])
        v = theta_classify(R, {(0, 1): liouville_decimal()},
                           scan_bound=20,
                           convergent_source=liouville_decimal())
        assert isinstance(v, Undetermined)
        assert v.scan_bound == 20
        assert v.max_ratio is not None and v.max_ratio > 0


class TestHausdorffHodge:
    def test_binomial_dimensions(self, leaf_pd):
        rm = remmert_morimoto(leaf_pd)
        assert hausdorff_hodge(rm.toroidal, 0, 1) == 1
        assert hausdorff_hodge(rm.toroidal, 1, 1) == 2
        assert hausdorff_hodge(rm.toroidal, 0, 0) == 1
        assert hausdorff_hodge(rm.toroidal, 1, 2) == 0

    def test_non_toroidal_rejected(self):
        pd = period_data_from_document(
            {"dimension": 1, "numbers": {}, "generators": [["1"]]})
        with pytest.raises(UnsupportedError):
            hausdorff_hodge(pd, 0, 0)


class TestLeafAnalysis:
    def test_formal_parameter(self, h7, example_case):
        g, L, f, f0 = example_case
        J = AlmostComplexStructure.standard(g)
        leaf = leaf_analysis(g, J, L, f)
        assert leaf.classification == "toroidal (theta/wild undetermined)"
        assert len(leaf.lattice_coeffs) == 3
        nf = leaf.rm.normal_form
        cf = leaf.period.cfield
        a = cf.coerce(leaf.period.field.gen())
        assert nf.display_rows() == (
            (cf.from_int(1), cf.zero(), a),
            (cf.zero(), cf.from_int(1), cf.i()),
        )

    def test_rational_parameter_gives_torus(self, h7):
        g, L, f, f0 = substituted_case(h7, Fraction(1, 2))
        J = AlmostComplexStructure.standard(g)
        leaf = leaf_analysis(g, J, L, f)
        assert leaf.classification == "compact torus"
        assert len(leaf.lattice_coeffs) == 4

    def test_sqrt2_parameter_gives_theta(self, h7):
        K2 = QuadraticField(2)
        g, L, f, f0 = substituted_case(h7, K2.gen())
        J = AlmostComplexStructure.standard(g)
        leaf = leaf_analysis(g, J, L, f)
        assert leaf.classification == "toroidal theta (certified)"
        assert isinstance(leaf.theta, ThetaCertified)
        assert leaf.theta.radius == 6

    def test_preconditions_reported(self, h7, example_case):
        from nilcohom.exact import Subspace

        g, L, f, f0 = example_case
        J = AlmostComplexStructure.standard(g)
        bad = f0.sum_(Subspace(g.field, 6, [[1, 0, 0, 0, 0, 0]]))
        with pytest.raises(StructureError):
            leaf_analysis(g, J, L, bad)


class TestPeriodDocuments:
    def test_roundtrip_symbols(self):
        pd = period_data_from_document({
            "dimension": 1,
            "numbers": {"s": {"type": "sqrt", "d": 2},
                        "h": {"type": "rational", "value": "3/2"}},
            "generators": [["s+h"], ["i*s"]],
        })
        assert pd.m == 2

    def test_unknown_symbol(self):
        with pytest.raises(ParseError):
            period_data_from_document({
                "dimension": 1, "numbers": {},
                "generators": [["b"]]})

    def test_two_surds_unsupported(self):
        with pytest.raises(UnsupportedError):
            period_data_from_document({
                "dimension": 1,
                "numbers": {"x": {"type": "sqrt", "d": 2},
                            "y": {"type": "sqrt", "d": 3}},
                "generators": [["x+y"]]})

    def test_convergent_binding_used_by_classifier(self):
        pd = period_data_from_document({
            "dimension": 2,
            "numbers": {"a": {"type": "convergents",
                              "family": "power-tower",
                              "base": 2, "start": 4}},
            "generators": [["1", "0"], ["0", "1"], ["a", "i"]],
        })
        nf = toroidal_normalize(pd)
        source = pd.bindings[(0, 1)]
        v = theta_classify(nf.R, pd.bindings, convergent_source=source)
        assert isinstance(v, WildEvidence)
