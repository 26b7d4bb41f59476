import json
from fractions import Fraction

import pytest

from sptpairs.verify import (
    CONGRUENCES,
    MARGIN,
    EvaluationError,
    Evaluator,
    RegistrySyntaxError,
    UnknownTheorem,
    VerificationReport,
    comparison_order,
    congruence_rows,
    congruence_scan,
    equal_class_evidence,
    load_registry,
    parse_registry,
    read_all,
    reports_from_json,
    reports_to_json,
    run_all,
    select,
    validate_reports,
    verify_spec,
    verify_theorem,
)
from sptpairs.verify.registry import default_registry_path, find
from sptpairs.verify.sexpr import Text, dump


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def one(text, **kw):
    (spec,) = parse_registry(text)
    return verify_spec(spec, **kw)


class TestReader:
    def test_atoms(self):
        assert read_all('(a 1 -2 3/4 "x y") ; comment\n b') == [("a", 1, -2, Fraction(3, 4), "x y"), "b"]
        assert isinstance(read_all('"s"')[0], Text)

    def test_roundtrip(self):
        src = '(identity x (lhs (+ 1 (q 1/2))) (note "a \\"b\\""))'
        assert read_all(dump(read_all(src)[0])) == read_all(src)

    def test_unbalanced(self):
        with pytest.raises(RegistrySyntaxError, match="line 2"):
            read_all("(a\n))")
        with pytest.raises(RegistrySyntaxError, match="unclosed"):
            read_all("(a (b)")


class TestRegistry:
    def test_macros_and_instances(self):
        text = """
        (define two 2)
        (define (double x) (* two x))
        (identity t (instances ((k 1)) ((k 3))) (lhs (double k)) (rhs (+ k k)))
        """
        specs = parse_registry(text)
        assert [s.id for s in specs] == ["t/k=1", "t/k=3"]
        assert specs[1].lhs == 6
        assert dict(specs[0].params) == {"k": 1}

    def test_sum_unrolls(self):
        (s,) = parse_registry("(identity t (lhs (sum k 1 3 (q k))) (rhs 0))")
        assert s.lhs == ("+", ("q", 1), ("q", 2), ("q", 3))

    def test_fields(self):
        (s,) = parse_registry("""(identity t (ring cyclotomic 5) (depth 30) (certificate 99) (opt-in)
            (expect fail) (coset) (group g) (note "n") (lhs 1) (rhs 1))""")
        assert (s.ell, s.ring, s.default_depth, s.certificate_depth) == (5, "cyclotomic-5", 30, 99)
        assert s.opt_in and s.coset and s.expect == "fail" and s.notes == ("n",)
        assert s.depth_for("certificate") == 99 and s.depth_for("quick") == 30

    @pytest.mark.parametrize("text", [
        "(identity t (lhs 1))",
        "(identity t (lhs 1) (rhs 1) (colour red))",
        "(identity t (lhs 1) (rhs 1)) (identity t (lhs 1) (rhs 1))",
        "(identity t (ring p-adic) (lhs 1) (rhs 1))",
        "(define (f x) x) (identity t (lhs (f 1 2)) (rhs 1))",
        "(theorem t)",
    ])
    def test_malformed(self, text):
        with pytest.raises(RegistrySyntaxError):
            parse_registry(text)

    def test_bundled_registry_loads(self, registry):
        ids = {t.id for t in registry}
        assert {"crank-dissection-3", "PP13-dissection", "PP37-eta-certificate-2"} <= ids
        assert default_registry_path().exists()

    def test_select(self, registry):
        assert [t.id for t in select(registry, "crank-dissection-5")] == ["crank-dissection-5"]
        assert len(select(registry, "S-reflect")) == 4
        assert len(select(registry, "crank-dissection-*")) == 3
        assert select(registry, "nope") == []
        with pytest.raises(UnknownTheorem):
            find(registry, "nope")

    def test_certificate_depths(self, registry):
        depths = sorted(int(t.certificate_depth) for t in registry if t.certificate_depth)
        assert depths == [25, 25, 189, 192, 198, 199, 199, 201, 773, 779, 7804]
        assert [t.id for t in registry if t.opt_in] == ["PP37-eta-certificate-2"]


class TestEvaluator:
    def test_products_and_arithmetic(self):
        ev = Evaluator()
        f = ev.series(("*", ("qinf", 1), ("/", 1, ("qinf", 1))), 20)
        assert f.to_dict() == {0: 1}
        assert ev.series(("^", ("+", 1, ("q", 1)), 2), 5).to_dict() == {0: 1, 1: 2, 2: 1}

    def test_eta_tokens(self):
        ev = Evaluator()
        f = ev.series(("etaq", 2, "5:0^1/2", "/", "eta:5"), 10)
        assert f.to_dict() == {0: 2}
        g = ev.series(("etaq", 1, "q^3"), 10)
        assert g.to_dict() == {3: 1}

    def test_zeta_needs_ring(self):
        with pytest.raises(EvaluationError):
            Evaluator().value("zeta", 5)
        assert Evaluator(5).value(("zeta", 5), 5) == 1

    def test_unknown_operator(self):
        with pytest.raises(EvaluationError):
            Evaluator().value(("frobnicate", 1), 5)

    def test_substitution(self):
        f = Evaluator().series(("sub", 3, ("+", 1, ("q", 1))), 10)
        assert f.to_dict() == {0: 1, 3: 1}


class TestEngine:
    def test_margin_semantics(self):
        assert comparison_order(25) == 25 + MARGIN + 1

    def test_pass_counts_coefficients(self):
        rep = one("(identity t (lhs (qinf 1)) (rhs (pent)))", depth=10)
        assert rep.outcome == "pass" and rep.coefficients == 16 and rep.witness is None

    def test_fail_has_witness(self):
        rep = one("(identity t (lhs (qinf 1)) (rhs (+ (pent) (q 14))))", depth=10)
        assert rep.outcome == "fail"
        assert rep.witness == {"exponent": "14", "lhs": "0", "rhs": "1"}

    def test_expected_failures(self):
        assert one("(identity t (expect fail) (lhs 1) (rhs 2))").outcome == "xfail"
        assert one("(identity t (expect fail) (lhs 1) (rhs 1))").outcome == "xpass"

    def test_errors_are_reported(self):
        rep = one("(identity t (lhs (S 3 0 3)) (rhs 0))")
        assert rep.outcome == "error" and "Pole" in rep.message

    def test_coset_check(self):
        rep = one("(identity t (coset) (lhs (+ (etaq 1 5:1) (etaq 1 5:2))) (rhs 0))")
        assert rep.outcome == "fail" and "coset" in rep.message

    @pytest.mark.parametrize("tid", ["crank-dissection-3", "crank-dissection-5", "crank-dissection-7"])
    def test_crank_dissections(self, registry, tid):
        assert verify_theorem(tid, depth=60, registry=registry).outcome == "pass"

    def test_first_dissection_to_25(self, registry):
        assert verify_theorem("PP13-dissection", depth=25, registry=registry).outcome == "pass"

    def test_unknown_id(self, registry):
        with pytest.raises(UnknownTheorem):
            verify_theorem("nope", registry=registry)

    def test_corrupted_clone_fails_with_witness(self):
        text = default_registry_path().read_text()
        bad = text.replace("(* -2 (q 1) (jac 27 6 12))", "(* -1 (q 1) (jac 27 6 12))", 1)
        assert bad != text
        spec = find(parse_registry(bad), "crank-dissection-3")
        rep = verify_spec(spec, depth=30)
        assert rep.outcome == "fail"
        assert rep.witness["exponent"] == "1"

    def test_empty_filter(self):
        assert run_all(pattern="no-such-*") == []

    def test_depth_cap_and_opt_in(self, registry):
        reps = run_all("certificate", pattern="PP37-eta-certificate-*", registry=registry)
        by_id = {r.id: r for r in reps}
        assert by_id["PP37-eta-certificate-2"].outcome == "skipped"
        assert "cap" in by_id["PP37-eta-certificate-1"].message
        with pytest.raises(ValueError):
            run_all("bogus")

    def test_parallel_matches_serial(self):
        serial = run_all(pattern="S-*", jobs=1)
        parallel = run_all(pattern="S-*", jobs=2)
        assert [(r.id, r.outcome, r.coefficients) for r in serial] == \
               [(r.id, r.outcome, r.coefficients) for r in parallel]

    def test_deterministic(self, registry):
        a = verify_theorem("PP25-dissection", depth=30, registry=registry)
        b = verify_theorem("PP25-dissection", depth=30, registry=registry)
        assert (a.outcome, a.coefficients, a.witness) == (b.outcome, b.coefficients, b.witness)


class TestReports:
    def test_json_roundtrip(self):
        reps = [VerificationReport("a", "10", "pass", 3, None, 16),
                VerificationReport("b", "10", "fail", 1, {"exponent": "2", "lhs": "1", "rhs": "0"}, 3, message="m")]
        doc = json.loads(json.dumps(reports_to_json(reps)))
        validate_reports(doc)
        assert reports_from_json(doc) == reps

    def test_schema_rejects_bad_outcome(self):
        import jsonschema

        bad = [{"id": "a", "depth": "1", "outcome": "maybe", "ms": 0, "witness": None,
                "coefficients": 0, "expected": "pass"}]
        with pytest.raises(jsonschema.ValidationError):
            validate_reports(bad)


class TestCongruences:
    @pytest.mark.parametrize("i, ell, r", CONGRUENCES)
    def test_scans_pass(self, i, ell, r):
        rep = congruence_scan(i, ell, r, 100)
        assert rep.outcome == "pass", rep.witness

    def test_pp2_at_one(self):
        (row, *_) = congruence_rows(2, 5, 1, 10)
        assert (row.n, row.pp, row.residue) == (1, 0, 0)

    def test_exploratory_scan_reports_failures(self):
        outcomes = {r: congruence_scan(1, 5, r, 60).outcome for r in range(5)}
        assert "fail" in outcomes.values()

    def test_small_n_max(self):
        assert congruence_scan(3, 5, 4, 1).outcome == "pass"
        assert congruence_rows(1, 3, 0, -1) == []

    def test_equal_classes(self):
        ev = equal_class_evidence(3, 7, 1, 50)
        assert all(e["equal"] for e in ev)
        assert ev[1]["n"] == 8
