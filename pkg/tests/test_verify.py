import pytest

from dunkl.config import build_bundle
from dunkl.verify import run_suite, suite_positivity, suite_signs


@pytest.fixture(scope="module")
def z21_bundle():
    bundle = build_bundle({"family": "Z2^d", "d": 1, "k": "1/2", "N": 8})
    bundle.ctx.prepare(8)
    return bundle


def test_unknown_suite_rejected(z21_bundle):
    with pytest.raises(ValueError):
        run_suite(z21_bundle, "bogus")


def test_signs_suite_reports_conventions(z21_bundle):
    results = suite_signs(z21_bundle)
    by_name = {r.identity: r for r in results}
    assert by_name["gaussian-image-convention-at-weight-zero"].convention == "minus"
    assert by_name["fourier-representation-convention-at-weight-zero"].convention == "plus"
    assert by_name["derivative-relation-convention-at-weight-zero"].convention == "minus"
    assert all(r.passed for r in results)
    # the same convention validates at the context weight
    assert by_name["gaussian-image-convention-at-context-weight"].convention == "minus"


def test_positivity_skipped_for_complex_weight():
    bundle = build_bundle(
        {"family": "Z2^d", "d": 1, "k": {"re": "1/2", "im": "1/3"}, "N": 4}
    )
    bundle.ctx.prepare(4)
    results = suite_positivity(bundle)
    assert len(results) == 1
    assert results[0].passed
    assert "skipped" in results[0].note


def test_positivity_skipped_for_negative_weight():
    bundle = build_bundle({"family": "Z2^d", "d": 1, "k": "-1/4", "N": 4})
    bundle.ctx.prepare(4)
    results = suite_positivity(bundle)
    assert "skipped" in results[0].note


def test_signs_suite_skips_context_rows_for_negative_weight():
    bundle = build_bundle({"family": "Z2^d", "d": 1, "k": "-1/4", "N": 6})
    bundle.ctx.prepare(6)
    results = suite_signs(bundle)
    ctx_rows = [r for r in results if r.identity.endswith("context-weight")]
    assert all("skipped" in r.note for r in ctx_rows)
    zero_rows = [r for r in results if r.identity.endswith("weight-zero")]
    assert all(r.passed for r in zero_rows)


def test_report_json_shape(z21_bundle):
    report = run_suite(z21_bundle, "positivity")
    data = report.to_json()
    assert set(data) == {"suite", "context", "group_order", "passed", "results"}
    for row in data["results"]:
        assert set(row) == {
            "identity",
            "max_residual",
            "tolerance",
            "passed",
            "convention",
            "note",
        }
        assert isinstance(row["passed"], bool)
        assert isinstance(row["max_residual"], float)
