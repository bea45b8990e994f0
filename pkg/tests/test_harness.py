import json

import numpy as np
import pytest

from drazin import harness
from drazin.drazincore import chain_profile
from drazin.errors import GenerationError, UnknownSuiteError
from drazin.numkernel import ToleranceConfig, matrix_hash

SMALL = harness.SuiteConfig(seed=11, sizes=(2, 4, 6), cases_per_size=6)

# Hashes of corpus matrices for the default configuration (seed 0), frozen
# from a reference run; a change here means the corpus itself changed.
FROZEN_HASHES = {
    (0, 2, 0): "a5f9581bd1bb275d",
    (1, 2, 1): "f2b464c2dd0d0498",
    (57, 3, 3): "923a557e128c9c4a",
    (349, 8, 4): "b563d29b9d0bc791",
}


@pytest.mark.parametrize("ordinal, n, k", list(FROZEN_HASHES))
def test_frozen_corpus_hashes(ordinal, n, k):
    p = harness.case_params(harness.SuiteConfig(), ordinal)
    assert (p["n"], p["index_target"]) == (n, k)
    assert matrix_hash(harness.regenerate(0, ordinal, n, k)) == FROZEN_HASHES[(ordinal, n, k)]


def test_gen_matrix_extremes():
    rng = np.random.default_rng(3)
    a0 = harness.gen_matrix(4, 0, rng)
    assert chain_profile(a0).index == 0
    an = harness.gen_matrix(4, 4, rng)
    assert chain_profile(an).index == 4


def test_gen_matrix_contract():
    with pytest.raises(ValueError):
        harness.gen_matrix(3, 4, np.random.default_rng(0))
    with pytest.raises(GenerationError):
        harness.gen_matrix(3, 1, np.random.default_rng(0), budget=0)


def test_generated_index_matches_chain_oracle():
    for p, a, _ in harness.corpus(SMALL):
        assert chain_profile(a).index == p["index_target"]


def test_streams_are_independent_of_order():
    a = harness.regenerate(5, 3, 4, 2)
    _ = harness.regenerate(5, 2, 4, 1)
    assert np.array_equal(a, harness.regenerate(5, 3, 4, 2))
    assert not np.array_equal(a, harness.regenerate(6, 3, 4, 2))


def test_config_validation():
    for bad in ({"sizes": ()}, {"sizes": (0,)}, {"cases_per_size": 0}, {"seed": -1}, {"seed": 2**64},
                {"index_targets": (-1,)}, {"workers": 0}):
        with pytest.raises(ValueError):
            harness.SuiteConfig(**bad)


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        harness.run_suite("theorem99", SMALL)


@pytest.mark.parametrize("name", [s for s in harness.SUITES if s != "catalog"])
def test_small_suites_pass(name):
    rep = harness.run_suite(name, SMALL)
    assert rep.failed == 0, [c for c in rep.cases if not c["passed"]][:2]
    assert len(rep.cases) == SMALL.total_cases


def test_catalog_suite_reports_the_accumulation_counterexample():
    rep = harness.run_suite("catalog", SMALL)
    assert len(rep.cases) >= 7
    failed = [c for c in rep.cases if not c["passed"]]
    assert [c["params"]["entry"] for c in failed] == ["harmonic_diagonal"]
    assert all(c["checks"]["mutation_coverage"]["passed"] for c in rep.cases)


def test_report_is_deterministic_and_parallel_safe():
    one = harness.run_suite("theorem4", SMALL)
    two = harness.run_suite("theorem4", SMALL)
    par = harness.run_suite("theorem4", harness.SuiteConfig(seed=11, sizes=(2, 4, 6), cases_per_size=6, workers=4))
    assert one.body_bytes() == two.body_bytes() == par.body_bytes()
    body = json.loads(one.body_bytes())
    assert set(body) == {"suite", "config", "cases", "summary"}
    assert set(body["summary"]) == {"total", "failed", "max_residual"}
    assert "wall_time" in one.to_dict()["summary"]


def test_tolerance_forcing_produces_failures():
    cfg = harness.SuiteConfig(seed=1, sizes=(3,), cases_per_size=4, tolerances=ToleranceConfig(residual_atol=1e-30))
    rep = harness.run_suite("drazin", cfg)
    assert rep.failed > 0


def test_failing_case_regenerates_from_its_record():
    cfg = harness.SuiteConfig(seed=1, sizes=(3, 5), cases_per_size=3, tolerances=ToleranceConfig(residual_atol=1e-30))
    rep = harness.run_suite("drazin", cfg)
    for case in rep.cases:
        if not case["passed"]:
            p = case["params"]
            a = harness.regenerate(p["seed"], case["ordinal"], p["n"], p["index_target"])
            assert matrix_hash(a) == case["matrix_hash"]


def test_sample_lambdas_avoid_spectrum():
    a = np.diag([0.0, 1.0, 2.0])
    lams = harness.sample_lambdas(a, np.random.default_rng(0))
    assert len(lams) == 6
    for z in lams[3:]:
        assert min(abs(z - e) for e in (0, 1, 2)) >= 0.1
