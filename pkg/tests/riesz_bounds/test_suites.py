import json
import math

import numpy as np
import pytest

from riesz_bounds.exceptions import UnknownSuite
from riesz_bounds.verify import SUITE_NAMES, run_suite
from riesz_bounds.verify.suites import CheckOutcome, SuiteReport, _run_case, random_density


@pytest.mark.parametrize(
    "name, scale, cases",
    [
        ("identities", 5e-4, 5),
        ("hypergeom", 5e-3, 5),
        ("sharpness", 1e-2, 5),
        ("inequality-fuzz", 5e-4, 5),
        ("moments", 5e-4, 6),
        ("shape-functions", 1e-2, 20),
        ("lp", 0.1, 2),
    ],
)
def test_suite_passes(name: str, scale: float, cases: int) -> None:
    report = run_suite(name, seed=1, scale=scale, max_threads=2)
    assert report.failures == []
    assert report.ok
    assert report.suite == name
    assert report.cases == cases
    assert math.isfinite(report.max_residual)


def test_reports_are_deterministic() -> None:
    first = run_suite("moments", seed=5, scale=1e-3, max_threads=1)
    second = run_suite("moments", seed=5, scale=1e-3, max_threads=4)
    assert first.to_json() == second.to_json()
    other = run_suite("moments", seed=6, scale=1e-3, max_threads=1)
    assert other.to_json() != first.to_json()


def test_unknown_suite() -> None:
    with pytest.raises(UnknownSuite, match="Unknown verification suite 'nosuch'") as exc_info:
        run_suite("nosuch")
    assert exc_info.value.extra["suite"] == "nosuch"
    assert "all" not in SUITE_NAMES


def test_check_outcome() -> None:
    assert CheckOutcome("x", 1e-12, 1e-10).passed
    assert CheckOutcome("x", 0.0, 0.0).passed
    assert not CheckOutcome("x", 1.0, 0.0).passed
    assert not CheckOutcome("x", math.inf, 0.0).passed


def test_report_serialization() -> None:
    failure = {"case": 0, "check": "ode", "residual": 1.0, "tolerance": 0.0, "inputs": {"n": 3}}
    part = SuiteReport("moments", 0, 2, 1.0, [failure])
    assert not part.ok
    assert "parts" not in part.to_dict()
    combined = SuiteReport("all", 0, 2, 1.0, [{"suite": "moments", **failure}], [part])
    document = json.loads(combined.to_json())
    assert document["parts"][0]["suite"] == "moments"
    assert document["failures"][0]["inputs"] == {"n": 3}


@pytest.mark.parametrize("n", [1, 3])
def test_random_density(n: int) -> None:
    first = random_density(np.random.default_rng(11), n)
    assert first == random_density(np.random.default_rng(11), n)
    assert 1 <= len(first.components) <= 4
    assert first.origin_gap > 0.0
    assert all(0.0 < c.weight <= 1.0 for c in first.components)
    one_sided = random_density(np.random.default_rng(11), n, max_components=6, two_sided=False)
    assert not any(c.reflect for c in one_sided.components)


def test_fuzz_keeps_reflected_components() -> None:
    # case 132 draws a mirrored first component
    report = run_suite("inequality-fuzz", seed=0, scale=0.03, max_threads=2)
    assert report.cases == 300
    assert report.failures == []


def test_all_suites() -> None:
    report = run_suite("all", seed=0, scale=1e-3, max_threads=2)
    assert [part.suite for part in report.parts] == list(SUITE_NAMES)
    assert report.failures == []
    assert report.cases == sum(part.cases for part in report.parts)


def test_case_errors_become_failures() -> None:
    def broken() -> list:
        return [CheckOutcome("ratio", 1.0 / 0.0, 0.0)]

    outcomes = _run_case(broken)
    assert [outcome.check for outcome in outcomes] == ["error"]
    assert not outcomes[0].passed
    assert outcomes[0].inputs["type"] == "ZeroDivisionError"


def test_unexpected_errors_propagate() -> None:
    def broken() -> list:
        raise KeyError("missing")

    with pytest.raises(KeyError):
        _run_case(broken)
