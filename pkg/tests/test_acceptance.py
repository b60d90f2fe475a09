"""Acceptance gate: every numbered criterion must hold.

The full suite is executed once per test session; each criterion then
gets its own pass/fail line in the pytest report, with the criterion's
one-line detail attached to any failure.  The tail-scaling criterion
dominates the runtime (most of an hour on one core).
"""

import pytest

from eigtail import selftest


@pytest.fixture(scope="module")
def results():
    outcome = {r.number: r for r in selftest.run(selftest.FULL)}
    print()
    for line in selftest.format_lines(sorted(outcome.values(),
                                             key=lambda r: r.number)):
        print(line)
    return outcome


def _check(outcome, number):
    result = outcome[number]
    assert result.passed, f"criterion {number}: {result.detail}"


def test_criterion_1_exact_partition_identities(results):
    _check(results, 1)


def test_criterion_2_ratio_constants_match_printed_targets(results):
    _check(results, 2)


def test_criterion_3_limit_measure_moments_and_edges(results):
    _check(results, 3)


def test_criterion_4_rate_closed_forms_and_monotonicity(results):
    _check(results, 4)


def test_criterion_5_equilibrium_solver_accuracy(results):
    _check(results, 5)


def test_criterion_6_sampler_bulk_agreement(results):
    _check(results, 6)


def test_criterion_7_tail_scaling_matches_the_rate(results):
    _check(results, 7)


def test_criterion_8_finite_size_bound_property(results):
    _check(results, 8)


def test_criterion_9_cli_determinism_across_workers(results):
    _check(results, 9)
