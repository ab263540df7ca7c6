"""Acceptance suite: one test per validation criterion.

Each test prints a PASS/FAIL line (run pytest with -s to see them all)
and asserts the criterion outcome.  The criteria are implemented in
ramanrabi.validation and shared with the ``ramanrabi validate`` CLI.

A6 is expected to fail with the reference parameters: the 10% agreement
target between the second-order effective frequency and the integrated
dynamics is not attainable at the nonzero amplitude offsets (the exact
quasi-energy gap deviates by 20-32% there at coupling ratio 0.77; the
deviation was confirmed independently with Floquet monodromy
eigenvalues and an independent adaptive integrator).  The criterion is
asserted as stated rather than loosened.
"""

import pytest

from ramanrabi.scenarios import DEFAULTS
from ramanrabi.validation import ALL_CRITERIA


@pytest.fixture(scope="module")
def config():
    return dict(DEFAULTS)


def _run(config, criterion):
    result = ALL_CRITERIA[criterion](config)
    status = "PASS" if result.passed else "FAIL"
    print(f"\n[{status}] {result.criterion}: {result.description} "
          f"({result.seconds:.1f}s)")
    for line in result.details:
        print(f"    {line}")
    return result


def test_a1_zero_crossing_amplitudes(config):
    assert _run(config, "A1").passed


def test_a2_coupling_ratio(config):
    assert _run(config, "A2").passed


def test_a3_degenerate_frequencies(config):
    assert _run(config, "A3").passed


def test_a4_averaging_oracle_equivalence(config):
    assert _run(config, "A4").passed


def test_a5_closed_form_effective_identity(config):
    assert _run(config, "A5").passed


def test_a6_full_oracle_frequency_agreement(config):
    result = _run(config, "A6")
    assert result.passed, (
        "known spec-level failure: the second-order closed form deviates "
        "beyond 10% from the exact dynamics at the nonzero amplitude "
        "offsets (see decisions ledger); details: "
        + "; ".join(result.details))


def test_a7_envelope_visibility(config):
    assert _run(config, "A7").passed


def test_a8_doublet_splitting_and_singlet(config):
    assert _run(config, "A8").passed


def test_a9_phase_dependence(config):
    assert _run(config, "A9").passed


def test_a10_property_suites(config):
    assert _run(config, "A10").passed
