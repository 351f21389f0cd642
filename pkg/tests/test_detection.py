import math

import numpy as np
import pytest

from mzparity import (
    CombinedStateParams,
    DISCREPANT_CLOSED_FORMS,
    DomainError,
    NormalizationError,
    NumericalLimitError,
    TwoModeState,
    Frame,
    benchmark_limits,
    berry_wiseman_internal,
    bruteforce_parity_expectation,
    closed_form_derivative,
    closed_form_expectation,
    closed_form_parts,
    closed_form_uncertainty,
    coherent_input,
    combined_input,
    dual_fock_input,
    noon_input,
    noon_internal,
    parity_derivative,
    parity_expectation,
    pezze_smerzi_input,
    phase_uncertainty,
    phase_uncertainty_limit,
    single_fock_input,
    yuen_input,
    yurke_input,
)
from mzparity.detection import _extrapolate_limit, _phi_ladder

SQ2 = 1.0 / math.sqrt(2.0)


def make_state(label, n):
    if label == "coherent":
        return coherent_input(float(n))
    factory = {
        "single-fock": single_fock_input,
        "dual-fock": lambda m: dual_fock_input(m // 2),
        "noon": noon_input,
        "noon-internal": noon_internal,
        "yurke": yurke_input,
        "yuen": yuen_input,
        "modified-yuen": lambda m: yuen_input(m, modified=True),
        "pezze-smerzi": pezze_smerzi_input,
        "berry-wiseman": berry_wiseman_internal,
        "combined": lambda m: combined_input(m, CombinedStateParams(SQ2, SQ2, 0.0)),
    }[label]
    return factory(n)


def test_yuen_has_no_parity_signal():
    for phi in (0.0, 0.3, 1.0, 2.7):
        assert parity_expectation(yuen_input(5), phi) == pytest.approx(0.0, abs=1e-14)
        assert parity_derivative(yuen_input(5), phi) == pytest.approx(0.0, abs=1e-13)


def test_yuen_limit_is_infinite():
    assert phase_uncertainty_limit(yuen_input(3)) == math.inf


def test_dual_fock_at_zero_phase():
    for n_per_mode in (1, 2, 3, 5):
        want = (-1.0) ** n_per_mode
        assert parity_expectation(dual_fock_input(n_per_mode), 0.0) == pytest.approx(want)


def test_noon_internal_two_photons_cosine():
    for phi in np.linspace(-2.0, 2.0, 9):
        assert parity_expectation(noon_internal(2), phi) == pytest.approx(
            -math.cos(2.0 * phi), abs=1e-12
        )


def test_noon_pointwise_uncertainty():
    result = phase_uncertainty(noon_internal(4), 0.2)
    assert result.delta_phi == pytest.approx(0.25, abs=1e-12)
    for n in (1, 3, 8, 15):
        got = phase_uncertainty(noon_input(n), 0.3 / n).delta_phi
        assert got == pytest.approx(1.0 / n, rel=1e-11)


def test_noon_input_matches_internal_route():
    for n in (2, 5, 9):
        for phi in (0.1, 0.7):
            assert parity_expectation(noon_input(n), phi) == pytest.approx(
                parity_expectation(noon_internal(n), phi), abs=1e-11
            )


def test_dual_fock_single_pair_uncertainty():
    result = phase_uncertainty(dual_fock_input(1), 1e-4)
    assert result.delta_phi == pytest.approx(0.5, abs=1e-6)


def test_coherent_limit_is_shot_noise():
    assert phase_uncertainty_limit(coherent_input(16.0)) == pytest.approx(0.25, rel=1e-6)


@pytest.mark.parametrize(
    "label,n,want",
    [
        ("single-fock", 9, 1.0 / 3.0),
        ("single-fock", 25, 0.2),
        ("dual-fock", 8, math.sqrt(2.0) / math.sqrt(8.0 * 10.0)),
        ("yurke", 8, 1.0 / math.sqrt(4.0 * 5.0)),
        ("modified-yuen", 9, 2.0 / 10.0),
        ("pezze-smerzi", 8, 1.0 / math.sqrt(6.0 * 3.0)),
    ],
)
def test_family_limits(label, n, want):
    got = phase_uncertainty_limit(make_state(label, n))
    assert got == pytest.approx(want, rel=1e-6)


def test_pezze_smerzi_two_photon_state_is_phase_blind():
    # j = 1, mu = +-1 is an eigenstate of the rotation: no signal at any phi
    assert phase_uncertainty_limit(pezze_smerzi_input(2)) == math.inf


@pytest.mark.parametrize(
    "label,ns",
    [
        ("single-fock", (1, 2, 7, 16)),
        ("dual-fock", (2, 8, 14)),
        ("yurke", (2, 8, 16)),
        ("yuen", (1, 7, 15)),
        ("modified-yuen", (1, 7, 15)),
        ("pezze-smerzi", (4, 8, 16)),
        ("noon", (1, 5, 12)),
        ("noon-internal", (1, 6, 13)),
        ("coherent", (4, 9)),
    ],
)
def test_engine_agrees_with_quoted_closed_forms(label, ns):
    for n in ns:
        state = make_state(label, n)
        for phi in (0.05, 0.3, 1.1):
            engine = parity_expectation(state, phi)
            quoted = closed_form_expectation(label, n, phi)
            assert engine == pytest.approx(quoted, abs=1e-9)
            engine_d = parity_derivative(state, phi)
            quoted_d = closed_form_derivative(label, n, phi)
            assert engine_d == pytest.approx(quoted_d, abs=1e-8)


def test_discrepant_labels_registered():
    assert DISCREPANT_CLOSED_FORMS == frozenset({"berry-wiseman", "combined"})


def test_berry_wiseman_quoted_form_disagrees_with_engine():
    state = berry_wiseman_internal(8)
    phi = 0.3
    engine = parity_expectation(state, phi)
    quoted = closed_form_expectation("berry-wiseman", 8, phi)
    assert abs(engine - quoted) > 0.1
    # the engine, not the quoted form, matches the brute-force oracle
    assert engine == pytest.approx(bruteforce_parity_expectation(state, phi), abs=1e-12)


def test_combined_quoted_form_disagrees_with_engine():
    params = CombinedStateParams(SQ2, SQ2, 0.0)
    state = combined_input(8, params)
    phi = 0.3
    engine = parity_expectation(state, phi)
    quoted = closed_form_expectation("combined", 8, phi, params)
    assert abs(engine - quoted) > 0.05
    assert engine == pytest.approx(bruteforce_parity_expectation(state, phi), abs=1e-12)


def test_combined_zero_phase_parity():
    for n in (4, 6, 10):
        state = combined_input(n, CombinedStateParams(SQ2, SQ2, 0.0))
        assert parity_expectation(state, 0.0) == pytest.approx((-1.0) ** (n // 2), abs=1e-12)


def test_derivative_matches_finite_differences():
    step = 1e-6
    cases = [
        ("single-fock", 7),
        ("dual-fock", 8),
        ("yurke", 12),
        ("modified-yuen", 9),
        ("noon-internal", 5),
        ("berry-wiseman", 10),
        ("combined", 8),
    ]
    for label, n in cases:
        state = make_state(label, n)
        for phi in (0.1, 0.8):
            fd = (
                parity_expectation(state, phi + step)
                - parity_expectation(state, phi - step)
            ) / (2.0 * step)
            an = parity_derivative(state, phi)
            assert abs(an - fd) <= 1e-6 * max(1.0, abs(an))


def test_result_invariants():
    state = yurke_input(8)
    result = phase_uncertainty(state, 0.4)
    assert result.phi == 0.4
    assert -1.0 <= result.expectation <= 1.0
    assert result.variance**2 + result.expectation**2 == pytest.approx(1.0, abs=1e-10)
    assert result.delta_phi == result.variance / abs(result.derivative)


def test_stationary_point_reports_infinity():
    result = phase_uncertainty(noon_internal(2), math.pi / 2.0)
    assert result.expectation == pytest.approx(1.0)
    assert result.delta_phi == math.inf


def test_requires_normalized_state():
    lopsided = TwoModeState({1: [0.5, 0.0]}, Frame.AT_INPUT, "half")
    with pytest.raises(NormalizationError):
        parity_expectation(lopsided, 0.1)


def test_benchmark_limits_values():
    limits = benchmark_limits(4)
    assert limits.shot_noise == pytest.approx(0.5)
    assert limits.heisenberg == pytest.approx(0.25)
    assert benchmark_limits(2).bw_povm == pytest.approx(1.0, abs=0)
    big = benchmark_limits(1000)
    assert big.bw_povm * 1000 == pytest.approx(math.pi, rel=0.01)
    for bad in (0, -2, 1.5):
        with pytest.raises(DomainError):
            benchmark_limits(bad)


def test_closed_form_residues_small_for_standard_families():
    for label, n in [
        ("single-fock", 6),
        ("dual-fock", 6),
        ("yurke", 6),
        ("modified-yuen", 7),
        ("pezze-smerzi", 6),
        ("noon", 7),
    ]:
        for phi in (0.2, 0.9):
            _, imag = closed_form_parts(label, n, phi)
            assert abs(imag) < 1e-12


def test_closed_form_domain_errors():
    with pytest.raises(DomainError):
        closed_form_expectation("squeezed", 4, 0.1)
    with pytest.raises(DomainError):
        closed_form_expectation("yurke", 5, 0.1)
    with pytest.raises(DomainError):
        closed_form_expectation("yuen", 4, 0.1)
    with pytest.raises(DomainError):
        closed_form_expectation("coherent", 0.0, 0.1)
    with pytest.raises(DomainError):
        closed_form_expectation("single-fock", -3, 0.1)
    # quoted coherent envelope has a cusp where cos phi vanishes
    with pytest.raises(DomainError):
        closed_form_derivative("coherent", 4.0, math.pi / 2.0)


def test_closed_form_uncertainty_matches_engine_for_noon():
    quoted = closed_form_uncertainty("noon", 8, 0.1)
    engine = phase_uncertainty(noon_input(8), 0.1)
    assert quoted.delta_phi == pytest.approx(engine.delta_phi, rel=1e-9)


def test_phi_ladder_halves():
    ladder = _phi_ladder(9)
    assert ladder[0] == pytest.approx(1e-3)
    for a, b in zip(ladder, ladder[1:]):
        assert b == pytest.approx(0.5 * a)


def test_extrapolation_all_infinite_is_divergent():
    assert _extrapolate_limit([math.inf] * 7, "t") == math.inf


def test_extrapolation_mixed_finiteness_raises():
    with pytest.raises(NumericalLimitError):
        _extrapolate_limit([1.0, math.inf, 1.0, 1.0, 1.0, 1.0, 1.0], "t")


def test_extrapolation_divergent_ladder_is_infinite():
    values = [1.0, 3.0, 9.0, 27.0, 81.0, 243.0, 729.0]
    assert _extrapolate_limit(values, "t") == math.inf


def test_extrapolation_constant_ladder_is_exact():
    assert _extrapolate_limit([0.7] * 7, "t") == pytest.approx(0.7, abs=1e-15)


def test_extrapolation_power_series_converges():
    phis = _phi_ladder(9)
    values = [2.0 + 0.5 * phi + 3.0 * phi**2 for phi in phis]
    assert _extrapolate_limit(values, "t") == pytest.approx(2.0, rel=1e-9)


def test_extrapolation_noise_raises():
    rng = np.random.default_rng(0)
    values = list(1.0 + 1e-2 * rng.standard_normal(7))
    with pytest.raises(NumericalLimitError):
        _extrapolate_limit(values, "t")
