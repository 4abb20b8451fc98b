import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ppmap.resources import printed_input
from services.map_service import (
    ConditionOutcome,
    Input2x2,
    MapParams,
    apply_map,
    block_split,
    closed_form_2x2,
    closed_form_exact,
    max_entangled_projector,
    min_alpha_threshold,
    paper_char_coeffs,
    paper_contraction_entries,
    paper_positivity_conditions,
    paper_threshold_a1,
    paper_threshold_a2,
    threshold_bracket,
)
from utils.errors import (
    BadDimension,
    BlocksNotPsd,
    DimensionMismatch,
    NotPsd,
    SingularBlock,
)
from utils.linalg import herm_eigs, is_psd, operator_norm

reals = st.floats(min_value=-2, max_value=2, allow_nan=False, allow_infinity=False)
nonnegative = st.floats(min_value=0, max_value=2, allow_nan=False, allow_infinity=False)
positive_eighths = st.integers(min_value=1, max_value=16).map(lambda k: k / 8)
signed_eighths = st.integers(min_value=-16, max_value=16).map(lambda k: k / 8)


def test_map_params_rejects_small_n() -> None:
    with pytest.raises(BadDimension):
        MapParams(1, 1.0, 0.0)


def test_projector_is_rank_one_with_unit_trace() -> None:
    projector = max_entangled_projector(3)
    assert np.trace(projector) == pytest.approx(1.0)
    assert np.linalg.matrix_rank(projector) == 1
    assert projector[0, 4] == pytest.approx(1 / 3)


def test_apply_map_identity_at_half_alpha() -> None:
    out = apply_map(MapParams(2, 0.5, 0.0), np.eye(2))
    assert np.array_equal(out, np.eye(4))


def test_apply_map_all_ones_input() -> None:
    out = apply_map(MapParams(2, 1.0, 2.0), np.ones((2, 2)))
    expected = np.array(
        [[3, 0, 2, 0], [0, 2, 1, 2], [2, 1, 2, 0], [0, 2, 0, 3]], dtype=complex
    )
    assert np.array_equal(out, expected)


def test_apply_map_rejects_wrong_input_size() -> None:
    with pytest.raises(DimensionMismatch):
        apply_map(MapParams(2, 1.0, 0.0), np.eye(3))


def test_apply_map_for_n3_has_expected_shape_and_trace() -> None:
    a = np.arange(9, dtype=float).reshape(3, 3)
    out = apply_map(MapParams(3, 1.0, 1.0), a)
    assert out.shape == (9, 9)
    # Tr((A + A^T) (x) I_3) = 6 Tr(A); the flipped projector has trace 1
    assert np.trace(out).real == pytest.approx(6 * np.trace(a) + 1)


@settings(max_examples=200, deadline=None)
@given(st.tuples(nonnegative, reals, reals, nonnegative, reals, reals))
def test_closed_form_is_bit_identical(values: tuple[float, ...]) -> None:
    a, b, c, d, alpha, beta = values
    params = MapParams(2, alpha, beta)
    inp = Input2x2(a, b, c, d)
    assert np.array_equal(apply_map(params, inp.as_matrix()), closed_form_2x2(params, inp))


def test_closed_form_rejects_larger_n() -> None:
    with pytest.raises(BadDimension):
        closed_form_2x2(MapParams(3, 1.0, 0.0), Input2x2(1, 0, 0, 1))


def test_closed_form_exact_on_a1() -> None:
    out = closed_form_exact("3/4", "-2", printed_input("A1"))
    assert out[0, 0] == sympy.Rational(-5, 8)
    assert out[1, 1] == sympy.Rational(3, 8)
    assert out[2, 2] == 3
    assert out[3, 3] == 2
    assert out[1, 2] == -1


def test_block_split_reassembles() -> None:
    params = MapParams(2, 1.0, 0.5)
    out = closed_form_2x2(params, Input2x2(1.0, 0.2, 0.3, 1.5))
    split = block_split(out)
    assert split.v_numeric is not None
    assert np.array_equal(split.reassemble(), out)


def test_block_split_reports_singular_block() -> None:
    out = closed_form_2x2(MapParams(2, 1.0, -4.0), Input2x2(1.0, 0.0, 0.0, 1.0))
    split = block_split(out)
    assert split.v_numeric is None
    assert split.absent_reason == "block X is singular"


def test_block_split_rejects_non_psd_blocks() -> None:
    out = closed_form_2x2(MapParams(2, 1.0, -8.0), Input2x2(1.0, 0.0, 0.0, 1.0))
    with pytest.raises(BlocksNotPsd):
        block_split(out)


def test_printed_contraction_needs_its_domain() -> None:
    with pytest.raises(SingularBlock):
        paper_contraction_entries(Input2x2(0.0, 0.0, 0.0, 1.0), MapParams(2, 1.0, 0.0))
    with pytest.raises(SingularBlock):
        paper_char_coeffs(Input2x2(1.0, 0.0, 0.0, 1.0), MapParams(2, 1.0, -4.0))


def test_char_coeffs_agree_on_symmetric_instance() -> None:
    coeffs = paper_char_coeffs(Input2x2(1.0, 1.0, 1.0, 1.0), MapParams(2, 1.0, 0.0))
    assert coeffs.k1_paper == pytest.approx(2.0)
    assert coeffs.k2_paper == pytest.approx(4.0)
    assert coeffs.gram_trace == pytest.approx(2.0, abs=1e-10)
    assert coeffs.gram_det == pytest.approx(1.0, abs=1e-10)
    assert coeffs.lambda1_paper == pytest.approx(1.0)


def test_char_coeffs_disagree_when_y_vanishes() -> None:
    coeffs = paper_char_coeffs(Input2x2(1.0, 0.0, 0.0, 2.0), MapParams(2, 1.0, 0.0))
    assert coeffs.k1_paper == pytest.approx(2.0)
    assert coeffs.gram_trace == pytest.approx(0.0, abs=1e-12)


def test_positivity_conditions_disagree_with_ground_truth() -> None:
    conditions = paper_positivity_conditions(
        Input2x2(1.0, 1.0, 1.0, 1.0), MapParams(2, 1.0, 0.0)
    )
    assert conditions.char_inequality is ConditionOutcome.FAILS
    assert conditions.paper_verdict is ConditionOutcome.FAILS
    assert conditions.ground_truth_psd
    assert conditions.paper_agrees is False


def test_positivity_conditions_on_identity() -> None:
    conditions = paper_positivity_conditions(
        Input2x2(1.0, 0.0, 0.0, 1.0), MapParams(2, 1.0, 0.0)
    )
    assert conditions.paper_verdict is ConditionOutcome.HOLDS
    assert conditions.paper_agrees is True


def test_positivity_conditions_outside_printed_domain() -> None:
    conditions = paper_positivity_conditions(
        Input2x2(1.0, 0.0, 0.0, 1.0), MapParams(2, 1.0, -8.0)
    )
    assert conditions.aggregate is ConditionOutcome.FAILS
    assert conditions.char_inequality is ConditionOutcome.INAPPLICABLE
    assert conditions.paper_verdict is ConditionOutcome.FAILS
    assert not conditions.ground_truth_psd


def test_threshold_for_identity_is_one_half() -> None:
    assert min_alpha_threshold(np.eye(2), 2.0) == pytest.approx(0.5, abs=1e-8)


def test_threshold_bracket_is_consistent_for_a1() -> None:
    a = np.array(printed_input("A1").evalf().tolist(), dtype=complex)
    bracket = threshold_bracket(a, 2.0)
    assert bracket.hi - bracket.lo <= 1e-9
    assert is_psd(apply_map(MapParams(2, bracket.hi, -2.0), a)).is_psd
    assert not is_psd(apply_map(MapParams(2, bracket.lo, -2.0), a)).is_psd
    # X needs alpha / 2 >= 1, so the printed value cannot be the threshold
    assert bracket.hi >= 2.0 - 1e-6
    assert not is_psd(apply_map(MapParams(2, paper_threshold_a1(2.0), -2.0), a)).is_psd


def test_printed_a2_threshold_is_not_sufficient() -> None:
    a = np.array(printed_input("A2").evalf().tolist(), dtype=complex)
    claimed = paper_threshold_a2(1.0)
    assert claimed < 0.125
    assert not is_psd(apply_map(MapParams(2, claimed, -1.0), a)).is_psd


def test_threshold_bracket_input_checks() -> None:
    with pytest.raises(ValueError):
        threshold_bracket(np.eye(2), 0.0)
    with pytest.raises(NotPsd):
        threshold_bracket(np.diag([-1.0, 1.0]), 1.0)
    with pytest.raises(DimensionMismatch):
        threshold_bracket(np.eye(3), 1.0)


def test_printed_contraction_entries_for_beta_four() -> None:
    v = paper_contraction_entries(Input2x2(1.0, 1.0, 1.0, 1.0), MapParams(2, 1.0, 4.0))
    expected = np.array([[2 / np.sqrt(8), 0], [1, 2 / np.sqrt(8)]])
    assert np.allclose(v, expected, atol=1e-15)


@settings(max_examples=150, deadline=None)
@given(
    positive_eighths,
    positive_eighths,
    positive_eighths,
    st.integers(min_value=-64, max_value=16).map(lambda k: k / 8),
    signed_eighths,
    signed_eighths,
)
def test_contraction_criterion_matches_psd_oracle(
    a: float, d: float, alpha: float, beta: float, b: float, c: float
) -> None:
    assume(4 * min(a, d) * alpha + beta >= 1 / 8)
    params = MapParams(2, alpha, beta)
    inp = Input2x2(a, b, c, d)
    out = closed_form_2x2(params, inp)
    split = block_split(out)
    assert split.v_numeric is not None
    printed = paper_contraction_entries(inp, params)
    assert operator_norm(printed - split.v_numeric) <= 1e-12
    norm = operator_norm(split.v_numeric)
    assume(abs(norm - 1) > 1e-4)
    assert is_psd(out).is_psd == (norm <= 1 + 1e-9)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=0, max_value=16).map(lambda k: k / 8),
    st.integers(min_value=0, max_value=16).map(lambda k: k / 8),
    signed_eighths,
    positive_eighths,
)
def test_output_spectrum_is_monotone_in_alpha(a: float, d: float, s: float, gamma: float) -> None:
    assume(s * s <= a * d)
    inp = Input2x2(a, s, s, d)
    minima = []
    for alpha in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0):
        out = closed_form_2x2(MapParams(2, alpha, -gamma), inp)
        minima.append(herm_eigs(out)[0][0])
        scale = max(1.0, operator_norm(out))
        if len(minima) > 1:
            assert minima[-1] >= minima[-2] - 1e-12 * scale
