import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from duforge.errors import ParameterError
from duforge.gates import named_gate, ols_permutation
from duforge.measures import (
    classify,
    entangling_power,
    entangling_power_mc,
    max_entanglement,
    measure,
    op_entanglement,
    op_entanglement_swapped,
    schmidt_spectrum,
    trace_norm_realigned,
    tsallis_entropy,
)
from duforge.sampling import RngSeed, cue_sample
from duforge.tensor_core import ame_state, bipartition_entropies, swap_gate

from .conftest import local_unitary, unitaries


def product_gate(d, seed):
    return local_unitary(d, np.random.default_rng(seed))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_spectrum_of_product(d):
    lam = schmidt_spectrum(product_gate(d, 1))
    np.testing.assert_allclose(lam, [d * d] + [0] * (d * d - 1), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_spectrum_of_swap(d):
    np.testing.assert_allclose(schmidt_spectrum(swap_gate(d)), np.ones(d * d), atol=1e-12)


def test_spectrum_of_cnot():
    np.testing.assert_allclose(schmidt_spectrum(named_gate("cnot")), [2, 2, 0, 0], atol=1e-12)


@given(unitaries())
def test_spectrum_normalized_and_sorted(U):
    lam = schmidt_spectrum(U)
    d = int(round(np.sqrt(U.shape[0])))
    assert abs(lam.sum() - d * d) < 1e-9
    assert np.all(np.diff(lam) <= 1e-12) and lam[-1] >= 0


@given(unitaries())
def test_entanglement_bounds(U):
    d = int(round(np.sqrt(U.shape[0])))
    for E in (op_entanglement(U), op_entanglement_swapped(U)):
        assert -1e-12 <= E <= max_entanglement(d) + 1e-12
    assert -1e-12 <= entangling_power(U) <= (d - 1) / (d + 1) + 1e-12
    assert d - 1e-9 <= trace_norm_realigned(U) <= d * d + 1e-9


@pytest.mark.parametrize("d", [2, 3, 5])
def test_reference_values(d):
    S = swap_gate(d)
    assert abs(op_entanglement(S) - (1 - 1 / d**2)) < 1e-12
    assert abs(op_entanglement_swapped(S)) < 1e-12
    assert abs(op_entanglement_swapped(np.eye(d * d)) - (1 - 1 / d**2)) < 1e-12
    assert abs(op_entanglement(product_gate(d, 2))) < 1e-12
    assert abs(op_entanglement(named_gate("fourier", d)) - (1 - 1 / d**2)) < 1e-12
    assert abs(trace_norm_realigned(S) - d * d) < 1e-12
    assert abs(trace_norm_realigned(product_gate(d, 3)) - d) < 1e-12
    assert abs(entangling_power(S)) < 1e-12


def test_swap_d2_is_three_quarters():
    assert abs(op_entanglement(swap_gate(2)) - 0.75) < 1e-15


@given(unitaries())
def test_swapped_entanglement_two_routes(U):
    d = int(round(np.sqrt(U.shape[0])))
    assert abs(op_entanglement_swapped(U) - op_entanglement(U @ swap_gate(d))) < 1e-12


@given(unitaries())
def test_tsallis_special_cases(U):
    d = int(round(np.sqrt(U.shape[0])))
    assert abs(tsallis_entropy(U, 2) - op_entanglement(U)) < 1e-12
    assert abs(tsallis_entropy(U, 0.5) - 2 * (trace_norm_realigned(U) / d - 1)) < 1e-10


@pytest.mark.parametrize("q", [0.3, 0.5, 2, 3.5])
def test_tsallis_of_product_is_zero(q):
    assert abs(tsallis_entropy(product_gate(3, 4), q)) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4])
def test_tsallis_half_of_swap(d):
    assert abs(tsallis_entropy(swap_gate(d), 0.5) - 2 * (d - 1)) < 1e-12


@pytest.mark.parametrize("q", [0, -1, 1])
def test_tsallis_rejects_bad_exponent(q):
    with pytest.raises(ParameterError):
        tsallis_entropy(swap_gate(2), q)


def test_entangling_power_exact_values():
    assert abs(entangling_power(named_gate("cnot")) - 2 / 9) < 1e-12
    assert abs(entangling_power(ols_permutation(3)) - 1 / 2) < 1e-12
    assert abs(entangling_power(ols_permutation(4)) - 3 / 5) < 1e-12


@given(unitaries(), st.integers(0, 2**32 - 1))
def test_local_invariance(U, seed):
    g = np.random.default_rng(seed)
    d = int(round(np.sqrt(U.shape[0])))
    V = local_unitary(d, g) @ U @ local_unitary(d, g)
    assert abs(op_entanglement(V) - op_entanglement(U)) < 1e-10
    assert abs(op_entanglement_swapped(V) - op_entanglement_swapped(U)) < 1e-10
    assert abs(entangling_power(V) - entangling_power(U)) < 1e-10


def test_mc_on_swap_is_exact_zero():
    est, se = entangling_power_mc(swap_gate(3), 1000, RngSeed(0))
    assert abs(est) < 1e-12 and se < 1e-12


def test_mc_matches_closed_form_cnot():
    est, se = entangling_power_mc(named_gate("cnot"), 100_000, RngSeed(1))
    assert abs(est - 2 / 9) < 3 * se


def test_mc_matches_closed_form_random_qutrit_gate():
    U = cue_sample(9, RngSeed(77))
    est, se = entangling_power_mc(U, 100_000, RngSeed(78))
    assert abs(est - entangling_power(U)) < 3 * se


def test_mc_needs_samples():
    with pytest.raises(ParameterError):
        entangling_power_mc(swap_gate(2), 10)


def test_classify_reference_gates():
    assert classify(swap_gate(3)).label == "dual"
    assert classify(np.eye(9)).label == "T_dual"
    assert classify(ols_permutation(3)).label == "two_unitary"
    assert classify(cue_sample(9, RngSeed(0))).label == "generic"
    c = classify(ols_permutation(5))
    assert c.is_dual and c.is_T_dual


@given(unitaries())
def test_ep_maximal_iff_ame(U):
    d = int(round(np.sqrt(U.shape[0])))
    ents = bipartition_entropies(ame_state(U))
    ep_max = abs(entangling_power(U) - (d - 1) / (d + 1)) < 1e-10
    all_max = all(abs(e - max_entanglement(d)) < 1e-10 for e in ents)
    assert ep_max == all_max


def test_measure_record_consistency():
    U = cue_sample(16, RngSeed(5))
    r = measure(U)
    d = 4
    assert abs(r.ep - d**2 * (r.E_U + r.E_US - (1 - 1 / d**2)) / (d + 1) ** 2) < 1e-12
    assert d <= r.trace_norm_R <= d * d
    assert abs(r.tsallis[2.0] - r.E_U) < 1e-12
    assert set(r.as_dict()) >= {"E_U", "E_US", "ep", "trace_norm_R", "tsallis"}
