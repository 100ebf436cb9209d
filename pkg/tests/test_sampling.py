import numpy as np
import pytest
from scipy.stats import ks_2samp

from duforge.errors import ParameterError
from duforge.gates import named_gate
from duforge.measures import op_entanglement
from duforge.sampling import RngSeed, cue_sample, haar_product_state
from duforge.tensor_core import swap_gate, unitarity_defect


def test_cue_unitary_and_columns_normalized():
    U = cue_sample(9, RngSeed(3))
    assert unitarity_defect(U) <= 1e-12 * 9
    np.testing.assert_allclose(np.linalg.norm(U, axis=0), 1, atol=1e-13)


def test_cue_batch_matches_shape():
    Us = cue_sample(4, RngSeed(1), size=(5,))
    assert Us.shape == (5, 4, 4)
    for U in Us:
        assert unitarity_defect(U) < 1e-12


def test_same_seed_same_stream_is_bitwise_reproducible():
    a = cue_sample(16, RngSeed(42, 7))
    b = cue_sample(16, RngSeed(42, 7))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, cue_sample(16, RngSeed(42, 8)))
    assert not np.array_equal(a, cue_sample(16, RngSeed(43, 7)))


def test_substreams_are_distinct():
    base = RngSeed(5)
    mats = [cue_sample(4, base.substream(k)) for k in range(20)]
    assert len({m.tobytes() for m in mats}) == 20
    assert base.substream(3) == RngSeed(5, 3)


@pytest.mark.parametrize("bad", [-1, 2**64])
def test_seed_range(bad):
    with pytest.raises(ParameterError):
        RngSeed(bad)


def test_cue_eigenphases_uniform():
    # Haar measure gives uniformly distributed eigenphases; uncorrected QR does not
    phases = np.angle(np.linalg.eigvals(cue_sample(4, RngSeed(11), size=(3000,)))).ravel()
    counts, _ = np.histogram(phases, bins=8, range=(-np.pi, np.pi))
    expected = phases.size / 8
    assert np.max(np.abs(counts - expected)) < 5 * np.sqrt(expected)


@pytest.mark.parametrize("d,mean", [(2, 0.6), (3, 0.8)])
def test_mean_operator_entanglement(d, mean):
    Us = cue_sample(d * d, RngSeed(2024), size=(2000,))
    assert abs(np.mean(op_entanglement(Us)) - mean) < 0.01


def test_left_invariance_ks():
    # E(VU) and E(U) over independent Haar draws share one distribution
    V = np.array(named_gate("cnot"))
    a = op_entanglement(V @ cue_sample(4, RngSeed(1), size=(2000,)))
    b = op_entanglement(cue_sample(4, RngSeed(2), size=(2000,)))
    crit = 1.628 * np.sqrt(2 / 2000)  # two-sample KS, alpha = 0.01
    assert ks_2samp(a, b).statistic < crit


def test_product_state_factors_normalized():
    a, b = haar_product_state(3, RngSeed(0), size=(100,))
    np.testing.assert_allclose(np.linalg.norm(a, axis=-1), 1, atol=1e-13)
    np.testing.assert_allclose(np.linalg.norm(b, axis=-1), 1, atol=1e-13)


def _linear_entropy(U, a, b, d):
    out = ((a[:, :, None] * b[:, None, :]).reshape(len(a), -1) @ U.T).reshape(len(a), d, d)
    rho = out @ np.swapaxes(out.conj(), 1, 2)
    return 1 - np.sum(np.abs(rho) ** 2, axis=(1, 2))


def test_swap_keeps_products_unentangled():
    a, b = haar_product_state(3, RngSeed(9), size=(100_000,))
    assert np.max(np.abs(_linear_entropy(swap_gate(3), a, b, 3))) < 1e-12


def test_cnot_mean_entropy():
    a, b = haar_product_state(2, RngSeed(9), size=(100_000,))
    assert abs(_linear_entropy(np.array(named_gate("cnot")), a, b, 2).mean() - 2 / 9) < 0.003


def test_generator_passthrough():
    g = np.random.default_rng(0)
    assert cue_sample(2, g).shape == (2, 2)
    with pytest.raises(ParameterError):
        cue_sample(0, RngSeed())
