import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_conditional_covariance
from qet_repeater.errors import ConditioningWarning, DomainError
from qet_repeater.monolithic import (
    Correction,
    PartitionedCovariance,
    analyze,
    bob_correction,
    conditional_endpoint_covariance,
    induced_norm,
    induced_norm_sweep,
    injected_energy,
    parity_sign,
    partition,
    success_probability,
    total_cost,
)
from qet_repeater.xy_chain import ChainParams, correlation_xx, ground_covariance


def _partition(n, h=1.5, g=1.0):
    return partition(ground_covariance(ChainParams(n, h, g)))


class TestPartition:
    def test_shapes(self):
        p = _partition(3)
        assert p.bulk_block.shape == (2, 2)
        assert _partition(100).cross_block.shape == (4, 196)

    @pytest.mark.parametrize("n", [3, 4, 9])
    def test_lossless(self, n):
        cov = ground_covariance(ChainParams(n, 1.2, 0.5))
        p = partition(cov)
        assert np.array_equal(p.assemble(), cov.matrix)
        assert np.max(np.abs(p.bulk_block + p.bulk_block.T)) < 1e-10

    def test_too_small(self):
        with pytest.raises(DomainError):
            partition(ground_covariance(ChainParams(2, 1.5, 1.0)))


class TestSchur:
    def test_decoupled_endpoints(self):
        p = _partition(5)
        decoupled = PartitionedCovariance(p.endpoint_block, p.bulk_block, np.zeros_like(p.cross_block))
        assert np.array_equal(conditional_endpoint_covariance(decoupled), p.endpoint_block)
        assert induced_norm(decoupled) == 0.0

    @pytest.mark.parametrize("n", range(3, 9))
    @pytest.mark.parametrize("h, g", [(1.2, 0.5), (1.5, 1.0), (2.0, 0.5)])
    def test_matches_dense_inverse_route(self, n, h, g):
        cov = ground_covariance(ChainParams(n, h, g))
        schur = conditional_endpoint_covariance(partition(cov))
        np.testing.assert_allclose(schur, dense_conditional_covariance(cov.matrix), atol=1e-8)
        assert np.max(np.abs(schur + schur.T)) < 1e-10

    def test_enhances_endpoint_element(self):
        cov = ground_covariance(ChainParams(4, 1.5, 1.0))
        schur = conditional_endpoint_covariance(partition(cov))
        bare = abs(correlation_xx(cov, 1, 4))
        assert np.max(np.abs(schur[:2, 2:])) > bare

    def test_singular_bulk_warns(self):
        p = _partition(4)
        singular = PartitionedCovariance(p.endpoint_block, np.zeros_like(p.bulk_block), p.cross_block)
        with pytest.warns(ConditioningWarning):
            out = conditional_endpoint_covariance(singular)
        assert np.array_equal(out, p.endpoint_block)

    def test_regular_bulk_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            conditional_endpoint_covariance(_partition(10))

    def test_tol_must_be_positive(self):
        with pytest.raises(DomainError):
            conditional_endpoint_covariance(_partition(4), tol=0.0)


class TestInducedNorm:
    def test_small_chain_positive(self):
        assert induced_norm(_partition(3)) > 0

    def test_sweep_shape(self):
        sweep = induced_norm_sweep([3, 5, 7], 1.5, 1.0)
        assert [n for n, _ in sweep] == [3, 5, 7]
        assert all(v > 0 for _, v in sweep)

    def test_sweep_domain(self):
        with pytest.raises(DomainError):
            induced_norm_sweep([5], 0.9, 1.0)

    @pytest.mark.parametrize("n", [5, 12, 30])
    def test_pure_state_identity(self, n):
        # for a pure Gaussian state the Schur complement is -(Gamma_S)^{-1}
        p = _partition(n)
        schur = conditional_endpoint_covariance(p)
        np.testing.assert_allclose(schur, -np.linalg.inv(p.endpoint_block), atol=1e-10)


class TestParity:
    @pytest.mark.parametrize("n, sign, corr", [(5, 1, Correction.IDENTITY), (6, -1, Correction.PAULI_Z), (2, -1, Correction.PAULI_Z)])
    def test_rule(self, n, sign, corr):
        assert parity_sign(n) == sign
        assert bob_correction(n) is corr

    @given(st.integers(2, 10_000))
    def test_identity_iff_odd(self, n):
        assert (bob_correction(n) is Correction.IDENTITY) == (n % 2 == 1)

    def test_rejects_single_site(self):
        with pytest.raises(DomainError):
            parity_sign(1)


class TestCostModel:
    def test_values(self):
        assert success_probability(6) == 0.0625
        assert injected_energy(10, 1.5) == 12.0
        assert total_cost(10, 1.5) == 3072.0
        assert success_probability(3) == 0.5
        assert injected_energy(3, 1.7) == 1.7

    @given(st.integers(3, 200), st.floats(0.01, 100.0))
    def test_cost_is_energy_over_probability(self, n, h):
        assert total_cost(n, h) == injected_energy(n, h) / success_probability(n)

    @given(st.integers(3, 500))
    def test_probability_halves(self, n):
        assert success_probability(n + 1) == success_probability(n) / 2

    def test_log_increment_tends_to_one(self):
        inc = [math.log2(total_cost(n, 1.5)) - math.log2(total_cost(n - 1, 1.5)) for n in range(4, 400)]
        assert all(b < a for a, b in zip(inc, inc[1:]))
        assert all(abs(x - 1) < 0.01 for x in inc[150:])

    @pytest.mark.parametrize("n", [2, 2.5])
    def test_domain(self, n):
        with pytest.raises(DomainError):
            success_probability(n)


def test_report_fields():
    rep = analyze(ChainParams(10, 1.5, 1.0))
    assert rep.success_prob == 2**-8
    assert rep.total_cost == 3072.0
    assert rep.correction is Correction.PAULI_Z
    assert rep.induced_norm > 0
    assert 0 < rep.success_prob <= 1
