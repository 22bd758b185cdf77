import math

import numpy as np
import pytest

from conftest import random_density, random_pure, rho1_paper
from densecoding.coding import (
    MESSAGE_LABELS,
    average_encoded_state,
    chi1_closed_form,
    encoding_unitaries,
    holevo_capacity,
)
from densecoding.protocol import bell_state, run_plan_a
from densecoding.qmat import ket, von_neumann_entropy
from densecoding.verify import random_xstate

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])


def average_oracle(rho):
    """Four-term mixture written out with explicit Pauli products."""
    ops = [I2, Z, X, Z @ X]
    return sum(np.kron(u, I2) @ rho @ np.kron(u, I2).conj().T for u in ops) / 4


class TestUnitaries:
    def test_labels_and_order(self):
        assert tuple(encoding_unitaries()) == MESSAGE_LABELS == ("00", "01", "10", "11")

    def test_explicit_matrices(self):
        u = encoding_unitaries()
        np.testing.assert_array_equal(u["00"], I2)
        np.testing.assert_array_equal(u["10"], np.diag([1, -1]))
        np.testing.assert_array_equal(u["01"], X)
        np.testing.assert_array_equal(u["11"], [[0, -1], [1, 0]])

    def test_action_on_basis(self):
        u = encoding_unitaries()
        for x in ("0", "1"):
            np.testing.assert_array_equal(u["00"] @ ket(x), ket(x))
        np.testing.assert_array_equal(u["10"] @ ket("1"), -ket("1"))
        np.testing.assert_array_equal(u["11"] @ ket("0"), ket("1"))
        np.testing.assert_array_equal(u["11"] @ ket("1"), -ket("0"))

    def test_unitary_and_orthogonal(self):
        units = list(encoding_unitaries().values())
        for i, a in enumerate(units):
            assert np.max(np.abs(a.conj().T @ a - I2)) <= 1e-14
            for b in units[i + 1:]:
                assert abs(np.trace(a.conj().T @ b)) <= 1e-14


class TestAverage:
    def test_maximally_mixed_fixed(self):
        np.testing.assert_allclose(average_encoded_state(np.eye(4) / 4), np.eye(4) / 4)

    def test_bell_becomes_maximally_mixed(self):
        np.testing.assert_allclose(average_encoded_state(bell_state()), np.eye(4) / 4,
                                   atol=1e-16)
        np.testing.assert_allclose(average_oracle(bell_state()), np.eye(4) / 4, atol=1e-16)

    def test_x_state_formula(self):
        a, b, e, z = 0.5, 0.15, 0.2, 0.25
        rho = np.diag([a, b, b, e]).astype(complex)
        rho[0, 3] = rho[3, 0] = z
        expect = np.diag([(a + b) / 2, (b + e) / 2, (a + b) / 2, (b + e) / 2])
        np.testing.assert_allclose(average_encoded_state(rho), expect, atol=1e-16)

    def test_matches_oracle(self, rng):
        for _ in range(50):
            rho = random_density(rng, 4)
            np.testing.assert_allclose(average_encoded_state(rho), average_oracle(rho),
                                       atol=1e-15)

    def test_x_states_become_diagonal(self, rng):
        for _ in range(200):
            avg = average_encoded_state(random_xstate(rng))
            assert np.max(np.abs(avg - np.diag(np.diag(avg)))) <= 1e-14


class TestCapacity:
    def test_bell(self):
        assert holevo_capacity(bell_state()) == pytest.approx(2.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert holevo_capacity(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-14)

    def test_damped_bell_half(self):
        assert holevo_capacity(rho1_paper(0.5)) == pytest.approx(0.61, abs=0.005)

    def test_bounds_on_random_states(self, rng):
        for _ in range(1000):
            rank = int(rng.integers(1, 5))
            rho = random_density(rng, 4, rank) if rank > 1 else random_pure(rng, 4)
            chi = holevo_capacity(rho)
            assert -1e-10 <= chi <= 2 + 1e-10


class TestChi1ClosedForm:
    def test_half(self):
        assert chi1_closed_form(0.5) == pytest.approx(0.6095, abs=1e-4)
        assert round(chi1_closed_form(0.5), 2) == 0.61

    def test_endpoints(self):
        assert chi1_closed_form(1.0) == pytest.approx(1.0, abs=1e-12)
        assert chi1_closed_form(0.0) == pytest.approx(2.0, abs=1e-12)

    def test_matches_entropy_difference(self):
        for d in np.linspace(0, 1, 101):
            rho = rho1_paper(d)
            direct = von_neumann_entropy(average_encoded_state(rho)) - von_neumann_entropy(rho)
            assert abs(chi1_closed_form(d) - direct) <= 1e-10

    def test_matches_pipeline(self):
        for d in np.linspace(0, 1, 101):
            assert abs(chi1_closed_form(d) - run_plan_a(d).capacity) <= 1e-10

    def test_printed_sign_is_wrong(self):
        # with a + on the (1-d)/2 term the formula goes negative at d = 0.5
        d = 0.5
        printed = chi1_closed_form(d) + (1 - d) * math.log2((1 - d) / 4)
        assert printed < 0
        assert printed == pytest.approx(-0.89, abs=0.01)
