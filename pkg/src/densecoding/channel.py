"""Amplitude damping noise in Kraus form and as an environment dilation.

Basis ordering is |00>, |01>, |10>, |11> with index ``2*a + b`` for qubits
(A, B). In the dilated picture the environment qubits E1 (partner of A) and
E2 (partner of B) are appended after the system, giving the factor order
A, B, E1, E2.
"""

import math

import numpy as np

from .errors import InvalidParameter
from .qmat import check_density_matrix, tensor_product


def check_unit_interval(value, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise InvalidParameter(f"{name} must lie in [0, 1], got {value!r}")
    return value


def amplitude_damping_kraus(d: float) -> tuple[np.ndarray, np.ndarray]:
    """Kraus pair for a single qubit decaying |1> -> |0> with probability ``d``."""
    d = check_unit_interval(d, "damping d")
    e1 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - d)]], dtype=complex)
    e2 = np.array([[0.0, math.sqrt(d)], [0.0, 0.0]], dtype=complex)
    return e1, e2


def product_kraus(ch_a, ch_b) -> list[np.ndarray]:
    """Two-qubit Kraus set ``{eA_i (x) eB_j}`` ordered with i outermost."""
    return [tensor_product(ea, eb) for ea in ch_a for eb in ch_b]


def completeness_defect(ops) -> float:
    """Max-abs entry of ``sum_i K_i^dag K_i - I`` for any square Kraus set."""
    ops = [np.asarray(k, dtype=complex) for k in ops]
    dim = ops[0].shape[1]
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(dim))))


def apply_kraus(rho, ops) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return sum(k @ rho @ k.conj().T for k in ops)


def apply_two_qubit_channel(rho, ch_a, ch_b, validate: bool = True) -> np.ndarray:
    """Send qubit A through ``ch_a`` and qubit B through ``ch_b`` independently."""
    out = apply_kraus(rho, product_kraus(ch_a, ch_b))
    if validate:
        check_density_matrix(out, "channel output")
    return out


def dilated_bell_evolution(d: float) -> np.ndarray:
    """Joint pure state of A, B, E1, E2 after both Bell qubits decay.

    Each excited system qubit leaks into its own vacuum environment via
    ``|1>|0> -> sqrt(1-d)|1>|0> + sqrt(d)|0>|1>``. Returns a length-16 vector
    in A, B, E1, E2 ordering.
    """
    d = check_unit_interval(d, "damping d")
    # single-qubit isometry |x>_S -> sum |s>_S |e>_E, rows indexed 2*s + e
    iso = np.zeros((4, 2), dtype=complex)
    iso[0b00, 0] = 1.0
    iso[0b10, 1] = math.sqrt(1.0 - d)  # stays excited, environment empty
    iso[0b01, 1] = math.sqrt(d)        # decays, environment excited

    bell = (np.eye(4)[0b00] + np.eye(4)[0b11]) / math.sqrt(2.0)
    joint = np.kron(iso, iso) @ bell  # factor order A, E1, B, E2
    return joint.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(16)
