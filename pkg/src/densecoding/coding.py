"""Dense coding ensemble, its average state and the Holevo capacity."""

import math

import numpy as np
from scipy.special import xlogy

from .channel import check_unit_interval
from .qmat import tensor_product, von_neumann_entropy

# message index -> bit pair label, fixes the iteration order of the ensemble
MESSAGE_LABELS = ("00", "01", "10", "11")

_I2 = np.eye(2, dtype=complex)


def encoding_unitaries() -> dict[str, np.ndarray]:
    """Alice's four local operations keyed by bit pair ``"ab"``.

    ``U_ab |x> = exp(i pi a x) |x + b mod 2>``, so U_10 is a phase flip,
    U_01 a bit flip and U_11 both.
    """
    units = {}
    for label in MESSAGE_LABELS:
        a, b = int(label[0]), int(label[1])
        u = np.zeros((2, 2), dtype=complex)
        for x in (0, 1):
            u[(x + b) % 2, x] = (-1.0) ** (a * x)  # exp(i pi a x), exactly
        units[label] = u
    return units


def average_encoded_state(rho) -> np.ndarray:
    """Uniform mixture of the four encoded states, encoding on qubit A."""
    rho = np.asarray(rho, dtype=complex)
    total = np.zeros_like(rho)
    for u in encoding_unitaries().values():
        big = tensor_product(u, _I2)
        total += big @ rho @ big.conj().T
    return total / 4.0


def holevo_capacity(rho) -> float:
    """Dense coding capacity ``S(rho*) - S(rho)`` in bits."""
    return von_neumann_entropy(average_encoded_state(rho)) - von_neumann_entropy(rho)


def _xlog2x(x: float) -> float:
    return float(xlogy(x, x)) / math.log(2.0)


def chi1_closed_form(d: float) -> float:
    """Capacity of the Bell pair after amplitude damping, in closed form.

    The averaged state is diagonal with entries (1 +/- d)/4 (each twice); the
    damped state has eigenvalues d(1-d)/2 (twice) and
    (1 - d + d^2 +/- sqrt(1 - 2d + 2d^2))/2.

    Note the published expression carries a ``+`` on the (1-d)/2 term; the
    sign must be negative for the formula to equal S(rho*) - S(rho).
    """
    d = check_unit_interval(d, "damping d")
    root = math.sqrt(1.0 - 2.0 * d + 2.0 * d * d)
    lam_plus = 0.5 * (1.0 - d + d * d + root)
    lam_minus = 0.5 * (1.0 - d + d * d - root)
    s_avg = -2.0 * (_xlog2x((1.0 - d) / 4.0) + _xlog2x((1.0 + d) / 4.0))
    s_state = -(2.0 * _xlog2x(0.5 * d * (1.0 - d))
                + _xlog2x(lam_plus) + _xlog2x(max(lam_minus, 0.0)))
    return s_avg - s_state
