"""Weak and reversal partial-collapse measurements as post-selected filters."""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel import check_unit_interval
from .errors import PostSelectionImpossible
from .qmat import check_density_matrix, tensor_product

POSTSELECT_TOL = 1e-12


@dataclass(frozen=True)
class LocalFilter:
    """Diagonal two-qubit measurement operator with per-qubit strengths.

    ``kind`` is ``"weak"`` (damps the |1> amplitude by sqrt(1 - s)) or
    ``"reversal"`` (damps the |0> amplitude by sqrt(1 - s)).
    """

    kind: str
    s1: float
    s2: float
    op: np.ndarray = field(repr=False, compare=False)

    @property
    def is_identity(self) -> bool:
        return self.s1 == 0.0 and self.s2 == 0.0


class FilterOutcome(NamedTuple):
    state: np.ndarray
    success_prob: float


def _weak_single(p):
    return np.diag([1.0, math.sqrt(1.0 - p)]).astype(complex)


def _reversal_single(q):
    return np.diag([math.sqrt(1.0 - q), 1.0]).astype(complex)


def weak_filter(p1: float, p2: float | None = None) -> LocalFilter:
    """Weak measurement ``M_w(p1, p2)``; ``p2`` defaults to ``p1``."""
    p1 = check_unit_interval(p1, "weak strength p1")
    p2 = p1 if p2 is None else check_unit_interval(p2, "weak strength p2")
    op = tensor_product(_weak_single(p1), _weak_single(p2))
    return LocalFilter("weak", p1, p2, op)


def reversal_filter(q1: float, q2: float | None = None) -> LocalFilter:
    """Reversal measurement ``M_rev(q1, q2)``; ``q2`` defaults to ``q1``."""
    q1 = check_unit_interval(q1, "reversal strength q1")
    q2 = q1 if q2 is None else check_unit_interval(q2, "reversal strength q2")
    op = tensor_product(_reversal_single(q1), _reversal_single(q2))
    return LocalFilter("reversal", q1, q2, op)


def apply_filter(rho, f: LocalFilter, validate: bool = True) -> FilterOutcome:
    """Apply the filter and renormalize on the heralded branch.

    Raises
    ------
    PostSelectionImpossible
        If the branch probability is at most ``POSTSELECT_TOL``.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = f.op @ rho @ f.op.conj().T
    prob = float(np.trace(sigma).real)
    if prob <= POSTSELECT_TOL:
        raise PostSelectionImpossible(
            f"{f.kind} filter ({f.s1}, {f.s2}) heralds with probability {prob:.3e}"
        )
    state = sigma / prob
    if validate:
        check_density_matrix(state, f"{f.kind} filter output")
    return FilterOutcome(state, min(prob, 1.0))
