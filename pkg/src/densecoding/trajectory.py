"""Seeded Monte Carlo unraveling of the protected (Plan B) pipeline.

Each trial starts from the Bell vector and draws four uniforms: heralding of
the weak measurement, the Kraus branch of qubit A, the Kraus branch of qubit B
and heralding of the reversal measurement. Uniforms come from a Philox
counter-based generator keyed by ``seed``; trial ``i`` consumes exactly the
four doubles at stream position ``4*i``, so results do not depend on how the
trials are chunked.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import amplitude_damping_kraus
from .errors import InvalidParameter
from .measurement import reversal_filter, weak_filter
from .qmat import ket, projector

DRAWS_PER_TRIAL = 4
DEFAULT_CHUNK = 1 << 16

_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class McEstimate:
    trials: int
    successes: int
    t_hat: float
    t_stderr: float
    state_hat: np.ndarray | None = field(compare=False, repr=False)
    seed: int

    def __eq__(self, other):
        if not isinstance(other, McEstimate):
            return NotImplemented
        same_state = (
            (self.state_hat is None and other.state_hat is None)
            or (self.state_hat is not None and other.state_hat is not None
                and np.array_equal(self.state_hat, other.state_hat))
        )
        return (self.trials, self.successes, self.t_hat, self.t_stderr, self.seed) == (
            other.trials, other.successes, other.t_hat, other.t_stderr, other.seed
        ) and same_state


@dataclass
class _BranchTable:
    """Precomputed probabilities and post-branch states of one trial."""

    p_weak: float
    p_a: np.ndarray          # (2,)  P(Kraus i on A)
    p_b: np.ndarray          # (2,2) P(Kraus j on B | i)
    p_rev: np.ndarray        # (2,2) P(reversal heralds | i, j)
    final: list              # final[i][j] normalized vector or None


def _normalize(v):
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0.0:
        return None, 0.0
    return v / math.sqrt(norm2), norm2


def _branch_table(d, p, q) -> _BranchTable:
    kraus = amplitude_damping_kraus(d)
    m_weak = weak_filter(p, p).op
    m_rev = reversal_filter(q, q).op

    psi_w, p_weak = _normalize(m_weak @ ((ket("00") + ket("11")) / math.sqrt(2.0)))
    p_a = np.zeros(2)
    p_b = np.zeros((2, 2))
    p_rev = np.zeros((2, 2))
    final = [[None, None], [None, None]]
    if psi_w is None:
        return _BranchTable(0.0, p_a, p_b, p_rev, final)
    for i, ea in enumerate(kraus):
        psi_a, p_a[i] = _normalize(np.kron(ea, _I2) @ psi_w)
        if psi_a is None:
            continue
        for j, eb in enumerate(kraus):
            psi_ab, p_b[i, j] = _normalize(np.kron(_I2, eb) @ psi_a)
            if psi_ab is None:
                continue
            final[i][j], p_rev[i, j] = _normalize(m_rev @ psi_ab)
    return _BranchTable(p_weak, p_a, p_b, p_rev, final)


def _trial_outcome(table: _BranchTable, u) -> tuple[int, int] | None:
    """Branch (i, j) of a single heralded trial, or None if rejected."""
    if not u[0] < table.p_weak:
        return None
    i = 0 if u[1] < table.p_a[0] else 1
    j = 0 if u[2] < table.p_b[i, 0] else 1
    if not u[3] < table.p_rev[i, j]:
        return None
    return i, j


def _count_chunk(table: _BranchTable, u: np.ndarray) -> np.ndarray:
    """Vectorized :func:`_trial_outcome` over rows of ``u``; returns 2x2 counts."""
    weak_ok = u[:, 0] < table.p_weak
    i = (u[:, 1] >= table.p_a[0]).astype(np.intp)
    j = (u[:, 2] >= table.p_b[i, 0]).astype(np.intp)
    rev_ok = u[:, 3] < table.p_rev[i, j]
    ok = weak_ok & rev_ok
    counts = np.zeros((2, 2), dtype=np.int64)
    np.add.at(counts, (i[ok], j[ok]), 1)
    return counts


def uniforms(seed: int, start: int, n: int) -> np.ndarray:
    """The ``(n, 4)`` uniforms used by trials ``start .. start + n - 1``."""
    bitgen = np.random.Philox(key=seed).advance(start)
    return np.random.Generator(bitgen).random((n, DRAWS_PER_TRIAL))


def simulate_plan_b(d: float, p: float, q: float, trials: int, seed: int,
                    chunk_size: int = DEFAULT_CHUNK) -> McEstimate:
    """Estimate the heralding probability and the heralded state by sampling.

    ``state_hat`` is the average of the accepted trials' pure-state
    projectors, or ``None`` when no trial was accepted.
    """
    if int(trials) != trials or trials < 1:
        raise InvalidParameter(f"trials must be a positive integer, got {trials!r}")
    if int(seed) != seed or seed < 0:
        raise InvalidParameter(f"seed must be a non-negative integer, got {seed!r}")
    if chunk_size < 1:
        raise InvalidParameter("chunk_size must be positive")
    trials, seed = int(trials), int(seed)
    table = _branch_table(d, p, q)

    counts = np.zeros((2, 2), dtype=np.int64)
    for start in range(0, trials, chunk_size):
        n = min(chunk_size, trials - start)
        counts += _count_chunk(table, uniforms(seed, start, n))

    successes = int(counts.sum())
    t_hat = successes / trials
    t_stderr = math.sqrt(t_hat * (1.0 - t_hat) / trials)
    state_hat = None
    if successes:
        state_hat = np.zeros((4, 4), dtype=complex)
        for i in (0, 1):
            for j in (0, 1):
                if counts[i, j]:
                    state_hat += counts[i, j] * projector(table.final[i][j])
        state_hat /= successes
    return McEstimate(trials, successes, t_hat, t_stderr, state_hat, seed)
