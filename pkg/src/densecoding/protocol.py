"""End-to-end dense coding pipelines, with and without measurement protection.

Plan A sends both halves of a Bell pair through amplitude damping and then
encodes. Plan B wraps the damping between a weak measurement and a reversal
measurement, keeping only the heralded branch.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .channel import amplitude_damping_kraus, apply_two_qubit_channel, check_unit_interval
from .coding import average_encoded_state, chi1_closed_form
from .errors import InvalidParameter, PostSelectionImpossible
from .measurement import POSTSELECT_TOL, apply_filter, reversal_filter, weak_filter
from .qmat import check_density_matrix, ket, projector, von_neumann_entropy

ROOT_TOL = 1e-10
MIN_WIDTH = 1e-8
MODES = ("plan_a", "plan_b", "plan_b_qstar")
AXES = ("d", "p", "q")

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateStrengthWarning(UserWarning):
    """q* was pinned to 1 because the protected branch collapses."""


@dataclass
class PlanResult:
    d: float
    p: float
    q: float
    state: np.ndarray | None = field(repr=False)
    entropy_state: float | None
    entropy_avg: float | None
    capacity: float | None
    success_prob: float
    degenerate: bool = False

    @property
    def chi_times_T(self) -> float | None:
        """Capacity weighted by the heralding probability.

        Not a quantity from the capacity analysis itself; reported as an
        effective throughput per attempted run.
        """
        if self.capacity is None:
            return None
        return self.capacity * self.success_prob

    def as_row(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "q": self.q,
            "S_rho": self.entropy_state,
            "S_rho_star": self.entropy_avg,
            "chi": self.capacity,
            "T": self.success_prob,
            "chi_times_T": self.chi_times_T,
            "degenerate": self.degenerate,
        }


@dataclass
class SweepTable:
    axes: dict[str, list[float]]
    mode: str
    rows: list[PlanResult]


def bell_state() -> np.ndarray:
    psi = (ket("00") + ket("11")) / math.sqrt(2.0)
    return projector(psi)


def _result(d, p, q, state, prob) -> PlanResult:
    s_state = von_neumann_entropy(state)
    s_avg = von_neumann_entropy(average_encoded_state(state))
    return PlanResult(d, p, q, state, s_state, s_avg, s_avg - s_state, prob)


def run_plan_a(d: float) -> PlanResult:
    kraus = amplitude_damping_kraus(d)
    rho1 = apply_two_qubit_channel(bell_state(), kraus, kraus)
    return _result(float(d), 0.0, 0.0, rho1, 1.0)


def run_plan_b(d: float, p: float, q: float) -> PlanResult:
    """Weak measurement, damping on both qubits, reversal measurement.

    ``success_prob`` is the product of the two heralding probabilities.
    """
    kraus = amplitude_damping_kraus(d)
    weak = apply_filter(bell_state(), weak_filter(p, p))
    damped = apply_two_qubit_channel(weak.state, kraus, kraus)
    rev = apply_filter(damped, reversal_filter(q, q))
    prob = weak.success_prob * rev.success_prob
    if prob <= POSTSELECT_TOL:
        raise PostSelectionImpossible(f"overall heralding probability {prob:.3e}")
    return _result(float(d), float(p), float(q), rev.state, prob)


def rho2_closed_form(d: float, p: float, q: float) -> tuple[np.ndarray, float]:
    """Protected state and heralding probability from the X-state entries.

    The |11><11| entry is (1-p)^2 (1-d)^2 / 2. The printed version of this
    entry, (1-d)^2 (1-q)^2 / 2, does not follow from the pipeline: it gives a
    non-positive matrix at p = 0.9, q = 0.95, d = 0.5.
    """
    d = check_unit_interval(d, "damping d")
    p = check_unit_interval(p, "weak strength p")
    q = check_unit_interval(q, "reversal strength q")
    r11 = (0.5 + 0.5 * d * d * (1 - p) ** 2) * (1 - q) ** 2
    r22 = 0.5 * (1 - d) * d * (1 - p) ** 2 * (1 - q)
    r44 = 0.5 * (1 - p) ** 2 * (1 - d) ** 2
    r14 = 0.5 * (1 - d) * (1 - p) * (1 - q)
    unnorm = np.array(
        [[r11, 0, 0, r14],
         [0, r22, 0, 0],
         [0, 0, r22, 0],
         [r14, 0, 0, r44]],
        dtype=complex,
    )
    total = r11 + 2 * r22 + r44
    if total <= POSTSELECT_TOL:
        raise PostSelectionImpossible(f"heralding probability {total:.3e}")
    return unnorm / total, float(total)


def optimal_reversal_strength(d: float, p: float) -> float:
    """Reversal strength that equalizes the |00> and |11> populations.

    At this q the encoded average is exactly I/4, so S(rho*) = 2. For
    ``d == 1`` or ``p == 1`` the value is pinned to 1 and a
    :class:`DegenerateStrengthWarning` is issued, since no branch survives.
    """
    d = check_unit_interval(d, "damping d")
    p = check_unit_interval(p, "weak strength p")
    if d == 1.0 or p == 1.0:
        warnings.warn(
            f"q* is degenerate at d={d}, p={p}; returning 1",
            DegenerateStrengthWarning,
            stacklevel=2,
        )
        return 1.0
    keep = (1 - p) * (1 - d)
    return 1.0 - keep / math.sqrt(1.0 + d * d * (1 - p) ** 2)


def golden_section(f, a: float, b: float, tol: float = MIN_WIDTH) -> tuple[float, float]:
    """Shrink [a, b] around the minimum of a unimodal ``f`` to width <= tol."""
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INV_PHI * (b - a)
            fe = f(e)
    return a, b


def find_min_chi1() -> tuple[float, float]:
    """Damping that minimizes the unprotected capacity, and that minimum."""
    a, b = golden_section(chi1_closed_form, 0.0, 1.0)
    d_star = 0.5 * (a + b)
    return d_star, chi1_closed_form(d_star)


def find_capacity_threshold() -> float:
    """Damping above which the unprotected capacity drops below one bit."""
    d_min, _ = find_min_chi1()
    root = bisect(lambda d: chi1_closed_form(d) - 1.0, 0.0, d_min,
                  xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(chi1_closed_form(root) - 1.0) > ROOT_TOL:
        raise ArithmeticError(f"threshold bisection stalled at d={root!r}")
    return float(root)


def _degenerate_row(d, p, q) -> PlanResult:
    try:
        _, prob = rho2_closed_form(d, p, q)
    except PostSelectionImpossible:
        prob = 0.0
    return PlanResult(d, p, q, None, None, None, None, prob, degenerate=True)


def sweep(axes: dict, mode: str = "plan_a") -> SweepTable:
    """Evaluate a pipeline over the Cartesian product of the given grids.

    Axes are iterated in the fixed order d, p, q with d outermost. Points
    where post-selection is impossible become rows with ``degenerate=True``
    and no capacity rather than aborting the sweep.
    """
    if mode not in MODES:
        raise InvalidParameter(f"unknown sweep mode {mode!r}; expected one of {MODES}")
    needed = {"plan_a": ("d",), "plan_b": AXES, "plan_b_qstar": ("d", "p")}[mode]
    extra = set(axes) - set(needed)
    missing = [name for name in needed if name not in axes]
    if missing or extra:
        raise InvalidParameter(
            f"mode {mode} needs axes {needed}; missing {missing}, unexpected {sorted(extra)}"
        )
    grids = {name: [check_unit_interval(v, name) for v in np.atleast_1d(axes[name])]
             for name in needed}

    rows = []
    for point in itertools.product(*(grids[name] for name in needed)):
        values = dict(zip(needed, point))
        d = values["d"]
        if mode == "plan_a":
            rows.append(run_plan_a(d))
            continue
        p = values["p"]
        if mode == "plan_b_qstar":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateStrengthWarning)
                q = optimal_reversal_strength(d, p)
        else:
            q = values["q"]
        try:
            rows.append(run_plan_b(d, p, q))
        except PostSelectionImpossible:
            rows.append(_degenerate_row(d, p, q))
    return SweepTable(axes=grids, mode=mode, rows=rows)


def validate_result(res: PlanResult) -> None:
    """Check the stored state and the bookkeeping identities of a result."""
    if res.degenerate:
        return
    check_density_matrix(res.state, "plan state")
    if abs(res.capacity - (res.entropy_avg - res.entropy_state)) > 1e-12:
        raise ArithmeticError("capacity does not equal the entropy difference")
    if not (-1e-10 <= res.capacity <= 2 + 1e-10 and 0 <= res.success_prob <= 1):
        raise ArithmeticError("capacity or success probability out of range")
