"""Self-checks run by ``densecoding verify``.

Every check compares two independent routes to the same quantity (or an
algebraic identity) and reports the worst deviation seen against a fixed
tolerance.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import channel, coding, protocol, qmat


@dataclass
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: max_dev={self.value:.3e} tol={self.tol:.0e}"


D_GRID = np.linspace(0.0, 1.0, 101)
COARSE = np.round(np.arange(1, 10) / 10.0, 10)


def check_completeness() -> CheckResult:
    worst = 0.0
    for d in D_GRID:
        ch = channel.amplitude_damping_kraus(d)
        worst = max(worst, channel.completeness_defect(ch),
                    channel.completeness_defect(channel.product_kraus(ch, ch)))
    return CheckResult("kraus_completeness", worst, 1e-14)


def check_dilation_vs_kraus() -> CheckResult:
    worst = 0.0
    bell = protocol.bell_state()
    for d in D_GRID:
        psi = channel.dilated_bell_evolution(d)
        reduced = qmat.partial_trace(qmat.projector(psi), [2, 2, 2, 2], [0, 1])
        ch = channel.amplitude_damping_kraus(d)
        direct = channel.apply_kraus(bell, channel.product_kraus(ch, ch))
        worst = max(worst, float(np.max(np.abs(reduced - direct))))
    return CheckResult("dilation_vs_kraus", worst, 1e-12)


def check_chi1_closed_form() -> CheckResult:
    worst = max(abs(coding.chi1_closed_form(d) - protocol.run_plan_a(d).capacity)
                for d in D_GRID)
    return CheckResult("chi1_closed_form_vs_pipeline", worst, 1e-10)


def check_rho2_closed_form() -> CheckResult:
    worst = 0.0
    for d in COARSE:
        for p in COARSE:
            for q in COARSE:
                res = protocol.run_plan_b(d, p, q)
                state, prob = protocol.rho2_closed_form(d, p, q)
                worst = max(worst, float(np.max(np.abs(state - res.state))),
                            abs(prob - res.success_prob))
    return CheckResult("rho2_closed_form_vs_pipeline", worst, 1e-12)


def check_qstar_entropy() -> CheckResult:
    worst = 0.0
    for d in COARSE:
        for p in COARSE:
            q = protocol.optimal_reversal_strength(d, p)
            worst = max(worst, abs(protocol.run_plan_b(d, p, q).entropy_avg - 2.0))
    return CheckResult("qstar_average_entropy_is_two", worst, 1e-9)


def check_identity_filters() -> CheckResult:
    worst = 0.0
    for d in D_GRID:
        a = protocol.run_plan_a(d)
        b = protocol.run_plan_b(d, 0.0, 0.0)
        worst = max(worst, float(np.max(np.abs(a.state - b.state))),
                    abs(b.success_prob - 1.0))
    return CheckResult("plan_b_identity_filters_is_plan_a", worst, 1e-14)


def random_xstate(rng) -> np.ndarray:
    """Random valid two-qubit X-state with a complex corner coherence."""
    diag = rng.dirichlet(np.ones(4))
    corner = np.sqrt(diag[0] * diag[3]) * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    rho = np.diag(diag).astype(complex)
    rho[0, 3] = corner
    rho[3, 0] = np.conj(corner)
    return rho


def check_jacobi_vs_xstate(n: int = 1000, seed: int = 2024) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        rho = random_xstate(rng)
        dev = np.max(np.abs(qmat.hermitian_spectrum(rho) - qmat.xstate_spectrum(rho)))
        worst = max(worst, float(dev))
    return CheckResult("jacobi_vs_xstate_spectrum", worst, 1e-10)


CHECKS = (
    check_completeness,
    check_dilation_vs_kraus,
    check_chi1_closed_form,
    check_rho2_closed_form,
    check_qstar_entropy,
    check_identity_filters,
    check_jacobi_vs_xstate,
)


def run_checks() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        name = check.__name__.removeprefix("check_")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(f"{name} ({type(exc).__name__}: {exc})",
                                       float("inf"), 0.0))
    return results
