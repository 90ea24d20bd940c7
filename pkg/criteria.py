"""
Criteria Module

Single-shot classification of a hypothesis on grad u (or on the vorticity)
into energy-equality and regularity verdicts for the Euler and Navier-Stokes
systems.

Criterion curves are read as "at least" conditions: on a finite time
interval and a bounded domain any exponent pair above the curve embeds into
a pair on it.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum

from config import CITATIONS
from exceptions import ExponentOutOfRange, TopologyObstruction
from exponents import INF, BochnerSpec, Q, scaling_level
from logger import get_logger

logger = get_logger("criteria")

EULER_MIN_SPACE = Q(6, 5)
NSE_MIN_SPACE = Q(3, 2)
BRANCH_SWITCH = Q(9, 5)
REGULARITY_LEVEL = Q(2)


class VerdictLevel(IntEnum):
    """Totally ordered verdict levels."""

    INCONCLUSIVE = 0
    ENERGY_EQUALITY = 1
    STRONG_SOLUTION = 2
    CLASSICAL_SOLUTION = 3

    @property
    def label(self):
        return _LABELS[self]


_LABELS = {
    VerdictLevel.INCONCLUSIVE: "Inconclusive",
    VerdictLevel.ENERGY_EQUALITY: "EnergyEquality",
    VerdictLevel.STRONG_SOLUTION: "StrongSolution",
    VerdictLevel.CLASSICAL_SOLUTION: "ClassicalSolution",
}


class System(Enum):
    EULER = "euler"
    NSE = "nse"


class BoundaryCondition(Enum):
    SLIP = "slip"
    NO_SLIP = "no-slip"


@dataclass(frozen=True)
class DomainMeta:
    """Topology and boundary data needed by the curl-to-gradient transfer."""

    betti_zero: bool
    boundary_condition: BoundaryCondition = BoundaryCondition.SLIP


@dataclass(frozen=True)
class Verdict:
    """A verdict level with its audit trail.

    ``details`` holds extra (key, value) pairs such as the exact and the
    theorem-level exponents reported by the regularity verdict.
    """

    level: VerdictLevel
    citation: str
    witness: BochnerSpec = None
    note: str = ""
    details: tuple = field(default=())

    @property
    def label(self):
        return self.level.label

    @property
    def certifies_energy_equality(self):
        return self.level >= VerdictLevel.ENERGY_EQUALITY

    def detail(self, key, default=None):
        return dict(self.details).get(key, default)

    def __str__(self):
        return f"{self.label} [{self.citation}]"


def required_time_exponent_euler(q):
    """5q/(5q-6), written as 5/(5-6/q) so that q = inf gives 1.

    Raises:
        ExponentOutOfRange: if q <= 6/5
    """
    q = Q(q)
    if q <= EULER_MIN_SPACE:
        raise ExponentOutOfRange(
            f"q = {q} must exceed 6/5 for the Euler gradient criterion [{CITATIONS['euler_gradient']}]"
        )
    return 5 / (5 - 6 * q.reciprocal())


def required_time_exponent_nse(q):
    """q/(2q-3) on (3/2, 9/5), 5q/(5q-6) from 9/5 on. Both give 3 at q = 9/5.

    Raises:
        ExponentOutOfRange: if q <= 3/2
    """
    q = Q(q)
    if q <= NSE_MIN_SPACE:
        raise ExponentOutOfRange(
            f"q = {q} must exceed 3/2 for the NSE gradient criterion [{CITATIONS['nse_gradient_i']}]"
        )
    if q < BRANCH_SWITCH:
        return 1 / (2 - 3 * q.reciprocal())
    return 5 / (5 - 6 * q.reciprocal())


def regularity_class(s):
    """grad u in the scaling class 2/p + 3/q <= 2 with q > 3/2."""
    return scaling_level(s) <= REGULARITY_LEVEL and s.space_exp > NSE_MIN_SPACE


def euler_gradient_verdict(s):
    """Energy equality for Euler from grad u in L^p(L^q).

    Raises:
        ExponentOutOfRange: if q <= 6/5
    """
    q, p = s.space_exp, s.time_exp
    tag = CITATIONS["euler_gradient"]
    p_req = required_time_exponent_euler(q)
    if q >= BRANCH_SWITCH and p >= p_req:
        return Verdict(VerdictLevel.ENERGY_EQUALITY, tag, s)
    if q < BRANCH_SWITCH:
        note = f"q = {q} below 9/5"
    else:
        note = f"p = {p} below required {p_req}"
    return Verdict(VerdictLevel.INCONCLUSIVE, tag, s, note)


def nse_energy_citation(s):
    """Citation of the NSE energy branch that certifies s, or None. Never raises."""
    q, p = s.space_exp, s.time_exp
    if q <= NSE_MIN_SPACE:
        return None
    if p < required_time_exponent_nse(q):
        return None
    return CITATIONS["nse_gradient_i"] if q < BRANCH_SWITCH else CITATIONS["nse_gradient_ii"]


def nse_gradient_verdict(s):
    """Strong solution, energy equality or inconclusive for a Leray-Hopf solution.

    Raises:
        ExponentOutOfRange: if q <= 3/2
    """
    q = s.space_exp
    if q <= NSE_MIN_SPACE:
        raise ExponentOutOfRange(
            f"q = {q} must exceed 3/2 for the NSE gradient criterion [{CITATIONS['nse_gradient_i']}]"
        )
    if regularity_class(s):
        return Verdict(
            VerdictLevel.STRONG_SOLUTION, CITATIONS["scaling"], s,
            f"scaling level {scaling_level(s)} <= 2",
        )
    citation = nse_energy_citation(s)
    if citation is not None:
        return Verdict(VerdictLevel.ENERGY_EQUALITY, citation, s)
    note = f"p = {s.time_exp} below required {required_time_exponent_nse(q)}"
    return Verdict(VerdictLevel.INCONCLUSIVE, CITATIONS["nse_gradient_i"], s, note)


def curl_to_gradient(s, meta):
    """Transfer a vorticity class to grad u unchanged.

    Raises:
        TopologyObstruction: slip boundary on a domain with nonzero first Betti number
    """
    if meta.boundary_condition is BoundaryCondition.SLIP and not meta.betti_zero:
        raise TopologyObstruction(
            "curl controls the gradient under slip conditions only when the first "
            f"Betti number vanishes [{CITATIONS['euler_curl']}]"
        )
    return s


def curl_criterion_verdict(s, meta, system):
    """Gradient verdict applied to the vorticity class after the curl transfer."""
    grad = curl_to_gradient(s, meta)
    if system is System.EULER:
        verdict = euler_gradient_verdict(grad)
        citation = CITATIONS["euler_curl"]
    else:
        verdict = nse_gradient_verdict(grad)
        citation = CITATIONS["nse_curl"] if verdict.level == VerdictLevel.ENERGY_EQUALITY else verdict.citation
    logger.debug(f"curl criterion {system.value} {s}: {verdict.label}")
    return Verdict(verdict.level, citation, grad, verdict.note,
                   (("gradient_citation", verdict.citation),))


def constant_lambda_verdict(system):
    """Constant lambda: the flow is smooth, so the top level of each system applies."""
    witness = BochnerSpec(INF, INF)
    tag = CITATIONS["constant_lambda"]
    if system is System.EULER:
        return Verdict(VerdictLevel.CLASSICAL_SOLUTION, tag, witness, "lambda constant")
    return Verdict(VerdictLevel.STRONG_SOLUTION, tag, witness, "lambda constant")
