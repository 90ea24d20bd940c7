"""
Bootstrap Module

Beltrami bootstrap engines. Starting from the energy class and the hypothesis
lambda in L^alpha(L^beta), the identity omega = lambda u is iterated through
Holder products and Sobolev (q < 3) or Morrey (q > 3) lifts. Each step's
gradient class is checked against the Euler or NSE gradient criteria.

Index conventions: the Euler engine numbers the seed step 0, the NSE engine
numbers it 1 so that its steps read p_n = alpha/n on the theorem curve.
"""

from dataclasses import dataclass, replace
from enum import Enum

from config import CITATIONS, DEFAULT_MAX_ITER, ENGINE_DERIVED_NOTE
from criteria import (
    BRANCH_SWITCH,
    System,
    Verdict,
    VerdictLevel,
    nse_energy_citation,
    regularity_class,
    required_time_exponent_euler,
)
from exceptions import CriticalExponent, ExponentOutOfRange, IterationExhausted
from exponents import ENERGY_CLASS, INF, BochnerSpec, Q, holder_combine, scaling_level, sobolev_lift
from logger import get_logger
from regularity import locate_beta, nse_regularity_verdict

logger = get_logger("bootstrap")

EULER_MIN_ALPHA = Q(5, 2)


class LiftRoute(Enum):
    SEED = "Energy"
    SOBOLEV = "SobolevLift"
    BOUNDED = "BoundedLift"


class StopReason(Enum):
    CERTIFIED = "certified"
    REGULAR = "regular"
    BOUNDED_LIFT_CHECKED = "bounded-lift-checked"
    STAGNATION = "stagnation"
    CRITICAL_EXPONENT = "critical-exponent"
    EXHAUSTED = "exhausted"
    OUT_OF_RANGE = "out-of-range"
    MAX_ITER = "max-iter"


@dataclass(frozen=True)
class IterationStep:
    index: int
    grad_space: BochnerSpec
    vel_space: BochnerSpec
    route: LiftRoute
    scaling: object
    energy_certified: bool = False
    regularity_certified: bool = False
    stagnant: bool = False


@dataclass(frozen=True)
class BootstrapTrace:
    lambda_space: BochnerSpec
    system: System
    steps: tuple
    final: Verdict
    n_stop: int
    stop_reason: StopReason
    engine_derived: bool
    n_regular: int = None

    def step(self, index):
        """The step with the given index."""
        for step in self.steps:
            if step.index == index:
                return step
        raise KeyError(f"no step with index {index}")

    @property
    def energy_steps(self):
        return tuple(step for step in self.steps if step.energy_certified)

    @property
    def reaches_regularity(self):
        return self.n_regular is not None


@dataclass(frozen=True)
class ElementaryStep:
    quantity: str
    time_exp: object
    sobolev_order: int
    space_exp: object


@dataclass(frozen=True)
class CrossCheck:
    """Closed-form regularity verdict against the NSE engine for one (alpha, beta)."""

    alpha: object
    beta: object
    closed_form_strong: bool
    engine_strong: bool
    on_curve: bool
    critical_endpoint: bool

    @property
    def agree(self):
        return self.closed_form_strong == self.engine_strong


def beltrami_step(grad, lam, index=0):
    """One bootstrap step from grad u in ``grad`` and lambda in ``lam``.

    Args:
        grad (BochnerSpec): current class of grad u
        lam (BochnerSpec): class of lambda
        index (int, optional): index recorded on the produced step

    Returns:
        IterationStep: the new gradient class with route and scaling level

    Raises:
        ExponentOutOfRange: if the space exponent of grad is not above 1
        CriticalExponent: if the space exponent of grad equals 3
        IterationExhausted: if the new time exponent drops below 1
    """
    q = grad.space_exp
    if q <= 1:
        raise ExponentOutOfRange(f"bootstrap step needs a space exponent above 1, got {q}")
    if q == 3:
        raise CriticalExponent(f"gradient space exponent is exactly 3 at step {index}")

    route = LiftRoute.SOBOLEV if q < 3 else LiftRoute.BOUNDED
    vel = BochnerSpec(grad.time_exp, sobolev_lift(q))
    new_grad = holder_combine(vel, lam)
    if new_grad.time_exp < 1:
        raise IterationExhausted(
            f"time exponent {new_grad.time_exp} below 1 at step {index}"
        )
    return IterationStep(
        index=index,
        grad_space=new_grad,
        vel_space=vel,
        route=route,
        scaling=scaling_level(new_grad),
        stagnant=not new_grad.space_exp > q,
    )


def on_theorem_curve(alpha, beta):
    """beta = 6 alpha/(2 alpha - 5), with beta = inf at alpha = 5/2."""
    alpha, beta = Q(alpha), Q(beta)
    if alpha == EULER_MIN_ALPHA:
        return beta.is_infinite
    if alpha < EULER_MIN_ALPHA or alpha.is_infinite or beta.is_infinite:
        return False
    return beta == 6 * alpha / (2 * alpha - 5)


def _euler_certified(grad):
    q = grad.space_exp
    return q >= BRANCH_SWITCH and grad.time_exp >= required_time_exponent_euler(q)


def _flag(step, system):
    if system is System.EULER:
        return replace(step, energy_certified=_euler_certified(step.grad_space))
    return replace(
        step,
        energy_certified=nse_energy_citation(step.grad_space) is not None,
        regularity_certified=regularity_class(step.grad_space),
    )


def _check_lambda(alpha, beta, tag):
    alpha, beta = Q(alpha), Q(beta)
    if alpha < EULER_MIN_ALPHA:
        raise ExponentOutOfRange(f"alpha = {alpha} below the admissible endpoint 5/2 [{tag}]")
    if beta < 1:
        raise ExponentOutOfRange(f"beta = {beta} below 1 [{tag}]")
    return alpha, beta


def _run(alpha, beta, system, max_iter):
    tag = CITATIONS["euler_beltrami" if system is System.EULER else "nse_beltrami"]
    alpha, beta = _check_lambda(alpha, beta, tag)
    lam = BochnerSpec(alpha, beta)
    first = 0 if system is System.EULER else 1

    seed = holder_combine(ENERGY_CLASS, lam)
    step = _flag(
        IterationStep(first, seed, ENERGY_CLASS, LiftRoute.SEED, scaling_level(seed)),
        system,
    )
    steps = [step]
    reason = None

    while reason is None:
        if system is System.EULER and step.energy_certified:
            reason = StopReason.CERTIFIED
            break
        if system is System.NSE:
            if step.regularity_certified:
                reason = StopReason.REGULAR
                break
            if step.route is LiftRoute.BOUNDED:
                reason = StopReason.BOUNDED_LIFT_CHECKED
                break
        if step.stagnant:
            reason = StopReason.STAGNATION
            break
        if len(steps) > max_iter:
            reason = StopReason.MAX_ITER
            break
        try:
            step = _flag(beltrami_step(step.grad_space, lam, step.index + 1), system)
        except CriticalExponent:
            reason = StopReason.CRITICAL_EXPONENT
        except IterationExhausted:
            reason = StopReason.EXHAUSTED
        except ExponentOutOfRange:
            reason = StopReason.OUT_OF_RANGE
        else:
            steps.append(step)
            logger.debug(
                f"{system.value} step {step.index}: grad {step.grad_space} via {step.route.value}"
            )

    derived = not on_theorem_curve(alpha, beta)
    note = ENGINE_DERIVED_NOTE if derived else ""
    energy = [s for s in steps if s.energy_certified]
    regular = [s for s in steps if s.regularity_certified]

    if regular:
        final = Verdict(VerdictLevel.STRONG_SOLUTION, CITATIONS["scaling"], regular[0].grad_space, note)
    elif energy:
        final = Verdict(VerdictLevel.ENERGY_EQUALITY, tag, energy[0].grad_space, note)
    else:
        final = Verdict(VerdictLevel.INCONCLUSIVE, tag, steps[-1].grad_space, note or reason.value)

    if reason in (StopReason.STAGNATION, StopReason.EXHAUSTED, StopReason.MAX_ITER) and not energy:
        logger.warning(f"{system.value} bootstrap for lambda {lam} stopped without certification: {reason.value}")

    return BootstrapTrace(
        lambda_space=lam,
        system=system,
        steps=tuple(steps),
        final=final,
        n_stop=energy[0].index if energy else steps[-1].index,
        stop_reason=reason,
        engine_derived=derived,
        n_regular=regular[0].index if regular else None,
    )


def euler_beltrami_trace(alpha, beta, max_iter=DEFAULT_MAX_ITER):
    """Euler bootstrap for lambda in L^alpha(L^beta).

    Stops at the first energy-certified step, on stagnation or at max_iter.

    Raises:
        ExponentOutOfRange: if alpha < 5/2 or beta < 1
    """
    return _run(alpha, beta, System.EULER, max_iter)


def nse_beltrami_trace(alpha, beta, max_iter=DEFAULT_MAX_ITER):
    """NSE bootstrap for lambda in L^alpha(L^beta).

    Energy-certified steps do not stop the run. It continues until a step
    lands in the regularity class or the first bounded-lift step has been
    checked, then stops.

    Raises:
        ExponentOutOfRange: if alpha < 5/2 or beta < 1
    """
    return _run(alpha, beta, System.NSE, max_iter)


def euler_required_iterations(q):
    """Number of Euler steps needed from a seed space exponent q in (6/5, 2).

    Raises:
        ExponentOutOfRange: if q is outside (6/5, 2)
    """
    q = Q(q)
    if not (Q(6, 5) < q < 2):
        raise ExponentOutOfRange(f"q = {q} outside (6/5, 2) [{CITATIONS['euler_beltrami']}]")
    if q >= BRANCH_SWITCH:
        return 0
    return ((18 - 10 * q) / (15 * q - 18)).ceil()


def elementary_lambda_trace(p, system):
    """The chain of classes when lambda depends on time only, lambda in L^p(0,T).

    Euler climbs omega through L^{p/k}(H^k) down to L^{p/3}(L^inf).
    NSE stops at grad u in L^{p/2}(L^6).
    """
    p = Q(p)
    if p < 1:
        raise ExponentOutOfRange(f"p = {p} below 1 [{CITATIONS['elementary']}]")
    two, six = Q(2), Q(6)
    if system is System.EULER:
        return (
            ElementaryStep("omega", p, 0, two),
            ElementaryStep("u", p, 1, two),
            ElementaryStep("omega", p / 2, 1, two),
            ElementaryStep("u", p / 2, 2, two),
            ElementaryStep("omega", p / 3, 2, two),
            ElementaryStep("omega", p / 3, 0, INF),
        )
    return (
        ElementaryStep("omega", p, 0, two),
        ElementaryStep("u", p, 0, six),
        ElementaryStep("omega", p / 2, 0, six),
        ElementaryStep("grad_u", p / 2, 0, six),
    )


def elementary_lambda_time_only(p, system):
    """Verdict for lambda = lambda(t) in L^p(0,T).

    Euler is classical when omega reaches L^1(L^inf) (p >= 3); NSE is strong
    when grad u in L^{p/2}(L^6) is in the scaling class (p >= 8/3).
    """
    chain = elementary_lambda_trace(p, system)
    last = chain[-1]
    witness = BochnerSpec(last.time_exp, last.space_exp)
    tag = CITATIONS["elementary"]
    if system is System.EULER:
        if last.time_exp >= 1:
            return Verdict(VerdictLevel.CLASSICAL_SOLUTION, tag, witness, "vorticity in L^1(L^inf)")
        return Verdict(VerdictLevel.INCONCLUSIVE, tag, witness, f"p = {p} below 3")
    if regularity_class(witness):
        return Verdict(VerdictLevel.STRONG_SOLUTION, tag, witness, "gradient in the scaling class")
    return Verdict(VerdictLevel.INCONCLUSIVE, tag, witness, f"p = {p} below 8/3")


def cross_check_regularity(alpha, beta, max_iter=DEFAULT_MAX_ITER):
    """Compare the closed-form regularity verdict with the NSE engine.

    Args:
        alpha, beta: hypothesis on lambda, alpha >= 5/2 and 3 < beta < inf

    Returns:
        CrossCheck: both answers and whether beta sits on a critical endpoint
    """
    alpha, beta = Q(alpha), Q(beta)
    n, _ = locate_beta(beta)
    closed = nse_regularity_verdict(alpha, beta)
    trace = nse_beltrami_trace(alpha, beta, max(max_iter, n + 3))
    check = CrossCheck(
        alpha=alpha,
        beta=beta,
        closed_form_strong=closed.level == VerdictLevel.STRONG_SOLUTION,
        engine_strong=trace.reaches_regularity,
        on_curve=alpha == closed.detail("remark_alpha"),
        critical_endpoint=trace.stop_reason is StopReason.CRITICAL_EXPONENT,
    )
    if not check.agree:
        logger.warning(
            f"closed form and engine disagree at alpha={alpha}, beta={beta}: "
            f"closed={check.closed_form_strong}, engine={check.engine_strong}"
        )
    return check


def trace_rows(trace):
    """CSV rows: n, p, q, scaling, route, energy, regularity."""
    return [
        (
            step.index,
            step.grad_space.time_exp,
            step.grad_space.space_exp,
            step.scaling,
            step.route.value,
            step.energy_certified,
            step.regularity_certified,
        )
        for step in trace.steps
    ]
