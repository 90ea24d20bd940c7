"""
Regularity Module

Closed-form regularity exponents for the NSE with lambda in L^alpha(L^beta).

(3, inf) is tiled by I_n = (6(n+1)/(2n-1), 6n/(2n-3)], with I_1 = (12, inf).
Each I_n splits at the crossover 6(n+1)^2/(2n^2+n-2) into L_n (left,
bounded-lift route) and R_n (right, Sobolev route). The exact exponent
required of alpha differs between the two sides; the constant-level form
of the regularity statement is reported next to it for audit.
"""

from dataclasses import dataclass
from enum import Enum

from config import CITATIONS
from criteria import Verdict, VerdictLevel
from exceptions import ExponentOutOfRange, HypothesisTooWeak
from exponents import INF, BochnerSpec, Q
from logger import get_logger

logger = get_logger("regularity")

BAND_LOW = Q(3, 4)


class Side(Enum):
    L = "L"
    R = "R"


@dataclass(frozen=True)
class IntervalRow:
    n: int
    L_lo: object
    L_hi: object
    R_lo: object
    R_hi: object
    crossover: object
    I_lo: object
    I_hi: object

    @property
    def alpha_at_L_left(self):
        """Exact alpha at the left endpoint of L_n: 4(n+1)(n+2)/(2n+5)."""
        return _alpha_bounded(self.n, self.L_lo)

    @property
    def level_L(self):
        return 1 - Q(1, 2 * (self.n + 2))

    @property
    def level_R(self):
        return 1 - Q(1, 2 * (self.n + 1))


def _require_n(n):
    if n < 1:
        raise ExponentOutOfRange(f"interval index n = {n} must be at least 1")


def interval_lo(n):
    _require_n(n)
    return Q(6 * (n + 1), 2 * n - 1)


def interval_hi(n):
    _require_n(n)
    return INF if n == 1 else Q(6 * n, 2 * n - 3)


def crossover(n):
    _require_n(n)
    return Q(6 * (n + 1) ** 2, 2 * n * n + n - 2)


def ln_rn(n):
    """Endpoints of L_n and R_n.

    Raises:
        ExponentOutOfRange: if n < 1
    """
    _require_n(n)
    lo, mid, hi = interval_lo(n), crossover(n), interval_hi(n)
    return IntervalRow(n=n, L_lo=lo, L_hi=mid, R_lo=mid, R_hi=hi, crossover=mid, I_lo=lo, I_hi=hi)


def interval_rows(n_max):
    """Rows 1..n_max of the decomposition."""
    return [ln_rn(n) for n in range(1, n_max + 1)]


def _require_beta(beta):
    beta = Q(beta)
    if beta <= 3:
        raise ExponentOutOfRange(f"beta = {beta} must exceed 3 [{CITATIONS['nse_regularity']}]")
    return beta


def locate_beta(beta):
    """The (n, side) whose half-open interval contains beta.

    Raises:
        ExponentOutOfRange: if beta <= 3 or beta is infinite
    """
    beta = _require_beta(beta)
    if beta.is_infinite:
        raise ExponentOutOfRange("beta must be finite to locate it in the decomposition")
    # beta > 6(n+1)/(2n-1)  <=>  n > (beta+6)/(2 beta-6)
    n = ((beta + 6) / (2 * beta - 6)).floor() + 1
    side = Side.L if beta <= crossover(n) else Side.R
    return n, side


def _alpha_bounded(n, beta):
    return 2 * (n + 2) * beta / (2 * beta - 3)


def _alpha_sobolev(n, beta):
    return 4 * (n + 1) * beta / (2 * (n + 1) * (beta - 3) - beta)


def required_alpha(beta):
    """Exact alpha for strong solutions: bounded-lift formula on L_n, Sobolev formula on R_n.

    Raises:
        ExponentOutOfRange: if beta <= 3
    """
    n, side = locate_beta(beta)
    beta = Q(beta)
    if side is Side.L:
        return _alpha_bounded(n, beta)
    return _alpha_sobolev(n, beta)


def theorem_level(beta):
    """Constant scaling level 2/alpha + 3/beta of the literal statement on L_n or R_n."""
    n, side = locate_beta(beta)
    if side is Side.L:
        return 1 - Q(1, 2 * (n + 2))
    return 1 - Q(1, 2 * (n + 1))


def theorem_alpha(beta):
    """alpha implied by theorem_level: 2/(level - 3/beta)."""
    beta = Q(beta)
    return 2 / (theorem_level(beta) - 3 * beta.reciprocal())


def hypothesis_level(alpha, beta):
    return 2 * Q(alpha).reciprocal() + 3 * Q(beta).reciprocal()


def band_index(level):
    """Smallest n with level <= 1 - 1/(2(n+2)), for 3/4 <= level < 1."""
    level = Q(level)
    n = (1 / (2 * (1 - level)) - 2).ceil()
    return max(1, n)


def beta0(alpha, beta):
    """Threshold below which the hypothesis gives a strong solution.

    Returns +inf when the level is below 3/4 (strong a fortiori).

    Raises:
        ExponentOutOfRange: if beta <= 3
        HypothesisTooWeak: if 2/alpha + 3/beta >= 1
    """
    beta = _require_beta(beta)
    level = hypothesis_level(alpha, beta)
    if level >= 1:
        raise HypothesisTooWeak(
            f"2/alpha + 3/beta = {level} is not below 1 [{CITATIONS['beta_zero']}]"
        )
    if level < BAND_LOW:
        return INF
    n_bar = band_index(level)
    return Q(6 * (n_bar + 1), 2 * n_bar - 1)


def beta0_verdict(alpha, beta):
    """Strong solution when beta < beta0, or a fortiori below the 3/4 band."""
    alpha, beta = Q(alpha), Q(beta)
    b0 = beta0(alpha, beta)
    level = hypothesis_level(alpha, beta)
    witness = BochnerSpec(alpha, beta)
    details = (("level", level), ("beta0", b0))
    if b0.is_infinite:
        return Verdict(VerdictLevel.STRONG_SOLUTION, CITATIONS["a_fortiori"], witness,
                       "level below 3/4", details)
    details += (("n_bar", band_index(level)),)
    if beta < b0:
        return Verdict(VerdictLevel.STRONG_SOLUTION, CITATIONS["beta_zero"], witness, "", details)
    return Verdict(VerdictLevel.INCONCLUSIVE, CITATIONS["beta_zero"], witness,
                   f"beta = {beta} not below beta0 = {b0}", details)


def nse_regularity_verdict(alpha, beta):
    """Strong solution iff alpha >= required_alpha(beta).

    The details record n, side, the exact alpha, the theorem level and the
    alpha that level implies.

    Raises:
        ExponentOutOfRange: if beta <= 3 or beta is infinite
    """
    alpha = Q(alpha)
    beta = _require_beta(beta)
    n, side = locate_beta(beta)
    exact = required_alpha(beta)
    stated = theorem_alpha(beta)
    details = (
        ("n", n),
        ("side", side.value),
        ("remark_alpha", exact),
        ("theorem_level", theorem_level(beta)),
        ("theorem_alpha", stated),
    )
    witness = BochnerSpec(alpha, beta)
    if exact != stated:
        logger.debug(f"beta = {beta}: exact alpha {exact} differs from theorem-level alpha {stated}")
    if alpha >= exact:
        return Verdict(VerdictLevel.STRONG_SOLUTION, CITATIONS["remark_exact"], witness, "", details)
    return Verdict(VerdictLevel.INCONCLUSIVE, CITATIONS["remark_exact"], witness,
                   f"alpha = {alpha} below {exact}", details)
