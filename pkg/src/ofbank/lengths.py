"""Integer length functionals for PR synthesis banks.

For a C-channel bank with D-fold subsampling and analysis length m_h,
five integer functionals of (C, D, m_h) bracket the minimal synthesis
length at which delayed perfect reconstruction becomes generically
feasible:

* ``sufficient_length``  mv_S: smallest m_v with
      sum_p ceil((m_{h;p} - 1) / floor(m_v / D)) <= C - D.
  At and above it, every phase system generically has full row rank.
* ``necessary_length``   mv_N: same with floor in the summand.  Below it,
  some phase system generically excludes the target from its range.
* ``counting_length``    mv_C = D * ceil((m_h/D - 1) / (C/D - 1)):
  smallest m_v making every phase system at least as wide as tall,
  clamped to the structural lower bound D.
* ``length_bounds``      mv_L = ceil((m_h - D) / (C/D)) and
  mv_U = D + ceil((m_h - D) / ((C+1)/D - 2)): closed-form outer bounds.

Whenever C/D >= 2 and m_h > D these chain as

    max(D, mv_L) <= mv_N <= mv_C <= mv_S <= min(m_h, mv_U),

and for D >= 2 the three gaps mv_S-mv_N, mv_U-mv_C, mv_C-mv_L admit
strict closed-form bounds (:func:`gaps`).

Everything here is exact integer or rational arithmetic; floating point
is deliberately absent because a one-off error in a ceiling shifts the
predicted feasibility phase transition.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InfeasibleConfigError
from .fb_core import ceil_div, polyphase_lengths


def _check_cd(C: int, D: int, m_h: int) -> None:
    if D < 1 or C < 1 or m_h < 1:
        raise DomainError("C, D, m_h must be positive")
    if C <= D:
        raise DomainError(f"need more channels than the subsampling factor (C={C}, D={D})")
    if m_h < D:
        raise DomainError(f"analysis length {m_h} must be >= subsampling {D}")


def _min_mv_satisfying(C: int, D: int, m_h: int, round_summand) -> int:
    """Smallest m_v in [D, m_h + D] whose floor(m_v/D) satisfies the
    summed condition; the condition depends on m_v only through
    w = floor(m_v/D) and is monotone in w, so the minimum is D*w*."""
    _check_cd(C, D, m_h)
    comp = polyphase_lengths(m_h, D)
    budget = C - D
    cap_w = (m_h + D) // D
    for w in range(1, cap_w + 1):
        if sum(round_summand(m - 1, w) for m in comp) <= budget:
            return D * w
    raise InfeasibleConfigError(
        f"no synthesis length <= {m_h + D} satisfies the condition for "
        f"C={C}, D={D}, m_h={m_h}; the oversampling factor is too small"
    )


def sufficient_length(C: int, D: int, m_h: int) -> int:
    """Minimal m_v above which PR is generically feasible (every delay)."""
    return _min_mv_satisfying(C, D, m_h, ceil_div)


def necessary_length(C: int, D: int, m_h: int) -> int:
    """Minimal m_v below which PR is generically infeasible (any delay)."""
    return _min_mv_satisfying(C, D, m_h, lambda a, b: a // b)


def counting_length(C: int, D: int, m_h: int) -> int:
    """Minimal m_v making no phase system taller than wide, >= D."""
    _check_cd(C, D, m_h)
    return max(D, D * ceil_div(m_h - D, C - D))


def length_bounds(C: int, D: int, m_h: int) -> tuple[int, int]:
    """Closed-form outer bounds (mv_L, mv_U) for the chain.

    Also verifies the rational sandwich
    (m_h - D)/(C/D - 1) <= mv_C < D + (m_h - D)/(C/D - 1).
    """
    _check_cd(C, D, m_h)
    if C + 1 - 2 * D <= 0:
        raise DomainError(f"upper bound needs C >= 2D (C={C}, D={D})")
    mv_L = ceil_div(D * (m_h - D), C)
    mv_U = D + ceil_div(D * (m_h - D), C + 1 - 2 * D)
    mv_C = counting_length(C, D, m_h)
    lo = Fraction(D * (m_h - D), C - D)
    if not (lo <= mv_C < D + lo) and m_h > D:
        raise AssertionError(f"counting-length sandwich violated at {(C, D, m_h)}")
    return mv_L, mv_U


@dataclass(frozen=True)
class GapCertificate:
    """Exact gaps between the length functionals plus bound certification.

    ``strict`` records, per gap, whether the exact value lies strictly
    below its closed-form rational bound (it always should on the valid
    domain; the flags exist so callers can audit rather than trust).
    """

    gap_SN: int
    gap_UC: int
    gap_CL: int
    bounds: tuple[Fraction, Fraction, Fraction]
    strict: tuple[bool, bool, bool]


def gaps(C: int, D: int, m_h: int) -> GapCertificate:
    """Exact gap values with their closed-form strict upper bounds.

    Defined for D >= 2 and C >= 2D.
    """
    _check_cd(C, D, m_h)
    if D < 2:
        raise DomainError("gap bounds need D >= 2")
    if C < 2 * D:
        raise DomainError("gap bounds need an oversampling factor >= 2")
    mv_S = sufficient_length(C, D, m_h)
    mv_N = necessary_length(C, D, m_h)
    mv_C = counting_length(C, D, m_h)
    mv_L, mv_U = length_bounds(C, D, m_h)
    g_SN = mv_S - mv_N
    g_UC = mv_U - mv_C
    g_CL = mv_C - mv_L
    cd = Fraction(C, D)
    b_SN = D + 1 + Fraction(2 * m_h) / (cd * (Fraction(2 * C, 2 * D - 1) - 2))
    b_UC = D + 1 + Fraction(m_h) / ((cd - 1) * (Fraction(C - 1, D - 1) - 2))
    b_CL = D + 1 + Fraction(m_h) / (cd * (cd - 1))
    bounds = (b_SN, b_UC, b_CL)
    strict = (g_SN < b_SN, g_UC < b_UC, g_CL < b_CL)
    return GapCertificate(g_SN, g_UC, g_CL, bounds, strict)


@dataclass(frozen=True)
class LengthReport:
    """All five functionals and the pairwise gaps for one (C, D, m_h)."""

    C: int
    D: int
    m_h: int
    mv_L: int
    mv_N: int
    mv_C: int
    mv_S: int
    mv_U: int
    gap_SN: int
    gap_UC: int
    gap_CL: int

    def chain_holds(self) -> bool:
        return (max(self.D, self.mv_L) <= self.mv_N <= self.mv_C
                <= self.mv_S <= min(self.m_h, self.mv_U))


def length_report(C: int, D: int, m_h: int) -> LengthReport:
    """Compute every functional and assert the ordering chain.

    The chain assertion applies on the domain C >= 2D, m_h > D; a
    violation there would be an implementation bug, not bad input.
    """
    mv_S = sufficient_length(C, D, m_h)
    mv_N = necessary_length(C, D, m_h)
    mv_C = counting_length(C, D, m_h)
    mv_L, mv_U = length_bounds(C, D, m_h)
    report = LengthReport(
        C=C, D=D, m_h=m_h,
        mv_L=mv_L, mv_N=mv_N, mv_C=mv_C, mv_S=mv_S, mv_U=mv_U,
        gap_SN=mv_S - mv_N, gap_UC=mv_U - mv_C, gap_CL=mv_C - mv_L,
    )
    if C >= 2 * D and m_h > D and not report.chain_holds():
        raise AssertionError(f"length chain violated at {(C, D, m_h)}: {report}")
    return report


CSV_HEADER = ("C", "D", "m_h", "mv_L", "mv_N", "mv_C", "mv_S", "mv_U")


def reports_to_csv(reports) -> str:
    """Render LengthReport rows (or None-padded cells) as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rep in reports:
        writer.writerow([rep.C, rep.D, rep.m_h,
                         rep.mv_L, rep.mv_N, rep.mv_C, rep.mv_S, rep.mv_U])
    return buf.getvalue()
