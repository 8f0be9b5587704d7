"""Partial sums of the two indeterminacy criteria, reported without limit claims.

The (a, b) criterion sums ``P_i(0)**2 / b~_i`` and ``Q_i(0)**2 / b~_i`` with
``b~_i = b_0 ... b_i``, where ``P_i, Q_i`` are the denominators and numerators
of ``-b_0/(a_0 - b_1/(a_1 - ...))``.  The (m, l) criterion sums ``m_i(0)`` and
the constant atoms ``l_i``.  Finite data only ever yields partial sums, so the
verdict describes the data seen so far.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_algebra import ZERO, Polynomial, format_rational
from .schur_engine import AtomAB, AtomML, schur_decompose_ab, schur_decompose_ml

EXHAUSTED = "exhausted"
BOUNDED_SO_FAR = "boundedSoFar"
GROWING = "growing"


@dataclass(frozen=True)
class IndeterminacyReport:
    """Partial sums to ``depth`` with a verdict and the hypotheses they rest on.

    A sum is None when its criterion was not evaluated or does not apply.
    """

    depth: int
    verdict: str
    sumP: Fraction | None = None
    sumQ: Fraction | None = None
    sumM: Fraction | None = None
    sumL: Fraction | None = None
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"depth": self.depth, "verdict": self.verdict, "flags": dict(self.flags)}
        for name in ("sumP", "sumQ", "sumM", "sumL"):
            value = getattr(self, name)
            out[name] = None if value is None else format_rational(value)
        return out


def ab_polynomials(atoms: Sequence[AtomAB], up_to: int) -> tuple[list[Polynomial], list[Polynomial]]:
    """``P_k, Q_k`` for ``k = 0 .. up_to`` from ``y_k = a_{k-1} y_{k-1} - b_{k-1} y_{k-2}``.

    ``P_{-1} = 0, P_0 = 1`` and ``Q_{-1} = 1, Q_0 = 0``, so ``Q_k / P_k`` are
    the convergents of ``-b_0/(a_0 - b_1/(a_1 - ...))``.
    """
    if up_to > len(atoms):
        raise ValueError(f"index {up_to} needs {up_to} atoms, have {len(atoms)}")
    P = [Polynomial(), Polynomial([1])]
    Q = [Polynomial([1]), Polynomial()]
    for k in range(1, up_to + 1):
        atom = atoms[k - 1]
        P.append(atom.a * P[-1] - P[-2] * atom.b)
        Q.append(atom.a * Q[-1] - Q[-2] * atom.b)
    return P[1:], Q[1:]


def _verdict(depth: int, available: int, summands: Sequence[Fraction]) -> str:
    if depth >= available:
        return EXHAUSTED
    # "growing" needs evidence: two summands of which the later is not smaller
    if len(summands) >= 2 and abs(summands[-1]) >= abs(summands[-2]):
        return GROWING
    return BOUNDED_SO_FAR


def _check_depth(depth: int, available: int) -> None:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > available:
        raise ValueError(f"depth {depth} exceeds the {available} available levels")


def indeterminacy_sums_ab(atoms: Sequence[AtomAB], depth: int,
                          ml_atoms: Sequence[AtomML] | None = None) -> IndeterminacyReport:
    """Partial sums of ``P_i(0)**2 / b~_i`` and ``Q_i(0)**2 / b~_i`` for ``i < depth``.

    ``ml_atoms``, when given, only feeds the ``positive_l`` flag that the
    (a, b) criterion assumes.
    """
    _check_depth(depth, len(atoms))
    for i, atom in enumerate(atoms[:depth]):
        if atom.b == 0:
            raise ValueError(f"b_{i} vanishes")
    P, Q = ab_polynomials(atoms, depth)
    sum_p = sum_q = ZERO
    b_prod = Fraction(1)
    summands = []
    flags = {"nonnegative_summands": True}
    for i in range(depth):
        b_prod *= atoms[i].b
        if b_prod < 0:
            flags["nonnegative_summands"] = False
        term_p = P[i].constant_term() ** 2 / b_prod
        sum_p += term_p
        sum_q += Q[i].constant_term() ** 2 / b_prod
        summands.append(term_p)
    if ml_atoms is not None:
        flags["positive_l"] = _positive_l(ml_atoms)
    return IndeterminacyReport(depth, _verdict(depth, len(atoms), summands),
                               sumP=sum_p, sumQ=sum_q, flags=flags)


def _positive_l(atoms: Sequence[AtomML]) -> bool:
    return all(a.l.degree == 0 and a.l.constant_term() > 0 for a in atoms if a.l is not None)


def indeterminacy_sums_ml(atoms: Sequence[AtomML], depth: int) -> IndeterminacyReport:
    """Partial sums of ``m_i(0)`` and of the constant ``l_i`` for the first ``depth`` levels.

    A non-constant ``l_i`` within the depth makes the criterion inapplicable:
    ``sumL`` is then None and ``flags["regular"]`` is False.
    """
    _check_depth(depth, len(atoms))
    used = atoms[:depth]
    sum_m = sum((a.m.constant_term() for a in used), ZERO)
    regular = all(a.l is None or a.l.degree <= 0 for a in used)
    sum_l = sum((a.l.constant_term() for a in used if a.l is not None), ZERO) if regular else None
    summands = [a.m.constant_term() + (a.l.constant_term() if a.l is not None and regular else 0)
                for a in used]
    flags = {
        "regular": regular,
        "positive_l": _positive_l(used),
        "nonnegative_summands": all(
            a.m.constant_term() >= 0 and (a.l is None or a.l.constant_term() >= 0) for a in used),
    }
    return IndeterminacyReport(depth, _verdict(depth, len(atoms), summands),
                               sumM=sum_m, sumL=sum_l, flags=flags)


def indeterminacy_report(s, depth: int | None = None) -> IndeterminacyReport:
    """Both criteria for a moment sequence.

    The (a, b) sums use every basic Schur step the data allows; the (m, l)
    sums use the even S-fraction of the longest prefix it interpolates.
    ``depth`` defaults to the largest depth both criteria can reach.
    """
    ab = schur_decompose_ab(s).atoms
    ml = schur_decompose_ml(s, "even", strict=False).atoms
    available = min(len(ab), len(ml))
    if depth is None:
        depth = available
    _check_depth(depth, available)
    ab_report = indeterminacy_sums_ab(ab, depth, ml)
    ml_report = indeterminacy_sums_ml(ml, depth)
    verdicts = {ab_report.verdict, ml_report.verdict}
    if verdicts == {EXHAUSTED}:
        verdict = EXHAUSTED
    elif GROWING in verdicts:
        verdict = GROWING
    else:
        verdict = BOUNDED_SO_FAR
    flags = {**ml_report.flags, **ab_report.flags}
    flags["nonnegative_summands"] = (ab_report.flags["nonnegative_summands"]
                                     and ml_report.flags["nonnegative_summands"])
    return IndeterminacyReport(depth, verdict, ab_report.sumP, ab_report.sumQ,
                               ml_report.sumM, ml_report.sumL, flags)
