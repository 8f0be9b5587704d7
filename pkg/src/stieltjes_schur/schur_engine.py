"""The one-dimensional diagonal Schur algorithm.

Two kinds of building blocks are produced from a moment sequence:

* (a, b) atoms, one per basic Schur step ``f = -b / (a(z) + f_1)``;
* (m, l) atoms of the S-fraction
  ``f = 1/(-z m_1 + 1/(l_1 + 1/(-z m_2 + ...)))``.

The authoritative route works on formal Laurent series: each level inverts the
current series and splits off its polynomial part.  A second route evaluates
closed-form Hankel determinants for the atoms and lower-triangular Toeplitz
inversion for the level-to-level sequences; the two must agree exactly.

Level bookkeeping: odd levels hold a series ``f = -sum_i s_i z**-(i+1)``
(indices start at 0), even levels hold ``g = sum_i s_i z**-(i+1)`` with
indices starting at -1, so ``s_{-1}`` is the constant term.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import FormulaInapplicable, NoNormalIndex, SingularStep, Truncated
from .exact_algebra import (ZERO, Polynomial, TruncatedLaurentSeries, to_rational,
                            toeplitz_solve)
from .hankel_indices import (MomentSequence, as_moment_sequence, bareiss_det, hankel_det,
                             normal_indices, shifted_hankel_det)

PARITIES = ("odd", "even")
TAIL_CONTRACTS = {"odd": "o(z)", "even": "o(1)"}


@dataclass(frozen=True)
class AtomAB:
    """One basic Schur step: ``b`` and the monic polynomial ``a``."""

    b: Fraction
    a: Polynomial


@dataclass(frozen=True)
class AtomML:
    """One S-fraction level; ``l`` is None for the last level of an odd fraction."""

    m: Polynomial
    l: Polynomial | None

    @property
    def l_is_constant(self) -> bool:
        return self.l is not None and self.l.degree <= 0


@dataclass(frozen=True)
class ShiftedSequence:
    """Sequence attached to one level of the recursion.

    ``values[i]`` is the entry with index ``start + i``; ``start`` is 0 on odd
    levels and -1 on even levels.
    """

    level: int
    values: tuple[Fraction, ...]
    start: int = 0

    def __post_init__(self):
        if self.start not in (0, -1):
            raise ValueError("start offset must be 0 or -1")

    def __len__(self) -> int:
        return len(self.values)

    def entry(self, index: int) -> Fraction:
        """The entry with the given (possibly negative) index."""
        k = index - self.start
        if not 0 <= k < len(self.values):
            raise IndexError(f"index {index} outside level {self.level} data")
        return self.values[k]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def first_nonzero(self) -> int | None:
        return next((k for k, v in enumerate(self.values) if v != 0), None)

    def series(self) -> TruncatedLaurentSeries:
        if self.start == 0:
            return TruncatedLaurentSeries({-(i + 1): -v for i, v in enumerate(self.values)},
                                          -len(self.values))
        return TruncatedLaurentSeries({-i: v for i, v in enumerate(self.values)},
                                      -(len(self.values) - 1))


@dataclass(frozen=True)
class TailSpec:
    """Order contract for the free tail plus the part of it fixed by the data.

    For an even fraction the remainder is the odd-level sequence standing for
    ``tau`` itself; for an odd fraction it is the even-level sequence standing
    for ``1/tau``.
    """

    contract: str
    remainder: ShiftedSequence | None = None


@dataclass(frozen=True)
class MLDecomposition:
    parity: str
    atoms: tuple[AtomML, ...]
    sequences: tuple[ShiftedSequence, ...]
    tail: TailSpec
    matched: int
    gaps: tuple[tuple[int, int | None], ...]

    @property
    def levels(self) -> int:
        return len(self.atoms)

    def odd_sequence(self, j: int) -> ShiftedSequence:
        """The level ``2j-1`` sequence (``j`` counts from 1)."""
        return self.sequences[2 * j - 2]

    def even_sequence(self, j: int) -> ShiftedSequence:
        """The level ``2j`` sequence (``j`` counts from 1)."""
        return self.sequences[2 * j - 1]


@dataclass(frozen=True)
class ABDecomposition:
    atoms: tuple[AtomAB, ...]
    sequences: tuple[ShiftedSequence, ...]

    @property
    def levels(self) -> int:
        return len(self.atoms)


def _check_parity(parity: str) -> str:
    if parity not in PARITIES:
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    return parity


def _odd_level(level: int, values) -> ShiftedSequence:
    return ShiftedSequence(level, tuple(values), 0)


def _even_level(level: int, values) -> ShiftedSequence:
    return ShiftedSequence(level, tuple(values), -1)


# ---------------------------------------------------------------------------
# series route


def _has_power_at_least(series: TruncatedLaurentSeries, exponent: int) -> bool:
    return any(e >= exponent for e in series.terms())


def recursive_sequence_via_series(seq: ShiftedSequence, atom: AtomAB | AtomML) -> ShiftedSequence:
    """Next-level sequence obtained by formal-series inversion and subtraction.

    The atom must be the one the level produces: after subtracting it the
    inverted series may not keep any polynomial part beyond what the next
    level allows, otherwise ``ValueError`` is raised.
    """
    if len(seq) == 0:
        return ShiftedSequence(seq.level + 1, (), -1 - seq.start)
    series = seq.series()
    if series.is_zero():
        raise SingularStep(f"level {seq.level} sequence vanishes; no pivot", level=seq.level)
    inverse = series.reciprocal()
    if seq.start == 0 and isinstance(atom, AtomAB):
        rest = -(inverse * atom.b) - atom.a
        if _has_power_at_least(rest, 0):
            raise ValueError("atom does not match the sequence")
        return _odd_level(seq.level + 1, [-rest.coefficient(-(i + 1)) for i in range(rest.order)])
    if seq.start == 0:
        rest = inverse + atom.m.shift(1)
        if _has_power_at_least(rest, 1):
            raise ValueError("m-atom does not match the sequence")
        return _even_level(seq.level + 1, [rest.coefficient(-i) for i in range(rest.order + 1)])
    if atom.l is None:
        raise ValueError("an even level needs an l-atom")
    rest = inverse - atom.l
    if _has_power_at_least(rest, 0):
        raise ValueError("l-atom does not match the sequence")
    return _odd_level(seq.level + 1, [-rest.coefficient(-(i + 1)) for i in range(rest.order)])


def _m_step(f: ShiftedSequence) -> tuple[Polynomial, ShiftedSequence]:
    first = f.first_nonzero()
    if first is None:
        raise SingularStep(f"level {f.level} sequence vanishes; no pivot", level=f.level)
    nu = first + 1
    if len(f) < 2 * nu - 1:
        raise Truncated(f"level {f.level} needs {2 * nu - 1} entries for an m-atom, has {len(f)}",
                        level=f.level, required=2 * nu - 1, available=len(f))
    inverse = f.series().reciprocal()
    # 1/f = -z m(z) + g, the constant term belongs to g
    m = Polynomial(-inverse.coefficient(k + 1) for k in range(nu))
    g = recursive_sequence_via_series(f, AtomML(m, None))
    return m, g


def _l_step(g: ShiftedSequence) -> tuple[Polynomial, ShiftedSequence]:
    first = g.first_nonzero()
    if first is None:
        raise SingularStep(f"level {g.level} sequence vanishes; zero pivot", level=g.level)
    mu = first
    if len(g) < 2 * mu + 1:
        raise Truncated(f"level {g.level} needs {2 * mu + 1} entries for an l-atom, has {len(g)}",
                        level=g.level, required=2 * mu + 1, available=len(g))
    l_poly = g.series().reciprocal().polynomial_part()
    f_next = recursive_sequence_via_series(g, AtomML(Polynomial([1]), l_poly))
    return l_poly, f_next


def admissible_length(s, parity: str) -> int:
    """Length of the longest prefix the parity's S-fraction interpolates exactly.

    Odd fractions need ``2 nu_N - 1`` moments, even ones ``2 mu_N``, read from
    the normal indices; 0 when no such prefix exists.
    """
    s = as_moment_sequence(s)
    _check_parity(parity)
    idx = normal_indices(s)
    if parity == "odd":
        fits = [2 * v - 1 for v in idx.nu if 2 * v - 1 <= len(s)]
    else:
        fits = [2 * m for m in idx.mu if 2 * m <= len(s)]
    return max(fits, default=0)


def schur_decompose_ml(s, parity: str = "even", strict: bool = True) -> MLDecomposition:
    """S-fraction atoms of a moment sequence by the series route.

    With ``strict=True`` all data must be consumed: an even fraction has to
    end on an l-atom with a vanishing remainder, and missing data raises
    :class:`Truncated` or :class:`SingularStep` naming the level.  An odd
    fraction ends on its last complete m-atom; whatever follows is kept as the
    explicit part of ``1/tau``.  With ``strict=False`` the sequence is first
    cut to :func:`admissible_length`.
    """
    s = as_moment_sequence(s)
    _check_parity(parity)
    if all(v == 0 for v in s):
        raise NoNormalIndex("every moment vanishes; the sequence has no normal index")
    if not strict:
        n = admissible_length(s, parity)
        if n == 0:
            first = next(k for k, v in enumerate(s) if v != 0)
            need = 2 * (first + 1) - (1 if parity == "odd" else 0)
            raise Truncated(f"no {parity} truncation fits in {len(s)} moments",
                            level=1, required=need, available=len(s))
        s = MomentSequence(s.values[:n])

    sequences = [_odd_level(1, s.values)]
    m_atoms: list[Polynomial] = []
    l_atoms: list[Polynomial] = []
    gaps: list[list] = []
    stop: Exception | None = None
    while True:
        current = sequences[-1]
        if current.start == 0:
            if len(current) == 0 or current.is_zero():
                break
            try:
                m, g = _m_step(current)
            except Truncated as exc:
                stop = exc
                break
            m_atoms.append(m)
            gaps.append([m.degree + 1, None])
            sequences.append(g)
        else:
            if len(current) == 0:
                break
            try:
                l, f_next = _l_step(current)
            except (Truncated, SingularStep) as exc:
                stop = exc
                break
            l_atoms.append(l)
            gaps[-1][1] = l.degree
            sequences.append(f_next)

    if not m_atoms:
        raise stop if stop is not None else NoNormalIndex("no normal index")

    if parity == "even":
        last = sequences[-1]
        if len(l_atoms) < len(m_atoms):
            if stop is not None:
                raise stop
            raise Truncated(f"level {last.level} is empty; the last l-atom is undetermined",
                            level=last.level, required=1, available=0)
        if stop is not None:
            raise stop
        atoms = tuple(AtomML(m, l) for m, l in zip(m_atoms, l_atoms))
        tail = TailSpec(TAIL_CONTRACTS["even"], last)
        used = sequences
        matched = len(s)
    else:
        n_levels = len(m_atoms)
        atoms = tuple(AtomML(m, l_atoms[j] if j < n_levels - 1 else None)
                      for j, m in enumerate(m_atoms))
        used = sequences[:2 * n_levels]
        remainder = used[-1]
        tail = TailSpec(TAIL_CONTRACTS["odd"], remainder)
        matched = len(s) if remainder.is_zero() else len(s) - len(remainder)
        gaps = [list(gp) for gp in gaps[:n_levels]]
        gaps[-1][1] = None
    return MLDecomposition(parity, atoms, tuple(used), tail, matched,
                           tuple((a, b) for a, b in gaps))


def schur_step_ab(s) -> tuple[AtomAB, ShiftedSequence]:
    """One basic Schur step ``f = -b0/(a0 + f1)``.

    ``b0`` is the first nonzero moment ``s_{n1-1}``, ``a0`` the monic
    determinant polynomial of degree ``n1`` and the returned sequence holds the
    ``len(s) - 2 n1`` moments of ``f1``.
    """
    s = as_moment_sequence(s)
    first = next((k for k, v in enumerate(s) if v != 0), None)
    if first is None:
        raise NoNormalIndex("every moment vanishes; the sequence has no normal index")
    n1 = first + 1
    if len(s) < 2 * n1:
        raise Truncated(f"a Schur step at n1={n1} needs {2 * n1} moments, got {len(s)}",
                        level=1, required=2 * n1, available=len(s))
    atom = AtomAB(s[n1 - 1], ab_polynomial_by_determinant(s, n1))
    tail = recursive_sequence_via_series(_odd_level(0, s.values), atom)
    return atom, tail


def schur_decompose_ab(s) -> ABDecomposition:
    """Repeat basic Schur steps until the data is used up or the tail vanishes."""
    s = as_moment_sequence(s)
    current = _odd_level(0, s.values)
    atoms, sequences = [], [current]
    while len(current) and not current.is_zero():
        try:
            atom, nxt = schur_step_ab(current.values)
        except Truncated as exc:
            raise Truncated(str(exc), level=current.level + 1, required=exc.required,
                            available=exc.available) from None
        atoms.append(atom)
        current = ShiftedSequence(current.level + 1, nxt.values, 0)
        sequences.append(current)
    if not atoms:
        raise NoNormalIndex("every moment vanishes; the sequence has no normal index")
    return ABDecomposition(tuple(atoms), tuple(sequences))


# ---------------------------------------------------------------------------
# determinant and Toeplitz route


def _det_with_power_row(rows: Sequence[Sequence[Fraction]]) -> Polynomial:
    """Determinant of ``rows`` stacked on top of ``[1, z, ..., z**k]``.

    Expanded along the polynomial row, so each coefficient is a signed minor.
    """
    k = len(rows)
    width = k + 1
    if any(len(r) != width for r in rows):
        raise ValueError("data rows must be one entry longer than their count")
    coeffs = []
    for c in range(width):
        minor = [[r[j] for j in range(width) if j != c] for r in rows]
        sign = -1 if (k + c) % 2 else 1
        coeffs.append(sign * bareiss_det(minor))
    return Polynomial(coeffs)


def ab_polynomial_by_determinant(s, n1: int) -> Polynomial:
    """``a0(z) = det([s_{i+k}] rows over [1, z, ..., z**n1]) / D_{n1}``."""
    s = as_moment_sequence(s)
    if len(s) < 2 * n1:
        raise Truncated(f"a0 needs {2 * n1} moments", required=2 * n1, available=len(s))
    d = hankel_det(s, n1)
    if d == 0:
        raise FormulaInapplicable(f"D_{n1} vanishes; {n1} is not a normal index")
    rows = [[s[i + k] for k in range(n1 + 1)] for i in range(n1)]
    return _det_with_power_row(rows) * (1 / d)


def recursive_sequence_via_determinant(s, n1: int) -> MomentSequence | tuple:
    """Tail moments of a basic Schur step from banded Hessenberg determinants.

    Entry ``j`` is ``(-1)**(j+n1) det(H_{j+n1+1}) / p**(j+n1+1)`` where
    ``p = s_{n1-1}`` and ``H_k`` is the ``k x k`` lower Hessenberg Toeplitz
    matrix with ``s_{n1}`` on the diagonal and ``p`` just above it.
    """
    s = as_moment_sequence(s)
    if not 1 <= n1 <= len(s):
        raise FormulaInapplicable(f"n1={n1} outside the data")
    p = s[n1 - 1]
    if p == 0:
        raise FormulaInapplicable(f"pivot s_{n1 - 1} vanishes")
    if any(s[k] != 0 for k in range(n1 - 1)):
        raise FormulaInapplicable(f"{n1} is not the first normal index")

    def band(t: int) -> Fraction:
        return s[n1 - 1 + t] if t >= 0 else ZERO

    out = []
    for j in range(len(s) - 2 * n1):
        k = j + n1 + 1
        h = [[band(r - c + 1) for c in range(k)] for r in range(k)]
        sign = -1 if (j + n1) % 2 else 1
        out.append(sign * bareiss_det(h) / p ** k)
    return tuple(out)


def m_polynomial_by_determinant(values: Sequence, nu: int) -> Polynomial:
    """m-atom of an odd level whose first normal index is ``nu``.

    ``(-1)**(nu+1)/D_nu`` times the determinant of the rows
    ``[s_{r+c+1}]`` (``r < nu-1``, anti-triangular) over ``[1, ..., z**(nu-1)]``.
    """
    vals = [to_rational(v) for v in values]
    if len(vals) < 2 * nu - 1:
        raise Truncated(f"m-atom needs {2 * nu - 1} entries", required=2 * nu - 1,
                        available=len(vals))
    d = hankel_det(vals, nu)
    if d == 0:
        raise FormulaInapplicable(f"D_{nu} vanishes")
    rows = [[vals[r + c + 1] if r + c + 1 >= nu - 1 else ZERO for c in range(nu)]
            for r in range(nu - 1)]
    sign = 1 if (nu + 1) % 2 == 0 else -1
    return _det_with_power_row(rows) * (sign / d)


def regular_l_by_determinant(values: Sequence, nu: int) -> Fraction:
    """Constant l-atom ``(-1)**(nu+1) s_{nu-1} D_nu / D_nu^+`` of a regular level."""
    vals = [to_rational(v) for v in values]
    dp = shifted_hankel_det(vals, nu)
    if dp == 0:
        raise FormulaInapplicable(f"shifted determinant of order {nu} vanishes")
    sign = 1 if (nu + 1) % 2 == 0 else -1
    return sign * vals[nu - 1] * hankel_det(vals, nu) / dp


def l_polynomial_by_determinant(even_values: Sequence, mu: int) -> Polynomial:
    """l-atom of degree ``mu >= 1`` from an even-level sequence.

    ``even_values[i]`` is the entry with index ``i - 1``.  The polynomial is
    ``det([s_{i+k}] rows over [1, ..., z**mu]) / (s_{mu-1} D_mu)`` with
    indices counted from 0.
    """
    if mu < 1:
        raise FormulaInapplicable("the determinant form covers mu >= 1 only")
    shifted = [to_rational(v) for v in even_values[1:]]
    if len(shifted) < 2 * mu:
        raise Truncated(f"l-atom needs {2 * mu} entries from index 0",
                        required=2 * mu, available=len(shifted))
    d = hankel_det(shifted, mu)
    pivot = shifted[mu - 1]
    if d == 0 or pivot == 0:
        raise FormulaInapplicable("zero pivot in the l-atom formula")
    rows = [[shifted[i + k] for k in range(mu + 1)] for i in range(mu)]
    return _det_with_power_row(rows) * (1 / (pivot * d))


def toeplitz_level_step(values: Sequence, pivot_index: int) -> tuple[list[Fraction], list[Fraction]]:
    """Split ``T(values[pivot_index:])**-1`` into atom coefficients and next-level entries.

    Returns the first ``pivot_index + 1`` entries of the inverse column
    reversed (atom coefficients, lowest degree first) and the negated rest.
    """
    known = [to_rational(v) for v in values[pivot_index:]]
    inverse = toeplitz_solve(known)
    head = inverse[:pivot_index + 1]
    return list(reversed(head)), [-x for x in inverse[pivot_index + 1:]]


def decompose_ml_by_determinants(s, parity: str, levels: int) -> tuple[AtomML, ...]:
    """S-fraction atoms from the closed-form determinant formulas.

    Level-to-level sequences come from Toeplitz inversion; atom polynomials
    come from Hankel determinants.  ``levels`` m-atoms are produced.
    """
    s = as_moment_sequence(s)
    _check_parity(parity)
    odd_vals: list[Fraction] = list(s.values)
    atoms = []
    for j in range(1, levels + 1):
        idx = normal_indices(odd_vals)
        if not idx.indices:
            raise SingularStep(f"level {2 * j - 1} has no normal index", level=2 * j - 1)
        nu = idx.indices[0]
        m = m_polynomial_by_determinant(odd_vals, nu)
        _, even_vals = toeplitz_level_step(odd_vals, nu - 1)
        if parity == "odd" and j == levels:
            atoms.append(AtomML(m, None))
            break
        mu = next((k for k, v in enumerate(even_vals) if v != 0), None)
        if mu is None:
            raise SingularStep(f"level {2 * j} vanishes", level=2 * j)
        if mu == 0:
            l = Polynomial.constant(regular_l_by_determinant(odd_vals, nu))
        else:
            l = l_polynomial_by_determinant(even_vals, mu)
        atoms.append(AtomML(m, l))
        _, odd_vals = toeplitz_level_step(even_vals, mu)
    return tuple(atoms)
