"""Hankel determinants, normal indices and the regularity test for moment sequences."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_algebra import ONE, ZERO, to_rational
from .errors import Truncated


@dataclass(frozen=True)
class MomentSequence:
    """Exact moments ``s_0, ..., s_l`` of a one-dimensional problem."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("a moment sequence needs at least one value")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, item):
        return self.values[item]

    def __iter__(self):
        return iter(self.values)

    @property
    def last_index(self) -> int:
        return len(self.values) - 1

    def to_json(self) -> list[str]:
        from .exact_algebra import format_rational
        return [format_rational(v) for v in self.values]


def as_moment_sequence(values) -> MomentSequence:
    """Validate and coerce any iterable of rational-like values."""
    if isinstance(values, MomentSequence):
        return values
    if isinstance(values, (str, bytes)):
        raise TypeError("a moment sequence must be an iterable of numbers, not a string")
    return MomentSequence(tuple(to_rational(v) for v in values))


def bareiss_det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = len(matrix)
    if n == 0:
        return ONE
    a = [[to_rational(x) for x in row] for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
            a[i][k] = ZERO
        prev = pivot
    return sign * a[n - 1][n - 1]


def hankel_matrix(s: Sequence, n: int, shift: int = 0) -> list[list[Fraction]]:
    return [[s[i + k + shift] for k in range(n)] for i in range(n)]


def hankel_det(s, n: int) -> Fraction:
    """``det(s_{i+k})_{i,k<n}``; the empty determinant is 1."""
    s = as_moment_sequence(s)
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n == 0:
        return ONE
    if 2 * n - 2 >= len(s):
        raise Truncated(f"D_{n} needs {2 * n - 1} moments, got {len(s)}",
                        required=2 * n - 1, available=len(s))
    return bareiss_det(hankel_matrix(s.values, n))


def shifted_hankel_det(s, n: int) -> Fraction:
    """``det(s_{i+k+1})_{i,k<n}``; the empty determinant is 1."""
    s = as_moment_sequence(s)
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n == 0:
        return ONE
    if 2 * n - 1 >= len(s):
        raise Truncated(f"shifted determinant of order {n} needs {2 * n} moments, got {len(s)}",
                        required=2 * n, available=len(s))
    return bareiss_det(hankel_matrix(s.values, n, shift=1))


@dataclass(frozen=True)
class NormalIndexSet:
    """Normal indices of a sequence with their nu/mu classification.

    ``undecided`` lists normal indices whose shifted determinant needs a moment
    beyond the truncation, so their mu-membership is unknown.
    """

    indices: tuple[int, ...]
    nu: tuple[int, ...]
    mu: tuple[int, ...]
    undecided: tuple[int, ...] = field(default=())

    def interlaces(self) -> bool:
        return interlacing_holds(self.nu, self.mu)


def interlacing_holds(nu: Sequence[int], mu: Sequence[int]) -> bool:
    """Check ``0 < nu_1 <= mu_1 < nu_2 <= mu_2 < ...``."""
    if not (len(nu) == len(mu) or len(nu) == len(mu) + 1):
        return False
    merged: list[int] = []
    for j, v in enumerate(nu):
        merged.append(v)
        if j < len(mu):
            merged.append(mu[j])
    if merged and merged[0] <= 0:
        return False
    for k in range(1, len(merged)):
        if k % 2 == 1:  # nu_j <= mu_j
            if merged[k - 1] > merged[k]:
                return False
        elif merged[k - 1] >= merged[k]:  # mu_j < nu_{j+1}
            return False
    return True


def normal_indices(s) -> NormalIndexSet:
    """All normal indices computable from the available moments, classified."""
    s = as_moment_sequence(s)
    indices, nu, mu, undecided = [], [], [], []
    n = 1
    while 2 * n - 2 < len(s):
        if hankel_det(s, n) != 0:
            indices.append(n)
            if shifted_hankel_det(s, n - 1) != 0:
                nu.append(n)
            if 2 * n - 1 < len(s):
                if shifted_hankel_det(s, n) != 0:
                    mu.append(n)
            else:
                undecided.append(n)
        n += 1
    return NormalIndexSet(tuple(indices), tuple(nu), tuple(mu), tuple(undecided))


@dataclass(frozen=True)
class Regularity:
    regular: bool
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.regular


def is_regular(s) -> Regularity:
    """A sequence is regular when every normal index n has a nonzero shifted determinant.

    Indices whose shifted determinant lies beyond the data are skipped.  On
    failure the first offending index is returned as the witness.
    """
    s = as_moment_sequence(s)
    for n in normal_indices(s).indices:
        if 2 * n - 1 < len(s) and shifted_hankel_det(s, n) == 0:
            return Regularity(False, n)
    return Regularity(True, None)


def regular_by_classification(s) -> bool:
    """Regularity read off the classification: every decided index is both nu and mu."""
    idx = normal_indices(s)
    decided = [n for n in idx.indices if n not in idx.undecided]
    return all(n in idx.nu and n in idx.mu for n in decided)
