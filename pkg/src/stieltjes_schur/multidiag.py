"""Multivariate moment tensors and their decomposition into diagonal problems.

A moment ``s_alpha`` of an n-variate tensor enters the expansion
``F(z) = -sum_alpha binom(|alpha|; alpha) s_alpha / z**(alpha + 1)``.  The
lattice of multi-indices splits into diagonals ``key + j*(1, ..., 1)`` with
``min(key) = 0``.  On one diagonal every monomial is ``z**-key`` times a power
of the product variable ``Z = z_1 ... z_n``, so each diagonal is a
one-dimensional problem in ``Z`` with a monomial prefactor.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .cf_resolvent import ContinuedFraction, cf_expand
from .errors import NoNormalIndex, SchurError, SingularStep, Truncated
from .exact_algebra import format_rational, multinomial, to_rational
from .hankel_indices import MomentSequence
from .schur_engine import PARITIES, MLDecomposition, schur_decompose_ml

Index = tuple[int, ...]


@dataclass(frozen=True)
class MomentTensor:
    """Sparse moments ``s_alpha`` with ``0 <= alpha_i <= max_degree``; absent means zero."""

    dimension: int
    entries: Mapping[Index, Fraction]
    max_degree: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        clean = {}
        for idx, value in self.entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.dimension:
                raise ValueError(f"index {idx} does not have {self.dimension} components")
            if any(i < 0 for i in idx):
                raise ValueError(f"index {idx} has a negative component")
            if any(i > self.max_degree for i in idx):
                raise ValueError(f"index {idx} exceeds max_degree {self.max_degree}")
            value = to_rational(value)
            if value != 0:
                clean[idx] = value
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def build(cls, entries: Mapping, dimension: int | None = None,
              max_degree: int | None = None) -> MomentTensor:
        """Infer the dimension and the degree bound from the entries when not given."""
        entries = {tuple(k): v for k, v in entries.items()}
        if dimension is None:
            if not entries:
                raise ValueError("an empty tensor needs an explicit dimension")
            dimension = len(next(iter(entries)))
        if max_degree is None:
            max_degree = max((max(k) for k in entries), default=0)
        return cls(dimension, entries, max_degree)

    @classmethod
    def from_moments(cls, moments: Iterable) -> MomentTensor:
        """The one-dimensional tensor of a moment sequence."""
        values = [to_rational(v) for v in moments]
        if not values:
            raise ValueError("a moment sequence needs at least one value")
        return cls(1, {(k,): v for k, v in enumerate(values)}, len(values) - 1)

    def __getitem__(self, idx) -> Fraction:
        return self.entries.get(tuple(idx), Fraction(0))

    def support(self) -> list[Index]:
        return list(self.entries)

    def to_json(self) -> dict:
        return {
            "n": self.dimension,
            "max_degree": self.max_degree,
            "entries": [{"idx": list(k), "val": format_rational(v)}
                        for k, v in self.entries.items()],
        }


def validate_key(key, dimension: int) -> Index:
    key = tuple(int(k) for k in key)
    if len(key) != dimension:
        raise ValueError(f"diagonal key {key} does not have {dimension} components")
    if any(k < 0 for k in key):
        raise ValueError(f"diagonal key {key} has a negative offset")
    if min(key) != 0:
        raise ValueError(f"diagonal key {key} has no zero offset")
    return key


def diagonal_key_of(idx: Iterable[int]) -> tuple[Index, int]:
    """The diagonal through ``idx`` and the position ``j`` of ``idx`` on it."""
    idx = tuple(idx)
    j = min(idx)
    return tuple(i - j for i in idx), j


def diagonal_weight(key: Index, j: int) -> int:
    """``binom(j n + sum(key); key_1 + j, ..., key_n + j)``."""
    parts = [k + j for k in key]
    return multinomial(sum(parts), parts)


@dataclass(frozen=True)
class DiagonalSequence:
    key: Index
    values: tuple[Fraction, ...]

    def moments(self) -> MomentSequence:
        if not self.values:
            raise NoNormalIndex(f"diagonal {self.key} has no entries within the degree bound")
        return MomentSequence(self.values)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def to_json(self) -> dict:
        return {"key": list(self.key), "moments": [format_rational(v) for v in self.values]}


def diagonal_extract(t: MomentTensor, key) -> DiagonalSequence:
    """Weighted moments along one diagonal, for every ``j`` with ``key + j <= max_degree``."""
    key = validate_key(key, t.dimension)
    count = t.max_degree - max(key) + 1
    values = tuple(diagonal_weight(key, j) * t[tuple(k + j for k in key)]
                   for j in range(max(count, 0)))
    return DiagonalSequence(key, values)


def unweight(seq: DiagonalSequence) -> dict[Index, Fraction]:
    """Undo the multinomial weights: the tensor entries the diagonal came from."""
    out = {}
    for j, v in enumerate(seq.values):
        if v != 0:
            out[tuple(k + j for k in seq.key)] = v / diagonal_weight(seq.key, j)
    return out


def diagonal_support_check(t: MomentTensor, key) -> bool:
    """True when every nonzero entry lies on the diagonal of ``key``."""
    key = validate_key(key, t.dimension)
    return all(diagonal_key_of(idx)[0] == key for idx in t.entries)


def partition_support(t: MomentTensor) -> dict[Index, list[Index]]:
    """Nonzero entries grouped by diagonal; every entry lands in exactly one group."""
    groups: dict[Index, list[Index]] = {}
    for idx in t.entries:
        groups.setdefault(diagonal_key_of(idx)[0], []).append(idx)
    return dict(sorted(groups.items()))


def monomial_of(key: Index, k: int) -> Index:
    """Exponent vector of ``1/z**(alpha+1)`` for the k-th entry on a diagonal."""
    return tuple(c + k + 1 for c in key)


def multivariate_expansion(t: MomentTensor, order: int | None = None) -> dict[Index, Fraction]:
    """Coefficients of ``F`` keyed by the exponent vector ``alpha + 1`` of ``1/z**(alpha+1)``.

    Only terms with ``|alpha| <= order`` are kept; ``order`` defaults to the
    largest total degree in the tensor.
    """
    if order is not None and order < 0:
        raise ValueError("order must be nonnegative")
    out = {}
    for idx, value in t.entries.items():
        total = sum(idx)
        if order is None or total <= order:
            out[tuple(i + 1 for i in idx)] = -multinomial(total, idx) * value
    return out


@dataclass(frozen=True)
class DiagonalSolution:
    """The S-fraction of one diagonal in ``Z = z_1 ... z_n``, with prefactor ``1/z**key``.

    ``trusted_length`` counts the leading diagonal entries that the fraction
    with its neutral tail reproduces.
    """

    key: Index
    sequence: DiagonalSequence
    decomposition: MLDecomposition
    trusted_length: int

    @property
    def parity(self) -> str:
        return self.decomposition.parity

    @property
    def continued_fraction(self) -> ContinuedFraction:
        return ContinuedFraction.from_decomposition(self.decomposition, key=self.key)

    @property
    def prefactor(self) -> Index:
        """Exponents ``j_i`` of the prefactor ``1/prod z_i**j_i``."""
        return self.key

    def expansion(self) -> dict[Index, Fraction]:
        """Multivariate coefficients reproduced by this diagonal's fraction."""
        series = cf_expand(self.continued_fraction, None, self.trusted_length)
        return {monomial_of(self.key, k): c for k, c in enumerate(series.coeffs) if c != 0}

    def trusted_monomials(self) -> list[Index]:
        return [monomial_of(self.key, k) for k in range(self.trusted_length)]


def _attach_key(exc: SchurError, key: Index) -> SchurError:
    exc.key = key
    return exc


def _decompose(seq: MomentSequence, parity: str) -> MLDecomposition:
    try:
        return schur_decompose_ml(seq, parity, strict=True)
    except (Truncated, SingularStep):
        return schur_decompose_ml(seq, parity, strict=False)


def decompose_best(seq, parity: str = "auto") -> MLDecomposition:
    """S-fraction of the whole sequence, or of the longest prefix the parity interpolates.

    ``parity="auto"`` keeps whichever parity reproduces more entries,
    preferring even on a tie.
    """
    if parity not in (*PARITIES, "auto"):
        raise ValueError(f"parity must be 'odd', 'even' or 'auto', got {parity!r}")
    if parity != "auto":
        return _decompose(seq, parity)
    found, first_error = [], None
    for p in ("even", "odd"):
        try:
            found.append(_decompose(seq, p))
        except SchurError as exc:
            first_error = first_error or exc
    if not found:
        raise first_error
    return max(found, key=lambda d: d.matched)


def solve_diagonal(t: MomentTensor, key, parity: str = "auto") -> DiagonalSolution:
    """Run the diagonal Schur algorithm on one diagonal of ``t``.

    The parity rule is that of :func:`decompose_best`.  Errors carry the
    diagonal key.
    """
    key = validate_key(key, t.dimension)
    seq = diagonal_extract(t, key)
    try:
        dec = decompose_best(seq.moments(), parity)
    except SchurError as exc:
        raise _attach_key(exc, key)
    return DiagonalSolution(key, seq, dec, dec.matched)


@dataclass(frozen=True)
class FullSolution:
    """The formal sum of diagonal solutions over the support of a tensor."""

    tensor: MomentTensor
    solutions: tuple[DiagonalSolution, ...]
    errors: Mapping[Index, SchurError] = field(default_factory=dict)

    def keys(self) -> list[Index]:
        return [s.key for s in self.solutions]

    def expansion(self) -> dict[Index, Fraction]:
        out: dict[Index, Fraction] = {}
        for sol in self.solutions:
            out.update(sol.expansion())
        return out

    def trusted_monomials(self) -> set[Index]:
        return {m for sol in self.solutions for m in sol.trusted_monomials()}

    def mismatches(self) -> list[Index]:
        """Trusted monomials where the reassembled expansion differs from the tensor's."""
        direct = multivariate_expansion(self.tensor)
        mine = self.expansion()
        return sorted(m for m in self.trusted_monomials()
                      if mine.get(m, 0) != direct.get(m, 0))


def assemble_full(t: MomentTensor, parity: str = "auto") -> FullSolution:
    """Solve every nonempty diagonal; failures are recorded per key and do not stop the rest."""
    solutions, errors = [], {}
    for key in partition_support(t):
        try:
            solutions.append(solve_diagonal(t, key, parity))
        except SchurError as exc:
            errors[key] = exc
    return FullSolution(t, tuple(solutions), errors)
