"""S-fraction assembly, Stieltjes polynomials, resolvent matrices and their action.

Inside this module ``z`` is the single formal variable.  For a
multidimensional diagonal problem it stands for the product ``z_1 ... z_n``,
and the monomial ``prod z_i**j_i`` that multiplies the P-row of the resolvent
is carried along as an exponent vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SeriesDivisionError
from .exact_algebra import ONE, Polynomial, TruncatedLaurentSeries
from .schur_engine import TAIL_CONTRACTS, AtomML, MLDecomposition, _check_parity

Matrix2 = tuple[tuple[Polynomial, Polynomial], tuple[Polynomial, Polynomial]]


@dataclass(frozen=True)
class ContinuedFraction:
    """An odd or even S-fraction.

    Odd: ``1/(-z m_1 + 1/(l_1 + ... + 1/(-z m_N + 1/tau)))``.
    Even: ``1/(-z m_1 + 1/(l_1 + ... + 1/(-z m_N + 1/(l_N + tau))))``.
    ``key`` holds the diagonal offsets of a multidimensional problem.
    """

    atoms: tuple[AtomML, ...]
    parity: str
    key: tuple[int, ...] | None = None
    tail_contract: str = field(default="")

    def __post_init__(self):
        _check_parity(self.parity)
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.tail_contract:
            object.__setattr__(self, "tail_contract", TAIL_CONTRACTS[self.parity])
        for j, atom in enumerate(self.atoms, start=1):
            if atom.m.is_zero():
                raise ValueError(f"m-atom {j} is zero")
            if self.parity == "odd" and j == len(self.atoms):
                if atom.l is not None:
                    raise ValueError("the last level of an odd fraction carries no l-atom")
            elif atom.l is None:
                raise ValueError(f"level {j} is missing its l-atom")
            elif atom.l.is_zero():
                raise ValueError(f"l-atom {j} is zero")

    @classmethod
    def from_decomposition(cls, dec: MLDecomposition, key=None) -> ContinuedFraction:
        return cls(dec.atoms, dec.parity, None if key is None else tuple(key))

    @property
    def levels(self) -> int:
        return len(self.atoms)

    @property
    def last_index(self) -> int:
        """Index of the last Stieltjes polynomial the fraction determines."""
        if self.levels == 0:
            return 0
        return 2 * self.levels - 1 if self.parity == "odd" else 2 * self.levels

    def prefactor(self) -> tuple[int, ...]:
        return tuple(self.key) if self.key is not None else ()

    def with_atom(self, index: int, atom: AtomML) -> ContinuedFraction:
        """Copy with the atom of level ``index`` (1-based) replaced."""
        atoms = list(self.atoms)
        atoms[index - 1] = atom
        return ContinuedFraction(tuple(atoms), self.parity, self.key, self.tail_contract)


@dataclass(frozen=True)
class Tail:
    """A tail parameter ``tau = num / den`` in homogeneous form.

    ``Tail.zero()`` is ``tau = 0`` and ``Tail.infinite()`` is ``1/tau = 0``.
    """

    num: TruncatedLaurentSeries
    den: TruncatedLaurentSeries

    def __post_init__(self):
        if self.num.is_zero() and self.den.is_zero():
            raise ValueError("a tail needs a nonzero numerator or denominator")

    @classmethod
    def zero(cls) -> Tail:
        return cls(TruncatedLaurentSeries.zero(), TruncatedLaurentSeries.constant(1))

    @classmethod
    def infinite(cls) -> Tail:
        return cls(TruncatedLaurentSeries.constant(1), TruncatedLaurentSeries.zero())

    @classmethod
    def of(cls, tau: TruncatedLaurentSeries) -> Tail:
        return cls(tau, TruncatedLaurentSeries.constant(1))

    @classmethod
    def of_inverse(cls, inverse_tau: TruncatedLaurentSeries) -> Tail:
        return cls(TruncatedLaurentSeries.constant(1), inverse_tau)

    @classmethod
    def neutral(cls, parity: str) -> Tail:
        """The tail that makes the innermost slot vanish: ``tau = 0`` even, ``1/tau = 0`` odd."""
        return cls.zero() if _check_parity(parity) == "even" else cls.infinite()

    def meets_contract(self, contract: str) -> bool:
        """``o(1)``: tau has only negative powers; ``o(z)``: 1/tau has no power >= 1."""
        if contract == "o(1)":
            return self.den.is_zero() is False and _only_below(self.num, self.den, 0)
        if contract == "o(z)":
            return self.num.is_zero() is False and _only_below(self.den, self.num, 1)
        raise ValueError(f"unknown tail contract {contract!r}")


def _only_below(num: TruncatedLaurentSeries, den: TruncatedLaurentSeries, exponent: int) -> bool:
    if num.is_zero():
        return True
    num_top = num.top_exponent
    den_top = den.top_exponent
    return num_top - den_top < exponent


def _as_tail(tau, parity: str) -> Tail:
    if tau is None:
        return Tail.neutral(parity)
    if isinstance(tau, Tail):
        return tau
    if isinstance(tau, Polynomial):
        tau = TruncatedLaurentSeries.from_polynomial(tau)
    if not isinstance(tau, TruncatedLaurentSeries):
        tau = TruncatedLaurentSeries.constant(tau)
    return Tail.of(tau)


# ---------------------------------------------------------------------------
# Stieltjes polynomials and resolvent matrices


@dataclass(frozen=True)
class StieltjesPair:
    index: int
    P: Polynomial
    Q: Polynomial


def stieltjes_polynomials(cf: ContinuedFraction, up_to: int | None = None) -> list[StieltjesPair]:
    """Pairs ``(P_k, Q_k)`` for ``k = -1 .. up_to``.

    Both kinds solve ``y_{2j} = y_{2j-2} + l_j y_{2j-1}`` and
    ``y_{2j+1} = y_{2j-1} - m_{j+1} z y_{2j}``.  P starts from ``(0, 1)`` and
    Q from ``(1, 0)`` at indices -1 and 0.
    """
    if up_to is None:
        up_to = cf.last_index
    if not -1 <= up_to <= cf.last_index:
        raise ValueError(f"index {up_to} outside the range -1..{cf.last_index} of this fraction")
    P = {-1: Polynomial(), 0: Polynomial([1])}
    Q = {-1: Polynomial([1]), 0: Polynomial()}
    for k in range(1, up_to + 1):
        if k % 2:
            mz = cf.atoms[(k - 1) // 2].m.shift(1)
            P[k] = P[k - 2] - mz * P[k - 1]
            Q[k] = Q[k - 2] - mz * Q[k - 1]
        else:
            l = cf.atoms[k // 2 - 1].l
            P[k] = P[k - 2] + l * P[k - 1]
            Q[k] = Q[k - 2] + l * Q[k - 1]
    return [StieltjesPair(k, P[k], Q[k]) for k in range(-1, up_to + 1)]


@dataclass(frozen=True)
class ResolventMatrix:
    """2x2 polynomial matrix ``W = A @ core`` with ``A = diag(1, prod z_i**j_i)``.

    ``core`` has determinant 1.  ``prefactor`` is the exponent vector of the
    monomial in ``A``; it is empty for a one-dimensional problem.
    """

    core: Matrix2
    kind: str
    prefactor: tuple[int, ...] = ()

    def core_det(self) -> Polynomial:
        (a, b), (c, d) = self.core
        return a * d - b * c

    def det_monomial(self) -> tuple[Polynomial, tuple[int, ...]]:
        """``det W`` as (core determinant, exponent vector of the A monomial)."""
        return self.core_det(), self.prefactor

    def to_json(self) -> dict:
        det = self.core_det()
        out = {
            "kind": self.kind,
            "matrix": [[p.to_json() for p in row] for row in self.core],
            "det": "1" if det == 1 else det.to_json(),
        }
        if self.prefactor:
            out["prefactor"] = list(self.prefactor)
        return out


IDENTITY: Matrix2 = ((Polynomial([1]), Polynomial()), (Polynomial(), Polynomial([1])))


def mat_mul(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def m_factor(m: Polynomial) -> Matrix2:
    """``[[1, 0], [-m z, 1]]``."""
    return ((Polynomial([1]), Polynomial()), (-m.shift(1), Polynomial([1])))


def l_factor(l: Polynomial) -> Matrix2:
    """``[[1, l], [0, 1]]``."""
    return ((Polynomial([1]), l), (Polynomial(), Polynomial([1])))


def factor_list(cf: ContinuedFraction) -> list[tuple[str, int, Matrix2]]:
    """The elementary factors ``M_1, L_1, M_2, ...`` in multiplication order."""
    out = []
    for j, atom in enumerate(cf.atoms, start=1):
        out.append(("M", j, m_factor(atom.m)))
        if atom.l is not None:
            out.append(("L", j, l_factor(atom.l)))
    return out


def factor_product(cf: ContinuedFraction) -> Matrix2:
    product = IDENTITY
    for _, _, mat in factor_list(cf):
        product = mat_mul(product, mat)
    return product


def resolvent_matrix(cf: ContinuedFraction) -> ResolventMatrix:
    """W from the Stieltjes polynomials.

    Odd: ``[[Q_{2N-1}, Q_{2N-2}], [P_{2N-1}, P_{2N-2}]]``.  Even:
    ``[[Q_{2N-1}, Q_{2N}], [P_{2N-1}, P_{2N}]]``.  An empty fraction gives the
    identity.
    """
    n = cf.levels
    if n == 0:
        return ResolventMatrix(IDENTITY, cf.parity, cf.prefactor())
    pairs = {p.index: p for p in stieltjes_polynomials(cf)}
    first = pairs[2 * n - 1]
    second = pairs[2 * n - 2] if cf.parity == "odd" else pairs[2 * n]
    core = ((first.Q, second.Q), (first.P, second.P))
    return ResolventMatrix(core, cf.parity, cf.prefactor())


def decode_atoms(W: ResolventMatrix, levels: int) -> list[AtomML] | int:
    """Recover the S-fraction atoms from the P-row of ``W`` by Euclidean division.

    Peels ``L_N, M_N, L_{N-1}, ...`` off the right.  The degrees of the
    Stieltjes polynomials make each quotient unique.  Returns the atom list
    in order, or the level at which the row stops having the required shape.
    """
    first, second = W.core[1]
    m_atoms: dict[int, Polynomial] = {}
    l_atoms: dict[int, Polynomial | None] = {}
    # (hi, lo) hold P_k and P_{k-1}, walking k downwards
    if W.kind == "even":
        hi, lo, k = second, first, 2 * levels
    else:
        hi, lo, k = first, second, 2 * levels - 1
        l_atoms[levels] = None
    while k > 0:
        if lo.is_zero():
            return (k + 1) // 2
        q, r = divmod(hi, lo)
        if k % 2 == 0:
            if q.is_zero():
                return k // 2
            l_atoms[k // 2] = q
            hi, lo = lo, r
        else:
            c = q.coefficient(0)
            mz = q - c
            if mz.is_zero():
                return (k + 1) // 2
            m_atoms[(k + 1) // 2] = -Polynomial(mz.coeffs[1:])
            hi, lo = lo, r + lo * c
        k -= 1
    if hi != 1 or not lo.is_zero():
        return 1
    return [AtomML(m_atoms[j], l_atoms[j]) for j in range(1, levels + 1)]


@dataclass(frozen=True)
class FactorizationCheck:
    """Outcome of comparing W with its factor product.

    On failure ``witness`` is the first level whose atom disagrees with W and
    ``factor`` names the factor kind ("M", "L" or "A" for the prefactor).
    """

    ok: bool
    witness: int | None = None
    factor: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def resolvent_factorization_check(cf: ContinuedFraction,
                                  W: ResolventMatrix | None = None) -> FactorizationCheck:
    """True iff ``W = A M_1 L_1 ...`` for the atoms of ``cf``.

    ``W`` defaults to the matrix assembled from the Stieltjes polynomials of
    ``cf``.  Passing a matrix built from other atoms locates the first level
    at which the two disagree.
    """
    if W is None:
        W = resolvent_matrix(cf)
    if W.prefactor != cf.prefactor():
        return FactorizationCheck(False, 0, "A")
    if W.kind != cf.parity:
        return FactorizationCheck(False, cf.levels, "L" if cf.parity == "even" else "M")
    if factor_product(cf) == W.core:
        return FactorizationCheck(True)
    decoded = decode_atoms(W, cf.levels)
    if isinstance(decoded, int):
        return FactorizationCheck(False, decoded, "M")
    for j, (mine, theirs) in enumerate(zip(cf.atoms, decoded), start=1):
        if mine.m != theirs.m:
            return FactorizationCheck(False, j, "M")
        if mine.l != theirs.l:
            return FactorizationCheck(False, j, "L")
    # the P-row matches these atoms, so the Q-row is off from the first factor
    return FactorizationCheck(False, 1, "M")


# ---------------------------------------------------------------------------
# linear-fractional action and bottom-up expansion


def _quotient(num: TruncatedLaurentSeries, den: TruncatedLaurentSeries, floor: int,
              depth: int | None = None) -> TruncatedLaurentSeries:
    """``num / den`` computed at least down to ``z**floor``."""
    if den.is_zero():
        where = "" if depth is None else f" at nesting depth {depth}"
        raise SeriesDivisionError(f"zero denominator{where}")
    if num.is_exact and num.is_zero():
        return TruncatedLaurentSeries.zero()
    top = num.top_exponent if num.top_exponent is not None else num.low - 1
    return num * den.reciprocal(floor - top)


def moebius_apply(W: ResolventMatrix, tau=None, order: int = 8) -> TruncatedLaurentSeries:
    """``(w11 tau + w12) / (w21 tau + w22)`` as a series in ``1/z``.

    ``tau`` may be a series, a :class:`Tail`, or None for the neutral tail of
    ``W.kind``.  For a keyed matrix the result is the action of the core; the
    caller divides by the A monomial.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    tail = _as_tail(tau, W.kind)
    (w11, w12), (w21, w22) = W.core
    num = tail.num * w11 + tail.den * w12
    den = tail.num * w21 + tail.den * w22
    if den.is_zero():
        raise SeriesDivisionError("the denominator of the linear-fractional action vanishes")
    return _quotient(num, den, -order).truncate(order)


def cf_expand(cf: ContinuedFraction, tau=None, order: int = 8) -> TruncatedLaurentSeries:
    """Expand the nested fraction from the inside out.

    Every level is a genuine series reciprocal.  ``tau`` follows the
    conventions of :func:`moebius_apply`.  The result keeps ``order`` negative
    powers when the tail allows it; its ``low`` records how far it is trusted.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    tail = _as_tail(tau, cf.parity)
    if cf.levels == 0:
        if tail.den.is_zero():
            raise SeriesDivisionError("an empty fraction with an infinite tail has no expansion")
        return _quotient(tail.num, tail.den, -order).truncate(order)
    value = None
    for margin in (2, order + 4, 4 * order + 16):
        value = _expand_nested(cf, tail, -order - margin)
        if value.low is None or value.low <= -order:
            break
    return value.truncate(order)


def _expand_nested(cf: ContinuedFraction, tail: Tail, floor: int) -> TruncatedLaurentSeries:
    depth = 2 * cf.levels - (1 if cf.parity == "odd" else 0)
    # ``t`` is the value entering the innermost slot; None stands for infinity
    if cf.parity == "even":
        t = None if tail.den.is_zero() else _quotient(tail.num, tail.den, floor, depth)
    else:
        t = None if tail.num.is_zero() else _quotient(tail.den, tail.num, floor, depth)
    for j in range(cf.levels, 0, -1):
        atom = cf.atoms[j - 1]
        if atom.l is not None:
            t = _reciprocal_slot(atom.l, t, floor, 2 * j)
        t = _reciprocal_slot(-atom.m.shift(1), t, floor, 2 * j - 1)
    return t


def _reciprocal_slot(poly: Polynomial, t, floor: int, depth: int) -> TruncatedLaurentSeries:
    """``1 / (poly + t)``; an infinite ``t`` gives exactly zero."""
    if t is None:
        return TruncatedLaurentSeries.zero()
    return _quotient(TruncatedLaurentSeries.constant(ONE), t + poly, floor, depth)
