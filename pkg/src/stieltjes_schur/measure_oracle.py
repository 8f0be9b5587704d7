"""Finite atomic measures on the positive orthant as brute-force ground truth."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cf_resolvent import ContinuedFraction, cf_expand
from .errors import SchurError
from .exact_algebra import TruncatedLaurentSeries, format_rational, to_rational
from .hankel_indices import MomentSequence
from .multidiag import MomentTensor, assemble_full
from .schur_engine import schur_decompose_ml


@dataclass(frozen=True)
class DiscreteMeasure:
    """``sum_k w_k delta_{t_k}`` with distinct nodes in the open positive orthant."""

    dimension: int
    atoms: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        clean = []
        for node, weight in self.atoms:
            node = tuple(to_rational(c) for c in node)
            weight = to_rational(weight)
            if len(node) != self.dimension:
                raise ValueError(f"node {node} does not have {self.dimension} coordinates")
            if any(c <= 0 for c in node):
                raise ValueError(f"node {node} is not in the open positive orthant")
            if weight <= 0:
                raise ValueError(f"weight {weight} is not positive")
            clean.append((node, weight))
        nodes = [n for n, _ in clean]
        if len(set(nodes)) != len(nodes):
            raise ValueError("nodes must be distinct")
        object.__setattr__(self, "atoms", tuple(clean))

    @classmethod
    def on_line(cls, nodes, weights=None) -> DiscreteMeasure:
        """A one-dimensional measure; weights default to 1."""
        nodes = list(nodes)
        weights = [1] * len(nodes) if weights is None else list(weights)
        if len(weights) != len(nodes):
            raise ValueError("nodes and weights differ in length")
        return cls(1, tuple(((t,), w) for t, w in zip(nodes, weights)))

    @property
    def size(self) -> int:
        return len(self.atoms)

    def to_json(self) -> dict:
        return {
            "n": self.dimension,
            "atoms": [{"node": [format_rational(c) for c in node], "weight": format_rational(w)}
                      for node, w in self.atoms],
        }

    @classmethod
    def from_json(cls, data: dict) -> DiscreteMeasure:
        return cls(int(data["n"]),
                   tuple((tuple(a["node"]), a["weight"]) for a in data["atoms"]))


def _moment(m: DiscreteMeasure, alpha) -> Fraction:
    total = Fraction(0)
    for node, w in m.atoms:
        term = w
        for t, a in zip(node, alpha):
            term *= t ** a
        total += term
    return total


def moments(m: DiscreteMeasure, max_degree: int) -> MomentSequence | MomentTensor:
    """Exact ``s_alpha`` for every ``alpha`` with components up to ``max_degree``.

    One-dimensional measures give a :class:`MomentSequence` of length
    ``max_degree + 1``; higher dimensions give a :class:`MomentTensor`.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    if m.dimension == 1:
        return MomentSequence(tuple(_moment(m, (j,)) for j in range(max_degree + 1)))
    entries = {alpha: _moment(m, alpha)
               for alpha in itertools.product(range(max_degree + 1), repeat=m.dimension)}
    return MomentTensor(m.dimension, entries, max_degree)


def stieltjes_series(m: DiscreteMeasure, order: int) -> TruncatedLaurentSeries:
    """``sum_k w_k / (t_k - z)`` expanded in ``1/z``, one formal reciprocal per atom."""
    if m.dimension != 1:
        raise ValueError("the Stieltjes transform series is defined for one-dimensional measures")
    if order < 1:
        raise ValueError("order must be at least 1")
    total = TruncatedLaurentSeries.zero(-order)
    for (t,), w in m.atoms:
        denominator = TruncatedLaurentSeries({0: t, 1: -1})
        total = total + denominator.reciprocal(-order) * w
    return total.truncate(order)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a moments-to-fraction-to-series round trip.

    ``compared`` counts coefficients checked, ``first_mismatch`` is the index
    (one-dimensional) or monomial (multidimensional) of the first
    disagreement, and ``error`` holds a Schur error instead of raising it.
    """

    ok: bool
    levels: int
    compared: int
    first_mismatch: object = None
    error: SchurError | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"ok": self.ok, "levels": self.levels, "compared": self.compared,
               "first_mismatch": self.first_mismatch}
        if self.error is not None:
            out["error"] = self.error.to_json()
        out.update(self.details)
        return out


def roundtrip_verify(m: DiscreteMeasure, parity: str = "auto") -> VerificationReport:
    """Check that the S-fraction of the measure's moments expands back to its transform.

    A one-dimensional measure with k atoms contributes ``2k`` moments to an
    even fraction and ``2k - 1`` to an odd one.  Both should have exactly k
    levels.  Higher dimensions compare every diagonal of the moment tensor of
    degree ``2k - 1`` against the direct multivariate expansion.  ``"auto"``
    means even in one dimension and the per-diagonal choice of
    :func:`solve_diagonal` otherwise.
    """
    if m.dimension > 1:
        return _roundtrip_tensor(m, parity)
    if parity == "auto":
        parity = "even"
    k = m.size
    count = 2 * k if parity == "even" else 2 * k - 1
    s = moments(m, count - 1)
    try:
        dec = schur_decompose_ml(s, parity)
        expanded = cf_expand(ContinuedFraction.from_decomposition(dec), None, count)
    except SchurError as exc:
        return VerificationReport(False, 0, 0, error=exc)
    direct = stieltjes_series(m, count)
    mismatch = next((j for j in range(count)
                     if expanded.coefficient(-(j + 1)) != direct.coefficient(-(j + 1))), None)
    ok = mismatch is None and dec.levels == k
    return VerificationReport(ok, dec.levels, count, mismatch,
                              details={"atoms": k, "matched": dec.matched})


def _roundtrip_tensor(m: DiscreteMeasure, parity: str) -> VerificationReport:
    degree = max(2 * m.size - 1, 1)
    tensor = moments(m, degree)
    full = assemble_full(tensor, parity)
    mismatches = full.mismatches()
    trusted = full.trusted_monomials()
    error = next(iter(full.errors.values()), None)
    first = list(mismatches[0]) if mismatches else None
    ok = not mismatches and error is None
    return VerificationReport(ok, sum(s.decomposition.levels for s in full.solutions),
                              len(trusted), first, error,
                              details={"diagonals": len(full.solutions),
                                       "failed_diagonals": len(full.errors)})


def _random_positive(rng: random.Random, upper: int) -> Fraction:
    while True:
        value = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        if value <= upper:
            return value


def random_measure(seed: int, atoms: int | None = None, dimension: int = 1,
                   max_atoms: int = 5) -> DiscreteMeasure:
    """Seeded measure with nodes ``p/q`` in ``(0, 10]`` and weights ``p/q`` in ``(0, 5]``, ``p, q <= 20``."""
    rng = random.Random(seed)
    k = atoms if atoms is not None else rng.randint(1, max_atoms)
    nodes: list[tuple[Fraction, ...]] = []
    while len(nodes) < k:
        node = tuple(_random_positive(rng, 10) for _ in range(dimension))
        if node not in nodes:
            nodes.append(node)
    return DiscreteMeasure(dimension, tuple((node, _random_positive(rng, 5)) for node in nodes))
