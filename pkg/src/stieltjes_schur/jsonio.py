"""JSON formats for moments, tensors, measures, fractions and reports.

Rationals travel as ``"p/q"`` strings.  Plain JSON integers and decimal
literals are accepted on input and read exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cf_resolvent import ContinuedFraction
from .exact_algebra import Polynomial, TruncatedLaurentSeries, format_rational, to_rational
from .hankel_indices import MomentSequence, as_moment_sequence
from .measure_oracle import DiscreteMeasure
from .multidiag import MomentTensor
from .schur_engine import ABDecomposition, AtomML, MLDecomposition, ShiftedSequence


class InputFormatError(ValueError):
    """The input is not valid JSON or does not have the expected shape."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def to_json(self) -> dict:
        out = {"error": "InputFormatError", "message": str(self)}
        if self.line is not None:
            out.update(line=self.line, column=self.column)
        return out


def loads(text: str):
    """Parse JSON, reading decimal literals as exact fractions."""
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON: {exc.msg}", line=exc.lineno,
                               column=exc.colno) from None


def dumps(obj) -> str:
    """Deterministic text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _field(data: dict, name: str):
    try:
        return data[name]
    except (KeyError, TypeError):
        raise InputFormatError(f"missing field {name!r}") from None


def _rationals(values, what: str) -> list[Fraction]:
    if not isinstance(values, list):
        raise InputFormatError(f"{what} must be a list")
    try:
        return [to_rational(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"{what}: {exc}") from None


def parse_moments(data) -> MomentSequence:
    """A bare list, or an object with a ``moments`` list."""
    values = data.get("moments") if isinstance(data, dict) else data
    if values is None:
        raise InputFormatError("expected a list of moments or an object with 'moments'")
    values = _rationals(values, "moments")
    if not values:
        raise InputFormatError("a moment sequence needs at least one value")
    return as_moment_sequence(values)


def parse_tensor(data) -> MomentTensor:
    """``{"n", "entries": [{"idx", "val"}], "max_degree"}``; a bare list is one-dimensional."""
    if isinstance(data, list) or (isinstance(data, dict) and "moments" in data):
        return MomentTensor.from_moments(parse_moments(data))
    n = _field(data, "n")
    entries = {}
    for item in _field(data, "entries"):
        idx = _field(item, "idx")
        if not isinstance(idx, list) or not all(isinstance(i, int) for i in idx):
            raise InputFormatError(f"idx must be a list of integers, got {idx!r}")
        entries[tuple(idx)] = _rationals([_field(item, "val")], "val")[0]
    try:
        return MomentTensor.build(entries, n, data.get("max_degree"))
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def parse_measure(data) -> DiscreteMeasure:
    try:
        return DiscreteMeasure.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputFormatError(f"measure JSON needs 'n' and 'atoms': {exc}") from None
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def parse_polynomial(values, what: str) -> Polynomial:
    return Polynomial(_rationals(values, what))


def parse_fraction(data) -> ContinuedFraction:
    """``{"parity", "atoms": [{"m": [...], "l": [...] | null}], "key"?}``, as ``schur`` emits."""
    atoms = []
    for j, item in enumerate(_field(data, "atoms"), start=1):
        m = parse_polynomial(_field(item, "m"), f"m-atom {j}")
        l_raw = item.get("l")
        l = None if l_raw is None else parse_polynomial(l_raw, f"l-atom {j}")
        atoms.append(AtomML(m, l))
    key = data.get("key")
    try:
        return ContinuedFraction(tuple(atoms), _field(data, "parity"),
                                 None if key is None else tuple(key))
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def parse_tail(data) -> TruncatedLaurentSeries | None:
    """Optional ``"tau"``: coefficients of ``z**-1, z**-2, ...`` of the tail series."""
    if not isinstance(data, dict) or data.get("tau") is None:
        return None
    coeffs = _rationals(data["tau"], "tau")
    if not coeffs:
        return TruncatedLaurentSeries.zero()
    return TruncatedLaurentSeries.from_coefficients(coeffs)


def rationals_json(values) -> list[str]:
    return [format_rational(v) for v in values]


def sequence_json(seq: ShiftedSequence) -> dict:
    return {"level": seq.level, "start": seq.start, "values": rationals_json(seq.values)}


def ml_json(dec: MLDecomposition, key=None) -> dict:
    out = {
        "parity": dec.parity,
        "levels": dec.levels,
        "matched": dec.matched,
        "atoms": [{"m": a.m.to_json(), "l": None if a.l is None else a.l.to_json()}
                  for a in dec.atoms],
        "gaps": [list(g) for g in dec.gaps],
        "tail_contract": dec.tail.contract,
        "tail": {
            "contract": dec.tail.contract,
            "remainder": None if dec.tail.remainder is None
            else sequence_json(dec.tail.remainder),
        },
        "sequences": [sequence_json(s) for s in dec.sequences],
    }
    if key is not None:
        out["key"] = list(key)
    return out


def ab_json(dec: ABDecomposition) -> dict:
    return {
        "levels": len(dec.atoms),
        "atoms": [{"b": format_rational(a.b), "a": a.a.to_json()} for a in dec.atoms],
        "sequences": [sequence_json(s) for s in dec.sequences],
    }


def series_json(series: TruncatedLaurentSeries) -> dict:
    return series.to_json()


def monomial_map_json(coeffs: dict) -> list[dict]:
    return [{"monomial": list(k), "val": format_rational(v)} for k, v in sorted(coeffs.items())]
