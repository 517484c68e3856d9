"""JSON description files for orders.

    {"dim": 5,
     "algebra": {"a": "-1", "b": "-1"},
     "involution": "none",
     "basis": [["1", "0", "0", "0"], ["0", "1", "0", "0"],
               ["0", "0", "1", "0"], ["1/2", "1/2", "1/2", "1/2"]]}

Quadratic orders (dim 3) use ``"algebra": {"d": "3"}`` for Q(sqrt(-3)) and
rows of two coordinates.  Dim 4 requires ``"involution": "orthogonal-ij"``.
Rationals are strings "p/q"; plain integers are accepted too.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .orders import OrderLattice, OrderValidationError, validate_order
from .qarith import Algebra, Involution, Quat


class OrderFileError(ValueError):
    """Malformed file; ``where`` is a JSON path or "line L, column C"."""

    def __init__(self, message: str, where: str | None = None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
        self.detail = message


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise OrderFileError("expected a rational string such as \"1/2\"", where)
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise OrderFileError(f"not a rational number: {v!r}", where) from None


def order_from_dict(data: dict) -> OrderLattice:
    if not isinstance(data, dict):
        raise OrderFileError("top level must be an object", "$")
    for key in ("dim", "algebra", "basis"):
        if key not in data:
            raise OrderFileError(f"missing field {key!r}", "$")
    dim = data["dim"]
    if dim not in (3, 4, 5):
        raise OrderFileError("dim must be 3, 4 or 5", "$.dim")
    alg_d = data["algebra"]
    if not isinstance(alg_d, dict):
        raise OrderFileError("expected an object", "$.algebra")
    if dim == 3:
        if "d" not in alg_d:
            raise OrderFileError("quadratic orders need field 'd'", "$.algebra")
        d = _rational(alg_d["d"], "$.algebra.d")
        if d <= 0 or d.denominator != 1:
            raise OrderFileError("d must be a positive integer", "$.algebra.d")
        alg = Algebra.quadratic(int(d))
    else:
        for key in ("a", "b"):
            if key not in alg_d:
                raise OrderFileError(f"missing field {key!r}", "$.algebra")
        alg = Algebra.quaternion(_rational(alg_d["a"], "$.algebra.a"), _rational(alg_d["b"], "$.algebra.b"))
    inv_kind = data.get("involution", "none")
    if inv_kind not in ("none", "orthogonal-ij"):
        raise OrderFileError("involution must be 'none' or 'orthogonal-ij'", "$.involution")
    if (dim == 4) != (inv_kind == "orthogonal-ij"):
        raise OrderFileError("dim 4 goes with the orthogonal-ij involution and only with it", "$.involution")
    inv = Involution.orthogonal(alg) if inv_kind == "orthogonal-ij" else None
    rows = data["basis"]
    if not isinstance(rows, list) or len(rows) != alg.rank:
        raise OrderFileError(f"expected a list of {alg.rank} rows", "$.basis")
    basis = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != alg.rank:
            raise OrderFileError(f"expected {alg.rank} coordinates", f"$.basis[{r}]")
        basis.append(Quat(alg, *(_rational(v, f"$.basis[{r}][{c}]") for c, v in enumerate(row))))
    try:
        return validate_order(basis, inv)
    except OrderValidationError as exc:
        raise OrderValidationError(f"$.basis: {exc}") from None


def order_to_dict(O: OrderLattice) -> dict:
    alg = O.algebra
    if O.dim == 3:
        alg_d = {"d": str(-alg.a)}
    else:
        alg_d = {"a": str(alg.a), "b": str(alg.b)}
    return {
        "dim": O.dim,
        "algebra": alg_d,
        "involution": O.involution.kind if O.involution is not None and O.dim == 4 else "none",
        "basis": [[str(c) for c in q.vector()] for q in O.basis],
    }


def loads_order(text: str) -> OrderLattice:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OrderFileError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return order_from_dict(data)


def dumps_order(O: OrderLattice) -> str:
    return json.dumps(order_to_dict(O), indent=1) + "\n"


def parse_order_file(path: str | Path) -> OrderLattice:
    return loads_order(Path(path).read_text())
