"""Exact rank, span membership, and quotient bases over Q and GF(2).

Vectors are finite maps from canonical diagrams to coefficients; a matrix
column order is the canonical sort order of the diagram column set.  Both
field backends keep a fully-reduced row echelon with rightmost pivots:
every stored row reads "pivot column = combination of kept columns", so
the kept (non-pivot) columns are exactly the greedy basis of the quotient
(scan columns in canonical order, keep a column whenever its class is
independent of the classes kept so far), and reduction to the normal form
supported on kept columns is a single descending substitution pass.

The rational backend stores sparse Fraction rows; the GF(2) backend packs
each row into a single int bitmask (bit i = column i) and eliminates with
XOR, which is the fast path for the larger framed orders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .diagrams import (
    Diagram,
    enumerate_arc_diagrams,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    parse_arc,
    parse_chord,
)

RATIONAL = "rational"
GF2 = "gf2"

_FIELD_ALIASES = {
    "q": RATIONAL,
    "rational": RATIONAL,
    "gf2": GF2,
    "f2": GF2,
    "2": GF2,
}


def normalize_field(field: str) -> str:
    try:
        return _FIELD_ALIASES[field.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown field {field!r}; use 'q' or 'gf2'") from None


class _RationalEchelon:
    """Fully-reduced sparse echelon over Q, rightmost-column pivots."""

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        # Stored rows contain no pivot columns besides their own, so one
        # descending pass eliminates every pivot column from `row`.
        row = dict(row)
        while True:
            hits = [j for j in row if j in self.pivots]
            if not hits:
                return row
            j = max(hits)
            coef = row.pop(j)
            for k, v in self.pivots[j].items():
                if k == j:
                    continue
                new = row.get(k, _ZERO) - coef * v
                if new:
                    row[k] = new
                else:
                    row.pop(k, None)

    def insert(self, row: dict[int, Fraction]) -> Optional[int]:
        """Add a row to the span; returns the new pivot column, if any."""
        row = self.reduce(row)
        if not row:
            return None
        p = max(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        for r in self.pivots.values():
            c = r.get(p)
            if c is None:
                continue
            del r[p]
            for k, v in row.items():
                if k == p:
                    continue
                new = r.get(k, _ZERO) - c * v
                if new:
                    r[k] = new
                else:
                    r.pop(k, None)
        self.pivots[p] = row
        return p


_ZERO = Fraction(0)


class _Gf2Echelon:
    """Fully-reduced echelon over GF(2); rows are int bitmasks."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, row: int) -> int:
        j = row.bit_length() - 1
        while j >= 0:
            if (row >> j) & 1 and j in self.pivots:
                row ^= self.pivots[j]
            j = (row & ((1 << j) - 1)).bit_length() - 1
        return row

    def insert(self, row: int) -> Optional[int]:
        row = self.reduce(row)
        if not row:
            return None
        p = row.bit_length() - 1
        for q, r in self.pivots.items():
            if (r >> p) & 1:
                self.pivots[q] = r ^ row
        self.pivots[p] = row
        return p


VectorLike = Union[Mapping[Diagram, int], "object"]


def _as_dict(vector: VectorLike) -> Mapping:
    if hasattr(vector, "as_dict"):
        return vector.as_dict()
    return vector


def _check_single_order(vectors: Sequence[Mapping]) -> None:
    order = None
    for v in vectors:
        for d in v:
            if order is None:
                order = d.order
            elif d.order != order:
                raise ValueError(
                    f"mixed orders in relation set: {order} and {d.order}")


def rank(vectors: Iterable[VectorLike], field: str) -> int:
    """Exact rank of the span of the given diagram vectors."""
    field = normalize_field(field)
    dicts = [_as_dict(v) for v in vectors]
    _check_single_order(dicts)
    support = sorted({d for v in dicts for d in v}, key=lambda d: d.sort_key())
    index = {d: i for i, d in enumerate(support)}
    if field == RATIONAL:
        ech = _RationalEchelon()
        count = 0
        for v in dicts:
            row = {index[d]: Fraction(c) for d, c in v.items() if c}
            if ech.insert(row) is not None:
                count += 1
        return count
    ech2 = _Gf2Echelon()
    count = 0
    for v in dicts:
        mask = 0
        for d, c in v.items():
            if c % 2:
                mask ^= 1 << index[d]
        if ech2.insert(mask) is not None:
            count += 1
    return count


@dataclass
class QuotientBasis:
    """Echelonized relation span with a chosen quotient basis and reduce map.

    ``columns`` is the full canonical diagram list at this order; ``basis``
    is the greedy subset whose classes span the quotient.  ``reduce``
    rewrites any vector into its unique normal form on the basis columns.
    """

    order: int
    field: str
    framed: bool
    space: str
    columns: tuple[Diagram, ...]
    fingerprint: str
    _index: dict[Diagram, int]
    _pivots: dict[int, object]

    @property
    def dimension(self) -> int:
        return len(self.columns) - len(self._pivots)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def basis(self) -> tuple[Diagram, ...]:
        return tuple(d for i, d in enumerate(self.columns) if i not in self._pivots)

    def _to_row(self, vector: VectorLike):
        v = _as_dict(vector)
        for d in v:
            if d.order != self.order:
                raise ValueError(f"vector order {d.order} != basis order {self.order}")
            if d not in self._index:
                raise ValueError(f"diagram {d.encoding()} is not a column here")
        if self.field == RATIONAL:
            return {self._index[d]: Fraction(c) for d, c in v.items() if c}
        mask = 0
        for d, c in v.items():
            if int(c) % 2:
                mask ^= 1 << self._index[d]
        return mask

    def reduce(self, vector: VectorLike) -> dict[Diagram, Fraction]:
        """Normal form of a vector modulo the relation span.

        The result is supported on basis columns only; coefficients are
        Fractions over Q and 0/1 integers (as Fractions) over GF(2).
        """
        row = self._ech().reduce(self._to_row(vector))
        if self.field == RATIONAL:
            return {self.columns[j]: c for j, c in sorted(row.items())}
        out = {}
        j = 0
        while row:
            if row & 1:
                out[self.columns[j]] = Fraction(1)
            row >>= 1
            j += 1
        return out

    def _ech(self):
        ech = _RationalEchelon() if self.field == RATIONAL else _Gf2Echelon()
        ech.pivots = self._pivots
        return ech

    # -- cache serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.field == RATIONAL:
            pivots = {
                str(p): {str(k): f"{v.numerator}/{v.denominator}"
                         for k, v in sorted(row.items())}
                for p, row in sorted(self._pivots.items())
            }
        else:
            pivots = {str(p): format(row, "x")
                      for p, row in sorted(self._pivots.items())}
        return {
            "format": 1,
            "order": self.order,
            "field": self.field,
            "framed": self.framed,
            "space": self.space,
            "fingerprint": self.fingerprint,
            "columns": [d.encoding() for d in self.columns],
            "pivots": pivots,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "QuotientBasis":
        parse = parse_chord if data["space"] == "circle" else parse_arc
        columns = tuple(parse(e) for e in data["columns"])
        if data["field"] == RATIONAL:
            pivots: dict[int, object] = {}
            for p, row in data["pivots"].items():
                pivots[int(p)] = {int(k): Fraction(v) for k, v in row.items()}
        else:
            pivots = {int(p): int(mask, 16) for p, mask in data["pivots"].items()}
        return cls(
            order=data["order"],
            field=data["field"],
            framed=data["framed"],
            space=data["space"],
            columns=columns,
            fingerprint=data["fingerprint"],
            _index={d: i for i, d in enumerate(columns)},
            _pivots=pivots,
        )


def _default_columns(order: int, framed: bool, space: str) -> tuple[Diagram, ...]:
    if space == "circle":
        cols = enumerate_framed_diagrams(order) if framed \
            else enumerate_chord_diagrams(order)
    elif space == "arc":
        cols = enumerate_arc_diagrams(order, framed)
    else:
        raise ValueError(f"unknown space {space!r}")
    return tuple(cols)


def quotient_basis(
    order: int,
    relations: Iterable[VectorLike],
    field: str,
    *,
    framed: bool = False,
    space: str = "circle",
    columns: Optional[Sequence[Diagram]] = None,
    fingerprint: str = "",
    cache_dir: Optional[Union[str, Path]] = None,
) -> QuotientBasis:
    """Echelonize the relation span over the diagram columns at this order.

    ``columns`` defaults to the full canonical enumeration for the given
    space.  With ``cache_dir`` and a non-empty ``fingerprint`` the computed
    basis is stored and reloaded keyed on (order, space, framed, field,
    fingerprint).
    """
    field = normalize_field(field)
    cache_path = None
    if cache_dir is not None and fingerprint:
        name = f"qb-{space}-{'f' if framed else 'u'}{order}-{field}-{fingerprint[:24]}.json"
        cache_path = Path(cache_dir) / name
        if cache_path.exists():
            data = json.loads(cache_path.read_text())
            if data.get("fingerprint") == fingerprint:
                return QuotientBasis.from_json_dict(data)

    cols = tuple(columns) if columns is not None \
        else _default_columns(order, framed, space)
    index = {d: i for i, d in enumerate(cols)}
    dicts = [_as_dict(r) for r in relations]
    for v in dicts:
        for d in v:
            if d.order != order:
                raise ValueError(f"relation order {d.order} != {order}")
            if d not in index:
                raise ValueError(f"relation diagram {d.encoding()} not in columns")

    if field == RATIONAL:
        ech: object = _RationalEchelon()
        for v in dicts:
            row = {index[d]: Fraction(c) for d, c in v.items() if c}
            ech.insert(row)
    else:
        ech = _Gf2Echelon()
        for v in dicts:
            mask = 0
            for d, c in v.items():
                if int(c) % 2:
                    mask ^= 1 << index[d]
            ech.insert(mask)

    qb = QuotientBasis(
        order=order,
        field=field,
        framed=framed,
        space=space,
        columns=cols,
        fingerprint=fingerprint,
        _index=index,
        _pivots=ech.pivots,
    )
    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        cache_path.write_text(json.dumps(qb.to_json_dict(), sort_keys=True))
    return qb


def in_span(vector: VectorLike, basis: QuotientBasis) -> bool:
    """True iff the vector reduces to zero modulo the relation span."""
    return not basis.reduce(vector)
