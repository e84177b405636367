"""Weight tables: linear functionals on (framed) diagram spans.

A WeightTable assigns an exact rational to every diagram in its declared
domain (all canonical diagrams of one order, or only the realisable ones
under a model).  ``validate`` evaluates the table against the relation
generators, with zero residual required; ``weight_space`` extracts the
full dual space of a quotient basis, one functional per basis class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .diagrams import (
    ChordDiagram,
    Diagram,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    parse_chord,
)
from .linalg import GF2, QuotientBasis, normalize_field, quotient_basis
from .realisability import RealisabilityModel, realisable_set, restricted_quotient
from .relations import RelationVector, SignSchema, generate_1t, generate_4t


@dataclass
class WeightTable:
    """Values of a candidate weight functional on one order's diagrams.

    Diagrams absent from ``values`` are outside the declared domain;
    evaluating a vector that touches them is an error, not a zero.
    """

    order: int
    framed: bool
    values: dict[Diagram, Fraction]
    domain: str = "all"  # "all" | "realisable"
    model: Optional[RealisabilityModel] = None

    def __post_init__(self) -> None:
        if self.domain not in ("all", "realisable"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.domain == "realisable" and self.model is None:
            raise ValueError("realisable domain needs a model")
        self.values = {d: Fraction(v) for d, v in self.values.items()}
        for d in self.values:
            if d.order != self.order:
                raise ValueError(f"{d.encoding()} has order {d.order}, not {self.order}")
            if d.is_framed != self.framed:
                raise ValueError(f"{d.encoding()} does not match framed={self.framed}")
        if self.domain == "realisable":
            allowed = set(realisable_set(self.order, self.model))
            stray = [d for d in self.values if d not in allowed]
            if stray:
                raise ValueError(
                    f"table key outside realisable domain: {stray[0].encoding()}")

    def evaluate(self, vector: Mapping[Diagram, object]) -> Fraction:
        total = Fraction(0)
        for d, c in vector.items():
            if d not in self.values:
                raise KeyError(f"{d.encoding()} is outside the table domain")
            total += Fraction(c) * self.values[d]
        return total

    def to_json_dict(self) -> dict:
        return {
            "n": self.order,
            "framed": self.framed,
            "domain": self.domain,
            "model": self.model.to_json_dict() if self.model else None,
            "values": {
                d.encoding(): f"{v.numerator}/{v.denominator}"
                for d, v in sorted(self.values.items(), key=lambda t: t[0].sort_key())
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WeightTable":
        model = RealisabilityModel.from_json_dict(data["model"]) if data.get("model") \
            else None
        values = {parse_chord(e): Fraction(v) for e, v in data["values"].items()}
        return cls(
            order=data["n"],
            framed=data.get("framed", True),
            values=values,
            domain=data.get("domain", "all"),
            model=model,
        )


@dataclass
class ValidationReport:
    order: int
    framed: bool
    field: str
    checked: int = 0
    skipped_out_of_domain: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "mode": "framed" if self.framed else "unframed",
            "field": self.field,
            "counts": {
                "checked": self.checked,
                "skipped_out_of_domain": self.skipped_out_of_domain,
                "violations": len(self.violations),
            },
            "passed": self.passed,
            "violations": self.violations,
        }


def _table_relations(
    order: int,
    framed: bool,
    schema: Optional[SignSchema],
    include_1t: bool,
) -> list[RelationVector]:
    if framed and schema is None:
        raise ValueError("validating a framed table needs a sign schema")
    if not framed and schema is not None:
        raise ValueError("unframed tables take no schema")
    rels: list[RelationVector] = []
    if order >= 2:
        rels.extend(generate_4t(order, schema))
    if include_1t and order >= 1:
        rels.extend(generate_1t(order, framed))
    return rels


def validate(
    table: WeightTable,
    schema: Optional[SignSchema] = None,
    include_1t: bool = True,
    fieldname: str = "rational",
) -> ValidationReport:
    """Evaluate every relation generator against the table; residuals must vanish.

    For a realisable-only table a 4T generator is checked iff its whole
    quadruple lies in the domain; a quadruple meeting the domain only
    partially breaks the closure property the restriction relies on, so it
    raises instead of being skipped quietly.
    """
    fieldname = normalize_field(fieldname)
    report = ValidationReport(order=table.order, framed=table.framed, field=fieldname)
    for g in _table_relations(table.order, table.framed, schema, include_1t):
        quad = g.quadruple_diagrams()
        inside = [d in table.values for d in quad]
        if table.domain == "realisable":
            if any(inside) and not all(inside):
                raise ValueError(
                    "quadruple meets the realisable domain only partially: "
                    + g.encode_line())
            if not all(inside):
                report.skipped_out_of_domain += 1
                continue
        report.checked += 1
        residual = table.evaluate(g.as_dict())
        if fieldname == GF2:
            if residual.denominator != 1:
                raise ValueError("GF(2) validation needs integer table values")
            bad = residual.numerator % 2 != 0
        else:
            bad = residual != 0
        if bad:
            report.violations.append({
                "generator": g.encode_line(),
                "origin": g.origin.describe(),
                "residual": str(residual),
            })
    return report


@dataclass
class WeightSpace:
    """Dual basis of a quotient: one functional per surviving diagram class."""

    order: int
    framed: bool
    field: str
    basis: tuple[Diagram, ...]
    functionals: list[WeightTable]
    quotient: QuotientBasis

    @property
    def dimension(self) -> int:
        return len(self.functionals)


def weight_space(
    n: int,
    schema: Optional[SignSchema] = None,
    include_1t: bool = True,
    fieldname: str = "rational",
    model: Optional[RealisabilityModel] = None,
    framed: Optional[bool] = None,
) -> WeightSpace:
    """All weight functionals at order n for the chosen relation family.

    Each functional is the coordinate of the reduce map at one quotient
    basis diagram, extended to the whole domain; by construction every one
    of them vanishes on the relation span.
    """
    fieldname = normalize_field(fieldname)
    if framed is None:
        framed = schema is not None or model is not None
    if model is not None:
        if not framed:
            raise ValueError("a realisability model implies framed diagrams")
        if schema is None:
            raise ValueError("a restricted weight space needs a sign schema")
        qb, _lemma, _rels = restricted_quotient(n, schema, model, fieldname, include_1t)
        domain = "realisable"
    else:
        rels = _table_relations(n, framed, schema, include_1t)
        qb = quotient_basis(n, rels, fieldname, framed=framed)
        domain = "all"

    coords = {d: qb.reduce({d: 1}) for d in qb.columns}
    functionals = []
    for b in qb.basis:
        values = {d: coords[d].get(b, Fraction(0)) for d in qb.columns}
        functionals.append(WeightTable(
            order=n, framed=framed, values=values, domain=domain, model=model))
    return WeightSpace(
        order=n, framed=framed, field=fieldname,
        basis=qb.basis, functionals=functionals, quotient=qb,
    )


def forget_framing(table: WeightTable) -> WeightTable:
    """Pull an unframed table back along the forgetful map.

    Every framed diagram gets the value of its underlying unframed diagram;
    the unframed table must cover its whole order.
    """
    if table.framed:
        raise ValueError("forget_framing pulls back unframed tables")
    needed = enumerate_chord_diagrams(table.order)
    missing = [d for d in needed if d not in table.values]
    if missing:
        raise ValueError(f"unframed table misses {missing[0].encoding()}")
    values = {d: table.values[d.unframed()]
              for d in enumerate_framed_diagrams(table.order)}
    return WeightTable(order=table.order, framed=True, values=values)
