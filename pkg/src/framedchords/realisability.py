"""A GF(2) arc-labeling model of which framed diagrams come from singular knots.

The model assigns a Z2 label to each of the 2n circle arcs between
consecutive endpoints; a chord's parity is the label sum over one of its
two halves, and the labels of the whole circle must sum to zero (the knot
class evaluates to zero).  Under that total constraint both halves of a
chord give the same parity, so the framing is well posed.

Two modes:

* ``trivial``: the ambient Z2 homology is trivial, so every chord parity
  vanishes; a diagram is realisable iff all framings are 0.
* ``single-class``: one nontrivial class; a diagram is realisable iff the
  GF(2) system {half-incidence . x = framing, sum(x) = 0} is feasible.

This is a combinatorial stand-in for genuine singular-knot realisability
in a 3-manifold, not a topological algorithm; reports carry the model so
downstream numbers are never mistaken for manifold facts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .diagrams import ChordDiagram, enumerate_framed_diagrams
from .linalg import QuotientBasis, normalize_field, quotient_basis
from .relations import RelationVector, SignSchema, generate_1t, generate_4t

MODES = ("trivial", "single-class")


@dataclass(frozen=True)
class RealisabilityModel:
    mode: str

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    def to_json_dict(self) -> dict:
        return {"mode": self.mode}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RealisabilityModel":
        return cls(data["mode"])


def homology_trivial() -> RealisabilityModel:
    return RealisabilityModel("trivial")


def single_class() -> RealisabilityModel:
    return RealisabilityModel("single-class")


def half_incidence(d: ChordDiagram) -> list[int]:
    """One GF(2) row per chord, as a bitmask over the 2n circle arcs.

    Arc j sits between points j and j+1 (mod 2n).  The designated half of
    a chord with endpoints e1 < e2 runs forward from the first endpoint:
    arcs e1 .. e2-1.  The complementary half is the bitwise complement, so
    the two rows of a chord sum to the all-ones row.
    """
    rows = []
    seen = set()
    for i, j in enumerate(d.pairing):
        e1, e2 = (i, j) if i < j else (j, i)
        if e1 in seen:
            continue
        seen.add(e1)
        mask = 0
        for a in range(e1, e2):
            mask |= 1 << a
        rows.append(mask)
    return rows


def _system_feasible(rows: Sequence[int], rhs: Sequence[int], n_cols: int) -> bool:
    # Augmented elimination; the constant term rides on bit n_cols.
    aug_bit = 1 << n_cols
    pivots: dict[int, int] = {}
    for mask, b in zip(rows, rhs):
        row = mask | (aug_bit if b else 0)
        while True:
            body = row & (aug_bit - 1)
            if not body:
                break
            j = body.bit_length() - 1
            if j not in pivots:
                pivots[j] = row
                row = 0
                break
            row ^= pivots[j]
        if row == aug_bit:
            return False
    return True


def realisable(d: ChordDiagram, model: RealisabilityModel) -> bool:
    """Whether the framed diagram is realisable under the arc-labeling model."""
    if not d.is_framed:
        raise ValueError("realisability is defined for framed diagrams")
    if model.mode == "trivial":
        return all(f == 0 for f in d.framing)
    n = d.order
    if n == 0:
        return True
    m = 2 * n
    rows = half_incidence(d) + [(1 << m) - 1]
    rhs = list(d.framing) + [0]
    return _system_feasible(rows, rhs, m)


def realisable_set(n: int, model: RealisabilityModel) -> list[ChordDiagram]:
    """The realisable sublist of the canonical framed enumeration at order n."""
    return [d for d in enumerate_framed_diagrams(n) if realisable(d, model)]


@dataclass
class LemmaClosureReport:
    order: int
    schema: str
    model: RealisabilityModel
    generators: int
    quadruples_all_realisable: int
    quadruples_none_realisable: int
    violations: list[dict] = field(default_factory=list)

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_json_dict(self) -> dict:
        return {
            "check": "lemma-4t",
            "order": self.order,
            "schema": self.schema,
            "model": self.model.to_json_dict(),
            "counts": {
                "generators": self.generators,
                "all_realisable": self.quadruples_all_realisable,
                "none_realisable": self.quadruples_none_realisable,
                "violations": self.violation_count,
            },
            "violations": self.violations,
        }


def lemma_4t_closure_check(
    n: int, schema: SignSchema, model: RealisabilityModel,
) -> LemmaClosureReport:
    """All-or-none realisability across every generated 4T quadruple."""
    gens = generate_4t(n, schema)
    cache: dict[ChordDiagram, bool] = {}

    def is_real(d: ChordDiagram) -> bool:
        if d not in cache:
            cache[d] = realisable(d, model)
        return cache[d]

    report = LemmaClosureReport(
        order=n, schema=schema.name, model=model, generators=len(gens),
        quadruples_all_realisable=0, quadruples_none_realisable=0,
    )
    for g in gens:
        flags = [is_real(d) for d in g.quadruple_diagrams()]
        if all(flags):
            report.quadruples_all_realisable += 1
        elif not any(flags):
            report.quadruples_none_realisable += 1
        else:
            report.violations.append(g.origin.describe())
    return report


def restricted_quotient(
    n: int,
    schema: SignSchema,
    model: RealisabilityModel,
    fieldname: str = "rational",
    include_1t: bool = True,
) -> tuple[QuotientBasis, LemmaClosureReport, list[RelationVector]]:
    """Quotient of the realisable span by the relations supported on it.

    Returns the basis, the lemma closure report for the same generators
    (so callers can flag a model that breaks the all-or-none property
    instead of silently trusting the restriction), and the restricted
    relation list itself.
    """
    fieldname = normalize_field(fieldname)
    columns = realisable_set(n, model)
    allowed = set(columns)
    relations: list[RelationVector] = []
    if n >= 2:
        lemma = lemma_4t_closure_check(n, schema, model)
        for g in generate_4t(n, schema):
            if all(d in allowed for d in g.support()):
                relations.append(g)
    else:
        lemma = LemmaClosureReport(
            order=n, schema=schema.name, model=model, generators=0,
            quadruples_all_realisable=0, quadruples_none_realisable=0,
        )
    if include_1t and n >= 1:
        for g in generate_1t(n, framed=True):
            if all(d in allowed for d in g.support()):
                relations.append(g)
    qb = quotient_basis(n, relations, fieldname, framed=True, columns=columns)
    return qb, lemma, relations


def restricted_quotient_dim(
    n: int,
    schema: SignSchema,
    model: RealisabilityModel,
    fieldname: str = "rational",
    include_1t: bool = True,
) -> int:
    """dim span(realisable diagrams) / span(relations living on them)."""
    qb, _, _ = restricted_quotient(n, schema, model, fieldname, include_1t)
    return qb.dimension
