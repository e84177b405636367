"""Products of arc and chord diagrams and the structural checks built on them.

Arc diagrams multiply by concatenating the lines; circle diagrams multiply
by breaking both circles at chosen edges, concatenating the sections, and
closing up.  The circle product depends on the break choices at the
diagram level; ``well_defined_check`` measures that dependence inside a
chosen relation quotient.  ``commutator_check`` probes commutativity the
same way.  ``phi`` is the linear involution scaling a framed diagram by
(-1) to its number of framing-1 chords; ``check_phi_intertwine`` tests
whether phi maps one framed relation span onto another.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .diagrams import (
    ArcDiagram,
    ChordDiagram,
    Diagram,
    closure,
    enumerate_arc_diagrams,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    section,
)
from .linalg import QuotientBasis, in_span, normalize_field, quotient_basis, rank
from .parallel import pmap
from .relations import (
    RelationVector,
    SignSchema,
    generate_1t,
    generate_4t,
    iter_4t_quadruples,
    schema_space,
)


@dataclass(frozen=True)
class GradedElement:
    """A formal linear combination of diagrams of one order in one space."""

    order: int
    space: str  # "circle" | "arc"
    framed: bool
    vector: Mapping[Diagram, Fraction]

    def __post_init__(self) -> None:
        if self.space not in ("circle", "arc"):
            raise ValueError(f"unknown space {self.space!r}")
        want = ChordDiagram if self.space == "circle" else ArcDiagram
        for d in self.vector:
            if not isinstance(d, want):
                raise ValueError(f"{d.encoding()} is not a {self.space} diagram")
            if d.order != self.order:
                raise ValueError(f"{d.encoding()} has order {d.order}, not {self.order}")
            if d.is_framed != self.framed:
                raise ValueError(f"{d.encoding()} does not match framed={self.framed}")

    @classmethod
    def from_diagram(cls, d: Diagram) -> "GradedElement":
        space = "circle" if isinstance(d, ChordDiagram) else "arc"
        return cls(d.order, space, d.is_framed, {d: Fraction(1)})


def multiply_arc(a: ArcDiagram, b: ArcDiagram) -> ArcDiagram:
    """Concatenate two arc diagrams (head of a to tail of b); orders add."""
    if a.is_framed != b.is_framed:
        raise ValueError("cannot multiply framed by unframed")
    shift = 2 * a.order
    pairing = a.pairing + tuple(p + shift for p in b.pairing)
    framing = (a.framing + b.framing) if a.is_framed else None
    return ArcDiagram(pairing, framing)


def multiply_circle(
    a: ChordDiagram, b: ChordDiagram, break_a: int = 0, break_b: int = 0,
) -> ChordDiagram:
    """Cut both circles at the chosen edges, concatenate, close up."""
    return closure(multiply_arc(section(a, break_a), section(b, break_b)))


def phi_sign(d: Diagram) -> int:
    """(-1) to the number of framing-1 chords."""
    if not d.is_framed:
        raise ValueError("phi is defined on framed diagrams only")
    return -1 if sum(d.framing) % 2 else 1


def phi_vector(vector: Mapping[Diagram, object]) -> dict:
    return {d: c * phi_sign(d) for d, c in vector.items()}


def phi(x: GradedElement) -> GradedElement:
    """Scale each supporting diagram by (-1)^(number of odd chords)."""
    if not x.framed:
        raise ValueError("phi is defined on framed elements only")
    return GradedElement(x.order, x.space, True, phi_vector(x.vector))


# ---------------------------------------------------------------------------
# phi intertwine check


@dataclass
class IntertwineReport:
    schema_a: str
    schema_b: str
    order: int
    field: str
    space: str
    rank_a: int
    rank_b: int
    dim_a: int
    dim_b: int
    intertwined: bool
    failing_generator: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "check": "phi-iso",
            "schema_a": self.schema_a,
            "schema_b": self.schema_b,
            "order": self.order,
            "field": self.field,
            "space": self.space,
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "intertwined": self.intertwined,
            "failing_generator": self.failing_generator,
        }


def intertwine_report(
    schema_a: SignSchema,
    schema_b: SignSchema,
    n: int,
    field: str = "rational",
    space: str = "circle",
) -> IntertwineReport:
    """Does phi map span(4T(schema_a) + framed 1T) onto the schema_b span?

    Checked mechanically: rank equality of the two spans plus membership of
    phi(g) in the target span for every generator g of the source.
    """
    field = normalize_field(field)
    rels_a = generate_4t(n, schema_a, space) + generate_1t(n, True, space)
    rels_b = generate_4t(n, schema_b, space) + generate_1t(n, True, space)
    qb_b = quotient_basis(n, rels_b, field, framed=True, space=space)
    rank_a = rank(rels_a, field)
    ncols = len(qb_b.columns)
    report = IntertwineReport(
        schema_a=schema_a.name,
        schema_b=schema_b.name,
        order=n,
        field=field,
        space=space,
        rank_a=rank_a,
        rank_b=qb_b.rank,
        dim_a=ncols - rank_a,
        dim_b=qb_b.dimension,
        intertwined=True,
    )
    if rank_a != qb_b.rank:
        report.intertwined = False
        return report
    for g in rels_a:
        if not in_span(phi_vector(g.as_dict()), qb_b):
            report.intertwined = False
            report.failing_generator = g.encode_line()
            return report
    return report


def check_phi_intertwine(
    schema_a: SignSchema,
    schema_b: SignSchema,
    n: int,
    field: str = "rational",
    space: str = "circle",
) -> bool:
    return intertwine_report(schema_a, schema_b, n, field, space).intertwined


# ---------------------------------------------------------------------------
# schema search


def _search_precompute(n: int, space: str) -> list[tuple[tuple[int, int], tuple]]:
    """Raw 4T generator data as (framing sector, ordered quadruple diagrams).

    Deduplicated on exactly that pair: two indices agreeing there produce
    the same vector under every schema, while indices in different sectors
    must stay separate even when generate_4t would merge them for one
    particular schema.
    """
    seen = set()
    out = []
    for base, c_lab, _e_pt, d_lab, quad in iter_4t_quadruples(n, True, space):
        fc, fd = base.framing[c_lab], base.framing[d_lab]
        key = ((fc, fd), tuple(q.sort_key() for q in quad))
        if key not in seen:
            seen.add(key)
            out.append(((fc, fd), quad))
    return out


def _schema_vectors(schema: SignSchema,
                    precomputed: list[tuple[tuple[int, int], tuple]]) -> list[dict]:
    vectors = []
    for (fc, fd), quad in precomputed:
        terms: dict = {}
        for i, d in enumerate(quad):
            s = schema.sign(i + 1, fc, fd)
            terms[d] = terms.get(d, 0) + s
        vectors.append({d: c for d, c in terms.items() if c})
    return vectors


_SEARCH_STATE: dict = {}


def _search_init(precomputed, one_t, qb, base_rank, field) -> None:
    _SEARCH_STATE.update(precomputed=precomputed, one_t=one_t, qb=qb,
                         base_rank=base_rank, field=field)


def _search_one(schema: SignSchema) -> bool:
    pre = _SEARCH_STATE["precomputed"]
    one_t = _SEARCH_STATE["one_t"]
    qb = _SEARCH_STATE["qb"]
    vectors = _schema_vectors(schema, pre) + one_t
    if rank(vectors, _SEARCH_STATE["field"]) != _SEARCH_STATE["base_rank"]:
        return False
    return all(in_span(phi_vector(v), qb) for v in vectors if v)


def phi_intertwine_survivors(
    n: int,
    base_schema: SignSchema,
    schemas: Sequence[SignSchema],
    field: str = "rational",
    space: str = "circle",
    jobs: int = 1,
) -> list[SignSchema]:
    """Schemas s with check_phi_intertwine(s, base_schema) at order n."""
    field = normalize_field(field)
    precomputed = _search_precompute(n, space)
    one_t = [g.as_dict() for g in generate_1t(n, True, space)]
    base_vectors = _schema_vectors(base_schema, precomputed) + one_t
    qb = quotient_basis(n, base_vectors, field, framed=True, space=space)
    flags = pmap(_search_one, list(schemas), jobs,
                 initializer=_search_init,
                 initargs=(precomputed, one_t, qb, qb.rank, field))
    return [s for s, ok in zip(schemas, flags) if ok]


def schema_search(
    order: int,
    retest_order: Optional[int] = None,
    base_schema: Optional[SignSchema] = None,
    field: str = "rational",
    jobs: int = 1,
) -> dict:
    """Scan all 4096 sign tables for phi-intertwining with a base schema.

    Survivors found at ``order`` are re-tested at ``retest_order`` (when
    given); the search is stable when the re-tested survivor set is
    nonempty.  Returns a JSON-ready report.
    """
    base = base_schema or SignSchema.uniform()
    schemas = schema_space()
    uniform = SignSchema.uniform()
    starred = SignSchema.starred()

    def describe(s: SignSchema) -> dict:
        return {"name": s.name, "uniform": s == uniform, "starred": s == starred}

    survivors = phi_intertwine_survivors(order, base, schemas, field, jobs=jobs)
    report = {
        "order": order,
        "base_schema": base.name,
        "field": normalize_field(field),
        "total_schemas": len(schemas),
        "survivors": [describe(s) for s in survivors],
        "survivor_count": len(survivors),
    }
    if retest_order is not None:
        retested = phi_intertwine_survivors(retest_order, base, survivors,
                                            field, jobs=jobs)
        report["retest_order"] = retest_order
        report["survivors_retested"] = [describe(s) for s in retested]
        report["retested_count"] = len(retested)
        report["stable"] = bool(retested)
    else:
        report["stable"] = bool(survivors)
    return report


# ---------------------------------------------------------------------------
# multiplication well-definedness


@dataclass
class WellDefinedReport:
    order_pair: tuple[int, int]
    field: str
    framed: bool
    relation_count: int
    pairs: int
    comparisons: int
    failures: list[dict] = field(default_factory=list)

    @property
    def failure_count(self) -> int:
        return len(self.failures)

    def to_json_dict(self) -> dict:
        return {
            "check": "well-defined",
            "mode": "framed" if self.framed else "unframed",
            "order_pair": list(self.order_pair),
            "field": self.field,
            "relations_used": self.relation_count,
            "counts": {
                "pairs": self.pairs,
                "comparisons": self.comparisons,
                "failures": self.failure_count,
            },
            "failures": self.failures,
        }


_PRODUCT_STATE: dict = {}


def _product_init(qb, framed: bool, mode: str) -> None:
    _PRODUCT_STATE["qb"] = qb
    _PRODUCT_STATE["framed"] = framed
    _PRODUCT_STATE["mode"] = mode


def _well_defined_pair(pair: tuple[ChordDiagram, ChordDiagram]) -> tuple[int, list[dict]]:
    a, b = pair
    qb: QuotientBasis = _PRODUCT_STATE["qb"]
    breaks_a = range(max(1, 2 * a.order))
    breaks_b = range(max(1, 2 * b.order))
    reference = multiply_circle(a, b, 0, 0)
    comparisons = 0
    failures = []
    for s1 in breaks_a:
        for s2 in breaks_b:
            if s1 == 0 and s2 == 0:
                continue
            comparisons += 1
            product = multiply_circle(a, b, s1, s2)
            if product == reference:
                continue
            if not in_span({product: 1, reference: -1}, qb):
                failures.append({
                    "a": a.encoding(),
                    "b": b.encoding(),
                    "breaks": [s1, s2],
                    "product": product.encoding(),
                    "reference": reference.encoding(),
                })
    return comparisons, failures


def well_defined_check(
    order_a: int,
    order_b: int,
    relations: Sequence[Union[RelationVector, Mapping]],
    field: str = "rational",
    *,
    framed: bool = False,
    jobs: int = 1,
) -> WellDefinedReport:
    """Compare every break choice of every product against the (0,0) breaking.

    A failure is a product pair whose difference from the reference product
    does not reduce to zero modulo the given relations.
    """
    field = normalize_field(field)
    total = order_a + order_b
    qb = quotient_basis(total, relations, field, framed=framed)
    side_a = enumerate_framed_diagrams(order_a) if framed else enumerate_chord_diagrams(order_a)
    side_b = enumerate_framed_diagrams(order_b) if framed else enumerate_chord_diagrams(order_b)
    pairs = [(a, b) for a in side_a for b in side_b]
    results = pmap(_well_defined_pair, pairs, jobs,
                   initializer=_product_init, initargs=(qb, framed, "wd"))
    report = WellDefinedReport(
        order_pair=(order_a, order_b),
        field=field,
        framed=framed,
        relation_count=len(list(relations)),
        pairs=len(pairs),
        comparisons=sum(c for c, _ in results),
    )
    for _, fails in results:
        report.failures.extend(fails)
    return report


# ---------------------------------------------------------------------------
# commutativity


@dataclass
class CommutatorReport:
    order_pair: tuple[int, int]
    space: str
    field: str
    framed: bool
    relation_count: int
    pairs: int
    commuting: int
    breaking_convention: Optional[int] = None
    convention_dependent: bool = False
    well_defined_failures: Optional[int] = None
    witnesses: list[dict] = field(default_factory=list)

    @property
    def non_commuting(self) -> int:
        return self.pairs - self.commuting

    def to_json_dict(self) -> dict:
        out = {
            "check": "commutativity",
            "mode": "framed" if self.framed else "unframed",
            "space": self.space,
            "order_pair": list(self.order_pair),
            "field": self.field,
            "relations_used": self.relation_count,
            "counts": {
                "pairs": self.pairs,
                "commuting": self.commuting,
                "non_commuting": self.non_commuting,
            },
            "witnesses": self.witnesses,
        }
        if self.space == "circle":
            out["breaking_convention"] = self.breaking_convention
            out["convention_dependent"] = self.convention_dependent
            out["well_defined_failures"] = self.well_defined_failures
        return out


def _commutator_pair(pair) -> Optional[dict]:
    a, b = pair
    qb: QuotientBasis = _PRODUCT_STATE["qb"]
    if _PRODUCT_STATE["mode"] == "arc":
        ab: Diagram = multiply_arc(a, b)
        ba: Diagram = multiply_arc(b, a)
    else:
        ab = multiply_circle(a, b, 0, 0)
        ba = multiply_circle(b, a, 0, 0)
    if ab == ba:
        return None
    if in_span({ab: 1, ba: -1}, qb):
        return None
    return {
        "a": a.encoding(),
        "b": b.encoding(),
        "ab": ab.encoding(),
        "ba": ba.encoding(),
    }


def commutator_check(
    order_a: int,
    order_b: int,
    relations: Sequence[Union[RelationVector, Mapping]],
    field: str = "rational",
    space: str = "arc",
    *,
    framed: bool = False,
    jobs: int = 1,
) -> CommutatorReport:
    """Test a*b - b*a against the relation span for all canonical pairs.

    Arc products concatenate; circle products use the fixed break-at-edge-0
    convention, and well-definedness is checked first so the report can
    flag a convention-dependent verdict.
    """
    field = normalize_field(field)
    if space not in ("arc", "circle"):
        raise ValueError(f"unknown space {space!r}")
    total = order_a + order_b
    qb = quotient_basis(total, relations, field, framed=framed, space=space)

    wd_failures = None
    if space == "circle":
        wd = well_defined_check(order_a, order_b, relations, field,
                                framed=framed, jobs=jobs)
        wd_failures = wd.failure_count

    if space == "circle":
        side_a = enumerate_framed_diagrams(order_a) if framed \
            else enumerate_chord_diagrams(order_a)
        side_b = enumerate_framed_diagrams(order_b) if framed \
            else enumerate_chord_diagrams(order_b)
    else:
        side_a = enumerate_arc_diagrams(order_a, framed)
        side_b = enumerate_arc_diagrams(order_b, framed)
    pairs = [(a, b) for a in side_a for b in side_b]
    results = pmap(_commutator_pair, pairs, jobs,
                   initializer=_product_init, initargs=(qb, framed, space))
    witnesses = [w for w in results if w is not None]
    return CommutatorReport(
        order_pair=(order_a, order_b),
        space=space,
        field=field,
        framed=framed,
        relation_count=len(list(relations)),
        pairs=len(pairs),
        commuting=len(pairs) - len(witnesses),
        breaking_convention=0 if space == "circle" else None,
        convention_dependent=bool(wd_failures) if space == "circle" else False,
        well_defined_failures=wd_failures,
        witnesses=witnesses,
    )
