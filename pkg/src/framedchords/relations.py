"""Generators for the relation subspaces of (framed) diagram spans.

Three families are produced, each as a list of explicit vectors with
provenance:

* one-term relations: a diagram with a solitary chord (adjacent endpoints)
  is set to zero; in the framed case only solitary chords of framing 0
  qualify.
* four-term relations: one endpoint of a chord c is re-inserted at the
  four positions immediately adjacent to the two endpoints of another
  chord d, all other chords and all framings held fixed.  Listing the
  positions in circular order starting just after d's first endpoint, the
  classical signs are (+1, -1, +1, -1); this convention reproduces the
  known quotient dimensions 1, 1, 2, 3, 6, 10 for orders 0..5.
* framed four-term families: the same quadruples, with the sign of each
  term given by a SignSchema as a function of the framings of the two
  participating chords.  The framings themselves never change inside a
  quadruple.

Both the circle and the line ("arc") geometry are supported; on the line
the same endpoint surgery is done without wraparound identifications.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .diagrams import (
    ArcDiagram,
    Diagram,
    _chord_labels,
    canonicalize,
    enumerate_arc_diagrams,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    solitary_chords,
    word_to_pairing,
)

CLASSICAL_SIGNS = (1, -1, 1, -1)

_SECTORS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _pattern_str(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass(frozen=True)
class SignSchema:
    """Signs of the four 4T terms as a function of the two chord framings.

    ``signs`` holds 16 entries, sector by sector in the order
    (0,0), (0,1), (1,0), (1,1), four term signs each.  The (0,0) sector is
    pinned to the classical signs so that the all-zero-framing part of any
    schema is the ordinary 4T relation.
    """

    signs: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.signs) != 16 or any(s not in (1, -1) for s in self.signs):
            raise ValueError("schema needs 16 signs from {+1,-1}")
        if self.signs[:4] != CLASSICAL_SIGNS:
            raise ValueError("the (0,0) sector must carry the classical 4T signs")
        if not self.name:
            object.__setattr__(self, "name", self.pattern())

    def sign(self, term: int, fc: int, fd: int) -> int:
        """Sign of term 1..4 for moving-chord framing fc, fixed-chord fd."""
        if term not in (1, 2, 3, 4):
            raise ValueError(f"term index must be 1..4, got {term}")
        return self.signs[(fc * 2 + fd) * 4 + (term - 1)]

    def sector(self, fc: int, fd: int) -> tuple[int, ...]:
        base = (fc * 2 + fd) * 4
        return self.signs[base:base + 4]

    def pattern(self) -> str:
        return "/".join(_pattern_str(self.sector(fc, fd)) for fc, fd in _SECTORS[1:])

    @classmethod
    def from_sectors(
        cls,
        s01: Sequence[int],
        s10: Sequence[int],
        s11: Sequence[int],
        name: str = "",
    ) -> "SignSchema":
        return cls(CLASSICAL_SIGNS + tuple(s01) + tuple(s10) + tuple(s11), name)

    @classmethod
    def uniform(cls) -> "SignSchema":
        """Classical signs in every framing sector."""
        return cls.from_sectors(CLASSICAL_SIGNS, CLASSICAL_SIGNS, CLASSICAL_SIGNS,
                                name="uniform")

    @classmethod
    def starred(cls) -> "SignSchema":
        """Classical signs except that the (1,1) sector is negated."""
        flipped = tuple(-s for s in CLASSICAL_SIGNS)
        return cls.from_sectors(CLASSICAL_SIGNS, CLASSICAL_SIGNS, flipped,
                                name="starred")

    def to_json_dict(self) -> dict:
        signs = {}
        for fc, fd in _SECTORS:
            for t in range(1, 5):
                signs[f"{t},{fc},{fd}"] = self.sign(t, fc, fd)
        return {"name": self.name, "signs": signs}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SignSchema":
        signs = []
        for fc, fd in _SECTORS:
            for t in range(1, 5):
                signs.append(int(data["signs"][f"{t},{fc},{fd}"]))
        return cls(tuple(signs), data.get("name", ""))


def schema_space(predicate: Optional[Callable[["SignSchema"], bool]] = None,
                 ) -> list[SignSchema]:
    """All 4096 schemas with the (0,0) sector pinned, optionally filtered.

    The three free sectors each range over the 16 sign patterns, in a
    deterministic order.
    """
    patterns = list(itertools.product((1, -1), repeat=4))
    out = []
    for s01 in patterns:
        for s10 in patterns:
            for s11 in patterns:
                schema = SignSchema.from_sectors(s01, s10, s11)
                if predicate is None or predicate(schema):
                    out.append(schema)
    return out


# ---------------------------------------------------------------------------
# relation vectors


@dataclass(frozen=True)
class OneTOrigin:
    diagram: Diagram
    chord: int

    def key(self) -> tuple:
        return ("1t", self.diagram.sort_key(), self.chord)

    def describe(self) -> dict:
        return {"kind": "1t", "diagram": self.diagram.encoding(), "chord": self.chord}


@dataclass(frozen=True)
class FourTOrigin:
    base: Diagram
    moving_chord: int
    moving_endpoint: int
    fixed_chord: int
    quadruple: tuple[tuple[int, Diagram], ...]

    def key(self) -> tuple:
        return ("4t", self.base.sort_key(), self.moving_chord,
                self.moving_endpoint, self.fixed_chord)

    def describe(self) -> dict:
        return {
            "kind": "4t",
            "base": self.base.encoding(),
            "moving_chord": self.moving_chord,
            "moving_endpoint": self.moving_endpoint,
            "fixed_chord": self.fixed_chord,
            "quadruple": [[s, d.encoding()] for s, d in self.quadruple],
        }


@dataclass(frozen=True)
class RelationVector:
    """A single relation: a formal integer combination of canonical diagrams.

    ``terms`` is sorted by diagram and stores no zero coefficients; a fully
    cancelling quadruple gives an empty ``terms`` (the provenance is still
    useful to the realisability checks, so such generators are kept).
    """

    terms: tuple[tuple[Diagram, int], ...]
    origin: Union[OneTOrigin, FourTOrigin]

    @property
    def order(self) -> int:
        if self.terms:
            return self.terms[0][0].order
        if isinstance(self.origin, FourTOrigin):
            return self.origin.base.order
        return self.origin.diagram.order

    def as_dict(self) -> dict[Diagram, int]:
        return dict(self.terms)

    def support(self) -> tuple[Diagram, ...]:
        return tuple(d for d, _ in self.terms)

    def quadruple_diagrams(self) -> tuple[Diagram, ...]:
        """Distinct diagrams of the originating quadruple (4T) or singleton (1T)."""
        if isinstance(self.origin, FourTOrigin):
            seen = []
            for _, d in self.origin.quadruple:
                if d not in seen:
                    seen.append(d)
            return tuple(seen)
        return (self.origin.diagram,)

    def encode_line(self) -> str:
        """Line form for relation files, e.g. "1*AABB|00 - 1*ABAB|01"."""
        if not self.terms:
            return "0"
        parts = []
        for k, (d, c) in enumerate(self.terms):
            mag = f"{abs(c)}*{d.encoding()}"
            if k == 0:
                parts.append(mag if c > 0 else f"- {mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        return " ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "terms": {d.encoding(): c for d, c in self.terms},
            "origin": self.origin.describe(),
        }


def _vector_from_terms(terms: dict[Diagram, int],
                       origin: Union[OneTOrigin, FourTOrigin]) -> RelationVector:
    items = tuple(sorted(((d, c) for d, c in terms.items() if c),
                         key=lambda t: t[0].sort_key()))
    return RelationVector(items, origin)


def _enumerate(n: int, framed: bool, space: str) -> Sequence[Diagram]:
    if space == "circle":
        return enumerate_framed_diagrams(n) if framed else enumerate_chord_diagrams(n)
    if space == "arc":
        return enumerate_arc_diagrams(n, framed)
    raise ValueError(f"unknown space {space!r}")


def generate_1t(n: int, framed: bool, space: str = "circle") -> list[RelationVector]:
    """One single-term relation per diagram with a qualifying solitary chord."""
    if n < 1:
        raise ValueError("one-term relations need order >= 1")
    out = []
    for d in _enumerate(n, framed, space):
        for chord in solitary_chords(d):
            if framed and d.framing[chord] != 0:
                continue
            out.append(_vector_from_terms({d: 1}, OneTOrigin(d, chord)))
            break
    return out


def _surgery_quadruple(
    labels: list[int],
    framing: Optional[tuple[int, ...]],
    c_lab: int,
    e_pt: int,
    d_lab: int,
    space: str,
) -> tuple[Diagram, Diagram, Diagram, Diagram]:
    """Remove the moving endpoint and re-insert it at the four slots.

    Slots in circular (or line) order starting just after the fixed chord's
    first endpoint: after-first, before-second, after-second, before-first.
    """
    rest = [labels[i] for i in range(len(labels)) if i != e_pt]
    q1, q2 = (i for i, lab in enumerate(rest) if lab == d_lab)
    slots = (q1 + 1, q2, q2 + 1, q1)
    quadruple = []
    for slot in slots:
        word = rest[:slot] + [c_lab] + rest[slot:]
        first: dict[int, int] = {}
        for lab in word:
            if lab not in first:
                first[lab] = len(first)
        pairing_word = tuple(first[lab] for lab in word)
        fr = None
        if framing is not None:
            inv = sorted(first, key=first.get)
            fr = tuple(framing[old] for old in inv)
        pairing = word_to_pairing(pairing_word)
        diag: Diagram
        if space == "circle":
            diag = canonicalize(pairing, fr)
        else:
            diag = ArcDiagram(pairing, fr)
        quadruple.append(diag)
    return tuple(quadruple)


def iter_4t_quadruples(n: int, framed: bool, space: str = "circle"):
    """Every raw 4T generator index with its quadruple, no signs, no dedup.

    Yields (base, moving_chord, moving_endpoint, fixed_chord, quadruple).
    """
    if n < 2:
        raise ValueError("four-term relations need order >= 2")
    for base in _enumerate(n, framed, space):
        labels = _chord_labels(base.pairing)
        for c_lab in range(n):
            endpoints = [i for i, lab in enumerate(labels) if lab == c_lab]
            for d_lab in range(n):
                if d_lab == c_lab:
                    continue
                for e_pt in endpoints:
                    quadruple = _surgery_quadruple(
                        labels, base.framing, c_lab, e_pt, d_lab, space)
                    yield base, c_lab, e_pt, d_lab, quadruple


def generate_4t(
    n: int,
    schema: Optional[SignSchema] = None,
    space: str = "circle",
) -> list[RelationVector]:
    """Four-term relation generators at order n.

    With ``schema=None`` the diagrams are unframed and the signs classical;
    with a schema the diagrams are framed and term i of a generator whose
    moving chord has framing fc and fixed chord framing fd carries
    ``schema.sign(i, fc, fd)``.  Generators are indexed by (base diagram,
    moving chord, moving endpoint, fixed chord); duplicates (same vector
    and same quadruple) are removed and the list is sorted by index.
    """
    framed = schema is not None
    out = []
    seen = set()
    for base, c_lab, e_pt, d_lab, quad in iter_4t_quadruples(n, framed, space):
        if framed:
            fc, fd = base.framing[c_lab], base.framing[d_lab]
            signs = tuple(schema.sign(t, fc, fd) for t in range(1, 5))
        else:
            signs = CLASSICAL_SIGNS
        terms: dict[Diagram, int] = {}
        for sign, diag in zip(signs, quad):
            terms[diag] = terms.get(diag, 0) + sign
        quadruple = tuple(zip(signs, quad))
        vec = _vector_from_terms(
            terms, FourTOrigin(base, c_lab, e_pt, d_lab, quadruple))
        key = (vec.terms, tuple((s, d.sort_key()) for s, d in quadruple))
        if key not in seen:
            seen.add(key)
            out.append(vec)
    out.sort(key=lambda v: v.origin.key())
    return out


def assemble_relations(
    n: int,
    kinds: Iterable[str],
    schema: Optional[SignSchema] = None,
    space: str = "circle",
    framed: Optional[bool] = None,
) -> list[RelationVector]:
    """Relation list for a set of family names from {"1t", "4t"}.

    ``framed`` defaults to ``schema is not None``; a framed 4T family
    requires a schema.
    """
    if framed is None:
        framed = schema is not None
    wanted = {k.strip().lower() for k in kinds if k.strip()}
    unknown = wanted - {"1t", "4t"}
    if unknown:
        raise ValueError(f"unknown relation kinds: {sorted(unknown)}")
    out: list[RelationVector] = []
    if "4t" in wanted and n >= 2:
        if framed and schema is None:
            raise ValueError("framed 4T relations need a sign schema")
        out.extend(generate_4t(n, schema if framed else None, space))
    if "1t" in wanted and n >= 1:
        out.extend(generate_1t(n, framed, space))
    return out


def relations_to_text(relations: Iterable[RelationVector]) -> str:
    return "\n".join(r.encode_line() for r in relations)


def relations_to_json(relations: Iterable[RelationVector]) -> list[dict]:
    return [r.to_json_dict() for r in relations]


def family_fingerprint(relations: Iterable[RelationVector]) -> str:
    """Stable hash of the sorted relation file; keys cached quotient bases."""
    lines = sorted(r.encode_line() for r in relations)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()
