"""Chord diagrams on an oriented circle and arc diagrams on an oriented line.

A diagram of order n is a fixed-point-free involution on the points
0..2n-1.  Circle diagrams are considered up to rotation (the circle is
oriented, so reflections are never quotiented out); arc diagrams are rigid.
A framed diagram additionally carries one bit per chord.

Canonical form of a circle diagram: among all 2n rotations, take the one
whose encoding word (chord labels renumbered by first occurrence) is
lexicographically smallest; ties between rotations with equal words are
broken by the smallest framing word.  Because the word is compared first,
the underlying matching of a canonical framed diagram is itself canonical
as an unframed diagram.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Union


class CapacityError(RuntimeError):
    """A requested computation exceeds the configured size limits."""


def _validate_involution(pairing: tuple[int, ...]) -> None:
    m = len(pairing)
    if m % 2:
        raise ValueError(f"diagram needs an even number of points, got {m}")
    for i, j in enumerate(pairing):
        if not isinstance(j, int) or not 0 <= j < m:
            raise ValueError(f"point {i} pairs with {j}, outside 0..{m - 1}")
        if j == i:
            raise ValueError(f"point {i} is a fixed point")
        if pairing[j] != i:
            raise ValueError(f"pairing is not an involution at point {i}")


def _validate_framing(order: int, framing: tuple[int, ...]) -> None:
    if len(framing) != order:
        raise ValueError(f"framing length {len(framing)} != order {order}")
    for f in framing:
        if f not in (0, 1):
            raise ValueError(f"framing values must be 0 or 1, got {f!r}")


def pairing_to_word(pairing: tuple[int, ...]) -> tuple[int, ...]:
    """Chord labels in order of first occurrence: (3,2,1,0) -> (0,1,1,0)."""
    label: dict[int, int] = {}
    word = []
    for i, j in enumerate(pairing):
        c = i if i < j else j
        if c not in label:
            label[c] = len(label)
        word.append(label[c])
    return tuple(word)


def word_to_pairing(word: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse of pairing_to_word; validates that each label occurs twice."""
    first: dict[int, int] = {}
    pairing = [-1] * len(word)
    for i, lab in enumerate(word):
        if lab in first:
            if pairing[first[lab]] != -1:
                raise ValueError(f"label {lab} occurs more than twice")
            pairing[first[lab]] = i
            pairing[i] = first[lab]
        else:
            first[lab] = i
    if any(p < 0 for p in pairing):
        raise ValueError("some label occurs only once")
    return tuple(pairing)


@dataclass(frozen=True)
class ChordDiagram:
    """A (framed) chord diagram on the oriented circle, in canonical form.

    ``pairing[i]`` is the point matched with point i.  ``framing`` is one
    bit per chord, indexed by chords in order of their first endpoint, or
    None for an unframed diagram.  Construct via :func:`canonicalize`;
    direct construction does not re-canonicalize.
    """

    pairing: tuple[int, ...]
    framing: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairing", tuple(self.pairing))
        _validate_involution(self.pairing)
        if self.framing is not None:
            object.__setattr__(self, "framing", tuple(self.framing))
            _validate_framing(self.order, self.framing)

    @property
    def order(self) -> int:
        return len(self.pairing) // 2

    @property
    def is_framed(self) -> bool:
        return self.framing is not None

    @cached_property
    def word(self) -> tuple[int, ...]:
        return pairing_to_word(self.pairing)

    def unframed(self) -> "ChordDiagram":
        """Forget the framing (the underlying matching stays canonical)."""
        return ChordDiagram(self.pairing, None)

    def sort_key(self) -> tuple:
        return (self.word, self.framing if self.framing is not None else ())

    def __lt__(self, other: "ChordDiagram") -> bool:
        return self.sort_key() < other.sort_key()

    def encoding(self) -> str:
        return encode(self)

    def __str__(self) -> str:
        return self.encoding()

    def record(self) -> dict:
        """Structured form: {"n": ..., "pairing": [...], "framing": [...]|None}."""
        return {
            "n": self.order,
            "pairing": list(self.pairing),
            "framing": list(self.framing) if self.framing is not None else None,
        }


@dataclass(frozen=True)
class ArcDiagram:
    """A (framed) diagram on the oriented line; no rotational identification.

    The point positions are rigid, so the pairing itself is the canonical
    form and equality is literal.
    """

    pairing: tuple[int, ...]
    framing: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairing", tuple(self.pairing))
        _validate_involution(self.pairing)
        if self.framing is not None:
            object.__setattr__(self, "framing", tuple(self.framing))
            _validate_framing(self.order, self.framing)

    @property
    def order(self) -> int:
        return len(self.pairing) // 2

    @property
    def is_framed(self) -> bool:
        return self.framing is not None

    @cached_property
    def word(self) -> tuple[int, ...]:
        return pairing_to_word(self.pairing)

    def unframed(self) -> "ArcDiagram":
        return ArcDiagram(self.pairing, None)

    def sort_key(self) -> tuple:
        return (self.word, self.framing if self.framing is not None else ())

    def __lt__(self, other: "ArcDiagram") -> bool:
        return self.sort_key() < other.sort_key()

    def encoding(self) -> str:
        return encode(self)

    def __str__(self) -> str:
        return self.encoding()

    def record(self) -> dict:
        return {
            "n": self.order,
            "pairing": list(self.pairing),
            "framing": list(self.framing) if self.framing is not None else None,
        }


Diagram = Union[ChordDiagram, ArcDiagram]


def _chord_labels(pairing: tuple[int, ...]) -> list[int]:
    # label per point, first-occurrence numbering
    label: dict[int, int] = {}
    out = []
    for i, j in enumerate(pairing):
        c = i if i < j else j
        if c not in label:
            label[c] = len(label)
        out.append(label[c])
    return out


def _rotation_key(
    labels: list[int],
    framing: Optional[tuple[int, ...]],
    r: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Word and framing word of the diagram read from point r onwards."""
    m = len(labels)
    relabel: dict[int, int] = {}
    word = []
    fr = []
    for i in range(m):
        lab = labels[(i + r) % m]
        if lab not in relabel:
            relabel[lab] = len(relabel)
            if framing is not None:
                fr.append(framing[lab])
        word.append(relabel[lab])
    return tuple(word), tuple(fr)


def canonicalize(
    pairing: tuple[int, ...] | list[int],
    framing: Optional[tuple[int, ...] | list[int]] = None,
) -> ChordDiagram:
    """Canonical circle diagram of a raw matching with optional framing.

    The input framing is indexed by chords in first-endpoint order of the
    raw pairing.  Idempotent: canonical inputs come back unchanged.
    """
    pairing = tuple(pairing)
    _validate_involution(pairing)
    framing = tuple(framing) if framing is not None else None
    if framing is not None:
        _validate_framing(len(pairing) // 2, framing)
    m = len(pairing)
    if m == 0:
        return ChordDiagram((), framing)
    labels = _chord_labels(pairing)
    best = min(_rotation_key(labels, framing, r) for r in range(m))
    word, fr = best
    return ChordDiagram(word_to_pairing(word), fr if framing is not None else None)


def arc_diagram(
    pairing: tuple[int, ...] | list[int],
    framing: Optional[tuple[int, ...] | list[int]] = None,
) -> ArcDiagram:
    """Arc diagram of a raw matching; only validates (positions are rigid)."""
    return ArcDiagram(tuple(pairing), tuple(framing) if framing is not None else None)


def rotate_pairing(pairing: tuple[int, ...], r: int) -> tuple[int, ...]:
    """The same matching read from point r onwards."""
    m = len(pairing)
    if m == 0:
        return pairing
    r %= m
    return tuple((pairing[(i + r) % m] - r) % m for i in range(m))


def rotated_framing(
    pairing: tuple[int, ...], framing: tuple[int, ...], r: int
) -> tuple[int, ...]:
    """Framing vector matching rotate_pairing(pairing, r)'s chord order."""
    labels = _chord_labels(pairing)
    return _rotation_key(labels, framing, r % len(pairing))[1]


# ---------------------------------------------------------------------------
# enumeration


def involutions(m: int) -> Iterator[tuple[int, ...]]:
    """All fixed-point-free involutions on 0..m-1, in a deterministic order.

    There are (m-1)!! of them; the first free point is always paired with
    each later point in turn.
    """
    if m % 2:
        raise ValueError("no fixed-point-free involution on an odd set")

    def rec(free: list[int]) -> Iterator[list[tuple[int, int]]]:
        if not free:
            yield []
            return
        a = free[0]
        for k in range(1, len(free)):
            b = free[k]
            rest = free[1:k] + free[k + 1:]
            for sub in rec(rest):
                yield [(a, b)] + sub

    for pairs in rec(list(range(m))):
        p = [0] * m
        for a, b in pairs:
            p[a] = b
            p[b] = a
        yield tuple(p)


def enumerate_chord_diagrams(n: int) -> list[ChordDiagram]:
    """One canonical representative per rotation class, sorted by encoding."""
    if n < 0:
        raise ValueError("order must be non-negative")
    seen = {canonicalize(p) for p in involutions(2 * n)}
    return sorted(seen, key=ChordDiagram.sort_key)


def enumerate_framed_diagrams(n: int) -> list[ChordDiagram]:
    """One canonical representative per rotation class of (matching, framing)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    seen = set()
    for p in involutions(2 * n):
        for f in itertools.product((0, 1), repeat=n):
            seen.add(canonicalize(p, f))
    return sorted(seen, key=ChordDiagram.sort_key)


def enumerate_arc_diagrams(n: int, framed: bool = False) -> list[ArcDiagram]:
    """All arc diagrams of the given order (no symmetry to quotient by)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    out = []
    for p in involutions(2 * n):
        if framed:
            for f in itertools.product((0, 1), repeat=n):
                out.append(ArcDiagram(p, f))
        else:
            out.append(ArcDiagram(p, None))
    return sorted(out, key=ArcDiagram.sort_key)


# ---------------------------------------------------------------------------
# closure and sections


def closure(a: ArcDiagram) -> ChordDiagram:
    """Close the line up to a circle; framings carry over unchanged."""
    return canonicalize(a.pairing, a.framing)


def section(d: ChordDiagram, break_index: int) -> ArcDiagram:
    """Break the circle at the edge entering point ``break_index``.

    The resulting arc diagram reads the circle from that point onwards.
    The empty diagram has the single break index 0.
    """
    m = 2 * d.order
    n_breaks = m if m else 1
    if not 0 <= break_index < n_breaks:
        raise ValueError(f"break index {break_index} out of range 0..{n_breaks - 1}")
    if m == 0:
        return ArcDiagram((), d.framing)
    p = rotate_pairing(d.pairing, break_index)
    f = rotated_framing(d.pairing, d.framing, break_index) if d.is_framed else None
    return ArcDiagram(p, f)


def sections(d: ChordDiagram) -> list[ArcDiagram]:
    """All breakings of the circle, one per edge, duplicates preserved."""
    m = 2 * d.order
    return [section(d, s) for s in range(m if m else 1)]


# ---------------------------------------------------------------------------
# text encoding

_ALPHA = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
EMPTY_TOKEN = "()"


def encode(d: Diagram) -> str:
    """Text form, e.g. "ABAB|01"; the empty diagram is "()" ("()|" framed)."""
    if d.order == 0:
        return EMPTY_TOKEN + ("|" if d.is_framed else "")
    if d.order <= len(_ALPHA):
        body = "".join(_ALPHA[k] for k in d.word)
    else:
        body = "".join(f"[{k}]" for k in d.word)
    if d.is_framed:
        body += "|" + "".join(str(b) for b in d.framing)
    return body


def _parse_body(text: str) -> tuple[tuple[int, ...], Optional[tuple[int, ...]]]:
    if "|" in text:
        body, _, bits = text.partition("|")
        framed = True
    else:
        body, bits, framed = text, "", False
    if body == EMPTY_TOKEN:
        word: tuple[int, ...] = ()
    elif body.startswith("["):
        labels = []
        rest = body
        while rest:
            if not rest.startswith("["):
                raise ValueError(f"bad label syntax near {rest!r}")
            close = rest.index("]")
            labels.append(int(rest[1:close]))
            rest = rest[close + 1:]
        word = tuple(labels)
    else:
        for ch in body:
            if ch not in _ALPHA:
                raise ValueError(f"bad label character {ch!r}")
        word = tuple(_ALPHA.index(ch) for ch in body)
    pairing = word_to_pairing(word)
    n = len(word) // 2
    if not framed:
        return pairing, None
    if bits == "" and n == 0:
        return pairing, ()
    if len(bits) != n or any(b not in "01" for b in bits):
        raise ValueError(f"framing word {bits!r} does not match order {n}")
    return pairing, tuple(int(b) for b in bits)


def parse_chord(text: str) -> ChordDiagram:
    """Parse a circle diagram encoding; the result is canonicalized."""
    pairing, framing = _parse_body(text.strip())
    return canonicalize(pairing, framing)


def parse_arc(text: str) -> ArcDiagram:
    """Parse an arc diagram encoding (taken literally, no rotation)."""
    pairing, framing = _parse_body(text.strip())
    return ArcDiagram(pairing, framing)


def from_record(rec: dict, space: str = "circle") -> Diagram:
    """Inverse of Diagram.record()."""
    pairing = tuple(rec["pairing"])
    framing = tuple(rec["framing"]) if rec.get("framing") is not None else None
    if space == "circle":
        return canonicalize(pairing, framing)
    if space == "arc":
        return ArcDiagram(pairing, framing)
    raise ValueError(f"unknown space {space!r}")


def solitary_chords(d: Diagram) -> list[int]:
    """Labels of chords whose endpoints are adjacent.

    On the circle adjacency wraps around; on the line it does not.
    """
    m = 2 * d.order
    labels = _chord_labels(d.pairing)
    wrap = isinstance(d, ChordDiagram)
    out = []
    for i, j in enumerate(d.pairing):
        adjacent = j == (i + 1) % m if wrap else j == i + 1
        if adjacent:
            out.append(labels[i])
    return sorted(set(out))
