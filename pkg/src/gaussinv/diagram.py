"""Signed oriented Gauss diagrams on two labeled circles.

A diagram is stored as two cyclic sequences of slots.  Each slot is a pair
``(arrow_id, end)`` with ``end`` equal to ``"T"`` (tail) or ``"H"`` (head).
Arrows point from the over-passage to the under-passage of a crossing and
carry the local writhe as their sign.  Circles are read in the direction of
the component orientation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

# Arrow direction convention: True means arrows run over -> under.
OVER_TO_UNDER = True

TAIL = "T"
HEAD = "H"
WILD = 0

_SIGN_CHARS = {"+": 1, "-": -1}
_SIGN_OUT = {1: "+", -1: "-", WILD: "?"}


class DiagramError(ValueError):
    """Raised for malformed diagram text or inconsistent diagram data."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class Endpoint(NamedTuple):
    component: int  # 1 or 2
    position: int


class Arrow(NamedTuple):
    id: int
    tail: Endpoint
    head: Endpoint
    sign: int

    @property
    def is_mixed(self):
        """True when the arrow joins the two components."""
        return self.tail.component != self.head.component


Slot = tuple  # (arrow_id, "T" | "H")


@dataclass(frozen=True)
class GaussDiagram:
    """Immutable two-component Gauss diagram.

    ``circles`` holds the slot sequences of component 1 and component 2;
    ``signs`` is a sorted tuple of ``(arrow_id, sign)`` pairs.
    """

    circles: tuple
    signs: tuple

    allowed_signs = frozenset((1, -1))

    def __post_init__(self):
        self._validate()

    @classmethod
    def build(cls, circle1: Iterable, circle2: Iterable, signs: Mapping[int, int]):
        return cls(
            (tuple((int(i), e) for i, e in circle1), tuple((int(i), e) for i, e in circle2)),
            tuple(sorted((int(k), int(v)) for k, v in signs.items())),
        )

    @classmethod
    def _trusted(cls, circles, signs):
        """Construct without validation; for results valid by construction."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "circles", circles)
        object.__setattr__(obj, "signs", signs)
        return obj

    @classmethod
    def empty(cls):
        return cls(((), ()), ())

    def _validate(self):
        if len(self.circles) != 2:
            raise DiagramError("a diagram has exactly two circles")
        seen = {}
        for comp, circle in enumerate(self.circles, start=1):
            for pos, (aid, end) in enumerate(circle):
                if end not in (TAIL, HEAD):
                    raise DiagramError(f"bad arrow end {end!r}")
                if (aid, end) in seen:
                    raise DiagramError(f"arrow {aid} has two {end} ends")
                seen[aid, end] = (comp, pos)
        sign_ids = [aid for aid, _ in self.signs]
        if len(set(sign_ids)) != len(sign_ids):
            raise DiagramError("duplicate sign entry")
        for aid, sign in self.signs:
            if sign not in self.allowed_signs:
                raise DiagramError(f"arrow {aid} has invalid sign {sign!r}")
            if (aid, TAIL) not in seen:
                raise DiagramError(f"arrow {aid} has no tail")
            if (aid, HEAD) not in seen:
                raise DiagramError(f"arrow {aid} has no head")
        for aid, _ in seen:
            if aid not in dict(self.signs):
                raise DiagramError(f"arrow {aid} has no sign")

    # -- accessors -------------------------------------------------------

    @cached_property
    def sign_map(self) -> dict:
        return dict(self.signs)

    @cached_property
    def arrows(self) -> dict:
        """Map arrow id -> :class:`Arrow`."""
        where = {}
        for comp, circle in enumerate(self.circles, start=1):
            for pos, slot in enumerate(circle):
                where[slot] = Endpoint(comp, pos)
        return {
            aid: Arrow(aid, where[aid, TAIL], where[aid, HEAD], sign)
            for aid, sign in self.signs
        }

    @property
    def ids(self):
        return [aid for aid, _ in self.signs]

    def __len__(self):
        return len(self.signs)

    def circle(self, component: int) -> tuple:
        return self.circles[component - 1]

    def next_id(self) -> int:
        return max(self.ids, default=0) + 1

    # -- basic transformations ------------------------------------------

    def rotate(self, k1: int = 0, k2: int = 0) -> "GaussDiagram":
        """Rotate circle 1 left by ``k1`` slots and circle 2 by ``k2``."""
        c1, c2 = self.circles
        if c1:
            k1 %= len(c1)
            c1 = c1[k1:] + c1[:k1]
        if c2:
            k2 %= len(c2)
            c2 = c2[k2:] + c2[:k2]
        return type(self)._trusted((c1, c2), self.signs)

    def relabel(self, mapping: Mapping[int, int]) -> "GaussDiagram":
        circles = tuple(tuple((mapping[a], e) for a, e in c) for c in self.circles)
        signs = tuple(sorted((mapping[a], s) for a, s in self.signs))
        return type(self)(circles, signs)

    def with_signs(self, signs: Mapping[int, int]) -> "GaussDiagram":
        new = dict(self.signs)
        new.update(signs)
        return type(self)(self.circles, tuple(sorted(new.items())))

    def swap_components(self) -> "GaussDiagram":
        return type(self)((self.circles[1], self.circles[0]), self.signs)

    def __str__(self):
        return serialize(self, canonical=False)


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\S+")
_END_TOKEN = re.compile(r"([TH])([1-9][0-9]*)\Z")
_SIGN_TOKEN = re.compile(r"([1-9][0-9]*):(.)\Z")


def _tokens(line):
    for m in _TOKEN.finditer(line):
        yield m.group(), m.start() + 1


def parse_block(lines, first_line=1, sign_chars=None, cls=GaussDiagram):
    """Parse the three ``comp1:/comp2:/signs:`` lines of one diagram block."""
    sign_chars = _SIGN_CHARS if sign_chars is None else sign_chars
    if len(lines) != 3:
        raise DiagramError(f"expected 3 lines, got {len(lines)}", first_line, 1)
    circles = []
    placed = {}
    for offset, label in enumerate(("comp1:", "comp2:")):
        lineno = first_line + offset
        line = lines[offset]
        if not line.startswith(label):
            raise DiagramError(f"expected {label!r}", lineno, 1)
        circle = []
        for tok, col in _tokens(line[len(label):]):
            col += len(label)
            m = _END_TOKEN.match(tok)
            if not m:
                raise DiagramError(f"malformed token {tok!r}", lineno, col)
            slot = (int(m.group(2)), m.group(1))
            if slot in placed:
                raise DiagramError(f"duplicate arrow end {tok!r}", lineno, col)
            placed[slot] = (lineno, col)
            circle.append(slot)
        circles.append(tuple(circle))
    lineno = first_line + 2
    line = lines[2]
    if not line.startswith("signs:"):
        raise DiagramError("expected 'signs:'", lineno, 1)
    signs = {}
    for tok, col in _tokens(line[len("signs:"):]):
        col += len("signs:")
        m = _SIGN_TOKEN.match(tok)
        if not m:
            raise DiagramError(f"malformed sign token {tok!r}", lineno, col)
        aid, ch = int(m.group(1)), m.group(2)
        if ch not in sign_chars:
            raise DiagramError(f"unknown sign {ch!r} for arrow {aid}", lineno, col)
        if aid in signs:
            raise DiagramError(f"duplicate sign for arrow {aid}", lineno, col)
        signs[aid] = sign_chars[ch]
    ids = {aid for aid, _ in placed} | set(signs)
    for aid in sorted(ids):
        for end, name in ((TAIL, "tail"), (HEAD, "head")):
            if (aid, end) not in placed:
                where = placed.get((aid, HEAD if end == TAIL else TAIL), (first_line, 1))
                raise DiagramError(f"arrow {aid} has no {name}", *where)
        if aid not in signs:
            raise DiagramError(f"arrow {aid} has no sign", lineno, 1)
    return cls(tuple(circles), tuple(sorted(signs.items())))


def parse(text: str) -> GaussDiagram:
    """Parse a Gauss-code document into a validated diagram."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return parse_block(lines)


def _canonical_tuple(d: GaussDiagram):
    """Lexicographically least relabeled encoding over all rotation pairs."""
    c1, c2 = d.circles
    sign = d.sign_map
    best = None
    for r1 in range(max(len(c1), 1)):
        a = c1[r1:] + c1[:r1]
        for r2 in range(max(len(c2), 1)):
            b = c2[r2:] + c2[:r2]
            names = {}
            enc = [len(a)]
            for aid, end in a + b:
                if aid not in names:
                    names[aid] = len(names) + 1
                enc.append(names[aid] * 2 + (end == HEAD))
            order = sorted(names, key=names.get)
            enc.extend(sign[aid] for aid in order)
            enc = tuple(enc)
            if best is None or enc < best[0]:
                best = (enc, a, b, names)
    return best


def canonical_diagram(d: GaussDiagram) -> GaussDiagram:
    """Return the canonical rotation of ``d`` with arrows renumbered 1..n."""
    _, a, b, names = _canonical_tuple(d)
    return type(d)(
        (tuple((names[i], e) for i, e in a), tuple((names[i], e) for i, e in b)),
        tuple(sorted((names[i], s) for i, s in d.signs)),
    )


def canonical_form(d: GaussDiagram) -> bytes:
    """Isomorphism key: equal iff the diagrams agree up to circle rotations."""
    return serialize(d).encode("ascii")


def serialize(d: GaussDiagram, canonical: bool = True) -> str:
    """Deterministic text form; canonical rotation unless ``canonical=False``."""
    if canonical:
        d = canonical_diagram(d)
    lines = []
    for label, circle in zip(("comp1:", "comp2:"), d.circles):
        lines.append(" ".join([label] + [f"{e}{i}" for i, e in circle]))
    order = []
    for circle in d.circles:
        for aid, _ in circle:
            if aid not in order:
                order.append(aid)
    sign = d.sign_map
    lines.append(" ".join(["signs:"] + [f"{i}:{_SIGN_OUT[sign[i]]}" for i in order]))
    return "\n".join(lines)


def isomorphic(a: GaussDiagram, b: GaussDiagram) -> bool:
    return canonical_form(a) == canonical_form(b)


# -- mutations -----------------------------------------------------------------


def switch_crossing(d: GaussDiagram, aid: int) -> GaussDiagram:
    """Crossing change: reverse arrow ``aid`` and negate its sign."""
    if aid not in d.sign_map:
        raise KeyError(f"unknown arrow id {aid}")
    flip = {TAIL: HEAD, HEAD: TAIL}
    circles = tuple(
        tuple((i, flip[e]) if i == aid else (i, e) for i, e in c) for c in d.circles
    )
    return type(d)(circles, tuple((i, -s if i == aid else s) for i, s in d.signs))


def switch_crossings(d: GaussDiagram, ids: Iterable[int]) -> GaussDiagram:
    for aid in ids:
        d = switch_crossing(d, aid)
    return d


def delete_arrows(d: GaussDiagram, ids: Iterable[int]) -> GaussDiagram:
    """Sub-Gauss diagram obtained by ignoring the arrows in ``ids``."""
    ids = set(ids)
    unknown = ids - set(d.sign_map)
    if unknown:
        raise KeyError(f"unknown arrow ids {sorted(unknown)}")
    circles = tuple(tuple(s for s in c if s[0] not in ids) for c in d.circles)
    return type(d)._trusted(circles, tuple(p for p in d.signs if p[0] not in ids))


def restrict(d: GaussDiagram, ids: Iterable[int]) -> GaussDiagram:
    """Sub-diagram keeping only the arrows in ``ids``."""
    keep = set(ids)
    return delete_arrows(d, set(d.sign_map) - keep)


def writhe(d: GaussDiagram) -> int:
    return sum(s for _, s in d.signs)
