"""Reidemeister moves as rewrites of two-component Gauss diagrams.

The move set is a minimal generating set together with inverses:

* ``R1a`` / ``R1b``: a counterclockwise kink with a negative (resp. positive)
  crossing.  Along the strand the kink reads tail-then-head for ``R1a`` and
  head-then-tail for ``R1b``.
* ``R2``: two strands from different components, oriented the same way.  The
  over strand receives two tails and the under strand two heads, in the same
  order.  The first crossing is positive and the second negative.
* ``R3b`` / ``R3m`` / ``R3t``: the cyclic third move with crossing signs
  ``(+, -, +)`` on the (top/middle, top/bottom, middle/bottom) crossings,
  where the bottom, middle or top strand lies on the other component.

Moves between strands of a single component are consequences of these and
are not implemented.

An R3 site is described by its three arrows ``(tm, tb, mb)``.  Each strand
carries two adjacent endpoints.  Reading along the strand, one "order bit"
per strand records which crossing comes first:

* top: 0 if ``tm`` comes first,
* middle: 0 if ``tm`` comes first,
* bottom: 0 if ``tb`` comes first.

For a planar triple of lines the bits satisfy
``top ^ middle == (s_tb != s_mb)`` and ``middle ^ bottom == (s_tm != s_tb)``.
A move flips all three bits.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .diagram import HEAD, TAIL, GaussDiagram, DiagramError


class MoveKind(str, enum.Enum):
    R1a = "R1a"
    R1b = "R1b"
    R2 = "R2"
    R3b = "R3b"
    R3m = "R3m"
    R3t = "R3t"


R1_KINDS = (MoveKind.R1a, MoveKind.R1b)
R2_KINDS = (MoveKind.R2,)
R3_KINDS = (MoveKind.R3b, MoveKind.R3m, MoveKind.R3t)
ALL_KINDS = tuple(MoveKind)

INSERT, REMOVE = "insert", "remove"
FORWARD, BACKWARD = "forward", "backward"

# sign of the kink arrow and whether its tail comes first along the strand
R1_SHAPE = {MoveKind.R1a: (-1, True), MoveKind.R1b: (1, False)}
# signs of the (tm, tb, mb) crossings
R3_SIGNS = (1, -1, 1)
# order bits (top, middle, bottom) of the left-hand picture of a forward move
R3_LEFT_BITS = (0, 1, 0)
# which strand lies alone on its component
R3_LONE = {MoveKind.R3b: "b", MoveKind.R3m: "m", MoveKind.R3t: "t"}


def directions(kind: MoveKind):
    if kind in R3_KINDS:
        return (FORWARD, BACKWARD)
    return (INSERT, REMOVE)


def r3_bits_valid(signs, bits) -> bool:
    """Whether order bits ``(t, m, b)`` are realizable for crossing ``signs``."""
    s_tm, s_tb, s_mb = signs
    t, m, b = bits
    return (t ^ m) == (s_tb != s_mb) and (m ^ b) == (s_tm != s_tb)


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class MoveInstance:
    """One applicable rewrite.

    ``site`` depends on the kind and direction:

    * R1 insert: ``(component, arc)``; R1 remove: ``(arrow_id,)``
    * R2 insert: ``(over_component, over_arc, under_arc)``;
      R2 remove: ``(positive_id, negative_id)``
    * R3: ``(tm_id, tb_id, mb_id)``

    Arc ``i`` of a circle is the gap just before slot ``i``.
    """

    kind: MoveKind
    direction: str
    site: tuple

    def __str__(self):
        return f"{self.kind.value} {self.direction} {' '.join(map(str, self.site))}"

    @classmethod
    def from_string(cls, text):
        parts = text.split()
        try:
            return cls(MoveKind(parts[0]), parts[1], tuple(int(x) for x in parts[2:]))
        except (IndexError, ValueError) as exc:
            raise MoveError(f"bad move record {text!r}") from exc


def _arcs(circle):
    return range(max(len(circle), 1))


def _adjacent(circle, first, second) -> bool:
    """True if slot ``second`` directly follows slot ``first`` cyclically."""
    n = len(circle)
    i = circle.index(first)
    return circle[(i + 1) % n] == second


# -- site enumeration --------------------------------------------------------


def _r1_insert_sites(d):
    return [(c, i) for c in (1, 2) for i in _arcs(d.circle(c))]


def _r1_remove_sites(d, kind):
    sign, tail_first = R1_SHAPE[kind]
    out = []
    for a in d.arrows.values():
        if a.sign != sign or a.is_mixed:
            continue
        circle = d.circle(a.tail.component)
        first, second = ((a.id, TAIL), (a.id, HEAD)) if tail_first else ((a.id, HEAD), (a.id, TAIL))
        if _adjacent(circle, first, second):
            out.append((a.id,))
    return out


def _r2_insert_sites(d):
    return [
        (c, i, j)
        for c in (1, 2)
        for i in _arcs(d.circle(c))
        for j in _arcs(d.circle(3 - c))
    ]


def _r2_remove_sites(d):
    arrows = d.arrows
    out = []
    for comp, circle in enumerate(d.circles, start=1):
        n = len(circle)
        for i, (aid, end) in enumerate(circle):
            if end != TAIL or n < 2:
                continue
            bid, bend = circle[(i + 1) % n]
            if bend != TAIL or bid == aid:
                continue
            a, b = arrows[aid], arrows[bid]
            if (a.sign, b.sign) != (1, -1) or not a.is_mixed or not b.is_mixed:
                continue
            if a.head.component != b.head.component:
                continue
            if _adjacent(d.circle(a.head.component), (aid, HEAD), (bid, HEAD)):
                out.append((aid, bid))
    return out


def _strand_slots(tm, tb, mb):
    """Slots on the top, middle and bottom strands, in bit-0 order."""
    return (
        ((tm, TAIL), (tb, TAIL)),
        ((tm, HEAD), (mb, TAIL)),
        ((tb, HEAD), (mb, HEAD)),
    )


def _neighbors(d):
    """Map slot -> (next slot, previous slot) along its circle."""
    out = {}
    for circle in d.circles:
        n = len(circle)
        for i, slot in enumerate(circle):
            out[slot] = (circle[(i + 1) % n], circle[i - 1])
    return out


def _r3_sites(d, kind, direction):
    arrows = d.arrows
    lone = R3_LONE[kind]
    bits = R3_LEFT_BITS if direction == FORWARD else tuple(1 - b for b in R3_LEFT_BITS)
    near = _neighbors(d)

    def follows(first, second, bit):
        # ``first`` precedes ``second`` along the strand when bit is 0
        if bit:
            first, second = second, first
        return near[first][0] == second

    out = []
    for tm in arrows.values():
        if tm.sign != R3_SIGNS[0]:
            continue
        # the top strand pairs tm's tail with an adjacent tail
        for cand in set(near[tm.id, TAIL]):
            tb_id, end = cand
            if end != TAIL or tb_id == tm.id or arrows[tb_id].sign != R3_SIGNS[1]:
                continue
            if not follows((tm.id, TAIL), (tb_id, TAIL), bits[0]):
                continue
            # the middle strand pairs tm's head with mb's tail
            for cand2 in set(near[tm.id, HEAD]):
                mb_id, end2 = cand2
                if end2 != TAIL or mb_id in (tm.id, tb_id) or arrows[mb_id].sign != R3_SIGNS[2]:
                    continue
                if not follows((tm.id, HEAD), (mb_id, TAIL), bits[1]):
                    continue
                if not follows((tb_id, HEAD), (mb_id, HEAD), bits[2]):
                    continue
                tb = arrows[tb_id]
                comps = {"t": tm.tail.component, "m": tm.head.component, "b": tb.head.component}
                others = {comps[x] for x in "tmb" if x != lone}
                if len(others) != 1 or comps[lone] in others:
                    continue
                out.append((tm.id, tb_id, mb_id))
    return out


def _raw_sites(d, kind, direction):
    if kind in R1_KINDS:
        return _r1_insert_sites(d) if direction == INSERT else _r1_remove_sites(d, kind)
    if kind in R2_KINDS:
        return _r2_insert_sites(d) if direction == INSERT else _r2_remove_sites(d)
    return _r3_sites(d, kind, direction)


def enumerate_sites(d: GaussDiagram, kind: MoveKind, direction: str) -> list:
    """All instances of ``kind`` in ``direction`` applicable to ``d``."""
    kind = MoveKind(kind)
    if direction not in directions(kind):
        raise MoveError(f"{kind.value} has no direction {direction!r}")
    return [MoveInstance(kind, direction, s) for s in sorted(_raw_sites(d, kind, direction))]


def all_sites(d: GaussDiagram, kinds=ALL_KINDS) -> list:
    return [mi for k in kinds for dr in directions(k) for mi in enumerate_sites(d, k, dr)]


# -- application --------------------------------------------------------------


def _insert(circle, arc, slots):
    return circle[:arc] + tuple(slots) + circle[arc:]


def _with_circles(d, c1, c2, signs):
    return GaussDiagram((tuple(c1), tuple(c2)), tuple(sorted(signs.items())))


def applicable(d: GaussDiagram, mi: MoveInstance) -> bool:
    """Whether ``mi`` belongs to ``enumerate_sites(d, mi.kind, mi.direction)``."""
    kind = MoveKind(mi.kind)
    if mi.direction not in directions(kind):
        return False
    if mi.direction == INSERT:
        if kind in R1_KINDS:
            if len(mi.site) != 2 or mi.site[0] not in (1, 2):
                return False
            return mi.site[1] in _arcs(d.circle(mi.site[0]))
        if len(mi.site) != 3 or mi.site[0] not in (1, 2):
            return False
        c, i, j = mi.site
        return i in _arcs(d.circle(c)) and j in _arcs(d.circle(3 - c))
    return tuple(mi.site) in set(_raw_sites(d, kind, mi.direction))


def apply(d: GaussDiagram, mi: MoveInstance) -> GaussDiagram:
    """Rewrite ``d`` by the move instance ``mi``."""
    if not applicable(d, mi):
        raise MoveError(f"move {mi} is not applicable")
    circles = list(d.circles)
    signs = dict(d.signs)
    kind = mi.kind
    if kind in R1_KINDS and mi.direction == INSERT:
        comp, arc = mi.site
        sign, tail_first = R1_SHAPE[kind]
        new = d.next_id()
        ends = (TAIL, HEAD) if tail_first else (HEAD, TAIL)
        circles[comp - 1] = _insert(circles[comp - 1], arc, [(new, e) for e in ends])
        signs[new] = sign
    elif kind is MoveKind.R2 and mi.direction == INSERT:
        over, i, j = mi.site
        a, b = d.next_id(), d.next_id() + 1
        circles[over - 1] = _insert(circles[over - 1], i, [(a, TAIL), (b, TAIL)])
        under = 2 - over
        circles[under] = _insert(circles[under], j, [(a, HEAD), (b, HEAD)])
        signs[a], signs[b] = 1, -1
    elif mi.direction == REMOVE:
        gone = set(mi.site)
        circles = [tuple(s for s in c if s[0] not in gone) for c in circles]
        for aid in gone:
            del signs[aid]
    else:
        swap = {}
        for x, y in _strand_slots(*mi.site):
            swap[x], swap[y] = y, x
        circles = [tuple(swap.get(s, s) for s in c) for c in circles]
    return _with_circles(d, circles[0], circles[1], signs)


def inverse(d: GaussDiagram, mi: MoveInstance) -> MoveInstance:
    """The instance on ``apply(d, mi)`` that undoes ``mi``."""
    if mi.kind in R3_KINDS:
        other = BACKWARD if mi.direction == FORWARD else FORWARD
        return MoveInstance(mi.kind, other, mi.site)
    if mi.direction == REMOVE:
        raise MoveError("the inverse of a removal depends on where arrows are reinserted")
    new = d.next_id()
    if mi.kind in R1_KINDS:
        return MoveInstance(mi.kind, REMOVE, (new,))
    return MoveInstance(mi.kind, REMOVE, (new, new + 1))


# -- random walks -------------------------------------------------------------

SIZE_CEILING = 40


def random_step(d: GaussDiagram, rng: random.Random, ceiling: int = SIZE_CEILING, kinds=ALL_KINDS):
    """Pick a move kind and direction, then a uniform instance of it.

    Above ``ceiling`` arrows only removals and R3 moves are offered.
    Returns ``None`` when nothing is applicable.
    """
    options = []
    for k in kinds:
        for dr in directions(k):
            if dr == INSERT and len(d) >= ceiling:
                continue
            sites = _raw_sites(d, k, dr)
            if sites:
                options.append((k, dr, sites))
    if not options:
        return None
    k, dr, sites = rng.choice(options)
    return MoveInstance(k, dr, rng.choice(sorted(sites)))


def random_walk(d: GaussDiagram, steps: int, seed: int, ceiling: int = SIZE_CEILING,
                kinds=ALL_KINDS, transcript=None) -> list:
    """Diagrams ``d_0 = d, ..., d_steps`` of a seeded random move walk.

    If ``transcript`` is a list, the applied instances are appended to it.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rng = random.Random(seed)
    out = [d]
    for _ in range(steps):
        mi = random_step(d, rng, ceiling, kinds)
        if mi is not None:
            d = apply(d, mi)
            if transcript is not None:
                transcript.append(mi)
        out.append(d)
    return out


def replay(d: GaussDiagram, transcript) -> list:
    out = [d]
    for mi in transcript:
        d = apply(d, mi)
        out.append(d)
    return out


def format_transcript(start: GaussDiagram, transcript) -> str:
    from .diagram import serialize

    lines = ["# start", serialize(start, canonical=False), "# moves"]
    lines += [str(mi) for mi in transcript]
    return "\n".join(lines) + "\n"


def parse_transcript(text: str):
    from .diagram import parse_block

    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0] != "# start" or len(lines) < 5 or lines[4] != "# moves":
        raise DiagramError("transcript must start with '# start', a diagram, '# moves'")
    start = parse_block(lines[1:4], first_line=2)
    return start, [MoveInstance.from_string(ln) for ln in lines[5:]]
