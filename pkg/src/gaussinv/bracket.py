"""Evaluation of Gauss-diagram brackets <A, G> and their linear combinations.

``<A, G>`` sums, over the sub-diagrams ``z`` of ``G`` that are isomorphic to
``A``, the product of the signs of ``z``.  Patterns may carry wildcard signs,
which stand for the sum over both sign choices.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from .diagram import (
    HEAD,
    TAIL,
    WILD,
    DiagramError,
    GaussDiagram,
    canonical_form,
    parse_block,
    restrict,
)

MAX_ARITY = 4
ORACLE_MAX_ARROWS = 10


class Pattern(GaussDiagram):
    """A small Gauss diagram whose arrow signs may be ``WILD``."""

    allowed_signs = frozenset((1, -1, WILD))

    @property
    def arity(self):
        return len(self.signs)

    @property
    def wildcards(self):
        return [aid for aid, s in self.signs if s == WILD]

    @classmethod
    def from_diagram(cls, d: GaussDiagram) -> "Pattern":
        return cls(d.circles, d.signs)


def as_pattern(d) -> Pattern:
    return d if isinstance(d, Pattern) else Pattern.from_diagram(d)


def expand_wildcards(p: Pattern) -> list:
    """All sign assignments of the wildcard arrows, ``+`` before ``-``."""
    wild = sorted(p.wildcards)
    out = []
    for choice in itertools.product((1, -1), repeat=len(wild)):
        out.append(p.with_signs(dict(zip(wild, choice))))
    return out


def pattern_key(p: GaussDiagram) -> bytes:
    return canonical_form(GaussDiagram(p.circles, p.signs))


# -- fast subset enumeration -------------------------------------------------

_code_keys: dict = defaultdict(dict)  # arity -> {subset code: canonical key}


@lru_cache(maxsize=None)
def _combinations(n, k):
    if k > n:
        return np.zeros((0, k), dtype=np.int64)
    return np.array(list(itertools.combinations(range(n), k)), dtype=np.int64).reshape(-1, k)


def _decode(code, k):
    """Rebuild the k-arrow diagram described by a subset code."""
    ends = []
    for e in range(2 * k):
        nib = (code >> (4 * e)) & 0xF
        ends.append((nib & 1, nib >> 1))  # (component - 1, rank)
    circles = ([], [])
    for e, (comp, rank) in enumerate(ends):
        circles[comp].append((rank, (e % k + 1, TAIL if e < k else HEAD)))
    signs = {j + 1: 1 if (code >> (8 * k + j)) & 1 else -1 for j in range(k)}
    return GaussDiagram(
        tuple(tuple(slot for _, slot in sorted(c)) for c in circles),
        tuple(sorted(signs.items())),
    )


def _code_key(code, k):
    cache = _code_keys[k]
    key = cache.get(code)
    if key is None:
        key = cache[code] = canonical_form(_decode(code, k))
    return key


def _arrow_table(d: GaussDiagram, classes=None):
    rows = []
    for a in d.arrows.values():
        if classes is not None and (a.tail.component, a.head.component) not in classes:
            continue
        rows.append((a.tail.component, a.tail.position, a.head.component, a.head.position, a.sign))
    return np.array(rows, dtype=np.int64).reshape(-1, 5)


@lru_cache(maxsize=4096)
def subset_histogram(d: GaussDiagram, k: int, classes=None) -> dict:
    """Signed counts of k-arrow sub-diagrams of ``d`` keyed by canonical form.

    The value at key ``K`` is ``<A, d>`` for any fixed-sign pattern ``A`` with
    canonical form ``K``.  ``classes`` optionally limits the arrows considered
    to those whose ``(tail component, head component)`` is listed.
    """
    table = _arrow_table(d, classes)
    combos = _combinations(len(table), k)
    hist = defaultdict(int)
    if k == 0:
        hist[canonical_form(GaussDiagram.empty())] = 1
        return dict(hist)
    if len(combos) == 0:
        return {}
    sub = table[combos]  # (C, k, 5)
    comp = np.concatenate([sub[:, :, 0], sub[:, :, 2]], axis=1) - 1
    pos = np.concatenate([sub[:, :, 1], sub[:, :, 3]], axis=1)
    same = comp[:, :, None] == comp[:, None, :]
    before = pos[:, None, :] < pos[:, :, None]
    rank = (same & before).sum(axis=2)
    shifts = 4 * np.arange(2 * k, dtype=np.int64)
    code = ((comp + 2 * rank) << shifts).sum(axis=1)
    sign = sub[:, :, 4]
    code += ((sign > 0).astype(np.int64) << (8 * k + np.arange(k, dtype=np.int64))).sum(axis=1)
    prod = sign.prod(axis=1)
    codes, inverse = np.unique(code, return_inverse=True)
    totals = np.bincount(inverse.ravel(), weights=prod, minlength=len(codes))
    cache = _code_keys[k]
    for c, v in zip(codes.tolist(), totals.tolist()):
        key = cache.get(c)
        if key is None:
            key = _code_key(c, k)
        hist[key] += int(v)
    return dict(hist)


def bracket(a: Pattern, g: GaussDiagram) -> int:
    """``<a, g>`` for a pattern with fixed signs."""
    if any(s == WILD for _, s in a.signs):
        raise ValueError("bracket() needs fixed signs; use evaluate() for wildcards")
    k = len(a.signs)
    if k == 0:
        return 1
    classes = frozenset((x.tail.component, x.head.component) for x in a.arrows.values())
    return subset_histogram(g, k, classes).get(pattern_key(a), 0)


# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class Formula:
    """Rational linear combination of patterns."""

    terms: tuple  # ((Fraction, Pattern), ...)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for coeff, p in self.terms:
            if coeff == 0:
                raise ValueError("formula coefficients must be nonzero")
            if not 1 <= p.arity <= MAX_ARITY:
                raise ValueError(f"pattern arity {p.arity} outside 1..{MAX_ARITY}")

    @classmethod
    def single(cls, p, coeff=1, name=""):
        return cls(((Fraction(coeff), as_pattern(p)),), name)

    def __add__(self, other):
        return Formula(self.terms + other.terms, self.name)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        c = Fraction(c)
        return Formula(tuple((coeff * c, p) for coeff, p in self.terms), self.name)

    __rmul__ = __mul__

    @property
    def arity(self):
        return max(p.arity for _, p in self.terms)

    def expanded(self):
        """``{(arity, key): coefficient}`` after wildcard expansion."""
        return dict(self._expanded)

    @cached_property
    def _expanded(self):
        out = defaultdict(Fraction)
        for coeff, p in self.terms:
            for q in expand_wildcards(p):
                out[q.arity, pattern_key(q)] += coeff
        return {k: v for k, v in out.items() if v != 0}

    def classes(self):
        return self._classes

    @cached_property
    def _classes(self):
        return frozenset(
            (a.tail.component, a.head.component)
            for _, p in self.terms
            for a in p.arrows.values()
        )


def evaluate(f: Formula, g: GaussDiagram) -> Fraction:
    """Exact value of the formula on ``g`` (bilinear extension of the bracket)."""
    total = Fraction(0)
    for (k, key), coeff in f._expanded.items():
        total += coeff * subset_histogram(g, k, None).get(key, 0)
    return total


def evaluate_many(formulas, g: GaussDiagram) -> list:
    return [evaluate(f, g) for f in formulas]


def _matches_by_rotation(p: GaussDiagram, z: GaussDiagram) -> bool:
    """Exhaustive rotation search for a sign- and end-preserving bijection."""
    if len(p.signs) != len(z.signs):
        return False
    if any(len(x) != len(y) for x, y in zip(p.circles, z.circles)):
        return False
    psign, zsign = p.sign_map, z.sign_map
    n1, n2 = len(z.circles[0]), len(z.circles[1])
    for r1 in range(max(n1, 1)):
        for r2 in range(max(n2, 1)):
            zc = z.rotate(r1, r2).circles
            fwd, back = {}, {}
            ok = True
            for pc, c in zip(p.circles, zc):
                for (pa, pe), (za, ze) in zip(pc, c):
                    if pe != ze or fwd.setdefault(za, pa) != pa or back.setdefault(pa, za) != za:
                        ok = False
                        break
                if not ok:
                    break
            if ok and all(zsign[za] == psign[pa] for za, pa in fwd.items()):
                return True
    return False


def _signature(d: GaussDiagram):
    """Rotation-invariant summary: a necessary condition for a match."""
    return (
        tuple(tuple(sorted(e for _, e in c)) for c in d.circles),
        tuple(sorted(s for _, s in d.signs)),
    )


@lru_cache(maxsize=256)
def _oracle_terms(f: Formula) -> dict:
    terms = defaultdict(list)  # signature -> [(coeff, fixed-sign pattern)]
    for coeff, p in f.terms:
        wild = [aid for aid, s in p.signs if s == WILD]
        for choice in itertools.product((1, -1), repeat=len(wild)):
            fix = dict(zip(wild, choice))
            q = GaussDiagram(p.circles, tuple((aid, fix.get(aid, s)) for aid, s in p.signs))
            terms[_signature(q)].append((coeff, q))
    return dict(terms)


def brute_force_values(formulas, g: GaussDiagram) -> list:
    """Reference values of several formulas on ``g`` in one subset sweep.

    Every subset of arrows is compared with every sign assignment of every
    term by an explicit search over circle rotations.
    """
    ids = g.ids
    if len(ids) > ORACLE_MAX_ARROWS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_ARROWS} arrows, got {len(ids)}")
    prepared = [_oracle_terms(f) for f in formulas]
    totals = [Fraction(0)] * len(prepared)
    for mask in range(1 << len(ids)):
        chosen = [ids[i] for i in range(len(ids)) if mask >> i & 1]
        z = restrict(g, chosen)
        sig = _signature(z)
        sign = None
        for j, terms in enumerate(prepared):
            for coeff, q in terms.get(sig, ()):
                if _matches_by_rotation(q, z):
                    if sign is None:
                        sign = math.prod(g.sign_map[aid] for aid in chosen)
                    totals[j] += coeff * sign
    return totals


def brute_force_oracle(f: Formula, g: GaussDiagram) -> Fraction:
    """Reference value of ``evaluate(f, g)`` by enumerating all sub-diagrams."""
    return brute_force_values([f], g)[0]


# -- formula files -------------------------------------------------------------

_PATTERN_SIGNS = {"+": 1, "-": -1, "?": WILD}


def parse_pattern(text: str) -> Pattern:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return parse_block(lines, sign_chars=_PATTERN_SIGNS, cls=Pattern)


def parse_formulas(text: str, default_name: str = "formula") -> dict:
    """Parse a formula file into ``{name: Formula}`` preserving file order.

    Grammar: ``pattern <name>`` followed by a three-line Gauss-code block with
    signs in ``+ - ?``; ``formula <name>`` opens a formula; ``term <p/q>
    <pattern>`` adds a term to the open formula (or to ``default_name``).
    ``#`` starts a comment.
    """
    lines = text.split("\n")
    patterns = {}
    pending = []  # (lineno, formula name, coeff, pattern name)
    order = []
    current = None
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = lines[i].split("#", 1)[0].rstrip()
        i += 1
        if not line.strip():
            continue
        words = line.split()
        if words[0] == "pattern" and len(words) == 2:
            block = [lines[j] for j in range(i, min(i + 3, len(lines)))]
            patterns[words[1]] = parse_block(block, lineno + 1, _PATTERN_SIGNS, Pattern)
            i += 3
        elif words[0] == "formula" and len(words) == 2:
            current = words[1]
            if current not in order:
                order.append(current)
        elif words[0] == "term" and len(words) == 3:
            try:
                coeff = Fraction(words[1])
            except (ValueError, ZeroDivisionError):
                raise DiagramError(f"bad coefficient {words[1]!r}", lineno, line.index(words[1]) + 1)
            if current is None:
                current = default_name
                order.append(current)
            pending.append((lineno, current, coeff, words[2]))
        else:
            raise DiagramError(f"unrecognized line {line!r}", lineno, 1)
    terms = defaultdict(list)
    for lineno, name, coeff, pname in pending:
        if pname not in patterns:
            raise DiagramError(f"unknown pattern {pname!r}", lineno, 1)
        terms[name].append((coeff, patterns[pname]))
    out = {}
    for name in order:
        if not terms[name]:
            raise DiagramError(f"formula {name!r} has no terms")
        out[name] = Formula(tuple(terms[name]), name)
    return out


def load_formulas(path) -> dict:
    path = Path(path)
    return parse_formulas(path.read_text(), default_name=path.stem)
