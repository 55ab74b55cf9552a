"""Empirical search for invariant combinations of patterns and order checks."""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bracket import MAX_ARITY, Formula, Pattern, evaluate, pattern_key, subset_histogram
from .diagram import HEAD, TAIL, GaussDiagram, canonical_diagram, switch_crossings
from .moves import (
    ALL_KINDS,
    FORWARD,
    R3_KINDS,
    R3_LEFT_BITS,
    R3_LONE,
    R3_SIGNS,
    MoveInstance,
    apply,
    directions,
    enumerate_sites,
    format_transcript,
    random_walk,
)


def _chord_words(n):
    """Words of length 2n using each of 1..n twice, numbered by first appearance."""
    word, count = [], [0] * (n + 1)

    def rec(opened):
        if len(word) == 2 * n:
            yield tuple(word)
            return
        for a in range(1, opened + 1):
            if count[a] < 2:
                count[a] += 1
                word.append(a)
                yield from rec(opened)
                word.pop()
                count[a] -= 1
        if opened < n:
            count[opened + 1] = 1
            word.append(opened + 1)
            yield from rec(opened + 1)
            word.pop()
            count[opened + 1] = 0

    yield from rec(0)


def _shapes(n, mixed_only):
    """Unsigned n-arrow diagrams up to rotation, as canonical circle pairs."""
    shapes = set()
    for word in _chord_words(n):
        for flips in itertools.product((False, True), repeat=n):
            seen = set()
            slots = []
            for a in word:
                first = a not in seen
                seen.add(a)
                slots.append((a, TAIL if first != flips[a - 1] else HEAD))
            for cut in range(2 * n + 1):
                c1, c2 = tuple(slots[:cut]), tuple(slots[cut:])
                if mixed_only:
                    comp = {s: 1 for s in c1} | {s: 2 for s in c2}
                    if any(comp[i, TAIL] == comp[i, HEAD] for i in range(1, n + 1)):
                        continue
                d = GaussDiagram((c1, c2), tuple((i, 1) for i in range(1, n + 1)))
                shapes.add(canonical_diagram(d).circles)
    return shapes


def enumerate_patterns(k: int = 3, mixed_only: bool = False) -> list:
    """All fixed-sign patterns with 1..k arrows, one per isomorphism class.

    Ordered by arity, then by canonical form.
    """
    if not 1 <= k <= MAX_ARITY:
        raise ValueError(f"arity must be in 1..{MAX_ARITY}")
    found = {}
    for n in range(1, k + 1):
        for circles in _shapes(n, mixed_only):
            for signs in itertools.product((1, -1), repeat=n):
                d = Pattern(circles, tuple(zip(range(1, n + 1), signs)))
                key = pattern_key(d)
                if key not in found:
                    found[key] = Pattern.from_diagram(canonical_diagram(d))
    return [found[key] for key in sorted(found, key=lambda s: (found[s].arity, s))]


def enumerate_diagrams(max_arrows: int) -> list:
    """Every diagram with at most ``max_arrows`` arrows, up to isomorphism."""
    out = [GaussDiagram.empty()]
    if max_arrows >= 1:
        out += [GaussDiagram(p.circles, p.signs) for p in enumerate_patterns(max_arrows)]
    return out


@dataclass
class ConstraintMatrix:
    """Rows of bracket differences across sampled moves."""

    basis: list
    rows: list = field(default_factory=list)
    moves: list = field(default_factory=list)  # (diagram, MoveInstance) per row

    @property
    def shape(self):
        return (len(self.rows), len(self.basis))


def _difference_row(basis_keys, left, right):
    row = []
    for k, key in basis_keys:
        row.append(subset_histogram(left, k).get(key, 0) - subset_histogram(right, k).get(key, 0))
    return row


def plant_r3_site(d: GaussDiagram, kind, rng: random.Random, direction=FORWARD) -> tuple:
    """Insert the three arrows of an R3 local picture at random arcs.

    Returns ``(diagram, instance)`` where the instance is applicable.
    """
    lone = R3_LONE[kind]
    lone_comp = rng.choice((1, 2))
    comp = {x: (lone_comp if x == lone else 3 - lone_comp) for x in "tmb"}
    tm, tb, mb = d.next_id(), d.next_id() + 1, d.next_id() + 2
    bits = R3_LEFT_BITS if direction == FORWARD else tuple(1 - b for b in R3_LEFT_BITS)
    strands = {
        "t": [(tm, TAIL), (tb, TAIL)],
        "m": [(tm, HEAD), (mb, TAIL)],
        "b": [(tb, HEAD), (mb, HEAD)],
    }
    # pairs are placed at arcs of the original circles so none splits another
    placed = {1: [], 2: []}
    for x, bit in zip("tmb", bits):
        pair = strands[x] if bit == 0 else strands[x][::-1]
        c = comp[x]
        placed[c].append((rng.randrange(len(d.circle(c)) + 1), rng.random(), pair))
    circles = []
    for c in (1, 2):
        old = list(d.circle(c))
        for arc, _, pair in sorted(placed[c], reverse=True):
            old[arc:arc] = pair
        circles.append(old)
    signs = dict(d.signs)
    signs.update(zip((tm, tb, mb), R3_SIGNS))
    out = GaussDiagram((tuple(circles[0]), tuple(circles[1])), tuple(sorted(signs.items())))
    return out, MoveInstance(kind, direction, (tm, tb, mb))


def sample_move(d: GaussDiagram, rng: random.Random, kinds=ALL_KINDS, plant=True):
    """A random (diagram, move) pair based at ``d``.

    The kind and direction are drawn first, redrawing when nothing of that
    type applies.  When ``plant`` is set and no R3 site exists, one is planted
    into ``d`` at random arcs.
    """
    while True:
        kind = rng.choice(kinds)
        direction = rng.choice(directions(kind))
        sites = enumerate_sites(d, kind, direction)
        if sites:
            return d, rng.choice(sites)
        if kind in R3_KINDS and plant:
            return plant_r3_site(d, kind, rng, direction)


def build_constraints(basis, seeds, samples: int, seed: int, kinds=ALL_KINDS,
                      walk_steps: int = 20, cap: int = 25) -> ConstraintMatrix:
    """Sample move instances on corpus diagrams and record bracket differences.

    The corpus grows from ``seeds`` by short random walks capped at ``cap``
    arrows.  Every row is reproducible from ``seed``.
    """
    rng = random.Random(seed)
    keys = [(p.arity, pattern_key(p)) for p in basis]
    m = ConstraintMatrix(list(basis))
    seeds = list(seeds)
    for _ in range(samples):
        start = rng.choice(seeds)
        walk = random_walk(start, rng.randrange(walk_steps + 1), rng.getrandbits(64), ceiling=cap)
        d, mi = sample_move(walk[-1], rng, kinds)
        m.rows.append(_difference_row(keys, d, apply(d, mi)))
        m.moves.append((d, mi))
    return m


class Echelon:
    """Incrementally maintained sparse row echelon form over the rationals.

    Rows are dicts ``{column: Fraction}``; each stored row is normalized to a
    leading 1 at its pivot column.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivots = {}  # pivot column -> row

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row):
        row = {c: Fraction(x) for c, x in row.items() if x != 0}
        done = {}
        while row:
            c = min(row)
            x = row.pop(c)
            piv = self.pivots.get(c)
            if piv is None:
                done[c] = x
                continue
            for j, y in piv.items():
                if j == c:
                    continue
                v = row.get(j, 0) - x * y
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
        return done

    def add(self, row) -> bool:
        """Insert a row; returns True if it increased the rank."""
        if not isinstance(row, dict):
            row = dict(enumerate(row))
        red = self.reduce(row)
        if not red:
            return False
        c = min(red)
        lead = red[c]
        self.pivots[c] = {j: v / lead for j, v in red.items()}
        return True

    def rref(self):
        """Fully reduced rows keyed by pivot column."""
        out = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for j in sorted(k for k in row if k != c and k in out):
                x = row.pop(j)
                for k, y in out[j].items():
                    if k == j:
                        continue
                    v = row.get(k, 0) - x * y
                    if v:
                        row[k] = v
                    else:
                        row.pop(k, None)
            out[c] = row
        return out


def rref(rows, ncols):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``.

    Pivot columns come out in increasing order and the result does not depend
    on the order of the input rows.
    """
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    red = ech.rref()
    pivots = sorted(red)
    dense = []
    for c in pivots:
        dense.append([red[c].get(j, Fraction(0)) for j in range(ncols)])
    return dense, pivots


PRIME = 2147483647  # 2**31 - 1


def _rref_mod_p(a, p=PRIME):
    """In-place RREF of an int64 array modulo ``p``; returns pivot columns."""
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        f = a[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if len(hit):
            a[hit] = (a[hit] - (f[hit, None] * a[r]) % p) % p
        pivots.append(c)
        r += 1
    return pivots


def _rational_reconstruct(x, p=PRIME):
    """Smallest-height fraction congruent to ``x`` mod ``p`` (or None)."""
    bound = int((p // 2) ** 0.5)
    r0, r1, s0, s1 = p, x % p, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _kernel_from_rref(red, ncols):
    out = []
    for f in (c for c in range(ncols) if c not in red):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for p, row in red.items():
            if f in row:
                v[p] = -row[f]
        out.append(v)
    return out


def _nullspace_exact(rows, ncols):
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    return _kernel_from_rref(ech.rref(), ncols)


def _exact_product(a, b):
    """Integer matrix product, through BLAS when float64 is provably exact."""
    bound = float(np.abs(a).max(initial=0)) * float(np.abs(b).max(initial=0)) * a.shape[1]
    if bound < 2.0 ** 52:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return (a.astype(object) @ b.astype(object))


def _nullspace_modular(rows, ncols, seed=0):
    """Kernel via a random row sketch reduced mod p, lifted and checked exactly."""
    mat = np.array(rows, dtype=np.int64).reshape(-1, ncols)
    k = min(len(mat), ncols + 24)
    sketch = mat
    if k < len(mat):
        rng = np.random.default_rng(seed)
        sketch = _exact_product(rng.integers(-1, 2, size=(k, len(mat)), dtype=np.int64), mat)
    a = np.asarray(sketch % PRIME, dtype=np.int64)
    pivots = _rref_mod_p(a)
    red = {}
    for i, p in enumerate(pivots):
        row = {}
        for f in np.nonzero(a[i])[0].tolist():
            q = _rational_reconstruct(int(a[i, f]))
            if q is None:
                return None
            row[f] = q
        red[p] = row
    out = _kernel_from_rref(red, ncols)
    if out and len(mat):
        scaled = []
        for v in out:
            den = math.lcm(*(x.denominator for x in v))
            scaled.append([int(x * den) for x in v])
        if np.any(_exact_product(mat, np.array(scaled, dtype=np.int64).T)):
            return None
    return out


def solve_nullspace(m) -> list:
    """Exact basis of ``{c : M c = 0}`` as lists of Fractions.

    One vector per non-pivot column ``f`` of the reduced row echelon form:
    ``v[f] = 1`` and the pivot entries read off the reduced rows.  Integer
    matrices are first reduced modulo a prime; the lifted vectors are checked
    exactly against every row and, failing that, the kernel is recomputed by
    exact rational elimination.  The result is the same either way.
    """
    if isinstance(m, ConstraintMatrix):
        rows, ncols = m.rows, len(m.basis)
    else:
        rows, ncols = m
    rows = list(rows)
    if rows and all(isinstance(x, int) or Fraction(x).denominator == 1 for r in rows for x in r):
        out = _nullspace_modular(rows, ncols)
        if out is not None:
            return out
    return _nullspace_exact(rows, ncols)


def vector_of(formula: Formula, basis) -> list:
    """Coordinates of a formula in a pattern basis (after wildcard expansion)."""
    index = {(p.arity, pattern_key(p)): i for i, p in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for key, coeff in formula.expanded().items():
        if key not in index:
            raise KeyError("formula uses a pattern outside the basis")
        v[index[key]] += coeff
    return v


def formula_of(vector, basis, name="") -> Formula:
    terms = tuple((Fraction(c), p) for c, p in zip(vector, basis) if c != 0)
    return Formula(terms, name)


def residual(m: ConstraintMatrix, vector) -> list:
    return [sum(a * b for a, b in zip(row, vector)) for row in m.rows]


def satisfies(m: ConstraintMatrix, vector) -> bool:
    return all(x == 0 for x in residual(m, vector))


def in_span(vectors, target) -> bool:
    """Whether ``target`` is a rational combination of ``vectors``."""
    if not vectors:
        return all(x == 0 for x in target)
    n = len(target)
    red, pivots = rref(vectors, n)
    t = list(map(Fraction, target))
    for row, p in zip(red, pivots):
        if t[p] != 0:
            f = t[p]
            t = [x - f * y for x, y in zip(t, row)]
    return all(x == 0 for x in t)


def order_check(f: Formula, d: GaussDiagram, ids) -> Fraction:
    """Alternating sum of ``f`` over crossing changes of subsets of ``ids``."""
    ids = list(ids)
    unknown = set(ids) - set(d.sign_map)
    if unknown:
        raise KeyError(f"unknown arrow ids {sorted(unknown)}")
    total = Fraction(0)
    for r in range(len(ids) + 1):
        for subset in itertools.combinations(ids, r):
            total += (-1) ** r * evaluate(f, switch_crossings(d, subset))
    return total


# -- corpus, verification and reports -----------------------------------------

CORPUS_CAP = 25


def corpus_seeds() -> list:
    """Family diagrams used to seed sampling: every family, small parameters."""
    from .families import FamilySpec, generate, seed_specs

    specs = seed_specs() + [FamilySpec("twist_chain", (t, s)) for t in (1, 2) for s in (1, -1)]
    return [generate(sp) for sp in specs]


def corpus(seed: int, size: int, steps: int = 20, cap: int = CORPUS_CAP) -> list:
    """``size`` diagrams: random walks of up to ``steps`` moves from the seeds."""
    rng = random.Random(seed)
    seeds = corpus_seeds()
    out = []
    for _ in range(size):
        walk = random_walk(rng.choice(seeds), rng.randrange(steps + 1), rng.getrandbits(64), ceiling=cap)
        out.append(walk[-1])
    return out


@dataclass
class Violation:
    """A walk along which a formula changed value."""

    start: GaussDiagram
    transcript: list
    before: Fraction
    after: Fraction

    def replay_text(self) -> str:
        return format_transcript(self.start, self.transcript)


def find_violation(f: Formula, start: GaussDiagram, steps: int, seed: int,
                   ceiling: int = 40):
    """First step of a seeded walk where ``f`` changes, or None.

    The returned transcript ends with the offending move.
    """
    transcript = []
    walk = random_walk(start, steps, seed, ceiling=ceiling, transcript=transcript)
    base = evaluate(f, start)
    # skipped steps repeat the diagram, so index the transcript by changes
    moves = iter(transcript)
    taken = []
    for prev, d in zip(walk, walk[1:]):
        if d is not prev:
            taken.append(next(moves))
        value = evaluate(f, d)
        if value != base:
            return Violation(start, taken, base, value)
    return None


def verify(f: Formula, seeds, walks: int, steps: int, seed: int):
    """Run ``walks`` seeded walks from each seed; first violation or None."""
    rng = random.Random(seed)
    for start in seeds:
        for _ in range(walks):
            v = find_violation(f, start, steps, rng.getrandbits(64))
            if v is not None:
                return v
    return None


def _frac(x) -> str:
    return str(Fraction(x))


@dataclass
class SolverReport:
    k: int
    samples: int
    seed: int
    verify_seed: int
    basis: list
    vectors: list
    status: list  # "verified" or "demoted" per vector
    transcripts: list  # replay text or None per vector

    @property
    def verified(self) -> list:
        return [v for v, s in zip(self.vectors, self.status) if s == "verified"]

    def to_json(self) -> str:
        from .diagram import serialize

        doc = {
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "verify_seed": self.verify_seed,
            "basis_size": len(self.basis),
            "dimension": len(self.vectors),
            "basis": [serialize(p) for p in self.basis],
            "vectors": [
                {
                    "coefficients": {str(i): _frac(c) for i, c in enumerate(v) if c != 0},
                    "status": s,
                    "transcript": t,
                }
                for v, s, t in zip(self.vectors, self.status, self.transcripts)
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def solve(k: int, samples: int, seed: int, verify_walks: int = 20, verify_steps: int = 50,
          verify_seed=None, mixed_only: bool = False) -> SolverReport:
    """Sample constraints at arity ``k``, solve, and re-verify every vector.

    Verification walks use a seed derived from ``seed`` unless one is given,
    and start from a fresh corpus drawn with that seed.
    """
    basis = enumerate_patterns(k, mixed_only)
    m = build_constraints(basis, corpus_seeds(), samples, seed)
    vectors = solve_nullspace(m)
    if verify_seed is None:
        verify_seed = random.Random(seed).getrandbits(64) ^ 0x5EED
    fresh = corpus(verify_seed, 4, steps=10)
    status, transcripts = [], []
    for v in vectors:
        bad = verify(formula_of(v, basis), fresh, verify_walks, verify_steps, verify_seed)
        status.append("verified" if bad is None else "demoted")
        transcripts.append(None if bad is None else bad.replay_text())
    return SolverReport(k, samples, seed, verify_seed, basis, vectors, status, transcripts)


def sample_order_checks(f: Formula, size: int, samples: int, seed: int, diagrams=None) -> list:
    """``order_check`` on ``samples`` random (diagram, ``size``-subset) pairs.

    Returns ``(diagram, ids, value)`` triples.  Diagrams with fewer than
    ``size`` arrows are skipped when drawing.
    """
    rng = random.Random(seed)
    if diagrams is None:
        diagrams = corpus(seed, 50)
    pool = [d for d in diagrams if len(d) >= size]
    if not pool:
        raise ValueError(f"no corpus diagram has {size} arrows")
    out = []
    for _ in range(samples):
        d = rng.choice(pool)
        ids = sorted(rng.sample(d.ids, size))
        out.append((d, ids, order_check(f, d, ids)))
    return out


def find_order_witness(f: Formula, size: int, diagrams, seed: int = 0, tries: int = 2000):
    """A (diagram, ids) pair with nonzero ``order_check``, or None."""
    rng = random.Random(seed)
    pool = [d for d in diagrams if len(d) >= size]
    for _ in range(tries if pool else 0):
        d = rng.choice(pool)
        ids = sorted(rng.sample(d.ids, size))
        if order_check(f, d, ids) != 0:
            return d, ids
    return None


def random_diagram(rng: random.Random, arrows: int) -> GaussDiagram:
    """Uniformly shuffled endpoints split at a random point, random signs.

    No planarity is imposed.
    """
    slots = [(i, e) for i in range(1, arrows + 1) for e in (TAIL, HEAD)]
    rng.shuffle(slots)
    cut = rng.randint(0, len(slots))
    signs = tuple((i, rng.choice((1, -1))) for i in range(1, arrows + 1))
    return GaussDiagram((tuple(slots[:cut]), tuple(slots[cut:])), signs)
