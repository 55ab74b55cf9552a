"""Parametrized two-component link diagrams used as seeds and test cases."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .bracket import evaluate, parse_formulas
from .diagram import HEAD, TAIL, GaussDiagram, switch_crossings


class FamilyError(ValueError):
    pass


def braid_closure(word, strands: int, components=None) -> GaussDiagram:
    """Gauss diagram of the closure of a braid.

    ``word`` is a sequence of nonzero integers: ``i`` is the generator where
    the strand at position ``i`` passes over the one at ``i + 1`` (a positive
    crossing) and ``-i`` its inverse.  Positions are 1-based and strands run
    upward.  The closure must have exactly two components; ``components``
    optionally names the starting position of component 1 and component 2.
    """
    n = strands
    # follow each starting position through the word
    crossings = []  # (over start position, under start position, sign) per letter
    perm = list(range(n))  # perm[p] = starting strand now at position p
    for letter in word:
        i = abs(letter) - 1
        if not 0 <= i < n - 1:
            raise FamilyError(f"generator {letter} out of range")
        left, right = perm[i], perm[i + 1]
        if letter > 0:
            crossings.append((left, right, 1))
        else:
            crossings.append((right, left, -1))
        perm[i], perm[i + 1] = right, left
    # strand at bottom position s ends at top position end[s]
    end = {perm[p]: p for p in range(n)}
    seen, cycles = set(), []
    for s in range(n):
        if s in seen:
            continue
        cyc = []
        while s not in seen:
            seen.add(s)
            cyc.append(s)
            s = end[s]
        cycles.append(cyc)
    if len(cycles) != 2:
        raise FamilyError(f"closure has {len(cycles)} components, expected 2")
    if components is not None:
        first = components[0] - 1
        cycles.sort(key=lambda c: first not in c)
        cycles = [c[c.index(components[0] - 1):] + c[:c.index(components[0] - 1)] if components[0] - 1 in c else c
                  for c in cycles]
        if components[1] - 1 in cycles[1]:
            c = cycles[1]
            k = c.index(components[1] - 1)
            cycles[1] = c[k:] + c[:k]
    comp_of = {s: ci for ci, cyc in enumerate(cycles) for s in cyc}
    circles = ([], [])
    for cyc in cycles:
        for s in cyc:
            for idx, (over, under, _) in enumerate(crossings):
                if over == s:
                    circles[comp_of[s]].append((idx + 1, TAIL))
                elif under == s:
                    circles[comp_of[s]].append((idx + 1, HEAD))
    signs = {idx + 1: sign for idx, (_, _, sign) in enumerate(crossings)}
    return GaussDiagram.build(circles[0], circles[1], signs)


def unlink() -> GaussDiagram:
    return GaussDiagram.empty()


def hopf(sign1: int = 1, sign2: int = 1) -> GaussDiagram:
    """The positive Hopf diagram with each negative crossing switched.

    ``hopf(+1, +1)`` is the positive Hopf link and ``hopf(-1, -1)`` the
    negative one; mixed signs give a diagram of the unlink.
    """
    if {sign1, sign2} - {1, -1}:
        raise FamilyError("hopf signs must be +1 or -1")
    d = GaussDiagram.build([(1, TAIL), (2, HEAD)], [(1, HEAD), (2, TAIL)], {1: 1, 2: 1})
    return switch_crossings(d, [aid for aid, s in ((1, sign1), (2, sign2)) if s < 0])


def twist_chain(twists: int, sign: int = 1) -> GaussDiagram:
    """Closure of the 2-braid ``sigma_1^(2 t)``: the (2, 2t) torus link.

    Its linking number is ``sign * twists``.
    """
    if twists < 0:
        raise FamilyError("twist count must be >= 0")
    if twists == 0:
        return unlink()
    return braid_closure([sign] * (2 * twists), 2)


def _l_word(m: int, n: int) -> list:
    # sigma_3^m twists component 1, sigma_1^n twists component 2; the other
    # eight letters are the crossings between the components
    return [3] * m + [2, -2] + [1] * n + [-2, 1, 1, -3, -3, 2]


def l_mn(m: int, n: int) -> GaussDiagram:
    """The link L(m, n): m + n + 8 crossings, m and n odd.

    Closure of a 4-braid with a twist region of ``m`` positive crossings on
    component 1 and one of ``n`` positive crossings on component 2.  The
    linking number is 0.
    """
    for name, v in (("m", m), ("n", n)):
        if v < 1 or v % 2 == 0:
            raise FamilyError(f"{name} must be an odd integer >= 1, got {v}")
    d = braid_closure(_l_word(m, n), 4)
    # the first letter lies in the m-twist region
    if d.arrows[1].tail.component == 2:
        d = d.swap_components()
    return d


FAMILIES = ("L_mn", "hopf", "unlink", "twist_chain")


@dataclass(frozen=True)
class FamilySpec:
    """A family name with its integer parameters.

    ``L_mn``: ``(m, n)``; ``hopf``: ``(sign1, sign2)``; ``unlink``: ``()``;
    ``twist_chain``: ``(twists, sign)``.
    """

    family: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Read names like ``L_3_5``, ``hopf_pm``, ``unlink``, ``twist_chain_2_-1``."""
        if text == "unlink":
            return cls("unlink")
        if text.startswith("hopf_") and len(text) == 7:
            signs = {"p": 1, "m": -1}
            try:
                return cls("hopf", (signs[text[5]], signs[text[6]]))
            except KeyError:
                pass
        for fam in ("L_mn", "twist_chain"):
            prefix = "L_" if fam == "L_mn" else "twist_chain_"
            if text.startswith(prefix):
                try:
                    return cls(fam, tuple(int(x) for x in text[len(prefix):].split("_")))
                except ValueError:
                    break
        raise FamilyError(f"unknown family name {text!r}")

    @property
    def name(self) -> str:
        if self.family == "unlink":
            return "unlink"
        if self.family == "hopf":
            return "hopf_" + "".join("p" if s > 0 else "m" for s in self.params)
        prefix = "L" if self.family == "L_mn" else "twist_chain"
        return "_".join([prefix] + [str(p) for p in self.params])


def generate(spec: FamilySpec) -> GaussDiagram:
    fam, p = spec.family, tuple(spec.params)
    try:
        if fam == "L_mn":
            return l_mn(*p)
        if fam == "hopf":
            return hopf(*p)
        if fam == "unlink":
            if p:
                raise FamilyError("unlink takes no parameters")
            return unlink()
        if fam == "twist_chain":
            return twist_chain(*p)
    except TypeError as exc:
        raise FamilyError(f"bad parameters {p!r} for {fam}") from exc
    raise FamilyError(f"unknown family {fam!r}")


def seed_specs() -> list:
    """The diagrams walks start from by default."""
    out = [FamilySpec("unlink")]
    out += [FamilySpec("hopf", (a, b)) for a in (1, -1) for b in (1, -1)]
    out += [FamilySpec("L_mn", mn) for mn in ((1, 1), (3, 1), (1, 3), (3, 3))]
    return out


def load_builtin(name: str) -> dict:
    """Formulas of a shipped data file, e.g. ``load_builtin("theorem1_all")``."""
    text = resources.files("gaussinv").joinpath("data", f"{name}.formula").read_text()
    return parse_formulas(text, default_name=name)


# Expected entries of the L(m, n) table as functions of (m, n).
TABLE1_EXPECTED = {
    "theorem1_first": lambda m, n: -n,
    "theorem1_second": lambda m, n: -n,
    "theorem1_third": lambda m, n: m,
    "theorem1_fourth": lambda m, n: m,
    "theorem2_first": lambda m, n: m - n,
    "theorem2_second": lambda m, n: m - n,
    "theorem2_third": lambda m, n: 0,
    "theorem2_sum": lambda m, n: 2 * (m - n),
}


def table1_formulas() -> dict:
    out = {}
    out.update(load_builtin("theorem1_all"))
    out.update(load_builtin("theorem2_all"))
    out.update(load_builtin("theorem2_sum"))
    return out


def table1_report(max_param: int, formulas=None) -> list:
    """Rows ``(m, n, formula name, value)`` for odd ``m, n <= max_param``."""
    if max_param < 1:
        raise FamilyError("max_param must be >= 1")
    formulas = table1_formulas() if formulas is None else formulas
    rows = []
    odd = range(1, max_param + 1, 2)
    for m in odd:
        for n in odd:
            d = l_mn(m, n)
            for name, f in formulas.items():
                rows.append((m, n, name, evaluate(f, d)))
    return rows
