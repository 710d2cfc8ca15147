"""Combinatorial string-link diagrams.

A diagram is stored as a Gauss code: for every component the crossings it
passes, in order of travel (bottom to top), each marked over or under, plus
a sign per crossing.  Arcs are the pieces between consecutive undercrossings,
so component ``i`` has ``1 + (number of under passes)`` arcs labelled
``(i, 1), (i, 2), ...``.  Components and arcs are 1-based throughout.

Crossing signs are right-handed: with both strands pointing up, a crossing
whose over strand runs from lower left to upper right is ``+1``.  A braid
letter ``s_i`` is a positive crossing of the strands in positions ``i`` and
``i + 1``; letters are read bottom to top.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import GroupWord
from .errors import BraidParseError, NonPureBraidError, PreconditionError
from .geometry import gauss_code_from_polylines

Arc = tuple[int, int]
Pass = tuple[int, bool]


# ---------------------------------------------------------------------------
# braids


@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strand_count < 1:
            raise PreconditionError("a braid needs at least one strand")
        for pos, sign in self.letters:
            if not 1 <= pos <= self.strand_count - 1:
                raise PreconditionError(
                    f"generator s{pos} out of range for {self.strand_count} strands")
            if sign not in (1, -1):
                raise PreconditionError(f"letter sign must be +-1, got {sign}")

    def permutation(self) -> tuple[int, ...]:
        """``perm[p]`` is the strand that ends in position ``p + 1``."""
        order = list(range(1, self.strand_count + 1))
        for pos, _ in self.letters:
            order[pos - 1], order[pos] = order[pos], order[pos - 1]
        return tuple(order)

    def is_pure(self) -> bool:
        return self.permutation() == tuple(range(1, self.strand_count + 1))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strand_count != self.strand_count:
            raise PreconditionError("braids on different numbers of strands")
        return BraidWord(self.strand_count, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strand_count,
                         tuple((p, -s) for p, s in reversed(self.letters)))

    def __str__(self) -> str:
        body = " ".join(f"s{p}" if s == 1 else f"s{p}^-1" for p, s in self.letters)
        return f"m={self.strand_count}: {body}".rstrip()


_HEADER = re.compile(r"\s*m\s*=\s*(\d+)\s*:")
_LETTER = re.compile(r"s(\d+)(?:\^(-?\d+))?")


def parse_braid(text: str) -> BraidWord:
    """Parse ``"m=<int>: s1 s2^-1 s1^3"`` into a :class:`BraidWord`.

    >>> parse_braid("m=2: s1^-2").letters
    ((1, -1), (1, -1))
    """
    head = _HEADER.match(text)
    if not head:
        raise BraidParseError("expected header 'm=<int>:'", 0)
    m = int(head.group(1))
    if m < 1:
        raise BraidParseError("strand count must be positive", head.start(1))
    letters: list[tuple[int, int]] = []
    pos = head.end()
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        tok = _LETTER.match(text, pos)
        if not tok or (tok.end() < n and not text[tok.end()].isspace()):
            raise BraidParseError(f"unexpected input {text[pos:pos + 8]!r}", pos)
        gen = int(tok.group(1))
        if not 1 <= gen <= m - 1:
            raise BraidParseError(f"generator s{gen} out of range 1..{m - 1}", pos)
        power = int(tok.group(2)) if tok.group(2) is not None else 1
        step = 1 if power > 0 else -1
        letters.extend([(gen, step)] * abs(power))
        pos = tok.end()
    return BraidWord(m, tuple(letters))


def insert_2n_move(b: BraidWord, position: int, n: int, sign: int = 1,
                   at: int | None = None) -> BraidWord:
    """Insert ``s_position ** (sign * 2n)`` at letter index ``at`` (default: append).

    The inserted full twists are a single 2n-move between the two parallel
    strands occupying those positions at that height.
    """
    if not 1 <= position <= b.strand_count - 1:
        raise PreconditionError(f"position {position} out of range 1..{b.strand_count - 1}")
    if n < 1 or sign not in (1, -1):
        raise PreconditionError("need n >= 1 and sign +-1")
    at = len(b.letters) if at is None else at
    if not 0 <= at <= len(b.letters):
        raise PreconditionError(f"insertion index {at} out of range")
    twist = ((position, sign),) * (2 * n)
    letters = b.letters[:at] + twist + b.letters[at:]
    # cancel s_i s_i^-1 pairs at the seams only, so a move undoing a move is trivial
    out: list[tuple[int, int]] = []
    for letter in letters:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return BraidWord(b.strand_count, tuple(out))


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class Crossing:
    over_arc: Arc
    under_in: Arc
    under_out: Arc
    sign: int


def _canonical(passes: Sequence[Sequence[Pass]], signs: Sequence[int]):
    """Renumber crossings by first appearance, components in order."""
    relabel: dict[int, int] = {}
    for comp in passes:
        for cid, _ in comp:
            if cid not in relabel:
                relabel[cid] = len(relabel)
    if len(relabel) != len(signs):
        raise PreconditionError("every crossing must be visited by some component")
    new_passes = tuple(tuple((relabel[c], bool(o)) for c, o in comp) for comp in passes)
    new_signs = [0] * len(signs)
    for old, new in relabel.items():
        new_signs[new] = int(signs[old])
    return new_passes, tuple(new_signs)


@dataclass(frozen=True)
class StringLinkDiagram:
    """m-component string-link diagram as a signed Gauss code.

    ``passes[i - 1]`` is the ordered tuple of ``(crossing_id, is_over)`` met
    by component ``i``; ``signs[c]`` is the sign of crossing ``c``.  Build
    instances with :meth:`from_gauss`, which validates and canonicalizes.
    """

    passes: tuple[tuple[Pass, ...], ...]
    signs: tuple[int, ...]

    @classmethod
    def from_gauss(cls, passes: Sequence[Sequence[Pass]], signs: Sequence[int]) -> "StringLinkDiagram":
        if not passes:
            raise PreconditionError("a string link needs at least one component")
        seen: dict[int, list[bool]] = {}
        for comp in passes:
            for cid, over in comp:
                if not 0 <= cid < len(signs):
                    raise PreconditionError(f"unknown crossing id {cid}")
                seen.setdefault(cid, []).append(bool(over))
        for cid, flags in seen.items():
            if sorted(flags) != [False, True]:
                raise PreconditionError(
                    f"crossing {cid} must be passed exactly once over and once under")
        if any(s not in (1, -1) for s in signs):
            raise PreconditionError("crossing signs must be +-1")
        p, s = _canonical(passes, signs)
        return cls(p, s)

    @classmethod
    def trivial(cls, m: int) -> "StringLinkDiagram":
        return cls(tuple(() for _ in range(m)), ())

    @property
    def component_count(self) -> int:
        return len(self.passes)

    @cached_property
    def _layout(self):
        """Arc of every pass and the per-crossing records."""
        over_arc: dict[int, Arc] = {}
        under: dict[int, tuple[Arc, Arc]] = {}
        arcs = []
        for i, comp in enumerate(self.passes, start=1):
            j = 1
            for cid, over in comp:
                if over:
                    over_arc[cid] = (i, j)
                else:
                    under[cid] = ((i, j), (i, j + 1))
                    j += 1
            arcs.append(j)
        crossings = tuple(
            Crossing(over_arc[c], under[c][0], under[c][1], self.signs[c])
            for c in range(len(self.signs)))
        return tuple(arcs), crossings

    @property
    def arcs_per_component(self) -> tuple[int, ...]:
        return self._layout[0]

    @property
    def crossings(self) -> tuple[Crossing, ...]:
        return self._layout[1]

    def component_of(self, cid: int) -> tuple[int, int]:
        """``(over component, under component)`` of crossing ``cid``."""
        c = self.crossings[cid]
        return c.over_arc[0], c.under_in[0]

    @property
    def self_writhe(self) -> tuple[int, ...]:
        out = [0] * self.component_count
        for c in self.crossings:
            if c.over_arc[0] == c.under_in[0]:
                out[c.over_arc[0] - 1] += c.sign
        return tuple(out)

    def self_crossings(self) -> list[int]:
        return [cid for cid, c in enumerate(self.crossings) if c.over_arc[0] == c.under_in[0]]

    def linking_number(self, i: int, j: int) -> int:
        """Half the signed count of crossings between components i and j."""
        if i == j:
            raise ValueError("linking number needs two distinct components")
        total = sum(c.sign for c in self.crossings
                    if {c.over_arc[0], c.under_in[0]} == {i, j})
        if total % 2:
            raise PreconditionError("odd signed crossing count between two components")
        return total // 2

    def to_json(self) -> dict:
        arcs = self.arcs_per_component
        return {
            "component_count": self.component_count,
            "components": [
                {"index": i, "arcs": arcs[i - 1],
                 "passes": [[cid, "over" if over else "under"] for cid, over in comp]}
                for i, comp in enumerate(self.passes, start=1)],
            "crossings": [
                {"id": cid, "over_arc": list(c.over_arc), "under_in": list(c.under_in),
                 "under_out": list(c.under_out), "sign": c.sign}
                for cid, c in enumerate(self.crossings)],
            "self_writhe": list(self.self_writhe),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "StringLinkDiagram":
        try:
            comps = sorted(data["components"], key=lambda c: c["index"])
            passes = []
            for comp in comps:
                row = []
                for cid, kind in comp["passes"]:
                    if kind not in ("over", "under"):
                        raise PreconditionError(f"pass kind must be over/under, got {kind!r}")
                    row.append((int(cid), kind == "over"))
                passes.append(row)
            by_id = {int(c["id"]): int(c["sign"]) for c in data["crossings"]}
            signs = [by_id[k] for k in range(len(by_id))]
        except (KeyError, TypeError) as exc:
            raise PreconditionError(f"malformed diagram JSON: {exc}") from None
        if data.get("component_count", len(passes)) != len(passes):
            raise PreconditionError("component_count disagrees with components")
        d = cls.from_gauss(passes, signs)
        # derived fields are optional, but must agree when given
        if "self_writhe" in data and list(data["self_writhe"]) != list(d.self_writhe):
            raise PreconditionError("self_writhe disagrees with the crossings")
        return d


def diagram_from_polylines(polylines: Sequence[Sequence[Sequence]]) -> StringLinkDiagram:
    """Project PL curves (see :mod:`milnorsl.geometry`) to a diagram."""
    passes, signs = gauss_code_from_polylines(polylines)
    return StringLinkDiagram.from_gauss(passes, signs)


def braid_to_diagram(b: BraidWord) -> StringLinkDiagram:
    if not b.is_pure():
        raise NonPureBraidError(
            f"braid permutation {b.permutation()} is not the identity; "
            "strands would not return to their endpoints")
    m = b.strand_count
    at_pos = list(range(1, m + 1))
    passes: list[list[Pass]] = [[] for _ in range(m)]
    signs = []
    for pos, sign in b.letters:
        left, right = at_pos[pos - 1], at_pos[pos]
        cid = len(signs)
        signs.append(sign)
        # positive letter: the left strand goes over, lower left to upper right
        passes[left - 1].append((cid, sign == 1))
        passes[right - 1].append((cid, sign == -1))
        at_pos[pos - 1], at_pos[pos] = right, left
    return StringLinkDiagram.from_gauss(passes, signs)


def braid_polylines(b: BraidWord) -> list[list[tuple]]:
    """PL realization of a pure braid; used to cross-check :func:`braid_to_diagram`."""
    from fractions import Fraction as F
    m = b.strand_count
    at_pos = list(range(1, m + 1))
    x = lambda p: 10 * p  # noqa: E731
    polys = {s: [(x(s), 0, 0)] for s in range(1, m + 1)}
    for t, (pos, sign) in enumerate(b.letters):
        left, right = at_pos[pos - 1], at_pos[pos]
        y0, y1 = t + F(1, 10), t + F(9, 10)
        for s in (left, right):
            p = at_pos.index(s) + 1
            q = p + 1 if s == left else p - 1
            z = 1 if (s == left) == (sign == 1) else -1
            polys[s] += [(x(p), y0, z), (x(q), y1, z)]
        at_pos[pos - 1], at_pos[pos] = right, left
    top = len(b.letters) + 1
    return [polys[s] + [(x(s), top, 0)] for s in range(1, m + 1)]


def winding_polylines(carrier: int, word: GroupWord, m: int) -> list[list[tuple]]:
    """Carrier strand clasps strand j once per letter alpha_j^e, with sign e.

    Each letter is an excursion: the carrier leaves its line, travels over
    the strands in between, crosses strand j, turns around it, crosses j
    again on the way back, and returns.  The two crossings with j have sign
    e and opposite over/under roles, so the excursion is a clasp of
    linking number e and the carrier never crosses itself.
    """
    xc = 10 * carrier
    path = [(xc, 0, 0)]
    y = 1
    for j, e in word.syllables():
        xj = 10 * j
        d = -1 if j < carrier else 1  # direction of travel
        z_out = e * d  # carrier height at the outbound crossing with j
        path += [
            (xc + d, y + 1, 1),
            (xj - 4 * d, y + 1, 1),
            (xj - 2 * d, y + 1, z_out),
            (xj + 2 * d, y + 1, z_out),
            (xj + 2 * d, y + 2, -z_out),
            (xj - 2 * d, y + 2, -z_out),
            (xj - 4 * d, y + 2, 1),
            (xc + d, y + 2, 1),
            (xc, y + 3, 0),
        ]
        y += 3
    top = y + 1
    path.append((xc, top, 0))
    return [path if i == carrier else [(10 * i, 0, 0), (10 * i, top, 0)]
            for i in range(1, m + 1)]


def winding_to_diagram(carrier: int, word: GroupWord, m: int) -> StringLinkDiagram:
    """String link in which only ``carrier`` moves, winding around the others by ``word``."""
    if m < 2:
        raise PreconditionError("winding needs at least two components")
    if not 1 <= carrier <= m:
        raise PreconditionError(f"carrier {carrier} out of range 1..{m}")
    gens = word.generators()
    if carrier in gens:
        raise PreconditionError(f"winding word mentions its own carrier a{carrier}")
    if any(not 1 <= g <= m for g in gens):
        raise PreconditionError(f"winding word uses a generator outside 1..{m}")
    return diagram_from_polylines(winding_polylines(carrier, word, m))


def stack(a: StringLinkDiagram, b: StringLinkDiagram) -> StringLinkDiagram:
    """``a * b``: ``b`` placed on top of ``a``."""
    if a.component_count != b.component_count:
        raise PreconditionError(
            f"cannot stack {a.component_count}- and {b.component_count}-component string links")
    shift = len(a.signs)
    passes = [pa + tuple((c + shift, o) for c, o in pb) for pa, pb in zip(a.passes, b.passes)]
    return StringLinkDiagram.from_gauss(passes, a.signs + b.signs)


def stack_all(diagrams: Iterable[StringLinkDiagram], m: int) -> StringLinkDiagram:
    out = StringLinkDiagram.trivial(m)
    for d in diagrams:
        out = stack(out, d)
    return out


def self_crossing_change(d: StringLinkDiagram, cid: int) -> StringLinkDiagram:
    """Switch a crossing of a component with itself (a link-homotopy move)."""
    if not 0 <= cid < len(d.signs):
        raise PreconditionError(f"no crossing {cid}")
    over, under = d.component_of(cid)
    if over != under:
        raise PreconditionError(
            f"crossing {cid} joins components {over} and {under}; "
            "changing it is not a link-homotopy move")
    passes = [tuple((c, (not o) if c == cid else o) for c, o in comp) for comp in d.passes]
    signs = list(d.signs)
    signs[cid] = -signs[cid]
    return StringLinkDiagram.from_gauss(passes, signs)
