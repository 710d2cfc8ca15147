"""Milnor's algorithm for mu-invariants of string links.

Every arc generator is rewritten in terms of the bottom meridians by the
tower of substitutions eta_q.  The tower is never expanded as group words;
it is evaluated on Magnus images, where one step is

    E(a_{i,j+1}) = E(v_ij)^-1 (1 + X_i) E(v_ij),   v_ij = u_i1 ... u_ij,

with ``u_ij = b ** sign`` for the over arc ``b`` of the crossing that ends
arc ``(i, j)``.  Coefficients of degree below q are exact at depth q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import Monomial, TruncatedSeries, letter_terms, mul_terms
from .diagram import Arc, StringLinkDiagram
from .errors import PreconditionError

Terms = dict[Monomial, int]


@dataclass(frozen=True)
class WirtingerData:
    """Per component, the letters ``u_ij`` as ``(over arc, exponent)``."""

    component_count: int
    letters: tuple[tuple[tuple[Arc, int], ...], ...]
    self_writhe: tuple[int, ...]

    def prefix(self, i: int, j: int) -> tuple[tuple[Arc, int], ...]:
        """Letters of ``v_ij = u_i1 ... u_ij``."""
        return self.letters[i - 1][:j]


def wirtinger(d: StringLinkDiagram) -> WirtingerData:
    """Relations ``a_{i,j+1} = u^-1 a_ij u`` with ``u = (over arc) ** sign``."""
    rows: list[list[tuple[Arc, int]]] = [[] for _ in range(d.component_count)]
    for c in sorted(d.crossings, key=lambda c: c.under_in):
        rows[c.under_in[0] - 1].append((c.over_arc, c.sign))
    for i, row in enumerate(rows, start=1):
        if len(row) != d.arcs_per_component[i - 1] - 1:
            raise PreconditionError(f"component {i}: arcs and undercrossings disagree")
    return WirtingerData(d.component_count, tuple(tuple(r) for r in rows), d.self_writhe)


@dataclass(frozen=True)
class EtaTable:
    """Magnus images of every arc under eta_q, and of their inverses."""

    depth: int
    degree_bound: int
    nonrepeating: bool
    forward: dict
    backward: dict

    def series(self, arc: Arc, exponent: int = 1) -> TruncatedSeries:
        terms = self.forward[arc] if exponent == 1 else self.backward[arc]
        return TruncatedSeries(terms, self.degree_bound, self.nonrepeating)


def _meridian(i: int, bound: int, nonrepeating: bool) -> tuple[Terms, Terms]:
    inv = letter_terms(i, -1, min(bound, 1) if nonrepeating else bound)
    return ({(): 1, (i,): 1} if bound >= 1 else {(): 1}), inv


def _shift_by_variable(i: int, v: Terms, bound: int, nonrepeating: bool,
                       inverse: bool) -> Terms:
    """``X_i * v`` or, with ``inverse``, ``((1 + X_i)^-1 - 1) * v``."""
    out: Terms = {}
    top = 1 if (nonrepeating or not inverse) else bound
    for k in range(1, top + 1):
        coeff = (-1) ** k if inverse else 1
        head = (i,) * k
        for mono, c in v.items():
            if len(mono) + k > bound or (nonrepeating and i in mono):
                continue
            key = head + mono
            out[key] = out.get(key, 0) + coeff * c
    return out


def _add_one(t: Terms) -> Terms:
    t = dict(t)
    t[()] = t.get((), 0) + 1
    if not t[()]:
        del t[()]
    return t


def eta_table(w: WirtingerData, q: int, degree_bound: int | None = None,
              nonrepeating: bool = False) -> EtaTable:
    """Iterate the substitution from eta_1 up to eta_q.

    Series are truncated at ``degree_bound`` (default ``q``).  During step
    ``t`` only degrees ``<= t`` can influence later steps, so each step is
    truncated at ``min(t, degree_bound)``.
    """
    if q < 1:
        raise PreconditionError("eta depth must be at least 1")
    bound_final = q if degree_bound is None else degree_bound
    arcs = [(i, j) for i in range(1, w.component_count + 1)
            for j in range(1, len(w.letters[i - 1]) + 2)]
    b1 = min(1, bound_final)
    cur = {arc: _meridian(arc[0], b1, nonrepeating) for arc in arcs}
    for t in range(2, q + 1):
        bound = min(t, bound_final)
        new = {}
        for i in range(1, w.component_count + 1):
            first = _meridian(i, bound, nonrepeating)
            new[(i, 1)] = first
            v: Terms = {(): 1}
            v_inv: Terms = {(): 1}
            for j, (b, e) in enumerate(w.letters[i - 1], start=1):
                fwd, bwd = cur[b]
                if e == 1:
                    v, v_inv = (mul_terms(v, fwd, bound - 1, nonrepeating),
                                mul_terms(bwd, v_inv, bound - 1, nonrepeating))
                else:
                    v, v_inv = (mul_terms(v, bwd, bound - 1, nonrepeating),
                                mul_terms(fwd, v_inv, bound - 1, nonrepeating))
                xv = _shift_by_variable(i, v, bound, nonrepeating, inverse=False)
                gv = _shift_by_variable(i, v, bound, nonrepeating, inverse=True)
                new[(i, j + 1)] = (_add_one(mul_terms(v_inv, xv, bound, nonrepeating)),
                                   _add_one(mul_terms(v_inv, gv, bound, nonrepeating)))
        cur = new
    if q == 1 and bound_final > 1:
        cur = {arc: _meridian(arc[0], bound_final, nonrepeating) for arc in arcs}
    return EtaTable(q, bound_final, nonrepeating,
                    {a: f for a, (f, _) in cur.items()},
                    {a: g for a, (_, g) in cur.items()})


def _longitude_terms(w: WirtingerData, table: EtaTable, i: int) -> Terms:
    bound, nr = table.degree_bound, table.nonrepeating
    s = -w.self_writhe[i - 1]  # zero framing
    out = letter_terms(i, s, min(bound, 1) if nr else bound) if s else {(): 1}
    for b, e in w.letters[i - 1]:
        out = mul_terms(out, table.forward[b] if e == 1 else table.backward[b], bound, nr)
    return out


@lru_cache(maxsize=256)
def _longitudes(d: StringLinkDiagram, q: int, bound: int,
                nonrepeating: bool) -> tuple[TruncatedSeries, ...]:
    w = wirtinger(d)
    table = eta_table(w, q, bound, nonrepeating)
    return tuple(TruncatedSeries(_longitude_terms(w, table, i), bound, nonrepeating)
                 for i in range(1, d.component_count + 1))


def longitude_series(d: StringLinkDiagram, i: int, q: int,
                     nonrepeating: bool = False) -> TruncatedSeries:
    """E(phi eta_q(l_i)) for the zero-framed longitude, truncated at ``q - 1``."""
    if q < 2:
        raise PreconditionError("longitude depth must be at least 2")
    if not 1 <= i <= d.component_count:
        raise PreconditionError(f"component {i} out of range")
    return _longitudes(d, q, q - 1, nonrepeating)[i - 1]


# ---------------------------------------------------------------------------
# invariants


def parse_sequence(text: str | Iterable[int]) -> tuple[int, ...]:
    """``"112"``, ``"1,1,2"``, ``"1 1 2"`` or an iterable of ints."""
    if isinstance(text, str):
        t = text.strip()
        parts = t.replace(",", " ").split() if ("," in t or " " in t) else list(t)
        try:
            seq = tuple(int(p) for p in parts)
        except ValueError:
            raise PreconditionError(f"bad index sequence {text!r}") from None
    else:
        seq = tuple(int(x) for x in text)
    if not seq:
        raise PreconditionError("index sequence must be nonempty")
    return seq


def is_non_repeated(seq: Sequence[int]) -> bool:
    return len(set(seq)) == len(seq)


def _check_indices(d: StringLinkDiagram, seq: Sequence[int]) -> None:
    m = d.component_count
    if any(not 1 <= x <= m for x in seq):
        raise PreconditionError(f"sequence {seq} has an index outside 1..{m}")


def mu(d: StringLinkDiagram, seq: str | Sequence[int]) -> int:
    """mu(j_1 ... j_k i): coefficient of X_j1 ... X_jk in E(lambda_i)."""
    seq = parse_sequence(seq)
    _check_indices(d, seq)
    if len(seq) == 1:
        return 0
    L = len(seq)
    longitude = _longitudes(d, L, L - 1, is_non_repeated(seq))[seq[-1] - 1]
    return longitude.coefficient(seq[:-1])


@dataclass(frozen=True)
class MilnorTable:
    component_count: int
    max_length: int
    non_repeated_only: bool
    entries: dict

    def __getitem__(self, seq) -> int:
        key = parse_sequence(seq)
        if key not in self.entries:
            raise PreconditionError(f"sequence {key} is not in the table")
        return self.entries[key]

    def __contains__(self, seq) -> bool:
        return parse_sequence(seq) in self.entries

    def nonzero(self) -> dict:
        return {k: v for k, v in self.entries.items() if v}

    def to_json(self) -> list[dict]:
        return [{"sequence": list(k), "value": str(v)}
                for k, v in sorted(self.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))]


def sequences(m: int, max_length: int, non_repeated_only: bool,
              min_length: int = 1) -> Iterable[tuple[int, ...]]:
    for length in range(min_length, max_length + 1):
        if non_repeated_only:
            yield from itertools.permutations(range(1, m + 1), length)
        else:
            yield from itertools.product(range(1, m + 1), repeat=length)


def mu_table(d: StringLinkDiagram, max_length: int,
             non_repeated_only: bool = False) -> MilnorTable:
    """All mu up to ``max_length`` from a single eta table."""
    m = d.component_count
    if max_length < 1:
        raise PreconditionError("max_length must be at least 1")
    if non_repeated_only and max_length > m:
        raise PreconditionError(f"non-repeated sequences have length at most {m}")
    entries: dict[tuple[int, ...], int] = {}
    longs = (_longitudes(d, max_length, max_length - 1, non_repeated_only)
             if max_length >= 2 else None)
    for seq in sequences(m, max_length, non_repeated_only):
        if len(seq) == 1:
            entries[seq] = 0
        else:
            entries[seq] = longs[seq[-1] - 1].terms.get(seq[:-1], 0)
    return MilnorTable(m, max_length, non_repeated_only, entries)


def reduced_sequences(seq: Sequence[int]) -> set[tuple[int, ...]]:
    """Sequences made by deleting at least one index, then rotating cyclically."""
    seq = tuple(seq)
    out = set()
    for r in range(1, len(seq)):
        for keep in itertools.combinations(range(len(seq)), r):
            sub = tuple(seq[k] for k in keep)
            for s in range(len(sub)):
                out.add(sub[s:] + sub[:s])
    return out


def delta(t: MilnorTable, seq: str | Sequence[int]) -> int:
    """gcd of mu over :func:`reduced_sequences`; the gcd of nothing is 0."""
    seq = parse_sequence(seq)
    values = []
    for sub in sorted(reduced_sequences(seq)):
        if sub not in t.entries:
            raise PreconditionError(f"table lacks mu{sub}, needed for Delta{seq}")
        values.append(t.entries[sub])
    return math.gcd(*values)


def residue(value: int, modulus: int) -> int:
    """``value mod modulus``, where modulus 0 leaves the integer as is."""
    return value % modulus if modulus else value


def link_invariants(d: StringLinkDiagram, seq: str | Sequence[int],
                    n: int) -> tuple[int, int]:
    """``(gcd(Delta(I), n), mu(I) mod that gcd)`` for the closure of ``d``."""
    if n < 1:
        raise PreconditionError("n must be positive")
    seq = parse_sequence(seq)
    _check_indices(d, seq)
    table = mu_table(d, len(seq), is_non_repeated(seq))
    dn = math.gcd(delta(table, seq), n)
    return dn, residue(table.entries[seq], dn)
