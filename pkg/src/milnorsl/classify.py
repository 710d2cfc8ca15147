"""String links up to 2n-moves and link-homotopy.

Classes are described by canonical forms: one exponent ``y`` in ``[0, n)``
per injection ``pi`` in F_k (``2 <= k <= m``), where F_k holds the
injections ``pi: {1..k} -> {1..m}`` with ``pi(i) < pi(k-1) < pi(k)`` for
``i <= k - 2``.  The representative of a form is the stacked product of the
generators ``V_pi ** y`` level by level.

``V_pi`` is realized by letting strand ``pi(k)`` wind around the others by
the right-normed commutator ``[a_pi(1), [a_pi(2), ..., [a_pi(k-2), a_pi(k-1)]]]``.
Its only nonzero non-repeated invariant of length ``k`` on the canonical
sequences is ``mu(pi(1) ... pi(k)) = 1``; this is checked, not assumed, by
:func:`generator_matrix`.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

from .algebra import GroupWord
from .diagram import StringLinkDiagram, stack, stack_all, winding_to_diagram
from .errors import InconsistencyError, PreconditionError, TheoremInapplicableError
from .milnor import MilnorTable, delta, mu_table, residue

log = logging.getLogger(__name__)

Injection = tuple[int, ...]

CACHE_VERSION = 1


def enumerate_F(m: int, k: int) -> list[Injection]:
    """F_k for m strands, sorted by ``(pi(k), pi(k-1), pi(1..k-2))``."""
    if not 2 <= k <= m:
        raise PreconditionError(f"need 2 <= k <= m, got k={k}, m={m}")
    out = []
    for last in range(1, m + 1):
        for second in range(1, last):
            for rest in itertools.permutations(range(1, second), k - 2):
                out.append(rest + (second, last))
    return sorted(out, key=lambda p: (p[-1], p[-2], p[:-2]))


def is_injection_in_F(pi: Sequence[int], m: int) -> bool:
    k = len(pi)
    return (2 <= k <= m and len(set(pi)) == k and all(1 <= x <= m for x in pi)
            and all(x < pi[-2] for x in pi[:-2]) and pi[-2] < pi[-1])


def s_value(m: int) -> int:
    """Sum over r = 2..m of (r-2)! * C(m, r): the number of canonical exponents."""
    if m < 1:
        raise PreconditionError("m must be positive")
    return sum(math.factorial(r - 2) * math.comb(m, r) for r in range(2, m + 1))


def canonical_sequences(m: int) -> list[Injection]:
    return [pi for k in range(2, m + 1) for pi in enumerate_F(m, k)]


# ---------------------------------------------------------------------------
# generators


def generator_word(pi: Injection) -> GroupWord:
    a = [GroupWord.generator(x) for x in pi[:-1]]
    word = a[-1]
    for g in reversed(a[:-1]):
        word = g * word * g.inverse() * word.inverse()
    return word


def generator_V(pi: Sequence[int], m: int, power: int = 1) -> StringLinkDiagram:
    """``V_pi ** power``; negative powers wind by the inverse word."""
    pi = tuple(pi)
    if not is_injection_in_F(pi, m):
        raise PreconditionError(f"{pi} is not in F_{len(pi)} for m={m}")
    return winding_to_diagram(pi[-1], generator_word(pi) ** power, m)


@dataclass(frozen=True)
class GeneratorMatrix:
    """``matrix[r][c] = mu_{V_pi_c}(pi_r)`` over F_{k+1}."""

    m: int
    k: int
    injections: tuple[Injection, ...]
    matrix: tuple[tuple[int, ...], ...]

    def determinant(self) -> int:
        import sympy
        return int(sympy.Matrix(self.matrix).det())

    def solve(self, rhs: Sequence[int]) -> list[int]:
        """Integer solution of ``matrix @ x = rhs``."""
        if all(self.matrix[r][c] == (r == c) for r in range(len(self.matrix))
               for c in range(len(self.matrix))):
            return [int(v) for v in rhs]
        import sympy
        sol = sympy.Matrix(self.matrix).LUsolve(sympy.Matrix(list(rhs)))
        if any(not v.is_integer for v in sol):
            raise InconsistencyError("generator system has no integer solution")
        return [int(v) for v in sol]

    def to_json(self) -> dict:
        return {"version": CACHE_VERSION, "m": self.m, "k": self.k,
                "injections": [list(p) for p in self.injections],
                "matrix": [list(r) for r in self.matrix]}


def _cache_path(m: int, k: int) -> Path | None:
    root = os.environ.get("MILNOR_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"generator-matrix-v{CACHE_VERSION}-m{m}-k{k}.json"


def _load_cached(m: int, k: int) -> GeneratorMatrix | None:
    path = _cache_path(m, k)
    if path is None or not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        if data.get("version") != CACHE_VERSION or (data["m"], data["k"]) != (m, k):
            return None
        gm = GeneratorMatrix(m, k, tuple(tuple(p) for p in data["injections"]),
                             tuple(tuple(r) for r in data["matrix"]))
    except (OSError, ValueError, KeyError):
        log.warning("ignoring unreadable generator cache %s", path)
        return None
    if list(gm.injections) != enumerate_F(m, k + 1):
        return None
    return gm


def _store_cached(gm: GeneratorMatrix) -> None:
    path = _cache_path(gm.m, gm.k)
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(gm.to_json(), sort_keys=True))
        tmp.replace(path)
    except OSError:
        log.warning("could not write generator cache %s", path)


@lru_cache(maxsize=None)
def generator_matrix(m: int, k: int) -> GeneratorMatrix:
    """Invariants of the level-k generators on the level-k canonical sequences."""
    if not 1 <= k <= m - 1:
        raise PreconditionError(f"need 1 <= k <= m - 1, got k={k}, m={m}")
    gm = _load_cached(m, k)
    if gm is None:
        inj = enumerate_F(m, k + 1)
        cols = []
        for pi in inj:
            table = mu_table(generator_V(pi, m), k + 1, non_repeated_only=True)
            cols.append([table.entries[p] for p in inj])
        rows = tuple(tuple(cols[c][r] for c in range(len(inj))) for r in range(len(inj)))
        gm = GeneratorMatrix(m, k, tuple(inj), rows)
        log.info("built generator matrix for m=%d, k=%d (%d generators)", m, k, len(inj))
        _store_cached(gm)
    if abs(gm.determinant()) != 1:
        raise InconsistencyError(
            f"generator matrix for m={m}, k={k} is not unimodular (det {gm.determinant()})")
    return gm


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalForm:
    m: int
    n: int
    exponents: tuple[tuple[Injection, int], ...]

    def __post_init__(self):
        if [p for p, _ in self.exponents] != canonical_sequences(self.m):
            raise PreconditionError("exponents must cover F_2..F_m in canonical order")
        if any(not 0 <= y < self.n for _, y in self.exponents):
            raise PreconditionError(f"exponents must lie in [0, {self.n})")

    @classmethod
    def from_values(cls, m: int, n: int, values: Sequence[int]) -> "CanonicalForm":
        seqs = canonical_sequences(m)
        if len(values) != len(seqs):
            raise PreconditionError(f"expected {len(seqs)} exponents, got {len(values)}")
        return cls(m, n, tuple((p, int(y) % n) for p, y in zip(seqs, values)))

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(y for _, y in self.exponents)

    def __getitem__(self, pi: Sequence[int]) -> int:
        return dict(self.exponents)[tuple(pi)]

    def is_identity(self) -> bool:
        return not any(self.values)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "exponents": [{"pi": list(p), "y": y} for p, y in self.exponents]}

    @classmethod
    def from_json(cls, data: dict) -> "CanonicalForm":
        return cls(int(data["m"]), int(data["n"]),
                   tuple((tuple(e["pi"]), int(e["y"])) for e in data["exponents"]))

    def __str__(self) -> str:
        body = ", ".join(f"{''.join(map(str, p))}:{y}" for p, y in self.exponents)
        return f"[m={self.m}, n={self.n}] {body}"


def identity_form(m: int, n: int) -> CanonicalForm:
    return CanonicalForm.from_values(m, n, [0] * s_value(m))


def _factors(f: CanonicalForm, sign: int = 1) -> list[StringLinkDiagram]:
    return [generator_V(p, f.m, sign * y) for p, y in f.exponents if y]


def representative(f: CanonicalForm) -> StringLinkDiagram:
    """tau_1 * ... * tau_{m-1} with tau_k = prod over F_{k+1} of V_pi ** y_pi."""
    return stack_all(_factors(f), f.m)


def inverse_representative(f: CanonicalForm) -> StringLinkDiagram:
    return stack_all(reversed(_factors(f, -1)), f.m)


def _check_n(n: int) -> None:
    if n < 1:
        raise PreconditionError("n must be a positive integer")


def canonical_form(d: StringLinkDiagram, n: int, verify: bool = True) -> CanonicalForm:
    """Exponents y_pi of the canonical representative of the class of ``d``.

    Level by level, solve for the exponents that make the running product
    match ``d`` on the level's sequences, reduce them mod ``n``, and append
    the corresponding generators.
    """
    _check_n(n)
    m = d.component_count
    if m < 2:
        return CanonicalForm(m, n, ())
    target = mu_table(d, m, non_repeated_only=True)
    partial = StringLinkDiagram.trivial(m)
    values: list[int] = []
    for k in range(1, m):
        gm = generator_matrix(m, k)
        current = mu_table(partial, k + 1, non_repeated_only=True)
        defect = [target.entries[p] - current.entries[p] for p in gm.injections]
        ys = [x % n for x in gm.solve(defect)]
        values.extend(ys)
        factors = [generator_V(p, m, y) for p, y in zip(gm.injections, ys) if y]
        partial = stack_all([partial, *factors], m)
    form = CanonicalForm.from_values(m, n, values)
    if verify:
        rep = mu_table(partial, m, non_repeated_only=True)
        bad = _first_mismatch(target, rep, n, canonical_sequences(m))
        if bad is not None:
            raise InconsistencyError(
                f"representative disagrees with input on mu{bad} modulo {n}")
    return form


def _first_mismatch(a: MilnorTable, b: MilnorTable, n: int, seqs) -> tuple | None:
    for s in seqs:
        if (a.entries[s] - b.entries[s]) % n:
            return s
    return None


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def equivalent_2n_lh(a: StringLinkDiagram, b: StringLinkDiagram, n: int) -> Verdict:
    """Decide (2n+lh)-equivalence; on failure name a separating sequence."""
    _check_n(n)
    if a.component_count != b.component_count:
        raise PreconditionError("string links have different numbers of components")
    m = a.component_count
    if canonical_form(a, n) == canonical_form(b, n):
        return Verdict(True)
    ta = mu_table(a, m, non_repeated_only=True)
    tb = mu_table(b, m, non_repeated_only=True)
    witness = _first_mismatch(ta, tb, n, canonical_sequences(m))
    if witness is None:
        raise InconsistencyError("canonical forms differ but no invariant separates them")
    return Verdict(False, witness)


def _same_group(f: CanonicalForm, g: CanonicalForm) -> None:
    if (f.m, f.n) != (g.m, g.n):
        raise PreconditionError(f"forms live in different groups: {(f.m, f.n)} vs {(g.m, g.n)}")


def class_multiply(f: CanonicalForm, g: CanonicalForm) -> CanonicalForm:
    _same_group(f, g)
    return canonical_form(stack(representative(f), representative(g)), f.n)


def class_inverse(f: CanonicalForm) -> CanonicalForm:
    return canonical_form(inverse_representative(f), f.n)


def class_power(f: CanonicalForm, e: int) -> CanonicalForm:
    base = f if e >= 0 else class_inverse(f)
    out = identity_form(f.m, f.n)
    for _ in range(abs(e)):
        out = class_multiply(out, base)
    return out


def group_order(m: int, n: int) -> int:
    _check_n(n)
    return n ** s_value(m)


def enumerate_group(m: int, n: int, limit: int = 10 ** 4) -> Iterator[CanonicalForm]:
    """Every canonical form for ``(m, n)``, in lexicographic exponent order."""
    order = group_order(m, n)
    if order > limit:
        raise PreconditionError(f"group of order {order} exceeds the enumeration limit {limit}")
    for values in itertools.product(range(n), repeat=s_value(m)):
        yield CanonicalForm.from_values(m, n, values)


def generator_form(pi: Sequence[int], m: int, n: int) -> CanonicalForm:
    return canonical_form(generator_V(pi, m), n)


def element_order(f: CanonicalForm) -> int:
    cur, k = f, 1
    while not cur.is_identity():
        cur = class_multiply(cur, f)
        k += 1
        if k > group_order(f.m, f.n):
            raise InconsistencyError("element order exceeds the group order")
    return k


# ---------------------------------------------------------------------------
# links


@dataclass(frozen=True)
class LinkReport:
    """Per non-repeated length-m sequence: ``(Delta^(n), mu-bar^(n), mu)``."""

    n: int
    values: dict

    def failures(self) -> dict:
        return {s: v for s, v in self.values.items() if v[0] != self.n or v[1] != 0}

    def to_json(self) -> list[dict]:
        return [{"sequence": list(s), "delta": str(dn), "mu_bar": str(mb)}
                for s, (dn, mb, _) in sorted(self.values.items())]


def link_report(d: StringLinkDiagram, n: int) -> LinkReport:
    """Delta^(n) and mu-bar^(n) of the closure on every non-repeated length-m sequence."""
    _check_n(n)
    m = d.component_count
    table = mu_table(d, m, non_repeated_only=True)
    out = {}
    for seq in itertools.permutations(range(1, m + 1), m):
        dn = math.gcd(delta(table, seq) if m > 1 else 0, n)
        out[seq] = (dn, residue(table.entries[seq], dn), table.entries[seq])
    return LinkReport(n, out)


def link_trivial_2n_lh(d: StringLinkDiagram, n: int) -> tuple[bool, LinkReport]:
    """Is the closure (2n+lh)-equivalent to the trivial link?"""
    report = link_report(d, n)
    return not report.failures(), report


def link_equivalent_2n_lh(a: StringLinkDiagram, b: StringLinkDiagram, n: int) -> bool:
    """Compare closures whose Delta^(n) equals n on every length-m sequence."""
    if a.component_count != b.component_count:
        raise PreconditionError("links have different numbers of components")
    ra, rb = link_report(a, n), link_report(b, n)
    for name, rep in (("first", ra), ("second", rb)):
        for seq, (dn, _, _) in rep.values.items():
            if dn != n:
                raise TheoremInapplicableError(
                    f"{name} link has Delta^({n}){seq} = {dn} != {n}", seq)
    return all(ra.values[s][1] == rb.values[s][1] for s in ra.values)
