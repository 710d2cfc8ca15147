"""Free-group words and degree-truncated noncommutative power series.

Series live in Z<<X_1, ..., X_m>> truncated by total degree.  A monomial
X_{j1} ... X_{jk} is the tuple ``(j1, ..., jk)``; the empty tuple is the
constant term.  Coefficients are Python ints, so nothing overflows.

A series may also be *non-repeating*: monomials in which some index occurs
twice are discarded.  Those monomials span a two-sided ideal, so products
stay consistent, and coefficients on non-repeated monomials are exact.
"""

from __future__ import annotations

from collections import defaultdict
from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import DegreeOverflowError

Monomial = tuple[int, ...]


def _is_repeated(mono: Monomial) -> bool:
    return len(set(mono)) != len(mono)


class GroupWord:
    """Freely reduced word in the generators alpha_1, ..., alpha_m.

    Letters are ``(generator, exponent)`` pairs with a nonzero exponent and
    no two neighbours on the same generator.

    >>> GroupWord([(1, 1), (2, 1)]) * GroupWord([(2, -1), (3, 1)])
    GroupWord([(1, 1), (3, 1)])
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        stack: list[list[int]] = []
        for gen, exp in letters:
            gen, exp = int(gen), int(exp)
            if gen < 1:
                raise ValueError(f"generator index must be >= 1, got {gen}")
            if exp == 0:
                continue
            if stack and stack[-1][0] == gen:
                stack[-1][1] += exp
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([gen, exp])
        self.letters: tuple[tuple[int, int], ...] = tuple((g, e) for g, e in stack)
        self._hash = hash(self.letters)

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "GroupWord":
        return cls([(index, exponent)])

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return word_multiply(self, other)

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        out = GroupWord()
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> "GroupWord":
        return word_inverse(self)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def syllables(self) -> Iterator[tuple[int, int]]:
        """Expand exponents into unit letters ``(generator, +-1)``."""
        for g, e in self.letters:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, step

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GroupWord({list(self.letters)!r})"

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"a{g}" if e == 1 else f"a{g}^{e}" for g, e in self.letters)


def word_multiply(u: GroupWord, v: GroupWord) -> GroupWord:
    return GroupWord(u.letters + v.letters)


def word_inverse(u: GroupWord) -> GroupWord:
    return GroupWord((g, -e) for g, e in reversed(u.letters))


def commutator(u: GroupWord, v: GroupWord) -> GroupWord:
    """``[u, v] = u v u^-1 v^-1``."""
    return u * v * u.inverse() * v.inverse()


# ---------------------------------------------------------------------------
# truncated series


def _by_degree(terms: Mapping[Monomial, int]) -> list[list[tuple[Monomial, int]]]:
    top = max((len(k) for k in terms), default=-1)
    out: list[list[tuple[Monomial, int]]] = [[] for _ in range(top + 1)]
    for k, c in terms.items():
        out[len(k)].append((k, c))
    return out


def mul_terms(
    a: Mapping[Monomial, int],
    b: Mapping[Monomial, int],
    bound: int,
    nonrepeating: bool = False,
) -> dict[Monomial, int]:
    """Product of two coefficient maps, dropping degrees above ``bound``."""
    out: dict[Monomial, int] = defaultdict(int)
    groups = _by_degree(b)
    for ka, ca in a.items():
        room = bound - len(ka)
        if room < 0:
            continue
        seen = set(ka) if nonrepeating and ka else None
        for deg in range(min(room, len(groups) - 1) + 1):
            for kb, cb in groups[deg]:
                if seen is not None and deg and not seen.isdisjoint(kb):
                    continue
                out[ka + kb] += ca * cb
    return {k: c for k, c in out.items() if c}


class TruncatedSeries:
    """Element of Z<<X_1..X_m>> modulo monomials of degree > ``degree_bound``.

    Immutable.  ``terms`` never stores zero coefficients or monomials beyond
    the bound (or repeated monomials, for a non-repeating series).
    """

    __slots__ = ("degree_bound", "terms", "nonrepeating")

    def __init__(
        self,
        terms: Mapping[Monomial, int] | None = None,
        degree_bound: int = 0,
        nonrepeating: bool = False,
    ):
        if degree_bound < 0:
            raise ValueError("degree_bound must be nonnegative")
        self.degree_bound = degree_bound
        self.nonrepeating = nonrepeating
        clean: dict[Monomial, int] = {}
        for k, c in (terms or {}).items():
            k = tuple(k)
            if c and len(k) <= degree_bound and not (nonrepeating and _is_repeated(k)):
                clean[k] = clean.get(k, 0) + int(c)
        self.terms: dict[Monomial, int] = {k: c for k, c in clean.items() if c}

    @classmethod
    def one(cls, degree_bound: int, nonrepeating: bool = False) -> "TruncatedSeries":
        return cls({(): 1}, degree_bound, nonrepeating)

    @classmethod
    def variable(cls, i: int, degree_bound: int, nonrepeating: bool = False) -> "TruncatedSeries":
        return cls({(i,): 1}, degree_bound, nonrepeating)

    def _coerce(self, other: "TruncatedSeries") -> tuple[int, bool]:
        return (min(self.degree_bound, other.degree_bound),
                self.nonrepeating or other.nonrepeating)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bound, nr = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return TruncatedSeries(terms, bound, nr)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({k: -c for k, c in self.terms.items()},
                               self.degree_bound, self.nonrepeating)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries | int") -> "TruncatedSeries":
        if isinstance(other, int):
            return TruncatedSeries({k: c * other for k, c in self.terms.items()},
                                   self.degree_bound, self.nonrepeating)
        bound, nr = self._coerce(other)
        return TruncatedSeries(mul_terms(self.terms, other.terms, bound, nr), bound, nr)

    __rmul__ = __mul__

    def coefficient(self, mono: Iterable[int]) -> int:
        return series_coefficient(self, tuple(mono))

    def truncate(self, degree_bound: int) -> "TruncatedSeries":
        return TruncatedSeries(self.terms, min(degree_bound, self.degree_bound), self.nonrepeating)

    def homogeneous(self, degree: int) -> dict[Monomial, int]:
        return {k: c for k, c in self.terms.items() if len(k) == degree}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.degree_bound == other.degree_bound
                and self.nonrepeating == other.nonrepeating
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.degree_bound, self.nonrepeating, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self}, degree_bound={self.degree_bound})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda t: (len(t), t)):
            c = self.terms[k]
            mono = "*".join(f"X{i}" for i in k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def series_coefficient(s: TruncatedSeries, mono: Monomial) -> int:
    if len(mono) > s.degree_bound:
        raise DegreeOverflowError(
            f"monomial of degree {len(mono)} exceeds the series bound {s.degree_bound}")
    return s.terms.get(tuple(mono), 0)


def series_mod(s: TruncatedSeries, n: int) -> TruncatedSeries:
    """Reduce every coefficient into ``[0, n)``."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return TruncatedSeries({k: c % n for k, c in s.terms.items()},
                           s.degree_bound, s.nonrepeating)


def letter_terms(gen: int, exp: int, bound: int) -> dict[Monomial, int]:
    """Coefficients of E(alpha_gen ** exp) = (1 + X_gen) ** exp up to ``bound``."""
    # generalized binomial: C(exp, k) also covers negative exponents
    out = {(): 1}
    for k in range(1, bound + 1):
        if exp >= 0:
            c = comb(exp, k)
        else:
            c = (-1) ** k * comb(-exp + k - 1, k)
        if c:
            out[(gen,) * k] = c
    return out


def magnus_expand(u: GroupWord, degree_bound: int, nonrepeating: bool = False) -> TruncatedSeries:
    """Magnus expansion alpha_i -> 1 + X_i, truncated at ``degree_bound``."""
    if degree_bound < 0:
        raise ValueError("degree_bound must be nonnegative")
    eff = min(degree_bound, 1) if nonrepeating else degree_bound
    terms: dict[Monomial, int] = {(): 1}
    for gen, exp in u.letters:
        terms = mul_terms(terms, letter_terms(gen, exp, eff), degree_bound, nonrepeating)
    return TruncatedSeries(terms, degree_bound, nonrepeating)
