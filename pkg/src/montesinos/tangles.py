"""
Rational tangles and length-3 Montesinos knots.

A knot K(p1/q1, p2/q2, p3/q3) is stored with each slope reduced to its
fractional part (2|p| <= q) and the removed integers collected in ``e0``.
All arithmetic is exact; slopes are ``fractions.Fraction``.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction


class TangleError(ValueError):
    """Raised for invalid tangle or knot input."""


class Parity(enum.Enum):
    ZERO = "0"
    ONE = "1"
    INFINITY = "inf"


# Endpoint pairings of a tangle, keyed by parity.
PAIRINGS = {
    Parity.ZERO: (("Lt", "Rt"), ("Lb", "Rb")),
    Parity.ONE: (("Lt", "Rb"), ("Lb", "Rt")),
    Parity.INFINITY: (("Lt", "Lb"), ("Rt", "Rb")),
}


def _check_coprime(p: int, q: int) -> None:
    if q < 2:
        raise TangleError(f"denominator must be >= 2, got {q}")
    if gcd(p, q) != 1:
        raise TangleError(f"{p}/{q} is not in lowest terms")


def mod_inverse_min_abs(p: int, q: int) -> int:
    """Return pbar with p*pbar = -1 (mod q) and 2|pbar| <= q.

    When q = 2 both +1 and -1 qualify and +1 is returned.

    >>> mod_inverse_min_abs(1, 3)
    -1
    >>> mod_inverse_min_abs(5, 7)
    -3
    """
    _check_coprime(p, q)
    r = pow(-p % q, -1, q)
    if 2 * r > q:
        r -= q
    return r


def parity_type(p: int, q: int) -> Parity:
    if q % 2 == 0:
        return Parity.INFINITY
    return Parity.ONE if p % 2 else Parity.ZERO


def _reduce_mod(p: int, q: int) -> tuple[int, int]:
    """Split p/q as shift + r/q with r in (-q/2, q/2]."""
    r = p % q
    if 2 * r > q:
        r -= q
    return r, (p - r) // q


@dataclass(frozen=True)
class RationalTangle:
    p: int
    q: int
    pbar: int = field(init=False, repr=False, compare=False)
    parity: Parity = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_coprime(self.p, self.q)
        object.__setattr__(self, "pbar", mod_inverse_min_abs(self.p, self.q))
        object.__setattr__(self, "parity", parity_type(self.p, self.q))

    @property
    def slope(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def pbar_abs(self) -> int:
        return abs(self.pbar)

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class MontesinosKnot:
    """Three tangles in cyclic order plus an absorbed integer ``e0``.

    Tangle order is kept as given; :func:`normalize` additionally sorts.
    """

    tangles: tuple[RationalTangle, RationalTangle, RationalTangle]
    e0: int = 0

    def __post_init__(self):
        if len(self.tangles) != 3:
            raise TangleError("a length-3 Montesinos knot needs exactly three tangles")

    @property
    def qs(self) -> tuple[int, int, int]:
        return tuple(t.q for t in self.tangles)

    @property
    def profile(self) -> tuple[tuple[int, int], ...]:
        """(q_i, |pbar_i|) per tangle: everything the angle system reads."""
        return tuple((t.q, t.pbar_abs) for t in self.tangles)

    def slopes(self) -> tuple[Fraction, Fraction, Fraction]:
        """Slopes with e0 folded into the last tangle."""
        s = [t.slope for t in self.tangles]
        s[-1] += self.e0
        return tuple(s)

    def literal(self) -> str:
        return "K(" + ", ".join(f"{s.numerator}/{s.denominator}" for s in self.slopes()) + ")"

    def to_json(self) -> dict:
        return {"tangles": [[t.p, t.q] for t in self.tangles], "e0": self.e0}

    def sort_key(self) -> tuple:
        return tuple((t.q, t.p) for t in self.tangles) + (self.e0,)

    def __str__(self):
        return self.literal()


@dataclass(frozen=True)
class PartialFractionForm:
    """p/q = n + s_outer / (2 + s_inner / m)."""

    n: int
    m: int
    signs: tuple[int, int]
    reconstructed: Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(*x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TangleError(f"cannot read {x!r} as a rational")


def _canonical_tangles(fracs: Iterable) -> tuple[list[RationalTangle], int]:
    tangles, e0 = [], 0
    for x in fracs:
        f = _as_fraction(x)
        if f.denominator < 2:
            raise TangleError(f"trivial tangle {f} (denominator {f.denominator})")
        r, shift = _reduce_mod(f.numerator, f.denominator)
        tangles.append(RationalTangle(r, f.denominator))
        e0 += shift
    return tangles, e0


def knot(*fracs, e0: int = 0) -> MontesinosKnot:
    """Build a knot keeping the tangle order; slopes are reduced to 2|p| <= q."""
    if len(fracs) == 1 and not isinstance(fracs[0], (str, int, Fraction)):
        fracs = tuple(fracs[0])
    tangles, shift = _canonical_tangles(fracs)
    if len(tangles) != 3:
        raise TangleError(f"expected three slopes, got {len(tangles)}")
    return MontesinosKnot(tuple(tangles), e0 + shift)


def normalize(fracs: Sequence, e0: int = 0) -> MontesinosKnot:
    """Canonical form: fractional parts with 2|p| <= q, sorted by (q, p)."""
    k = knot(*fracs, e0=e0) if not isinstance(fracs, MontesinosKnot) else fracs
    return MontesinosKnot(tuple(sorted(k.tangles, key=lambda t: (t.q, t.p))), k.e0)


def mirror(k: MontesinosKnot) -> MontesinosKnot:
    """Mirror image: negate every slope and e0, then re-reduce (order kept)."""
    return knot(*(-t.slope for t in k.tangles), e0=-k.e0)


def permute(k: MontesinosKnot, perm: Sequence[int]) -> MontesinosKnot:
    if sorted(perm) != [0, 1, 2]:
        raise TangleError(f"not a permutation of three tangles: {perm}")
    return MontesinosKnot(tuple(k.tangles[i] for i in perm), k.e0)


def orbit(k: MontesinosKnot) -> list[MontesinosKnot]:
    """The 12 permutation/mirror images of ``k`` (duplicates kept)."""
    out = []
    for base in (k, mirror(k)):
        for perm in itertools.permutations(range(3)):
            out.append(permute(base, perm))
    return out


def orbit_key(k: MontesinosKnot) -> tuple:
    """Deduplication key of a knot class.

    Sorted tangles with e0 taken mod 2: the parity of e0 is all that
    knottedness sees, and the angle system ignores e0 entirely.
    """
    s = normalize(k)
    return tuple((t.q, -t.p) for t in s.tangles) + (s.e0 % 2,)


def orbit_representative(k: MontesinosKnot) -> MontesinosKnot:
    """Sorted image with minimal :func:`orbit_key`, e0 reduced to 0 or 1."""
    best = min((normalize(k), normalize(mirror(k))), key=orbit_key)
    return MontesinosKnot(best.tangles, best.e0 % 2)


def component_count(k: MontesinosKnot) -> int:
    """Number of components of the cyclic closure.

    Endpoints Lt, Lb, Rt, Rb of each tangle are paired according to its
    parity, then glued Rt(i)~Lt(i+1) and Rb(i)~Lb(i+1) cyclically.  An odd
    e0 contributes one extra crossed (parity 1) integer tangle.
    """
    parities = [t.parity for t in k.tangles]
    if k.e0 % 2:
        parities.append(Parity.ONE)
    n = len(parities)
    adj: dict[tuple[int, str], list[tuple[int, str]]] = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for i, par in enumerate(parities):
        for x, y in PAIRINGS[par]:
            link((i, x), (i, y))
        link((i, "Rt"), ((i + 1) % n, "Lt"))
        link((i, "Rb"), ((i + 1) % n, "Lb"))

    seen, count = set(), 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v])
    return count


def is_knot(k: MontesinosKnot) -> bool:
    return component_count(k) == 1


def sum_condition(k) -> bool:
    """sum 1/(q_i - 1) <= 1, compared exactly."""
    qs = k.qs if isinstance(k, MontesinosKnot) else tuple(k)
    return sum(Fraction(1, q - 1) for q in qs) <= 1


def partial_fraction_small_pbar(p: int, q: int) -> PartialFractionForm:
    """Write p/q = n + s1/(2 + s2/m) for a tangle with |pbar| = 2."""
    pbar = mod_inverse_min_abs(p, q)
    if abs(pbar) != 2:
        raise TangleError(f"|pbar({p}, {q})| = {abs(pbar)}, expected 2")
    m, n = _reduce_mod(p, q)
    for s1, s2 in itertools.product((1, -1), repeat=2):
        if q == s1 * (2 * m + s2):
            value = n + Fraction(s1) / (2 + Fraction(s2, m))
            assert value == Fraction(p, q)
            return PartialFractionForm(n, m, (s1, s2), value)
    raise AssertionError(f"no decomposition found for {p}/{q}")  # unreachable when |pbar| = 2


_LITERAL = re.compile(r"^\s*K\s*\((.*)\)\s*$")


def parse_knot(text: str) -> MontesinosKnot:
    """Parse ``"K(p1/q1, p2/q2, p3/q3)"``; tangle order is preserved."""
    m = _LITERAL.match(text)
    if not m:
        raise TangleError(f"malformed knot literal: {text!r}")
    parts = [s.strip() for s in m.group(1).split(",")]
    if len(parts) != 3 or not all(re.fullmatch(r"[+-]?\d+\s*/\s*\d+|[+-]?\d+", s) for s in parts):
        raise TangleError(f"malformed knot literal: {text!r}")
    try:
        fracs = [Fraction(s.replace(" ", "")) for s in parts]
    except ZeroDivisionError as exc:
        raise TangleError(f"zero denominator in {text!r}") from exc
    return knot(*fracs)


def knot_from_json(obj: dict) -> MontesinosKnot:
    try:
        pairs = [tuple(int(v) for v in pq) for pq in obj["tangles"]]
        e0 = int(obj.get("e0", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise TangleError(f"bad knot JSON: {exc}") from exc
    for p, q in pairs:
        if q < 2:
            raise TangleError(f"trivial tangle {p}/{q}")
    return knot(*(Fraction(p, q) for p, q in pairs), e0=e0)


def canonical_tangles(q_bound: int) -> list[RationalTangle]:
    """Every canonical tangle p/q with 2 <= q <= q_bound."""
    out = []
    for q in range(2, q_bound + 1):
        for p in range(-(q // 2), q // 2 + 1):
            if gcd(p, q) == 1 and 2 * p > -q:
                out.append(RationalTangle(p, q))
    return out
