"""
Exact feasibility of small strict/non-strict linear inequality systems.

Feasibility is decided by Fourier-Motzkin elimination over
``fractions.Fraction``.  Every derived row remembers the nonnegative
multipliers that produce it from the original constraints, so an
infeasible system comes back with a Farkas combination that anyone can
re-add by hand.  A feasible system comes back with an explicit point built
by back-substitution through the elimination stages.

The angle system of a Montesinos knot lives here too.  Angles are exterior
angles measured in units of pi: ``a_i`` is the large-corner exterior angle
and ``b_i`` the small-corner exterior angle of tangle ``i``.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .tangles import MontesinosKnot, component_count

log = logging.getLogger(__name__)

ZERO = Fraction(0)


class Relation(enum.Enum):
    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"
    EQ = "="

    @property
    def strict(self) -> bool:
        return self in (Relation.LT, Relation.GT)


class NotAKnotError(ValueError):
    def __init__(self, components: int):
        super().__init__(f"not a knot: {components} components")
        self.components = components


class SolverError(RuntimeError):
    """A produced witness failed its own re-verification."""


@dataclass(frozen=True)
class LinearConstraint:
    """``sum coefficients[v] * v  (relation)  rhs``."""

    coefficients: Mapping[str, Fraction]
    rhs: Fraction
    relation: Relation
    provenance: str = "derived"

    def lhs(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point.get(v, ZERO) for v, c in self.coefficients.items()), ZERO)

    def slack(self, point: Mapping[str, Fraction]) -> Fraction:
        """Signed distance to the boundary; nonnegative means on the good side.

        For equalities the slack is ``-|lhs - rhs|``.
        """
        d = self.lhs(point) - self.rhs
        if self.relation in (Relation.LE, Relation.LT):
            return -d
        if self.relation is Relation.EQ:
            return -abs(d)
        return d

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        s = self.slack(point)
        return s > 0 if self.relation.strict else s >= 0

    def __str__(self):
        terms = " + ".join(f"{c}*{v}" for v, c in self.coefficients.items() if c) or "0"
        return f"{terms} {self.relation.value} {self.rhs}"


def constraint(coeffs: Mapping[str, object], rel: str | Relation, rhs, provenance="derived") -> LinearConstraint:
    """Convenience constructor accepting ints/strings for coefficients."""
    rel = rel if isinstance(rel, Relation) else Relation(rel)
    co = {v: Fraction(c) for v, c in coeffs.items() if Fraction(c) != 0}
    return LinearConstraint(co, Fraction(rhs), rel, provenance)


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    elimination_order: tuple[str, ...] | None = None

    def __post_init__(self):
        names = set(self.variables)
        for c in self.constraints:
            extra = set(c.coefficients) - names
            if extra:
                raise ValueError(f"constraint {c} uses undeclared variables {sorted(extra)}")

    @property
    def order(self) -> tuple[str, ...]:
        return self.elimination_order or self.variables


@dataclass(frozen=True)
class Violation:
    index: int
    provenance: str
    slack: Fraction

    def __str__(self):
        return f"{self.provenance}: slack {self.slack}"


def violations(system: LinearSystem, point: Mapping[str, Fraction]) -> list[Violation]:
    return [
        Violation(i, c.provenance, c.slack(point))
        for i, c in enumerate(system.constraints)
        if not c.holds(point)
    ]


# ---------------------------------------------------------------------------
# Fourier-Motzkin machinery

@dataclass(frozen=True)
class Row:
    """``sum coeffs * x  >=  rhs`` (``>`` when strict) with its derivation.

    ``weights[k]`` is the multiplier of original constraint ``k`` written in
    its >=-form (LE/LT constraints are negated first).  Weights are
    nonnegative except on equality constraints.
    """

    coeffs: Mapping[str, Fraction]
    rhs: Fraction
    strict: bool
    weights: Mapping[int, Fraction]

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    @property
    def absurd(self) -> bool:
        # 0 >= rhs fails iff rhs > 0; 0 > rhs fails iff rhs >= 0
        return self.is_constant and (self.rhs >= 0 if self.strict else self.rhs > 0)

    def scaled(self, k: Fraction) -> "Row":
        return Row(
            {v: c * k for v, c in self.coeffs.items()},
            self.rhs * k,
            self.strict,
            {i: w * k for i, w in self.weights.items()},
        )


def _rows_from_constraint(k: int, c: LinearConstraint) -> list[Row]:
    co = dict(c.coefficients)
    if c.relation in (Relation.GE, Relation.GT):
        return [Row(co, c.rhs, c.relation.strict, {k: Fraction(1)})]
    neg = {v: -x for v, x in co.items()}
    if c.relation in (Relation.LE, Relation.LT):
        return [Row(neg, -c.rhs, c.relation.strict, {k: Fraction(1)})]
    return [
        Row(co, c.rhs, False, {k: Fraction(1)}),
        Row(neg, -c.rhs, False, {k: Fraction(-1)}),
    ]


def initial_rows(system: LinearSystem) -> list[Row]:
    rows = []
    for k, c in enumerate(system.constraints):
        rows.extend(_rows_from_constraint(k, c))
    return rows


def _combine(p: Row, n: Row, var: str) -> Row:
    a, b = -n.coeffs[var], p.coeffs[var]
    coeffs = {}
    for v in set(p.coeffs) | set(n.coeffs):
        if v == var:
            continue
        c = a * p.coeffs.get(v, ZERO) + b * n.coeffs.get(v, ZERO)
        if c:
            coeffs[v] = c
    weights = {}
    for i in set(p.weights) | set(n.weights):
        w = a * p.weights.get(i, ZERO) + b * n.weights.get(i, ZERO)
        if w:
            weights[i] = w
    return Row(coeffs, a * p.rhs + b * n.rhs, p.strict or n.strict, weights)


def _normalized(row: Row, variables: Sequence[str]) -> Row:
    for v in variables:
        if v in row.coeffs:
            return row.scaled(1 / abs(row.coeffs[v]))
    if row.rhs:
        return row.scaled(1 / abs(row.rhs))
    return row


def _prune(rows: Iterable[Row], variables: Sequence[str]) -> list[Row]:
    """Drop trivially true constants and rows dominated by a parallel row."""
    best: dict[tuple, Row] = {}
    for r in rows:
        r = _normalized(r, variables)
        if r.is_constant and not r.absurd:
            continue
        key = tuple(r.coeffs.get(v, ZERO) for v in variables)
        old = best.get(key)
        # larger rhs is tighter; at equal rhs the strict row is tighter
        if old is None or (r.rhs, r.strict) > (old.rhs, old.strict):
            best[key] = r
    return list(best.values())


def eliminate_rows(rows: Sequence[Row], var: str, variables: Sequence[str]) -> list[Row]:
    keep, pos, neg = [], [], []
    for r in rows:
        c = r.coeffs.get(var, ZERO)
        (pos if c > 0 else neg if c < 0 else keep).append(r)
    derived = [_combine(p, n, var) for p, n in itertools.product(pos, neg)]
    rest = [v for v in variables if v != var]
    return _prune(keep + derived, rest)


def fm_eliminate(system: LinearSystem, var: str) -> LinearSystem:
    """Project ``var`` out of ``system``.

    The result is expressed as >=/> constraints over the remaining
    variables; each derived constraint's provenance lists its multipliers
    on the constraints of ``system``.
    """
    if var not in system.variables:
        raise KeyError(var)
    rest = tuple(v for v in system.variables if v != var)
    out = []
    for r in eliminate_rows(initial_rows(system), var, system.variables):
        tag = "derived[" + ", ".join(f"{i}:{w}" for i, w in sorted(r.weights.items())) + "]"
        out.append(LinearConstraint(dict(r.coeffs), r.rhs, Relation.GT if r.strict else Relation.GE, tag))
    order = tuple(v for v in system.order if v != var)
    return LinearSystem(rest, tuple(out), order)


@dataclass(frozen=True)
class FarkasWitness:
    """Multipliers on the original constraints whose sum is absurd.

    ``strict`` is true when the combination carries a strict inequality,
    i.e. it reads ``0 > c`` rather than ``0 >= c``.
    """

    multipliers: Mapping[int, Fraction]
    strict: bool

    def to_json(self, system: LinearSystem | None = None) -> dict:
        items = []
        for i, w in sorted(self.multipliers.items()):
            d = {"constraint": i, "multiplier": fmt(w)}
            if system is not None:
                d["provenance"] = system.constraints[i].provenance
            items.append(d)
        return {"multipliers": items, "strict": self.strict}


def farkas_combination(system: LinearSystem, witness: FarkasWitness):
    """Re-add the witness by hand: returns (coefficients, constant, strict).

    The combination reads ``sum coeffs * x  (>|>=)  constant``.  Uses only
    the original constraints; shares no code with the elimination.
    """
    coeffs: dict[str, Fraction] = {}
    const = ZERO
    strict = False
    for i, w in witness.multipliers.items():
        c = system.constraints[i]
        if w == 0:
            continue
        if c.relation is not Relation.EQ and w < 0:
            raise ValueError(f"negative multiplier {w} on inequality {i}")
        sign = -1 if c.relation in (Relation.LE, Relation.LT) else 1
        for v, x in c.coefficients.items():
            coeffs[v] = coeffs.get(v, ZERO) + sign * w * x
        const += sign * w * c.rhs
        strict = strict or c.relation.strict
    return {v: x for v, x in coeffs.items() if x}, const, strict


def verify_farkas(system: LinearSystem, witness: FarkasWitness) -> bool:
    """True iff the witness sums to ``0 >= c`` with c > 0 or ``0 > c`` with c >= 0."""
    try:
        coeffs, const, strict = farkas_combination(system, witness)
    except (ValueError, IndexError):
        return False
    if coeffs:
        return False
    return const >= 0 if strict else const > 0


@dataclass
class Solution:
    """Outcome of :func:`solve`: exactly one of ``point`` / ``farkas`` is set."""

    system: LinearSystem
    point: dict[str, Fraction] | None = None
    farkas: FarkasWitness | None = None
    stages: list[list[Row]] = field(default_factory=list, repr=False)

    @property
    def feasible(self) -> bool:
        return self.point is not None


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    # two finite ends: midpoint, whatever the strictness; one end: step off it
    if lo is None and hi is None:
        return ZERO
    if lo is None:
        return hi - 1 if hi_strict else hi
    if hi is None:
        return lo + 1 if lo_strict else lo
    return (lo + hi) / 2


def _choose(rows: Sequence[Row], var: str, point: Mapping[str, Fraction]) -> Fraction:
    lo = hi = None
    lo_strict = hi_strict = False
    for r in rows:
        c = r.coeffs.get(var, ZERO)
        if not c:
            continue
        rest = sum((x * point[v] for v, x in r.coeffs.items() if v != var), ZERO)
        bound = (r.rhs - rest) / c
        if c > 0:
            if lo is None or bound > lo or (bound == lo and r.strict):
                lo, lo_strict = bound, r.strict
        else:
            if hi is None or bound < hi or (bound == hi and r.strict):
                hi, hi_strict = bound, r.strict
    return _pick(lo, lo_strict, hi, hi_strict)


def solve(system: LinearSystem) -> Solution:
    """Decide feasibility exactly.

    Eliminates variables in ``system.order``.  On success the returned point
    has been checked against every original constraint; on failure the
    Farkas witness has been re-added independently and found absurd.
    """
    order = list(system.order)
    order += [v for v in system.variables if v not in order]
    remaining = list(system.variables)
    rows = _prune(initial_rows(system), remaining)
    stages = [rows]
    for var in order:
        bad = next((r for r in rows if r.absurd), None)
        if bad is not None:
            break
        remaining.remove(var)
        rows = eliminate_rows(rows, var, remaining)
        stages.append(rows)
        log.debug("eliminated %s: %d rows", var, len(rows))
    bad = next((r for r in rows if r.absurd), None)
    if bad is not None:
        witness = FarkasWitness(dict(bad.weights), bad.strict)
        if not verify_farkas(system, witness):
            raise SolverError(f"Farkas witness failed re-verification: {witness}")
        return Solution(system, farkas=witness, stages=stages)

    point: dict[str, Fraction] = {}
    for var, rows_with_var in zip(reversed(order), reversed(stages[:-1])):
        point[var] = _choose(rows_with_var, var, point)
    for v in system.variables:
        point.setdefault(v, ZERO)
    bad_constraints = violations(system, point)
    if bad_constraints:
        raise SolverError(f"witness violates {bad_constraints}")
    return Solution(system, point=point, stages=stages)


# ---------------------------------------------------------------------------
# The angle system of a length-3 Montesinos knot

ALPHA = ("a1", "a2", "a3")
BETA = ("b1", "b2", "b3")
ANGLE_ORDER = BETA + ALPHA


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _profile(obj) -> tuple[tuple[int, int], ...]:
    if isinstance(obj, MontesinosKnot):
        return obj.profile
    prof = tuple((int(q), int(pb)) for q, pb in obj)
    if len(prof) != 3:
        raise ValueError(f"need three (q, |pbar|) pairs, got {prof}")
    return prof


def angle_system(profile) -> LinearSystem:
    """Angle inequalities for a (q_i, |pbar_i|) triple, angles in units of pi.

    No knot check; see :func:`build_angle_system` for the checked entry point.
    """
    prof = _profile(profile)
    one, two = Fraction(1), Fraction(2)
    cs = []
    for i, (a, b) in enumerate(zip(ALPHA, BETA), 1):
        cs.append(constraint({a: 1}, ">", 0, f"alpha_range[{i}]"))
        cs.append(constraint({a: 1}, "<=", 1, f"alpha_range[{i}]"))
        cs.append(constraint({b: 1}, ">", 0, f"beta_range[{i}]"))
        cs.append(constraint({b: 1}, "<", 1, f"beta_range[{i}]"))
    cs.append(constraint(dict.fromkeys(ALPHA, 1), "<=", two, "alpha_sum"))
    cs.append(constraint(dict.fromkeys(BETA, 1), "<=", one, "beta_sum"))
    for i, (q, _) in enumerate(prof, 1):
        cs.append(constraint({ALPHA[i - 1]: 1, BETA[i - 1]: q}, ">=", two, f"odd_face[{i}]"))
    for i, (_, pb) in enumerate(prof, 1):
        cs.append(constraint({ALPHA[i - 1]: 1, BETA[i - 1]: pb}, ">=", one, f"even_face[{i}]"))
    for i, (q, _) in enumerate(prof, 1):
        if q == 2:
            cs.append(constraint({ALPHA[i - 1]: 1, BETA[i - 1]: 1}, ">", one, f"half_twist[{i}]"))
    return LinearSystem(ALPHA + BETA, tuple(cs), ANGLE_ORDER)


def build_angle_system(k: MontesinosKnot) -> LinearSystem:
    """The angle inequality system of a knot (links are rejected).

    Constraints, all in units of pi:

    * ``0 < a_i <= 1`` and ``0 < b_i < 1``
    * ``alpha_sum``: a1 + a2 + a3 <= 2
    * ``beta_sum``: b1 + b2 + b3 <= 1
    * ``odd_face[i]``: a_i + q_i b_i >= 2
    * ``even_face[i]``: a_i + |pbar_i| b_i >= 1
    * ``half_twist[i]``: a_i + b_i > 1 whenever q_i = 2
    """
    n = component_count(k)
    if n != 1:
        raise NotAKnotError(n)
    return angle_system(k)


@dataclass(frozen=True)
class Certificate:
    """Exterior angles (units of pi) solving the angle system."""

    alpha_bar: tuple[Fraction, Fraction, Fraction]
    beta_bar: tuple[Fraction, Fraction, Fraction]
    regime: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha_bar", tuple(Fraction(x) for x in self.alpha_bar))
        object.__setattr__(self, "beta_bar", tuple(Fraction(x) for x in self.beta_bar))
        if len(self.alpha_bar) != 3 or len(self.beta_bar) != 3:
            raise ValueError("a certificate carries three alpha and three beta angles")

    def point(self) -> dict[str, Fraction]:
        return dict(zip(ALPHA + BETA, self.alpha_bar + self.beta_bar))

    def permuted(self, perm: Sequence[int]) -> "Certificate":
        """Angles for the knot whose i-th tangle is this knot's perm[i]-th."""
        return Certificate(
            tuple(self.alpha_bar[j] for j in perm),
            tuple(self.beta_bar[j] for j in perm),
            self.regime,
        )

    def to_json(self) -> dict:
        return {
            "alpha_bar": [fmt(x) for x in self.alpha_bar],
            "beta_bar": [fmt(x) for x in self.beta_bar],
            "units": "pi",
            "regime": self.regime,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Certificate":
        if obj.get("units", "pi") != "pi":
            raise ValueError(f"unsupported angle units {obj.get('units')!r}")
        return cls(
            tuple(Fraction(str(x)) for x in obj["alpha_bar"]),
            tuple(Fraction(str(x)) for x in obj["beta_bar"]),
            obj.get("regime"),
        )

    @classmethod
    def from_point(cls, point: Mapping[str, Fraction], regime=None) -> "Certificate":
        return cls(tuple(point[v] for v in ALPHA), tuple(point[v] for v in BETA), regime)


def verify_certificate(k, cert: Certificate) -> list[Violation]:
    """Every failed angle condition with its exact slack; empty means valid.

    ``k`` may be a knot or a bare (q_i, |pbar_i|) triple.
    """
    return violations(angle_system(k), cert.point())


# ---------------------------------------------------------------------------
# Explicit angle choices covering whole parameter regimes

F = Fraction


@dataclass(frozen=True)
class Preset:
    regime: str
    pattern: str
    matches: Callable[[tuple[tuple[int, int], ...]], bool] = field(repr=False)
    alpha_bar: tuple[Fraction, ...]
    beta_bar: tuple[Fraction, ...]
    minimal_profile: tuple[tuple[int, int], ...]

    @property
    def certificate(self) -> Certificate:
        return Certificate(self.alpha_bar, self.beta_bar, self.regime)


def _m(pred):
    return lambda prof: pred(*(q for q, _ in prof), *(pb for _, pb in prof))


PRESETS: tuple[Preset, ...] = (
    # sum 1/(q_i - 1) <= 1
    Preset("sum-A", "q_i >= 4",
           _m(lambda q1, q2, q3, *_: min(q1, q2, q3) >= 4),
           (F(2, 3),) * 3, (F(1, 3),) * 3,
           ((4, 1), (4, 1), (4, 1))),
    Preset("sum-B", "q = (3, >=5, >=5)",
           _m(lambda q1, q2, q3, *_: q1 == 3 and q2 >= 5 and q3 >= 5),
           (F(1, 2), F(3, 4), F(3, 4)), (F(1, 2), F(1, 4), F(1, 4)),
           ((3, 1), (5, 1), (5, 1))),
    Preset("sum-C", "q = (3, 4, >=7)",
           _m(lambda q1, q2, q3, *_: q1 == 3 and q2 == 4 and q3 >= 7),
           (F(1, 2), F(2, 3), F(5, 6)), (F(1, 2), F(1, 3), F(1, 6)),
           ((3, 1), (4, 1), (7, 1))),
    # residual cases
    Preset("case-1", "q = (3, 4, 5), |pbar_3| = 2",
           _m(lambda q1, q2, q3, p1, p2, p3: (q1, q2, q3) == (3, 4, 5) and p3 == 2),
           (F(1), F(2, 3), F(1, 3)), (F(1, 3),) * 3,
           ((3, 1), (4, 1), (5, 2))),
    Preset("case-2", "q = (3, 3, q_3), |pbar_3| >= 3",
           _m(lambda q1, q2, q3, p1, p2, p3: q1 == q2 == 3 and p3 >= 3),
           (F(7, 8), F(7, 8), F(1, 4)), (F(3, 8), F(3, 8), F(1, 4)),
           ((3, 1), (3, 1), (7, 3))),
    Preset("case-3a", "q = (2, >=7, >=7), |pbar_2|, |pbar_3| >= 2",
           _m(lambda q1, q2, q3, p1, p2, p3: q1 == 2 and q2 >= 7 and q3 >= 7 and p2 > 1 and p3 > 1),
           (F(1), F(1, 2), F(1, 2)), (F(1, 2), F(1, 4), F(1, 4)),
           ((2, 1), (7, 2), (7, 2))),
    Preset("case-3b", "q = (2, 5, >=9), |pbar_2|, |pbar_3| >= 2",
           _m(lambda q1, q2, q3, p1, p2, p3: q1 == 2 and q2 == 5 and q3 >= 9 and p2 > 1 and p3 > 1),
           (F(1), F(1, 3), F(2, 3)), (F(1, 2), F(1, 3), F(1, 6)),
           ((2, 1), (5, 2), (9, 2))),
    Preset("case-4", "q = (2, >=5, q_3), |pbar_2| = 1, |pbar_3| >= 3",
           _m(lambda q1, q2, q3, p1, p2, p3: q1 == 2 and q2 >= 5 and p2 == 1 and p3 >= 3),
           (F(1), F(3, 4), F(1, 4)), (F(1, 2), F(1, 4), F(1, 4)),
           ((2, 1), (5, 1), (7, 3))),
    Preset("case-5", "q = (2, 3, >=15), |pbar_3| >= 7",
           _m(lambda q1, q2, q3, p1, p2, p3: q1 == 2 and q2 == 3 and p3 >= 7),
           (F(1), F(7, 8), F(1, 8)), (F(1, 2), F(3, 8), F(1, 8)),
           ((2, 1), (3, 1), (15, 7))),
)

PRESETS_BY_REGIME = {p.regime: p for p in PRESETS}


def preset_for(k) -> Certificate | None:
    """First preset whose regime contains some reordering of the knot.

    Mirroring leaves every (q_i, |pbar_i|) unchanged, so only the six
    reorderings need trying.  The certificate is returned in the knot's own
    tangle order and has been verified.
    """
    prof = _profile(k)
    for preset in PRESETS:
        for perm in itertools.permutations(range(3)):
            if not preset.matches(tuple(prof[j] for j in perm)):
                continue
            # preset slot s holds knot tangle perm[s]; invert to knot order
            inverse = [perm.index(i) for i in range(3)]
            cert = preset.certificate.permuted(inverse)
            if not verify_certificate(prof, cert):
                return cert
            log.warning("preset %s matched %s but failed verification", preset.regime, prof)
    return None


def certify(k) -> Solution:
    """Run the solver on the angle system of ``k`` (knot or profile)."""
    system = build_angle_system(k) if isinstance(k, MontesinosKnot) else angle_system(k)
    return solve(system)
