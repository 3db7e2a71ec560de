"""
End-to-end classification of length-3 Montesinos knots.

A knot is either certified (explicit angles exist, found by a preset or by
the solver), or it falls in one of the five residual families where the
angle method cannot certify.  A solver-infeasible knot outside every family
is reported as an anomaly rather than raised, so that a full enumeration
always finishes and every discrepancy stays visible.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .feasibility import (
    Certificate,
    FarkasWitness,
    NotAKnotError,
    Solution,
    angle_system,
    preset_for,
    solve,
    verify_certificate,
)
from .tangles import (
    MontesinosKnot,
    canonical_tangles,
    component_count,
    is_knot,
    orbit,
    orbit_representative,
    partial_fraction_small_pbar,
)

log = logging.getLogger(__name__)

DISCLAIMER = "assumes K hyperbolic"


class Verdict(enum.Enum):
    CERTIFIED = "certified"
    FAMILY = "family"
    ANOMALY = "anomaly"


@dataclass(frozen=True)
class Classification:
    knot: MontesinosKnot
    verdict: Verdict
    certificate: Certificate | None = None
    source: str | None = None  # "preset" or "solver"
    family: int | None = None
    representative: MontesinosKnot | None = None
    farkas: FarkasWitness | None = None
    report: str | None = None

    def to_json(self) -> dict:
        d = {
            "knot": self.knot.literal(),
            "tangles": self.knot.to_json()["tangles"],
            "e0": self.knot.e0,
            "verdict": self.verdict.value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "certificate_source": self.source,
            "family": self.family,
            "disclaimer": DISCLAIMER,
        }
        if self.representative is not None:
            d["family_representative"] = self.representative.literal()
        if self.farkas is not None:
            d["farkas"] = self.farkas.to_json(angle_system(self.knot))
        if self.report:
            d["report"] = self.report
        return d


def _family_id(k: MontesinosKnot) -> int | None:
    """Match one ordered image against the five residual patterns."""
    (p1, q1), (p2, q2), (p3, q3) = ((t.p, t.q) for t in k.tangles)
    pb3 = k.tangles[2].pbar_abs
    if (q1, q2, q3) == (3, 4, 5) and p1 == 1 and abs(p2) == 1 and p3 % 5 in (1, 4):
        return 1
    if q1 == q2 == 3 and p1 == 1 and abs(p2) == 1 and pb3 <= 2:
        return 2
    if (q1, p1) == (2, 1) and (q2, p2) == (5, 2) and q3 in (5, 7) and pb3 > 1:
        return 3
    if (q1, p1) == (2, 1) and p2 == 1 and q2 >= 5 and pb3 <= 2:
        return 4
    if (q1, p1) == (2, 1) and (q2, p2) == (3, 1) and pb3 <= 6:
        return 5
    return None


def family_match(k: MontesinosKnot) -> tuple[int, MontesinosKnot] | None:
    """Smallest residual family id matched by any permutation/mirror image.

    Returns the family id with the matching image, or None.
    """
    best = None
    for img in orbit(k):
        fid = _family_id(img)
        if fid is not None and (best is None or fid < best[0]):
            best = (fid, img)
    return best


@lru_cache(maxsize=None)
def _solve_profile(profile: tuple[tuple[int, int], ...]) -> Solution:
    return solve(angle_system(profile))


def classify(k: MontesinosKnot) -> Classification:
    n = component_count(k)
    if n != 1:
        raise NotAKnotError(n)
    cert = preset_for(k)
    if cert is not None:
        return Classification(k, Verdict.CERTIFIED, cert, "preset")
    sol = _solve_profile(k.profile)
    if sol.feasible:
        cert = Certificate.from_point(sol.point, regime="solver")
        assert not verify_certificate(k, cert)
        return Classification(k, Verdict.CERTIFIED, cert, "solver")
    match = family_match(k)
    if match is None:
        log.error("anomaly: %s is infeasible but in no residual family", k)
        return Classification(
            k, Verdict.ANOMALY, farkas=sol.farkas,
            report="angle system infeasible but no residual family matches",
        )
    fid, img = match
    return Classification(k, Verdict.FAMILY, family=fid, representative=img, farkas=sol.farkas)


def canonical_knots(q_bound: int, include_links: bool = False) -> Iterator[MontesinosKnot]:
    """One representative per permutation/mirror class with q_i <= q_bound.

    Classes are taken with e0 mod 2 (see :func:`orbit_representative`).
    Ordered lexicographically by the sorted (q, p) triple, then e0.
    """
    if q_bound < 2:
        raise ValueError(f"q_bound must be >= 2, got {q_bound}")
    tangles = sorted(canonical_tangles(q_bound), key=lambda t: (t.q, t.p))
    for triple in itertools.combinations_with_replacement(tangles, 3):
        for e0 in (0, 1):
            k = MontesinosKnot(triple, e0)
            if orbit_representative(k) != k:
                continue
            if include_links or is_knot(k):
                yield k


@dataclass(frozen=True)
class EnumerationRow:
    knot: MontesinosKnot
    classification: Classification | None  # None for links
    components: int = 1

    def to_json(self) -> dict:
        if self.classification is None:
            return {"knot": self.knot.literal(), "verdict": "link", "components": self.components}
        return self.classification.to_json()

    def csv_fields(self) -> list:
        c = self.classification
        if c is None:
            return [self.knot.literal(), "link", "", ""]
        return [self.knot.literal(), c.verdict.value, c.family or "", c.source or ""]


def _row(k: MontesinosKnot) -> EnumerationRow:
    n = component_count(k)
    if n != 1:
        return EnumerationRow(k, None, n)
    return EnumerationRow(k, classify(k))


def enumerate_and_classify(q_bound: int, jobs: int = 1, include_links: bool = False) -> Iterator[EnumerationRow]:
    """Classify every canonical knot with q_i <= q_bound, in canonical order.

    With ``jobs > 1`` rows are computed in worker processes; the output
    order is the same either way.
    """
    knots = canonical_knots(q_bound, include_links)
    if jobs <= 1:
        yield from map(_row, knots)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_row, knots, chunksize=64)


def summarize(rows) -> dict:
    verdicts, families, sources = Counter(), Counter(), Counter()
    total = 0
    for r in rows:
        total += 1
        c = r.classification
        if c is None:
            verdicts["link"] += 1
            continue
        verdicts[c.verdict.value] += 1
        if c.family:
            families[c.family] += 1
        if c.source:
            sources[c.source] += 1
    return {
        "total": total,
        "certified": verdicts["certified"],
        "family": verdicts["family"],
        "anomalies": verdicts["anomaly"],
        "links": verdicts["link"],
        "by_family": {str(f): families[f] for f in sorted(families)},
        "by_source": {s: sources[s] for s in sorted(sources)},
    }


def cross_check(k: MontesinosKnot) -> dict:
    """Run preset and solver side by side and compare across the orbit."""
    preset = preset_for(k)
    sol = _solve_profile(k.profile)
    images = orbit(k)
    orbit_feasible = [_solve_profile(img.profile).feasible for img in images]
    verdicts = [classify(img).verdict.value for img in images]
    out = {
        "knot": k.literal(),
        "preset": preset.regime if preset else None,
        "preset_valid": preset is not None and not verify_certificate(k, preset),
        "solver_feasible": sol.feasible,
        "agreement": preset is None or sol.feasible,
        "orbit_feasible": orbit_feasible,
        "orbit_invariant": len(set(orbit_feasible)) == 1 and len(set(verdicts)) == 1,
        "family": None,
        "partial_fractions": {},
    }
    match = family_match(k)
    if match:
        out["family"] = match[0]
    for i, t in enumerate(k.tangles, 1):
        if t.pbar_abs == 2:
            pf = partial_fraction_small_pbar(t.p, t.q)
            inner = pf.signs[1] * (1 if pf.m > 0 else -1)
            s1, s2 = ("+" if s > 0 else "-" for s in (pf.signs[0], inner))
            lead = f"{pf.n} {s1} " if pf.n else ("" if s1 == "+" else "-")
            out["partial_fractions"][str(i)] = f"{t.p}/{t.q} = {lead}1/(2 {s2} 1/{abs(pf.m)})"
    return out
