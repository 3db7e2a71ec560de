"""
Angled Euler numbers and the combinatorial Gauss-Bonnet count.

Angles are internal corner angles in units of pi.  A face with Euler
characteristic chi and corner angles alpha_j has angled Euler number

    e = chi - sum(1 - alpha_j) / 2

and for a graph on a closed surface whose vertex angle sums are all at
least 2 (i.e. 2 pi) the face numbers add up to at least chi(surface).
"""

from __future__ import annotations

import enum
import json
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .feasibility import Certificate, _profile, fmt, verify_certificate


class GraphError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """A valid certificate produced a positively curved admissible face."""


@dataclass(frozen=True)
class AngledFace:
    """A face with its Euler characteristic and internal corner angles.

    ``incidence`` optionally lists, in boundary order, the (vertex, slot)
    each corner occupies.  An angle of exactly 1 marks a straight corner,
    i.e. a vertex inserted into an edge or loop.
    """

    euler_char: int
    corner_angles: tuple[Fraction, ...]
    incidence: tuple[tuple[object, int], ...] = ()

    def __post_init__(self):
        angles = tuple(Fraction(a) for a in self.corner_angles)
        object.__setattr__(self, "corner_angles", angles)
        object.__setattr__(self, "incidence", tuple((v, int(s)) for v, s in self.incidence))
        for a in angles:
            if not 0 <= a <= 1:
                raise GraphError(f"corner angle {a} outside [0, 1] (units of pi)")
        if self.incidence and len(self.incidence) != len(angles):
            raise GraphError("face has a different number of corners and incidences")


def angled_euler(face: AngledFace) -> Fraction:
    return face.euler_char - sum((1 - a for a in face.corner_angles), Fraction(0)) / 2


class VertexKind(enum.Enum):
    SMALL = "small"
    LARGE = "large"
    PLAIN = "plain"


@dataclass(frozen=True)
class Vertex:
    id: object
    valence: int
    kind: VertexKind = VertexKind.PLAIN


@dataclass(frozen=True)
class GeneralizedGraph:
    """A graph on a closed surface, possibly with vertexless loops.

    Vertexless loops are circles: they add nothing to V - E and carry no
    corners, so they enter only through the faces' Euler characteristics.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[object, object], ...]
    faces: tuple[AngledFace, ...]
    surface_euler_char: int
    vertexless_loops: int = 0
    delta: int | None = None

    def vertex(self, vid) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)


def incidence_problems(g: GeneralizedGraph) -> list[str]:
    """Structural problems: slots, valences against edges, Euler count."""
    problems = []
    ids = [v.id for v in g.vertices]
    dup = [i for i, n in Counter(ids).items() if n > 1]
    if dup:
        problems.append(f"duplicate vertex ids {dup}")
    valence = {v.id: v.valence for v in g.vertices}
    ends = Counter()
    for u, w in g.edges:
        for x in (u, w):
            if x not in valence:
                problems.append(f"edge ({u}, {w}) uses unknown vertex {x}")
            ends[x] += 1
    for vid, d in valence.items():
        if ends[vid] != d:
            problems.append(f"vertex {vid}: declared valence {d} but {ends[vid]} edge ends")
    used = Counter()
    for fi, f in enumerate(g.faces):
        if f.corner_angles and not f.incidence:
            problems.append(f"face {fi}: corners without vertex incidence")
        for vid, slot in f.incidence:
            if vid not in valence:
                problems.append(f"face {fi}: corner at unknown vertex {vid}")
            elif not 0 <= slot < valence[vid]:
                problems.append(f"face {fi}: slot {slot} out of range at vertex {vid}")
            used[(vid, slot)] += 1
    for vid, d in valence.items():
        for s in range(d):
            n = used[(vid, s)]
            if n != 1:
                problems.append(f"vertex {vid} slot {s} used by {n} corners")
    count = len(g.vertices) - len(g.edges) + sum(f.euler_char for f in g.faces)
    if count != g.surface_euler_char:
        problems.append(f"V - E + sum chi(faces) = {count} but surface chi = {g.surface_euler_char}")
    return problems


def vertex_angle_sums(g: GeneralizedGraph) -> dict:
    sums = {v.id: Fraction(0) for v in g.vertices}
    for f in g.faces:
        for (vid, _), a in zip(f.incidence, f.corner_angles):
            sums[vid] += a
    return sums


@dataclass(frozen=True)
class EulerReport:
    chi_surface: int
    sum_e: Fraction
    vertex_angle_sums: Mapping[object, Fraction]

    @property
    def equality(self) -> bool:
        return self.sum_e == self.chi_surface

    def to_json(self) -> dict:
        return {
            "chi": self.chi_surface,
            "sum_e": fmt(self.sum_e),
            "equality": self.equality,
            "vertex_angle_sums": {str(k): fmt(v) for k, v in self.vertex_angle_sums.items()},
        }

    def summary(self) -> str:
        e = _short(self.sum_e)
        if self.equality:
            return f"sum_e = {e}, chi = {self.chi_surface}, equality"
        return f"sum_e = {e} > chi = {self.chi_surface}, strict"


def _short(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else fmt(x)


def graph_euler_check(g: GeneralizedGraph) -> EulerReport:
    """chi(F) <= sum e(faces), with equality iff every vertex sum is 2.

    Raises :class:`GraphError` on malformed incidence or a vertex whose
    angles sum to less than 2.
    """
    problems = incidence_problems(g)
    if problems:
        raise GraphError("; ".join(problems))
    sums = vertex_angle_sums(g)
    low = {k: v for k, v in sums.items() if v < 2}
    if low:
        raise GraphError(f"vertex angle sums below 2: {low}")
    total = sum((angled_euler(f) for f in g.faces), Fraction(0))
    report = EulerReport(g.surface_euler_char, total, sums)
    tight = all(s == 2 for s in sums.values())
    if report.sum_e < report.chi_surface or tight != report.equality:
        raise InconsistencyError(f"Euler accounting failed: {report}")
    return report


def validate_graph(g: GeneralizedGraph, delta: int | None = None) -> list[str]:
    """Valence rules of an intersection graph plus structural checks.

    Small vertices have valence 3, large vertices valence 6*delta; plain
    vertices are not constrained.
    """
    delta = g.delta if delta is None else delta
    problems = incidence_problems(g)
    for v in g.vertices:
        if v.kind is VertexKind.SMALL and v.valence != 3:
            problems.append(f"small vertex {v.id} has valence {v.valence}, expected 3")
        if v.kind is VertexKind.LARGE:
            if delta is None or delta < 1:
                problems.append(f"large vertex {v.id} needs a positive delta")
            elif v.valence != 6 * delta:
                problems.append(f"large vertex {v.id} has valence {v.valence}, expected {6 * delta}")
    return problems


# ---------------------------------------------------------------------------
# Faces of an angled tangle surface

@dataclass(frozen=True)
class FaceType:
    r: int
    s: int
    tangle_index: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ValueError(f"negative corner count in {self}")
        if self.tangle_index not in (1, 2, 3):
            raise ValueError(f"tangle index must be 1, 2 or 3, got {self.tangle_index}")


def s_min(r: int, q: int, pbar_abs: int) -> int:
    """Fewest small corners on an essential disk with r large corners."""
    if r == 0:
        return 2 * q
    if r % 2:
        return q
    return 2 * pbar_abs


def face_euler(k, cert: Certificate, ftype: FaceType) -> Fraction:
    """e = 1 - (r * alpha_bar_i + s * beta_bar_i) / 2 for a disk face."""
    i = ftype.tangle_index - 1
    _profile(k)  # validates shape
    return 1 - (ftype.r * cert.alpha_bar[i] + ftype.s * cert.beta_bar[i]) / 2


@dataclass
class SpectrumReport:
    entries: list[tuple[FaceType, Fraction]]
    zeros: list[FaceType] = field(default_factory=list)
    positives: list[tuple[FaceType, Fraction]] = field(default_factory=list)
    certificate_valid: bool = True

    @property
    def nonpositive(self) -> bool:
        return not self.positives


def curvature_spectrum(k, cert: Certificate, r_max: int, s_max: int) -> SpectrumReport:
    """Tabulate e for all admissible disk faces with r <= r_max, s <= s_max."""
    prof = _profile(k)
    entries = []
    for i, (q, pb) in enumerate(prof, 1):
        for r in range(r_max + 1):
            for s in range(s_min(r, q, pb), s_max + 1):
                ft = FaceType(r, s, i)
                entries.append((ft, face_euler(prof, cert, ft)))
    report = SpectrumReport(
        entries,
        zeros=[ft for ft, e in entries if e == 0],
        positives=[(ft, e) for ft, e in entries if e > 0],
        certificate_valid=not verify_certificate(prof, cert),
    )
    if report.certificate_valid:
        if report.positives:
            raise InconsistencyError(f"valid certificate but positive faces {report.positives}")
        for ft in report.zeros:
            q, pb = prof[ft.tangle_index - 1]
            if (ft.r, ft.s) not in ((0, 2 * q), (1, q), (2, 2 * pb)):
                raise InconsistencyError(f"unexpected euclidean face {ft}")
    return report


# ---------------------------------------------------------------------------
# Graph construction, fixtures and JSON

def graph_from_triangles(triangles: Sequence[Sequence], chi: int, angles=None) -> GeneralizedGraph:
    """Build a graph from a simplicial triangulation.

    ``angles`` maps (triangle index, vertex) to an internal angle; by
    default every corner at a vertex of degree d gets 2/d.
    """
    corners: dict[object, list[int]] = {}
    for ti, tri in enumerate(triangles):
        for v in tri:
            corners.setdefault(v, []).append(ti)
    edges = sorted({tuple(sorted((tri[a], tri[b]))) for tri in triangles for a, b in ((0, 1), (1, 2), (0, 2))})
    slot = {}
    for v, tris in corners.items():
        for s, ti in enumerate(tris):
            slot[(ti, v)] = s
    faces = []
    for ti, tri in enumerate(triangles):
        if angles is None:
            ang = [Fraction(2, len(corners[v])) for v in tri]
        else:
            ang = [angles[(ti, v)] for v in tri]
        faces.append(AngledFace(1, tuple(ang), tuple((v, slot[(ti, v)]) for v in tri)))
    vertices = tuple(Vertex(v, len(corners[v])) for v in sorted(corners))
    return GeneralizedGraph(vertices, tuple(edges), tuple(faces), chi)


def tetrahedron() -> GeneralizedGraph:
    return graph_from_triangles([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], 2)


def torus_grid(n: int = 2) -> GeneralizedGraph:
    """n x n square grid on the torus, every angle 1/2 (flat)."""
    vid = lambda i, j: (i % n) * n + (j % n)
    edges = []
    for i in range(n):
        for j in range(n):
            edges.append((vid(i, j), vid(i + 1, j)))
            edges.append((vid(i, j), vid(i, j + 1)))
    half = Fraction(1, 2)
    faces = []
    for i in range(n):
        for j in range(n):
            inc = ((vid(i, j), 0), (vid(i + 1, j), 1), (vid(i + 1, j + 1), 2), (vid(i, j + 1), 3))
            faces.append(AngledFace(1, (half,) * 4, inc))
    return GeneralizedGraph(tuple(Vertex(v, 4) for v in range(n * n)), tuple(edges), tuple(faces), 0)


def perturb_vertex(g: GeneralizedGraph, vid, extra: Fraction) -> GeneralizedGraph:
    """Spread ``extra`` evenly over the corners at ``vid``."""
    deg = g.vertex(vid).valence
    faces = []
    for f in g.faces:
        ang = tuple(a + extra / deg if v == vid else a for (v, _), a in zip(f.incidence, f.corner_angles))
        faces.append(replace(f, corner_angles=ang))
    return replace(g, faces=tuple(faces))


def subdivide_edge(g: GeneralizedGraph, edge_index: int, new_id=None) -> GeneralizedGraph:
    """Insert a valence-2 vertex with straight corners into an edge.

    Faces must list their corners in boundary order so that the faces on
    either side of the edge can be found.
    """
    u, w = g.edges[edge_index]
    new_id = new_id if new_id is not None else ("sub", edge_index, len(g.vertices))
    faces, slot = list(g.faces), 0
    for fi, f in enumerate(faces):
        inc, ang = list(f.incidence), list(f.corner_angles)
        n = len(inc)
        j = 0
        while j < n and slot < 2:
            a, b = inc[j][0], inc[(j + 1) % n][0]
            if {a, b} == {u, w} and not (u == w and a != b):
                inc.insert(j + 1, (new_id, slot))
                ang.insert(j + 1, Fraction(1))
                slot += 1
                n += 1
                j += 1
            j += 1
        faces[fi] = AngledFace(f.euler_char, tuple(ang), tuple(inc))
    if slot != 2:
        raise GraphError(f"edge {edge_index} is not on exactly two face sides")
    edges = list(g.edges)
    edges[edge_index:edge_index + 1] = [(u, new_id), (new_id, w)]
    vertices = g.vertices + (Vertex(new_id, 2),)
    return replace(g, vertices=vertices, edges=tuple(edges), faces=tuple(faces))


def _torus_triangles(n: int = 3) -> list[tuple[int, int, int]]:
    vid = lambda i, j: (i % n) * n + (j % n)
    tris = []
    for i in range(n):
        for j in range(n):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return tris


def random_triangulation(rng: random.Random, surface: str = "sphere", moves: int = 10):
    """Random simplicial triangulation by face and edge subdivisions.

    Returns (triangles, chi).
    """
    if surface == "sphere":
        tris, chi = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)], 2
    elif surface == "torus":
        tris, chi = _torus_triangles(3), 0
    else:
        raise ValueError(surface)
    nxt = max(v for t in tris for v in t) + 1
    for _ in range(moves):
        if rng.random() < 0.5:
            a, b, c = tris.pop(rng.randrange(len(tris)))
            tris += [(a, b, nxt), (b, c, nxt), (c, a, nxt)]
        else:
            a, b, c = tris[rng.randrange(len(tris))]
            # split edge (a, b); its other triangle has the edge as (b, a)
            other = next(i for i, t in enumerate(tris) if _has_directed(t, b, a))
            mine = next(i for i, t in enumerate(tris) if _has_directed(t, a, b))
            d = next(x for x in tris[other] if x not in (a, b))
            for i in sorted((mine, other), reverse=True):
                tris.pop(i)
            tris += [(a, nxt, c), (nxt, b, c), (b, nxt, d), (nxt, a, d)]
        nxt += 1
    return tris, chi


def _has_directed(t, a, b) -> bool:
    return any(t[i] == a and t[(i + 1) % 3] == b for i in range(3))


def random_angles(rng: random.Random, triangles) -> dict:
    """Per-vertex rational angles summing to exactly 2, each below 1."""
    corners: dict[object, list[int]] = {}
    for ti, tri in enumerate(triangles):
        for v in tri:
            corners.setdefault(v, []).append(ti)
    out = {}
    for v, tris in corners.items():
        w = [rng.randint(2, 3) for _ in tris]
        total = sum(w)
        for ti, x in zip(tris, w):
            out[(ti, v)] = Fraction(2 * x, total)
    return out


def graph_to_json(g: GeneralizedGraph) -> dict:
    return {
        "surface_euler_char": g.surface_euler_char,
        "delta": g.delta,
        "vertexless_loops": g.vertexless_loops,
        "vertices": [{"id": v.id, "kind": v.kind.value, "valence": v.valence} for v in g.vertices],
        "edges": [list(e) for e in g.edges],
        "faces": [
            {
                "euler_char": f.euler_char,
                "corners": [{"vertex": v, "slot": s, "angle": fmt(a)} for (v, s), a in zip(f.incidence, f.corner_angles)],
            }
            for f in g.faces
        ],
    }


def graph_from_json(obj: Mapping) -> GeneralizedGraph:
    """Parse the graph JSON schema; errors name the offending field."""

    def need(d, key, where):
        if not isinstance(d, Mapping) or key not in d:
            raise GraphError(f"{where}: missing field {key!r}")
        return d[key]

    try:
        vertices = []
        for i, v in enumerate(need(obj, "vertices", "graph")):
            kind = v.get("kind") or "plain"
            try:
                kind = VertexKind(kind)
            except ValueError:
                raise GraphError(f"vertices[{i}].kind: unknown kind {kind!r}") from None
            vertices.append(Vertex(need(v, "id", f"vertices[{i}]"), int(need(v, "valence", f"vertices[{i}]")), kind))
        edges = []
        for i, e in enumerate(obj.get("edges", [])):
            if not isinstance(e, Sequence) or len(e) != 2:
                raise GraphError(f"edges[{i}]: expected a pair of vertex ids")
            edges.append((e[0], e[1]))
        faces = []
        for i, f in enumerate(need(obj, "faces", "graph")):
            corners = f.get("corners", [])
            inc, ang = [], []
            for j, c in enumerate(corners):
                where = f"faces[{i}].corners[{j}]"
                inc.append((need(c, "vertex", where), int(need(c, "slot", where))))
                try:
                    ang.append(Fraction(str(need(c, "angle", where))))
                except ValueError:
                    raise GraphError(f"{where}.angle: not a rational") from None
            faces.append(AngledFace(int(need(f, "euler_char", f"faces[{i}]")), tuple(ang), tuple(inc)))
        delta = obj.get("delta")
        return GeneralizedGraph(
            tuple(vertices),
            tuple(edges),
            tuple(faces),
            int(need(obj, "surface_euler_char", "graph")),
            int(obj.get("vertexless_loops", 0)),
            None if delta is None else int(delta),
        )
    except (TypeError, AttributeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc


def load_graph(path) -> GeneralizedGraph:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return graph_from_json(obj)
