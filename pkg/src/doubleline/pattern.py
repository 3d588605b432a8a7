"""Planar crease patterns: data model, validation, vertex stars.

A crease pattern is a planar straight-line graph embedded in the plane,
with creases labeled mountain ("M"), valley ("V"), boundary ("B") or
unassigned ("U"), plus the list of faces the creases bound.  Coordinates
are dimensionless pattern units.  All angles are radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .geometry import angle_ccw, polygon_area, segments_intersect

ASSIGNMENTS = ("M", "V", "B", "U")

#: Fold angles for a whole pattern travel as a float array indexed by
#: crease id; boundary creases carry 0.
FoldAngleVector = np.ndarray


class PatternError(ValueError):
    """Raised for invalid or inconsistent crease patterns."""


@dataclass(frozen=True)
class Crease:
    v0: int
    v1: int
    assignment: str = "U"
    fold_angle: float | None = None  # target angle, radians

    def endpoints(self) -> tuple[int, int]:
        return (self.v0, self.v1)


@dataclass(frozen=True)
class VertexStar:
    """Sector angles around one vertex, counterclockwise.

    For an interior vertex the listing starts at the incident crease with
    the lowest id and has as many sectors as creases.  For a boundary
    vertex it starts just after the exterior gap and has one sector fewer
    than creases; sectors[i] lies between crease_ids[i] and crease_ids[i+1].
    """

    vertex: int
    sectors: tuple[float, ...]
    crease_ids: tuple[int, ...]
    interior: bool

    @classmethod
    def from_sectors(cls, sectors: Sequence[float], vertex: int = 0) -> "VertexStar":
        """Synthetic interior star from raw sector angles (used heavily in tests)."""
        sectors = tuple(float(s) for s in sectors)
        if abs(sum(sectors) - 2.0 * math.pi) > 1e-9:
            raise PatternError("sector angles of an interior vertex must sum to 2*pi")
        return cls(vertex=vertex, sectors=sectors, crease_ids=tuple(range(len(sectors))), interior=True)

    @property
    def degree(self) -> int:
        return len(self.crease_ids)


def _canon_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate a vertex cycle so it starts at its smallest element."""
    cycle = tuple(cycle)
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


@dataclass(frozen=True)
class CreasePattern:
    """Immutable crease pattern.

    Construct through :meth:`build`, which extracts faces from the planar
    embedding when they are not supplied and validates everything.
    """

    vertices: tuple[tuple[float, float], ...]
    creases: tuple[Crease, ...]
    faces: tuple[tuple[int, ...], ...]
    extras: tuple[tuple[str, str], ...] = field(default=())  # preserved foreign file keys

    @classmethod
    def build(
        cls,
        vertices: Iterable[Sequence[float]],
        creases: Iterable[Crease | tuple],
        faces: Iterable[Sequence[int]] | None = None,
        extras: Mapping[str, str] | None = None,
        validate: bool = True,
    ) -> "CreasePattern":
        verts = tuple((float(p[0]), float(p[1])) for p in vertices)
        cr = tuple(c if isinstance(c, Crease) else Crease(*c) for c in creases)
        pat = cls(verts, cr, faces=(), extras=tuple(sorted((extras or {}).items())))
        if faces is None:
            face_list = pat._extract_faces() if verts else ()
        else:
            face_list = tuple(_canon_cycle(f) for f in faces)
        pat = cls(verts, cr, tuple(face_list), pat.extras)
        if validate:
            pat.validate()
        return pat

    # -- derived structure ------------------------------------------------

    @cached_property
    def vertices_array(self) -> np.ndarray:
        a = np.array(self.vertices, dtype=float).reshape(-1, 2)
        a.setflags(write=False)
        return a

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Crease ids incident to each vertex."""
        inc: list[list[int]] = [[] for _ in self.vertices]
        for i, c in enumerate(self.creases):
            inc[c.v0].append(i)
            inc[c.v1].append(i)
        return tuple(tuple(v) for v in inc)

    def other_end(self, crease_id: int, vertex: int) -> int:
        c = self.creases[crease_id]
        if c.v0 == vertex:
            return c.v1
        if c.v1 == vertex:
            return c.v0
        raise PatternError(f"crease {crease_id} not incident to vertex {vertex}")

    def crease_azimuth(self, crease_id: int, vertex: int) -> float:
        """Azimuth of a crease as seen from one of its endpoints."""
        w = self.other_end(crease_id, vertex)
        d = self.vertices_array[w] - self.vertices_array[vertex]
        return math.atan2(d[1], d[0])

    @cached_property
    def _sorted_incidence(self) -> tuple[tuple[tuple[float, int, int], ...], ...]:
        """Per vertex: (azimuth, crease id, neighbor vertex), counterclockwise."""
        out = []
        for v in range(len(self.vertices)):
            items = []
            for ci in self.incident[v]:
                w = self.other_end(ci, v)
                items.append((self.crease_azimuth(ci, v), ci, w))
            items.sort()
            out.append(tuple(items))
        return tuple(out)

    def _extract_faces(self, keep_outer: bool = False) -> tuple[tuple[int, ...], ...]:
        """Walk the planar embedding and return interior face vertex cycles."""
        nxt: dict[tuple[int, int], tuple[int, int]] = {}
        for v, items in enumerate(self._sorted_incidence):
            k = len(items)
            for j in range(k):
                # Arriving along crease items[j] (from its far end), continue with
                # the next crease clockwise: predecessor in the sorted order.
                w = items[j][2]
                u = items[(j - 1) % k][2]
                nxt[(w, v)] = (v, u)
        faces = []
        seen: set[tuple[int, int]] = set()
        for he in sorted(nxt):
            if he in seen:
                continue
            cycle = []
            cur = he
            while cur not in seen:
                seen.add(cur)
                cycle.append(cur[0])
                cur = nxt[cur]
            if cur != he:
                raise PatternError("embedding walk failed to close a face")
            pts = self.vertices_array[cycle]
            if polygon_area(pts) > 0 or keep_outer:
                faces.append(_canon_cycle(cycle))
        return tuple(sorted(faces))

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        """Vertices on the outer face (present in some walk with non-positive area)."""
        if not self.creases:
            return frozenset(range(len(self.vertices)))
        interior = self._extract_faces(keep_outer=False)
        outer = set()
        all_faces = self._extract_faces(keep_outer=True)
        interior_set = set(interior)
        for f in all_faces:
            if f not in interior_set:
                outer.update(f)
        return frozenset(outer)

    def is_interior(self, vertex: int) -> bool:
        return vertex not in self.boundary_vertices

    @cached_property
    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self.vertices)) if self.is_interior(v))

    @cached_property
    def interior_creases(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.creases) if c.assignment != "B")

    @cached_property
    def face_pairs(self) -> dict[int, tuple[int, ...]]:
        """crease id -> ids of stored faces using it (1 for boundary, 2 interior)."""
        edge_to_faces: dict[tuple[int, int], list[int]] = {}
        for fi, f in enumerate(self.faces):
            for a, b in zip(f, f[1:] + f[:1]):
                edge_to_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
        out = {}
        for ci, c in enumerate(self.creases):
            key = (min(c.v0, c.v1), max(c.v0, c.v1))
            out[ci] = tuple(edge_to_faces.get(key, ()))
        return out

    # -- validation --------------------------------------------------------

    def validate(self, tol: float = 1e-9) -> None:
        n = len(self.vertices)
        if n == 0:
            if self.creases or self.faces:
                raise PatternError("creases or faces without vertices")
            return
        pts = self.vertices_array
        seen_pairs = set()
        for i, c in enumerate(self.creases):
            if not (0 <= c.v0 < n and 0 <= c.v1 < n):
                raise PatternError(f"crease {i} references a missing vertex")
            if c.v0 == c.v1:
                raise PatternError(f"crease {i} is a loop")
            if c.assignment not in ASSIGNMENTS:
                raise PatternError(f"crease {i} has unknown assignment {c.assignment!r}")
            key = (min(c.v0, c.v1), max(c.v0, c.v1))
            if key in seen_pairs:
                raise PatternError(f"duplicate crease between vertices {key}")
            seen_pairs.add(key)
            if np.linalg.norm(pts[c.v1] - pts[c.v0]) < tol:
                raise PatternError(f"crease {i} has zero length")
            if c.fold_angle is not None and abs(c.fold_angle) > math.pi + tol:
                raise PatternError(f"crease {i} fold angle outside [-pi, pi]")

        # Planarity: creases may meet only at shared endpoints.
        for i in range(len(self.creases)):
            a = self.creases[i]
            for j in range(i + 1, len(self.creases)):
                b = self.creases[j]
                if {a.v0, a.v1} & {b.v0, b.v1}:
                    continue
                if segments_intersect(pts[a.v0], pts[a.v1], pts[b.v0], pts[b.v1]):
                    raise PatternError(f"creases {i} and {j} cross: non-planar embedding")

        if self.creases:
            # Connectivity (the pattern region is a single disk).
            adj: list[set[int]] = [set() for _ in range(n)]
            for c in self.creases:
                adj[c.v0].add(c.v1)
                adj[c.v1].add(c.v0)
            used = [v for v in range(n) if adj[v]]
            if used:
                stack, comp = [used[0]], {used[0]}
                while stack:
                    v = stack.pop()
                    for w in adj[v]:
                        if w not in comp:
                            comp.add(w)
                            stack.append(w)
                if set(used) - comp:
                    raise PatternError("crease graph is disconnected")

            # Faces must match the embedding.
            recomputed = self._extract_faces()
            if set(self.faces) != set(recomputed):
                raise PatternError("stored faces disagree with the planar embedding")
            for ci, fs in self.face_pairs.items():
                c = self.creases[ci]
                want = 1 if c.assignment == "B" else 2
                if len(fs) != want:
                    raise PatternError(
                        f"crease {ci} ({c.assignment}) borders {len(fs)} faces, expected {want}"
                    )


# -- vertex analysis --------------------------------------------------------


def vertex_star(pattern: CreasePattern, vertex: int) -> VertexStar:
    """Sector angles around a vertex in counterclockwise order."""
    items = pattern._sorted_incidence[vertex]
    if not items:
        raise PatternError(f"vertex {vertex} has no incident creases")
    k = len(items)
    interior = pattern.is_interior(vertex)
    az = [it[0] for it in items]
    ids = [it[1] for it in items]
    if interior:
        start = ids.index(min(ids))
        order = [(start + j) % k for j in range(k)]
        sectors = tuple(angle_ccw(az[order[j]], az[order[(j + 1) % k]]) for j in range(k))
        return VertexStar(vertex, sectors, tuple(ids[j] for j in order), True)

    # Boundary vertex: drop the gap that belongs to the outer region and start
    # the listing just after it.
    pattern_faces = set(pattern.faces)
    gap_face = []
    for j in range(k):
        # The wedge from az[j] to az[j+1] is the face left of the half-edge
        # leaving along items[j].
        he_face = _face_of_halfedge(pattern, vertex, items[j][2])
        gap_face.append(he_face in pattern_faces)
    if all(gap_face):
        # Can happen for flat 180-degree boundary runs; treat the largest gap as exterior.
        gap_face[max(range(k), key=lambda j: angle_ccw(az[j], az[(j + 1) % k]))] = False
    start = (gap_face.index(False) + 1) % k
    order = [(start + j) % k for j in range(k)]
    sectors = tuple(
        angle_ccw(az[order[j]], az[order[j + 1]]) for j in range(k - 1)
    )
    return VertexStar(vertex, sectors, tuple(ids[j] for j in order), False)


def _face_of_halfedge(pattern: CreasePattern, v: int, w: int) -> tuple[int, ...] | None:
    """Vertex cycle of the face to the left of directed edge v->w (canonical rotation)."""
    items_by_vertex = pattern._sorted_incidence
    cycle = []
    cur = (v, w)
    for _ in range(4 * len(pattern.creases) + 4):
        cycle.append(cur[0])
        a, b = cur
        items = items_by_vertex[b]
        j = next(i for i, it in enumerate(items) if it[2] == a)
        cur = (b, items[(j - 1) % len(items)][2])
        if cur == (v, w):
            return _canon_cycle(cycle)
    return None


def kawasaki_residual(star: VertexStar) -> float:
    """Absolute alternating sector sum; zero for flat-foldable interior vertices."""
    if not star.interior:
        raise PatternError("Kawasaki residual requires an interior vertex")
    if star.degree % 2 != 0:
        raise PatternError("Kawasaki residual requires an even-degree vertex")
    alt = sum(s if i % 2 == 0 else -s for i, s in enumerate(star.sectors))
    return abs(alt)


def is_flat_foldable_deg4(star: VertexStar, tol: float = 1e-9) -> bool:
    """True for an interior degree-4 vertex whose opposite sectors sum to pi."""
    if not star.interior or star.degree != 4:
        return False
    s = star.sectors
    return abs(s[0] + s[2] - math.pi) <= tol and abs(s[1] + s[3] - math.pi) <= tol
