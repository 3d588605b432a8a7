"""Generators for standard patterns and the multi-vertex doubling procedure.

Tessellation generators (Miura, elongated Yoshimura) return a
VertexNetwork: the crease pattern together with the folding branch each
interior vertex follows in the standard one-parameter motion.  The
connection procedure replaces every such vertex by its doubled polygon and
joins doubled pairs across shared creases, choosing each vertex's rotation
angle and polygon distances so that the pairs line up as lines in the
plane and fold with identical angles in 3-space.  Tree networks always
admit a solution; cyclic ones are checked and rejected when the loop
conditions fail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.optimize import linprog

from .dl import (
    CRITICAL,
    MODE_A1,
    MODE_A2,
    MODE_B1,
    MODE_B2,
    DLMode,
    DlError,
    DoubleLineRatio,
    assign_mode_mv,
    axis_offsets,
    classify_theta,
    dl_multipliers,
    theta_for_ratio,
)
from .fold3d import Fold3dError, network_multipliers
from .fold_io import get_extra, set_extra
from .geometry import intersect_lines, polygon_area, unit
from .kinematics import FoldMode, mode_vector
from .pattern import (
    Crease,
    CreasePattern,
    PatternError,
    VertexStar,
    is_flat_foldable_deg4,
    vertex_star,
)

NETWORK_KEY = "doubleline:network"

#: Axis class of each doubled pair in the generic modes: whether the pair is
#: major or minor, and whether (ray^+, ray^-) is the representative pair of
#: the mode reversed.  Index is the axis number of the vertex star.
_AXIS_CLASS = {
    "a-I": (("major", False), ("minor", True), ("major", True), ("minor", False)),
    "a-II": (("major", True), ("minor", True), ("major", False), ("minor", False)),
    "b-I": (("minor", False), ("major", True), ("minor", True), ("major", False)),
    "b-II": (("minor", False), ("major", False), ("minor", True), ("major", True)),
}

_FAMILY_MODES = {FoldMode.A: (MODE_A1, MODE_A2), FoldMode.B: (MODE_B1, MODE_B2)}


# -- single-vertex generators --------------------------------------------------


def gen_single_deg4(alpha: float, beta: float) -> CreasePattern:
    """Canonical flat-foldable degree-4 vertex with sectors (α, β, π−α, π−β).

    Unit-length creases from the origin, closed off by boundary chords so
    the center is an interior vertex.
    """
    if not (0.0 < alpha < math.pi and 0.0 < beta < math.pi):
        raise PatternError("sector angles alpha, beta must lie strictly between 0 and pi")
    return _star_pattern([0.0, alpha, alpha + beta, math.pi + beta])


def gen_symmetric_vertex(n: int) -> CreasePattern:
    """Degree-2n vertex with all sector angles equal to π/n, unit creases."""
    if n < 2:
        raise PatternError("symmetric vertex needs n >= 2")
    return _star_pattern([k * math.pi / n for k in range(2 * n)])


def _star_pattern(azimuths: list[float]) -> CreasePattern:
    verts: list[tuple[float, float]] = [(0.0, 0.0)]
    creases: list[Crease] = []
    k = len(azimuths)
    for phi in azimuths:
        verts.append((math.cos(phi), math.sin(phi)))
        creases.append(Crease(0, len(verts) - 1, "U"))
    for i in range(k):
        creases.append(Crease(1 + i, 1 + (i + 1) % k, "B"))
    return CreasePattern.build(verts, creases)


# -- vertex networks -----------------------------------------------------------


@dataclass(frozen=True)
class VertexNetwork:
    """Crease pattern plus the folding branch of every interior vertex.

    shared_creases are the creases joining two interior vertices; along
    them the doubled patterns of neighboring vertices must line up.
    """

    pattern: CreasePattern
    modes: Mapping[int, FoldMode]
    shared_creases: tuple[int, ...]

    @classmethod
    def from_pattern(cls, pattern: CreasePattern, modes: Mapping[int, FoldMode]) -> "VertexNetwork":
        interior = set(pattern.interior_vertices)
        missing = sorted(interior - set(modes))
        if missing:
            raise PatternError(f"no folding branch assigned to interior vertices {missing}")
        shared = tuple(
            ci
            for ci in pattern.interior_creases
            if {pattern.creases[ci].v0, pattern.creases[ci].v1} <= interior
        )
        return cls(pattern, dict(modes), shared)

    def adjacency(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Interior vertex -> ((neighbor vertex, shared crease id), ...)."""
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.pattern.interior_vertices}
        for ci in self.shared_creases:
            c = self.pattern.creases[ci]
            out[c.v0].append((c.v1, ci))
            out[c.v1].append((c.v0, ci))
        return {v: tuple(sorted(items)) for v, items in out.items()}

    def is_tree(self) -> bool:
        verts = self.pattern.interior_vertices
        if len(self.shared_creases) != len(verts) - 1:
            return False
        return self._connected()

    def _connected(self) -> bool:
        verts = self.pattern.interior_vertices
        if not verts:
            return False
        adj = self.adjacency()
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            for w, _ in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)


def _branch_of(star: VertexStar) -> FoldMode:
    """The folding branch moving all four creases of a tessellation vertex."""
    a = mode_vector(star, FoldMode.A)
    b = mode_vector(star, FoldMode.B)
    if a.degenerate == b.degenerate:
        raise PatternError(f"vertex {star.vertex} has no unique moving branch")
    return FoldMode.A if not a.degenerate else FoldMode.B


def infer_modes(pattern: CreasePattern) -> dict[int, FoldMode]:
    """Folding branch of every interior vertex.

    Prefers branch metadata stored by the DL connectors; without it each
    vertex must have a unique moving branch (tessellation vertices with
    collinear creases do, generic flat-foldable vertices have two).
    """
    meta = get_extra(pattern, NETWORK_KEY)
    if meta is not None:
        return {int(v): FoldMode(m) for v, m in meta["corner_modes"]}
    return {v: _branch_of(vertex_star(pattern, v)) for v in pattern.interior_vertices}


def _finish_network(pattern: CreasePattern) -> VertexNetwork:
    """Assign branches and M/V labels from the network's one-parameter motion."""
    modes = {v: _branch_of(vertex_star(pattern, v)) for v in pattern.interior_vertices}
    if modes:
        g = network_multipliers(pattern, modes)
        pattern = assign_mode_mv(pattern, g)
    return VertexNetwork.from_pattern(pattern, modes)


def gen_miura(rows: int, cols: int, angle: float) -> VertexNetwork:
    """Miura-ori with rows×cols parallelogram panels.

    ``angle`` is the sector between a zigzag crease and the straight
    (vertical) creases, strictly between 0 and π/2.
    """
    if rows < 1 or cols < 1:
        raise PatternError("need rows >= 1 and cols >= 1")
    if not 0.0 < angle < math.pi / 2:
        raise PatternError("panel angle must lie strictly between 0 and pi/2")
    dz = 1.0 / math.tan(angle)

    def vid(i: int, j: int) -> int:
        return i * (cols + 1) + j

    verts = [
        (float(j), i + (j % 2) * dz) for i in range(rows + 1) for j in range(cols + 1)
    ]
    creases = []
    for i in range(rows + 1):  # zigzag rows
        for j in range(cols):
            kind = "B" if i in (0, rows) else "U"
            creases.append(Crease(vid(i, j), vid(i, j + 1), kind))
    for j in range(cols + 1):  # straight columns
        for i in range(rows):
            kind = "B" if j in (0, cols) else "U"
            creases.append(Crease(vid(i, j), vid(i + 1, j), kind))
    return _finish_network(CreasePattern.build(verts, creases))


def gen_yoshimura(rows: int, cols: int, elongation: float) -> VertexNetwork:
    """Elongated Yoshimura pattern: rows strips of staggered trapezoids.

    Each crossing of the plain (triangular) Yoshimura pattern is split into
    two degree-4 vertices joined by a short horizontal crease; ``elongation``
    is the period of the long pattern relative to the plain one and must
    exceed 1 for the split to have positive width.
    """
    if rows < 1 or cols < 1:
        raise PatternError("need rows >= 1 and cols >= 1")
    if elongation <= 1.0:
        raise PatternError("elongation must exceed 1")
    d = 1.0 / math.sqrt(3.0)  # horizontal run of each diagonal
    g = (elongation - 1.0) * d
    period = 2.0 * (d + g)

    faces: list[list[tuple[float, float]]] = []
    for i in range(rows):
        phase = (i % 2) * period / 2.0
        lo, hi = float(i), float(i + 1)
        up_range = range(cols) if i % 2 == 0 else range(cols - 1)
        for k in up_range:  # long edge below, short gap edge above
            c = k * period + phase
            faces.append(
                [
                    (c + g / 2.0, lo),
                    (c + period - g / 2.0, lo),
                    (c + period / 2.0 + g / 2.0, hi),
                    (c + period / 2.0 - g / 2.0, hi),
                ]
            )
        inv_range = range(1, cols) if i % 2 == 0 else range(cols)
        for k in inv_range:  # short gap edge below, long edge above
            c = k * period + phase
            faces.append(
                [
                    (c - g / 2.0, lo),
                    (c + g / 2.0, lo),
                    (c + period / 2.0 - g / 2.0, hi),
                    (c - period / 2.0 + g / 2.0, hi),
                ]
            )

    registry: dict[tuple[float, float], int] = {}
    verts: list[tuple[float, float]] = []

    def vid(p: tuple[float, float]) -> int:
        key = (round(p[0], 9), round(p[1], 9))
        if key not in registry:
            registry[key] = len(verts)
            verts.append(p)
        return registry[key]

    edge_count: dict[tuple[int, int], int] = {}
    for poly in faces:
        ids = [vid(p) for p in poly]
        for a, b in zip(ids, ids[1:] + ids[:1]):
            key = (min(a, b), max(a, b))
            edge_count[key] = edge_count.get(key, 0) + 1
    creases = [
        Crease(a, b, "B" if n == 1 else "U") for (a, b), n in sorted(edge_count.items())
    ]
    return _finish_network(CreasePattern.build(verts, creases))


def face_loop_products(network: VertexNetwork) -> dict[int, float]:
    """Speed-coefficient products around faces bounded by interior vertices.

    The doubling of a network can only fold rigidly when every such product
    equals 1; tree networks have no such faces.
    """
    pattern = network.pattern
    interior = set(pattern.interior_vertices)
    out = {}
    for fi, cycle in enumerate(pattern.faces):
        if not set(cycle) <= interior:
            continue
        crease_of = {}
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            for ci in pattern.incident[a]:
                if {pattern.creases[ci].v0, pattern.creases[ci].v1} == {a, b}:
                    crease_of[(a, b)] = ci
        prod = 1.0
        k = len(cycle)
        for idx in range(k):
            v = cycle[idx]
            c_in = crease_of[(cycle[(idx - 1) % k], v)]
            c_out = crease_of[(v, cycle[(idx + 1) % k])]
            star = vertex_star(pattern, v)
            mv = mode_vector(star, network.modes[v])
            m_in = mv[star.crease_ids.index(c_in)]
            if abs(m_in) < 1e-15:
                raise PatternError(f"frozen crease {c_in} in a face loop")
            prod *= mv[star.crease_ids.index(c_out)] / m_in
        out[fi] = prod
    return out


# -- the doubling connection ---------------------------------------------------


@dataclass
class _DlVertex:
    vertex: int
    star: VertexStar
    azimuths: tuple[float, ...]
    signs: tuple[str, ...] | None = None
    mode_label: str = ""
    theta: float = 0.0
    scale: float = 1.0
    radii: list[float] | None = None
    mult: object = None

    def corners(self, origin: np.ndarray) -> list[np.ndarray]:
        return [origin + c for c in _dl_corners(self.azimuths, self.radii, self.theta)]


def _dl_corners(azimuths, radii, theta) -> list[np.ndarray]:
    n = len(azimuths)
    pts = []
    for i in range(n):
        j = (i + 1) % n
        try:
            pts.append(
                intersect_lines(
                    radii[i] * unit(azimuths[i]),
                    unit(azimuths[i] + theta),
                    radii[j] * unit(azimuths[j]),
                    unit(azimuths[j] + theta),
                )
            )
        except ValueError as exc:
            raise DlError(f"polygon sides {i} and {j} are parallel") from exc
    return pts


def _corners_valid(azimuths, radii, theta) -> bool:
    """Positive polygon with every side running along its construction line."""
    try:
        pts = _dl_corners(azimuths, radii, theta)
    except DlError:
        return False
    if polygon_area(np.array(pts)) <= 0.0:
        return False
    n = len(pts)
    for i in range(n):
        side = pts[i] - pts[(i - 1) % n]
        if float(np.dot(side, unit(azimuths[i] + theta))) <= 1e-12:
            return False
    return True


def _outer_cycle(pattern: CreasePattern) -> tuple[int, ...]:
    interior = set(pattern._extract_faces(keep_outer=False))
    outer = [f for f in pattern._extract_faces(keep_outer=True) if f not in interior]
    if len(outer) != 1:
        raise DlError("pattern boundary is not a single cycle")
    return outer[0]


def _solve_child(dv: _DlVertex, axis: int, target_plus: float, target_minus: float,
                 fixed_theta: float | None, family: FoldMode) -> None:
    """Pick the child's mode variant (and θ when not fixed) matching a pair ratio."""
    alpha, beta = dv.star.sectors[0], dv.star.sectors[1]
    last = None
    for mode in _FAMILY_MODES[family]:
        try:
            if fixed_theta is None:
                cls, swapped = _AXIS_CLASS[mode.label][axis]
                pair = (target_plus, target_minus) if not swapped else (target_minus, target_plus)
                theta = theta_for_ratio(mode, cls, alpha, beta, DoubleLineRatio(*pair))
            else:
                theta = fixed_theta
            mult = dl_multipliers(dv.star.sectors, mode.signs, theta)
            if mult.closure_error > 1e-9:
                raise DlError(f"mode {mode.label} does not close on vertex {dv.vertex}")
            m_plus, m_minus = mult.rays_plus[axis], mult.rays_minus[axis]
            if abs(m_plus) < 1e-15:
                raise DlError(f"frozen doubled pair on vertex {dv.vertex}")
            scale = target_plus / m_plus
            err = abs(m_minus * scale - target_minus)
            if err > 1e-9 * max(abs(target_minus), abs(target_plus), 1.0):
                raise DlError(
                    f"pair ratio mismatch on vertex {dv.vertex} in mode {mode.label}"
                )
            dv.signs, dv.mode_label, dv.theta, dv.scale, dv.mult = (
                mode.signs, mode.label, theta, scale, mult,
            )
            return
        except DlError as exc:
            last = exc
    raise DlError(f"no folding branch of vertex {dv.vertex} matches the shared pair: {last}")


def _solve_radii(network: VertexNetwork, dls: dict[int, "_DlVertex"],
                 axis_of: Mapping[int, Mapping[int, int]]) -> None:
    """Polygon distances lining every doubled pair up across shared creases.

    The alignment equations (each shared pair's two lines coincide) and the
    validity conditions (positive distances, positive polygon side lengths)
    are all linear in the distances, so one linear program maximizing the
    smallest of them either finds a uniformly safe solution or proves the
    chosen rotation angles admit none.
    """
    pattern = network.pattern
    interior = sorted(dls)
    pos = {v: 4 * k for k, v in enumerate(interior)}
    n = 4 * len(interior)

    def oplus_row(dv: _DlVertex, i: int, row: np.ndarray, base: int) -> None:
        st = math.sin(dv.theta)
        s_i = dv.star.sectors[i]
        row[base + (i + 1) % 4] += st * st / math.sin(s_i)
        row[base + i] += -st * math.sin(dv.theta + s_i) / math.sin(s_i)

    def ominus_row(dv: _DlVertex, i: int, row: np.ndarray, base: int) -> None:
        st = math.sin(dv.theta)
        s_p = dv.star.sectors[(i - 1) % 4]
        row[base + i] += st * math.sin(dv.theta - s_p) / math.sin(s_p)
        row[base + (i - 1) % 4] += -st * st / math.sin(s_p)

    eq_rows: list[np.ndarray] = []
    for ci in network.shared_creases:
        c = pattern.creases[ci]
        u, w = c.v0, c.v1
        iu, iw = axis_of[u][ci], axis_of[w][ci]
        r1 = np.zeros(n)
        oplus_row(dls[u], iu, r1, pos[u])
        ominus_row(dls[w], iw, r1, pos[w])
        r2 = np.zeros(n)
        ominus_row(dls[u], iu, r2, pos[u])
        oplus_row(dls[w], iw, r2, pos[w])
        eq_rows += [r1, r2]

    side_rows: list[np.ndarray] = []
    for v in interior:
        dv = dls[v]
        base = pos[v]
        basis = [
            _dl_corners(dv.azimuths, [1.0 if j == k else 0.0 for j in range(4)], dv.theta)
            for k in range(4)
        ]
        for i in range(4):
            d = unit(dv.azimuths[i] + dv.theta)
            row = np.zeros(n)
            for k in range(4):
                row[base + k] = float(np.dot(basis[k][i] - basis[k][(i - 1) % 4], d))
            side_rows.append(row)
        for i in range(4):
            # pair separation: keep the doubled lines of each axis well apart
            row = np.zeros(n)
            oplus_row(dv, i, row, base)
            neg = np.zeros(n)
            ominus_row(dv, i, neg, base)
            side_rows.append(row - neg)

    nv = n + 1  # distances plus the common safety margin t
    c_obj = np.zeros(nv)
    c_obj[-1] = -1.0
    a_ub = []
    for k in range(n):
        row = np.zeros(nv)
        row[k] = -1.0
        row[-1] = 1.0
        a_ub.append(row)
    for srow in side_rows:
        row = np.zeros(nv)
        row[:n] = -srow
        row[-1] = 1.0
        a_ub.append(row)
    a_eq = [np.concatenate([erow, [0.0]]) for erow in eq_rows]
    norm = np.zeros(nv)
    norm[:n] = 1.0
    a_eq.append(norm)
    b_eq = np.zeros(len(a_eq))
    b_eq[-1] = float(n)
    res = linprog(
        c_obj,
        A_ub=np.array(a_ub),
        b_ub=np.zeros(len(a_ub)),
        A_eq=np.array(a_eq),
        b_eq=b_eq,
        bounds=[(None, None)] * nv,
        method="highs",
    )
    if not res.success or res.x[-1] <= 1e-6:
        raise DlError("no workable polygon distances for these rotation angles")
    r = res.x[:n]
    if eq_rows:
        # The solver meets the alignment equations only to its own tolerance;
        # project back onto their exact null space.
        m = np.array(eq_rows)
        corr, *_ = np.linalg.lstsq(m, m @ r, rcond=None)
        r = r - corr
    margin = float(res.x[-1])
    if float(np.min(r)) <= 0.5 * margin or float(np.min(np.array(side_rows) @ r)) <= 0.5 * margin:
        raise DlError("polygon distances lost validity under exact alignment")
    for v in interior:
        dls[v].radii = [float(x) for x in r[pos[v]: pos[v] + 4]]
        if not _corners_valid(dls[v].azimuths, dls[v].radii, dls[v].theta):
            raise DlError(f"no workable polygon distances at vertex {v}")


def _connect_dl(
    network: VertexNetwork,
    *,
    theta_root: float | None = None,
    thetas: Mapping[int, float] | None = None,
    require_tree: bool = False,
    root_variant: int = 0,
    reach_fraction: float = 0.3,
) -> tuple[dict[int, float], CreasePattern]:
    pattern = network.pattern
    interior = pattern.interior_vertices
    if not interior:
        raise DlError("network has no interior vertices to double")
    if require_tree and not network.is_tree():
        raise DlError("vertex adjacency is not a tree")
    if len(interior) > 1 and not network._connected():
        raise DlError("interior vertices do not form a connected network")

    dls: dict[int, _DlVertex] = {}
    for v in interior:
        star = vertex_star(pattern, v)
        if not is_flat_foldable_deg4(star):
            raise DlError(f"vertex {v} is not a flat-foldable degree-4 vertex")
        az = [pattern.crease_azimuth(ci, v) for ci in star.crease_ids]
        dls[v] = _DlVertex(v, star, tuple(az))

    solve = thetas is None
    root = min(interior)
    rv = dls[root]
    rv_mode = _FAMILY_MODES[network.modes[root]][root_variant % 2]
    rv.theta = theta_root if solve else thetas[root]
    if not 0.0 < rv.theta < math.pi:
        raise DlError("rotation angle must lie strictly between 0 and pi")
    if solve and classify_theta(rv_mode, rv.star.sectors[0], rv.star.sectors[1], rv.theta).tag == CRITICAL:
        raise DlError("root rotation angle is critical; pick a nearby value")
    rv.mult = dl_multipliers(rv.star.sectors, rv_mode.signs, rv.theta)
    if rv.mult.closure_error > 1e-9:
        raise DlError(f"mode {rv_mode.label} does not close on vertex {root}")
    rv.signs, rv.mode_label, rv.scale = rv_mode.signs, rv_mode.label, 1.0

    # Breadth-first propagation of θ, scale and radii across shared creases.
    adj = network.adjacency()
    axis_of = {v: {ci: dls[v].star.crease_ids.index(ci) for _, ci in adj[v]} for v in interior}
    order = [root]
    parent_edge: dict[int, tuple[int, int]] = {}
    seen = {root}
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for w, ci in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            parent_edge[w] = (u, ci)
            order.append(w)
    tree_edges = {(min(u, w), max(u, w), ci) for w, (u, ci) in parent_edge.items()}

    for w in order[1:]:
        u, ci = parent_edge[w]
        du, dw = dls[u], dls[w]
        i_u, i_w = axis_of[u][ci], axis_of[w][ci]
        _solve_child(
            dw, i_w,
            du.mult.rays_minus[i_u] * du.scale,
            du.mult.rays_plus[i_u] * du.scale,
            None if solve else thetas[w],
            network.modes[w],
        )

    _solve_radii(network, dls, axis_of)

    # One global rescale keeps every polygon well inside its vertex's creases.
    lengths = pattern.vertices_array
    factor = math.inf
    for v in interior:
        dv = dls[v]
        reach = max(float(np.linalg.norm(c)) for c in _dl_corners(dv.azimuths, dv.radii, dv.theta))
        edge_len = min(
            float(np.linalg.norm(lengths[pattern.creases[ci].v1] - lengths[pattern.creases[ci].v0]))
            for ci in dv.star.crease_ids
        )
        factor = min(factor, reach_fraction * edge_len / reach)
    for v in interior:
        dls[v].radii = [r * factor for r in dls[v].radii]

    # Loop conditions on the shared creases outside the spanning tree.
    for ci in network.shared_creases:
        c = pattern.creases[ci]
        u, w = c.v0, c.v1
        if (min(u, w), max(u, w), ci) in tree_edges:
            continue
        du, dw = dls[u], dls[w]
        i_u, i_w = axis_of[u][ci], axis_of[w][ci]
        a_p = du.mult.rays_plus[i_u] * du.scale
        a_m = du.mult.rays_minus[i_u] * du.scale
        b_p = dw.mult.rays_plus[i_w] * dw.scale
        b_m = dw.mult.rays_minus[i_w] * dw.scale
        m_scale = max(abs(a_p), abs(a_m), 1.0)
        if abs(a_p - b_m) > 1e-9 * m_scale or abs(a_m - b_p) > 1e-9 * m_scale:
            raise DlError(f"doubled pairs disagree around a loop at crease {ci}")
        op_u = axis_offsets(du.star.sectors, du.radii, du.theta)[i_u]
        op_w = axis_offsets(dw.star.sectors, dw.radii, dw.theta)[i_w]
        g_scale = max(abs(op_u[0]), abs(op_u[1]), 1e-9)
        if abs(op_u[0] + op_w[1]) > 1e-9 * g_scale or abs(op_u[1] + op_w[0]) > 1e-9 * g_scale:
            raise DlError(f"doubled lines fail to line up around a loop at crease {ci}")

    return {v: dls[v].theta for v in interior}, _assemble(network, dls)


def _assemble(network: VertexNetwork, dls: dict[int, "_DlVertex"]) -> CreasePattern:
    pattern = network.pattern
    pts_in = pattern.vertices_array
    interior = set(pattern.interior_vertices)

    verts: list[tuple[float, float]] = []

    def add_vertex(p) -> int:
        for k, q in enumerate(verts):
            if abs(q[0] - p[0]) < 1e-7 and abs(q[1] - p[1]) < 1e-7:
                return k
        verts.append((float(p[0]), float(p[1])))
        return len(verts) - 1

    creases: list[Crease] = []
    mults: list[float] = []

    def add_crease(a: int, b: int, mult: float, kind: str = "U") -> int:
        creases.append(Crease(a, b, kind))
        mults.append(mult)
        return len(creases) - 1

    corner_ids: dict[int, list[int]] = {}
    for v in sorted(interior):
        dv = dls[v]
        corner_ids[v] = [add_vertex(c) for c in dv.corners(pts_in[v])]

    side_ids: dict[int, list[int]] = {}
    for v in sorted(interior):
        dv = dls[v]
        ids = corner_ids[v]
        side_ids[v] = [
            add_crease(ids[(i - 1) % 4], ids[i], dv.mult.sides[i] * dv.scale)
            for i in range(4)
        ]

    outer = _outer_cycle(pattern)
    boundary_pts = [pts_in[v] for v in outer]
    splits: dict[int, list[tuple[float, int]]] = {k: [] for k in range(len(outer))}

    def clip_ray(origin: np.ndarray, direction: np.ndarray) -> int:
        best = None
        for k in range(len(outer)):
            a = boundary_pts[k]
            b = boundary_pts[(k + 1) % len(outer)]
            e = b - a
            det = direction[0] * (-e[1]) - (-e[0]) * direction[1]
            if abs(det) < 1e-14:
                continue
            rhs = a - origin
            s = (rhs[0] * (-e[1]) - (-e[0]) * rhs[1]) / det
            tau = (direction[0] * rhs[1] - direction[1] * rhs[0]) / det
            if s > 1e-9 and -1e-12 <= tau <= 1.0 + 1e-12:
                if best is None or s < best[0]:
                    best = (s, k, min(max(tau, 0.0), 1.0))
        if best is None:
            raise DlError("doubled crease does not reach the pattern boundary")
        s, k, tau = best
        hit = add_vertex(origin + s * direction)
        splits[k].append((tau, hit))
        return hit

    pairs: list[tuple[int, int, int]] = []
    done: set[int] = set()
    for v in sorted(interior):
        dv = dls[v]
        for i, ci in enumerate(dv.star.crease_ids):
            if ci in done:
                continue
            done.add(ci)
            c = pattern.creases[ci]
            other = c.v1 if c.v0 == v else c.v0
            cu = corner_ids[v]
            m_plus = dv.mult.rays_plus[i] * dv.scale
            m_minus = dv.mult.rays_minus[i] * dv.scale
            if other in interior:
                dw = dls[other]
                j = dw.star.crease_ids.index(ci)
                cw = corner_ids[other]
                plus_id = add_crease(cu[i], cw[(j - 1) % 4], m_plus)
                minus_id = add_crease(cu[(i - 1) % 4], cw[j], m_minus)
            else:
                u_dir = unit(dv.azimuths[i])
                plus_id = add_crease(
                    cu[i], clip_ray(np.asarray(verts[cu[i]]), u_dir), m_plus
                )
                minus_id = add_crease(
                    cu[(i - 1) % 4], clip_ray(np.asarray(verts[cu[(i - 1) % 4]]), u_dir), m_minus
                )
            pairs.append((ci, plus_id, minus_id))

    for k in range(len(outer)):
        chain = [add_vertex(boundary_pts[k])]
        chain += [h for _, h in sorted(splits[k])]
        chain.append(add_vertex(boundary_pts[(k + 1) % len(outer)]))
        for a, b in zip(chain, chain[1:]):
            if a != b:
                add_crease(a, b, 0.0, "B")

    try:
        out = CreasePattern.build(verts, creases)
    except PatternError as exc:
        raise DlError(f"doubled network has a degenerate embedding: {exc}") from exc
    out = assign_mode_mv(out, np.array(mults))

    # Every corner follows the branch whose multipliers it carries; recovering
    # the branches lets an independent network solve confirm the assembly.
    corner_modes: dict[int, str] = {}
    for v in sorted(interior):
        for cv in corner_ids[v]:
            star = vertex_star(out, cv)
            want = np.array([mults[ci] for ci in star.crease_ids])
            best, best_d = None, math.inf
            for fm in (FoldMode.A, FoldMode.B):
                mv = np.array(mode_vector(star, fm).multipliers)
                d = float(
                    np.linalg.norm(want - mv * (want @ mv) / (mv @ mv))
                ) / max(float(np.linalg.norm(want)), 1e-300)
                if d < best_d:
                    best, best_d = fm, d
            if best_d > 1e-8:
                raise DlError(f"corner {cv} multipliers match neither folding branch")
            corner_modes[cv] = best.value

    try:
        g = network_multipliers(out, {v: FoldMode(m) for v, m in corner_modes.items()})
    except Fold3dError as exc:
        raise DlError(f"doubled network admits no rigid motion: {exc}") from exc
    k = int(np.argmax(np.abs(g)))
    ref = np.array(mults)
    if np.max(np.abs(g * ref[k] - ref)) > 1e-8 * np.max(np.abs(ref)):
        raise DlError("doubled network motion disagrees with the per-vertex solution")

    meta = {
        "pairs": [[int(a), int(b), int(c)] for a, b, c in sorted(pairs)],
        "corners": [[int(v), [int(c) for c in corner_ids[v]]] for v in sorted(interior)],
        "sides": [[int(v), [int(s) for s in side_ids[v]]] for v in sorted(interior)],
        "thetas": [[int(v), dls[v].theta] for v in sorted(interior)],
        "scales": [[int(v), dls[v].scale] for v in sorted(interior)],
        "signs": [[int(v), "".join(dls[v].signs)] for v in sorted(interior)],
        "corner_modes": [[int(cv), m] for cv, m in sorted(corner_modes.items())],
        "multipliers": [float(m) for m in mults],
    }
    return set_extra(out, NETWORK_KEY, meta)


def connect_tree_dl(network: VertexNetwork, theta_root: float) -> tuple[dict[int, float], CreasePattern]:
    """Double every vertex of a tree network, rooted at the lowest vertex id.

    The root gets θ_root; each child's θ is solved so its doubled pair on
    the shared crease folds with the same angles as the parent's.  When a
    shared pair lands on an unreachable ratio, θ_root is nudged in ±0.5°
    steps (up to ±5°) before giving up.
    """
    if not 0.0 < theta_root < math.pi:
        raise DlError("theta_root must lie strictly between 0 and pi")
    last: DlError | None = None
    for k in range(0, 11):
        for sign in (1,) if k == 0 else (1, -1):
            th = theta_root + sign * k * math.radians(0.5)
            if not 0.0 < th < math.pi:
                continue
            for variant in (0, 1):
                try:
                    return _connect_dl(
                        network, theta_root=th, require_tree=True, root_variant=variant
                    )
                except DlError as exc:
                    last = exc
    raise DlError(f"no workable rotation angle near the requested root value: {last}")


def connect_uniform_dl(network: VertexNetwork, theta: float) -> CreasePattern:
    """Double every vertex of a network with one shared rotation angle.

    Unlike connect_tree_dl this handles cyclic networks, but only succeeds
    when one θ closes every loop; the cyclic conditions are verified, not
    assumed, so asymmetric networks are rejected.
    """
    if not 0.0 < theta < math.pi:
        raise DlError("theta must lie strictly between 0 and pi")
    thetas = {v: theta for v in network.pattern.interior_vertices}
    last: DlError | None = None
    for variant in (0, 1):
        try:
            return _connect_dl(network, thetas=thetas, root_variant=variant)[1]
        except DlError as exc:
            last = exc
    raise DlError(f"uniform rotation angle does not close this network: {last}")


def gen_dl_miura(rows: int, cols: int, angle: float, theta: float) -> CreasePattern:
    """Doubled Miura-ori: every vertex replaced by its polygon at one θ."""
    return connect_uniform_dl(gen_miura(rows, cols, angle), theta)


def gen_dl_yoshimura(rows: int, cols: int, elongation: float, theta: float) -> CreasePattern:
    """Doubled elongated Yoshimura pattern at one θ."""
    return connect_uniform_dl(gen_yoshimura(rows, cols, elongation), theta)
