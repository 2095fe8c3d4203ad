"""Verification passes over patch complexes.

Identifies shared edges by sampled boundary coincidence, checks C1 gluing
(position gaps and oriented-normal angles), assembles the face/edge/vertex
counts for the Euler characteristic, and audits curvature bounds.

Coincident duplicated sheets (a thin membrane stored once per side with
opposite orientations) are detected and paired with each other; the normal
check between the two copies of one sheet is skipped, since their oriented
normals are antiparallel by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import TOL_POS, TOL_ANG, TOL_VERTEX, SAMPLES_PER_SIDE
from .geometry import Patch


@dataclass(frozen=True)
class BoundarySide:
    patch: int
    side: int
    degenerate: bool
    samples: np.ndarray  # (S, 3) world points
    params: np.ndarray  # (S, 2) parameter points


@dataclass
class EdgeMatch:
    a: tuple  # (patch, side)
    b: tuple
    reversed: bool
    max_position_gap: float
    twins: bool  # both patches are coincident copies of one sheet


@dataclass
class GluingReport:
    edges: list
    max_gap: float
    max_angle: float
    worst_gap_edge: tuple | None
    worst_angle_edge: tuple | None
    passed: bool


@dataclass
class TopologyReport:
    faces: int
    edges: int
    vertices: int
    euler: int
    components: int
    closed: bool
    unmatched: list


@dataclass
class CurvatureReport:
    bound: float
    per_patch: list  # (label, lo, hi, grid_lo, grid_hi, ok)
    passed: bool


class AmbiguityError(RuntimeError):
    pass


# ---------------------------------------------------------------------------


def _side_points(patch: Patch, side, n: int):
    t = np.linspace(0.0, 1.0, n)
    pq = side.params(t)
    return patch.point_unchecked(pq[:, 0], pq[:, 1]), pq


def collect_sides(patches, samples_per_side: int = SAMPLES_PER_SIDE):
    sides = []
    for i, p in enumerate(patches):
        for j, s in enumerate(p.boundary_sides()):
            pts, pq = _side_points(p, s, samples_per_side)
            diam = np.linalg.norm(pts - pts[0], axis=1).max()
            sides.append(BoundarySide(i, j, diam < 1e-9, pts, pq))
    return sides


def _nearest_on_side(patch: Patch, side, X: np.ndarray, grid_n: int = 256):
    """Distance from each row of X to the side's curve, with curve params.

    Coarse grid argmin followed by vectorized golden-section refinement.
    """
    tg = np.linspace(0.0, 1.0, grid_n)
    q = side.params(tg)
    P = patch.point_unchecked(q[:, 0], q[:, 1])
    d = np.linalg.norm(X[:, None, :] - P[None, :, :], axis=2)
    j = d.argmin(axis=1)
    h = 1.0 / (grid_n - 1)
    lo = np.clip(tg[j] - h, 0.0, 1.0)
    hi = np.clip(tg[j] + h, 0.0, 1.0)
    phi = (math.sqrt(5.0) - 1.0) / 2.0

    def dist_at(t):
        qq = side.params(t)
        return np.linalg.norm(patch.point_unchecked(qq[:, 0], qq[:, 1]) - X, axis=1)

    c = hi - phi * (hi - lo)
    dnew = lo + phi * (hi - lo)
    fc = dist_at(c)
    fd = dist_at(dnew)
    for _ in range(60):
        left = fc < fd
        hi = np.where(left, dnew, hi)
        lo = np.where(left, lo, c)
        c = hi - phi * (hi - lo)
        dnew = lo + phi * (hi - lo)
        fc = dist_at(c)
        fd = dist_at(dnew)
    t = (lo + hi) / 2.0
    return dist_at(t), t


def _side_to_side_gap(patches, sides, a: int, b: int):
    """max over samples of side a of the distance to side b's curve."""
    sb = patches[sides[b].patch].boundary_sides()[sides[b].side]
    d, _ = _nearest_on_side(patches[sides[b].patch], sb, sides[a].samples)
    return float(d.max())


def _patches_coincident(pa: Patch, pb: Patch, n: int = 5) -> bool:
    """True when pa's interior lies on pb's surface and vice versa."""
    def one_way(p, q):
        uu = np.linspace(p.domain[0], p.domain[1], n + 2)[1:-1]
        vv = np.linspace(p.domain[2], p.domain[3], n + 2)[1:-1]
        U, V = np.meshgrid(uu, vv, indexing="ij")
        keep = p.inside(U, V)
        if not keep.any():
            return False
        pts = p.point_unchecked(U, V)[keep]
        d, ins = q.surface_distance(pts)
        return bool(((d < 1e-9) & ins).all())

    return one_way(pa, pb) and one_way(pb, pa)


def _side_mean_normal(patches, sides, k: int) -> np.ndarray:
    s = sides[k]
    p = patches[s.patch]
    n = p.normal(s.params[:, 0], s.params[:, 1])
    m = n.mean(axis=0)
    return m / max(np.linalg.norm(m), 1e-30)


def _pair_group(patches, sides, group):
    """Pair a group of >2 coincident sides.

    Coincident doubled sheets may pair antiparallel; every other pair must
    have aligned normals.  Among valid perfect matchings the one with the
    largest total alignment is chosen (deterministically).
    """
    normals = {k: _side_mean_normal(patches, sides, k) for k in group}
    twins = {}
    for i, a in enumerate(group):
        for b in group[i + 1:]:
            twins[(a, b)] = _patches_coincident(patches[sides[a].patch],
                                                patches[sides[b].patch])

    best = [None, -np.inf]

    def rec(rest, acc, score):
        if not rest:
            if score > best[1]:
                best[0] = list(acc)
                best[1] = score
            return
        a = rest[0]
        for b in rest[1:]:
            dot = float(normals[a] @ normals[b])
            tw = twins[(min(a, b), max(a, b))]
            if dot < 0.8 and not tw:
                continue  # non-twin pairs must be C1-compatible
            rec([r for r in rest[1:] if r != b], acc + [(a, b)],
                score + (dot if not tw else 0.5))
        return

    rec(list(group), [], 0.0)
    return best[0]


def identify_edges(patches, samples_per_side: int = SAMPLES_PER_SIDE,
                   tau_pos: float = TOL_POS):
    """Match nondegenerate sides pairwise by sampled coincidence.

    Returns (matches, unmatched) where unmatched lists (patch, side) pairs.
    Raises AmbiguityError when a side coincides with several others and no
    consistent pairing exists.
    """
    if samples_per_side < 3:
        raise ValueError("samples_per_side must be >= 3")
    sides = collect_sides(patches, samples_per_side)
    live = [k for k, s in enumerate(sides) if not s.degenerate]
    pad = 1e-3
    boxes = {k: (sides[k].samples.min(0) - pad, sides[k].samples.max(0) + pad)
             for k in live}
    cands = {k: [] for k in live}
    for ii, k in enumerate(live):
        for m in live[ii + 1:]:
            alo, ahi = boxes[k]
            blo, bhi = boxes[m]
            if (alo > bhi).any() or (blo > ahi).any():
                continue
            if _side_to_side_gap(patches, sides, k, m) <= tau_pos and \
                    _side_to_side_gap(patches, sides, m, k) <= tau_pos:
                cands[k].append(m)
                cands[m].append(k)
    matched = {}
    groups_done = set()
    for k in live:
        if k in matched or not cands[k]:
            continue
        group = sorted({k, *cands[k]})
        gkey = tuple(group)
        if gkey in groups_done:
            continue
        groups_done.add(gkey)
        if len(group) == 2:
            a, b = group
            matched[a] = b
            matched[b] = a
            continue
        if len(group) % 2 != 0:
            labels = [patches[sides[g].patch].label for g in group]
            raise AmbiguityError(f"side group of odd size {len(group)}: {labels}")
        pairing = _pair_group(patches, sides, group)
        if pairing is None:
            labels = [patches[sides[g].patch].label for g in group]
            raise AmbiguityError(f"ambiguous side group: {labels}")
        for a, b in pairing:
            matched[a] = b
            matched[b] = a
    matches = []
    seen = set()
    for a, b in matched.items():
        if (b, a) in seen:
            continue
        seen.add((a, b))
        sa, sb = sides[a], sides[b]
        d0 = np.linalg.norm(sa.samples[0] - sb.samples[0])
        d1 = np.linalg.norm(sa.samples[0] - sb.samples[-1])
        rev = d1 < d0
        gap = max(_side_to_side_gap(patches, sides, a, b),
                  _side_to_side_gap(patches, sides, b, a))
        twins = _patches_coincident(patches[sa.patch], patches[sb.patch])
        matches.append(EdgeMatch((sa.patch, sa.side), (sb.patch, sb.side),
                                 bool(rev), float(gap), twins))
    unmatched = [(sides[k].patch, sides[k].side) for k in live if k not in matched]
    return matches, unmatched, sides


def check_c1(patches, matches, samples_per_edge: int = SAMPLES_PER_SIDE,
             tau_pos: float = TOL_POS, tau_ang: float = TOL_ANG) -> GluingReport:
    """Position gaps and oriented-normal angles along every matched edge."""
    rows = []
    worst_gap = (0.0, None)
    worst_ang = (0.0, None)
    for m in matches:
        pa = patches[m.a[0]]
        pb = patches[m.b[0]]
        sa = pa.boundary_sides()[m.a[1]]
        sb = pb.boundary_sides()[m.b[1]]
        t = np.linspace(0.0, 1.0, samples_per_edge)
        qa = sa.params(t)
        xa = pa.point_unchecked(qa[:, 0], qa[:, 1])
        dists, tb = _nearest_on_side(pb, sb, xa)
        gap = float(dists.max())
        qb = sb.params(tb)
        na = pa.normal(qa[:, 0], qa[:, 1])
        nb = pb.normal(qb[:, 0], qb[:, 1])
        dots = np.clip((na * nb).sum(-1), -1.0, 1.0)
        if m.twins:
            ang = 0.0  # coincident twin sheets carry opposite orientations
        else:
            ang = float(np.arccos(dots).max())
        rows.append((m, gap, ang))
        if gap > worst_gap[0]:
            worst_gap = (gap, m)
        if ang > worst_ang[0]:
            worst_ang = (ang, m)
    passed = all(g <= tau_pos and a <= tau_ang for _, g, a in rows)
    return GluingReport(rows, worst_gap[0], worst_ang[0],
                        worst_gap[1] and (worst_gap[1].a, worst_gap[1].b),
                        worst_ang[1] and (worst_ang[1].a, worst_ang[1].b), passed)


def euler_characteristic(patches, matches, unmatched, sides,
                         tau_vertex: float = TOL_VERTEX) -> TopologyReport:
    """F - E + V with vertices obtained by clustering side endpoints."""
    F = len(patches)
    E = len(matches)
    pts = []
    for s in sides:
        if s.degenerate:
            continue
        pts.append(s.samples[0])
        pts.append(s.samples[-1])
    pts = np.array(pts) if pts else np.zeros((0, 3))
    nv = 0
    if len(pts):
        parent = list(range(len(pts)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        order = np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0]))
        # cluster: union points within tau_vertex (windowed by sorted x)
        for ii in range(len(order)):
            i = order[ii]
            for jj in range(ii + 1, len(order)):
                j = order[jj]
                if pts[j, 0] - pts[i, 0] > tau_vertex:
                    break
                if np.linalg.norm(pts[i] - pts[j]) <= tau_vertex:
                    parent[find(i)] = find(j)
        nv = len({find(i) for i in range(len(pts))})
    comp_parent = list(range(len(patches)))

    def cfind(i):
        while comp_parent[i] != i:
            comp_parent[i] = comp_parent[comp_parent[i]]
            i = comp_parent[i]
        return i

    for m in matches:
        comp_parent[cfind(m.a[0])] = cfind(m.b[0])
    ncomp = len({cfind(i) for i in range(len(patches))})
    return TopologyReport(F, E, nv, F - E + nv, ncomp,
                          len(unmatched) == 0, list(unmatched))


def check_curvature_bounds(patches, bound: float = 1.0, grid: int = 16,
                           slack: float = 1e-9) -> CurvatureReport:
    """Rigorous per-patch curvature enclosures plus grid sample extrema."""
    if grid < 16:
        raise ValueError("grid must be >= 16")
    rows = []
    ok_all = True
    for p in patches:
        lo, hi = p.curvature_range()
        u0, u1, v0, v1 = p.domain
        us = u0 + (u1 - u0) * (np.arange(grid) + 0.5) / grid
        vs = v0 + (v1 - v0) * (np.arange(grid) + 0.5) / grid
        U, V = np.meshgrid(us, vs, indexing="ij")
        k1, k2 = p.principal_curvatures(U, V)
        glo, ghi = float(k1.min()), float(k2.max())
        ok = lo >= -bound - slack and hi <= bound + slack \
            and glo >= lo - 1e-12 and ghi <= hi + 1e-12
        ok_all &= ok
        rows.append((p.label, lo, hi, glo, ghi, ok))
    return CurvatureReport(bound, rows, ok_all)
