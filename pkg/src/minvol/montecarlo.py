"""Monte Carlo volume estimation.

Two independent routes:
  * ray-parity sampling against a watertight-per-patch triangulation of an
    oriented patch complex, and
  * direct region-predicate sampling (used for the cork decomposition pieces
    where the solid has an exact membership test).

Sampling is deterministic for a fixed seed; rays that graze a triangle edge
or a vertical plane are re-cast with a jittered direction (up to 8 retries,
then discarded and counted in the result's log).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SQRT3, PI, R1, MC_N, MC_SEED
from .geometry import Patch, Plane
from .volume import VolumeResult


# ---------------------------------------------------------------------------
# tessellation


def _earclip(poly: np.ndarray) -> list:
    """Triangulate a simple polygon (n x 2), CCW or CW."""
    pts = list(range(len(poly)))
    area2 = 0.0
    for i in range(len(poly)):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % len(poly)]
        area2 += x0 * y1 - x1 * y0
    ccw = area2 > 0
    tris = []
    guard = 0
    while len(pts) > 3 and guard < 10 * len(poly) ** 2:
        guard += 1
        n = len(pts)
        for k in range(n):
            i0, i1, i2 = pts[(k - 1) % n], pts[k], pts[(k + 1) % n]
            a, b, c = poly[i0], poly[i1], poly[i2]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if (cross <= 1e-14) if ccw else (cross >= -1e-14):
                continue
            ok = True
            for j in pts:
                if j in (i0, i1, i2):
                    continue
                p = poly[j]
                if _in_tri(p, a, b, c):
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                pts.pop(k)
                break
        else:
            break
    if len(pts) == 3:
        tris.append(tuple(pts))
    return tris


def _in_tri(p, a, b, c):
    d1 = (p[0] - b[0]) * (a[1] - b[1]) - (a[0] - b[0]) * (p[1] - b[1])
    d2 = (p[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (p[1] - c[1])
    d3 = (p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])
    neg = (d1 < -1e-14) or (d2 < -1e-14) or (d3 < -1e-14)
    pos = (d1 > 1e-14) or (d2 > 1e-14) or (d3 > 1e-14)
    return not (neg and pos)


def tessellate_patch(patch: Patch, res: int):
    """Vertices and oriented triangles (normals follow patch orientation)."""
    if isinstance(patch.family, Plane) and (patch.trims or patch.sides):
        # polygonize the boundary loop in parameter space
        loop = []
        for s in patch.boundary_sides():
            t = np.linspace(0.0, 1.0, 1 if s.kind == "seg" else max(2, 4 * res), endpoint=False) \
                if s.kind == "arc" else np.array([0.0])
            loop.append(s.params(t))
        poly = np.concatenate(loop, axis=0)
        # drop consecutive duplicates
        keep = [0]
        for i in range(1, len(poly)):
            if np.linalg.norm(poly[i] - poly[keep[-1]]) > 1e-12:
                keep.append(i)
        if np.linalg.norm(poly[keep[-1]] - poly[keep[0]]) < 1e-12:
            keep.pop()
        poly = poly[keep]
        tris = _earclip(poly)
        V = patch.point_unchecked(poly[:, 0], poly[:, 1])
        F = np.array(tris, dtype=int).reshape(-1, 3)
        # orient to the patch normal
        n = patch.normal(*_param_centroid(patch, poly))
        if len(F):
            a, b, c = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
            flip = ((np.cross(b - a, c - a)) @ n) < 0
            F[flip] = F[flip][:, [0, 2, 1]]
        return V, F
    u0, u1, v0, v1 = patch.domain
    us = np.linspace(u0, u1, res + 1)
    vs = np.linspace(v0, v1, res + 1)
    U, Vv = np.meshgrid(us, vs, indexing="ij")
    P = patch.point_unchecked(U, Vv).reshape(-1, 3)
    idx = np.arange((res + 1) * (res + 1)).reshape(res + 1, res + 1)
    a = idx[:-1, :-1].ravel()
    b = idx[1:, :-1].ravel()
    c = idx[1:, 1:].ravel()
    d = idx[:-1, 1:].ravel()
    F = np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])
    if patch.orientation < 0:
        F = F[:, [0, 2, 1]]
    if patch.trims:
        # keep triangles whose param centroid is inside the trim
        uc = (U.ravel()[F[:, 0]] + U.ravel()[F[:, 1]] + U.ravel()[F[:, 2]]) / 3
        vc = (Vv.ravel()[F[:, 0]] + Vv.ravel()[F[:, 1]] + Vv.ravel()[F[:, 2]]) / 3
        F = F[patch.inside(uc, vc)]
    return P, F


def _param_centroid(patch, poly):
    c = poly.mean(axis=0)
    return c[0], c[1]


def tessellate(patches, res: int):
    Vs, Fs, off = [], [], 0
    for p in patches:
        V, F = tessellate_patch(p, res)
        Vs.append(V)
        Fs.append(F + off)
        off += len(V)
    return np.concatenate(Vs), np.concatenate(Fs)


def mesh_volume(V: np.ndarray, F: np.ndarray) -> float:
    a, b, c = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


# ---------------------------------------------------------------------------
# ray parity


@dataclass
class ParityMesh:
    V: np.ndarray
    F: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    grid: dict
    nx: int
    ny: int
    cell: np.ndarray

    @staticmethod
    def build(V, F, nx=64, ny=64):
        lo = V.min(axis=0) - 1e-6
        hi = V.max(axis=0) + 1e-6
        cell = (hi[:2] - lo[:2]) / [nx, ny]
        tx = np.stack([V[F[:, k], 0] for k in range(3)], 1)
        ty = np.stack([V[F[:, k], 1] for k in range(3)], 1)
        ix0 = np.clip(((tx.min(1) - lo[0]) / cell[0]).astype(int), 0, nx - 1)
        ix1 = np.clip(((tx.max(1) - lo[0]) / cell[0]).astype(int), 0, nx - 1)
        iy0 = np.clip(((ty.min(1) - lo[1]) / cell[1]).astype(int), 0, ny - 1)
        iy1 = np.clip(((ty.max(1) - lo[1]) / cell[1]).astype(int), 0, ny - 1)
        grid = {}
        for t in range(len(F)):
            for ix in range(ix0[t], ix1[t] + 1):
                for iy in range(iy0[t], iy1[t] + 1):
                    grid.setdefault(ix * ny + iy, []).append(t)
        grid = {k: np.array(v, dtype=int) for k, v in grid.items()}
        return ParityMesh(V, F, lo, hi, grid, nx, ny, cell)


def _parity_vertical(mesh: ParityMesh, pts: np.ndarray):
    """Crossing parity for vertical +z rays; returns (inside, marginal)."""
    n = len(pts)
    inside = np.zeros(n, dtype=bool)
    marginal = np.zeros(n, dtype=bool)
    ix = np.clip(((pts[:, 0] - mesh.lo[0]) / mesh.cell[0]).astype(int), 0, mesh.nx - 1)
    iy = np.clip(((pts[:, 1] - mesh.lo[1]) / mesh.cell[1]).astype(int), 0, mesh.ny - 1)
    keys = ix * mesh.ny + iy
    order = np.argsort(keys, kind="stable")
    V, F = mesh.V, mesh.F
    start = 0
    while start < n:
        k = keys[order[start]]
        end = start
        while end < n and keys[order[end]] == k:
            end += 1
        sel = order[start:end]
        start = end
        tris = mesh.grid.get(k)
        if tris is None:
            continue
        P = pts[sel]
        A = V[F[tris, 0]]
        B = V[F[tris, 1]]
        C = V[F[tris, 2]]
        d = ((B[:, 0] - A[:, 0]) * (C[:, 1] - A[:, 1])
             - (B[:, 1] - A[:, 1]) * (C[:, 0] - A[:, 0]))
        px = P[:, 0][:, None]
        py = P[:, 1][:, None]
        w0 = ((B[:, 0] - px) * (C[:, 1] - py) - (B[:, 1] - py) * (C[:, 0] - px))
        w1 = ((C[:, 0] - px) * (A[:, 1] - py) - (C[:, 1] - py) * (A[:, 0] - px))
        w2 = ((A[:, 0] - px) * (B[:, 1] - py) - (A[:, 1] - py) * (B[:, 0] - px))
        dd = d[None, :]
        sgn = np.where(dd >= 0, 1.0, -1.0)
        w0s, w1s, w2s = w0 * sgn, w1 * sgn, w2 * sgn
        dda = np.abs(dd)
        nondegen = dda > 1e-12
        hit2d = (w0s > 0) & (w1s > 0) & (w2s > 0) & nondegen
        safe_d = np.where(d == 0, 1.0, d)[None, :]
        zhit = (w0 * A[:, 2] + w1 * B[:, 2] + w2 * C[:, 2]) / safe_d
        above = zhit > P[:, 2][:, None] + 1e-12
        cross = hit2d & above
        inside[sel] = cross.sum(axis=1) % 2 == 1
        # grazing detection: near a projected edge, or hit nearly at the point
        tol = 1e-9 * np.maximum(dda, 1e-30)
        near_edge = ((np.abs(w0s) < tol) | (np.abs(w1s) < tol) | (np.abs(w2s) < tol)) \
            & nondegen & (w0s > -tol) & (w1s > -tol) & (w2s > -tol)
        near_z = hit2d & (np.abs(zhit - P[:, 2][:, None]) < 1e-9)
        marginal[sel] = (near_edge | near_z).any(axis=1)
    return inside, marginal


def _parity_direction(V, F, p, d):
    """Brute-force parity of one point along direction d (Moller-Trumbore)."""
    a = V[F[:, 0]]
    e1 = V[F[:, 1]] - a
    e2 = V[F[:, 2]] - a
    pv = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, pv)
    ok = np.abs(det) > 1e-14
    inv = np.where(ok, 1.0 / np.where(det == 0, 1, det), 0.0)
    tv = p - a
    u = np.einsum("ij,ij->i", tv, pv) * inv
    qv = np.cross(tv, e1)
    v = np.einsum("ij,j->i", qv, d) * inv
    t = np.einsum("ij,ij->i", qv, e2) * inv
    hit = ok & (u > 0) & (v > 0) & (u + v < 1) & (t > 1e-12)
    near = ok & (u > -1e-9) & (v > -1e-9) & (u + v < 1 + 1e-9) & (t > -1e-12) \
        & ((np.abs(u) < 1e-9) | (np.abs(v) < 1e-9)
           | (np.abs(1 - u - v) < 1e-9) | (np.abs(t) < 1e-12))
    return hit.sum() % 2 == 1, bool(near.any())


def monte_carlo_volume(patches, n: int = MC_N, seed: int = MC_SEED,
                       res: int = 24, tol: float = 5e-3) -> VolumeResult:
    """Uniform box sampling with ray-parity inside tests.

    The tessellation is refined until two successive levels agree to
    0.1 * tol in enclosed volume.
    """
    if n < 10**4:
        raise ValueError("n must be at least 10^4")
    V, F = tessellate(patches, res)
    vol_prev = mesh_volume(V, F)
    while True:
        res *= 2
        V2, F2 = tessellate(patches, res)
        vol_new = mesh_volume(V2, F2)
        if abs(vol_new - vol_prev) < 0.1 * tol or res >= 192:
            V, F = V2, F2
            break
        V, F, vol_prev = V2, F2, vol_new
    mesh = ParityMesh.build(V, F)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(mesh.lo, mesh.hi, size=(n, 3))
    inside, marginal = _parity_vertical(mesh, pts)
    discarded = 0
    idxs = np.nonzero(marginal)[0]
    for i in idxs:
        ok = False
        for attempt in range(8):
            d = np.array([1e-4 * rng.standard_normal(), 1e-4 * rng.standard_normal(), 1.0])
            d /= np.linalg.norm(d)
            isin, marg = _parity_direction(V, F, pts[i], d)
            if not marg:
                inside[i] = isin
                ok = True
                break
        if not ok:
            inside[i] = False
            discarded += 1
    box = float(np.prod(mesh.hi - mesh.lo))
    k = int(inside.sum())
    m = n - discarded
    p = k / m
    est = box * p
    se = box * math.sqrt(max(p * (1 - p), 1e-300) / m)
    return VolumeResult(est, "montecarlo", se, m)


def predicate_volume(pred, lo, hi, n: int = MC_N, seed: int = MC_SEED) -> VolumeResult:
    """Monte Carlo volume of {pred} inside the box [lo, hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(n, 3))
    ins = pred(pts)
    box = float(np.prod(hi - lo))
    p = ins.mean()
    est = box * p
    se = box * math.sqrt(max(p * (1 - p), 1e-300) / n)
    return VolumeResult(float(est), "montecarlo", float(se), n)


# ---------------------------------------------------------------------------
# exact membership tests for the cork solid and its decomposition pieces


def _in_cork_top(pts):
    """z in [1, 2] half of the cork: half solid of revolution about the line
    y = 2, z = 1, profile = deltoid between unit circles at (0, 2), (+-1, r1)
    in (x, rho) coordinates."""
    x = pts[:, 0]
    rho = np.hypot(pts[:, 1] - 2.0, pts[:, 2] - 1.0)
    z = pts[:, 2]
    # triangle of tangency points
    p1 = np.array([0.0, R1])
    p2 = np.array([0.5, 2 - SQRT3 / 2])
    p3 = np.array([-0.5, 2 - SQRT3 / 2])

    def side(a, b):
        return (x - a[0]) * (b[1] - a[1]) - (rho - a[1]) * (b[0] - a[0])

    in_tri = (side(p1, p2) <= 0) & (side(p2, p3) <= 0) & (side(p3, p1) <= 0)
    out1 = x ** 2 + (rho - 2.0) ** 2 >= 1.0
    out2 = (x - 1.0) ** 2 + (rho - R1) ** 2 >= 1.0
    out3 = (x + 1.0) ** 2 + (rho - R1) ** 2 >= 1.0
    return (z >= 1.0) & (z <= 2.0) & in_tri & out1 & out2 & out3


def _in_cork_bottom(pts):
    """z in [0, 1] half: four mirror copies of the polytope minus four pieces."""
    x = np.abs(pts[:, 0])
    y = 2.0 - np.abs(pts[:, 1] - 2.0)
    z = pts[:, 2]
    in_poly = (x >= 0) & (x <= 1) & (y >= 0) & (y <= 2) & (z >= 0) & (z <= 1) \
        & (SQRT3 * x <= y)
    pie = ((x - 1) ** 2 + (z - 1) ** 2 <= 1) & (y >= SQRT3) & (y <= 2)
    sph = ((x - 1) ** 2 + (y - SQRT3) ** 2 + (z - 1) ** 2 <= 1) & (y <= SQRT3)
    origin_pie = x ** 2 + y ** 2 <= 1
    rho2 = x ** 2 + y ** 2
    under = ((np.sqrt(rho2) - 2) ** 2 + (z - 1) ** 2 >= 1) & (rho2 >= 1) & (rho2 <= 4)
    return in_poly & ~pie & ~sph & ~origin_pie & ~under


def cork_contains(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    return _in_cork_top(pts) | _in_cork_bottom(pts)


CORK_BOX = (np.array([-1.0, 0.0, 0.0]), np.array([1.0, 4.0, 2.0]))


def cork_bottom_subvolumes(n: int = MC_N, seed: int = MC_SEED) -> dict:
    """MC estimates of the four subtraction pieces and the bottom-half total.

    Each MC estimate is paired with its closed form elsewhere (see
    closed_form_constants / pappus oracles).
    """
    out = {}

    def pred_pie(p):
        return (((p[:, 0] - 1) ** 2 + (p[:, 2] - 1) ** 2 <= 1)
                & (p[:, 0] >= 0) & (p[:, 0] <= 1)
                & (p[:, 1] >= SQRT3) & (p[:, 1] <= 2)
                & (p[:, 2] >= 0) & (p[:, 2] <= 1))

    out["pie_slice"] = predicate_volume(
        pred_pie, (0, SQRT3, 0), (1, 2, 1), n, seed)

    def pred_sph(p):
        return (((p[:, 0] - 1) ** 2 + (p[:, 1] - SQRT3) ** 2 + (p[:, 2] - 1) ** 2 <= 1)
                & (p[:, 2] <= 1) & (p[:, 1] <= SQRT3) & (SQRT3 * p[:, 0] <= p[:, 1]))

    out["sphere_twelfth"] = predicate_volume(
        pred_sph, (0, SQRT3 - 1, 0), (1, SQRT3, 1), n, seed + 1)

    def pred_origin(p):
        return ((p[:, 0] ** 2 + p[:, 1] ** 2 <= 1) & (SQRT3 * p[:, 0] <= p[:, 1])
                & (p[:, 0] >= 0) & (p[:, 2] >= 0) & (p[:, 2] <= 1))

    out["origin_pie"] = predicate_volume(
        pred_origin, (0, 0, 0), (0.5, 1, 1), n, seed + 2)

    def pred_under(p):
        r2 = p[:, 0] ** 2 + p[:, 1] ** 2
        return (((np.sqrt(r2) - 2) ** 2 + (p[:, 2] - 1) ** 2 >= 1)
                & (SQRT3 * p[:, 0] <= p[:, 1]) & (p[:, 0] >= 0)
                & (r2 >= 1) & (r2 <= 4) & (p[:, 2] >= 0) & (p[:, 2] <= 1))

    out["under_handle"] = predicate_volume(
        pred_under, (0, 0, 0), (1, 2, 1), n, seed + 3)

    def pred_bottom(p):
        return _in_cork_bottom(p)

    out["bottom_half"] = predicate_volume(
        pred_bottom, (-1, 0, 0), (1, 4, 1), n, seed + 4)
    return out
