"""Volume machinery: exact arc-region area/centroid, Pappus volumes,
divergence-theorem quadrature over oriented patch complexes, and the named
closed-form constants the catalog bodies are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SQRT3, PI, R1, GL_ORDER
from .geometry import Patch, Plane, GeometryError


# ---------------------------------------------------------------------------
# planar regions bounded by circular arcs and segments


@dataclass(frozen=True)
class Seg:
    p0: tuple
    p1: tuple


@dataclass(frozen=True)
class Arc:
    center: tuple
    radius: float
    a0: float
    a1: float  # traversed from a0 to a1 (either direction)


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class ArcRegion:
    """Closed planar region; boundary pieces traversed counterclockwise.

    Lives in an (x, y) plane where x is the distance to the revolution axis
    (so the region must keep x > 0 for Pappus use).
    """

    pieces: tuple

    def __post_init__(self):
        pts = [self._endpoints(p) for p in self.pieces]
        for i, (_, e) in enumerate(pts):
            s_next = pts[(i + 1) % len(pts)][0]
            if math.dist(e, s_next) > 1e-12:
                raise RegionError(f"boundary not closed at piece {i}: {e} -> {s_next}")

    @staticmethod
    def _endpoints(p):
        if isinstance(p, Seg):
            return tuple(p.p0), tuple(p.p1)
        cx, cy = p.center
        return ((cx + p.radius * math.cos(p.a0), cy + p.radius * math.sin(p.a0)),
                (cx + p.radius * math.cos(p.a1), cy + p.radius * math.sin(p.a1)))

    # Green's theorem with closed-form antiderivatives per piece:
    #   A  = oint x dy,   Sx = oint x^2/2 dy,   Sy = -oint y^2/2 dx
    def area_and_moments(self):
        A = Sx = Sy = 0.0
        for p in self.pieces:
            if isinstance(p, Seg):
                (x0, y0), (x1, y1) = p.p0, p.p1
                dx, dy = x1 - x0, y1 - y0
                A += dy * (x0 + dx / 2)
                Sx += dy / 2 * (x0 * x0 + x0 * dx + dx * dx / 3)
                Sy -= dx / 2 * (y0 * y0 + y0 * dy + dy * dy / 3)
            else:
                cx, cy = p.center
                r, a0, a1 = p.radius, p.a0, p.a1

                def I(f, lo=a0, hi=a1):
                    return f(hi) - f(lo)

                sin, cos = math.sin, math.cos
                Ic = I(lambda t: sin(t))
                Is = I(lambda t: -cos(t))
                Ic2 = I(lambda t: t / 2 + sin(2 * t) / 4)
                Is2 = I(lambda t: t / 2 - sin(2 * t) / 4)
                Ic3 = I(lambda t: sin(t) - sin(t) ** 3 / 3)
                Is3 = I(lambda t: -cos(t) + cos(t) ** 3 / 3)
                # dy = r cos dt, dx = -r sin dt
                A += r * (cx * Ic + r * Ic2)
                Sx += r / 2 * (cx * cx * Ic + 2 * cx * r * Ic2 + r * r * Ic3)
                Sy += r / 2 * (cy * cy * Is + 2 * cy * r * Is2 + r * r * Is3)
        return A, Sx, Sy

    def area_centroid(self):
        """(area, centroid) with area positive for CCW boundaries."""
        A, Sx, Sy = self.area_and_moments()
        if abs(A) < 1e-300:
            raise RegionError("region has zero area")
        return A, (Sx / A, Sy / A)


def pappus_volume(region: ArcRegion, fraction: float = 1.0):
    """Volume of the solid of revolution about the y axis (x = 0).

    fraction is swept angle / (2 pi).
    """
    if not (0.0 < fraction <= 1.0):
        raise RegionError("fraction must be in (0, 1]")
    A, (cx, cy) = region.area_centroid()
    if A <= 0:
        raise RegionError("region boundary must be counterclockwise")
    if cx <= 0:
        raise RegionError("region crosses the revolution axis")
    return fraction * 2.0 * PI * cx * A


def deltoid_region(c1, c2, c3):
    """Curvilinear triangle between three mutually tangent unit circles.

    Centers are given as 2-vectors; returns the CCW-bounded region whose arcs
    bulge into the triangle of tangency points.
    """
    cs = [np.asarray(c, dtype=float) for c in (c1, c2, c3)]
    # order centers counterclockwise
    cen = sum(cs) / 3.0
    cs.sort(key=lambda c: math.atan2(c[1] - cen[1], c[0] - cen[0]))
    pieces = []
    for i in range(3):
        a, b, c = cs[i], cs[(i + 1) % 3], cs[(i + 2) % 3]
        # tangency points of circle c with circles a and b; arc on circle c
        ta = (c + a) / 2.0
        tb = (c + b) / 2.0
        a0 = math.atan2(tb[1] - c[1], tb[0] - c[0])
        a1 = math.atan2(ta[1] - c[1], ta[0] - c[0])
        # traverse CW on each circle (the region lies outside the disks),
        # which is CCW around the region; choose the short way
        while a1 > a0:
            a1 -= 2 * PI
        pieces.append(Arc((c[0], c[1]), 1.0, a0, a1))
    # order the three arcs into a closed loop
    loop = [pieces[0]]
    rest = pieces[1:]
    while rest:
        end = ArcRegion._endpoints(loop[-1])[1]
        nxt = min(rest, key=lambda p: math.dist(ArcRegion._endpoints(p)[0], end))
        rest.remove(nxt)
        loop.append(nxt)
    region = ArcRegion(tuple(loop))
    A, _ = region.area_centroid()
    if A < 0:
        region = reverse_region(region)
    return region


def reverse_region(region: ArcRegion) -> ArcRegion:
    out = []
    for p in reversed(region.pieces):
        if isinstance(p, Seg):
            out.append(Seg(p.p1, p.p0))
        else:
            out.append(Arc(p.center, p.radius, p.a1, p.a0))
    return ArcRegion(tuple(out))


# ---------------------------------------------------------------------------
# divergence-theorem quadrature


@dataclass(frozen=True)
class VolumeResult:
    value: float
    method: str
    error: float
    n: int


def _gl_nodes(order, lo, hi):
    x, w = np.polynomial.legendre.leggauss(order)
    mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
    return mid + half * x, half * w


def _patch_flux_position(patch: Patch, order: int) -> float:
    """integral over the patch of x . n dA (oriented)."""
    if isinstance(patch.family, Plane):
        # x . n is constant on a plane: (p0 . n) * area
        n = patch.normal(*_mid(patch))
        p0 = patch.point(*_mid(patch))
        return float(np.dot(p0, n)) * plane_patch_area(patch)
    if patch.trims:
        raise GeometryError(f"trimmed non-plane patch {patch.label!r} not supported")
    u0, u1, v0, v1 = patch.domain
    un, uw = _gl_nodes(order, u0, u1)
    vn, vw = _gl_nodes(order, v0, v1)
    U, V = np.meshgrid(un, vn, indexing="ij")
    X = patch.point_unchecked(U, V)
    Xu, Xv = patch.partials(U, V)
    cr = np.cross(Xu, Xv) * patch.orientation
    integrand = (X * cr).sum(-1)
    return float((integrand * uw[:, None] * vw[None, :]).sum())


def _patch_flux_const(patch: Patch, order: int) -> np.ndarray:
    """integral over the patch of n dA (vector)."""
    if isinstance(patch.family, Plane):
        n = patch.normal(*_mid(patch))
        return n * plane_patch_area(patch)
    u0, u1, v0, v1 = patch.domain
    un, uw = _gl_nodes(order, u0, u1)
    vn, vw = _gl_nodes(order, v0, v1)
    U, V = np.meshgrid(un, vn, indexing="ij")
    Xu, Xv = patch.partials(U, V)
    cr = np.cross(Xu, Xv) * patch.orientation
    w = uw[:, None] * vw[None, :]
    return (cr * w[..., None]).sum(axis=(0, 1))


def _mid(patch):
    u0, u1, v0, v1 = patch.domain
    return (u0 + u1) / 2.0, (v0 + v1) / 2.0


def plane_patch_area(patch: Patch) -> float:
    """Exact area of a (possibly trimmed) plane patch via its boundary sides."""
    if not isinstance(patch.family, Plane):
        raise GeometryError("plane_patch_area needs a plane patch")
    A = 0.0
    for s in patch.boundary_sides():
        if s.kind == "seg":
            (x0, y0), (x1, y1) = s.data
            A += (y1 - y0) * (x0 + (x1 - x0) / 2)
        else:
            cx, cy, r, a0, a1 = s.data
            A += r * (cx * (math.sin(a1) - math.sin(a0))
                      + r * ((a1 - a0) / 2 + (math.sin(2 * a1) - math.sin(2 * a0)) / 4))
    area = abs(A)
    if not patch.sides and patch.trims:
        raise GeometryError(f"trimmed plane patch {patch.label!r} needs explicit sides")
    return area


def divergence_volume(patches, order: int = GL_ORDER) -> VolumeResult:
    """V = (1/3) sum of x . n dA over the oriented complex."""
    if order < 4:
        raise ValueError("order must be >= 4")
    total = sum(_patch_flux_position(p, order) for p in patches) / 3.0
    half = sum(_patch_flux_position(p, max(4, order // 2)) for p in patches) / 3.0
    return VolumeResult(total, "divergence", abs(total - half), order)


def flux_closure(patches, order: int = GL_ORDER) -> np.ndarray:
    """Total of n dA; the zero vector for a closed oriented complex."""
    return np.sum([_patch_flux_const(p, order) for p in patches], axis=0)


# ---------------------------------------------------------------------------
# named closed forms


def closed_form_constants() -> dict:
    """Exact expressions in sqrt(3), pi, pi^2 evaluated at double precision."""
    washer = 2 * PI * (2 - SQRT3 / 3) * (SQRT3 - PI / 2)
    cork = (8 - 2 * SQRT3) - (6 - 3 * SQRT3) * PI - (2.0 / 3.0 - 1.0 / SQRT3) * PI ** 2
    total = 16 - 4 * SQRT3 + (10 * SQRT3 - 14) * PI - (10.0 / 3.0 - SQRT3) * PI ** 2
    vals = {
        "washer": washer,
        "cork": cork,
        "total": total,
        "unit_ball": 4 * PI / 3,
        "cork_top_half": PI * (2 - 2 / SQRT3) * (SQRT3 - PI / 2),
        "cork_pie_slice": PI / 4 * (2 - SQRT3),
        "cork_sphere_twelfth": PI / 9,
        "cork_origin_pie": PI / 12,
        "cork_under_handle": (11 - 3 * PI) * PI / 36,
        "cork_under_handle_alt": PI / 6 * (1 + (10 - 3 * PI) / (12 - 3 * PI)) * (1 - PI / 4),
    }
    vals["cork_bottom_half"] = 4 * ((2 - SQRT3 / 2)
                                    - vals["cork_pie_slice"]
                                    - vals["cork_sphere_twelfth"]
                                    - vals["cork_origin_pie"]
                                    - vals["cork_under_handle"])
    assert abs(vals["total"] - (vals["washer"] + 2 * vals["cork"])) < 1e-12
    assert vals["total"] < vals["unit_ball"]
    assert abs(vals["cork_top_half"] + vals["cork_bottom_half"] - vals["cork"]) < 1e-12
    return vals


# regions used by the Pappus oracles ----------------------------------------

def fishbowl_deltoid() -> ArcRegion:
    """Profile of the washer: circles centered (2 - sqrt3, 0), (2, 1), (2, -1)."""
    return deltoid_region((2 - SQRT3, 0.0), (2.0, 1.0), (2.0, -1.0))


def cork_deltoid() -> ArcRegion:
    """Profile of the cork's top half: circles at (r1, 1), (r1, -1), (2, 0)."""
    return deltoid_region((R1, 1.0), (R1, -1.0), (2.0, 0.0))


def under_handle_region() -> ArcRegion:
    """Unit square [1,2]x[0,1] minus the quarter disk at its (2,1) corner.

    Revolved fully it gives (11/3) pi - pi^2; a 1/12 sweep is the fourth
    subtraction volume of the cork's bottom half.
    """
    return ArcRegion((
        Seg((1.0, 0.0), (2.0, 0.0)),
        Arc((2.0, 1.0), 1.0, -PI / 2, -PI),
        Seg((1.0, 1.0), (1.0, 0.0)),
    ))
