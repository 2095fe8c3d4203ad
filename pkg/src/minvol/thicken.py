"""The eps-thickened, rescaled body.

Construction: every exposed (boundary) patch of the limiting body and each
copy of a doubled membrane contributes its parallel surface at distance eps
along its own oriented normal; coincident interface pairs are interior and
contribute nothing.  Free sheet edges (twin-matched membrane sides) grow
eps half-tubes, tube corners grow eps sphere lunes, and the diaphragm weld
into the washer is resolved with concave eps fillets.  The result is scaled
by 1/(1-eps) so that the curvature bound is restored in the closure.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .constants import SQRT3, PI, R1
from .geometry import (Patch, Plane, Sphere, Cylinder, Torus, Revolution,
                       CircleTrim, Side, affine_patch, GeometryError)
from .catalog import (build_limiting_body, NamedComplex, BodySpec, oriented,
                      BOUNDARY, MEMBRANE, INTERFACE, WAIST, SECTORS, A_XTOR)


def _eps_lune(center, d0, d1, eps, label):
    d0 = np.asarray(d0, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    A = np.column_stack([d0, d1, np.cross(d0, d1)])
    p = affine_patch(Sphere(eps), A, center, (-PI / 2, PI / 2, 0, PI / 2),
                     label=label)
    ref = (0.0, PI / 4)
    x = p.point_unchecked(*ref)
    return oriented(p, ref, x - np.asarray(center, dtype=float))


def _rim_tube(xs, eps, label):
    """eps tube around the arch rim circle at x = xs (radius 2, z >= 1 half)."""
    A = np.column_stack([np.array([0.0, 1, 0]), np.array([0.0, 0, 1]),
                         np.array([1.0, 0, 0])])
    p = affine_patch(Torus(2.0, eps), A, (xs, 2, 1), (0, PI, 0, PI), label=label)
    # tube angle v: offset = eps(sin v * rim-radial + cos v * x-hat)
    ref = (PI / 2, PI / 2)
    x = p.point_unchecked(*ref)
    return oriented(p, ref, x - np.array([xs, 2.0, 1.0 + 2.0]))


def _band_tube(zc, u0, u1, eps, label):
    """eps tube around the circle rho = 1 at height zc (band inner edges)."""
    vrng = (0, PI) if zc > 0 else (PI, 2 * PI)
    p = affine_patch(Revolution(1.0, zc, eps), np.eye(3), (0, 0, 0),
                     (u0, u1, *vrng), label=label)
    ref = ((u0 + u1) / 2, PI / 2 if zc > 0 else 1.5 * PI)
    return oriented(p, ref, (0, 0, math.copysign(1.0, zc)))


def _flap_tube(xs, y0, y1, eps, label):
    """eps half-cylinder around the line (xs, y, 0), wrapping away from x=0."""
    A = np.column_stack([np.array([1.0, 0, 0]), np.array([0.0, 0, 1]),
                         np.array([0.0, 1, 0])])
    vr = (-PI / 2, PI / 2) if xs > 0 else (PI / 2, 1.5 * PI)
    p = affine_patch(Cylinder(eps), A, (xs, 0, 0), (y0, y1, *vr), label=label)
    ref = ((y0 + y1) / 2, (vr[0] + vr[1]) / 2)
    x = p.point_unchecked(*ref)
    return oriented(p, ref, x - np.array([xs, (y0 + y1) / 2, 0.0]))


def _b4az_tube(cx, v0, v1, eps, label):
    """eps tube around the leg-4 cross arc centered (cx, 4, 1) in the y=4
    plane, wrapping through +y (away from the leg membranes).

    The arc is gamma(t) = (cx + s sin t, 4, 1 + cos t), t in [v0, v1], with
    s = sign(cx).
    """
    s = 1.0 if cx > 0 else -1.0
    A = np.column_stack([s * np.array([1.0, 0, 0]), np.array([0.0, 0, 1]),
                         -s * np.array([0.0, 1, 0])])
    # family u relates to the arc parameter t by u = pi/2 - t
    u0 = PI / 2 - v1
    u1 = PI / 2 - v0
    third = A[:, 2]
    # wrap through +y: need cos(v) * third . y > 0 on the middle of the range
    vr = (-PI / 2, PI / 2) if third[1] > 0 else (PI / 2, 1.5 * PI)
    p = affine_patch(Torus(1.0, eps), A, (cx, 4.0, 1.0), (u0, u1, *vr),
                     label=label)
    ref = ((u0 + u1) / 2, (vr[0] + vr[1]) / 2)
    x = p.point_unchecked(*ref)
    t_mid = PI / 2 - ref[0]
    g = np.array([cx + s * math.sin(t_mid), 4.0, 1 + math.cos(t_mid)])
    return oriented(p, ref, x - g)


def _neck_pieces(eps):
    """Diaphragm offsets, concave fillets, and split spindle offsets."""
    out = []
    if eps <= 0.25 + 1e-12:
        rho_c = R1 + math.sqrt(1 - 4 * eps * eps)
        v_lo = math.acos(2 * eps)
        v_hi = math.acos(-2 * eps)
        asin2e = math.asin(2 * eps)
        for k, (a, b) in enumerate(SECTORS):
            # disk offsets (plane sectors, radius rho_c)
            for sgn, tag in ((1.0, "up"), (-1.0, "dn")):
                sides = (
                    Side("seg", ((0.0, 0.0), (rho_c * math.cos(a), rho_c * math.sin(a))), "ra"),
                    Side("arc", (0.0, 0.0, rho_c, a, b), "rim"),
                    Side("seg", ((rho_c * math.cos(b), rho_c * math.sin(b)), (0.0, 0.0)), "rb"),
                )
                d = affine_patch(Plane(), np.eye(3), (0, 0, sgn * eps),
                                 (-rho_c, rho_c, -rho_c, rho_c),
                                 orientation=int(sgn), label=f"neck.disk{tag}.{k}.o",
                                 trims=(CircleTrim(0, 0, rho_c, -1),
                                        HalfPlaneSector(a, b)),
                                 sides=sides)
                out.append(d)
            # concave fillets
            for sgn, tag in ((1.0, "up"), (-1.0, "dn")):
                if sgn > 0:
                    vr = (-PI + asin2e, -PI / 2)
                    ref_v = (vr[0] + vr[1]) / 2
                else:
                    vr = (PI / 2, PI - asin2e)
                    ref_v = (vr[0] + vr[1]) / 2
                f = affine_patch(Revolution(rho_c, sgn * 2 * eps, eps), np.eye(3),
                                 (0, 0, 0), (a, b, *vr), label=f"neck.fillet{tag}.{k}.o")
                mid = ((a + b) / 2, ref_v)
                x = f.point_unchecked(*mid)
                c = np.array([rho_c * math.cos(mid[0]), rho_c * math.sin(mid[0]),
                              sgn * 2 * eps])
                f = oriented(f, mid, c - x)  # concave: outward points at the core
                out.append(f)
            # split spindle offsets
            for (w0, w1, tag) in ((PI / 3, v_lo, "lo"), (v_hi, 2 * PI / 3, "hi")):
                sp = affine_patch(Torus(R1, 1 - eps), -np.eye(3), (0, 0, 0),
                                  (a - PI, b - PI, w0, w1),
                                  label=f"washer.sp.{k}.{tag}.o")
                mid = ((a + b) / 2 - PI, (w0 + w1) / 2)
                x = sp.point_unchecked(*mid)
                rho = math.hypot(x[0], x[1])
                cir = np.array([R1 * x[0] / rho, R1 * x[1] / rho, 0.0])
                sp = oriented(sp, mid, cir - x)
                out.append(sp)
        return out
    # eps = 1/2: the spindle offset collapses into the diaphragm slab; close
    # the neck with disks of radius R1 bridged by the outer half of the
    # (1 - eps) spindle tube, whose crown meets the disks tangentially.
    for k, (a, b) in enumerate(SECTORS):
        rad = R1
        for sgn, tag in ((1.0, "up"), (-1.0, "dn")):
            sides = (
                Side("seg", ((0.0, 0.0), (rad * math.cos(a), rad * math.sin(a))), "ra"),
                Side("arc", (0.0, 0.0, rad, a, b), "rim"),
                Side("seg", ((rad * math.cos(b), rad * math.sin(b)), (0.0, 0.0)), "rb"),
            )
            d = affine_patch(Plane(), np.eye(3), (0, 0, sgn * eps),
                             (-rad, rad, -rad, rad), orientation=int(sgn),
                             label=f"neck.disk{tag}.{k}.o",
                             trims=(CircleTrim(0, 0, rad, -1), HalfPlaneSector(a, b)),
                             sides=sides)
            out.append(d)
        spb = affine_patch(Torus(R1, 1 - eps), -np.eye(3), (0, 0, 0),
                           (a - PI, b - PI, 0.0, PI), label=f"neck.bridge.{k}.o")
        mid = ((a + b) / 2 - PI, PI / 2)
        x = spb.point_unchecked(*mid)
        rho = math.hypot(x[0], x[1])
        cir = np.array([R1 * x[0] / rho, R1 * x[1] / rho, 0.0])
        out.append(oriented(spb, mid, cir - x))
    return out


class HalfPlaneSector:
    """Keep azimuths in [a, b] (parameter-space polar trim; scale invariant)."""

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def keep(self, u, v):
        ang = np.mod(np.arctan2(np.asarray(v), np.asarray(u)), 2 * PI)
        a = self.a % (2 * PI)
        b = self.b % (2 * PI)
        if a <= b:
            return (ang >= a - 1e-12) & (ang <= b + 1e-12)
        return (ang >= a - 1e-12) | (ang <= b + 1e-12)

    def scaled(self, f):
        return self


def build_thickened_body(eps: float) -> NamedComplex:
    if not (0.0 < eps <= 0.5):
        raise GeometryError("eps must be in (0, 0.5]")
    if 0.25 < eps < 0.5 - 1e-12:
        raise GeometryError("eps in (0.25, 0.5) is not supported; "
                            "use eps <= 0.25 or eps = 0.5")
    lim = build_limiting_body()
    out = []
    for p, role in zip(lim.patches, lim.roles):
        if role == INTERFACE:
            continue
        if p.label.startswith("washer.sp.") or p.label.startswith("washer.diaphragm"):
            continue  # replaced by the neck assembly
        q = p.offset(eps, side=-1)
        out.append(replace(q, label=p.label + ".o"))
    out += _neck_pieces(eps)

    # eps tubes around free sheet edges -------------------------------------
    out.append(_rim_tube(+1.0, eps, "tube.rimR"))
    out.append(_rim_tube(-1.0, eps, "tube.rimL"))
    for k in (3, 4, 5):
        a, b = SECTORS[k]
        out.append(_band_tube(+1.0, a, b, eps, f"tube.band2.{k}"))
    for k in (0, 1, 2):
        a, b = SECTORS[k]
        out.append(_band_tube(-1.0, a, b, eps, f"tube.band3.{k}"))
    out.append(_flap_tube(+2.0, 0.0, 4.0, eps, "tube.flapR"))
    out.append(_flap_tube(-2.0, 0.0, 4.0, eps, "tube.flapL"))
    for cx, tag in ((2.0, "b"), (-2.0, "a")):
        for (v0, v1, part) in ((PI, 4 * PI / 3, "b"), (4 * PI / 3, 1.5 * PI, "a")):
            out.append(_b4az_tube(cx, v0, v1, eps, f"tube.leg4{tag}.{part}"))
    # corner lunes
    out.append(_eps_lune((1, 0, 1), (0, -1, 0), (0, 0, 1), eps, "lune.r0p"))
    out.append(_eps_lune((-1, 0, 1), (0, -1, 0), (0, 0, 1), eps, "lune.l0p"))
    out.append(_eps_lune((2, 4, 0), (1, 0, 0), (0, 1, 0), eps, "lune.r4"))
    out.append(_eps_lune((-2, 4, 0), (-1, 0, 0), (0, 1, 0), eps, "lune.l4"))

    # handle-2 closures are the point reflections of the handle-1 closures
    # (the band tubes already cover both handles through their sector ranges)
    mirrors = []
    for p in out:
        if p.label.startswith(("tube.", "lune.")) and not p.label.startswith("tube.band"):
            mirrors.append(replace(p.point_reflected(), label="m." + p.label))
    out += mirrors

    s = 1.0 / (1.0 - eps)
    scaled = tuple(replace(q.scaled(s), label=q.label) for q in out)
    return NamedComplex(BodySpec("thickened-body", eps=eps), scaled)
