"""Catalog bodies.

Builds, as explicit patch lists: the four-piece handle, the five-piece cork
surfaces S1/S2, the washer (solid of revolution), the limiting body (fat
washer and corks plus zero-thickness closing sheets, thin sheets doubled with
opposite orientations), and the eps-thickened, rescaled body.

Every patch is a canonical family under a rigid placement; orientations are
fixed by explicit reference directions so that outward means outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import SQRT3, PI, R1
from .geometry import (Patch, Plane, Sphere, Cylinder, Torus, Revolution,
                       CircleTrim, HalfPlaneTrim, Side, affine_patch,
                       GeometryError)

D = math.radians

WAIST = 3.0 - SQRT3  # radius of the spindle waist circle (= R1 + 1)

# roles within an assembled complex
BOUNDARY = "boundary"    # fat on one side, air on the other
MEMBRANE = "membrane"    # air on both sides; stored as a +/- copy pair
INTERFACE = "interface"  # fat on both sides; stored as a coincident pair


@dataclass(frozen=True)
class BodySpec:
    name: str
    eps: float = 0.0

    def __post_init__(self):
        if self.name == "thickened-body" and not (0.0 < self.eps <= 0.5):
            raise ValueError("eps must be in (0, 0.5] for the thickened body")


@dataclass(frozen=True)
class NamedComplex:
    spec: BodySpec
    patches: tuple
    roles: tuple = ()
    expected_counts: tuple | None = None

    def __post_init__(self):
        labels = [p.label for p in self.patches]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate patch labels: {dupes}")

    def role(self, i: int) -> str:
        return self.roles[i] if self.roles else BOUNDARY


# placement helpers ----------------------------------------------------------

A_XTOR = np.array([[0.0, 0, 1], [1, 0, 0], [0, 1, 0]])  # torus about an x-line
A_YZPLANE = np.array([[0.0, 0, 1], [1, 0, 0], [0, 1, 0]])  # plane (u,v)->(0,u,v)


def oriented(patch: Patch, uv, direction) -> Patch:
    """Fix the orientation sign so the normal at uv points along direction."""
    n = patch.normal(uv[0], uv[1])
    d = float(n @ np.asarray(direction, dtype=float))
    if abs(d) < 1e-6:
        raise GeometryError(f"ambiguous orientation reference for {patch.label!r}")
    return patch if d > 0 else replace(patch, orientation=-patch.orientation)


def tor_z(center, u0, u1, v0, v1, ref_uv, ref_dir, label, major=2.0, minor=1.0):
    p = affine_patch(Torus(major, minor), np.eye(3), center, (u0, u1, v0, v1),
                     label=label)
    return oriented(p, ref_uv, ref_dir)


def tube_ref_z(center, uv, outward, major=2.0, minor=1.0):
    """Reference direction for a torus about a vertical axis: the tube radial
    at parameter uv, pointing away from (outward) or toward the center circle."""
    u, v = uv
    d = np.array([math.sin(v) * math.cos(u), math.sin(v) * math.sin(u), math.cos(v)])
    return d if outward else -d


# ---------------------------------------------------------------------------
# handle (four pieces)


def _floor_lobe_sides(sign: int):
    """Boundary loop of the z = 0 floor lobe with x*sign in [0, 2]."""
    s = sign
    if s > 0:
        return (
            Side("seg", ((2.0, 0.0), (2.0, 4.0)), "x2"),
            Side("arc", (0.0, 4.0, 2.0, 0.0, -PI / 2), "arc4"),
            Side("arc", (0.0, 0.0, 2.0, PI / 2, 0.0), "arc0"),
        )
    return (
        Side("seg", ((-2.0, 4.0), (-2.0, 0.0)), "x2"),
        Side("arc", (0.0, 0.0, 2.0, PI, PI / 2), "arc0"),
        Side("arc", (0.0, 4.0, 2.0, -PI / 2, -PI), "arc4"),
    )


def build_handle() -> NamedComplex:
    """The four-piece handle: the arch torus, two leg tori, the trimmed plane."""
    bt = affine_patch(Torus(2, 1), A_XTOR, (0, 2, 1), (0, PI, PI, 2 * PI),
                      label="handle.arch")
    bt = oriented(bt, (PI / 2, 1.5 * PI), (0, 0, -1))  # ceiling faces the tunnel
    b0 = tor_z((0, 0, 1), 0, PI, PI, 1.5 * PI, (PI / 2, 1.25 * PI),
               tube_ref_z((0, 0, 1), (PI / 2, 1.25 * PI), outward=True),
               "handle.leg0")
    b4 = tor_z((0, 4, 1), PI, 2 * PI, PI, 1.5 * PI, (1.5 * PI, 1.25 * PI),
               tube_ref_z((0, 4, 1), (1.5 * PI, 1.25 * PI), outward=True),
               "handle.leg4")
    trims = (CircleTrim(0, 0, 2, +1), CircleTrim(0, 4, 2, +1))
    sides = _floor_lobe_sides(+1) + _floor_lobe_sides(-1)
    pl = affine_patch(Plane(), np.eye(3), (0, 0, 0), (-2, 2, 0, 4),
                      orientation=-1, label="handle.plane",
                      trims=trims, sides=sides)
    return NamedComplex(BodySpec("handle"), (bt, b0, b4, pl))


# ---------------------------------------------------------------------------
# cork surfaces S1 / S2


def _cork_s1_patches(prefix="cork_s1"):
    """The five S1 pieces, oriented as the distance-1 surface of the solid
    semicircle U' (normals away from U'; curvatures in [0, 1])."""
    ct = affine_patch(Torus(R1, 1), A_XTOR, (1, 2, 1),
                      (0, PI, 2 * PI / 3, PI), orientation=-1,
                      label=f"{prefix}.torus")  # tube-outward
    memb = affine_patch(Plane(), A_YZPLANE, (0, 2, 1), (-R1, R1, 0, R1),
                        label=f"{prefix}.semicircle",
                        trims=(CircleTrim(0, 0, R1, -1),),
                        sides=(Side("seg", ((-R1, 0.0), (R1, 0.0)), "diam"),
                               Side("arc", (0.0, 0.0, R1, 0.0, PI), "arc")))
    memb = oriented(memb, (0.0, R1 / 2), (1, 0, 0))
    sph1 = affine_patch(Sphere(1.0), np.diag([1.0, -1, -1]), (1, SQRT3, 1),
                        (0, PI / 2, 2 * PI / 3, PI), label=f"{prefix}.sphere0")
    sph1 = oriented(sph1, (PI / 4, 5 * PI / 6),
                    -_to((1, SQRT3, 1), sph1, (PI / 4, 5 * PI / 6)))
    sph2 = affine_patch(Sphere(1.0), np.diag([1.0, -1, -1]), (1, 4 - SQRT3, 1),
                        (0, PI / 2, PI, 4 * PI / 3), label=f"{prefix}.sphere4")
    sph2 = oriented(sph2, (PI / 4, 7 * PI / 6),
                    -_to((1, 4 - SQRT3, 1), sph2, (PI / 4, 7 * PI / 6)))
    A_cyl = np.array([[1.0, 0, 0], [0, 0, -1], [0, -1, 0]])
    cyl = affine_patch(Cylinder(1.0), A_cyl, (1, 2, 1), (-R1, R1, PI / 2, PI),
                       label=f"{prefix}.cylinder")
    cyl = oriented(cyl, (0.0, 3 * PI / 4),
                   -_axis_dir(cyl, (0.0, 3 * PI / 4), (1, 2, 1), (0, 1, 0)))
    return [ct, memb, sph1, sph2, cyl]


def _to(center, patch, uv):
    """Direction from the surface point at uv toward a center point."""
    p = patch.point_unchecked(*uv)
    return np.asarray(center, dtype=float) - p


def _axis_dir(patch, uv, axis_point, axis_vec):
    """Direction from the surface point toward the nearest point of a line."""
    p = patch.point_unchecked(*uv)
    a = np.asarray(axis_point, dtype=float)
    v = np.asarray(axis_vec, dtype=float)
    v = v / np.linalg.norm(v)
    w = p - a
    return (a + (w @ v) * v) - p


def _arch_tube_dir(patch, uv, outward: bool):
    """Tube radial of a torus placed by A_XTOR about (0, 2, 1) (the arch)."""
    u = uv[0]
    c = np.array([0.0, 2 + 2 * math.cos(u), 1 + 2 * math.sin(u)])
    d = patch.point_unchecked(*uv) - c
    return d if outward else -d


def build_cork_s1() -> NamedComplex:
    return NamedComplex(BodySpec("cork-s1"), tuple(_cork_s1_patches()))


def build_cork_s2() -> NamedComplex:
    pats = tuple(p.reflected("x") for p in _cork_s1_patches("cork_s2"))
    return NamedComplex(BodySpec("cork-s2"), pats)


# ---------------------------------------------------------------------------
# washer


def _spindle(u0, u1, v0, v1, label):
    """Eq-style spindle placement: world = -torus(R1, 1)."""
    p = affine_patch(Torus(R1, 1), -np.eye(3), (0, 0, 0), (u0, u1, v0, v1),
                     label=label)
    return p


def build_washer() -> NamedComplex:
    """Deltoid of revolution: spindle wall plus upper/lower torus walls."""
    sp = _spindle(0, 2 * PI, PI / 3, 2 * PI / 3, "washer.spindle")
    sp = oriented(sp, (PI, PI / 2), (1, 0, 0))  # outward normal toward the waist axis side
    wu = tor_z((0, 0, 1), 0, 2 * PI, PI, 4 * PI / 3, (0.1, 7 * PI / 6),
               tube_ref_z((0, 0, 1), (0.1, 7 * PI / 6), outward=False), "washer.upper")
    wl = tor_z((0, 0, -1), 0, 2 * PI, -PI / 3, 0, (0.1, -PI / 6),
               tube_ref_z((0, 0, -1), (0.1, -PI / 6), outward=False), "washer.lower")
    return NamedComplex(BodySpec("washer"), (sp, wu, wl))


# ---------------------------------------------------------------------------
# the limiting body

SECTORS = [(k * PI / 3, (k + 1) * PI / 3) for k in range(6)]
CORK1_SECTOR = 1  # az in [60, 120): cork C plugs handle 1 here
CORK2_SECTOR = 4  # az in [240, 300): cork -C


def _washer_sectors():
    """Washer walls split on the 60-degree azimuth grid, with roles."""
    out = []
    for k, (a, b) in enumerate(SECTORS):
        sp = _spindle(a - PI, b - PI, PI / 3, 2 * PI / 3, f"washer.sp.{k}")
        mid = ((a + b) / 2 - PI, PI / 2)
        sp = oriented(sp, mid, _axis_dir(sp, mid, (0, 0, 0), (0, 0, 1)))
        out.append((sp, BOUNDARY))
        wu = tor_z((0, 0, 1), a, b, PI, 4 * PI / 3, ((a + b) / 2, 7 * PI / 6),
                   tube_ref_z((0, 0, 1), ((a + b) / 2, 7 * PI / 6), outward=False),
                   f"washer.wu.{k}")
        out.append((wu, INTERFACE if k == CORK1_SECTOR else BOUNDARY))
        wl = tor_z((0, 0, -1), a, b, -PI / 3, 0, ((a + b) / 2, -PI / 6),
                   tube_ref_z((0, 0, -1), ((a + b) / 2, -PI / 6), outward=False),
                   f"washer.wl.{k}")
        out.append((wl, INTERFACE if k == CORK2_SECTOR else BOUNDARY))
    return out


def _diaphragm():
    """Doubled z = 0 disk spanning the washer's central hole (edge on the
    spindle waist circle)."""
    out = []
    for sgn, tag in ((+1, "up"), (-1, "dn")):
        d = affine_patch(Plane(), np.eye(3), (0, 0, 0), (-WAIST, WAIST, -WAIST, WAIST),
                         orientation=sgn, label=f"washer.diaphragm.{tag}",
                         trims=(CircleTrim(0, 0, WAIST, -1),),
                         sides=(Side("arc", (0.0, 0.0, WAIST, 0.0, 2 * PI), "rim"),))
        out.append((d, MEMBRANE))
    return out


def _k2_bands():
    """Doubled rim bands on the upper leg torus (tube angle 180..210 deg),
    present at every azimuth sector except the cork wedge."""
    out = []
    for k, (a, b) in enumerate(SECTORS):
        if k == CORK1_SECTOR:
            continue
        for sgn, tag in ((True, "out"), (False, "in")):
            band = tor_z((0, 0, 1), a, b, 4 * PI / 3, 1.5 * PI,
                         ((a + b) / 2, 17 * PI / 12),
                         tube_ref_z((0, 0, 1), ((a + b) / 2, 17 * PI / 12), outward=sgn),
                         f"band2.{tag}.{k}")
            out.append((band, MEMBRANE))
    return out


def _k3_bands():
    out = []
    for k, (a, b) in enumerate(SECTORS):
        if k == CORK2_SECTOR:
            continue
        for sgn, tag in ((True, "out"), (False, "in")):
            band = tor_z((0, 0, -1), a, b, -PI / 2, -PI / 3,
                         ((a + b) / 2, -5 * PI / 12),
                         tube_ref_z((0, 0, -1), ((a + b) / 2, -5 * PI / 12), outward=sgn),
                         f"band3.{tag}.{k}")
            out.append((band, MEMBRANE))
    return out


def _cork1_and_handle1():
    """Cork C boundary pieces, its membranes, and handle-1 sheets."""
    out = []

    # cork surface pieces from S1/S2, with the spheres and cylinders split so
    # that every side matches exactly one partner
    def sphere_pieces(cx, cy, vlo, vhi, tag):
        A = np.diag([1.0, -1, -1])
        for (u0, u1, part) in ((0, PI / 6, "a"), (PI / 6, PI / 2, "b")):
            s = affine_patch(Sphere(1.0), A, (cx, cy, 1), (u0, u1, vlo, vhi),
                             label=f"cork1.{tag}.{part}")
            mid = ((u0 + u1) / 2, (vlo + vhi) / 2)
            s = oriented(s, mid, _to((cx, cy, 1), s, mid))
            out.append((s, BOUNDARY))

    ct = affine_patch(Torus(R1, 1), A_XTOR, (1, 2, 1), (0, PI, 2 * PI / 3, PI),
                      label="cork1.ct")
    ct = oriented(ct, (PI / 2, 5 * PI / 6),
                  _axis_dir(ct, (PI / 2, 5 * PI / 6), (1, 2, 1), (1, 0, 0)))
    out.append((ct, BOUNDARY))
    out.append((ct.reflected("x"), BOUNDARY))  # label updated below
    sphere_pieces(1, SQRT3, 2 * PI / 3, PI, "sph0")
    sphere_pieces(1, 4 - SQRT3, PI, 4 * PI / 3, "sph4")
    # mirrors of the spheres
    tmp = []
    for p, role in out[-4:]:
        tmp.append((p.reflected("x"), role))
    out.extend(tmp)

    A_cyl = np.array([[1.0, 0, 0], [0, 0, -1], [0, -1, 0]])
    for (v0, v1, part) in ((5 * PI / 6, PI, "a"), (PI / 2, 5 * PI / 6, "b")):
        c = affine_patch(Cylinder(1.0), A_cyl, (1, 2, 1), (-R1, R1, v0, v1),
                         label=f"cork1.cyl.{part}")
        mid = (0.0, (v0 + v1) / 2)
        c = oriented(c, mid, _axis_dir(c, mid, (1, 2, 1), (0, 1, 0)))
        out.append((c, BOUNDARY))
        out.append((c.reflected("x"), BOUNDARY))

    # membranes: the semicircle, doubled (S1 copy faces +x, S2 copy -x)
    memb = affine_patch(Plane(), A_YZPLANE, (0, 2, 1), (-R1, R1, 0, R1),
                        label="cork1.memb.p",
                        trims=(CircleTrim(0, 0, R1, -1),),
                        sides=(Side("seg", ((-R1, 0.0), (R1, 0.0)), "diam"),
                               Side("arc", (0.0, 0.0, R1, 0.0, PI), "arc")))
    memb_p = oriented(memb, (0.0, R1 / 2), (1, 0, 0))
    memb_m = replace(memb_p, orientation=-memb_p.orientation, label="cork1.memb.m")
    out.append((memb_p, MEMBRANE))
    out.append((memb_m, MEMBRANE))

    # handle-facing cork walls
    btmid = affine_patch(Torus(2, 1), A_XTOR, (0, 2, 1),
                         (0, PI, 4 * PI / 3, 5 * PI / 3), label="cork1.btmid")
    btmid = oriented(btmid, (PI / 2, 1.5 * PI),
                     _arch_tube_dir(btmid, (PI / 2, 1.5 * PI), outward=False))
    out.append((btmid, BOUNDARY))
    a, b = SECTORS[CORK1_SECTOR]
    b0a = tor_z((0, 0, 1), a, b, 4 * PI / 3, 1.5 * PI, ((a + b) / 2, 17 * PI / 12),
                tube_ref_z((0, 0, 1), ((a + b) / 2, 17 * PI / 12), outward=True),
                "cork1.b0.exposed")
    out.append((b0a, BOUNDARY))
    b0i = tor_z((0, 0, 1), a, b, PI, 4 * PI / 3, ((a + b) / 2, 7 * PI / 6),
                tube_ref_z((0, 0, 1), ((a + b) / 2, 7 * PI / 6), outward=True),
                "cork1.b0.interface")
    out.append((b0i, INTERFACE))
    for (v0, v1, part) in ((4 * PI / 3, 1.5 * PI, "a"), (PI, 4 * PI / 3, "b")):
        b4 = tor_z((0, 4, 1), 4 * PI / 3, 5 * PI / 3, v0, v1,
                   (1.5 * PI, (v0 + v1) / 2),
                   tube_ref_z((0, 4, 1), (1.5 * PI, (v0 + v1) / 2), outward=True),
                   f"cork1.b4.{part}")
        out.append((b4, BOUNDARY))

    # far-leg sheets beyond the cork wedge (doubled, split like the cork wall)
    for (u0, u1, az) in ((PI, 4 * PI / 3, "a"), (5 * PI / 3, 2 * PI, "b")):
        for (v0, v1, part) in ((4 * PI / 3, 1.5 * PI, "a"), (PI, 4 * PI / 3, "b")):
            for sgn, tag in ((True, "out"), (False, "in")):
                q = tor_z((0, 4, 1), u0, u1, v0, v1,
                          ((u0 + u1) / 2, (v0 + v1) / 2),
                          tube_ref_z((0, 4, 1), ((u0 + u1) / 2, (v0 + v1) / 2),
                                     outward=sgn),
                          f"h1.leg4{az}.{part}.{tag}")
                out.append((q, MEMBRANE))

    # the cork's floor face (exposed downward)
    seat = affine_patch(Plane(), np.eye(3), (0, 0, 0), (-1, 1, 0, 4),
                        orientation=-1, label="cork1.seat",
                        trims=(CircleTrim(0, 0, 2, +1), CircleTrim(0, 4, 2, +1)),
                        sides=(
                            Side("seg", ((1.0, SQRT3), (1.0, 4 - SQRT3)), "x1"),
                            Side("arc", (0.0, 4.0, 2.0, -PI / 3, -2 * PI / 3), "arc4"),
                            Side("seg", ((-1.0, 4 - SQRT3), (-1.0, SQRT3)), "xm1"),
                            Side("arc", (0.0, 0.0, 2.0, 2 * PI / 3, PI / 3), "arc0"),
                        ))
    out.append((seat, BOUNDARY))

    # handle-1 sheets: arch flanks (doubled), floor flaps (doubled)
    for (v0, v1, tag, refv) in ((PI, 4 * PI / 3, "L", 7 * PI / 6),
                                (5 * PI / 3, 2 * PI, "R", 11 * PI / 6)):
        base = affine_patch(Torus(2, 1), A_XTOR, (0, 2, 1), (0, PI, v0, v1),
                            label=f"h1.arch{tag}.out")
        p_out = oriented(base, (PI / 2, refv),
                         _arch_tube_dir(base, (PI / 2, refv), outward=True))
        p_in = replace(p_out, orientation=-p_out.orientation,
                       label=f"h1.arch{tag}.in")
        out.append((p_out, MEMBRANE))
        out.append((p_in, MEMBRANE))

    for (x0, x1, tag) in ((1.0, 2.0, "R"), (-2.0, -1.0, "L")):
        s = 1.0 if x0 > 0 else -1.0
        # boundary loop: x=+-1 segment, arc of circle (0,4), x=+-2 segment,
        # arc of circle (0,0); all in parameter = world (x, y)
        if s > 0:
            sides = (
                Side("seg", ((1.0, 4 - SQRT3), (1.0, SQRT3)), "x1"),
                Side("arc", (0.0, 0.0, 2.0, PI / 3, 0.0), "arc0"),
                Side("seg", ((2.0, 0.0), (2.0, 4.0)), "x2"),
                Side("arc", (0.0, 4.0, 2.0, 0.0, -PI / 3), "arc4"),
            )
        else:
            sides = (
                Side("seg", ((-1.0, SQRT3), (-1.0, 4 - SQRT3)), "x1"),
                Side("arc", (0.0, 4.0, 2.0, -2 * PI / 3, -PI), "arc4"),
                Side("seg", ((-2.0, 4.0), (-2.0, 0.0)), "x2"),
                Side("arc", (0.0, 0.0, 2.0, PI, 2 * PI / 3), "arc0"),
            )
        fl = affine_patch(Plane(), np.eye(3), (0, 0, 0), (x0, x1, 0, 4),
                          label=f"h1.flap{tag}.up",
                          trims=(CircleTrim(0, 0, 2, +1), CircleTrim(0, 4, 2, +1)),
                          sides=sides)
        fl_up = oriented(fl, ((x0 + x1) / 2, 2.0), (0, 0, 1))
        fl_dn = replace(fl_up, orientation=-fl_up.orientation,
                        label=f"h1.flap{tag}.dn")
        out.append((fl_up, MEMBRANE))
        out.append((fl_dn, MEMBRANE))

    # fix the mirrored labels
    fixed = []
    seen = {}
    for p, role in out:
        lbl = p.label
        if lbl in seen:
            lbl = lbl + ".mirror"
            p = replace(p, label=lbl)
        seen[lbl] = True
        fixed.append((p, role))
    return fixed


def build_limiting_body() -> NamedComplex:
    """Washer + corks + handle sheets + closing sheets, thin parts doubled."""
    items = []
    items += _washer_sectors()
    items += _diaphragm()
    items += _k2_bands()
    items += _k3_bands()
    side1 = _cork1_and_handle1()
    items += side1
    for p, role in side1:
        q = p.point_reflected()
        items.append((replace(q, label="m." + p.label), role))
    patches = tuple(p for p, _ in items)
    roles = tuple(r for _, r in items)
    return NamedComplex(BodySpec("limiting-body"), patches, roles)


def cork_boundary_patches():
    """The closed boundary of the solid cork C (for Monte Carlo parity)."""
    body = _cork1_and_handle1()
    keep = []
    for p, role in body:
        if p.label.startswith("cork1.") and "memb" not in p.label:
            keep.append(p)
    return tuple(keep)


def unit_sphere_patches():
    up = affine_patch(Sphere(1.0), np.eye(3), (0, 0, 0), (0, PI / 2, 0, 2 * PI),
                      orientation=-1, label="sphere.up")
    dn = affine_patch(Sphere(1.0), np.eye(3), (0, 0, 0), (-PI / 2, 0, 0, 2 * PI),
                      orientation=-1, label="sphere.dn")
    return (up, dn)
