"""Canonical parametric patches and their differential geometry.

A Patch is a canonical family (plane / sphere / cylinder / torus / surface of
revolution) carried to world coordinates by an optional mirror through the
family x=0 plane followed by a proper rigid motion.  All evaluators accept
numpy arrays for (u, v) and broadcast.

Curvature sign convention: principal curvatures are reported with respect to
the patch's oriented normal, so that a unit sphere oriented outward (as the
boundary of the enclosed ball) has kappa = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import TOL_ORTHO, RANGE_PAD

# ---------------------------------------------------------------------------
# rigid motions


def _check_rotation(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    err = np.abs(R @ R.T - np.eye(3)).max()
    if err > 1e-9:
        raise ValueError(f"rotation not orthogonal (err={err:.3e})")
    if np.linalg.det(R) < 0:
        raise ValueError("rotation has determinant -1; use the mirror flag")
    return R


@dataclass(frozen=True, eq=False)
class RigidMotion:
    """Proper rigid motion x -> R x + t."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", _check_rotation(self.rotation))
        t = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "RigidMotion":
        return RigidMotion(np.eye(3), np.zeros(3))

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.rotation.T + self.translation

    def compose(self, other: "RigidMotion") -> "RigidMotion":
        """self after other: x -> self(other(x))."""
        return RigidMotion(self.rotation @ other.rotation,
                           self.rotation @ other.translation + self.translation)

    def inverse(self) -> "RigidMotion":
        RT = self.rotation.T
        return RigidMotion(RT, -RT @ self.translation)


def rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0, 0], [0, c, -s], [0, s, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Plane:
    """f(u, v) = (u, v, 0); natural normal +z."""


@dataclass(frozen=True)
class Sphere:
    """f(u, v) = r (cos u cos v, cos u sin v, sin u); u latitude, v longitude.

    Natural normal points inward.
    """

    radius: float


@dataclass(frozen=True)
class Cylinder:
    """f(u, v) = (r cos v, r sin v, u); u axial length, v angle.

    Natural normal points toward the axis.
    """

    radius: float


@dataclass(frozen=True)
class Torus:
    """f(u, v) = ((R + r sin v) cos u, (R + r sin v) sin u, r cos v).

    u is the angle around the z axis, v the tube angle.  Major radius R may be
    smaller than minor radius r (spindle torus) as long as the domain keeps
    R + r sin v > 0.  Natural normal points toward the tube center circle.
    """

    major: float
    minor: float


@dataclass(frozen=True)
class Revolution:
    """Circular-arc profile revolved about the z axis.

    f(u, v) = ((rc + a cos v) cos u, (rc + a cos v) sin u, zc + a sin v) with
    profile circle center (rc, zc) and radius a in the (rho, z) half plane.
    Natural normal points away from the profile center.
    """

    center_rho: float
    center_z: float
    radius: float


Family = Plane | Sphere | Cylinder | Torus | Revolution

_MIRROR = np.diag([-1.0, 1.0, 1.0])


def _family_eval(fam: Family, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if isinstance(fam, Plane):
        z = np.zeros(np.broadcast(u, v).shape)
        return np.stack(np.broadcast_arrays(u, v, z), axis=-1)
    if isinstance(fam, Sphere):
        r = fam.radius
        return np.stack(np.broadcast_arrays(
            r * np.cos(u) * np.cos(v), r * np.cos(u) * np.sin(v), r * np.sin(u)), axis=-1)
    if isinstance(fam, Cylinder):
        r = fam.radius
        return np.stack(np.broadcast_arrays(r * np.cos(v), r * np.sin(v), u), axis=-1)
    if isinstance(fam, Torus):
        P = fam.major + fam.minor * np.sin(v)
        return np.stack(np.broadcast_arrays(
            P * np.cos(u), P * np.sin(u), fam.minor * np.cos(v)), axis=-1)
    if isinstance(fam, Revolution):
        Q = fam.center_rho + fam.radius * np.cos(v)
        return np.stack(np.broadcast_arrays(
            Q * np.cos(u), Q * np.sin(u), fam.center_z + fam.radius * np.sin(v)), axis=-1)
    raise TypeError(fam)


def _family_partials(fam: Family, u, v):
    """Return (f_u, f_v) in family coordinates."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shp = np.broadcast(u, v).shape
    zero = np.zeros(shp)
    one = np.ones(shp)
    if isinstance(fam, Plane):
        fu = np.stack(np.broadcast_arrays(one, zero, zero), axis=-1)
        fv = np.stack(np.broadcast_arrays(zero, one, zero), axis=-1)
        return fu, fv
    if isinstance(fam, Sphere):
        r = fam.radius
        fu = np.stack(np.broadcast_arrays(-r * np.sin(u) * np.cos(v),
                                          -r * np.sin(u) * np.sin(v), r * np.cos(u)), axis=-1)
        fv = np.stack(np.broadcast_arrays(-r * np.cos(u) * np.sin(v),
                                          r * np.cos(u) * np.cos(v), zero), axis=-1)
        return fu, fv
    if isinstance(fam, Cylinder):
        r = fam.radius
        fu = np.stack(np.broadcast_arrays(zero, zero, one), axis=-1)
        fv = np.stack(np.broadcast_arrays(-r * np.sin(v), r * np.cos(v), zero), axis=-1)
        return fu, fv
    if isinstance(fam, Torus):
        P = fam.major + fam.minor * np.sin(v)
        fu = np.stack(np.broadcast_arrays(-P * np.sin(u), P * np.cos(u), zero), axis=-1)
        fv = np.stack(np.broadcast_arrays(fam.minor * np.cos(v) * np.cos(u),
                                          fam.minor * np.cos(v) * np.sin(u),
                                          -fam.minor * np.sin(v)), axis=-1)
        return fu, fv
    if isinstance(fam, Revolution):
        Q = fam.center_rho + fam.radius * np.cos(v)
        a = fam.radius
        fu = np.stack(np.broadcast_arrays(-Q * np.sin(u), Q * np.cos(u), zero), axis=-1)
        fv = np.stack(np.broadcast_arrays(-a * np.sin(v) * np.cos(u),
                                          -a * np.sin(v) * np.sin(u), a * np.cos(v)), axis=-1)
        return fu, fv
    raise TypeError(fam)


def _family_second(fam: Family, u, v):
    """Return (f_uu, f_uv, f_vv) in family coordinates."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shp = np.broadcast(u, v).shape
    zero = np.zeros(shp)
    z3 = np.stack([zero, zero, zero], axis=-1)
    if isinstance(fam, Plane):
        return z3, z3.copy(), z3.copy()
    if isinstance(fam, Sphere):
        r = fam.radius
        fuu = -_family_eval(fam, u, v)
        fuv = np.stack(np.broadcast_arrays(r * np.sin(u) * np.sin(v),
                                           -r * np.sin(u) * np.cos(v), zero), axis=-1)
        fvv = np.stack(np.broadcast_arrays(-r * np.cos(u) * np.cos(v),
                                           -r * np.cos(u) * np.sin(v), zero), axis=-1)
        return fuu, fuv, fvv
    if isinstance(fam, Cylinder):
        r = fam.radius
        fvv = np.stack(np.broadcast_arrays(-r * np.cos(v), -r * np.sin(v), zero), axis=-1)
        return z3, z3.copy(), fvv
    if isinstance(fam, Torus):
        P = fam.major + fam.minor * np.sin(v)
        r = fam.minor
        fuu = np.stack(np.broadcast_arrays(-P * np.cos(u), -P * np.sin(u), zero), axis=-1)
        fuv = np.stack(np.broadcast_arrays(-r * np.cos(v) * np.sin(u),
                                           r * np.cos(v) * np.cos(u), zero), axis=-1)
        fvv = np.stack(np.broadcast_arrays(-r * np.sin(v) * np.cos(u),
                                           -r * np.sin(v) * np.sin(u), -r * np.cos(v)), axis=-1)
        return fuu, fuv, fvv
    if isinstance(fam, Revolution):
        Q = fam.center_rho + fam.radius * np.cos(v)
        a = fam.radius
        fuu = np.stack(np.broadcast_arrays(-Q * np.cos(u), -Q * np.sin(u), zero), axis=-1)
        fuv = np.stack(np.broadcast_arrays(a * np.sin(v) * np.sin(u),
                                           -a * np.sin(v) * np.cos(u), zero), axis=-1)
        fvv = np.stack(np.broadcast_arrays(-a * np.cos(v) * np.cos(u),
                                           -a * np.cos(v) * np.sin(u), -a * np.sin(v)), axis=-1)
        return fuu, fuv, fvv
    raise TypeError(fam)


def _family_normal(fam: Family, u, v):
    """Closed-form unit natural normal (direction of f_u x f_v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shp = np.broadcast(u, v).shape
    zero = np.zeros(shp)
    one = np.ones(shp)
    if isinstance(fam, Plane):
        return np.stack(np.broadcast_arrays(zero, zero, one), axis=-1)
    if isinstance(fam, Sphere):
        return -np.stack(np.broadcast_arrays(np.cos(u) * np.cos(v),
                                             np.cos(u) * np.sin(v), np.sin(u)), axis=-1)
    if isinstance(fam, Cylinder):
        return np.stack(np.broadcast_arrays(-np.cos(v), -np.sin(v), zero), axis=-1)
    if isinstance(fam, Torus):
        return -np.stack(np.broadcast_arrays(np.sin(v) * np.cos(u),
                                             np.sin(v) * np.sin(u), np.cos(v)), axis=-1)
    if isinstance(fam, Revolution):
        return np.stack(np.broadcast_arrays(np.cos(v) * np.cos(u),
                                            np.cos(v) * np.sin(u), np.sin(v)), axis=-1)
    raise TypeError(fam)


def _sin_range(lo: float, hi: float):
    """Exact range of sin over [lo, hi]."""
    cands = [math.sin(lo), math.sin(hi)]
    k0 = math.ceil((lo - math.pi / 2) / (2 * math.pi))
    if lo <= math.pi / 2 + 2 * math.pi * k0 <= hi:
        cands.append(1.0)
    k1 = math.ceil((lo + math.pi / 2) / (2 * math.pi))
    if lo <= -math.pi / 2 + 2 * math.pi * k1 <= hi:
        cands.append(-1.0)
    return min(cands), max(cands)


def _cos_range(lo: float, hi: float):
    a, b = _sin_range(lo + math.pi / 2, hi + math.pi / 2)
    return a, b


# ---------------------------------------------------------------------------
# trims and sides (parameter-space)


@dataclass(frozen=True)
class CircleTrim:
    """Keep points with sign * (|p - c|^2 - r^2) >= 0 in parameter space."""

    cx: float
    cy: float
    r: float
    sign: int  # +1 keeps outside, -1 keeps inside

    def keep(self, u, v):
        d2 = (np.asarray(u) - self.cx) ** 2 + (np.asarray(v) - self.cy) ** 2
        return self.sign * (d2 - self.r ** 2) >= -1e-12

    def scaled(self, f):
        return CircleTrim(self.cx * f, self.cy * f, self.r * f, self.sign)


@dataclass(frozen=True)
class HalfPlaneTrim:
    """Keep points with a*u + b*v + c >= 0 in parameter space."""

    a: float
    b: float
    c: float

    def keep(self, u, v):
        return self.a * np.asarray(u) + self.b * np.asarray(v) + self.c >= -1e-12

    def scaled(self, f):
        return HalfPlaneTrim(self.a, self.b, self.c * f)


@dataclass(frozen=True)
class Side:
    """One boundary curve of a patch, as a curve in parameter space.

    kind 'seg': straight from p0 to p1.
    kind 'arc': circular arc center (cx, cy), radius r, angles a0 -> a1.
    """

    kind: str
    data: tuple
    name: str = ""

    def params(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "seg":
            (x0, y0), (x1, y1) = self.data
            return np.stack([x0 + (x1 - x0) * t, y0 + (y1 - y0) * t], axis=-1)
        if self.kind == "arc":
            cx, cy, r, a0, a1 = self.data
            ang = a0 + (a1 - a0) * t
            return np.stack([cx + r * np.cos(ang), cy + r * np.sin(ang)], axis=-1)
        raise ValueError(self.kind)


def rect_sides(dom):
    u0, u1, v0, v1 = dom
    return (
        Side("seg", ((u0, v0), (u0, v1)), "u0"),
        Side("seg", ((u1, v0), (u1, v1)), "u1"),
        Side("seg", ((u0, v0), (u1, v0)), "v0"),
        Side("seg", ((u0, v1), (u1, v1)), "v1"),
    )


# ---------------------------------------------------------------------------
# patch


class GeometryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Patch:
    """A placed canonical patch with orientation and optional trims."""

    family: Family
    rotation: np.ndarray
    translation: np.ndarray
    domain: tuple  # (u0, u1, v0, v1)
    orientation: int = 1
    mirror: bool = False
    label: str = ""
    trims: tuple = ()
    sides: tuple | None = None  # explicit boundary curves; None => rectangle

    def __post_init__(self):
        object.__setattr__(self, "rotation", _check_rotation(self.rotation))
        t = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "translation", t)
        u0, u1, v0, v1 = self.domain
        if not (u0 < u1 and v0 < v1):
            raise GeometryError(f"degenerate domain {self.domain} in {self.label!r}")
        if self.orientation not in (-1, 1):
            raise GeometryError("orientation must be +1 or -1")
        if isinstance(self.family, Torus):
            slo, shi = _sin_range(v0, v1)
            m = min(self.family.major + self.family.minor * slo,
                    self.family.major + self.family.minor * shi)
            if m <= 1e-9 * abs(self.family.minor):
                raise GeometryError(
                    f"torus domain reaches the singular locus in {self.label!r}")
        if isinstance(self.family, Revolution):
            clo, chi = _cos_range(v0, v1)
            m = min(self.family.center_rho + self.family.radius * clo,
                    self.family.center_rho + self.family.radius * chi)
            if m <= 1e-9 * abs(self.family.radius):
                raise GeometryError(
                    f"revolution domain crosses the axis in {self.label!r}")

    # -- basic maps ---------------------------------------------------------

    @property
    def _sign(self) -> int:
        return self.orientation * (-1 if self.mirror else 1)

    def _to_world_vec(self, vecs: np.ndarray) -> np.ndarray:
        if self.mirror:
            vecs = vecs @ _MIRROR
        return vecs @ self.rotation.T

    def point(self, u, v) -> np.ndarray:
        self._require_in_domain(u, v)
        return self._to_world_vec(_family_eval(self.family, u, v)) + self.translation

    def point_unchecked(self, u, v) -> np.ndarray:
        return self._to_world_vec(_family_eval(self.family, u, v)) + self.translation

    def partials(self, u, v):
        fu, fv = _family_partials(self.family, u, v)
        return self._to_world_vec(fu), self._to_world_vec(fv)

    def normal(self, u, v) -> np.ndarray:
        """Oriented unit normal (closed form, pole-safe)."""
        self._require_in_domain(u, v)
        n = self._to_world_vec(_family_normal(self.family, u, v))
        return self._sign * n

    def _require_in_domain(self, u, v):
        u0, u1, v0, v1 = self.domain
        u = np.asarray(u)
        v = np.asarray(v)
        eps = 1e-9
        if (u < u0 - eps).any() or (u > u1 + eps).any() \
                or (v < v0 - eps).any() or (v > v1 + eps).any():
            raise GeometryError(f"parameters outside domain of {self.label!r}")

    # -- fundamental forms and curvature ------------------------------------

    def fundamental_forms(self, u, v):
        """Return (E, F, G, L, M, N) w.r.t. the oriented normal.

        Signed so that principal curvatures are the eigenvalues of I^-1 II;
        a unit sphere oriented outward has L/E = 1.
        """
        self._require_in_domain(u, v)
        Xu, Xv = self.partials(u, v)
        fuu, fuv, fvv = _family_second(self.family, u, v)
        Xuu = self._to_world_vec(fuu)
        Xuv = self._to_world_vec(fuv)
        Xvv = self._to_world_vec(fvv)
        n = self.normal(u, v)
        E = (Xu * Xu).sum(-1)
        F = (Xu * Xv).sum(-1)
        G = (Xv * Xv).sum(-1)
        det = E * G - F * F
        if (det <= 1e-14).any():
            raise GeometryError(f"degenerate first form (non-immersion) in {self.label!r}")
        L = -(n * Xuu).sum(-1)
        M = -(n * Xuv).sum(-1)
        N = -(n * Xvv).sum(-1)
        return E, F, G, L, M, N

    def principal_curvatures(self, u, v):
        """Closed-form principal curvatures (kappa1 <= kappa2 pointwise)."""
        self._require_in_domain(u, v)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        s = float(self._sign)
        fam = self.family
        shp = np.broadcast(u, v).shape
        if isinstance(fam, Plane):
            k1 = np.zeros(shp)
            k2 = np.zeros(shp)
        elif isinstance(fam, Sphere):
            k1 = np.full(shp, -s / fam.radius)
            k2 = k1.copy()
        elif isinstance(fam, Cylinder):
            k1 = np.full(shp, -s / fam.radius)
            k2 = np.zeros(shp)
        elif isinstance(fam, Torus):
            k1 = np.broadcast_to(-s / fam.minor, shp).copy()
            k2 = -s * np.sin(v) / (fam.major + fam.minor * np.sin(v))
            k2 = np.broadcast_to(k2, shp).copy()
        elif isinstance(fam, Revolution):
            k1 = np.broadcast_to(s / fam.radius, shp).copy()
            k2 = s * np.cos(v) / (fam.center_rho + fam.radius * np.cos(v))
            k2 = np.broadcast_to(k2, shp).copy()
        else:
            raise TypeError(fam)
        lo = np.minimum(k1, k2)
        hi = np.maximum(k1, k2)
        return lo, hi

    def principal_curvatures_forms(self, u, v):
        """Shape-operator path (generic oracle).

        The operator is expressed in an orthonormal tangent frame, which keeps
        the eigenvalue problem well conditioned near parameterization poles.
        """
        E, F, G, L, M, N = self.fundamental_forms(u, v)
        # Gram-Schmidt: e1 = Xu/sqrt(E), e2 ~ Xv - (F/E) Xu
        g = G - F * F / E
        s11 = L / E
        s12 = (M - (F / E) * L) / np.sqrt(E * g)
        s22 = (N - 2 * (F / E) * M + (F / E) ** 2 * L) / g
        mean = (s11 + s22) / 2
        rt = np.sqrt(((s11 - s22) / 2) ** 2 + s12 ** 2)
        return mean - rt, mean + rt

    def curvature_range(self):
        """Rigorous enclosure [lo, hi] of both principal curvatures.

        Closed-form per family using monotonicity in the tube angle; the
        enclosure contains every sampled curvature (padded by RANGE_PAD).
        """
        s = float(self._sign)
        fam = self.family
        u0, u1, v0, v1 = self.domain
        if isinstance(fam, Plane):
            vals = [0.0, 0.0]
        elif isinstance(fam, Sphere):
            vals = [-s / fam.radius] * 2
        elif isinstance(fam, Cylinder):
            vals = [0.0, -s / fam.radius]
        elif isinstance(fam, Torus):
            xlo, xhi = _sin_range(v0, v1)
            g = lambda x: -s * x / (fam.major + fam.minor * x)
            vals = [-s / fam.minor, g(xlo), g(xhi)]
        elif isinstance(fam, Revolution):
            xlo, xhi = _cos_range(v0, v1)
            g = lambda x: s * x / (fam.center_rho + fam.radius * x)
            vals = [s / fam.radius, g(xlo), g(xhi)]
        else:
            raise TypeError(fam)
        return min(vals) - RANGE_PAD, max(vals) + RANGE_PAD

    # -- trims / sides -------------------------------------------------------

    def inside(self, u, v):
        """Trim predicate in parameter space (True where material exists)."""
        out = np.ones(np.broadcast(np.asarray(u), np.asarray(v)).shape, dtype=bool)
        for tr in self.trims:
            out &= tr.keep(u, v)
        return out

    def boundary_sides(self):
        return self.sides if self.sides is not None else rect_sides(self.domain)

    def surface_distance(self, X):
        """Exact distance from world points to the (untrimmed) full family
        surface, plus whether the foot point lies inside the patch domain."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = (X - self.translation) @ self.rotation
        if self.mirror:
            Y = Y @ _MIRROR
        fam = self.family
        u0, u1, v0, v1 = self.domain

        def wrap_into(a, lo, hi):
            out = a.copy()
            for _ in range(2):
                out = np.where(out < lo - 1e-12, out + 2 * math.pi, out)
                out = np.where(out > hi + 1e-12, out - 2 * math.pi, out)
            return out

        if isinstance(fam, Plane):
            d = np.abs(Y[:, 2])
            u, v = Y[:, 0], Y[:, 1]
        elif isinstance(fam, Sphere):
            rr = np.linalg.norm(Y, axis=1)
            d = np.abs(rr - fam.radius)
            u = np.arcsin(np.clip(Y[:, 2] / np.maximum(rr, 1e-300), -1, 1))
            v = wrap_into(np.arctan2(Y[:, 1], Y[:, 0]), v0, v1)
        elif isinstance(fam, Cylinder):
            rho = np.hypot(Y[:, 0], Y[:, 1])
            d = np.abs(rho - fam.radius)
            u = Y[:, 2]
            v = wrap_into(np.arctan2(Y[:, 1], Y[:, 0]), v0, v1)
        elif isinstance(fam, Torus):
            rho = np.hypot(Y[:, 0], Y[:, 1])
            dc = np.hypot(rho - fam.major, Y[:, 2])
            d = np.abs(dc - fam.minor)
            u = wrap_into(np.arctan2(Y[:, 1], Y[:, 0]), u0, u1)
            v = wrap_into(np.arctan2(rho - fam.major, Y[:, 2]), v0, v1)
        elif isinstance(fam, Revolution):
            rho = np.hypot(Y[:, 0], Y[:, 1])
            dc = np.hypot(rho - fam.center_rho, Y[:, 2] - fam.center_z)
            d = np.abs(dc - fam.radius)
            u = wrap_into(np.arctan2(Y[:, 1], Y[:, 0]), u0, u1)
            v = wrap_into(np.arctan2(Y[:, 2] - fam.center_z, rho - fam.center_rho), v0, v1)
        else:
            raise TypeError(fam)
        tol = 1e-9
        inside = (u >= u0 - tol) & (u <= u1 + tol) & (v >= v0 - tol) & (v <= v1 + tol)
        if self.trims:
            inside &= self.inside(u, v)
        return d, inside

    # -- family-closed operations -------------------------------------------

    def offset(self, eps: float, side: int = 1) -> "Patch":
        """Family-closed parallel surface at distance eps.

        side = -1 moves along the oriented normal (outward for a body
        boundary), side = +1 against it.  Principal curvatures transform as
        kappa / (1 - side*eps*kappa); the focal precondition
        1 - side*eps*kappa > 0 is enforced using the rigorous range.
        """
        if eps <= 0:
            raise GeometryError("offset distance must be positive")
        lo, hi = self.curvature_range()
        for k in (lo, hi):
            if 1.0 - side * eps * k <= 1e-9:
                raise GeometryError(
                    f"offset {eps} crosses focal set of {self.label!r} (kappa={k})")
        c = -side * self._sign
        fam = self.family
        if isinstance(fam, Plane):
            n_world = self._sign * self._to_world_vec(np.array([0.0, 0.0, 1.0]))
            return replace(self, translation=self.translation - side * eps * n_world)
        if isinstance(fam, Sphere):
            fam2 = Sphere(fam.radius - c * eps)
            if fam2.radius <= 0:
                raise GeometryError("offset collapses sphere")
        elif isinstance(fam, Cylinder):
            fam2 = Cylinder(fam.radius - c * eps)
            if fam2.radius <= 0:
                raise GeometryError("offset collapses cylinder")
        elif isinstance(fam, Torus):
            fam2 = Torus(fam.major, fam.minor - c * eps)
            if fam2.minor <= 0:
                raise GeometryError("offset collapses torus tube")
        elif isinstance(fam, Revolution):
            fam2 = Revolution(fam.center_rho, fam.center_z, fam.radius + c * eps)
            if fam2.radius <= 0:
                raise GeometryError("offset collapses revolution tube")
        else:
            raise TypeError(fam)
        return replace(self, family=fam2)

    def transformed(self, motion: RigidMotion) -> "Patch":
        return replace(self, rotation=motion.rotation @ self.rotation,
                       translation=motion.rotation @ self.translation + motion.translation)

    def reflected(self, plane: str = "x", offset: float = 0.0) -> "Patch":
        """Reflect through the world plane {axis = offset}; normals stay outward."""
        axis = {"x": 0, "y": 1, "z": 2}[plane]
        S = np.eye(3)
        S[axis, axis] = -1.0
        shift = np.zeros(3)
        shift[axis] = 2.0 * offset
        newR = S @ self.rotation @ _MIRROR
        newt = S @ self.translation + shift
        return replace(self, rotation=newR, translation=newt,
                       mirror=not self.mirror, orientation=-self.orientation)

    def point_reflected(self) -> "Patch":
        """Reflect through the origin (improper; composed of three mirrors)."""
        p = self.reflected("x").reflected("y").reflected("z")
        return p

    def scaled(self, lam: float) -> "Patch":
        """Uniform scale about the origin; curvatures divide by lam."""
        if lam <= 0:
            raise GeometryError("scale factor must be positive")
        fam = self.family
        dom = self.domain
        trims = self.trims
        sides = self.sides

        def scale_param_lengths(factor_u, factor_v):
            nonlocal dom, trims, sides
            u0, u1, v0, v1 = dom
            dom = (u0 * factor_u, u1 * factor_u, v0 * factor_v, v1 * factor_v)
            if factor_u != factor_v and (trims or sides):
                raise GeometryError("anisotropic parameter scaling with trims")
            f = factor_u
            trims = tuple(t.scaled(f) for t in trims)
            if sides is not None:
                new_sides = []
                for s in sides:
                    if s.kind == "seg":
                        (x0, y0), (x1, y1) = s.data
                        new_sides.append(Side("seg", ((x0 * f, y0 * f), (x1 * f, y1 * f)), s.name))
                    else:
                        cx, cy, r, a0, a1 = s.data
                        new_sides.append(Side("arc", (cx * f, cy * f, r * f, a0, a1), s.name))
                sides = tuple(new_sides)

        if isinstance(fam, Plane):
            scale_param_lengths(lam, lam)
        elif isinstance(fam, Sphere):
            fam = Sphere(fam.radius * lam)
        elif isinstance(fam, Cylinder):
            fam = Cylinder(fam.radius * lam)
            scale_param_lengths(lam, 1.0)
        elif isinstance(fam, Torus):
            fam = Torus(fam.major * lam, fam.minor * lam)
        elif isinstance(fam, Revolution):
            fam = Revolution(fam.center_rho * lam, fam.center_z * lam, fam.radius * lam)
        return replace(self, family=fam, translation=self.translation * lam,
                       domain=dom, trims=trims, sides=sides)


def affine_patch(family: Family, A, t, domain, orientation=1, label="",
                 trims=(), sides=None) -> Patch:
    """Build a patch from a possibly improper linear map A (det = +-1)."""
    A = np.asarray(A, dtype=float)
    mirror = np.linalg.det(A) < 0
    R = A @ _MIRROR if mirror else A
    return Patch(family=family, rotation=R, translation=np.asarray(t, dtype=float),
                 domain=tuple(float(x) for x in domain), orientation=orientation,
                 mirror=bool(mirror), label=label, trims=tuple(trims), sides=sides)
