"""Exact planar geometry for disks, stadiums, pair-disks, and convex polygons.

Shapes are immutable value objects measured in meters.  The operations here
supply every geometric quantity the closed-form metrics and the Monte Carlo
simulator consume: areas, perimeters, chords of undirected lines, point
membership, boundary/line intersections, pairwise overlap areas, and lengths
of one boundary inside another shape.

Undirected lines use the motion-invariant parameterization (theta, p): theta
is the direction of the line's normal and p its signed distance from the
origin, so (theta, p) and (theta + pi, -p) name the same line.

Conventions:
    * A "stadium" is a 2a x 2r rectangle capped by two radius-r half disks.
    * A "pair_disk" is the union of two radius-r disks whose centers sit 2a
      apart (a is measured from the midpoint to each center).  It is convex
      only for a = 0 but is accepted everywhere; chord and boundary queries
      return the full 1-D measure / point set of the union.
    * a = 0 degenerates both families to the plain disk, and every operation
      agrees with the disk in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

TWO_PI = 2.0 * math.pi

# Absolute slack, in meters, for boundary-inclusive membership and for
# collapsing tangency/duplicate intersection parameters.
_EPS = 1e-9

DISK = "disk"
STADIUM = "stadium"
PAIR_DISK = "pair_disk"
POLYGON = "convex_polygon"

Point = tuple[float, float]


@dataclass(frozen=True)
class Line:
    """Undirected line with normal angle ``theta`` and signed offset ``p``."""

    theta: float
    p: float

    def canonical(self) -> "Line":
        """Equivalent line with theta wrapped into [0, pi)."""
        theta = math.fmod(self.theta, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        p = self.p
        if theta >= math.pi:
            theta -= math.pi
            p = -p
        return Line(theta, p)

    @property
    def normal(self) -> Point:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def direction(self) -> Point:
        return (-math.sin(self.theta), math.cos(self.theta))

    def point_at(self, t: float) -> Point:
        nx, ny = self.normal
        return (self.p * nx - t * ny, self.p * ny + t * nx)


@dataclass(frozen=True)
class ConvexShape:
    """Disk / stadium / pair-disk / convex polygon, positioned in the plane.

    Use the factory classmethods; the constructor validates invariants
    (r > 0, a >= 0, polygons counterclockwise and convex).
    """

    kind: str
    center: Point = (0.0, 0.0)
    r: float = 0.0
    a: float = 0.0
    orientation: float = 0.0
    vertices: tuple[Point, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in (DISK, STADIUM, PAIR_DISK, POLYGON):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.kind == POLYGON:
            _validate_polygon(self.vertices)
        else:
            if not self.r > 0.0:
                raise ValueError("shape radius r must be positive")
            if self.a < 0.0:
                raise ValueError("elongation a must be non-negative")
            if self.kind == DISK and self.a != 0.0:
                raise ValueError("disk does not take an elongation")

    @classmethod
    def disk(cls, center: Point, r: float) -> "ConvexShape":
        return cls(DISK, center=(float(center[0]), float(center[1])), r=float(r))

    @classmethod
    def stadium(cls, center: Point, r: float, a: float,
                orientation: float = 0.0) -> "ConvexShape":
        return cls(STADIUM, center=(float(center[0]), float(center[1])),
                   r=float(r), a=float(a), orientation=float(orientation))

    @classmethod
    def pair_disk(cls, center: Point, r: float, a: float,
                  orientation: float = 0.0) -> "ConvexShape":
        return cls(PAIR_DISK, center=(float(center[0]), float(center[1])),
                   r=float(r), a=float(a), orientation=float(orientation))

    @classmethod
    def polygon(cls, vertices: Sequence[Point]) -> "ConvexShape":
        verts = tuple((float(x), float(y)) for x, y in vertices)
        cx = sum(v[0] for v in verts) / len(verts)
        cy = sum(v[1] for v in verts) / len(verts)
        return cls(POLYGON, center=(cx, cy), vertices=verts)

    @property
    def axis(self) -> Point:
        return (math.cos(self.orientation), math.sin(self.orientation))

    def lobe_centers(self) -> tuple[Point, Point]:
        """Centers of the two pair-disk lobes (also stadium cap centers)."""
        ex, ey = self.axis
        cx, cy = self.center
        return ((cx - self.a * ex, cy - self.a * ey),
                (cx + self.a * ex, cy + self.a * ey))


def _validate_polygon(vertices: Sequence[Point]) -> None:
    if len(vertices) < 3:
        raise ValueError("polygon needs at least 3 vertices")
    n = len(vertices)
    area2 = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        area2 += x0 * y1 - x1 * y0
    if area2 <= 0.0:
        raise ValueError("polygon vertices must be counterclockwise")
    scale = max(max(abs(x), abs(y)) for x, y in vertices) + 1.0
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cx, cy = vertices[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross < -_EPS * scale * scale:
            raise ValueError("polygon is not convex")


# ---------------------------------------------------------------------------
# scalar measures


def _lens_area(r1: float, r2: float, d: float) -> float:
    """Area of the intersection of two disks with radii r1, r2, centers d apart."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        rmin = min(r1, r2)
        return math.pi * rmin * rmin
    c1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)
    c2 = (d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)
    c1 = min(1.0, max(-1.0, c1))
    c2 = min(1.0, max(-1.0, c2))
    term = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
    return (r1 * r1 * math.acos(c1) + r2 * r2 * math.acos(c2)
            - 0.5 * math.sqrt(max(0.0, term)))


def area(shape: ConvexShape) -> float:
    """Exact area |X| in square meters."""
    if shape.kind == DISK:
        return math.pi * shape.r * shape.r
    if shape.kind == STADIUM:
        return math.pi * shape.r * shape.r + 4.0 * shape.a * shape.r
    if shape.kind == PAIR_DISK:
        r, d = shape.r, 2.0 * shape.a
        if d >= 2.0 * r:
            return 2.0 * math.pi * r * r
        lens = 2.0 * r * r * math.acos(d / (2.0 * r)) - (d / 2.0) * math.sqrt(
            4.0 * r * r - d * d)
        return 2.0 * math.pi * r * r - lens
    verts = shape.vertices
    total = 0.0
    for i in range(len(verts)):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % len(verts)]
        total += x0 * y1 - x1 * y0
    return 0.5 * total


def perimeter(shape: ConvexShape) -> float:
    """Exact boundary length L(X); for a pair-disk, the two outer arcs."""
    if shape.kind == DISK:
        return TWO_PI * shape.r
    if shape.kind == STADIUM:
        return TWO_PI * shape.r + 4.0 * shape.a
    if shape.kind == PAIR_DISK:
        r, d = shape.r, 2.0 * shape.a
        if d >= 2.0 * r:
            return 2.0 * TWO_PI * r
        return 4.0 * r * (math.pi - math.acos(d / (2.0 * r)))
    verts = shape.vertices
    return sum(math.dist(verts[i], verts[(i + 1) % len(verts)])
               for i in range(len(verts)))


def bounding_box(shape: ConvexShape) -> tuple[float, float, float, float]:
    """Axis-aligned (xmin, ymin, xmax, ymax)."""
    if shape.kind == POLYGON:
        xs = [v[0] for v in shape.vertices]
        ys = [v[1] for v in shape.vertices]
        return (min(xs), min(ys), max(xs), max(ys))
    cx, cy = shape.center
    ex, ey = shape.axis
    hx = shape.a * abs(ex) + shape.r
    hy = shape.a * abs(ey) + shape.r
    return (cx - hx, cy - hy, cx + hx, cy + hy)


def max_reach(shape: ConvexShape) -> float:
    """Largest distance from the shape's reference center to its boundary."""
    if shape.kind == POLYGON:
        return max(math.dist(shape.center, v) for v in shape.vertices)
    return shape.a + shape.r


def place(template: ConvexShape, center: Point, orientation: float) -> ConvexShape:
    """Copy of ``template`` moved to ``center`` and rotated to ``orientation``."""
    if template.kind == POLYGON:
        cx0, cy0 = template.center
        cs, sn = math.cos(orientation), math.sin(orientation)
        verts = []
        for x, y in template.vertices:
            dx, dy = x - cx0, y - cy0
            verts.append((center[0] + cs * dx - sn * dy,
                          center[1] + sn * dx + cs * dy))
        return ConvexShape.polygon(verts)
    return ConvexShape(template.kind, center=(float(center[0]), float(center[1])),
                       r=template.r, a=template.a, orientation=float(orientation))


# ---------------------------------------------------------------------------
# membership


def _point_seg_dist2(px: float, py: float, ax: float, ay: float,
                     bx: float, by: float) -> float:
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    vv = vx * vx + vy * vy
    if vv <= 0.0:
        return wx * wx + wy * wy
    t = (wx * vx + wy * vy) / vv
    t = min(1.0, max(0.0, t))
    dx, dy = wx - t * vx, wy - t * vy
    return dx * dx + dy * dy


def contains(shape: ConvexShape, point: Point, tol: float = _EPS) -> bool:
    """Membership test; the boundary counts as inside (within ``tol`` meters)."""
    x, y = point
    if shape.kind == DISK:
        cx, cy = shape.center
        return math.hypot(x - cx, y - cy) <= shape.r + tol
    if shape.kind == STADIUM:
        (ax, ay), (bx, by) = shape.lobe_centers()
        return _point_seg_dist2(x, y, ax, ay, bx, by) <= (shape.r + tol) ** 2
    if shape.kind == PAIR_DISK:
        (ax, ay), (bx, by) = shape.lobe_centers()
        rt = (shape.r + tol) ** 2
        d1 = (x - ax) ** 2 + (y - ay) ** 2
        d2 = (x - bx) ** 2 + (y - by) ** 2
        return d1 <= rt or d2 <= rt
    verts = shape.vertices
    scale = max_reach(shape) + 1.0
    for i in range(len(verts)):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % len(verts)]
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < -tol * scale:
            return False
    return True


def contains_many(shape: ConvexShape, xs, ys, tol: float = _EPS):
    """Vectorized membership test over coordinate arrays (numpy bool array)."""
    import numpy as np

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if shape.kind == DISK:
        cx, cy = shape.center
        return (xs - cx) ** 2 + (ys - cy) ** 2 <= (shape.r + tol) ** 2
    if shape.kind == STADIUM:
        (ax, ay), (bx, by) = shape.lobe_centers()
        vx, vy = bx - ax, by - ay
        vv = vx * vx + vy * vy
        wx, wy = xs - ax, ys - ay
        if vv <= 0.0:
            d2 = wx * wx + wy * wy
        else:
            t = np.clip((wx * vx + wy * vy) / vv, 0.0, 1.0)
            d2 = (wx - t * vx) ** 2 + (wy - t * vy) ** 2
        return d2 <= (shape.r + tol) ** 2
    if shape.kind == PAIR_DISK:
        (ax, ay), (bx, by) = shape.lobe_centers()
        rt = (shape.r + tol) ** 2
        return (((xs - ax) ** 2 + (ys - ay) ** 2 <= rt)
                | ((xs - bx) ** 2 + (ys - by) ** 2 <= rt))
    verts = shape.vertices
    scale = max_reach(shape) + 1.0
    ok = np.ones(xs.shape, dtype=bool)
    for i in range(len(verts)):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % len(verts)]
        ok &= (bx - ax) * (ys - ay) - (by - ay) * (xs - ax) >= -tol * scale
    return ok


# ---------------------------------------------------------------------------
# line queries

Interval = tuple[float, float]


def _merge_intervals(parts: list[Interval]) -> list[Interval]:
    if not parts:
        return []
    parts.sort()
    merged = [parts[0]]
    for lo, hi in parts[1:]:
        mlo, mhi = merged[-1]
        if lo <= mhi + _EPS:
            merged[-1] = (mlo, max(mhi, hi))
        else:
            merged.append((lo, hi))
    return merged


def _disk_interval(cx: float, cy: float, r: float, line: Line) -> Interval | None:
    nx, ny = line.normal
    delta = cx * nx + cy * ny - line.p
    if abs(delta) > r:
        return None
    h = math.sqrt(max(0.0, r * r - delta * delta))
    tc = -cx * ny + cy * nx
    return (tc - h, tc + h)


def _slab_interval(alpha: float, beta: float, half_width: float,
                   lo: float, hi: float) -> Interval | None:
    """Clip [lo, hi] to {t : |alpha + t*beta| <= half_width}."""
    if abs(beta) < 1e-15:
        return (lo, hi) if abs(alpha) <= half_width else None
    t0 = (-half_width - alpha) / beta
    t1 = (half_width - alpha) / beta
    if t0 > t1:
        t0, t1 = t1, t0
    lo, hi = max(lo, t0), min(hi, t1)
    return (lo, hi) if lo <= hi else None


def line_intervals(shape: ConvexShape, line: Line) -> list[Interval]:
    """Parameter intervals of ``shape`` along ``line`` (sorted, disjoint).

    Parameters are distances along the line direction from the foot point
    p * normal.  Convex shapes give at most one interval; a pair-disk may
    give two.
    """
    if shape.kind == DISK or (shape.kind in (STADIUM, PAIR_DISK) and shape.a == 0.0):
        cx, cy = shape.center
        iv = _disk_interval(cx, cy, shape.r, line)
        return [iv] if iv is not None else []
    if shape.kind == STADIUM:
        parts: list[Interval] = []
        nx, ny = line.normal
        ex, ey = shape.axis
        cx, cy = shape.center
        # local coordinates of the line: u along the axis, v across it
        ox, oy = line.p * nx - cx, line.p * ny - cy
        dx, dy = -ny, nx
        au, bu = ox * ex + oy * ey, dx * ex + dy * ey
        av, bv = -ox * ey + oy * ex, -dx * ey + dy * ex
        rect = _slab_interval(au, bu, shape.a, -math.inf, math.inf)
        if rect is not None:
            rect2 = _slab_interval(av, bv, shape.r, rect[0], rect[1])
            if rect2 is not None:
                parts.append(rect2)
        for lx, ly in shape.lobe_centers():
            iv = _disk_interval(lx, ly, shape.r, line)
            if iv is not None:
                parts.append(iv)
        if not parts:
            return []
        # the pieces tile a convex set, so their union is one interval
        return [(min(p[0] for p in parts), max(p[1] for p in parts))]
    if shape.kind == PAIR_DISK:
        parts = []
        for lx, ly in shape.lobe_centers():
            iv = _disk_interval(lx, ly, shape.r, line)
            if iv is not None:
                parts.append(iv)
        return _merge_intervals(parts)
    # convex polygon: clip the line parameter by every edge half-plane
    verts = shape.vertices
    nx, ny = line.normal
    ox, oy = line.p * nx, line.p * ny
    dx, dy = -ny, nx
    lo, hi = -math.inf, math.inf
    for i in range(len(verts)):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % len(verts)]
        ux, uy = bx - ax, by - ay  # edge direction; interior is to its left
        num = ux * (oy - ay) - uy * (ox - ax)
        den = ux * dy - uy * dx
        if abs(den) < 1e-15:
            if num < 0.0:
                return []
            continue
        t = -num / den
        if den > 0.0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    return [(lo, hi)] if lo <= hi else []


def chord_length(shape: ConvexShape, line: Line) -> float:
    """1-D measure of shape ∩ line; 0 when they miss each other."""
    return sum(hi - lo for lo, hi in line_intervals(shape, line))


def _dedupe_params(ts: list[float], scale: float) -> list[float]:
    if not ts:
        return []
    ts.sort()
    out = [ts[0]]
    tol = _EPS * max(1.0, scale)
    for t in ts[1:]:
        if t - out[-1] > tol:
            out.append(t)
    return out


def _circle_line_params(cx: float, cy: float, r: float, line: Line) -> list[float]:
    nx, ny = line.normal
    delta = cx * nx + cy * ny - line.p
    if abs(delta) > r:
        return []
    h2 = r * r - delta * delta
    tc = -cx * ny + cy * nx
    h = math.sqrt(max(0.0, h2))
    if h <= _EPS * max(1.0, r):
        return [tc]  # tangency collapses to one point
    return [tc - h, tc + h]


def boundary_line_params(shape: ConvexShape, line: Line) -> list[float]:
    """Sorted line parameters where the line crosses the shape boundary."""
    scale = max_reach(shape) + math.hypot(*shape.center)
    if shape.kind == DISK or (shape.kind in (STADIUM, PAIR_DISK) and shape.a == 0.0):
        cx, cy = shape.center
        return _circle_line_params(cx, cy, shape.r, line)
    ts: list[float] = []
    if shape.kind == STADIUM:
        ex, ey = shape.axis
        cx, cy = shape.center
        nx, ny = line.normal
        ox, oy = line.p * nx, line.p * ny
        dx, dy = -ny, nx

        def local_u(t: float) -> float:
            return (ox + t * dx - cx) * ex + (oy + t * dy - cy) * ey

        for lobe, sign in zip(shape.lobe_centers(), (-1.0, 1.0)):
            for t in _circle_line_params(lobe[0], lobe[1], shape.r, line):
                if sign * local_u(t) >= shape.a - _EPS * max(1.0, scale):
                    ts.append(t)
        # flat edges at v = ±r, |u| <= a
        fx, fy = -ey, ex
        for side in (-1.0, 1.0):
            px = cx + side * shape.r * fx
            py = cy + side * shape.r * fy
            ax_, ay_ = px - shape.a * ex, py - shape.a * ey
            bx_, by_ = px + shape.a * ex, py + shape.a * ey
            t = _seg_line_param(ax_, ay_, bx_, by_, line)
            if t is not None:
                ts.append(t)
    elif shape.kind == PAIR_DISK:
        (c1x, c1y), (c2x, c2y) = shape.lobe_centers()
        r = shape.r
        tol = _EPS * max(1.0, scale)
        for t in _circle_line_params(c1x, c1y, r, line):
            x, y = line.point_at(t)
            if math.hypot(x - c2x, y - c2y) >= r - tol:
                ts.append(t)
        for t in _circle_line_params(c2x, c2y, r, line):
            x, y = line.point_at(t)
            if math.hypot(x - c1x, y - c1y) >= r - tol:
                ts.append(t)
    else:
        verts = shape.vertices
        for i in range(len(verts)):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % len(verts)]
            t = _seg_line_param(ax, ay, bx, by, line)
            if t is not None:
                ts.append(t)
    return _dedupe_params(ts, scale)


def _seg_line_param(ax: float, ay: float, bx: float, by: float,
                    line: Line) -> float | None:
    """Line parameter of the crossing with segment AB, or None."""
    nx, ny = line.normal
    fa = ax * nx + ay * ny - line.p
    fb = bx * nx + by * ny - line.p
    if (fa > 0.0 and fb > 0.0) or (fa < 0.0 and fb < 0.0):
        return None
    denom = fa - fb
    if abs(denom) < 1e-300:
        return None  # segment lies along the line; endpoints come from arcs
    s = fa / denom
    px, py = ax + s * (bx - ax), ay + s * (by - ay)
    return -px * ny + py * nx


def boundary_line_intersections(shape: ConvexShape, line: Line) -> list[Point]:
    """Intersection points of the line with the shape boundary, sorted along it."""
    return [line.point_at(t) for t in boundary_line_params(shape, line)]


# ---------------------------------------------------------------------------
# boundary pieces (used for arcs inside another shape)


@dataclass(frozen=True)
class _Arc:
    cx: float
    cy: float
    r: float
    start: float
    sweep: float  # counterclockwise, in (0, 2*pi]

    def length(self) -> float:
        return self.r * self.sweep

    def point(self, u: float) -> Point:
        ang = self.start + u
        return (self.cx + self.r * math.cos(ang), self.cy + self.r * math.sin(ang))


@dataclass(frozen=True)
class _Seg:
    ax: float
    ay: float
    bx: float
    by: float

    def length(self) -> float:
        return math.hypot(self.bx - self.ax, self.by - self.ay)

    def point(self, u: float) -> Point:
        return (self.ax + u * (self.bx - self.ax), self.ay + u * (self.by - self.ay))


def _boundary_pieces(shape: ConvexShape) -> list[_Arc | _Seg]:
    if shape.kind == DISK or (shape.kind in (STADIUM, PAIR_DISK) and shape.a == 0.0):
        cx, cy = shape.center
        return [_Arc(cx, cy, shape.r, 0.0, TWO_PI)]
    if shape.kind == STADIUM:
        g = shape.orientation
        ex, ey = shape.axis
        fx, fy = -ey, ex
        (l1x, l1y), (l2x, l2y) = shape.lobe_centers()
        r, a = shape.r, shape.a
        pieces: list[_Arc | _Seg] = [
            _Arc(l2x, l2y, r, g - 0.5 * math.pi, math.pi),
            _Seg(l2x + r * fx, l2y + r * fy, l1x + r * fx, l1y + r * fy),
            _Arc(l1x, l1y, r, g + 0.5 * math.pi, math.pi),
            _Seg(l1x - r * fx, l1y - r * fy, l2x - r * fx, l2y - r * fy),
        ]
        return pieces
    if shape.kind == PAIR_DISK:
        (c1x, c1y), (c2x, c2y) = shape.lobe_centers()
        r, d = shape.r, 2.0 * shape.a
        g = shape.orientation
        if d >= 2.0 * r:
            return [_Arc(c1x, c1y, r, 0.0, TWO_PI), _Arc(c2x, c2y, r, 0.0, TWO_PI)]
        beta = math.acos(d / (2.0 * r))
        # lobe 1 sees lobe 2 in direction g; lobe 2 sees lobe 1 in direction g+pi
        return [
            _Arc(c1x, c1y, r, g + beta, TWO_PI - 2.0 * beta),
            _Arc(c2x, c2y, r, g + math.pi + beta, TWO_PI - 2.0 * beta),
        ]
    verts = shape.vertices
    return [_Seg(*verts[i], *verts[(i + 1) % len(verts)])
            for i in range(len(verts))]


def _circle_circle_points(c1x: float, c1y: float, r1: float,
                          c2x: float, c2y: float, r2: float) -> list[Point]:
    dx, dy = c2x - c1x, c2y - c1y
    d = math.hypot(dx, dy)
    if d < 1e-12 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - x * x
    h = math.sqrt(max(0.0, h2))
    bx, by = c1x + x * dx / d, c1y + x * dy / d
    if h <= _EPS:
        return [(bx, by)]
    ox, oy = -dy / d * h, dx / d * h
    return [(bx + ox, by + oy), (bx - ox, by - oy)]


def _circle_seg_points(cx: float, cy: float, r: float, seg: _Seg) -> list[Point]:
    vx, vy = seg.bx - seg.ax, seg.by - seg.ay
    wx, wy = seg.ax - cx, seg.ay - cy
    aa = vx * vx + vy * vy
    if aa <= 0.0:
        return []
    bb = 2.0 * (wx * vx + wy * vy)
    cc = wx * wx + wy * wy - r * r
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    pts = []
    for t in ((-bb - sq) / (2.0 * aa), (-bb + sq) / (2.0 * aa)):
        if -1e-12 <= t <= 1.0 + 1e-12:
            pts.append((seg.ax + t * vx, seg.ay + t * vy))
    return pts


def _piece_cut_params(piece: _Arc | _Seg, other: ConvexShape) -> list[float]:
    """Local parameters where ``piece`` crosses the boundary of ``other``."""
    pts: list[Point] = []
    for op in _boundary_pieces(other):
        if isinstance(piece, _Arc) and isinstance(op, _Arc):
            cand = _circle_circle_points(piece.cx, piece.cy, piece.r,
                                         op.cx, op.cy, op.r)
        elif isinstance(piece, _Arc):
            cand = _circle_seg_points(piece.cx, piece.cy, piece.r, op)
        elif isinstance(op, _Arc):
            cand = _circle_seg_points(op.cx, op.cy, op.r,
                                      _Seg(piece.ax, piece.ay, piece.bx, piece.by))
        else:
            cand = _seg_seg_points(piece, op)
        for pt in cand:
            if _on_piece(op, pt) and _on_piece(piece, pt):
                pts.append(pt)
    params = [_piece_param(piece, pt) for pt in pts]
    span = piece.sweep if isinstance(piece, _Arc) else 1.0
    tol = 1e-12 * max(1.0, span)
    return sorted(u for u in params if tol < u < span - tol)


def _seg_seg_points(s1: _Seg, s2: _Seg) -> list[Point]:
    r1x, r1y = s1.bx - s1.ax, s1.by - s1.ay
    r2x, r2y = s2.bx - s2.ax, s2.by - s2.ay
    den = r1x * r2y - r1y * r2x
    if abs(den) < 1e-15:
        return []
    qx, qy = s2.ax - s1.ax, s2.ay - s1.ay
    t = (qx * r2y - qy * r2x) / den
    u = (qx * r1y - qy * r1x) / den
    if -1e-12 <= t <= 1.0 + 1e-12 and -1e-12 <= u <= 1.0 + 1e-12:
        return [(s1.ax + t * r1x, s1.ay + t * r1y)]
    return []


def _piece_param(piece: _Arc | _Seg, pt: Point) -> float:
    if isinstance(piece, _Arc):
        ang = math.atan2(pt[1] - piece.cy, pt[0] - piece.cx)
        u = math.fmod(ang - piece.start, TWO_PI)
        if u < 0.0:
            u += TWO_PI
        return u
    vx, vy = piece.bx - piece.ax, piece.by - piece.ay
    vv = vx * vx + vy * vy
    return ((pt[0] - piece.ax) * vx + (pt[1] - piece.ay) * vy) / vv


def _on_piece(piece: _Arc | _Seg, pt: Point, tol: float = 1e-9) -> bool:
    if isinstance(piece, _Arc):
        u = _piece_param(piece, pt)
        return u <= piece.sweep + tol or u >= TWO_PI - tol
    u = _piece_param(piece, pt)
    return -tol <= u <= 1.0 + tol


def boundary_arc_in(s1: ConvexShape, s2: ConvexShape) -> float:
    """Length of the part of s1's boundary lying inside s2."""
    total = 0.0
    for piece in _boundary_pieces(s1):
        span = piece.sweep if isinstance(piece, _Arc) else 1.0
        cuts = [0.0] + _piece_cut_params(piece, s2) + [span]
        plen = piece.length()
        for u0, u1 in zip(cuts[:-1], cuts[1:]):
            if u1 <= u0:
                continue
            mid = piece.point(0.5 * (u0 + u1))
            if contains(s2, mid):
                total += plen * (u1 - u0) / span
    return total


# ---------------------------------------------------------------------------
# overlap area


def _intersect_interval_lists(a: list[Interval], b: list[Interval]) -> float:
    total = 0.0
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            total += hi - lo
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return total


def _critical_xs(shape: ConvexShape) -> list[float]:
    """x-coordinates where the shape's vertical slice is not smooth."""
    out: list[float] = []
    for piece in _boundary_pieces(shape):
        if isinstance(piece, _Arc):
            out.extend((piece.cx - piece.r, piece.cx, piece.cx + piece.r))
        else:
            out.extend((piece.ax, piece.bx))
    return out


def _boundary_crossing_xs(s1: ConvexShape, s2: ConvexShape) -> list[float]:
    """x-coordinates of intersection points of the two shape boundaries."""
    out: list[float] = []
    for piece in _boundary_pieces(s1):
        for u in _piece_cut_params(piece, s2):
            out.append(piece.point(u)[0])
    return out


def overlap_area(s1: ConvexShape, s2: ConvexShape) -> float:
    """Area of s1 ∩ s2: analytic for disk pairs, adaptive quadrature on the
    vertical-slice measure otherwise (the slice is exact per x; only the 1-D
    integration is numeric, carried out separately on each smooth segment)."""
    if s1.kind == DISK and s2.kind == DISK:
        return _lens_area(s1.r, s2.r, math.dist(s1.center, s2.center))
    if not shapes_intersect(s1, s2):
        return 0.0
    b1 = bounding_box(s1)
    b2 = bounding_box(s2)
    x0, x1 = max(b1[0], b2[0]), min(b1[2], b2[2])
    if x1 <= x0:
        return 0.0

    def slice_len(x: float) -> float:
        line = Line(0.0, x)
        return _intersect_interval_lists(line_intervals(s1, line),
                                         line_intervals(s2, line))

    from scipy.integrate import quad

    tol = max(1e-6 * min(area(s1), area(s2)), 1e-4)
    breaks = set(_critical_xs(s1)) | set(_critical_xs(s2))
    breaks |= set(_boundary_crossing_xs(s1, s2))
    edges = sorted({x0, x1} | {x for x in breaks if x0 < x < x1})
    total = 0.0
    seg_tol = tol / max(1, len(edges) - 1)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi - lo <= 0.0:
                continue
            val, _ = quad(slice_len, lo, hi, limit=100,
                          epsabs=seg_tol, epsrel=1e-10)
            total += val
    return max(0.0, total)


# ---------------------------------------------------------------------------
# shape-shape intersection predicate


def _capsules(shape: ConvexShape) -> list[tuple[Point, Point, float]]:
    """Decompose into segment-plus-radius primitives (not for polygons)."""
    if shape.kind == DISK:
        return [(shape.center, shape.center, shape.r)]
    if shape.kind == STADIUM:
        p, q = shape.lobe_centers()
        return [(p, q, shape.r)]
    if shape.kind == PAIR_DISK:
        p, q = shape.lobe_centers()
        return [(p, p, shape.r), (q, q, shape.r)]
    raise ValueError("no capsule decomposition for polygons")


def _seg_seg_dist(a0: Point, a1: Point, b0: Point, b1: Point) -> float:
    s1 = _Seg(a0[0], a0[1], a1[0], a1[1])
    s2 = _Seg(b0[0], b0[1], b1[0], b1[1])
    if _seg_seg_points(s1, s2):
        return 0.0
    d2 = min(
        _point_seg_dist2(a0[0], a0[1], b0[0], b0[1], b1[0], b1[1]),
        _point_seg_dist2(a1[0], a1[1], b0[0], b0[1], b1[0], b1[1]),
        _point_seg_dist2(b0[0], b0[1], a0[0], a0[1], a1[0], a1[1]),
        _point_seg_dist2(b1[0], b1[1], a0[0], a0[1], a1[0], a1[1]),
    )
    return math.sqrt(d2)


def shapes_intersect(s1: ConvexShape, s2: ConvexShape) -> bool:
    """True iff the two shapes share at least one point (boundaries included)."""
    if s1.kind != POLYGON and s2.kind != POLYGON:
        for p0, p1, r1 in _capsules(s1):
            for q0, q1, r2 in _capsules(s2):
                if _seg_seg_dist(p0, p1, q0, q1) <= r1 + r2:
                    return True
        return False
    if s1.kind == POLYGON and s2.kind == POLYGON:
        e1 = _boundary_pieces(s1)
        e2 = _boundary_pieces(s2)
        for a in e1:
            for b in e2:
                if _seg_seg_points(a, b):  # type: ignore[arg-type]
                    return True
        return (contains(s1, s2.vertices[0]) or contains(s2, s1.vertices[0]))
    poly, other = (s1, s2) if s1.kind == POLYGON else (s2, s1)
    verts = poly.vertices
    for p0, p1, r in _capsules(other):
        if contains(poly, p0) or contains(poly, p1):
            return True
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            if _seg_seg_dist(p0, p1, a, b) <= r:
                return True
    return False
