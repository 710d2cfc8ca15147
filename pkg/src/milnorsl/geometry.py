"""Read a string-link diagram off piecewise-linear curves in 3-space.

Each component is a polyline of ``(x, y, z)`` vertices running upward from
height ``y = 0`` to a common top height, starting and ending at the same
``x``.  The diagram is the projection to the ``(x, y)`` plane seen from
``+z``: at a crossing the point with the larger ``z`` is over.  The sign is
``+1`` when the over strand, rotated counter-clockwise by less than a half
turn, lines up with the under strand (over SW->NE, under SE->NW).

Coordinates are exact (ints or Fractions); degenerate projections raise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point = tuple[Fraction, Fraction, Fraction]


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _segments(poly: Sequence[Point]):
    return [(poly[k], poly[k + 1]) for k in range(len(poly) - 1)]


def _bbox_disjoint(s, t) -> bool:
    (p, q), (r, u) = s, t
    return (max(p[0], q[0]) < min(r[0], u[0]) or max(r[0], u[0]) < min(p[0], q[0])
            or max(p[1], q[1]) < min(r[1], u[1]) or max(r[1], u[1]) < min(p[1], q[1]))


def gauss_code_from_polylines(polylines: Sequence[Sequence[Sequence]]):
    """Return ``(passes, signs)`` for the projected diagram.

    ``passes[i]`` lists ``(crossing_id, is_over)`` along component ``i`` in
    order of travel, ``signs[c]`` is the sign of crossing ``c``.
    """
    polys = [[tuple(Fraction(v) for v in pt) for pt in poly] for poly in polylines]
    if not polys:
        raise ValueError("need at least one component")
    top = polys[0][-1][1]
    for idx, poly in enumerate(polys):
        if len(poly) < 2:
            raise ValueError(f"component {idx + 1} needs at least two vertices")
        if poly[0][1] != 0 or poly[-1][1] != top or poly[0][0] != poly[-1][0]:
            raise ValueError(f"component {idx + 1} must run from (x, 0) to (x, top)")
    starts = [poly[0][0] for poly in polys]
    if starts != sorted(starts) or len(set(starts)) != len(starts):
        raise ValueError("components must start at distinct, increasing x positions")

    segs = [_segments(p) for p in polys]
    events: list[list[tuple[int, Fraction, int, bool]]] = [[] for _ in polys]
    signs: list[int] = []

    flat = [(ci, si, s) for ci, ss in enumerate(segs) for si, s in enumerate(ss)]
    for a in range(len(flat)):
        ca, sa, (p, q) = flat[a]
        d1x, d1y = q[0] - p[0], q[1] - p[1]
        for b in range(a + 1, len(flat)):
            cb, sb, (r, u) = flat[b]
            adjacent = ca == cb and abs(sa - sb) == 1
            if _bbox_disjoint((p, q), (r, u)):
                continue
            d2x, d2y = u[0] - r[0], u[1] - r[1]
            denom = _cross(d1x, d1y, d2x, d2y)
            wx, wy = r[0] - p[0], r[1] - p[1]
            if denom == 0:
                if _cross(wx, wy, d1x, d1y) == 0 and not adjacent:
                    # collinear: any overlap is degenerate
                    raise ValueError("collinear overlapping segments in projection")
                continue
            t = Fraction(_cross(wx, wy, d2x, d2y)) / denom
            s = Fraction(_cross(wx, wy, d1x, d1y)) / denom
            if not (0 <= t <= 1 and 0 <= s <= 1):
                continue
            if adjacent:
                if (t, s) in ((1, 0), (0, 1)):
                    continue
                raise ValueError("adjacent segments cross in projection")
            if t in (0, 1) or s in (0, 1):
                raise ValueError("projection crosses through a vertex")
            za = p[2] + t * (q[2] - p[2])
            zb = r[2] + s * (u[2] - r[2])
            if za == zb:
                raise ValueError("strands meet in 3-space")
            a_over = za > zb
            if a_over:
                sign = 1 if _cross(d1x, d1y, d2x, d2y) > 0 else -1
            else:
                sign = 1 if _cross(d2x, d2y, d1x, d1y) > 0 else -1
            cid = len(signs)
            signs.append(sign)
            events[ca].append((sa, t, cid, a_over))
            events[cb].append((sb, s, cid, not a_over))

    passes = []
    for ev in events:
        ev.sort(key=lambda e: (e[0], e[1]))
        passes.append([(cid, over) for _, _, cid, over in ev])
    return passes, signs
