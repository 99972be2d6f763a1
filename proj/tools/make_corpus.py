#!/usr/bin/env python3
"""Writes the environment corpus under data/. Coordinates in meters."""
import json
import math
import os
import sys

from shapely.geometry import Polygon, box
from shapely.ops import unary_union
from shapely.geometry.polygon import orient

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data")


def dump(name, poly):
    poly = orient(poly.simplify(0), sign=1.0)
    assert poly.is_valid, name
    outer = [[round(x, 6), round(y, 6)] for x, y in list(poly.exterior.coords)[:-1]]
    holes = [[[round(x, 6), round(y, 6)] for x, y in list(r.coords)[:-1]] for r in poly.interiors]
    with open(os.path.join(OUT, name + ".json"), "w") as f:
        json.dump({"outer": outer, "holes": holes}, f, indent=1)
    print(name, len(outer), [len(h) for h in holes], round(poly.area, 3))


dump("square", box(0, 0, 1, 1))
dump("l_shape", Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]))

# Three vertical corridors joined by two crossbars, plus stubs off the outer bars.
w = 1.5
parts = [box(0, 0, w, 10), box(7, 0, 7 + w, 10), box(14, 0, 14 + w, 10),
         box(w, 4.25, 7, 5.75), box(7 + w, 4.25, 14, 5.75),
         box(w, 8.5, 4, 10), box(14 - 2.5, 0, 14, 1.5)]
dump("h_like", unary_union(parts))

# Hub with bent legs: each leg turns 90 degrees so its tip hides from the hub.
hub = Polygon([(3 * math.cos(k * math.pi / 3), 3 * math.sin(k * math.pi / 3)) for k in range(6)])
legs = []
for k in range(6):
    a = k * math.pi / 3 + math.pi / 6
    ux, uy = math.cos(a), math.sin(a)
    vx, vy = -uy, ux
    hw = 0.6
    def pt(s, t):
        return (s * ux + t * vx, s * uy + t * vy)
    legs.append(Polygon([pt(1.5, -hw), pt(6, -hw), pt(6, hw), pt(1.5, hw)]))
    legs.append(Polygon([pt(6 - 2 * hw, 0), pt(6, 0), pt(6, hw + 2.2), pt(6 - 2 * hw, hw + 2.2)]))
spider = unary_union([hub] + legs).buffer(0)
spider = Polygon(spider.exterior)
spider = spider.difference(Polygon([(0.9 * math.cos(k * math.pi / 2 + 0.3), 0.9 * math.sin(k * math.pi / 2 + 0.3)) for k in range(4)]))
dump("spider_like", spider)

# 2x3 rooms with doorways, an interior pillar and a wall jog.
room = 5.0
t = 0.3
door = 1.4
W, H = 3 * room, 2 * room
free = box(0, 0, W, H)
walls = []
for i in (1, 2):
    x = i * room
    for (y0, y1) in ((0, room), (room, H)):
        mid = 0.5 * (y0 + y1)
        walls.append(box(x - t / 2, y0, x + t / 2, mid - door / 2))
        walls.append(box(x - t / 2, mid + door / 2, x + t / 2, y1))
y = room
for j in range(3):
    x0, x1 = j * room, (j + 1) * room
    mid = 0.5 * (x0 + x1)
    walls.append(box(x0, y - t / 2, mid - door / 2, y + t / 2))
    walls.append(box(mid + door / 2, y - t / 2, x1, y + t / 2))
walls.append(box(2.0, 7.0, 3.0, 8.0))
walls.append(box(11.5, 2.0, 12.2, 3.2))
walls.append(box(6.5, 8.8, 8.5, H))
office = free.difference(unary_union(walls))
office = max(office.geoms, key=lambda g: g.area) if office.geom_type == "MultiPolygon" else office
dump("office_like", office)
