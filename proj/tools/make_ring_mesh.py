#!/usr/bin/env python3
# Copyright The dgtd Authors
# SPDX-License-Identifier: Apache-2.0

"""Writes a gmsh 2.2 ASCII mesh of two straight slab guides coupled to a ring.

Structured right triangles over the outer box; an element belongs to the
region "guide" when its centroid lies in a slab or in the ring, otherwise to
"air". Outer boundary lines carry the tag "pec".
"""

import argparse
import math


def in_dielectric(x, y, a):
    r = math.hypot(x, y)
    if a.r_inner <= r <= a.r_outer:
        return True
    y0 = a.r_outer + a.gap
    return y0 <= abs(y) <= y0 + a.slab


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("output")
    p.add_argument("--half-width", type=float, default=2.4, help="outer box half width in x")
    p.add_argument("--half-height", type=float, default=1.92, help="outer box half height in y")
    p.add_argument("--h", type=float, default=0.08, help="cell size")
    p.add_argument("--r-inner", type=float, default=0.6)
    p.add_argument("--r-outer", type=float, default=0.8)
    p.add_argument("--gap", type=float, default=0.1)
    p.add_argument("--slab", type=float, default=0.2)
    a = p.parse_args()

    nx = round(2 * a.half_width / a.h)
    ny = round(2 * a.half_height / a.h)
    x0, y0 = -a.half_width, -a.half_height
    hx, hy = 2 * a.half_width / nx, 2 * a.half_height / ny

    def node(i, j):
        return j * (nx + 1) + i + 1

    lines = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat"]
    lines += ["$PhysicalNames", "3", '1 3 "pec"', '2 1 "air"', '2 2 "guide"', "$EndPhysicalNames"]
    lines += ["$Nodes", str((nx + 1) * (ny + 1))]
    for j in range(ny + 1):
        for i in range(nx + 1):
            lines.append(f"{node(i, j)} {x0 + i * hx:.12g} {y0 + j * hy:.12g} 0")
    lines.append("$EndNodes")

    elements = []
    for i in range(nx):
        elements.append((1, 3, (node(i, 0), node(i + 1, 0))))
        elements.append((1, 3, (node(i + 1, ny), node(i, ny))))
    for j in range(ny):
        elements.append((1, 3, (node(nx, j), node(nx, j + 1))))
        elements.append((1, 3, (node(0, j + 1), node(0, j))))
    for j in range(ny):
        for i in range(nx):
            a00, a10, a01, a11 = node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1)
            for tri, (cx, cy) in (
                ((a00, a10, a11), (i + 2 / 3, j + 1 / 3)),
                ((a00, a11, a01), (i + 1 / 3, j + 2 / 3)),
            ):
                region = 2 if in_dielectric(x0 + cx * hx, y0 + cy * hy, a) else 1
                elements.append((2, region, tri))

    lines += ["$Elements", str(len(elements))]
    for k, (kind, tag, nodes) in enumerate(elements, start=1):
        lines.append(f"{k} {kind} 2 {tag} {tag} " + " ".join(map(str, nodes)))
    lines.append("$EndElements")
    with open(a.output, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
