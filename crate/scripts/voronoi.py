"""Writes Lloyd-relaxed Voronoi meshes of the unit square (zfem-mesh format).

Seeds are mirrored across the four sides so that the Voronoi cells of the
original seeds are already clipped to the square.
"""
import os

import numpy as np
from scipy.spatial import Voronoi

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures", "voronoi")


def mirrored(p):
    left = p.copy(); left[:, 0] = -left[:, 0]
    right = p.copy(); right[:, 0] = 2 - right[:, 0]
    down = p.copy(); down[:, 1] = -down[:, 1]
    up = p.copy(); up[:, 1] = 2 - up[:, 1]
    return np.vstack([p, left, right, down, up])


def cells_of(p):
    vor = Voronoi(mirrored(p))
    out = []
    for i in range(len(p)):
        region = vor.regions[vor.point_region[i]]
        assert -1 not in region
        out.append(vor.vertices[region])
    return out


def polygon_centroid(v):
    x, y = v[:, 0], v[:, 1]
    xs, ys = np.roll(x, -1), np.roll(y, -1)
    cross = x * ys - xs * y
    a = cross.sum() / 2
    return np.array([((x + xs) * cross).sum(), ((y + ys) * cross).sum()]) / (6 * a)


def generate(n, seed, iterations=60):
    rng = np.random.default_rng(seed)
    p = rng.random((n, 2))
    for _ in range(iterations):
        p = np.array([polygon_centroid(c) for c in cells_of(p)])
    return cells_of(p)


def write(name, cells):
    key_to_id, verts, out_cells = {}, [], []
    for c in cells:
        c = np.clip(c, 0.0, 1.0)
        # counterclockwise around the cell centroid
        m = c.mean(axis=0)
        order = np.argsort(np.arctan2(c[:, 1] - m[1], c[:, 0] - m[0]))
        ids = []
        for x, y in c[order]:
            x, y = float(f"{x:.12f}") + 0.0, float(f"{y:.12f}") + 0.0
            key = (round(x, 9), round(y, 9))
            if key not in key_to_id:
                key_to_id[key] = len(verts)
                verts.append((x, y))
            if not ids or ids[-1] != key_to_id[key]:
                ids.append(key_to_id[key])
        if ids[0] == ids[-1]:
            ids.pop()
        out_cells.append(ids)
    with open(os.path.join(OUT, name), "w") as f:
        f.write("zfem-mesh 1\n")
        f.write(f"{len(verts)} {len(out_cells)}\n")
        for x, y in verts:
            f.write(f"{x!r} {y!r}\n")
        for ids in out_cells:
            f.write(" ".join(map(str, [len(ids), *ids])) + "\n")


for n in (16, 64, 256, 1024):
    write(f"voronoi_{n:04d}.mesh", generate(n, seed=n))
