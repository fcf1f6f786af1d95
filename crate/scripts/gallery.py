"""Writes the single-polygon gallery fixtures (zfem-mesh format)."""
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures", "gallery")


def r(v):
    return float(f"{v:.12f}") + 0.0


def write(name, pts):
    pts = [(r(x), r(y)) for x, y in pts]
    with open(os.path.join(OUT, f"{name}.mesh"), "w") as f:
        f.write("zfem-mesh 1\n")
        f.write(f"{len(pts)} 1\n")
        for x, y in pts:
            f.write(f"{x!r} {y!r}\n")
        f.write(" ".join(str(i) for i in [len(pts), *range(len(pts))]) + "\n")


write("triangle", [(0, 0), (1, 0), (0, 1)])
write("regular", [(math.cos(2 * math.pi * j / 9), math.sin(2 * math.pi * j / 9)) for j in range(9)])
write("irregular", [(0, 0), (1.2, 0.1), (0.9, 1.0), (0.15, 0.75)])
write("concave", [(0, 0), (1, 0.2), (2, 0), (1.8, 1), (2.1, 2), (1, 1.6), (0.1, 2.1), (0.4, 1)])
write("star", [
    ((1.0 if j % 2 == 0 else 0.6) * math.cos(math.pi * j / 20),
     (1.0 if j % 2 == 0 else 0.6) * math.sin(math.pi * j / 20))
    for j in range(40)
])

corners = [(0, 0), (2, -0.2), (3, 0.8), (2.6, 2), (1, 2.3), (-0.4, 1.1)]
splits = [4, 4, 4, 3, 3, 3]
pts = []
for j, (a, s) in enumerate(zip(corners, splits)):
    b = corners[(j + 1) % 6]
    for i in range(s):
        t = i / s
        pts.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
write("hanging", pts)
