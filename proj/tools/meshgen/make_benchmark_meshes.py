#!/usr/bin/env python3
"""Offline generator for the bundled benchmark meshes (MSH 2.2 ASCII).

 - backstep.msh: structured crossed-diagonal grid on the L-shaped channel
   (0,8)x(0,1) minus the step (0,1)x(0,0.5).
   Tags: 1 inlet (x=0, 0.5<y<1), 2 walls, 3 outlet (x=8).

 - cylinder.msh: graded unstructured mesh of (0,6)x(0,1) minus the disk of
   radius 0.15 centered at (1,0.5), built with a distmesh-style force
   equilibration on a scipy Delaunay triangulation, finer near the cylinder.
   Tags: 1 inlet (x=0), 2 walls (y=0,1), 3 outlet (x=6), 4 cylinder surface.

Both files are checked in under data/meshes/; the solver only imports them.
"""
import numpy as np
from scipy.spatial import Delaunay, cKDTree

EPS = 1e-9


def write_msh(path, pts, tris, boundary_lines):
    with open(path, "w") as f:
        f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        f.write(f"$Nodes\n{len(pts)}\n")
        for i, (x, y) in enumerate(pts):
            f.write(f"{i+1} {x:.16g} {y:.16g} 0\n")
        f.write("$EndNodes\n")
        f.write(f"$Elements\n{len(boundary_lines) + len(tris)}\n")
        eid = 1
        for (a, b), tag in boundary_lines:
            f.write(f"{eid} 1 2 {tag} {tag} {a+1} {b+1}\n")
            eid += 1
        for a, b, c in tris:
            f.write(f"{eid} 2 2 0 0 {a+1} {b+1} {c+1}\n")
            eid += 1
        f.write("$EndElements\n")
    print(f"{path}: {len(pts)} nodes, {len(tris)} triangles, {len(boundary_lines)} boundary lines")


def boundary_edges_of(tris):
    from collections import Counter
    count = Counter()
    for a, b, c in tris:
        for e in ((a, b), (b, c), (c, a)):
            count[tuple(sorted(e))] += 1
    return [e for e, n in count.items() if n == 1]


def orient_ccw(pts, tris):
    out = []
    for a, b, c in tris:
        area = (pts[b, 0] - pts[a, 0]) * (pts[c, 1] - pts[a, 1]) - \
               (pts[c, 0] - pts[a, 0]) * (pts[b, 1] - pts[a, 1])
        out.append((a, b, c) if area > 0 else (a, c, b))
    return np.array(out, dtype=int)


# ---------------------------------------------------------------- backstep

def make_backstep(h=1.0 / 28.0):
    nx, ny = round(8 / h), round(1 / h)
    idx = -np.ones((nx + 1, ny + 1), dtype=int)
    pts = []
    for i in range(nx + 1):
        for j in range(ny + 1):
            x, y = 8.0 * i / nx, 1.0 * j / ny
            if x < 1.0 - EPS and y < 0.5 - EPS:
                continue  # inside the step
            idx[i, j] = len(pts)
            pts.append((x, y))
    pts = np.array(pts)

    tris = []
    for i in range(nx):
        for j in range(ny):
            a, b, c, d = idx[i, j], idx[i + 1, j], idx[i + 1, j + 1], idx[i, j + 1]
            if min(a, b, c, d) < 0:
                continue
            if (i + j) % 2 == 0:
                tris += [(a, b, c), (a, c, d)]
            else:
                tris += [(a, b, d), (b, c, d)]
    tris = orient_ccw(pts, np.array(tris, dtype=int))

    lines = []
    for a, b in boundary_edges_of(tris):
        xm, ym = pts[[a, b]].mean(axis=0)
        if xm < EPS:
            tag = 1
        elif xm > 8.0 - EPS:
            tag = 3
        else:
            tag = 2
        lines.append(((a, b), tag))
    return pts, tris, lines


# ---------------------------------------------------------------- cylinder

CX, CY, R = 1.0, 0.5, 0.15


def sdf(p):
    """Signed distance to the channel-minus-disk domain (negative inside)."""
    box = np.maximum.reduce([-p[:, 0], p[:, 0] - 6.0, -p[:, 1], p[:, 1] - 1.0])
    circ = R - np.hypot(p[:, 0] - CX, p[:, 1] - CY)
    return np.maximum(box, circ)


def size_fn(p):
    d = np.hypot(p[:, 0] - CX, p[:, 1] - CY) - R
    return np.minimum(0.014 + 0.12 * np.maximum(d, 0.0), 0.033)


def project_back(p, inside_only=True):
    """Project points with positive sdf back to the boundary (numeric grad)."""
    d = sdf(p)
    mask = d > 0 if inside_only else np.ones(len(p), bool)
    if not mask.any():
        return p
    h = 1e-7
    px = p.copy()
    px[:, 0] += h
    py = p.copy()
    py[:, 1] += h
    gx = (sdf(px) - d) / h
    gy = (sdf(py) - d) / h
    norm = np.maximum(np.hypot(gx, gy), 1e-12)
    p = p.copy()
    p[mask, 0] -= d[mask] * gx[mask] / norm[mask]
    p[mask, 1] -= d[mask] * gy[mask] / norm[mask]
    return p


def fixed_points():
    corners = [(0, 0), (6, 0), (6, 1), (0, 1)]
    n_circ = 64
    th = 2 * np.pi * np.arange(n_circ) / n_circ
    circ = np.stack([CX + R * np.cos(th), CY + R * np.sin(th)], axis=1)
    return np.vstack([np.array(corners, float), circ])


def initial_points():
    h0 = 0.014
    xs = np.arange(0, 6 + h0, h0 * 1.0)
    ys = np.arange(0, 1 + h0, h0 * np.sqrt(3) / 2)
    X, Y = np.meshgrid(xs, ys)
    X[1::2] += h0 / 2  # hex lattice
    p = np.stack([X.ravel(), Y.ravel()], axis=1)
    p = p[sdf(p) < -1e-6]
    # Keep points with probability ~ (h0/h)^2 via a deterministic threshold.
    rng = np.random.RandomState(20240611)
    keep = rng.rand(len(p)) < (0.014 / size_fn(p)) ** 2
    return p[keep]


def retriangulate(p):
    tri = Delaunay(p).simplices
    cent = p[tri].mean(axis=1)
    return tri[sdf(cent) < -1e-10]


def make_cylinder():
    fix = fixed_points()
    p = np.vstack([fix, initial_points()])
    # Drop duplicates near fixed points.
    tree = cKDTree(fix)
    d, _ = tree.query(p[len(fix):])
    p = np.vstack([fix, p[len(fix):][d > 0.010]])
    nfix = len(fix)

    Fscale, dt = 1.2, 0.2
    for it in range(220):
        tri = retriangulate(p)
        edges = np.unique(np.sort(np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]],
                                                  tri[:, [2, 0]]]), axis=1), axis=0)
        vec = p[edges[:, 0]] - p[edges[:, 1]]
        L = np.hypot(vec[:, 0], vec[:, 1])
        mid = 0.5 * (p[edges[:, 0]] + p[edges[:, 1]])
        hwanted = size_fn(mid)
        L0 = hwanted * Fscale * np.sqrt((L ** 2).sum() / (hwanted ** 2).sum())
        force = np.maximum(L0 - L, 0.0)
        fvec = vec * (force / np.maximum(L, 1e-12))[:, None]

        move = np.zeros_like(p)
        np.add.at(move, edges[:, 0], fvec)
        np.add.at(move, edges[:, 1], -fvec)
        move[:nfix] = 0.0
        p = p + dt * move
        p[nfix:] = project_back(p[nfix:])

    # Merge near-duplicate free points (they produce boundary slivers), then
    # relax the survivors for a few more rounds.
    tree = cKDTree(p)
    pairs = tree.query_pairs(0.45 * 0.014)
    drop = set()
    for a, b in sorted(pairs):
        hi = max(a, b)
        if hi >= nfix:
            drop.add(hi)
        elif min(a, b) >= nfix:
            drop.add(min(a, b))
    keep = np.array([i for i in range(len(p)) if i not in drop], dtype=int)
    p = p[keep]
    for it in range(40):
        tri = retriangulate(p)
        edges = np.unique(np.sort(np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]],
                                                  tri[:, [2, 0]]]), axis=1), axis=0)
        vec = p[edges[:, 0]] - p[edges[:, 1]]
        L = np.hypot(vec[:, 0], vec[:, 1])
        mid = 0.5 * (p[edges[:, 0]] + p[edges[:, 1]])
        hwanted = size_fn(mid)
        L0 = hwanted * Fscale * np.sqrt((L ** 2).sum() / (hwanted ** 2).sum())
        force = np.maximum(L0 - L, 0.0)
        fvec = vec * (force / np.maximum(L, 1e-12))[:, None]
        move = np.zeros_like(p)
        np.add.at(move, edges[:, 0], fvec)
        np.add.at(move, edges[:, 1], -fvec)
        move[:nfix] = 0.0
        p = p + dt * move
        p[nfix:] = project_back(p[nfix:])

    p = project_back(p, inside_only=True)
    tri = retriangulate(p)

    # Compact away points no surviving triangle references.
    used = np.unique(tri)
    remap = -np.ones(len(p), dtype=int)
    remap[used] = np.arange(len(used))
    p = p[used]
    tri = remap[tri]
    tri = orient_ccw(p, tri)

    # Snap near-boundary points exactly onto straight walls for clean tags.
    on = lambda v, t: np.abs(v - t) < 1e-6
    p[on(p[:, 0], 0.0), 0] = 0.0
    p[on(p[:, 0], 6.0), 0] = 6.0
    p[on(p[:, 1], 0.0), 1] = 0.0
    p[on(p[:, 1], 1.0), 1] = 1.0

    lines = []
    for a, b in boundary_edges_of(tri):
        xm, ym = p[[a, b]].mean(axis=0)
        if xm < EPS:
            tag = 1
        elif xm > 6.0 - EPS:
            tag = 3
        elif ym < EPS or ym > 1.0 - EPS:
            tag = 2
        else:
            tag = 4  # cylinder surface
        lines.append(((a, b), tag))
    return p, tri, lines


def quality(pts, tris):
    a, b, c = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    area = 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) -
                  (c[:, 0] - a[:, 0]) * (b[:, 1] - a[:, 1]))
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(c - a, axis=1)
    lc = np.linalg.norm(a - b, axis=1)
    q = 4 * np.sqrt(3) * area / (la ** 2 + lb ** 2 + lc ** 2)
    return area.min(), q.min(), np.median(q)


if __name__ == "__main__":
    import os
    out = os.path.join(os.path.dirname(__file__), "..", "..", "data", "meshes")
    os.makedirs(out, exist_ok=True)

    pts, tris, lines = make_backstep()
    print("backstep quality (min area, min q, med q):", quality(pts, tris))
    write_msh(os.path.join(out, "backstep.msh"), pts, tris, lines)

    pts, tris, lines = make_cylinder()
    print("cylinder quality (min area, min q, med q):", quality(pts, tris))
    write_msh(os.path.join(out, "cylinder.msh"), pts, tris, lines)
