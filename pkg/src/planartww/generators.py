"""Seeded generators of embedded planar graphs.

Randomness comes from ``random.Random(seed)`` (Mersenne Twister MT19937),
so a given ``(params, seed)`` yields the same graph on every platform.
"""

from __future__ import annotations

import random

from .embedding import RotationSystem, components


def gen_stacked_triangulation(n: int, seed: int = 0) -> RotationSystem:
    """Apollonian growth: repeatedly put a vertex into a uniformly random face."""
    if n < 3:
        raise ValueError("a stacked triangulation needs at least 3 vertices")
    rng = random.Random(seed)
    rot: dict[int, list[int]] = {0: [1, 2], 1: [2, 0], 2: [0, 1]}
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        # face (a, b, c): c follows a at b, a follows b at c, b follows c at a
        for x, after in ((b, a), (c, b), (a, c)):
            ns = rot[x]
            ns.insert(ns.index(after) + 1, v)
        rot[v] = [b, a, c]
        faces[i] = (a, b, v)
        faces.append((b, c, v))
        faces.append((c, a, v))
    return RotationSystem.from_lists(rot, (0, 1))


def gen_grid(w: int, h: int) -> RotationSystem:
    """``w x h`` grid; vertex ``(x, y)`` has id ``y * w + x``."""
    if w < 1 or h < 1:
        raise ValueError("grid sides must be positive")
    rot: dict[int, list[int]] = {}
    for y in range(h):
        for x in range(w):
            ns = []
            # counter-clockwise: right, up, left, down
            for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                xx, yy = x + dx, y + dy
                if 0 <= xx < w and 0 <= yy < h:
                    ns.append(yy * w + xx)
            rot[y * w + x] = ns
    outer = (0, 1) if w > 1 else ((0, w) if h > 1 else None)
    return RotationSystem.from_lists(rot, outer)


def gen_cycle(n: int) -> RotationSystem:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return RotationSystem.from_lists({v: [(v + 1) % n, (v - 1) % n] for v in range(n)}, (0, 1))


def gen_wheel(n: int) -> RotationSystem:
    """Hub 0 joined to the cycle ``1..n-1``; ``n`` counts the hub."""
    if n < 4:
        raise ValueError("a wheel needs at least 4 vertices")
    k = n - 1
    rot: dict[int, list[int]] = {0: list(range(1, n))}
    for i in range(k):
        v = i + 1
        nxt = (i + 1) % k + 1
        prv = (i - 1) % k + 1
        rot[v] = [nxt, 0, prv]
    return RotationSystem.from_lists(rot, (1, 2))


def gen_random_planar(n: int, p: float, seed: int = 0) -> RotationSystem:
    """A stacked triangulation with random edges deleted, keeping it connected.

    Edges are visited in a seeded random order and each is deleted with
    probability ``p`` unless that would disconnect the graph.  Deleting an
    edge from the rotation system merges its two faces.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    base = gen_stacked_triangulation(n, rng.randrange(2**63))
    rot = {v: list(ns) for v, ns in base.rotation.items()}
    edges = base.edges()
    rng.shuffle(edges)
    for u, v in edges:
        if rng.random() >= p:
            continue
        rot[u].remove(v)
        rot[v].remove(u)
        if len(components(rot)) > 1:
            rot[u].append(v)  # position is irrelevant: restored below
            rot[v].append(u)
            rot[u] = [x for x in base.rotation[u] if x in rot[u]]
            rot[v] = [x for x in base.rotation[v] if x in rot[v]]
    outer = next(((u, ns[0]) for u, ns in sorted(rot.items()) if ns), None)
    return RotationSystem.from_lists(rot, outer)
