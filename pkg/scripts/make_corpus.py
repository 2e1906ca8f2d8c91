"""Regenerate the bundled Matrix Market corpus in src/ordercraft/data."""

import itertools
import random

from ordercraft.family import FamilyParams, build_family
from ordercraft.graph import Graph, cycle, join, path, star, independent
from ordercraft.heuristics import DATA_DIR, write_matrix_market


def grid(rows, cols):
    idx = lambda r, c: r * cols + c
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return Graph(rows * cols, edges)


def grid3(k):
    idx = lambda x, y, z: (x * k + y) * k + z
    edges = []
    for x, y, z in itertools.product(range(k), repeat=3):
        for dx, dy, dz in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            a, b, c = x + dx, y + dy, z + dz
            if a < k and b < k and c < k:
                edges.append((idx(x, y, z), idx(a, b, c)))
    return Graph(k ** 3, edges)


def banded(n, width):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, min(n, i + width + 1))])


def arrow(n, head):
    edges = [(i, j) for i in range(head) for j in range(i + 1, n)]
    edges += [(i, i + 1) for i in range(head, n - 1)]
    return Graph(n, edges)


def random_tree(n, rng):
    return Graph(n, [(rng.randrange(v), v) for v in range(1, n)])


def ladder(k):
    edges = [(i, i + 1) for i in range(k - 1)] + [(k + i, k + i + 1) for i in range(k - 1)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def gnp(n, prob, rng):
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < prob])


def main():
    rng = random.Random(2024)
    corpus = {
        "grid_8x8": grid(8, 8),
        "grid_5x12": grid(5, 12),
        "grid3d_4": grid3(4),
        "path_30": path(30),
        "star_15": star(15),
        "wheel_15": join(cycle(14), independent(1)),
        "arrow_25": arrow(25, 3),
        "banded_40_3": banded(40, 3),
        "tree_40": random_tree(40, rng),
        "ladder_20": ladder(20),
        "family_4_4_4": build_family(FamilyParams(4, 4, 4)),
        "family_kloks_4": build_family(FamilyParams.scaled(4, "kloks")),
        "gnp_30_015": gnp(30, 0.15, rng),
        "gnp_60_008": gnp(60, 0.08, rng),
    }
    DATA_DIR.mkdir(exist_ok=True)
    for name, g in corpus.items():
        write_matrix_market(g, DATA_DIR / f"{name}.mtx", comment=f"ordercraft corpus: {name}")
        print(name, g.n, g.m)


if __name__ == "__main__":
    main()
