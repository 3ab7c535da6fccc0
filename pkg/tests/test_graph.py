import random

import pytest

import oracles
from conftest import real_matrix, run_named
from matfor.semiring import NAT, REAL


def complete_graph(n):
    return [[0 if i == j else 1 for j in range(n)] for i in range(n)]


def test_four_clique_counts_ordered_tuples_on_k5(lib):
    out = run_named(lib, "four_clique", 5,
                    V=real_matrix(complete_graph(5)))
    assert out.get(0, 0) == 120.0  # 5 * 4 * 3 * 2 ordered tuples


def test_four_clique_on_the_four_cycle(lib):
    c4 = [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]
    assert run_named(lib, "four_clique", 4, V=real_matrix(c4)).get(0, 0) == 0.0


def test_four_clique_order_variant_over_naturals(lib):
    from matfor.matrix import from_rows
    k5 = from_rows(complete_graph(5))
    assert run_named(lib, "four_clique_order", 5, NAT, V=k5).get(0, 0) == 120
    assert run_named(lib, "four_clique_order", 5, REAL,
                     V=real_matrix(complete_graph(5))).get(0, 0) == 120.0


def test_four_clique_matches_enumeration_on_random_graphs(lib):
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randrange(4, 7)
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                adj[i][j] = adj[j][i] = rng.randrange(2)
        want = float(oracles.ordered_four_cliques(adj))
        got = run_named(lib, "four_clique", n, V=real_matrix(adj)).get(0, 0)
        assert got == want


def test_transitive_closure_on_a_path(lib):
    path = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    out = run_named(lib, "transitive_closure", 3, V=real_matrix(path))
    assert out.tolists() == [[1.0, 1.0, 1.0], [0.0, 1.0, 1.0],
                             [0.0, 0.0, 1.0]]


@pytest.mark.parametrize("trial", range(20))
def test_transitive_closure_matches_warshall(lib, trial):
    rng = random.Random(1000 + trial)
    n = rng.randrange(1, 8)
    adj = [[rng.randrange(2) if i != j else rng.randrange(2)
            for j in range(n)] for i in range(n)]
    out = run_named(lib, "transitive_closure", n, V=real_matrix(adj))
    want = oracles.warshall_closure(adj)
    assert out.tolists() == [[float(v) for v in row] for row in want]


def _floyd_warshall(dist):
    n = len(dist)
    best = [[dist[i][j] if i != j else min(dist[i][j], 0.0)
             for j in range(n)] for i in range(n)]
    for i in range(n):
        best[i][i] = min(best[i][i], 0.0)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                best[i][j] = min(best[i][j], best[i][k] + best[k][j])
    return best


@pytest.mark.parametrize("trial", range(10))
def test_power_sum_over_min_plus_is_all_pairs_shortest_paths(lib, trial):
    # the same power-series expression that inverts triangular matrices over
    # the reals computes <=n-hop shortest paths over the min-plus semiring
    import math
    from matfor.matrix import from_rows
    from matfor.semiring import TROPICAL

    rng = random.Random(4200 + trial)
    n = rng.randrange(1, 6)
    dist = [[math.inf if (i == j or rng.random() < 0.4)
             else float(rng.randrange(1, 10)) for j in range(n)]
            for i in range(n)]
    out = run_named(lib, "power_sum", n, TROPICAL, V=from_rows(dist))
    assert out.tolists() == _floyd_warshall(dist)
