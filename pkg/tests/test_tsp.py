import itertools
import math
import random

import pytest

from groundair.tsp import CapacityError, solve_auto, solve_exact, solve_heuristic, tour_length, two_opt

SQUARE = [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def brute_best(start, sites):
    return min(tour_length(start, sites, p) for p in itertools.permutations(range(len(sites))))


def random_sites(rng, n):
    return [(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(n)]


def test_tour_length_examples():
    assert tour_length((0, 0), [(1, 0)], [0]) == 2.0
    assert tour_length((0, 0), SQUARE, [0, 1, 2]) == 4.0
    assert tour_length((0, 0), SQUARE, [2, 1, 0]) == 4.0


def test_triangle_all_orders_same_length():
    # depot plus two sites: three points, every cyclic order is the same triangle
    sites = [(3, 2), (0, 4)]
    lengths = {round(tour_length((0, 0), sites, p), 12) for p in itertools.permutations(range(2))}
    assert len(lengths) == 1
    t = solve_exact((0, 0), sites)
    assert t.length == pytest.approx(lengths.pop())
    assert t.order == (0, 1)


def test_unit_square_perimeter():
    t = solve_exact((0, 0), SQUARE)
    assert t.length == pytest.approx(4.0)
    assert t.order == (0, 1, 2)
    assert solve_heuristic((0, 0), SQUARE).length == pytest.approx(4.0)


def test_collinear_sweep():
    sites = [(3, 0), (1, 0), (5, 0), (2, 0)]
    t = solve_exact((0, 0), sites)
    assert t.length == pytest.approx(10.0)
    assert t.length == pytest.approx(brute_best((0, 0), sites))


@pytest.mark.parametrize("n", range(1, 9))
def test_exact_matches_brute_force(n):
    rng = random.Random(n)
    for _ in range(5):
        sites = random_sites(rng, n)
        t = solve_exact((0, 0), sites)
        assert sorted(t.order) == list(range(n))
        assert t.length == pytest.approx(tour_length((0, 0), sites, t.order), abs=1e-9)
        assert t.length <= brute_best((0, 0), sites) + 1e-9


def test_exact_capacity_guard():
    with pytest.raises(CapacityError, match="solve_heuristic"):
        solve_exact((0, 0), random_sites(random.Random(0), 16))


def test_heuristic_close_to_exact():
    rng = random.Random(42)
    good = 0
    trials = 1000
    for _ in range(trials):
        sites = random_sites(rng, rng.randint(2, 8))
        if solve_heuristic((0, 0), sites, seed=1).length <= 1.05 * solve_exact((0, 0), sites).length + 1e-12:
            good += 1
    assert good >= 0.95 * trials


def test_heuristic_single_site_and_determinism():
    assert solve_heuristic((0, 0), [(3, 4)]).order == (0,)
    sites = random_sites(random.Random(3), 40)
    assert solve_heuristic((0, 0), sites, seed=7) == solve_heuristic((0, 0), sites, seed=7)


@pytest.mark.parametrize("seed", range(5))
def test_two_opt_local_optimum(seed):
    rng = random.Random(seed)
    sites = random_sites(rng, 25)
    order = list(range(25))
    rng.shuffle(order)
    order = two_opt((0, 0), sites, order)
    base = tour_length((0, 0), sites, order)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            cand = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
            assert tour_length((0, 0), sites, cand) >= base - 1e-9


def test_length_invariant_under_reversal_and_rotation():
    rng = random.Random(9)
    sites = random_sites(rng, 7)
    order = list(range(7))
    rng.shuffle(order)
    base = tour_length((0, 0), sites, order)
    assert tour_length((0, 0), sites, order[::-1]) == pytest.approx(base)
    # rotating the cycle (depot included) keeps the length
    cyc = [(0, 0)] + [sites[i] for i in order]
    for k in range(len(cyc)):
        rot = cyc[k:] + cyc[:k]
        total = sum(math.dist(rot[i], rot[(i + 1) % len(rot)]) for i in range(len(rot)))
        assert total == pytest.approx(base)


def test_auto_switches_at_cutoff():
    rng = random.Random(0)
    small = random_sites(rng, 15)
    assert solve_auto((0, 0), small) == solve_exact((0, 0), small)
    big = random_sites(rng, 20)
    assert solve_auto((0, 0), big) == solve_heuristic((0, 0), big)
