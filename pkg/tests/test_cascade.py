import numpy as np
import pytest

from normsim import (
    DataError,
    InputError,
    build_from_edges,
    classify_sigma_categories,
    cross_tabulate,
    exposure_at_adoption,
    final_adoption,
    generate,
    greedy_seed_selection,
    ltm_step,
    run_cascade,
)
from normsim.cascade import adoption_times

from .oracles import brute_force_cascade, exhaustive_best_seed_spread

FIG4_EDGES = [(0, 1), (0, 3), (0, 4), (1, 4), (2, 5), (3, 4), (4, 5)]


@pytest.fixture
def fig4():
    return build_from_edges(6, FIG4_EDGES)


def test_zero_threshold_always_adopts(fig4):
    theta = np.full(6, 0.9)
    theta[2] = 0.0
    x = np.zeros(6, dtype=np.int8)
    out = ltm_step(fig4, x, theta)
    assert out[2] == 1


def test_isolated_agent_never_exposed():
    g = build_from_edges(3, [(0, 1)])
    theta = np.array([0.5, 0.5, 0.5])
    x = np.array([1, 1, 0], dtype=np.int8)
    out = ltm_step(g, x, theta)
    assert out[2] == 0


def test_fig4_single_step(fig4):
    theta = np.array([0.0, 0.3, 0.3, 0.3, 0.3, 0.3])
    x = np.array([1, 0, 0, 0, 0, 0], dtype=np.int8)
    out = ltm_step(fig4, x, theta)
    # exposure: node1 1/2, node3 1/2 adopt; node4 1/4 stays; node5 0/2
    assert out.tolist() == [1, 1, 0, 1, 0, 0]


def test_strict_mode_flips_boundary(fig4):
    theta = np.array([0.0, 0.5, 0.5, 0.5, 0.5, 0.5])
    x = np.array([1, 0, 0, 0, 0, 0], dtype=np.int8)
    assert ltm_step(fig4, x, theta)[1] == 1  # 1/2 >= 0.5
    assert ltm_step(fig4, x, theta, strict=True)[1] == 0  # 1/2 > 0.5 fails


def test_dimension_mismatch(fig4):
    with pytest.raises(InputError):
        ltm_step(fig4, np.zeros(5, dtype=np.int8), np.full(6, 0.5))


def test_adoption_absorbing(fig4):
    theta = np.full(6, 1.0)
    x = np.array([1, 1, 0, 0, 0, 0], dtype=np.int8)
    out = ltm_step(fig4, x, theta)
    assert out[0] == 1 and out[1] == 1


def test_cascade_complete_graph():
    g = generate("complete", 5)
    theta = np.full(5, 0.2)
    theta[0] = 0.0
    traj = run_cascade(g, theta)
    assert traj.z[0] == pytest.approx(0.2)
    assert traj.final_z == 1.0
    assert len(traj.z) == 2  # seed state then full adoption
    assert traj.terminal == "fixed_point"


def test_cascade_no_seeds():
    g = generate("complete", 4)
    traj = run_cascade(g, np.full(4, 0.5))
    assert traj.final_z == 0.0
    assert len(traj.z) == 1
    assert traj.terminal == "fixed_point"


def test_cascade_path_stops_at_seed():
    g = build_from_edges(3, [(0, 1), (1, 2)])
    theta = np.array([0.0, 0.6, 0.5])
    traj = run_cascade(g, theta)
    assert traj.final_z == pytest.approx(1 / 3)
    states = brute_force_cascade(3, [(0, 1), (1, 2)], theta.tolist())
    assert traj.states.tolist() == states


def test_cascade_monotone_and_terminates(fig4):
    rng = np.random.default_rng(0)
    for _ in range(20):
        theta = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0], size=6)
        traj = run_cascade(fig4, theta)
        assert len(traj.z) <= 7
        diffs = np.diff(traj.states.astype(int), axis=0)
        assert np.all(diffs >= 0)


def test_cascade_matches_brute_force_sampled():
    rng = np.random.default_rng(42)
    for n in range(2, 8):
        for _ in range(60):
            p = rng.choice([0.3, 0.5, 0.8])
            g = generate("erdos_renyi", n, seed=int(rng.integers(1 << 31)), p=float(p))
            theta = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0], size=n)
            traj = run_cascade(g, theta)
            expected = brute_force_cascade(n, list(g.edges), theta.tolist())
            assert traj.states.tolist() == expected


def test_final_adoption_examples(fig4):
    g = generate("complete", 5)
    theta = np.full(5, 0.2)
    theta[0] = 0.0
    assert final_adoption(g, theta) == 1.0
    assert final_adoption(g, np.full(5, 0.5)) == 0.0


def test_greedy_star_center():
    g = build_from_edges(6, [(0, i) for i in range(1, 6)])
    seeds, spread = greedy_seed_selection(g, np.full(6, 0.9), 1)
    assert seeds == [0]
    assert spread == 1.0


def test_greedy_k0():
    g = generate("complete", 4)
    seeds, spread = greedy_seed_selection(g, np.full(4, 0.5), 0)
    assert seeds == []
    assert spread == final_adoption(g, np.full(4, 0.5))


def test_greedy_two_triangles():
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    g = build_from_edges(6, edges)
    seeds, spread = greedy_seed_selection(g, np.full(6, 0.4), 2)
    assert spread == 1.0
    assert {s < 3 for s in seeds} == {True, False}  # one per triangle
    assert spread == exhaustive_best_seed_spread(6, edges, [0.4] * 6, 2)


def test_greedy_spread_non_decreasing_in_k():
    g = generate("erdos_renyi", 8, seed=5, p=0.4)
    theta = np.full(8, 0.6)
    spreads = [greedy_seed_selection(g, theta, k)[1] for k in range(4)]
    assert all(b >= a for a, b in zip(spreads, spreads[1:]))


def test_greedy_tie_lowest_index():
    g = generate("complete", 4)
    seeds, _ = greedy_seed_selection(g, np.full(4, 0.9), 1)
    assert seeds == [0]


def test_exposure_fig4(fig4):
    theta = np.array([0.0, 0.3, 0.3, 0.3, 0.3, 0.3])
    traj = run_cascade(fig4, theta)
    exposure = exposure_at_adoption(traj, fig4)
    assert np.isnan(exposure[0])  # seed
    assert exposure[1] == pytest.approx(0.5)
    assert exposure[3] == pytest.approx(0.5)
    assert exposure[4] == pytest.approx(0.75)


def test_exposure_never_adopter_and_isolated():
    g = build_from_edges(3, [(0, 1)])
    theta = np.array([0.0, 0.5, 0.7])
    traj = run_cascade(g, theta)
    exposure = exposure_at_adoption(traj, g)
    assert exposure[1] == 1.0  # all neighbors adopted when it adopted
    assert np.isnan(exposure[2])  # isolated never adopts


def test_adoption_times(fig4):
    theta = np.array([0.0, 0.3, 0.3, 0.3, 0.3, 0.3])
    traj = run_cascade(fig4, theta)
    times = adoption_times(traj)
    assert times[0] == 0
    assert times[1] == 1 and times[3] == 1
    assert times[4] == 2


def test_classify_boundary_convention():
    # mu=5, sigma=5: 0 falls in [mu-sigma, mu) -> low; 10 in [mu+sigma, inf) -> very_high
    assert classify_sigma_categories([0, 0, 10, 10]) == [
        "low", "low", "very_high", "very_high",
    ]


def test_classify_zero_variance():
    with pytest.raises(DataError):
        classify_sigma_categories([2.0, 2.0, 2.0])


def test_classify_needs_two_values():
    with pytest.raises(InputError):
        classify_sigma_categories([1.0])


def test_classify_normal_proportions():
    rng = np.random.default_rng(11)
    values = rng.normal(size=100_000)
    cats = classify_sigma_categories(values)
    fracs = {c: cats.count(c) / len(cats) for c in set(cats)}
    assert fracs["very_low"] == pytest.approx(0.1587, abs=0.01)
    assert fracs["low"] == pytest.approx(0.3413, abs=0.01)
    assert fracs["high"] == pytest.approx(0.3413, abs=0.01)
    assert fracs["very_high"] == pytest.approx(0.1587, abs=0.01)


def test_cross_tabulate_identical():
    cats = ["low", "high", "very_low", "very_high", "low"]
    table, agreement = cross_tabulate(cats, cats)
    assert agreement == 1.0
    assert table.sum() == 5


def test_cross_tabulate_disjoint():
    a = ["very_low", "low"]
    b = ["high", "very_high"]
    _, agreement = cross_tabulate(a, b)
    assert agreement == 0.0


def test_cross_tabulate_independent_agreement():
    rng = np.random.default_rng(3)
    n = 100_000
    cats = ["very_low", "low", "high", "very_high"]
    p = [0.16, 0.34, 0.34, 0.16]
    a = rng.choice(cats, size=n, p=p).tolist()
    b = rng.choice(cats, size=n, p=p).tolist()
    _, agreement = cross_tabulate(a, b)
    assert agreement == pytest.approx(0.2824, abs=0.01)


def test_cross_tabulate_length_mismatch():
    with pytest.raises(InputError):
        cross_tabulate(["low"], ["low", "high"])
