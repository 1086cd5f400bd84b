"""Independent brute-force reference implementations used by the test suite.

Deliberately written with naive bookkeeping (dicts, per-node loops, no
vectorization) so they exercise the same contracts through a different
computational path.
"""


def brute_force_cascade(n, edge_list, theta):
    """Threshold cascade reference: returns the list of per-step states.

    State t=0 is the seed set (thresholds equal to zero); each later state
    applies the synchronous >= rule with absorbing adoption, until nothing
    changes.
    """
    neighbors = {i: set() for i in range(n)}
    for i, j in edge_list:
        neighbors[i].add(j)
        neighbors[j].add(i)
    state = {i: 1 if theta[i] == 0.0 else 0 for i in range(n)}
    history = [dict(state)]
    while True:
        new = {}
        for i in range(n):
            if state[i] == 1:
                new[i] = 1
                continue
            degree = len(neighbors[i])
            if degree == 0:
                new[i] = 1 if theta[i] == 0.0 else 0
                continue
            exposed = sum(state[j] for j in neighbors[i])
            new[i] = 1 if exposed / degree >= theta[i] else 0
        if new == state:
            break
        history.append(dict(new))
        state = new
    return [[h[i] for i in range(n)] for h in history]


def exhaustive_best_seed_spread(n, edge_list, theta_base, k):
    """Best achievable cascade spread over all k-subsets of seed locations."""
    from itertools import combinations

    best = 0.0
    for subset in combinations(range(n), k):
        theta = list(theta_base)
        for v in subset:
            theta[v] = 0.0
        states = brute_force_cascade(n, edge_list, theta)
        spread = sum(states[-1]) / n
        best = max(best, spread)
    return best
