"""Shared fixtures: the canonical two-player game and seeded generators."""

import random
from fractions import Fraction as F

# one verdict line per acceptance criterion, filled by test_acceptance and
# replayed after the run (fd-level capture swallows prints made mid-test)
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance scorecard")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)

from poacert.games import (
    SUM,
    BasisFunction,
    CongestionModel,
    GeneralizedGame,
    SocialSpec,
    identity_matrix,
)

# the four profiles of g1, by strategy index: (0,0)=(a,a), (0,1)=(a,b), ...
AA, AB, BA, BB = (0, 0), (0, 1), (1, 0), (1, 1)


def g1(exact=True, alpha=None):
    """Two players of weight 1, resources a and b, one singleton strategy
    per resource, latency x on both.  Small enough to enumerate everything
    by hand (4 profiles), rich enough to exercise every code path."""
    one = F(1) if exact else 1.0
    model = CongestionModel(
        (one, one), ("a", "b"), ((("a",), ("b",)), (("a",), ("b",)))
    )
    return GeneralizedGame(
        model,
        (BasisFunction.monomial(1),),
        {"a": (one,), "b": (one,)},
        identity_matrix(2, exact) if alpha is None else alpha,
    )


def g1_spec(kind=SUM, exact=True):
    return SocialSpec(kind, identity_matrix(2, exact))


def random_model(rng, weights, n_resources=3, strategies_per_player=2):
    """Random congestion model over a fixed weight vector: each strategy is
    a nonempty resource subset drawn uniformly."""
    resources = tuple(f"r{k}" for k in range(n_resources))
    strategies = []
    for _ in weights:
        per, seen = [], set()
        while len(per) < strategies_per_player:
            s = frozenset(e for e in resources if rng.random() < 0.5)
            if s and s not in seen:
                seen.add(s)
                per.append(s)
        strategies.append(tuple(per))
    return CongestionModel(tuple(weights), resources, tuple(strategies))


def random_game(rng, weights, basis, alpha, exact=False, n_resources=3):
    """Random nonnegative coefficients over a random model; exact mode uses
    small dyadic fractions so Fraction blow-up stays bounded."""
    model = random_model(rng, weights, n_resources)
    r = len(basis)

    def coef():
        c = rng.randrange(0, 9)
        return F(c, 4) if exact else c / 4

    coeffs = {e: tuple(coef() for _ in range(r)) for e in model.resources}
    # a game with an all-zero latency row is legal; a game with no latency
    # at all makes every ratio 0/0, so force one positive entry
    e0 = model.resources[0]
    if all(c == 0 for vec in coeffs.values() for c in vec):
        vec = list(coeffs[e0])
        vec[0] = F(1, 2) if exact else 0.5
        coeffs[e0] = tuple(vec)
    return GeneralizedGame(model, basis, coeffs, alpha)


def random_matrix(rng, n, lo, hi, exact=False):
    def entry():
        c = rng.randrange(int(lo * 4), int(hi * 4) + 1)
        return F(c, 4) if exact else c / 4

    return tuple(tuple(entry() for _ in range(n)) for _ in range(n))


def seeded(seed):
    return random.Random(seed)
