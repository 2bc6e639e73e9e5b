"""Smoothness certificates and the robust price of anarchy.

A game is (lam, mu)-smooth when sum_i c_i(sigma_{-i}, sigma'_i) is at most
lam*SF(sigma') + mu*SF(sigma) for every ordered profile pair; any such
certificate with mu < 1 bounds every equilibrium notion's inefficiency by
lam/(1-mu).  The infimum of that ratio over the certificate polyhedron is
computed by bisection on the bound rho, each step an LP feasibility probe
of {lam <= rho*(1-mu)} against the pair constraints.  mu may be negative;
the probe carries an explicit slack variable keeping mu strictly below 1,
since the closure point (lam, mu) = (0, 1) satisfies the pair rows of some
degenerate games while certifying nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import linprog as lp
from .games import (
    FEAS_TOL,
    GameError,
    GeneralizedGame,
    SocialSpec,
    individual_cost,
    social_value,
)
from .oracle import NO_EQUILIBRIUM, PROFILE_CAP, exact_ppoa, social_optimum, worst_cce_value

NOT_SMOOTHABLE = "NOT_SMOOTHABLE"
OPTIMAL = "OPTIMAL"

BISECT_TOL = 1e-6
_STRICT = 1e-12  # mu < 1 enforced up to this margin in the probe
_BRACKET_DOUBLINGS = 40


@dataclass(frozen=True)
class SmoothnessCertificate:
    lam: object
    mu: object

    def __post_init__(self):
        if not self.lam > 0:
            raise GameError("smoothness certificate needs lam > 0")
        if not self.mu < 1:
            raise GameError("smoothness certificate needs mu < 1")

    @property
    def bound(self):
        return self.lam / (1 - self.mu)


def is_sum_bounded(
    game: GeneralizedGame, spec: SocialSpec, tol=FEAS_TOL, cap: int = PROFILE_CAP
):
    """(True, None), or (False, first profile whose social value exceeds the
    sum of individual costs)."""
    if game.model.profile_count() > cap:
        raise GameError("profile cap exceeded")
    n = game.model.n
    for prof in game.model.profiles():
        total = sum(individual_cost(game, prof, i) for i in range(n))
        if social_value(spec, game, prof) > total + tol:
            return False, prof
    return True, None


def _pair_tables(game, spec, cap):
    profiles = list(game.model.profiles())
    if len(profiles) ** 2 > cap:
        raise GameError("profile pair cap exceeded")
    sf = [social_value(spec, game, prof) for prof in profiles]
    n = game.model.n
    dev = [
        [
            sum(
                individual_cost(game, prof[:i] + (other[i],) + prof[i + 1:], i)
                for i in range(n)
            )
            for other in profiles
        ]
        for prof in profiles
    ]
    return profiles, sf, dev


def check_smooth(
    game: GeneralizedGame,
    spec: SocialSpec,
    cert: SmoothnessCertificate,
    tol=FEAS_TOL,
    cap: int = PROFILE_CAP,
):
    """Exhaustive check of the pair inequalities; (True, None) or
    (False, first violating (sigma, sigma'))."""
    profiles, sf, dev = _pair_tables(game, spec, cap)
    for a, sigma in enumerate(profiles):
        for b, target in enumerate(profiles):
            if dev[a][b] > cert.lam * sf[b] + cert.mu * sf[a] + tol:
                return False, (sigma, target)
    return True, None


@dataclass
class RobustPoA:
    status: str  # OPTIMAL or NOT_SMOOTHABLE
    value: Optional[object]
    lam: Optional[float]
    mu: Optional[float]
    unbounded_witness: Optional[tuple]  # profile breaking sum-boundedness
    probes: int


def _probe(rho: float, sf, dev) -> Optional[tuple]:
    """Feasibility of a certificate with bound <= rho: returns (lam, mu) or
    None.  delta keeps mu strictly below 1."""
    rows = []
    m = len(sf)
    for a in range(m):
        for b in range(m):
            coeffs = {}
            if sf[b]:
                coeffs["lam"] = sf[b]
            if sf[a]:
                coeffs["mu"] = sf[a]
            rows.append(lp.Row(coeffs, lp.GE, dev[a][b], f"pair[{a}][{b}]"))
    rows.append(lp.Row({"lam": 1, "mu": rho}, lp.LE, rho, "cap"))
    rows.append(lp.Row({"mu": 1, "delta": 1}, lp.LE, 1, "strict"))
    program = lp.LinearProgram(
        lp.MAXIMIZE,
        ["lam", "mu", "delta"],
        {"delta": 1},
        rows,
        bounds={"mu": lp.FREE, "delta": (0, 1)},
        name="smooth_probe",
    )
    try:
        rep = lp.solve(program)
    except lp.SolverError:
        # float kernel gave up; rationals are slow but never lie
        rep = lp.solve(program, exact=True)
    if rep.status != lp.OPTIMAL or rep.value <= _STRICT:
        return None
    return float(rep.primal["lam"]), float(rep.primal["mu"])


def robust_poa(
    game: GeneralizedGame,
    spec: SocialSpec,
    tol: float = BISECT_TOL,
    cap: int = PROFILE_CAP,
) -> RobustPoA:
    """Bisection for inf lam/(1-mu) over valid certificates.

    Only defined for sum-bounded (game, spec) pairs — everything else is
    NOT_SMOOTHABLE with the offending profile attached.  The returned value
    sits on the certified (feasible) side of the final bracket, so it is
    always a genuine inefficiency upper bound, at most tol above the
    infimum.  The infimum itself may be unattained; the witness (lam, mu)
    comes from the last feasible probe.
    """
    ok, witness = is_sum_bounded(game, spec, cap=cap)
    if not ok:
        return RobustPoA(NOT_SMOOTHABLE, None, None, None, witness, 0)
    profiles, sf, dev = _pair_tables(game, spec, cap)
    one = sf[0] / sf[0] if sf and sf[0] else 1
    if len(profiles) == 1:
        # only the pair (sigma, sigma) exists; lam=1, mu=0 is tight
        return RobustPoA(OPTIMAL, one, 1.0, 0.0, None, 0)
    sf = [float(v) for v in sf]
    dev = [[float(v) for v in row] for row in dev]
    # pair rows are homogeneous in the table scale, so dividing both tables
    # by a common factor leaves the feasible (lam, mu) set untouched while
    # keeping the probe LP's data near unit scale
    big = max(max(sf), max(abs(x) for row in dev for x in row), 1.0)
    if big > 1.0:
        sf = [v / big for v in sf]
        dev = [[x / big for x in row] for row in dev]

    ratios = [
        dev[a][b] / sf[b] for a in range(len(sf)) for b in range(len(sf)) if sf[b] > 0
    ]
    hi = max(1.0, max(ratios, default=1.0))
    probes = 0
    cert = None
    for _ in range(_BRACKET_DOUBLINGS):
        probes += 1
        cert = _probe(hi, sf, dev)
        if cert is not None:
            break
        hi *= 2
    if cert is None:
        return RobustPoA(NOT_SMOOTHABLE, None, None, None, None, probes)
    lo = 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        probes += 1
        found = _probe(mid, sf, dev)
        if found is None:
            lo = mid
        else:
            hi, cert = mid, found
    return RobustPoA(OPTIMAL, hi, cert[0], cert[1], None, probes)


@dataclass
class SmoothnessValidation:
    sum_bounded: bool
    sum_bounded_witness: Optional[tuple]
    robust: RobustPoA
    ppoa: object  # value or NO_EQUILIBRIUM
    ccpoa: object
    ppoa_within_bound: Optional[bool]
    ccpoa_within_bound: Optional[bool]
    tightness_gap: Optional[float]


def validate_smoothness_claims(
    game: GeneralizedGame,
    spec: SocialSpec,
    tol: float = BISECT_TOL,
    cap: int = PROFILE_CAP,
) -> SmoothnessValidation:
    """Cross-check the certificate machinery against the exact oracles:
    the pure ratio at eps=0 and the coarse ratio must both sit below the
    robust bound.  Either failing indicates a bug, not a bad instance."""
    robust = robust_poa(game, spec, tol, cap)
    _, opt = social_optimum(game, spec, cap)
    ppoa = exact_ppoa(game, spec, 0, cap=cap)
    ccpoa = worst_cce_value(game, spec, 0, cap=cap) / opt
    if robust.status != OPTIMAL:
        return SmoothnessValidation(
            False, robust.unbounded_witness, robust, ppoa, ccpoa, None, None, None
        )
    ok_p = None if ppoa == NO_EQUILIBRIUM else bool(ppoa <= robust.value + tol)
    ok_c = bool(ccpoa <= robust.value + tol)
    gap = None if ppoa == NO_EQUILIBRIUM else float(robust.value - ppoa)
    return SmoothnessValidation(True, None, robust, ppoa, ccpoa, ok_p, ok_c, gap)
