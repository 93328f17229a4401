"""Shepherd-line feasibility analysis for a two-sheep pair.

Place the shepherd on the line through a pair of interacting sheep at
``line_start + c * (line_end - line_start)``.  Writing a = repulsion_gain,
b = attraction_gain, s = shepherd_gain and R = sensing_radius, three open
ranges of the coefficient c guarantee that one unsaturated tick strictly
grows the pair distance whenever the pair is within sensing range:

* ``behind``  (c < 0):      1/c^2 - 1/(1-c)^2 > threshold_behind
* ``between`` (0 < c < 1):  1/c^2 + 1/(c-1)^2 > threshold_between
* ``beyond``  (c > 1):      1/(c-1)^2 - 1/c^2 > threshold_beyond

with threshold_behind = threshold_beyond = 2(a - R^2 b + R^2 max(b, R))/s
and threshold_between = 2(b R^2 - a)/s.  The behind criterion is strictly
decreasing in |c|, the between criterion is convex with minimum 8 at
c = 1/2, and the beyond criterion is the behind criterion under the mirror
c -> 1 - c, so interval endpoints are found by bisection.

The pair separation vector evolves as delta' = (1 + velocity_scalar) *
delta under one unsaturated tick, which gives the one-tick distance gain
``separation_gain`` used to rank candidate placements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SwarmParams
from .errors import COINCIDENCE_TOLERANCE, SingularityError

# retraction applied to open interval endpoints when clamping, so returned
# coefficients are strictly interior
LINE_MARGIN = 1e-6

DEFAULT_DOMAIN_BOUND = 10.0
ENDPOINT_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi)."""

    lo: float
    hi: float

    def __contains__(self, c: float) -> bool:
        return self.lo < c < self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class FeasibleSets:
    """Open coefficient intervals where shepherd placement grows the pair
    distance, one group per domain piece, plus the thresholds that cut them.

    The unbounded pieces are truncated at ``domain_bound`` from their finite
    edge; endpoints are resolved to ``tol`` by bisection.
    """

    threshold_behind: float
    threshold_between: float
    threshold_beyond: float
    behind: tuple[Interval, ...]
    between: tuple[Interval, ...]
    beyond: tuple[Interval, ...]
    tol: float
    domain_bound: float
    params: SwarmParams

    def intervals(self) -> tuple[Interval, ...]:
        return self.behind + self.between + self.beyond


def _behind_criterion(c: float) -> float:
    return 1.0 / (c * c) - 1.0 / ((1.0 - c) * (1.0 - c))


def _between_criterion(c: float) -> float:
    return 1.0 / (c * c) + 1.0 / ((c - 1.0) * (c - 1.0))


def _bisect_boundary(pred, feasible: float, infeasible: float, tol: float) -> float:
    """Locate the boundary between a feasible and an infeasible point."""
    a, b = infeasible, feasible
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        if pred(mid):
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def feasible_sets(params: SwarmParams,
                  domain_bound: float = DEFAULT_DOMAIN_BOUND) -> FeasibleSets:
    """Compute the three feasible coefficient ranges for ``params``.

    ``domain_bound`` caps the unbounded pieces: behind is searched over
    (-domain_bound, 0), beyond over (1, 1 + domain_bound).
    """
    if params.shepherd_gain <= 0:
        raise ValueError("shepherd_gain must be positive (thresholds divide by it)")
    if domain_bound <= 0:
        raise ValueError("domain_bound must be positive")
    r2 = params.sensing_radius * params.sensing_radius
    t_outer = 2.0 * (params.repulsion_gain - r2 * params.attraction_gain
                     + r2 * max(params.attraction_gain, params.sensing_radius)
                     ) / params.shepherd_gain
    t_between = 2.0 * (params.attraction_gain * r2 - params.repulsion_gain
                       ) / params.shepherd_gain
    tol = ENDPOINT_TOL

    # behind: criterion decreases strictly in |c| and blows up near 0^-
    if t_outer <= 0.0 or _behind_criterion(-domain_bound) > t_outer:
        behind_lo = -domain_bound
    else:
        anchor = -1e-12
        while _behind_criterion(anchor) <= t_outer:
            anchor *= 0.5
        behind_lo = _bisect_boundary(
            lambda c: _behind_criterion(c) > t_outer, anchor, -domain_bound, tol
        )
    behind = (Interval(behind_lo, 0.0),)

    # between: convex with minimum 8 at c = 1/2, symmetric about 1/2
    if t_between <= 8.0:
        between = (Interval(0.0, 1.0),)
    else:
        anchor = 1e-12
        while _between_criterion(anchor) <= t_between:
            anchor *= 0.5
        edge = _bisect_boundary(
            lambda c: _between_criterion(c) > t_between, anchor, 0.5, tol
        )
        between = (Interval(0.0, edge), Interval(1.0 - edge, 1.0))

    # beyond mirrors behind exactly under c -> 1 - c
    beyond = (Interval(1.0, 1.0 - behind_lo),)

    return FeasibleSets(
        threshold_behind=t_outer,
        threshold_between=t_between,
        threshold_beyond=t_outer,
        behind=behind,
        between=between,
        beyond=beyond,
        tol=tol,
        domain_bound=domain_bound,
        params=params,
    )


def contains(sets: FeasibleSets, c: float) -> bool:
    """True iff ``c`` lies strictly inside some stored interval."""
    return any(c in iv for iv in sets.intervals())


def pair_velocity_scalar(delta, c: float, params: SwarmParams) -> float:
    """Scalar rate at which the pair separation vector stretches.

    One unsaturated tick with the shepherd at coefficient ``c`` on the pair
    line maps the separation vector to (1 + scalar) times itself.
    """
    dx = float(delta[0])
    dy = float(delta[1])
    nd = math.sqrt(dx * dx + dy * dy)
    if nd < COINCIDENCE_TOLERANCE:
        raise SingularityError("pair separation vector is numerically zero")
    if c == 0.0 or c == 1.0:
        raise SingularityError("line coefficient 0 or 1 puts the shepherd on a sheep")
    nd3 = nd * nd * nd
    ac = abs(c)
    am = abs(c - 1.0)
    term_start = (c * params.shepherd_gain) / (ac * ac * ac * nd3)
    term_end = ((c - 1.0) * params.shepherd_gain) / (am * am * am * nd3)
    term_pair = 2.0 * (params.repulsion_gain
                       - params.attraction_gain * nd * nd) / nd3
    return term_start - term_end + term_pair


def separation_gain(delta, c: float, params: SwarmParams) -> float:
    """One-tick change of the pair distance under unsaturated dynamics.

    A positive value certifies strict one-step growth.
    """
    scalar = pair_velocity_scalar(delta, c, params)
    dx = float(delta[0])
    dy = float(delta[1])
    nd = math.sqrt(dx * dx + dy * dy)
    return nd * (abs(scalar + 1.0) - 1.0)


@dataclass(frozen=True)
class SeparationProbe:
    """Diagnostic bundle for one (delta, c) shepherd placement."""

    delta: tuple[float, float]
    c: float
    velocity_scalar: float
    gain: float


def probe(delta, c: float, params: SwarmParams) -> SeparationProbe:
    scalar = pair_velocity_scalar(delta, c, params)
    dx = float(delta[0])
    dy = float(delta[1])
    nd = math.sqrt(dx * dx + dy * dy)
    return SeparationProbe((dx, dy), c, scalar, nd * (abs(scalar + 1.0) - 1.0))


def _clamp_candidates(sets: FeasibleSets, c_star: float,
                      margin: float) -> list[tuple[float, float]]:
    """(distance, candidate) pairs, one per interval, endpoints retracted."""
    cands = []
    for iv in sets.intervals():
        lo = iv.lo + margin
        hi = iv.hi - margin
        if lo > hi:
            # interval narrower than two margins: use its midpoint
            cand = 0.5 * (iv.lo + iv.hi)
        else:
            cand = min(max(c_star, lo), hi)
        cands.append((abs(c_star - cand), cand))
    return cands


def project_to_feasible_line(point, line_start, line_end, sets: FeasibleSets,
                             margin: float = LINE_MARGIN) -> np.ndarray:
    """Closest feasible point to ``point`` on the line through two sheep.

    The line is parameterised as line_start + c * (line_end - line_start)
    with feasible c given by ``sets``.  The orthogonal projection
    coefficient is clamped into the nearest interval, retracting open
    endpoints inward by ``margin``.  Equidistant clamps tie-break toward
    the larger one-tick distance gain, then toward the smaller coefficient.
    """
    start = np.asarray(line_start, dtype=np.float64)
    end = np.asarray(line_end, dtype=np.float64)
    u = end - start
    uu = float(u[0] * u[0] + u[1] * u[1])
    if math.sqrt(uu) < COINCIDENCE_TOLERANCE:
        raise SingularityError("line endpoints coincide")
    if not sets.intervals():
        raise ValueError("feasible sets are empty")
    w = np.asarray(point, dtype=np.float64) - start
    c_star = float(w[0] * u[0] + w[1] * u[1]) / uu
    if contains(sets, c_star):
        return start + c_star * u
    cands = _clamp_candidates(sets, c_star, margin)
    dmin = min(d for d, _ in cands)
    tied = [cand for d, cand in cands if d == dmin]
    if len(tied) > 1:
        tied.sort(key=lambda c: (-abs(separation_gain(u, c, sets.params)), c))
    return start + tied[0] * u


def max_gain_position(line_start, line_end, sets: FeasibleSets,
                      margin: float = LINE_MARGIN, samples: int = 17) -> np.ndarray:
    """Feasible-line point with the largest |one-tick distance gain|.

    Each interval is sampled uniformly after endpoint retraction; used as
    the fallback shepherd goal when the required push degenerates to zero.
    """
    start = np.asarray(line_start, dtype=np.float64)
    end = np.asarray(line_end, dtype=np.float64)
    u = end - start
    if math.sqrt(float(u[0] * u[0] + u[1] * u[1])) < COINCIDENCE_TOLERANCE:
        raise SingularityError("line endpoints coincide")
    best_key = None
    best_c = None
    for iv in sets.intervals():
        lo = iv.lo + margin
        hi = iv.hi - margin
        if lo > hi:
            cs = [0.5 * (iv.lo + iv.hi)]
        else:
            cs = np.linspace(lo, hi, samples).tolist()
        for c in cs:
            key = (-abs(separation_gain(u, c, sets.params)), c)
            if best_key is None or key < best_key:
                best_key = key
                best_c = c
    return start + best_c * u
