"""Certified global maximization over exact rational intervals.

The maximizer runs a deterministic best-first branch and bound.  The lower
bound is advanced only by exact point evaluations at rational midpoints, so
every reported lower bound comes with an actual witness input; the upper
bound is the largest interval-evaluation bound over the live boxes.  The
result is a two-sided rational enclosure of the maximum together with an
outer cover of the maximizer set.
"""

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT
from .errors import BudgetExhausted, PointfreeError
from .reals import RatInterval, eval_interval, eval_point


@dataclass(frozen=True)
class DedekindEnclosure:
    lower: Fraction
    upper: Fraction
    eps: Fraction
    nodes_expanded: int
    trace: tuple  # ((lower_k, upper_k), ...) per expansion step, or ()

    def __post_init__(self):
        if self.lower > self.upper:
            raise PointfreeError("enclosure with lower > upper")


@dataclass(frozen=True)
class MaximizerCover:
    intervals: tuple  # closed RatIntervals, sorted, cannot be excluded
    delta: Fraction   # width bound: every interval has width <= delta


def _rat_sqrt_upper(q):
    """A rational upper bound on sqrt(q) for q > 0."""
    q = Fraction(q)
    n = q.numerator * q.denominator
    return Fraction(math.isqrt(n) + 1, q.denominator)


def _push(heap, e, box, floor):
    """Evaluate a box and add it to the live heap unless provably below
    the current lower bound."""
    bounds = eval_interval(e, box)
    if bounds.hi < floor:
        return None
    heapq.heappush(heap, (-bounds.hi, box.lo, box.width, box, bounds))
    return bounds


def evt_maximize(e, d, eps, node_budget=None, keep_trace=True):
    """Enclose max of e over d within eps; returns (enclosure, cover)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise PointfreeError("eps must be strictly positive")
    node_budget = (node_budget if node_budget is not None
                   else DEFAULT.bnb_node_budget)
    heap = []
    lower = None
    for box in d.components:
        val = eval_point(e, box.midpoint())
        lower = val if lower is None else max(lower, val)
    for box in d.components:
        _push(heap, e, box, lower)
    nodes = 0
    trace = []

    def upper_now():
        while heap and -heap[0][0] < lower:
            heapq.heappop(heap)  # lazily drop boxes pruned by a later lower
        return -heap[0][0] if heap else lower

    upper = upper_now()
    if keep_trace:
        trace.append((lower, upper))
    while upper - lower > eps:
        if nodes >= node_budget:
            raise BudgetExhausted(
                f"node budget {node_budget} exhausted",
                partial=(DedekindEnclosure(lower, upper, eps, nodes,
                                           tuple(trace)),
                         _cover(heap, lower, eps)))
        _, _, _, box, _ = heapq.heappop(heap)
        mid = box.midpoint()
        lower = max(lower, eval_point(e, mid))
        nodes += 1
        _push(heap, e, RatInterval(box.lo, mid), lower)
        _push(heap, e, RatInterval(mid, box.hi), lower)
        upper = upper_now()
        if keep_trace:
            trace.append((lower, upper))

    # refine the surviving boxes to the cover's width bound
    delta = _rat_sqrt_upper(eps)
    work = [item[3] for item in heap if -item[0] >= lower]
    survivors = []
    while work:
        work.sort(key=lambda b: (b.lo, b.hi), reverse=True)
        box = work.pop()
        if eval_interval(e, box).hi < lower:
            continue
        if box.width <= delta:
            survivors.append(box)
            continue
        if nodes >= node_budget:
            raise BudgetExhausted(
                f"node budget {node_budget} exhausted",
                partial=(DedekindEnclosure(lower, upper, eps, nodes,
                                           tuple(trace)),
                         MaximizerCover(tuple(survivors + work), delta)))
        mid = box.midpoint()
        lower = max(lower, eval_point(e, mid))
        nodes += 1
        work.append(RatInterval(box.lo, mid))
        work.append(RatInterval(mid, box.hi))
    survivors = [b for b in survivors if eval_interval(e, b).hi >= lower]
    upper = min(upper, max(eval_interval(e, b).hi for b in survivors))
    if keep_trace:
        trace.append((lower, upper))
    enc = DedekindEnclosure(lower, upper, eps, nodes, tuple(trace))
    cover = MaximizerCover(tuple(sorted(survivors,
                                        key=lambda b: (b.lo, b.hi))), delta)
    return enc, cover


def _cover(heap, lower, eps):
    boxes = sorted((item[3] for item in heap if -item[0] >= lower),
                   key=lambda b: (b.lo, b.hi))
    return MaximizerCover(tuple(boxes), _rat_sqrt_upper(eps))


# --- one-sided certificates -----------------------------------------------------

def positive_witness(e, d, q, budget):
    """A subinterval of d on which e provably exceeds q, or None (exhausted).

    Best-first on the interval upper bound, so the search concentrates where
    the maximum can live; a box is a witness when its interval lower bound
    already clears q.  Exhaustion is inconclusive, not a refutation.
    """
    q = Fraction(q)
    if budget < 1:
        raise PointfreeError("budget must be at least 1")
    heap = []
    for box in d.components:
        bounds = _push(heap, e, box, q)  # floor q: boxes with hi < q useless
        if bounds is not None and bounds.lo > q:
            return box
    splits = 0
    while heap and splits < budget:
        _, _, _, box, bounds = heapq.heappop(heap)
        if box.is_point:
            continue
        mid = box.midpoint()
        splits += 1
        for child in (RatInterval(box.lo, mid), RatInterval(mid, box.hi)):
            cb = _push(heap, e, child, q)
            if cb is not None and cb.lo > q:
                return child
    return None


def cover_certificate(e, d, q, budget):
    """A finite subdivision of d with e provably below q on every piece,
    or None (exhausted).  The pieces union exactly to d."""
    q = Fraction(q)
    if budget < 1:
        raise PointfreeError("budget must be at least 1")
    stack = list(reversed(d.components))
    pieces = []
    splits = 0
    while stack:
        box = stack.pop()
        if eval_interval(e, box).hi < q:
            pieces.append(box)
            continue
        if box.is_point or splits >= budget:
            return None
        mid = box.midpoint()
        splits += 1
        stack.append(RatInterval(mid, box.hi))
        stack.append(RatInterval(box.lo, mid))
    return pieces


@dataclass(frozen=True)
class LeftBranch:
    """Certifies p < max: a witness interval with interval lower bound > p."""

    p: Fraction
    witness: RatInterval
    bound: Fraction  # the certified strict lower bound on the witness


@dataclass(frozen=True)
class RightBranch:
    """Certifies max < q via a threshold q' < q and a full cover below q'."""

    q: Fraction
    threshold: Fraction
    pieces: tuple


def locate(e, d, p, q, initial_budget=1, max_budget=None):
    """Constructive locatedness: decide p < max or max < q with certificates.

    Alternates positivity searches against p and cover searches against the
    midpoint q' = (p+q)/2 with doubling budgets.  Some branch must certify:
    if the maximum exceeds p a witness box eventually appears, and otherwise
    the maximum is below q', so a finite subdivision eventually certifies it.
    """
    p, q = Fraction(p), Fraction(q)
    if p >= q:
        raise PointfreeError("locate needs p < q")
    max_budget = (max_budget if max_budget is not None
                  else DEFAULT.bnb_node_budget)
    threshold = (p + q) / 2
    budget = initial_budget
    while True:
        w = positive_witness(e, d, p, budget)
        if w is not None:
            return LeftBranch(p, w, eval_interval(e, w).lo)
        c = cover_certificate(e, d, threshold, budget)
        if c is not None:
            return RightBranch(q, threshold, tuple(c))
        if budget > max_budget:
            raise BudgetExhausted(
                f"locate budget {max_budget} exhausted for ({p}, {q})")
        budget *= 2


def cut_validate(enc, probes, e, d):
    """Cross-examine an enclosure with locate dichotomies.

    For each probe (p, q) with p < q, the returned branch must be consistent
    with the enclosure: a left branch (p < max) requires p < upper, a right
    branch (max < q) requires lower < q.  Also re-checks every certificate
    and the monotonicity of the recorded bound trace.
    """
    probes = list(probes)
    failures = []
    for k, (p, q) in enumerate(probes):
        p, q = Fraction(p), Fraction(q)
        if p >= q:
            failures.append({"probe": k, "reason": "p >= q"})
            continue
        branch = locate(e, d, p, q)
        if isinstance(branch, LeftBranch):
            if eval_interval(e, branch.witness).lo <= p:
                failures.append({"probe": k, "reason": "left certificate "
                                 "does not clear p"})
            if not p < enc.upper:
                failures.append({"probe": k,
                                 "reason": "left branch with p >= upper"})
        else:
            if any(eval_interval(e, piece).hi >= branch.threshold
                   for piece in branch.pieces):
                failures.append({"probe": k, "reason": "right certificate "
                                 "piece not below threshold"})
            if not enc.lower < q:
                failures.append({"probe": k,
                                 "reason": "right branch with lower >= q"})
    trace_ok = all(a[0] <= b[0] and a[1] >= b[1] and b[0] <= b[1]
                   for a, b in zip(enc.trace, enc.trace[1:]))
    if enc.trace and not all(lo <= hi for lo, hi in enc.trace):
        trace_ok = False
    return {"probes": len(probes), "failures": failures,
            "trace_monotone": trace_ok,
            "ok": trace_ok and not failures}
