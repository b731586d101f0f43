"""Finite frames: enumeration of presented frames, points, congruences,
open/closed sublocales, quotients, coproducts (tensor products) and the
Hausdorff / overtness / compactness checks."""

import random
from dataclasses import dataclass
from itertools import combinations

from .config import DEFAULT
from .errors import CapExceeded, NotACover, PointfreeError
from .order import DistLattice, KFinSet, sort_key
from .presentations import (CIdeal, cideal_key, meet_key, saturate,
                            stabilize)


class FiniteFrame(DistLattice):
    """A finite distributive lattice viewed as a frame (all joins exist)."""

    def check_frame_distributivity(self):
        """Exhaustive a ∧ ⋁B = ⋁(a ∧ B) over all subsets B. Desk scale only."""
        elems = self.elements
        if len(elems) > DEFAULT.positivity_scan_cap:
            raise CapExceeded("frame", len(elems), DEFAULT.positivity_scan_cap)
        for a in elems:
            for n in range(len(elems) + 1):
                for bs in combinations(elems, n):
                    lhs = self.meet(a, self.join_all(bs))
                    rhs = self.join_all(self.meet(a, b) for b in bs)
                    if lhs != rhs:
                        return False
        return True


def frame_from_order(elements, le, meet, join):
    elems = sorted(elements, key=sort_key)
    leq = [(a, b) for a in elems for b in elems if le(a, b)]
    return FiniteFrame(elems, leq, meet=meet, join=join,
                       check_distributive=False)


# --- enumeration of presented frames ----------------------------------------

class _BitPresentation:
    """Bitmask view of a stabilized presentation for fast saturation."""

    def __init__(self, p):
        self.p = p
        self.meets = sorted(p.all_meets(), key=meet_key)
        self.index = {m: i for i, m in enumerate(self.meets)}
        n = len(self.meets)
        self.down = [0] * n  # down-closure mask of each meet (its supersets)
        for i, m in enumerate(self.meets):
            mask = 0
            for j, m2 in enumerate(self.meets):
                if m <= m2:
                    mask |= 1 << j
            self.down[i] = mask
        self.rules = []
        for lhs, rhs in p.covers:
            rmask = 0
            for t in rhs:
                rmask |= 1 << self.index[t]
            self.rules.append((self.index[lhs], rmask))

    def saturate(self, mask):
        members = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                members |= self.down[i]
            m >>= 1
            i += 1
        changed = True
        while changed:
            changed = False
            for li, rmask in self.rules:
                if rmask & ~members == 0 and not (members >> li) & 1:
                    members |= self.down[li]
                    changed = True
        return members

    def to_cideal(self, mask):
        ms = frozenset(self.meets[i] for i in range(len(self.meets))
                       if (mask >> i) & 1)
        return CIdeal(self.p, ms)


def enumerate_frame(p, cap=None):
    """The finite frame of all C-ideals of a stabilized presentation.

    Returns (frame, gen_map) where frame elements are frozensets of formal
    meets and gen_map sends each generator to its frame element.
    """
    cap = cap if cap is not None else DEFAULT.generator_cap
    if len(p.generators) > cap:
        raise CapExceeded("generators", len(p.generators), cap)
    p = stabilize(p, cap=cap)
    bp = _BitPresentation(p)
    bottom = bp.saturate(0)
    principals = {bp.saturate(1 << i) for i in range(len(bp.meets))}
    elems = {bottom} | principals
    # every C-ideal is a join of principal ones; close under binary joins
    frontier = sorted(elems)
    while frontier:
        new = set()
        for a in frontier:
            for b in elems:
                j = a | b
                if j not in elems:
                    j = bp.saturate(j)
                    if j not in elems and j not in new:
                        new.add(j)
        elems |= new
        frontier = sorted(new)
    join_memo = {}

    def join(x, y):
        u = x | y
        if u in elems_set:
            return u
        if u not in join_memo:
            join_memo[u] = bp.saturate(u)
        return join_memo[u]

    elems_set = elems
    masks = sorted(elems, key=lambda m: (bin(m).count("1"), m))
    frame_masks = frame_from_order(
        masks, lambda a, b: a & ~b == 0, lambda a, b: a & b, join)
    # re-express with frozenset-of-meets elements for the public surface
    conv = {m: bp.to_cideal(m).members for m in masks}
    elems_pub = [conv[m] for m in frame_masks.elements]
    leq = [(conv[a], conv[b]) for (a, b) in frame_masks._leq]
    inv = {v: k for k, v in conv.items()}
    frame = FiniteFrame(
        elems_pub, leq,
        meet=lambda a, b: conv[frame_masks.meet(inv[a], inv[b])],
        join=lambda a, b: conv[frame_masks.join(inv[a], inv[b])],
        check_distributive=False)
    gen_map = {g: saturate(p, [frozenset([g])]).members for g in p.generators}
    for g, member in gen_map.items():
        if member not in frame._index:
            raise PointfreeError(f"generator image of {g} missing from frame")
    return frame, gen_map


def frame_to_json_dict(frame, points_list=None):
    def meets_list(e):
        return [sorted(m) for m in sorted(e, key=meet_key)]

    elems = [meets_list(e) for e in frame.elements]
    leq_pairs = [[elems[frame._index[a]], elems[frame._index[b]]]
                 for (a, b) in sorted(frame._leq, key=sort_key)]
    out = {"elements": elems, "leq_pairs": leq_pairs}
    if points_list is not None:
        out["points"] = [[meets_list(e) for e in sorted(pt, key=sort_key)]
                         for pt in points_list]
    return out


# --- points ------------------------------------------------------------------

def points(f):
    """All completely prime filters, each returned as a frozenset of elements.

    In a finite frame every such filter is the upset of a completely
    join-prime element, so we enumerate join-prime elements and take their
    upsets; the filter conditions are re-checked literally on the result.
    """
    pts = []
    for j in f.elements:
        if j == f.bottom:
            continue
        strictly_below = [x for x in f.elements if f.le(x, j) and x != j]
        if f.join_all(strictly_below) == j:
            continue  # join-reducible
        if any(f.le(j, f.join(a, b)) and not f.le(j, a) and not f.le(j, b)
               for a in f.elements for b in f.elements):
            continue  # irreducible but not prime (cannot happen: distributive)
        filt = frozenset(x for x in f.elements if f.le(j, x))
        pts.append(filt)
    for filt in pts:
        _check_point(f, filt)
    return sorted(pts, key=sort_key)


def _check_point(f, filt):
    if f.top not in filt or f.bottom in filt:
        raise PointfreeError("point fails top/bottom conditions")
    for a in filt:
        for b in f.elements:
            if f.le(a, b) and b not in filt:
                raise PointfreeError("point not upward closed")
        for b in filt:
            if f.meet(a, b) not in filt:
                raise PointfreeError("point not meet closed")


def point_hom(f, filt, two):
    """The frame hom to the two-element frame induced by a point."""
    return FrameHom(f, two, {u: (two.top if u in filt else two.bottom)
                             for u in f.elements})


def two_element_frame():
    return frame_from_order(["0", "1"],
                            lambda a, b: a == b or (a, b) == ("0", "1"),
                            lambda a, b: "0" if "0" in (a, b) else "1",
                            lambda a, b: "1" if "1" in (a, b) else "0")


# --- congruences -------------------------------------------------------------

@dataclass(frozen=True)
class Congruence:
    frame: FiniteFrame
    classes: tuple  # sorted tuple of frozensets partitioning the elements

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            seen |= cls
        if seen != set(self.frame.elements):
            raise PointfreeError("classes do not partition the frame")

    @classmethod
    def from_partition(cls, frame, classes):
        return cls(frame, tuple(sorted((frozenset(c) for c in classes),
                                       key=sort_key)))

    @classmethod
    def from_map(cls, frame, fn):
        buckets = {}
        for u in frame.elements:
            buckets.setdefault(fn(u), set()).add(u)
        return cls.from_partition(frame, buckets.values())

    def class_of(self, u):
        for c in self.classes:
            if u in c:
                return c
        raise PointfreeError(f"unknown element {u!r}")

    def related(self, u, v):
        return v in self.class_of(u)

    def largest(self, u):
        """Largest element of u's class (exists for frame congruences)."""
        c = self.class_of(u)
        top = self.frame.join_all(sorted(c, key=sort_key))
        if top not in c:
            raise PointfreeError("class has no largest element")
        return top

    def is_identity(self):
        return all(len(c) == 1 for c in self.classes)

    def is_all_pairs(self):
        return len(self.classes) == 1

    def witness_pairs(self):
        """Enough related pairs to regenerate the congruence."""
        pairs = []
        for c in self.classes:
            members = sorted(c, key=sort_key)
            pairs.extend(zip(members, members[1:]))
        return pairs


def identity_congruence(f):
    return Congruence.from_partition(f, [{u} for u in f.elements])


def all_pairs_congruence(f):
    return Congruence.from_partition(f, [set(f.elements)])


def congruence_generate(f, pairs):
    """Least congruence containing the pairs: equivalence closure that is
    also closed under meeting and joining both sides with any element."""
    parent = {u: u for u in f.elements}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    work = list(pairs)
    while work:
        u, v = work.pop()
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        if sort_key(rv) < sort_key(ru):
            ru, rv = rv, ru
        parent[rv] = ru
        for w in f.elements:
            work.append((f.meet(u, w), f.meet(v, w)))
            work.append((f.join(u, w), f.join(v, w)))
    buckets = {}
    for u in f.elements:
        buckets.setdefault(find(u), set()).add(u)
    return Congruence.from_partition(f, buckets.values())


def open_congruence(f, a):
    """Kernel of u ↦ u ∧ a (the open sublocale at a)."""
    return Congruence.from_map(f, lambda u: f.meet(u, a))


def closed_congruence(f, a):
    """Kernel of u ↦ u ∨ a (the closed sublocale at a)."""
    return Congruence.from_map(f, lambda u: f.join(u, a))


def congruence_intersection(c1, c2):
    if c1.frame is not c2.frame:
        raise PointfreeError("congruences live on different frames")
    f = c1.frame
    return Congruence.from_map(
        f, lambda u: (frozenset(c1.class_of(u)), frozenset(c2.class_of(u))))


def congruence_join(c1, c2):
    if c1.frame is not c2.frame:
        raise PointfreeError("congruences live on different frames")
    return congruence_generate(c1.frame,
                               c1.witness_pairs() + c2.witness_pairs())


def is_complementary(c1, c2):
    return (congruence_intersection(c1, c2).is_identity()
            and congruence_join(c1, c2).is_all_pairs())


def quotient(f, c):
    """Quotient frame on the largest class representatives, plus the hom."""
    reps = sorted({c.largest(u) for u in f.elements}, key=sort_key)
    rep_of = {u: c.largest(u) for u in f.elements}

    def le(a, b):
        return rep_of[f.join(a, b)] == b

    q = frame_from_order(reps, le,
                         lambda a, b: rep_of[f.meet(a, b)],
                         lambda a, b: rep_of[f.join(a, b)])
    hom = FrameHom(f, q, rep_of)
    return q, hom


@dataclass(frozen=True)
class FrameHom:
    """A function between finite frames preserving top, meets and all joins."""

    source: FiniteFrame
    target: FiniteFrame
    mapping: dict

    def __post_init__(self):
        h = self.mapping
        if set(h) != set(self.source.elements):
            raise PointfreeError("hom not defined on the whole source")
        if h[self.source.top] != self.target.top:
            raise PointfreeError("hom does not preserve top")
        if h[self.source.bottom] != self.target.bottom:
            raise PointfreeError("hom does not preserve bottom (empty join)")
        for a in self.source.elements:
            for b in self.source.elements:
                if h[self.source.meet(a, b)] != self.target.meet(h[a], h[b]):
                    raise PointfreeError("hom does not preserve binary meets")
                if h[self.source.join(a, b)] != self.target.join(h[a], h[b]):
                    raise PointfreeError("hom does not preserve binary joins")

    def __call__(self, u):
        return self.mapping[u]

    def __hash__(self):
        return hash((id(self.source), id(self.target),
                     tuple(sorted(self.mapping.items(),
                                  key=lambda kv: sort_key(kv[0])))))

    def right_adjoint(self, b):
        return self.source.join_all(a for a in self.source.elements
                                    if self.target.le(self(a), b))

    def left_adjoint(self, b):
        """Left adjoint value at b, or raises if the adjoint does not exist."""
        cands = [a for a in self.source.elements if self.target.le(b, self(a))]
        val = self.source.meet_all(cands)
        if not self.target.le(b, self(val)):
            raise PointfreeError("hom has no left adjoint "
                                 "(fails to preserve all meets)")
        return val


def identity_hom(f):
    return FrameHom(f, f, {u: u for u in f.elements})


def image_congruence(h, c):
    """Congruence on h's source from one on h's target (sublocale image
    direction: h plays f*, so the image of a sublocale travels this way)."""
    if c.frame is not h.target:
        raise PointfreeError("congruence must live on the hom's target")
    return Congruence.from_map(h.source, lambda u: frozenset(c.class_of(h(u))))


def preimage_congruence(h, c):
    """Congruence on h's target generated by the image of one on h's source."""
    if c.frame is not h.source:
        raise PointfreeError("congruence must live on the hom's source")
    pairs = [(h(u), h(v)) for (u, v) in c.witness_pairs()]
    return congruence_generate(h.target, pairs)


# --- coproducts / tensor ------------------------------------------------------

def _tensor_saturate(f, g, downset):
    """Close a downset of f × g under the two join-stability conditions."""
    d = set(downset)
    # empty joins: bottom rows and columns are always present
    d |= {(f.bottom, v) for v in g.elements}
    d |= {(u, g.bottom) for u in f.elements}
    changed = True
    while changed:
        changed = False
        for (u, v) in list(d):
            for (u2, v2) in list(d):
                if v2 == v:
                    cand = (f.join(u, u2), v)
                    if cand not in d:
                        d.add(cand)
                        changed = True
                if u2 == u:
                    cand = (u, g.join(v, v2))
                    if cand not in d:
                        d.add(cand)
                        changed = True
        # downward closure
        for (u, v) in list(d):
            for u2 in f.elements:
                for v2 in g.elements:
                    if f.le(u2, u) and g.le(v2, v) and (u2, v2) not in d:
                        d.add((u2, v2))
                        changed = True
    return frozenset(d)


def coproduct(f, g, cap=None):
    """Frame coproduct computed as the suplattice tensor product.

    Elements are the downsets of f × g closed under coordinatewise joins.
    Returns (tensor, inj1, inj2, rect) with the two coproduct injections and
    the basic-rectangle map rect(u, v) = u ⊕ v.
    """
    cap = cap if cap is not None else DEFAULT.coproduct_cap
    if len(f.elements) * len(g.elements) > cap:
        raise CapExceeded("coproduct carrier",
                          len(f.elements) * len(g.elements), cap)

    def rect_downset(u, v):
        return _tensor_saturate(f, g, {(u, v)})

    rects = {}
    for u in f.elements:
        for v in g.elements:
            rects[u, v] = rect_downset(u, v)
    bottom = _tensor_saturate(f, g, set())
    elems = {bottom} | set(rects.values())
    frontier = sorted(elems, key=sort_key)
    join_memo = {}

    def join(a, b):
        u = a | b
        if u in elems:
            return u
        if u not in join_memo:
            join_memo[u] = _tensor_saturate(f, g, u)
        return join_memo[u]

    while frontier:
        new = set()
        for a in frontier:
            for b in elems:
                j = join(a, b)
                if j not in elems and j not in new:
                    new.add(j)
        elems |= new
        frontier = sorted(new, key=sort_key)

    tensor = frame_from_order(elems, lambda a, b: a <= b,
                              lambda a, b: a & b, join)
    inj1 = FrameHom(f, tensor, {u: rects[u, g.top] for u in f.elements})
    inj2 = FrameHom(g, tensor, {v: rects[f.top, v] for v in g.elements})

    def rect(u, v):
        return rects[u, v]

    return tensor, inj1, inj2, rect


# --- Hausdorff ----------------------------------------------------------------

def diagonal_hom(f, cap=None):
    """The codiagonal u ⊕ v ↦ u ∧ v from f ⊕ f to f."""
    tensor, inj1, inj2, rect = coproduct(f, f, cap=cap)
    mapping = {d: f.join_all(f.meet(u, v) for (u, v) in sorted(d, key=sort_key))
               for d in tensor.elements}
    return tensor, FrameHom(tensor, f, mapping)


def is_hausdorff(f, cap=None):
    """Search f ⊕ f for a closed-diagonal witness. Returns (bool, witness)."""
    tensor, delta = diagonal_hom(f, cap=cap)
    kernel = Congruence.from_map(tensor, delta)
    for d in tensor.elements:
        if closed_congruence(tensor, d).classes == kernel.classes:
            return True, d
    return False, None


def has_open_diagonal(f, cap=None):
    tensor, delta = diagonal_hom(f, cap=cap)
    kernel = Congruence.from_map(tensor, delta)
    return any(open_congruence(tensor, d).classes == kernel.classes
               for d in tensor.elements)


# --- positivity / compactness --------------------------------------------------

def is_positive(f, u, scan_cap=None):
    """u is positive when every cover of it is inhabited.

    Checked literally by scanning all subsets when the frame is small; for
    larger frames this is provably equivalent to u ≠ bottom, which is used
    as the fallback.
    """
    if u not in f._index:
        raise PointfreeError(f"unknown element {u!r}")
    scan_cap = scan_cap if scan_cap is not None else DEFAULT.positivity_scan_cap
    if len(f.elements) <= scan_cap:
        for n in range(len(f.elements) + 1):
            for s in combinations(f.elements, n):
                if f.le(u, f.join_all(s)) and not s:
                    return False
        return True
    return u != f.bottom


def positivity_base(f, scan_cap=None):
    """All positive elements; asserts every element is a join of them."""
    base = [u for u in f.elements if is_positive(f, u, scan_cap=scan_cap)]
    for u in f.elements:
        below = [b for b in base if f.le(b, u)]
        if f.join_all(below) != u:
            raise PointfreeError(f"{u!r} is not a join of positive elements")
    return base


def finite_subcover(f, s):
    """Minimal-cardinality subcover of a cover of top."""
    s = sorted(set(s), key=sort_key)
    if f.join_all(s) != f.top:
        raise NotACover("subset does not cover top")
    # greedy pass gives an upper bound for the exact search
    greedy = []
    current = f.bottom
    remaining = list(s)
    while current != f.top:
        best = max(remaining,
                   key=lambda x: len([e for e in f.elements
                                      if f.le(e, f.join(current, x))]))
        remaining.remove(best)
        greedy.append(best)
        current = f.join(current, best)
    for k in range(1, len(greedy) + 1):
        for combo in combinations(s, k):
            if f.join_all(combo) == f.top:
                return KFinSet(combo)
    raise NotACover("unreachable: greedy found a subcover")  # pragma: no cover


def is_compact_presentation(p, cap=None, scan_cap=None, samples=200):
    """Compactness certificate for a (finitary) presentation.

    Every cover rule here has a finite right side, which is the hypothesis
    guaranteeing compactness; the certificate records that.  A verification
    pass additionally checks directed-cover inaccessibility of top on the
    enumerated frame: exhaustively over all subsets for small frames, and on
    deterministic pseudo-random join-closed covers otherwise.
    """
    p = stabilize(p, cap=cap)
    report = {"compact": True, "certificate": "all covers finitary"}
    scan_cap = (scan_cap if scan_cap is not None
                else DEFAULT.directed_scan_cap)
    try:
        frame, _ = enumerate_frame(p, cap=cap)
    except CapExceeded:
        report["verification"] = "skipped"
        report["verified"] = False
        return report
    elems = frame.elements
    if 2 ** len(elems) <= 2 ** 12:
        for n in range(1, len(elems) + 1):
            for s in combinations(elems, n):
                if _directed(frame, s) and frame.join_all(s) == frame.top:
                    if frame.top not in s:
                        report["compact"] = False
                        report["verification"] = "exhaustive"
                        report["verified"] = False
                        return report
        report["verification"] = "exhaustive"
    else:
        rng = random.Random(0)
        for _ in range(samples):
            s = {e for e in elems if rng.random() < 0.5}
            s = _directify(frame, s)
            if frame.join_all(s) == frame.top and frame.top not in s:
                report["compact"] = False
                report["verification"] = "sampled"
                report["verified"] = False
                return report
        report["verification"] = "sampled"
    report["verified"] = True
    return report


def _directed(f, s):
    s = list(s)
    if not s:
        return False
    return all(any(f.le(a, c) and f.le(b, c) for c in s)
               for a in s for b in s)


def _directify(f, s):
    """Close a subset under binary joins (yielding a directed set with the
    same join) without changing whether it covers top."""
    out = set(s) or {f.bottom}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                j = f.join(a, b)
                if j not in out:
                    out.add(j)
                    changed = True
    return out


# --- open / closed maps --------------------------------------------------------

def check_open_map(h):
    """Frobenius check for the left adjoint: h_!(h(b) ∧ a) = b ∧ h_!(a)."""
    adj = {a: h.left_adjoint(a) for a in h.target.elements}
    for a in h.target.elements:
        for b in h.source.elements:
            lhs = adj[h.target.meet(h(b), a)]
            rhs = h.source.meet(b, adj[a])
            if lhs != rhs:
                return False
    return True


def check_closed_map(h):
    """Frobenius check for the right adjoint: h_*(h(b) ∨ a) = b ∨ h_*(a)."""
    adj = {a: h.right_adjoint(a) for a in h.target.elements}
    for a in h.target.elements:
        for b in h.source.elements:
            lhs = adj[h.target.join(h(b), a)]
            rhs = h.source.join(b, adj[a])
            if lhs != rhs:
                return False
    return True
