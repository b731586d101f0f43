"""Finitely presented frames with decidable order.

A presentation consists of generator names and cover rules c <= \\/T where
c is a formal meet (a subset of the generators; the empty subset is the top
formal meet) and T is a finite set of formal meets.  After meet-stabilizing
the rules, the elements of the presented frame are exactly the saturated
downsets of formal meets (C-ideals), on which order, meet, join and Heyting
implication are all decidable.
"""

from dataclasses import dataclass, field
from itertools import chain, combinations

from .config import DEFAULT
from .errors import CapExceeded, MixedPresentations, ParseError


TOP_MEET = frozenset()


def meet_key(m):
    return (len(m), tuple(sorted(m)))


def meet_str(m):
    return "top" if not m else " & ".join(sorted(m))


def cideal_key(members):
    return (len(members), tuple(sorted(members, key=meet_key)))


@dataclass(frozen=True)
class FramePresentation:
    """Generators plus cover rules lhs <= \\/rhs, optionally meet-stabilized."""

    generators: tuple
    covers: frozenset  # pairs (lhs: frozenset, rhs: frozenset of frozensets)
    stabilized: bool = False

    def __post_init__(self):
        gens = set(self.generators)
        for lhs, rhs in self.covers:
            if not lhs <= gens or not all(t <= gens for t in rhs):
                raise ParseError("cover rule mentions undeclared generator")

    @classmethod
    def make(cls, generators, covers):
        gens = tuple(sorted(set(generators)))
        rules = frozenset((frozenset(lhs), frozenset(frozenset(t) for t in rhs))
                          for lhs, rhs in covers)
        return cls(gens, rules)

    def all_meets(self):
        gs = self.generators
        return [frozenset(c) for n in range(len(gs) + 1)
                for c in combinations(gs, n)]


def stabilize(p, cap=None):
    """Meet-stabilize: close the rules under meeting both sides with every
    formal meet.  Idempotent; required by all C-ideal operations."""
    cap = cap if cap is not None else DEFAULT.generator_cap
    if len(p.generators) > cap:
        raise CapExceeded("generators", len(p.generators), cap)
    if p.stabilized:
        return p
    rules = set(p.covers)
    for u in p.all_meets():
        for lhs, rhs in p.covers:
            rules.add((u | lhs, frozenset(u | t for t in rhs)))
    return FramePresentation(p.generators, frozenset(rules), stabilized=True)


@dataclass(frozen=True)
class CIdeal:
    """One element of a presented frame: a saturated downset of formal meets.

    Downward closed means closed under adding generators to a meet; saturated
    means every stabilized cover whose right side lies inside also has its
    left side inside.
    """

    presentation: FramePresentation
    members: frozenset

    def __le__(self, other):
        _same(self, other)
        return self.members <= other.members

    def __and__(self, other):
        _same(self, other)
        return CIdeal(self.presentation, self.members & other.members)

    def __or__(self, other):
        _same(self, other)
        return saturate(self.presentation, self.members | other.members)

    def __str__(self):
        return "{" + ", ".join(meet_str(m) for m in
                               sorted(self.members, key=meet_key)) + "}"


def _same(a, b):
    if a.presentation is not b.presentation and a.presentation != b.presentation:
        raise MixedPresentations("C-ideals come from different presentations")


def _down_close(p, meets):
    gens = p.generators
    out = set()
    frontier = list(meets)
    while frontier:
        m = frontier.pop()
        if m in out:
            continue
        out.add(m)
        for g in gens:
            if g not in m:
                frontier.append(m | {g})
    return out


def saturate(p, seed):
    """Least C-ideal containing the given formal meets (a closure operator)."""
    if not p.stabilized:
        raise ParseError("presentation must be stabilized before saturation")
    members = _down_close(p, seed)
    changed = True
    while changed:
        changed = False
        for lhs, rhs in p.covers:
            if lhs not in members and rhs <= members:
                members |= _down_close(p, [lhs])
                changed = True
    return CIdeal(p, frozenset(members))


def cideal_bottom(p):
    return saturate(p, [])


def cideal_top(p):
    return saturate(p, [TOP_MEET])


def cideal_leq(a, b):
    return a <= b


def cideal_meet(a, b):
    return a & b


def cideal_join(s):
    s = list(s)
    if not s:
        raise MixedPresentations("empty join needs an explicit presentation")
    p = s[0].presentation
    members = set()
    for c in s:
        _same(s[0], c)
        members |= c.members
    return saturate(p, members)


def cideal_heyting(a, b):
    """Heyting implication {g | ↓g ∩ a ⊆ b}; satisfies the meet adjunction."""
    _same(a, b)
    p = a.presentation
    members = set()
    for g in p.all_meets():
        down_g = _down_close(p, [g])
        if down_g & a.members <= b.members:
            members.add(g)
    return CIdeal(p, frozenset(members))


def generator_image(p, name):
    """The frame element corresponding to one generator."""
    if name not in p.generators:
        raise ParseError(f"unknown generator {name!r}")
    return saturate(p, [frozenset([name])])


def check_positivity_certificate(p, positives):
    """Verify a set of candidate positive formal meets for overtness.

    Conditions: (i) upward closed in the formal-meet order (dropping
    generators from a positive meet stays positive); (ii) every cover with a
    positive left side has a positive right member; (iii) every formal meet
    outside the set saturates to bottom.
    """
    if not p.stabilized:
        raise ParseError("presentation must be stabilized")
    positives = {frozenset(m) for m in positives}
    all_meets = set(p.all_meets())
    if not positives <= all_meets:
        raise ParseError("candidate set mentions unknown formal meets")
    # (i) upward closed: formal-meet order is reverse inclusion
    for m in positives:
        for sub in map(frozenset, chain.from_iterable(
                combinations(m, n) for n in range(len(m)))):
            if sub not in positives:
                return False
    # (ii) positive left sides need an inhabited positive right side
    for lhs, rhs in p.covers:
        if lhs in positives and not (rhs & positives):
            return False
    # (iii) non-candidates must be bottom
    bottom = cideal_bottom(p)
    for m in all_meets - positives:
        if saturate(p, [m]).members != bottom.members:
            return False
    return True


# --- text format ------------------------------------------------------------

def parse_presentation_text(text):
    """Parse the line format: `gen a b`, `rel a & b <= c | d`, `rel top <= a`,
    `rel a <= bot`.  Returns an unstabilized FramePresentation."""
    gens = []
    covers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gen "):
            gens.extend(line[4:].split())
        elif line.startswith("rel "):
            body = line[4:]
            if "<=" not in body:
                raise ParseError("relation needs '<='", line=lineno)
            lhs_s, rhs_s = body.split("<=", 1)
            lhs = _parse_meet(lhs_s, lineno)
            rhs_s = rhs_s.strip()
            if rhs_s == "bot":
                rhs = frozenset()
            else:
                rhs = frozenset(_parse_meet(part, lineno)
                                for part in rhs_s.split("|"))
            covers.append((lhs, rhs))
        else:
            raise ParseError(f"unknown directive {line.split()[0]!r}", line=lineno)
    return FramePresentation.make(gens, covers)


def _parse_meet(text, lineno):
    text = text.strip()
    if text == "top":
        return TOP_MEET
    names = [part.strip() for part in text.split("&")]
    if any(not n or not n.replace("_", "").isalnum() for n in names):
        raise ParseError(f"bad formal meet {text!r}", line=lineno)
    return frozenset(names)


def presentation_text(p):
    lines = ["gen " + " ".join(p.generators)]
    for lhs, rhs in sorted(p.covers, key=lambda c: (meet_key(c[0]),
                                                    cideal_key(c[1]))):
        rhs_s = "bot" if not rhs else " | ".join(
            meet_str(t) for t in sorted(rhs, key=meet_key))
        lines.append(f"rel {meet_str(lhs)} <= {rhs_s}")
    return "\n".join(lines) + "\n"
