"""Exact rational intervals, open subsets of the line, and a total
piecewise-polynomial expression language with interval evaluation.

Everything is computed in arbitrary-precision rationals; there is no
floating point anywhere in this module.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PointfreeError


# --- rationals ----------------------------------------------------------------

def parse_rat(text):
    """Exact rational from `3/7`, `-2`, or decimal `0.25` notation."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}: {exc}")


def rat_str(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_decimal(q, digits):
    """Decimal approximation to `digits` places (round half away from zero)."""
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q * 10 ** digits
    n = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        n += 1
    whole, frac = divmod(n, 10 ** digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


# --- intervals ----------------------------------------------------------------

@dataclass(frozen=True)
class RatInterval:
    """Rational interval; lo = None means -oo and hi = None means +oo.

    Used both for the open subbasic intervals of the line and, with finite
    endpoints, as the closed boxes of interval evaluation; point boxes
    (lo == hi) are legal only in evaluation contexts and answer True to
    is_point.
    """

    lo: object  # Fraction or None
    hi: object  # Fraction or None

    def __post_init__(self):
        for end in (self.lo, self.hi):
            if end is not None and not isinstance(end, Fraction):
                raise PointfreeError(f"interval endpoint {end!r} not rational")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise PointfreeError("interval with lo > hi")

    @property
    def is_point(self):
        return self.lo is not None and self.lo == self.hi

    @property
    def finite(self):
        return self.lo is not None and self.hi is not None

    @property
    def width(self):
        if not self.finite:
            raise PointfreeError("width of an unbounded interval")
        return self.hi - self.lo

    def midpoint(self):
        if not self.finite:
            raise PointfreeError("midpoint of an unbounded interval")
        return (self.lo + self.hi) / 2

    def __str__(self):
        lo = "-oo" if self.lo is None else rat_str(self.lo)
        hi = "+oo" if self.hi is None else rat_str(self.hi)
        return f"({lo},{hi})"


def interval(lo, hi):
    conv = lambda v: None if v is None else Fraction(v)
    return RatInterval(conv(lo), conv(hi))


def _lo_key(i):
    return (0,) if i.lo is None else (1, i.lo)


@dataclass(frozen=True)
class ROpen:
    """Canonical finite union of disjoint open rational intervals."""

    components: tuple

    def __post_init__(self):
        for c in self.components:
            if not isinstance(c, RatInterval):
                raise PointfreeError("components must be RatIntervals")
            if c.lo is not None and c.hi is not None and c.lo >= c.hi:
                raise PointfreeError("open component needs lo < hi")
        for a, b in zip(self.components, self.components[1:]):
            if a.hi is None or b.lo is None or b.lo < a.hi:
                raise PointfreeError("components not disjoint and sorted")

    @classmethod
    def of(cls, *pairs):
        return ropen_canon(interval(lo, hi) for lo, hi in pairs)

    def __str__(self):
        if not self.components:
            return "0"
        return " u ".join(str(c) for c in self.components)


ROPEN_BOTTOM = ROpen(())
ROPEN_TOP = ROpen((RatInterval(None, None),))


def ropen_canon(intervals):
    """Canonical form: drop empties, sort, merge overlapping components.

    Components touching only at a point (like (0,1) and (1,2)) stay separate:
    these are open sets and the touching point is absent from both.
    """
    items = [c for c in intervals
             if c.lo is None or c.hi is None or c.lo < c.hi]
    items.sort(key=_lo_key)
    out = []
    for c in items:
        if out:
            last = out[-1]
            # overlap (not mere touching): c.lo < last.hi, with None = -inf
            if last.hi is None or c.lo is None or c.lo < last.hi:
                hi = (None if last.hi is None or c.hi is None
                      else max(last.hi, c.hi))
                out[-1] = RatInterval(last.lo, hi)
                continue
        out.append(c)
    return ROpen(tuple(out))


def ropen_join(a, b):
    return ropen_canon(a.components + b.components)


def ropen_meet(a, b):
    pieces = []
    for x in a.components:
        for y in b.components:
            lo = y.lo if x.lo is None else (
                x.lo if y.lo is None else max(x.lo, y.lo))
            hi = y.hi if x.hi is None else (
                x.hi if y.hi is None else min(x.hi, y.hi))
            if lo is None or hi is None or lo < hi:
                pieces.append(RatInterval(lo, hi))
    return ropen_canon(pieces)


# --- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __str__(self):
        return rat_str(self.value)


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * min max
    a: object
    b: object

    def __str__(self):
        if self.op in ("min", "max"):
            return f"{self.op}({self.a}, {self.b})"
        return f"({self.a} {self.op} {self.b})"


@dataclass(frozen=True)
class Abs:
    a: object

    def __str__(self):
        return f"abs({self.a})"


@dataclass(frozen=True)
class Pow:
    a: object
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise PointfreeError("power exponent must be a natural number")

    def __str__(self):
        return f"{self.a}^{self.k}"


@dataclass(frozen=True)
class Neg:
    a: object

    def __str__(self):
        return f"(-{self.a})"


def eval_point(e, x):
    """Exact value of the expression at a rational point."""
    x = Fraction(x)
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        return -eval_point(e.a, x)
    if isinstance(e, Abs):
        return abs(eval_point(e.a, x))
    if isinstance(e, Pow):
        return eval_point(e.a, x) ** e.k
    a, b = eval_point(e.a, x), eval_point(e.b, x)
    return {"+": a + b, "-": a - b, "*": a * b,
            "min": min(a, b), "max": max(a, b)}[e.op]


def eval_interval(e, box):
    """Sound enclosure of the expression's range over a finite closed box;
    exact (width 0) on point boxes."""
    if not box.finite:
        raise PointfreeError("interval evaluation needs a finite box")
    return RatInterval(*_ieval(e, box.lo, box.hi))


def _ieval(e, lo, hi):
    if isinstance(e, Var):
        return lo, hi
    if isinstance(e, Const):
        return e.value, e.value
    if isinstance(e, Neg):
        a, b = _ieval(e.a, lo, hi)
        return -b, -a
    if isinstance(e, Abs):
        a, b = _ieval(e.a, lo, hi)
        if a >= 0:
            return a, b
        if b <= 0:
            return -b, -a
        return Fraction(0), max(-a, b)
    if isinstance(e, Pow):
        a, b = _ieval(e.a, lo, hi)
        if e.k % 2 == 1 or a >= 0:
            return a ** e.k, b ** e.k
        if b <= 0:
            return b ** e.k, a ** e.k
        return Fraction(0), max(-a, b) ** e.k
    al, ah = _ieval(e.a, lo, hi)
    bl, bh = _ieval(e.b, lo, hi)
    if e.op == "+":
        return al + bl, ah + bh
    if e.op == "-":
        return al - bh, ah - bl
    if e.op == "*":
        prods = (al * bl, al * bh, ah * bl, ah * bh)
        return min(prods), max(prods)
    if e.op == "min":
        return min(al, bl), min(ah, bh)
    if e.op == "max":
        return max(al, bl), max(ah, bh)
    raise PointfreeError(f"unknown operator {e.op!r}")  # pragma: no cover


# --- expression parser --------------------------------------------------------

_EXPR_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[()+\-*^,/])
  | (?P<bad>.)
""", re.VERBOSE)


class _ExprParser:
    def __init__(self, text):
        self.toks = []
        for m in _EXPR_TOKEN.finditer(text):
            if m.lastgroup == "bad":
                raise ParseError(f"unexpected character {m.group()!r} "
                                 f"in expression", col=m.start() + 1)
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), m.start() + 1))
        self.toks.append(("eof", "", len(text) + 1))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        kind, s, col = self.next()
        if s != text:
            raise ParseError(f"expected {text!r}, found {s or 'end'!r}",
                             col=col)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] == "*":
            self.next()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        if self.peek()[1] == "-":
            self.next()
            return Neg(self.factor())
        node = self.primary()
        while self.peek()[1] == "^":
            self.next()
            kind, s, col = self.next()
            if kind != "num" or "." in s:
                raise ParseError("power exponent must be a natural number",
                                 col=col)
            node = Pow(node, int(s))
        return node

    def primary(self):
        kind, s, col = self.next()
        if kind == "num":
            if self.peek()[1] == "/":
                if "." in s:
                    raise ParseError("rational literal must be integer/integer",
                                     col=col)
                self.next()
                k2, s2, c2 = self.next()
                if k2 != "num" or "." in s2:
                    raise ParseError("rational literal must be integer/integer",
                                     col=c2)
                if int(s2) == 0:
                    raise ParseError("zero denominator", col=c2)
                return Const(Fraction(int(s), int(s2)))
            return Const(parse_rat(s))
        if s == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if s == "x":
                return Var()
            if s in ("min", "max"):
                self.expect("(")
                a = self.expr()
                self.expect(",")
                b = self.expr()
                self.expect(")")
                return BinOp(s, a, b)
            if s == "abs":
                self.expect("(")
                a = self.expr()
                self.expect(")")
                return Abs(a)
            raise ParseError(f"unknown name {s!r} in expression", col=col)
        raise ParseError(f"unexpected token {s or 'end'!r} in expression",
                         col=col)


def parse_expr(text):
    p = _ExprParser(text)
    node = p.expr()
    kind, s, col = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {s!r} in expression", col=col)
    return node


# --- domains ------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Nonempty finite union of disjoint closed rational intervals, sorted."""

    components: tuple  # RatIntervals with finite endpoints, lo <= hi

    def __post_init__(self):
        if not self.components:
            raise PointfreeError("domain must be nonempty")
        for c in self.components:
            if not c.finite:
                raise PointfreeError("domain components must be bounded")
        for a, b in zip(self.components, self.components[1:]):
            if b.lo <= a.hi:
                raise PointfreeError("domain components must be disjoint "
                                     "and sorted")

    def __str__(self):
        return " u ".join(f"[{rat_str(c.lo)},{rat_str(c.hi)}]"
                          for c in self.components)


def domain_of(*pairs):
    """Domain from (lo, hi) pairs, merging touching or overlapping pieces."""
    items = sorted((interval(lo, hi) for lo, hi in pairs),
                   key=lambda c: c.lo)
    if not items:
        raise PointfreeError("domain must be nonempty")
    out = [items[0]]
    for c in items[1:]:
        if c.lo <= out[-1].hi:
            out[-1] = RatInterval(out[-1].lo, max(out[-1].hi, c.hi))
        else:
            out.append(c)
    return Domain(tuple(out))


_DOMAIN_RE = re.compile(
    r"\s*\[\s*(-?[0-9./]+)\s*,\s*(-?[0-9./]+)\s*\]\s*")


def parse_domain(text):
    """Parse `[0,1]` or `[0,1] u [2,3]` with exact rational endpoints."""
    parts = re.split(r"\bu\b", text)
    pairs = []
    for part in parts:
        m = _DOMAIN_RE.fullmatch(part)
        if not m:
            raise ParseError(f"bad domain component {part.strip()!r}")
        lo, hi = parse_rat(m.group(1)), parse_rat(m.group(2))
        if lo > hi:
            raise ParseError(f"domain component with lo > hi: {part.strip()!r}")
        pairs.append((lo, hi))
    return domain_of(*pairs)
