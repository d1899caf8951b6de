"""Exact L^p -> L^q boundedness and compactness of K_alpha on the unit ball.

Everything is decided on the reciprocal pair (x, y) = (1/p, 1/q) in the unit
square E with rational arithmetic, so strict and non-strict inequalities
are honoured exactly.  With D = d + 1 and x_T = 1 - alpha/D the regions are

* alpha <= 0: all of E.
* 0 < alpha <= D: x < x_T; or x = x_T, y > 0; or x_T < x < 1,
  y >= x + alpha/D - 1; or x = 1, y > alpha/D.  Compactness is the same set
  with the middle inequality strict.
* D < alpha < D + 1: y > x + alpha - D (bounded and compact coincide).
* alpha >= D + 1: empty.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .kernel_integrals import Params

AMBIGUITY_TOL = 1e-12
ZERO = Fraction(0)
ONE = Fraction(1)


def parse_exponent(value):
    """Return 1/p as a Fraction from p given as 'inf', 'a/b', a decimal or a number."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in {"inf", "infinity", "∞", "oo"}:
            return ZERO
        try:
            p = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot read exponent {value!r}") from exc
    elif isinstance(value, float) and math.isinf(value):
        return ZERO
    elif isinstance(value, float):
        p = Fraction(repr(value))
    else:
        p = Fraction(value)
    if p < 1:
        raise DomainError(f"exponent must be >= 1, got {value}")
    return 1 / p


@dataclass(frozen=True)
class ExponentPair:
    """(1/p, 1/q) as exact rationals in [0, 1]; 0 encodes the exponent infinity."""

    inv_p: Fraction
    inv_q: Fraction

    def __post_init__(self):
        for name in ("inv_p", "inv_q"):
            v = Fraction(getattr(self, name))
            if not ZERO <= v <= ONE:
                raise DomainError(f"{name} = {v} outside [0, 1]")
            object.__setattr__(self, name, v)

    @classmethod
    def from_pq(cls, p, q):
        return cls(parse_exponent(p), parse_exponent(q))

    @property
    def p(self):
        return math.inf if self.inv_p == 0 else float(1 / self.inv_p)

    @property
    def q(self):
        return math.inf if self.inv_q == 0 else float(1 / self.inv_q)

    @property
    def p_conj(self):
        return math.inf if self.inv_p == 1 else float(1 / (1 - self.inv_p))

    @property
    def q_conj(self):
        return math.inf if self.inv_q == 1 else float(1 / (1 - self.inv_q))

    def conjugate(self):
        """The pair for the adjoint map L^{q'} -> L^{p'}: (1 - 1/q, 1 - 1/p)."""
        return ExponentPair(1 - self.inv_q, 1 - self.inv_p)

    def label(self):
        def fmt(inv):
            if inv == 0:
                return "inf"
            v = 1 / inv
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return fmt(self.inv_p), fmt(self.inv_q)


@dataclass(frozen=True)
class Verdict:
    bounded: bool
    compact: bool
    clause: str
    compact_clause: str = ""

    def as_dict(self):
        return {"bounded": self.bounded, "compact": self.compact, "clause": self.clause,
                "compact_clause": self.compact_clause}


def _decide(alpha, D, x, y):
    """Core decision on exact rationals; returns (bounded, compact, clause, compact_clause)."""
    if alpha <= 0:
        return True, True, "Cor-gke", "Cor-gke"
    if alpha >= D + 1:
        return False, False, "Thm4", "Thm4"
    if alpha > D:
        if y > x + alpha - D:
            clause = "Thm1(4a)" if x > 0 else "Thm1(4b)"
            return True, True, clause, "Thm1(3)"
        if x == 0:
            clause = "Lem-kiq"
        elif y == 1:
            clause = "Cor-kp1"
        else:
            clause = "Lem-pqu"
        return False, False, clause, clause

    x_t = 1 - alpha / D
    line = x + alpha / D - 1
    if x == 1:
        if y > alpha / D:
            return True, True, "Thm2(3a)", "Thm3(2a)"
        return False, False, "Lem-ld1", "Lem-ld1"
    if x < x_t:
        return True, True, "Thm2(3d)", "Thm3(2d)"
    if x == x_t:
        if y > 0:
            if alpha == D:
                # p = inf, q < inf for the Bergman projection
                return True, True, "Prop-akpqq", "Prop-akpqq"
            return True, True, "Thm2(3c)", "Thm3(2c)"
        return False, False, "Lem-kllq", "Lem-kllq"
    if y >= line:
        if y > line:
            clause_c = "Prop-akpqq" if alpha == D else "Thm3(2b)"
            return True, True, "Thm2(3b)", clause_c
        return True, False, "Thm2(3b)", "Thm3(2b)-equality"
    clause = "Lem-kllq" if y == 0 else "Lem-lpq"
    return False, False, clause, clause


def _near_boundary(alpha, D, x, y):
    """True when a float alpha sits within AMBIGUITY_TOL of a decisive boundary."""
    a, x, y = float(alpha), float(x), float(y)
    gaps = [a, a - D, a - D - 1]
    if 0 < a < D + 1:
        gaps += [y - (x + a - D), x - (1 - a / D), y - (x + a / D - 1), y - a / D]
    return any(abs(g) < AMBIGUITY_TOL for g in gaps)


def classify(params, e):
    """Boundedness and compactness of K_alpha (equivalently K_alpha^+) from L^p to L^q."""
    alpha = params.exact_alpha
    bounded, compact, clause, compact_clause = _decide(alpha, Fraction(params.D), e.inv_p, e.inv_q)
    if params.alpha_is_float and _near_boundary(alpha, params.D, e.inv_p, e.inv_q):
        clause += ";boundary-ambiguous"
    return Verdict(bounded, compact, clause, compact_clause)


def weak_type_exponent(params):
    """(d+1)/alpha: K_alpha maps L^1 into weak L^{(d+1)/alpha}."""
    alpha = params.exact_alpha
    if not 0 < alpha <= params.D:
        raise DomainError("weak type exponent needs 0 < alpha <= d + 1")
    return Fraction(params.D) / alpha


def witness_membership(params, t, p):
    """Whether f_t(z) = sum n^t z_1^n lies in L^p(B^d): p (t + 1) < d + 1 (p finite)."""
    p = float(p)
    if p < 1:
        raise DomainError("p must be >= 1")
    if math.isinf(p):
        return t < -1
    return p * (t + 1) < params.D


# ---------------------------------------------------------------------------
# Type diagram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    start: tuple
    end: tuple
    closed: bool  # whether the open segment between the endpoints belongs to the region


@dataclass(frozen=True)
class Polygon:
    vertices: tuple  # ((x, y), included) pairs, exact Fractions
    edges: tuple

    @property
    def empty(self):
        return not self.vertices


@dataclass
class DiagramRegion:
    params: Params
    resolution: int
    grid: list = field(default_factory=list)  # (inv_p, inv_q, Verdict)
    bounded: Polygon = None
    compact: Polygon = None

    def mask(self, which="bounded"):
        n = self.resolution + 1
        out = np.zeros((n, n), dtype=bool)
        for i, (_, _, v) in enumerate(self.grid):
            out[i // n, i % n] = getattr(v, which)
        return out


def _polygon(points, included, closed_edges):
    verts = tuple((pt, inc) for pt, inc in zip(points, included))
    edges = tuple(Edge(points[i], points[(i + 1) % len(points)], closed_edges[i])
                  for i in range(len(points)))
    return Polygon(verts, edges)


def region_polygons(params):
    """Exact boundary polygons (bounded, compact) with open/closed flags."""
    alpha = params.exact_alpha
    D = Fraction(params.D)
    empty = Polygon((), ())
    if alpha <= 0:
        sq = [(ZERO, ZERO), (ONE, ZERO), (ONE, ONE), (ZERO, ONE)]
        poly = _polygon(sq, [True] * 4, [True] * 4)
        return poly, poly
    if alpha >= D + 1:
        return empty, empty
    if alpha > D:
        pts = [(ZERO, alpha - D), (D + 1 - alpha, ONE), (ZERO, ONE)]
        poly = _polygon(pts, [False, False, True], [False, True, True])
        return poly, poly
    if alpha == D:
        pts = [(ZERO, ZERO), (ONE, ONE), (ZERO, ONE)]
        b = _polygon(pts, [False, False, True], [True, True, True])
        c = _polygon(pts, [False, False, True], [False, True, True])
        return b, c
    x_t = 1 - alpha / D
    pts = [(ZERO, ZERO), (x_t, ZERO), (ONE, alpha / D), (ONE, ONE), (ZERO, ONE)]
    inc = [True, False, False, True, True]
    b = _polygon(pts, inc, [True, True, True, True, True])
    c = _polygon(pts, inc, [True, False, True, True, True])
    return b, c


def diagram_region(params, resolution=64):
    """Verdicts on the (resolution+1)^2 grid of E plus the exact region polygons."""
    if resolution < 8:
        raise DomainError("resolution must be >= 8")
    region = DiagramRegion(params, int(resolution))
    for i in range(resolution + 1):
        for j in range(resolution + 1):
            e = ExponentPair(Fraction(i, resolution), Fraction(j, resolution))
            region.grid.append((e.inv_p, e.inv_q, classify(params, e)))
    region.bounded, region.compact = region_polygons(params)
    return region


__all__ = [
    "ExponentPair", "Verdict", "Edge", "Polygon", "DiagramRegion", "parse_exponent", "classify",
    "weak_type_exponent", "witness_membership", "region_polygons", "diagram_region",
]
