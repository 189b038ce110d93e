"""Level-5 Heisenberg symmetry: index-shift and scaling actions on P^4,
the involution, the 25 invariant lines, the six invariant quintics, and the
classical cubic/wedge maps attached to them.

Points are 5-tuples over GF(p); sigma shifts indices (e_i -> e_{i-1}), tau
scales by powers of the fixed fifth root of unity, iota reverses indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith
from .arith import FieldContext
from .poly import HomPoly, NVARS, monomial, normalize_point


class BaseLocus(ValueError):
    """The rational map is undefined here (all coordinates vanish)."""


# ---------------------------------------------------------------------------
# group elements and actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """scalar * sigma^a * tau^b * iota^eps, scalar a fifth root of unity."""

    a: int
    b: int
    scalar: int = 1
    with_iota: bool = False

    def act_point(self, fld: FieldContext, pt):
        return act_point(self, fld, pt)


def _sigma_pt(pt):
    return tuple(pt[(i + 1) % 5] for i in range(5))


def _tau_pt(fld: FieldContext, pt, power: int = 1):
    p, xi = fld.p, fld.xi5
    return tuple(pt[i] * pow(xi, (power * i) % 5, p) % p for i in range(5))


def _iota_pt(pt):
    return tuple(pt[(-i) % 5] for i in range(5))


def act_point(g: GroupElement, fld: FieldContext, pt):
    """Projective action; returns the normalized image point."""
    p = fld.p
    v = tuple(int(c) % p for c in pt)
    if g.with_iota:
        v = _iota_pt(v)
    if g.b % 5:
        v = _tau_pt(fld, v, g.b % 5)
    for _ in range(g.a % 5):
        v = _sigma_pt(v)
    if g.scalar % p != 1:
        v = tuple(c * (g.scalar % p) % p for c in v)
    return normalize_point(v, p)


def compose(fld: FieldContext, g: GroupElement, h: GroupElement) -> GroupElement:
    """g*h with the normal form scalar*sigma^a*tau^b*iota^eps.

    Uses tau^b sigma^c = xi^(-b*c) sigma^c tau^b and the iota conjugation
    rules iota*sigma = sigma^-1*iota, iota*tau = tau^-1*iota.
    """
    p, xi = fld.p, fld.xi5
    a2, b2 = h.a % 5, h.b % 5
    if g.with_iota:
        a2, b2 = (-a2) % 5, (-b2) % 5
    a = (g.a + a2) % 5
    b = (g.b + b2) % 5
    scal = g.scalar * h.scalar % p
    scal = scal * pow(xi, (-g.b * a2) % 5, p) % p
    return GroupElement(a, b, scal, g.with_iota ^ h.with_iota)


def inverse(fld: FieldContext, g: GroupElement) -> GroupElement:
    p, xi = fld.p, fld.xi5
    if not g.with_iota:
        # (sigma^a tau^b)^-1 = xi^(-ab) sigma^-a tau^-b
        scal = pow(g.scalar, -1, p) * pow(xi, (-g.a * g.b) % 5, p) % p
        return GroupElement((-g.a) % 5, (-g.b) % 5, scal, False)
    # g = s*sigma^a*tau^b*iota, g^2 central => g^-1 = g * (g^2)^-1
    sq = compose(fld, g, g)
    assert sq.a == 0 and sq.b == 0 and not sq.with_iota
    return GroupElement(g.a, g.b, g.scalar * pow(sq.scalar, -1, p) % p, True)


SIGMA = GroupElement(1, 0)
TAU = GroupElement(0, 1)
IOTA = GroupElement(0, 0, 1, True)


def act_poly(g: GroupElement, fld: FieldContext, f: HomPoly) -> HomPoly:
    """Dual action on polynomials: (g.f)(pt) = f(g^-1 . pt) exactly.

    The substitution mirrors act_point's application order (iota, then tau,
    then sigma, then the scalar), unwound from the outside in.
    """
    p, xi = fld.p, fld.xi5
    ginv = inverse(fld, g)
    terms = {}
    for m, c in f.terms.items():
        coef = c
        e = [m[(k - ginv.a) % 5] for k in range(5)]          # sigma^a
        if ginv.b % 5:
            w = sum(k * e[k] for k in range(5))              # tau^b scales
            coef = coef * pow(xi, (ginv.b * w) % 5, p) % p
        if ginv.with_iota:
            e = [e[(-k) % 5] for k in range(5)]              # iota reverses
        if ginv.scalar % p != 1:
            coef = coef * pow(ginv.scalar, f.degree, p) % p
        key = tuple(e)
        terms[key] = (terms.get(key, 0) + coef) % p
    return HomPoly(p, f.degree, terms)


def commutator_constant(fld: FieldContext) -> int:
    """c with sigma.tau = c * tau.sigma as linear maps; computed, not assumed."""
    p = fld.p
    probe = (1, 2, 3, 4, 5)
    st = _sigma_pt(_tau_pt(fld, probe))
    ts = _tau_pt(fld, _sigma_pt(probe))
    ratios = {st[i] * pow(int(ts[i]), -1, p) % p for i in range(5) if ts[i]}
    assert len(ratios) == 1
    return ratios.pop()


# ---------------------------------------------------------------------------
# eigenspace parametrizations
# ---------------------------------------------------------------------------

def p1minus_point(fld: FieldContext, lam: int, mu: int):
    p = fld.p
    lam, mu = lam % p, mu % p
    if lam == 0 and mu == 0:
        raise ValueError("(0,0) is not a projective parameter")
    return normalize_point((0, lam, mu, -mu, -lam), p)


def p2plus_point(fld: FieldContext, a: int, b: int, c: int):
    return normalize_point((a, b, c, c, b), fld.p)


def psi5(fld: FieldContext, lam: int, mu: int):
    """Tangency point of the ruling over (lam:mu) on the fixed conic."""
    p = fld.p
    return p2plus_point(fld, 2 * lam * mu % p, mu * mu % p, (-lam * lam) % p)


def conic_plus_value(fld: FieldContext, pt) -> int:
    """y0^2 + 4*y1*y2 on the iota-plane (plus the plane conditions)."""
    p = fld.p
    if (pt[1] - pt[4]) % p or (pt[2] - pt[3]) % p:
        return -1
    return (pt[0] * pt[0] + 4 * pt[1] * pt[2]) % p


def brings_sextic_value(fld: FieldContext, a: int, b: int, c: int) -> int:
    p = fld.p
    return (pow(a, 4, p) * b * c - a * a * b * b * c * c
            - a * (pow(b, 5, p) + pow(c, 5, p)) + 2 * pow(b, 3, p) * pow(c, 3, p)) % p


# ---------------------------------------------------------------------------
# invariant quintics
# ---------------------------------------------------------------------------

def _cyc(p: int, pattern) -> HomPoly:
    """Sum over i in Z5 of the cyclic shifts of one exponent pattern."""
    terms = {}
    for i in range(5):
        e = [0] * NVARS
        for off, ex in pattern:
            e[(i + off) % 5] += ex
        key = tuple(e)
        terms[key] = (terms.get(key, 0) + 1) % p
    return HomPoly(p, sum(ex for _, ex in pattern), terms)


@lru_cache(maxsize=None)
def gammas(fld: FieldContext):
    """The six invariant quintics, exactly as classically normalized."""
    p = fld.p
    prod_all = monomial(p, (1, 1, 1, 1, 1))
    g0 = prod_all.scale(5)
    g1 = _cyc(p, ((0, 1), (2, 2), (3, 2)))
    g2 = -_cyc(p, ((0, 3), (2, 1), (3, 1)))
    g3 = _cyc(p, ((0, 3), (1, 1), (4, 1)))
    g4 = -_cyc(p, ((0, 1), (1, 2), (4, 2)))
    g5 = _cyc(p, ((0, 5),)).scale(pow(5, -1, p)) - prod_all
    return (g0, g1, g2, g3, g4, g5)


# ---------------------------------------------------------------------------
# the 25 invariant lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HMLine:
    i: int
    j: int
    span: tuple  # two normalized points


@lru_cache(maxsize=None)
def hm_lines(fld: FieldContext):
    p = fld.p
    base = (p1minus_point(fld, 1, 0), p1minus_point(fld, 0, 1))
    lines = []
    for i in range(5):
        for j in range(5):
            g = GroupElement(i, j)
            lines.append(HMLine(i, j, tuple(act_point(g, fld, s) for s in base)))
    return tuple(lines)


def on_line(fld: FieldContext, pt, line: HMLine) -> bool:
    M = np.array([pt, line.span[0], line.span[1]], dtype=np.int64)
    return arith.rank(M, fld.p) == 2


def hm_line_membership(fld: FieldContext, pt):
    """The unique (i, j) whose line contains pt, or None."""
    pt = normalize_point(pt, fld.p)
    for line in hm_lines(fld):
        if on_line(fld, pt, line):
            return (line.i, line.j)
    return None


def line_points(fld: FieldContext, s1, s2):
    """All p+1 rational points on the line spanned by s1, s2."""
    p = fld.p
    pts = [normalize_point(s2, p)]
    for t in range(p):
        pts.append(normalize_point([(s1[k] + t * s2[k]) % p for k in range(5)], p))
    return pts


# ---------------------------------------------------------------------------
# the classical cubic and wedge maps
# ---------------------------------------------------------------------------

def v_plus(fld: FieldContext, pt):
    p = fld.p
    x = [int(c) % p for c in pt]
    z = [(x[(i + 2) % 5] * x[(i + 4) % 5] ** 2 - x[(i + 1) % 5] ** 2 * x[(i + 3) % 5]) % p
         for i in range(5)]
    if not any(z):
        raise BaseLocus("cubic map undefined: all five coordinates vanish")
    return normalize_point(z, p)


def v_minus(fld: FieldContext, pt):
    p = fld.p
    x = [int(c) % p for c in pt]
    z = [(x[(i + 1) % 5] * x[(i + 2) % 5] ** 2 - x[(i + 3) % 5] ** 2 * x[(i + 4) % 5]) % p
         for i in range(5)]
    if not any(z):
        raise BaseLocus("cubic map undefined: all five coordinates vanish")
    return normalize_point(z, p)


WEDGE_PAIRS = tuple((a, b) for a in range(5) for b in range(a + 1, 5))


def _wedge_vector(p: int, contributions):
    """contributions: iterable of (a, b, coeff) with a != b mod 5."""
    out = [0] * len(WEDGE_PAIRS)
    index = {pr: k for k, pr in enumerate(WEDGE_PAIRS)}
    for a, b, c in contributions:
        a, b = a % 5, b % 5
        if a < b:
            out[index[(a, b)]] = (out[index[(a, b)]] + c) % p
        else:
            out[index[(b, a)]] = (out[index[(b, a)]] - c) % p
    return tuple(v % p for v in out)


def f_plus(fld: FieldContext, pt):
    """Wedge coordinates of sum_i x_i e_{i+2} ^ e_{i+3}."""
    p = fld.p
    return _wedge_vector(p, ((i + 2, i + 3, int(pt[i]) % p) for i in range(5)))


def f_minus(fld: FieldContext, pt):
    """Wedge coordinates of sum_i x_i e_{i+1} ^ e_{i+4}."""
    p = fld.p
    return _wedge_vector(p, ((i + 1, i + 4, int(pt[i]) % p) for i in range(5)))
