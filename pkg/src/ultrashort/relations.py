"""Certified complex roots of g and the lattices of relations among them.

The pipeline for every relation kind is the same:

  1. detect candidate integer vectors with LLL on rows (e_i | scaled value
     columns) at an escalating scaling 2^B;
  2. certify each candidate exactly: ball arithmetic gives an enclosure of
     the candidate value, and a nonzero value is an algebraic integer whose
     conjugates are explicitly bounded, so its norm being a nonzero rational
     integer forces it away from 0 by a computable amount;
  3. saturate the certified sublattice (kernels of maps into torsion-free
     groups are saturated, so saturation never leaves the true module),
     re-certify the basis rows and reduce to row Hermite normal form;
  4. accept once the result is stable across two consecutive doublings of B.

Completeness is therefore asserted by stability, not by a proven height
bound; every reported basis vector is individually certified, and vectors
with sup-norm above the coefficient cap are simply not searched.  The
certificate attached to each module records all of this.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mpf, workprec
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from . import lattice
from .arith import IntPoly, LaurentPoly
from .balls import Ball, ball_sum, eval_laurent_ball, eval_poly_ball
from .errors import (
    PrecisionExhausted,
    VanishingValue,
    ZeroRoot,
    ZeroRootWithNegativeExponent,
)
from .lattice import SnfDecomposition
from .lattice import smith_normal_form as _snf_rows

LLL_DELTA = 0.99
DEFAULT_COEFF_CAP = 64
PRECISION_CAP_BITS = 1 << 20
_DETECTION_START_BITS = 96
_DETECTION_CAP_BITS = 1 << 14
_STABLE_DOUBLINGS = 2


def default_degree_bound(d: int) -> int:
    """d! is always a valid upper bound for [K_g : Q]."""
    return math.factorial(d)


# ---------------------------------------------------------------------------
# certified root boxes


@dataclass
class RootBox:
    """A disk certified to contain exactly one root of g."""

    center: object  # mpmath mpc
    radius: object  # mpmath mpf

    def ball(self) -> Ball:
        return Ball(self.center, self.radius)

    def as_complex(self) -> complex:
        return complex(self.center)


@dataclass
class CertifiedBoxList:
    """All d roots of g, as pairwise disjoint certified boxes.

    Boxes are sorted by (Re, Im) of the true roots; Re ties are decided by a
    certified equality test, so the order is stable under refinement.
    """

    poly: IntPoly
    precision_bits: int
    boxes: tuple[RootBox, ...]

    def balls(self) -> list[Ball]:
        return [b.ball() for b in self.boxes]

    def centers(self) -> list[complex]:
        return [b.as_complex() for b in self.boxes]

    def max_abs_upper(self) -> mpf:
        return max(b.ball().abs_upper() for b in self.boxes)


def _eval_poly(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@lru_cache(maxsize=None)
def _stable_base(g: IntPoly) -> tuple:
    """Root approximations anchoring the identity (index) of every root of g.

    The base precision escalates until a full disjointness certification
    succeeds once; afterwards every refinement Newton-iterates from these
    fixed starting points, so indices never change between precisions.
    """
    if g.degree == 1:
        return (mpmath.mpc(-g.coeffs[0]),)
    prec = 256
    while prec <= PRECISION_CAP_BITS:
        try:
            with workprec(prec):
                roots = mpmath.polyroots(
                    [1] + [int(c) for c in reversed(g.coeffs[:-1])],
                    maxsteps=400,
                    extraprec=prec,
                )
            base = tuple(mpmath.mpc(r) for r in roots)
            _certify_boxes(g, base, radius_bits=64)
            return base
        except (mpmath.libmp.NoConvergence, _CertificationFailed):
            prec *= 2
    raise PrecisionExhausted("cannot isolate the roots of g")


class _CertificationFailed(Exception):
    pass


def _certify_boxes(g: IntPoly, approx, radius_bits: int) -> tuple[RootBox, ...]:
    """Newton-refine fixed starting points and certify disjoint disks with
    radii <= 2^-radius_bits.

    The radius bound is the classical nearest-root estimate: g'(c)/g(c) is
    the sum of 1/(c - x_k), so some root lies within d*|g(c)/g'(c)| of c.
    With d pairwise disjoint disks each containing a root, every disk
    contains exactly one and together they exhaust the roots.
    """
    d = g.degree
    work = 2 * radius_bits + 16 * d + 96
    target = mpf(2) ** (-radius_bits)
    deriv = g.derivative_coeffs()
    steps = int(math.log2(max(radius_bits, 64))) + 8
    with workprec(work):
        zs = list(approx)
        if d > 1:
            for _ in range(steps):
                zs = [z - g(z) / _eval_poly(deriv, z) for z in zs]
        boxes = []
        for z in zs:
            gb = eval_poly_ball(g.coeffs, Ball(z))
            db = eval_poly_ball(deriv, Ball(z)) if d > 1 else Ball(1)
            low = db.abs_lower()
            if low <= 0:
                raise _CertificationFailed
            rho = d * gb.abs_upper() / low
            boxes.append(RootBox(z, rho))
        if any(b.radius > target for b in boxes):
            raise _CertificationFailed
        for i in range(d):
            for j in range(i + 1, d):
                if not boxes[i].ball().disjoint_from(boxes[j].ball()):
                    raise _CertificationFailed
    return tuple(boxes)


@lru_cache(maxsize=None)
def _boxes_at(g: IntPoly, radius_bits: int) -> tuple[RootBox, ...]:
    """Certified boxes in base order with radii <= 2^-radius_bits."""
    if radius_bits > PRECISION_CAP_BITS:
        raise PrecisionExhausted("root refinement beyond the precision cap")
    base = _stable_base(g)
    bits = radius_bits
    while bits <= PRECISION_CAP_BITS:
        try:
            return _certify_boxes(g, base, bits)
        except _CertificationFailed:
            bits *= 2
    raise PrecisionExhausted("cannot certify disjoint root boxes")


def _conjugation_pairing(boxes) -> list[int] | None:
    """pi with conj(x_i) = x_{pi(i)}, certified from box overlaps.

    conj(x_i) is itself a root (integer coefficients) and lies in the mirror
    of box i; if that mirror meets exactly one box the match is forced.
    Returns None while the boxes are too coarse.
    """
    d = len(boxes)
    pi = []
    for i in range(d):
        mirror = Ball(boxes[i].center.conjugate(), boxes[i].radius)
        hits = [j for j in range(d) if not mirror.disjoint_from(boxes[j].ball())]
        if len(hits) != 1:
            return None
        pi.append(hits[0])
    if any(pi[pi[i]] != i for i in range(d)):
        return None
    return pi


def _root_balls_factory(g: IntPoly):
    def mk(bits):
        return [b.ball() for b in _boxes_at(g, bits)]

    return mk


def _house_of(balls) -> mpf:
    m = max(b.abs_upper() for b in balls)
    return m if m > 1 else mpf(1)


def _real_parts_equal(g, i, j, pi, degree_bound) -> bool:
    """Certified Re(x_i) = Re(x_j), via the algebraic integer
    x_i + x_{pi(i)} - x_j - x_{pi(j)} = 2(Re x_i - Re x_j)."""
    alpha = [0] * g.degree
    alpha[i] += 1
    alpha[pi[i]] += 1
    alpha[j] -= 1
    alpha[pi[j]] -= 1
    if not any(alpha):
        return True  # conjugate partners share the real part exactly
    return _linear_zero_test(alpha, _root_balls_factory(g), _house_of, degree_bound)


def _try_order(g, boxes, pi, degree_bound):
    d = len(boxes)
    re_lo = [b.center.real - b.radius for b in boxes]
    re_hi = [b.center.real + b.radius for b in boxes]
    im_lo = [b.center.imag - b.radius for b in boxes]
    im_hi = [b.center.imag + b.radius for b in boxes]
    less: dict[tuple[int, int], bool] = {}
    for i in range(d):
        for j in range(i + 1, d):
            if re_hi[i] < re_lo[j]:
                less[i, j] = True
            elif re_hi[j] < re_lo[i]:
                less[i, j] = False
            elif _real_parts_equal(g, i, j, pi, degree_bound):
                if im_hi[i] < im_lo[j]:
                    less[i, j] = True
                elif im_hi[j] < im_lo[i]:
                    less[i, j] = False
                else:
                    return None  # equal Re, Im intervals not yet separated
            else:
                return None  # Re provably differ but intervals still overlap

    def cmp(i, j):
        if i == j:
            return 0
        flag = less[min(i, j), max(i, j)]
        if i < j:
            return -1 if flag else 1
        return 1 if flag else -1

    return tuple(sorted(range(d), key=functools.cmp_to_key(cmp)))


@lru_cache(maxsize=None)
def _order_map(g: IntPoly) -> tuple[int, ...]:
    """Permutation sending sorted positions to base indices, certified."""
    degree_bound = default_degree_bound(g.degree)
    bits = 128
    while bits <= PRECISION_CAP_BITS:
        boxes = _boxes_at(g, bits)
        pi = _conjugation_pairing(boxes)
        if pi is not None:
            order = _try_order(g, boxes, pi, degree_bound)
            if order is not None:
                return order
        bits *= 2
    raise PrecisionExhausted("cannot certify the lexicographic root order")


def certified_complex_roots(g: IntPoly, precision_bits: int) -> CertifiedBoxList:
    """All d roots of g as certified disjoint boxes, radii <= 2^(-precision_bits/2),
    sorted lexicographically by (Re, Im) of the true roots."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    order = _order_map(g)
    boxes = _boxes_at(g, precision_bits // 2 + 1)
    return CertifiedBoxList(g, precision_bits, tuple(boxes[i] for i in order))


# ---------------------------------------------------------------------------
# certified zero tests


def _linear_zero_test(alpha, make_balls, house_bound, degree_bound) -> bool:
    """Certified test of sum(alpha_i * y_i) = 0 for algebraic integers y_i.

    make_balls(bits) returns enclosing balls that shrink as bits grow;
    house_bound(balls) bounds |y| over all conjugates of all the y_i.  A
    nonzero sum is an algebraic integer with at most degree_bound conjugates,
    each of absolute value <= ||alpha||_1 * M, so a nonzero rational integer
    norm forces |sum| >= (||alpha||_1 * M)^-(degree_bound - 1).
    """
    a1 = sum(abs(int(a)) for a in alpha)
    if a1 == 0:
        return True
    bits = 192
    while bits <= PRECISION_CAP_BITS:
        with workprec(2 * bits + 64):
            try:
                balls = make_balls(bits)
                m = house_bound(balls)
                log2_l = -(degree_bound - 1) * mpmath.log(a1 * m, 2)
                lbound = mpf(2) ** log2_l
                s = ball_sum(b * int(a) for a, b in zip(alpha, balls) if a)
                if s.abs_lower() > 0:
                    return False
                if abs(s.center) <= s.radius and s.radius < lbound / 2:
                    return True
                needed = int(-log2_l) + 64
            except ZeroDivisionError:
                needed = 2 * bits
        bits = max(2 * bits, needed)
    raise PrecisionExhausted(
        f"zero test undecided below {PRECISION_CAP_BITS} bits (alpha={list(alpha)})"
    )


def gamma_is_zero(
    alpha, roots: CertifiedBoxList, degree_bound: int | None = None
) -> bool:
    """Certified test of sum(alpha_i * x_i) = 0 over the boxed roots."""
    g = roots.poly
    if len(alpha) != g.degree:
        raise ValueError("alpha must have one entry per root")
    if degree_bound is None:
        degree_bound = default_degree_bound(g.degree)
    order = _order_map(g)

    def mk(bits):
        boxes = _boxes_at(g, bits)
        return [boxes[i].ball() for i in order]

    return _linear_zero_test(alpha, mk, _house_of, degree_bound)


# ---------------------------------------------------------------------------
# relation modules


@dataclass(frozen=True)
class RelationModule:
    """Sublattice of Z^d in row Hermite normal form, with its certificate."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]
    kind: str
    certificate: dict = field(compare=False, hash=False, default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, alpha) -> bool:
        if len(alpha) != self.ambient_rank:
            raise ValueError("vector has the wrong length")
        return lattice.in_lattice([list(r) for r in self.basis], list(alpha))

    def to_json_dict(self) -> dict:
        return {
            "d": self.ambient_rank,
            "basis": [list(row) for row in self.basis],
            "precision_bits": int(self.certificate.get("precision_bits", 0)),
            "kind": self.kind,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RelationModule":
        return cls(
            ambient_rank=int(data["d"]),
            basis=tuple(tuple(int(x) for x in row) for row in data["basis"]),
            kind=str(data["kind"]),
            certificate={"precision_bits": int(data.get("precision_bits", 0))},
        )


def _lll_rows(rows: list[list[int]]) -> list[list[int]]:
    m = DomainMatrix(
        [[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ
    )
    return [[int(x) for x in r] for r in m.lll(delta=LLL_DELTA).to_list()]


def _round_scaled(x, scale_bits: int) -> int:
    return int(mpmath.nint(mpmath.mpf(x) * mpf(2) ** scale_bits))


def _detect_module(dim, build_rows, certify, coeff_cap, saturate=True):
    """LLL-detect, certify, saturate; accept after two stable doublings.

    Saturation is sound only for kernels of maps into torsion-free groups
    (the additive kinds); multiplicative relation lattices may be strictly
    smaller than their saturation, so those callers disable it.
    """
    bits = _DETECTION_START_BITS
    prev = None
    agreements = 0
    capped = False
    while bits <= _DETECTION_CAP_BITS:
        reduced = _lll_rows(build_rows(bits))
        candidates = {tuple(int(x) for x in row[:dim]) for row in reduced}
        certified = []
        for cand in sorted(candidates):
            if not any(cand):
                continue
            if max(abs(c) for c in cand) > coeff_cap:
                capped = True
                continue
            if certify(list(cand)):
                certified.append(list(cand))
        if saturate:
            basis = lattice.saturate_rows(certified) if certified else []
        else:
            basis = lattice.hnf_rows(certified)
        # integer combinations of relations are relations, so HNF rows must
        # certify; saturation additionally relies on torsion-freeness
        for row in basis:
            assert certify(row), "basis reduction left the certified module"
        key = tuple(tuple(r) for r in basis)
        agreements = agreements + 1 if key == prev else 0
        prev = key
        if agreements >= _STABLE_DOUBLINGS:
            return key, bits, capped
        bits *= 2
    raise PrecisionExhausted("relation detection did not stabilize")


def _certificate(bits, degree_bound, coeff_cap, capped) -> dict:
    return {
        "precision_bits": bits,
        "degree_bound": degree_bound,
        "coeff_cap": coeff_cap,
        "stable_doublings": _STABLE_DOUBLINGS,
        "cap_reached": capped,
        "lower_bound": "norm bound (||alpha||_1 * M)^-(degree_bound-1)",
    }


def _ident(k, n):
    return [1 if t == k else 0 for t in range(n)]


@lru_cache(maxsize=None)
def additive_relations(
    g: IntPoly,
    coeff_cap: int = DEFAULT_COEFF_CAP,
    degree_bound: int | None = None,
) -> RelationModule:
    """HNF basis of {alpha in Z^d : sum alpha_i x_i = 0}, roots in box order."""
    d = g.degree
    if degree_bound is None:
        degree_bound = default_degree_bound(d)
    order = _order_map(g)
    roots = certified_complex_roots(g, 128)

    def build(bits):
        boxes = _boxes_at(g, 2 * bits + 32)
        with workprec(4 * bits + 128):
            rows = []
            for k, i in enumerate(order):
                c = boxes[i].center
                rows.append(
                    _ident(k, d)
                    + [_round_scaled(c.real, bits), _round_scaled(c.imag, bits)]
                )
        return rows

    def certify(alpha):
        return gamma_is_zero(alpha, roots, degree_bound)

    basis, bits, capped = _detect_module(d, build, certify, coeff_cap)
    return RelationModule(
        d, basis, "additive", _certificate(bits, degree_bound, coeff_cap, capped)
    )


def _integral_value_balls(g: IntPoly, v: LaurentPoly):
    """Ball factory for y_i = c * v(x_i), c = ((-1)^d g(0))^e with
    e = max(0, -min exponent): y_i = (X^e v)(x_i) * prod_{j!=i} x_j^e is an
    algebraic integer and the list (y_i) is permuted by the Galois action,
    so max_i |y_i| bounds every conjugate of every y_i."""
    e, _ = v.integralized()
    clear = ((-1) ** g.degree * g.coeffs[0]) ** e
    order = _order_map(g)

    def mk(bits):
        boxes = _boxes_at(g, bits)
        return [eval_laurent_ball(v.terms, boxes[i].ball()) * clear for i in order]

    return mk


@lru_cache(maxsize=None)
def value_relations(
    g: IntPoly,
    v: LaurentPoly,
    coeff_cap: int = DEFAULT_COEFF_CAP,
    degree_bound: int | None = None,
) -> RelationModule:
    """HNF basis of {alpha : sum alpha_i v(x_i) = 0}."""
    if v.is_constant:
        raise ValueError("v must be nonconstant")
    if v.min_exp < 0 and g.coeffs[0] == 0:
        raise ZeroRootWithNegativeExponent(
            "v has negative exponents but 0 is a root of g"
        )
    d = g.degree
    if degree_bound is None:
        degree_bound = default_degree_bound(d)
    mk = _integral_value_balls(g, v)

    def build(bits):
        with workprec(4 * bits + 128):
            balls = mk(2 * bits + 32)
            rows = []
            for k, b in enumerate(balls):
                rows.append(
                    _ident(k, d)
                    + [
                        _round_scaled(b.center.real, bits),
                        _round_scaled(b.center.imag, bits),
                    ]
                )
        return rows

    def certify(alpha):
        return _linear_zero_test(alpha, mk, _house_of, degree_bound)

    basis, bits, capped = _detect_module(d, build, certify, coeff_cap)
    return RelationModule(
        d, basis, "value", _certificate(bits, degree_bound, coeff_cap, capped)
    )


@lru_cache(maxsize=None)
def joint_power_relations(
    g: IntPoly,
    exponents: tuple[int, ...],
    coeff_cap: int = DEFAULT_COEFF_CAP,
    degree_bound: int | None = None,
) -> RelationModule:
    """Intersection over i of {alpha : sum alpha_j x_j^(m_i) = 0}."""
    exponents = tuple(int(m) for m in exponents)
    if not exponents:
        raise ValueError("need at least one exponent")
    if len(set(exponents)) != len(exponents):
        raise ValueError("exponents must be distinct")
    if any(m < 0 for m in exponents) and g.coeffs[0] == 0:
        raise ZeroRootWithNegativeExponent("negative exponent but 0 is a root of g")
    d = g.degree
    basis = None
    bits_used = 0
    for m in exponents:
        if m == 0:
            # x^0 = 1 for every root: the exact kernel of the all-ones column
            part = lattice.kernel_rows([[1]] * d)
        else:
            mod = value_relations(g, LaurentPoly.monomial(m), coeff_cap, degree_bound)
            part = [list(r) for r in mod.basis]
            bits_used = max(bits_used, mod.certificate.get("precision_bits", 0))
        basis = part if basis is None else lattice.intersect_rows(basis, part)
    dbound = degree_bound or default_degree_bound(d)
    return RelationModule(
        d,
        tuple(tuple(r) for r in basis),
        "joint",
        _certificate(bits_used, dbound, coeff_cap, False),
    )


@lru_cache(maxsize=None)
def multiplicative_relations(
    g: IntPoly,
    v: LaurentPoly,
    coeff_cap: int = DEFAULT_COEFF_CAP,
    degree_bound: int | None = None,
) -> RelationModule:
    """HNF basis of {alpha : prod v(x_i)^alpha_i = 1}.

    Detection adds one extra lattice row carrying 2*pi so that a winding
    integer can absorb argument wrap-arounds; the winding coordinate is not
    part of the reported vectors.
    """
    d = g.degree
    if degree_bound is None:
        degree_bound = default_degree_bound(d)
    if v.min_exp < 0 and g.coeffs[0] == 0:
        raise ZeroRootWithNegativeExponent(
            "v has negative exponents but 0 is a root of g"
        )
    order = _order_map(g)
    e_shift, _ = v.integralized()

    # reject v vanishing at a root (certified, using the integralized values)
    mk_int = _integral_value_balls(g, v)
    for i in range(d):
        probe = [0] * d
        probe[i] = 1
        if _linear_zero_test(probe, mk_int, _house_of, degree_bound):
            raise VanishingValue(f"v vanishes at root #{i} of g")

    def build(bits):
        boxes = _boxes_at(g, 2 * bits + 32)
        with workprec(4 * bits + 128):
            rows = []
            for k, i in enumerate(order):
                b = eval_laurent_ball(v.terms, boxes[i].ball())
                rows.append(
                    _ident(k, d + 1)
                    + [
                        _round_scaled(mpmath.log(abs(b.center)), bits),
                        _round_scaled(mpmath.arg(b.center), bits),
                    ]
                )
            rows.append(_ident(d, d + 1) + [0, _round_scaled(2 * mpmath.pi, bits)])
        return rows

    def certify(alpha):
        return _certified_product_is_one(g, v, order, alpha, e_shift, degree_bound)

    basis, bits, capped = _detect_module(d, build, certify, coeff_cap, saturate=False)
    return RelationModule(
        d, basis, "multiplicative", _certificate(bits, degree_bound, coeff_cap, capped)
    )


def _certified_product_is_one(g, v, order, alpha, e_shift, degree_bound) -> bool:
    """Certified test of prod v(x_i)^alpha_i = 1.

    Write e = e_shift, u_i = (X^e v)(x_i), t_i = x_i; then
    beta = prod v(x_i)^a_i = prod u_i^a_i * prod t_i^(-e a_i) is a power
    product of nonzero algebraic integers with total exponent mass
    C = (1+e)*||alpha||_1.  Let P be the product of the factors appearing
    with negative exponents; when beta != 1, P*(beta-1) is a nonzero
    algebraic integer whose conjugates are bounded by M^C * (1 + M^C) where
    M = max_i max(|u_i|, |u_i|^-1, |t_i|, |t_i|^-1, 1) over all conjugates
    (the Galois action permutes the u's and the t's), so a nonzero rational
    integer norm forces
        |beta - 1| >= (M^C * (1 + M^C))^-(degree_bound-1) * M^-C.
    For polynomial v (e = 0) this is the plain bound with M = M_v.
    """
    a1 = sum(abs(int(a)) for a in alpha)
    if a1 == 0:
        return True
    cc = a1 * (1 + e_shift)
    _, vt = v.integralized()
    bits = 192
    while bits <= PRECISION_CAP_BITS:
        with workprec(2 * bits + 64):
            try:
                boxes = _boxes_at(g, bits)
                factors = [eval_poly_ball(vt, boxes[i].ball()) for i in order]
                if e_shift:
                    factors += [boxes[i].ball() for i in order]
                m = mpf(1)
                for b in factors:
                    lo = b.abs_lower()
                    if lo <= 0:
                        raise ZeroDivisionError
                    m = max(m, b.abs_upper(), 1 / lo)
                mc = m**cc
                lbound = (mc * (1 + mc)) ** (-(degree_bound - 1)) / mc
                beta = Ball.exact_int(1)
                for a, i in zip(alpha, order):
                    if a:
                        val = eval_laurent_ball(v.terms, boxes[i].ball())
                        beta = beta * val.power(int(a))
                diff = beta - Ball.exact_int(1)
                if diff.abs_lower() > 0:
                    return False
                if abs(diff.center) <= diff.radius and diff.radius < lbound / 2:
                    return True
                needed = int(-mpmath.log(lbound, 2)) + 64
            except ZeroDivisionError:
                needed = 2 * bits
        bits = max(2 * bits, needed)
    raise PrecisionExhausted("multiplicative zero test undecided")


@lru_cache(maxsize=None)
def index_ind(
    g: IntPoly,
    coeff_cap: int = DEFAULT_COEFF_CAP,
    degree_bound: int | None = None,
) -> int:
    """ind(g): nonnegative generator of the integers of the form sum alpha_i x_i.

    Computed from an HNF basis of the additive relation module of the
    augmented value list (x_1, ..., x_d, 1): a relation
    sum alpha_i x_i + c = 0 exhibits -c as an attained integer, and the set
    of attained integers is the gcd ideal of the basis' last coordinates.
    """
    d = g.degree
    if degree_bound is None:
        degree_bound = default_degree_bound(d)
    order = _order_map(g)
    dim = d + 1

    def mk(bits):
        boxes = _boxes_at(g, bits)
        return [boxes[i].ball() for i in order] + [Ball.exact_int(1)]

    def build(bits):
        with workprec(4 * bits + 128):
            balls = mk(2 * bits + 32)
            rows = []
            for k, b in enumerate(balls):
                rows.append(
                    _ident(k, dim)
                    + [
                        _round_scaled(b.center.real, bits),
                        _round_scaled(b.center.imag, bits),
                    ]
                )
        return rows

    def certify(alpha):
        return _linear_zero_test(alpha, mk, _house_of, degree_bound)

    basis, _, _ = _detect_module(dim, build, certify, coeff_cap)
    consts = [abs(row[-1]) for row in basis if row[-1] != 0]
    return math.gcd(*consts) if consts else 0


def dominant_root_holds(g: IntPoly, degree_bound: int | None = None) -> bool:
    """True iff some root satisfies |x0| > sum of the other |x|, certified.

    Exact modulus ties are recognized through the conjugation and negation
    symmetries (the sources of equal moduli in the irreducible inputs this
    criterion is stated for); any other exact tie exhausts the precision cap.
    """
    d = g.degree
    if d < 2:
        raise ValueError("dominant root criterion needs degree >= 2")
    if degree_bound is None:
        degree_bound = default_degree_bound(d)
    bits = 128
    while bits <= PRECISION_CAP_BITS:
        boxes = _boxes_at(g, bits)
        pi = _conjugation_pairing(boxes)
        neg = _negation_partners(g, boxes, degree_bound)
        if pi is None or neg is None:
            bits *= 2
            continue
        parent = list(range(d))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(d):
            targets = [pi[i]] + ([neg[i]] if neg[i] is not None else [])
            for t in targets:
                ra, rb = find(i), find(t)
                if ra != rb:
                    parent[ra] = rb
        classes: dict[int, list[int]] = {}
        for i in range(d):
            classes.setdefault(find(i), []).append(i)
        with workprec(2 * bits + 64):
            ups = [b.ball().abs_upper() for b in boxes]
            los = [b.ball().abs_lower() for b in boxes]
            reps = list(classes.values())
            top = max(reps, key=lambda cl: ups[cl[0]])
            others = [cl for cl in reps if cl is not top]
            if any(ups[cl[0]] >= los[top[0]] for cl in others):
                bits *= 2
                continue
            if len(top) >= 2:
                return False  # two roots share the maximal modulus exactly
            x0 = top[0]
            rest_up = sum(ups[j] for j in range(d) if j != x0)
            rest_lo = sum(los[j] for j in range(d) if j != x0)
            if los[x0] > rest_up:
                return True
            if ups[x0] < rest_lo:
                return False
        bits *= 2
    raise PrecisionExhausted("dominant root comparison is a genuine tie")


def _negation_partners(g, boxes, degree_bound):
    """neg[i] = j when -x_i = x_j (certified), None entry when -x_i is not a
    root; returns None overall while boxes are too coarse to decide."""
    d = len(boxes)
    neg: list[int | None] = []
    for i in range(d):
        mirror = Ball(-boxes[i].center, boxes[i].radius)
        hits = [j for j in range(d) if not mirror.disjoint_from(boxes[j].ball())]
        if len(hits) > 1:
            return None
        if not hits:
            neg.append(None)
            continue
        j = hits[0]
        alpha = [0] * d
        alpha[i] += 1
        alpha[j] += 1
        if _linear_zero_test(
            alpha, _root_balls_factory(g), _house_of, degree_bound
        ):
            neg.append(j)
        else:
            neg.append(None)
    return neg


def negation_pairing(g: IntPoly, degree_bound: int | None = None):
    """(pairs, unpaired) of sorted-root indices under x -> -x, certified."""
    if degree_bound is None:
        degree_bound = default_degree_bound(g.degree)
    order = _order_map(g)
    bits = 128
    while bits <= PRECISION_CAP_BITS:
        boxes = _boxes_at(g, bits)
        raw = _negation_partners(g, boxes, degree_bound)
        if raw is not None:
            inv = {b: k for k, b in enumerate(order)}
            pairs = []
            unpaired = []
            seen = set()
            for k, i in enumerate(order):
                if k in seen:
                    continue
                j = raw[i]
                if j is None:
                    unpaired.append(k)
                    seen.add(k)
                else:
                    partner = inv[j]
                    if partner == k:
                        raise ZeroRoot("0 is a root of g")
                    pairs.append((k, partner))
                    seen.update((k, partner))
            return pairs, unpaired
        bits *= 2
    raise PrecisionExhausted("negation pairing undecided")


def smith_normal_form(rows) -> SnfDecomposition:
    """Exact Smith normal form U*A*V = S of an integer matrix."""
    return _snf_rows([list(r) for r in rows])
