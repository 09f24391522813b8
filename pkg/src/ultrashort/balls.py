"""Complex ball (disk) arithmetic on top of mpmath.

A Ball is a closed disk {z : |z - center| <= radius}. Operations return a
ball guaranteed to contain every possible exact result; every computed
center/radius is padded by a few ulps of the current working precision to
absorb rounding (mpmath rounds to nearest, relative error <= 2^(1-prec)
per operation, and each ball operation chains only a handful of them).

Callers control precision with mpmath.workprec; balls do not store it.
"""

from __future__ import annotations

from mpmath import mp, mpc, mpf


def _eps() -> mpf:
    return mpf(2) ** (4 - mp.prec)


class Ball:
    __slots__ = ("center", "radius")

    def __init__(self, center, radius=0):
        self.center = mpc(center)
        self.radius = mpf(radius)

    @classmethod
    def exact_int(cls, n: int) -> "Ball":
        return cls(mpc(n), mpf(0))

    def __repr__(self):
        return f"Ball({self.center}, {self.radius})"

    def _pad(self) -> mpf:
        return _eps() * (abs(self.center) + self.radius)

    def __add__(self, other: "Ball") -> "Ball":
        c = self.center + other.center
        r = self.radius + other.radius
        return Ball(c, r + _eps() * (abs(c) + r))

    def __sub__(self, other: "Ball") -> "Ball":
        c = self.center - other.center
        r = self.radius + other.radius
        return Ball(c, r + _eps() * (abs(c) + r))

    def __neg__(self) -> "Ball":
        return Ball(-self.center, self.radius)

    def conjugate(self) -> "Ball":
        return Ball(self.center.conjugate(), self.radius)

    def __mul__(self, other) -> "Ball":
        if isinstance(other, int):
            c = self.center * other
            r = self.radius * abs(other)
            return Ball(c, r + _eps() * (abs(c) + r))
        c = self.center * other.center
        r = (
            abs(self.center) * other.radius
            + abs(other.center) * self.radius
            + self.radius * other.radius
        )
        return Ball(c, r + _eps() * (abs(c) + r))

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        low = self.abs_lower()
        if low <= 0:
            raise ZeroDivisionError("ball contains zero")
        c = 1 / self.center
        # |1/z - 1/c| = |z - c| / (|z||c|) <= r / (low * |c|)
        r = self.radius / (low * abs(self.center))
        return Ball(c, r + _eps() * (abs(c) + r))

    def power(self, e: int) -> "Ball":
        if e == 0:
            return Ball.exact_int(1)
        base = self.inverse() if e < 0 else self
        e = abs(e)
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def abs_upper(self) -> mpf:
        v = abs(self.center) + self.radius
        return v * (1 + _eps())

    def abs_lower(self) -> mpf:
        v = abs(self.center) * (1 - _eps()) - self.radius
        return v if v > 0 else mpf(0)

    def contains_zero(self) -> bool:
        return abs(self.center) <= self.radius * (1 + _eps())

    def disjoint_from(self, other: "Ball") -> bool:
        gap = abs(self.center - other.center) * (1 - _eps())
        return gap > self.radius + other.radius


def ball_sum(balls) -> Ball:
    acc = Ball.exact_int(0)
    for b in balls:
        acc = acc + b
    return acc


def eval_poly_ball(coeffs, x: Ball) -> Ball:
    """Evaluate an integer-coefficient polynomial (lowest first) on a ball."""
    acc = Ball.exact_int(0)
    for c in reversed(coeffs):
        acc = acc * x + Ball.exact_int(int(c))
    return acc


def eval_laurent_ball(terms, x: Ball) -> Ball:
    """Evaluate ((e, c), ...) Laurent terms on a ball; x must exclude 0 if e < 0."""
    acc = Ball.exact_int(0)
    for e, c in terms:
        acc = acc + x.power(e) * int(c)
    return acc
