"""Exact integer, modular and polynomial arithmetic.

Everything here is deterministic and allocation-free of global state: split
prime search, root finding modulo primes (Cantor-Zassenhaus with a seeded
PRNG derived from the inputs), Hensel lifting to prime powers, and the small
helpers the sum kernels need (primitive roots, modular inverses).

No number field is ever represented; per the identification
Z/q^nZ = O_g/p^n at totally split primes, all root data lives in plain
integer residues.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .errors import NonPrimeModulus, OutOfRangeParameter, RamifiedPrime

MODULUS_LIMIT = 1 << 63  # deterministic Miller-Rabin witness set is valid below this

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

BRUTE_FORCE_ROOT_LIMIT = 10_000  # below this, enumerate F_q instead of Cantor-Zassenhaus


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2^63.

    >>> [p for p in range(2, 30) if is_prime(p)]
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    """
    if n >= MODULUS_LIMIT:
        raise OutOfRangeParameter(f"primality testing limited to n < 2^63, got {n}")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int):
    """Yield primes in [lo, hi] in ascending order."""
    n = max(2, lo)
    if n == 2 and hi >= 2:
        yield 2
        n = 3
    if n % 2 == 0:
        n += 1
    while n <= hi:
        if is_prime(n):
            yield n
        n += 2


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(f: list[int], g: list[int]) -> int:
    """Res(f, g) via the Sylvester matrix, coefficients lowest degree first."""
    df = len(f) - 1
    dg = len(g) - 1
    if df < 0 or dg < 0:
        return 0
    n = df + dg
    if n == 0:
        return 1
    rows = []
    frev = f[::-1]
    grev = g[::-1]
    for i in range(dg):
        rows.append([0] * i + frev + [0] * (n - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + grev + [0] * (n - dg - 1 - i))
    return _bareiss_det(rows)


@dataclass(frozen=True)
class IntPoly:
    """Monic separable polynomial over Z, coefficients lowest degree first.

    >>> IntPoly.parse("X^3+X+3").coeffs
    (3, 1, 0, 1)
    >>> IntPoly((3, 1, 0, 1)).discriminant
    -247
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("degree must be at least 1")
        if self.coeffs[-1] != 1:
            raise ValueError("polynomial must be monic")
        if any(not isinstance(c, int) for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.discriminant == 0:
            raise ValueError("polynomial must be separable (nonzero discriminant)")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def discriminant(self) -> int:
        d = self.degree
        if d == 1:
            return 1
        res = resultant(list(self.coeffs), self.derivative_coeffs())
        return (-1) ** (d * (d - 1) // 2) * res

    def derivative_coeffs(self) -> list[int]:
        return [i * c for i, c in enumerate(self.coeffs)][1:]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, mod: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % mod
        return acc

    def derivative_mod(self, x: int, mod: int) -> int:
        acc = 0
        for c in reversed(self.derivative_coeffs()):
            acc = (acc * x + c) % mod
        return acc

    def key(self) -> str:
        """Stable text key for hashing/caching."""
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Accept either "c0,c1,...,cd" or the human form "X^3+X+3"."""
        text = text.strip()
        if "," in text or ("X" not in text.upper() and "x" not in text):
            try:
                coeffs = tuple(int(t) for t in text.split(","))
            except ValueError as exc:
                raise ValueError(f"cannot parse polynomial {text!r}") from exc
            return cls(coeffs)
        terms = _parse_terms(text)
        if any(e < 0 for e, _ in terms):
            raise ValueError("negative exponents are not allowed in IntPoly")
        degree = max(e for e, _ in terms)
        coeffs = [0] * (degree + 1)
        for e, c in terms:
            coeffs[e] += c
        return cls(tuple(coeffs))

    def __str__(self) -> str:
        parts = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            parts.append(_format_term(c, e, first=not parts))
        return "".join(parts) if parts else "0"


def _format_term(c: int, e: int, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    if e == 0:
        return f"{sign}{mag}"
    coeff = "" if mag == 1 else str(mag)
    power = "X" if e == 1 else f"X^{e}"
    return f"{sign}{coeff}{power}"


def _parse_terms(text: str) -> list[tuple[int, int]]:
    """Parse "2X^3-X^-2+5" into [(3, 2), (-2, -1), (0, 5)]."""
    s = text.replace(" ", "").replace("x", "X").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    terms = []
    i = 0
    n = len(s)
    while i < n:
        sign = 1
        while i < n and s[i] in "+-":
            if s[i] == "-":
                sign = -sign
            i += 1
        j = i
        while j < n and s[j].isdigit():
            j += 1
        had_digits = j > i
        coeff = int(s[i:j]) if had_digits else 1
        i = j
        if i < n and s[i] == "X":
            i += 1
            if i < n and s[i] == "*":  # tolerate "2*X"
                raise ValueError(f"cannot parse polynomial {text!r}")
            exp = 1
            if i < n and s[i] == "^":
                i += 1
                k = i
                if k < n and s[k] == "-":
                    k += 1
                while k < n and s[k].isdigit():
                    k += 1
                if k == i:
                    raise ValueError(f"cannot parse polynomial {text!r}")
                exp = int(s[i:k])
                i = k
        else:
            if not had_digits:  # neither digits nor X
                raise ValueError(f"cannot parse polynomial {text!r}")
            exp = 0
        terms.append((exp, sign * coeff))
    return terms


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial over Z: tuple of (exponent, coefficient) pairs.

    >>> LaurentPoly.parse("X+X^-1").terms
    ((-1, 1), (1, 1))
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        merged: dict[int, int] = {}
        for e, c in self.terms:
            merged[e] = merged.get(e, 0) + c
        cleaned = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return cls(tuple((e, c) for e, c in _parse_terms(text)))

    @classmethod
    def x(cls) -> "LaurentPoly":
        return cls(((1, 1),))

    @classmethod
    def monomial(cls, e: int) -> "LaurentPoly":
        return cls(((e, 1),))

    @property
    def min_exp(self) -> int:
        return self.terms[0][0] if self.terms else 0

    @property
    def max_exp(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    @property
    def is_constant(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    def integralized(self) -> tuple[int, list[int]]:
        """Return (e, coeffs of X^e * v lowest first) with e = max(0, -min_exp)."""
        e = max(0, -self.min_exp)
        coeffs = [0] * (self.max_exp + e + 1)
        for k, c in self.terms:
            coeffs[k + e] = c
        return e, coeffs

    def __call__(self, x):
        return sum(c * x**e for e, c in self.terms)

    def eval_mod(self, x: int, mod: int) -> int:
        acc = 0
        for e, c in self.terms:
            acc = (acc + c * pow(x, e, mod)) % mod
        return acc

    def key(self) -> str:
        return ";".join(f"{e}:{c}" for e, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, reverse=True):
            parts.append(_format_term(c, e, first=not parts))
        return "".join(parts)


@dataclass(frozen=True)
class PrimePowerModulus:
    """q^n for a prime q; the finite level at which sums are computed."""

    q: int
    n: int = 1
    modulus: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.q):
            raise NonPrimeModulus(f"{self.q} is not prime")
        if self.n < 1:
            raise OutOfRangeParameter("exponent must be >= 1")
        m = self.q**self.n
        if m >= MODULUS_LIMIT:
            raise OutOfRangeParameter(f"q^n = {m} exceeds the 2^63 modulus limit")
        object.__setattr__(self, "modulus", m)


@dataclass(frozen=True)
class RootList:
    """Sorted roots of g modulo q^n."""

    modulus: PrimePowerModulus
    roots: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted(int(r) for r in self.roots)))


def discriminant(g: IntPoly) -> int:
    """disc(g) = (-1)^(d(d-1)/2) Res(g, g'), exact.

    >>> discriminant(IntPoly.parse("X^2-2"))
    8
    """
    return g.discriminant


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_q (coefficient lists, lowest degree first)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], q: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + ai * bj) % q
    return _poly_rem(res, m, q)


def _poly_rem(a: list[int], m: list[int], q: int) -> list[int]:
    a = a[:]
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, q)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        factor = a[-1] * inv_lead % q
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * mi) % q
        a.pop()
    return _poly_trim(a)


def _poly_powmod(base: list[int], e: int, m: list[int], q: int) -> list[int]:
    result = [1]
    base = _poly_rem(base, m, q)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, q)
        base = _poly_mulmod(base, base, m, q)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        a = _poly_rem(a, b, q)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, q)
        a = [c * inv % q for c in a]
    return a


def _poly_sub(a: list[int], b: list[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    res = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        res[i] = (ai - bi) % q
    return _poly_trim(res)


def _split_product_of_linears(f: list[int], q: int, rng: random.Random) -> list[int]:
    """Roots of a monic squarefree product of linear factors over F_q."""
    deg = len(f) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-f[0]) * pow(f[1], -1, q) % q]
    # equal-degree splitting: gcd with (X+c)^((q-1)/2) - 1 for random shifts c
    half = (q - 1) // 2
    while True:
        c = rng.randrange(q)
        h = _poly_powmod([c, 1], half, f, q)
        h = _poly_sub(h, [1], q)
        g1 = _poly_gcd(h, f, q)
        if 0 < len(g1) - 1 < deg:
            g2 = _poly_quotient(f, g1, q)
            return _split_product_of_linears(g1, q, rng) + _split_product_of_linears(
                g2, q, rng
            )


def _poly_quotient(a: list[int], b: list[int], q: int) -> list[int]:
    a = a[:]
    out = [0] * (len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, q)
    for shift in range(len(a) - len(b), -1, -1):
        coef = a[shift + len(b) - 1] * inv_lead % q
        out[shift] = coef
        if coef:
            for i, bi in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * bi) % q
    return out


def _derived_seed(g: IntPoly, q: int) -> int:
    digest = hashlib.sha256(f"{g.key()}|{q}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def roots_mod_prime(g: IntPoly, q: int) -> RootList:
    """All roots of g modulo a prime q not dividing disc(g), sorted.

    Cantor-Zassenhaus equal-degree splitting above BRUTE_FORCE_ROOT_LIMIT,
    brute force below; the internal PRNG is reseeded from (g, q) so the
    output is reproducible.
    """
    if not is_prime(q):
        raise NonPrimeModulus(f"{q} is not prime")
    if g.discriminant % q == 0:
        raise RamifiedPrime(f"{q} divides disc(g) = {g.discriminant}")
    mod = PrimePowerModulus(q, 1)
    if q < BRUTE_FORCE_ROOT_LIMIT:
        roots = [x for x in range(q) if g.eval_mod(x, q) == 0]
        return RootList(mod, tuple(roots))
    gq = _poly_trim([c % q for c in g.coeffs])
    # product of the distinct linear factors: gcd(X^q - X, g)
    xq = _poly_powmod([0, 1], q, gq, q)
    lin = _poly_gcd(_poly_sub(xq, [0, 1], q), gq, q)
    if len(lin) <= 1:
        return RootList(mod, ())
    if q == 2:
        roots = [x for x in range(2) if g.eval_mod(x, 2) == 0]
        return RootList(mod, tuple(roots))
    rng = random.Random(_derived_seed(g, q))
    roots = _split_product_of_linears(lin, q, rng)
    return RootList(mod, tuple(roots))


def hensel_roots(g: IntPoly, q: int, n: int) -> RootList:
    """Roots of g modulo q^n by Newton lifting of the simple mod-q roots."""
    if n < 1:
        raise OutOfRangeParameter("n must be >= 1")
    base = roots_mod_prime(g, q)
    if n == 1:
        return base
    mod = PrimePowerModulus(q, n)
    target = mod.modulus
    lifted = []
    for r in base.roots:
        m = q
        x = r
        while m < target:
            m = min(m * m, target)
            # simple root: g'(x) is a unit mod q, hence mod m
            deriv = g.derivative_mod(x, m)
            x = (x - g.eval_mod(x, m) * pow(deriv, -1, m)) % m
        lifted.append(x)
    return RootList(mod, tuple(lifted))


def is_split(g: IntPoly, q: int) -> bool:
    """True when g has d distinct roots mod q (and q does not ramify)."""
    if g.discriminant % q == 0:
        return False
    gq = _poly_trim([c % q for c in g.coeffs])
    if len(gq) - 1 < g.degree:
        return False  # cannot happen for monic g, but keep the guard
    xq = _poly_powmod([0, 1], q, gq, q)
    return _poly_sub(xq, [0, 1], q) == []


def find_split_primes(g: IntPoly, lo: int, hi: int) -> list[int]:
    """All primes q in [lo, hi] with q unramified and totally split for g.

    >>> find_split_primes(IntPoly.parse("X^5-1"), 2, 40)
    [11, 31]
    """
    if not (2 <= lo <= hi):
        raise OutOfRangeParameter("need 2 <= lo <= hi")
    return [q for q in primes_in_range(lo, hi) if is_split(g, q)]


def multiplicative_generator(q: int) -> int:
    """Smallest positive primitive root mod q.

    >>> multiplicative_generator(7)
    3
    """
    if not is_prime(q):
        raise NonPrimeModulus(f"{q} is not prime")
    if q == 2:
        return 1
    from sympy import factorint

    prime_factors = list(factorint(q - 1))
    for candidate in range(2, q):
        if all(pow(candidate, (q - 1) // p, q) != 1 for p in prime_factors):
            return candidate
    raise AssertionError("unreachable: (Z/qZ)* is cyclic")
