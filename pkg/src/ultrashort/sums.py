"""Finite-field sum families: additive-character grids, multi-parameter
samples, multiplicative-character grids, (hyper-)Kloosterman trace sums,
condition sets, Weyl sums and the uniformity metric.

Exponentials are always evaluated as e(k/N) with k reduced exactly in
integer arithmetic first, so grid values are reproducible to the ulp and
carry only the final double-precision rounding (about d * 2^-50 per value).
Weyl sums over the full parameter space never touch floating point at all:
character orthogonality reduces them to an exact congruence.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arith import (
    IntPoly,
    LaurentPoly,
    PrimePowerModulus,
    hensel_roots,
    is_prime,
    multiplicative_generator,
    roots_mod_prime,
)
from .errors import (
    InvalidDescriptor,
    NonInvertibleRoot,
    NotSplit,
    OutOfRangeParameter,
    VanishingValue,
    ZeroRoot,
)

PARAM_SPACE_CAP = 1 << 26
_DFT_DIRECT_LIMIT = 4096
_CHUNK = 2048


@dataclass
class SumGrid:
    """A family a -> S(a) of complex sums over a residue parameter space.

    `params` lists the included parameters (ascending); `excluded` the
    non-lisse points left out; ambient_size is the size of the full space.
    """

    modulus: PrimePowerModulus
    ambient_size: int
    params: np.ndarray
    values: np.ndarray
    excluded: tuple[int, ...]
    meta: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.excluded and len(self.params) == self.ambient_size

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("a,re,im\n")
            for a, v in zip(self.params, self.values):
                fh.write(f"{int(a)},{float(v.real)!r},{float(v.imag)!r}\n")

    def to_json_dict(self) -> dict:
        return dict(self.meta, excluded=[int(a) for a in self.excluded])


@dataclass
class ConditionSet:
    """A nonempty subset of Z/q^nZ with its defining descriptor."""

    modulus: PrimePowerModulus
    members: np.ndarray
    descriptor: str

    def __len__(self) -> int:
        return len(self.members)


def _split_roots(g: IntPoly, q: int, n: int = 1) -> list[int]:
    """Sorted roots mod q^n after checking q is split and unramified."""
    base = roots_mod_prime(g, q)  # raises NonPrimeModulus / RamifiedPrime
    if len(base.roots) != g.degree:
        raise NotSplit(f"g has {len(base.roots)} roots mod {q}, expected {g.degree}")
    if n == 1:
        return list(base.roots)
    return list(hensel_roots(g, q, n).roots)


def _exp_of_residues(ks: np.ndarray, modulus: int) -> np.ndarray:
    return np.exp((2j * np.pi / modulus) * ks)


def _parallel_fill(total: int, compute_chunk, threads: int) -> np.ndarray:
    """Fill a complex array chunk by chunk; results independent of threads."""
    out = np.empty(total, dtype=np.complex128)
    spans = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]
    if threads <= 1 or len(spans) <= 1:
        for s, e in spans:
            out[s:e] = compute_chunk(s, e)
        return out
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(compute_chunk, s, e): (s, e) for s, e in spans}
        for fut, (s, e) in futures.items():
            out[s:e] = fut.result()
    return out


def additive_sum_grid(
    g: IntPoly,
    q: int,
    n: int = 1,
    v: LaurentPoly | None = None,
    threads: int = 1,
) -> SumGrid:
    """values[a] = sum over roots r mod q^n of e(a*v(r)/q^n), for all a."""
    if v is None:
        v = LaurentPoly.x()
    mod = PrimePowerModulus(q, n)
    qn = mod.modulus
    if qn > PARAM_SPACE_CAP:
        raise OutOfRangeParameter(f"parameter space {qn} exceeds 2^26; sample instead")
    roots = _split_roots(g, q, n)
    if v.min_exp < 0 and any(r % q == 0 for r in roots):
        raise NonInvertibleRoot("a root is divisible by q but v has negative exponents")
    ws = [v.eval_mod(r, qn) for r in roots]

    def chunk(s, e):
        a = np.arange(s, e, dtype=np.int64)
        acc = np.zeros(e - s, dtype=np.complex128)
        for w in ws:
            acc += _exp_of_residues((a * w) % qn, qn)
        return acc

    values = _parallel_fill(qn, chunk, threads)
    return SumGrid(
        modulus=mod,
        ambient_size=qn,
        params=np.arange(qn, dtype=np.int64),
        values=values,
        excluded=(),
        meta={"family": "additive", "g": str(g), "d": g.degree, "q": q, "n": n, "v": str(v)},
    )


def multi_param_sum_samples(
    g: IntPoly,
    q: int,
    exponents,
    count: int,
    seed: int,
    full_grid: bool = False,
) -> np.ndarray:
    """Sampled values of sum_r e((a_1 r^m_1 + ... + a_k r^m_k)/q).

    Tuples are drawn uniformly with the seeded counter-based PRNG; with
    full_grid=True the whole q^k space is enumerated instead (count ignored)
    provided it fits under the 2^26 cap.
    """
    from .limitlaw import philox_generator

    exponents = [int(m) for m in exponents]
    if len(set(exponents)) != len(exponents) or not exponents:
        raise OutOfRangeParameter("exponents must be a nonempty distinct list")
    roots = _split_roots(g, q, 1)
    if any(m < 0 for m in exponents) and any(r % q == 0 for r in roots):
        raise NonInvertibleRoot("a root vanishes mod q but an exponent is negative")
    k = len(exponents)
    powers = [[pow(r, m, q) for m in exponents] for r in roots]
    if full_grid:
        total = q**k
        if total > PARAM_SPACE_CAP:
            raise OutOfRangeParameter(f"full grid q^k = {total} exceeds 2^26")
        flat = np.arange(total, dtype=np.int64)
        tuples = np.empty((total, k), dtype=np.int64)
        for i in range(k - 1, -1, -1):
            tuples[:, i] = flat % q
            flat = flat // q
    else:
        if count < 1:
            raise OutOfRangeParameter("count must be >= 1")
        rng = philox_generator(seed, "multi-param")
        tuples = rng.integers(0, q, size=(count, k), dtype=np.int64)
    acc = np.zeros(len(tuples), dtype=np.complex128)
    for pw in powers:
        t = np.zeros(len(tuples), dtype=np.int64)
        for i in range(k):
            t = (t + tuples[:, i] * pw[i]) % q
        acc += _exp_of_residues(t, q)
    return acc


def _dlog_table_free(q: int, gen: int, x: int) -> int:
    """Discrete log base gen of x mod q, baby-step giant-step."""
    m = math.isqrt(q - 1) + 1
    baby = {}
    y = 1
    for j in range(m):
        baby.setdefault(y, j)
        y = y * gen % q
    giant = pow(gen, -m, q)
    y = x % q
    for i in range(m + 1):
        if y in baby:
            return (i * m + baby[y]) % (q - 1)
        y = y * giant % q
    raise ArithmeticError("dlog of a non-unit")


def mult_char_sum_grid(g: IntPoly, q: int, v: LaurentPoly | None = None) -> SumGrid:
    """values[t] = sum_r chi_t(v(r)) over the q-1 characters chi_t of F_q^*.

    chi_t(gen^s) = e(s*t/(q-1)) for the smallest primitive root gen, so
    values[t] = sum_r e(t*dlog(v(r))/(q-1)); logs via baby-step giant-step.
    """
    if v is None:
        v = LaurentPoly.x()
    roots = _split_roots(g, q, 1)
    if v.min_exp < 0 and any(r % q == 0 for r in roots):
        raise NonInvertibleRoot("a root vanishes mod q but v has negative exponents")
    vals = [v.eval_mod(r, q) for r in roots]
    if any(w % q == 0 for w in vals):
        raise VanishingValue("v(r) = 0 mod q at a root")
    gen = multiplicative_generator(q)
    logs = [_dlog_table_free(q, gen, w) for w in vals]
    size = q - 1
    t = np.arange(size, dtype=np.int64)
    values = np.zeros(size, dtype=np.complex128)
    for s in logs:
        values += _exp_of_residues((t * s) % size, size)
    return SumGrid(
        modulus=PrimePowerModulus(q, 1),
        ambient_size=size,
        params=t,
        values=values,
        excluded=(),
        meta={"family": "multiplicative", "g": str(g), "d": g.degree, "q": q, "n": 1, "v": str(v)},
    )


# ---------------------------------------------------------------------------
# Kloosterman sums


def _inverse_table(q: int) -> np.ndarray:
    """inv[x] = x^-1 mod q for x in 1..q-1 (inv[0] unused), O(q)."""
    inv = np.zeros(q, dtype=np.int64)
    inv[1] = 1
    for x in range(2, q):
        inv[x] = (q - (q // x) * inv[q % x] % q) % q
    return inv


_KL_TABLES: dict[tuple[int, int], np.ndarray] = {}


def kloosterman_table(r: int, q: int) -> np.ndarray:
    """Kl_r(b; q) for every b in [0, q), one O(r*q^2) precomputation.

    Built by iterated multiplicative convolution of the sequence e(x/q):
    S_1(b) = e(b/q) and S_(k+1)(b) = sum_x e(x/q) S_k(b/x); then
    Kl_r = q^(-(r-1)/2) S_r on F_q^*.  The entry at b = 0 is the value
    (-1)^(r-1) q^(-(r-1)/2) of the free-variable form (non-lisse point;
    grids exclude it).
    """
    if r < 2:
        raise OutOfRangeParameter("rank r must be >= 2")
    if not is_prime(q):
        raise OutOfRangeParameter(f"{q} is not prime")
    key = (r, q)
    if key in _KL_TABLES:
        return _KL_TABLES[key]
    omega = _exp_of_residues(np.arange(q, dtype=np.int64), q)
    inv = _inverse_table(q)
    table = omega.copy()  # S_1
    ex = omega[1:q]  # e(x/q) for x = 1..q-1
    for _ in range(r - 1):
        nxt = np.zeros(q, dtype=np.complex128)
        for s in range(0, q, 512):
            e = min(s + 512, q)
            b = np.arange(s, e, dtype=np.int64)
            idx = (b[:, None] * inv[None, 1:q]) % q
            nxt[s:e] = (table[idx] * ex[None, :]).sum(axis=1)
        table = nxt
    table *= q ** (-(r - 1) / 2)
    table[0] = (-1) ** (r - 1) * q ** (-(r - 1) / 2)
    _KL_TABLES[key] = table
    return table


def hyper_kloosterman(r: int, a: int, q: int) -> complex:
    """Normalized hyper-Kloosterman sum Kl_r(a; q).

    Kl_r(a;q) = q^(-(r-1)/2) * sum over x_1..x_(r-1) in F_q^* of
    e((x_1 + ... + x_(r-1) + a/(x_1...x_(r-1)))/q).  Direct summation for
    r <= 3; larger ranks reuse the all-b convolution table.
    """
    if not is_prime(q):
        raise OutOfRangeParameter(f"{q} is not prime")
    if r < 2:
        raise OutOfRangeParameter("rank r must be >= 2")
    if not 1 <= a <= q - 1:
        raise OutOfRangeParameter("need 1 <= a <= q-1")
    if r == 2:
        x = np.arange(1, q, dtype=np.int64)
        inv = _inverse_table(q)[1:]
        ks = (x + a * inv) % q
        return complex(_exp_of_residues(ks, q).sum() / math.sqrt(q))
    if r == 3:
        inv = _inverse_table(q)
        omega = _exp_of_residues(np.arange(q, dtype=np.int64), q)
        total = 0.0 + 0.0j
        ys = np.arange(1, q, dtype=np.int64)
        inv_ys = inv[1:]
        for x in range(1, q):
            c = a * inv[x] % q
            ks = (x + ys + c * inv_ys) % q
            total += omega[ks].sum()
        return complex(total / q)
    return complex(kloosterman_table(r, q)[a % q])


def trace_sum_grid(g: IntPoly, q: int, r: int = 2, mode: str = "dilate") -> SumGrid:
    """values[a] = sum_i Kl_r(a*r_i; q) (dilate) or Kl_r(a + r_i; q) (translate).

    Dilate needs 0 not in Z_g and drops a = 0; translate drops a = -r_i; in
    both cases the dropped points are exactly where an argument hits the
    non-lisse point 0.
    """
    if mode not in ("dilate", "translate"):
        raise InvalidDescriptor(f"unknown mode {mode!r}")
    roots = _split_roots(g, q, 1)
    if mode == "dilate":
        if g.coeffs[0] == 0:
            raise ZeroRoot("dilate mode needs 0 not in Z_g")
        if any(rt % q == 0 for rt in roots):
            raise ZeroRoot("a root vanishes mod q; every dilate argument hits 0")
        excluded = (0,)
    else:
        excluded = tuple(sorted((-rt) % q for rt in roots))
    table = kloosterman_table(r, q)
    mask = np.ones(q, dtype=bool)
    mask[list(excluded)] = False
    params = np.nonzero(mask)[0].astype(np.int64)
    values = np.zeros(len(params), dtype=np.complex128)
    for rt in roots:
        if mode == "dilate":
            values += table[(params * rt) % q]
        else:
            values += table[(params + rt) % q]
    return SumGrid(
        modulus=PrimePowerModulus(q, 1),
        ambient_size=q,
        params=params,
        values=values,
        excluded=excluded,
        meta={
            "family": "kloosterman-trace",
            "g": str(g),
            "d": g.degree,
            "q": q,
            "n": 1,
            "r": r,
            "mode": mode,
        },
    )


# ---------------------------------------------------------------------------
# condition sets and Weyl sums


def make_condition_set(q: int, n: int, descriptor) -> ConditionSet:
    """Build the subset of Z/q^nZ described by `descriptor`.

    Descriptors: "full"; "interval:ALPHA" with 0 < ALPHA <= 1 (first
    ceil(ALPHA*q^n) residues); "image:F" for monic integer F (the image
    {F(b) mod q}); "subgroup:M" with M | q-1 and n = 1 (the unique order-M
    subgroup of (Z/qZ)^*).
    """
    mod = PrimePowerModulus(q, n)
    qn = mod.modulus
    if qn > PARAM_SPACE_CAP:
        raise OutOfRangeParameter(f"parameter space {qn} exceeds 2^26")
    kind, arg = _parse_descriptor(descriptor)
    if kind == "full":
        members = np.arange(qn, dtype=np.int64)
        canon = "full"
    elif kind == "interval":
        alpha = float(arg)
        if not 0 < alpha <= 1:
            raise InvalidDescriptor("interval ratio must be in (0, 1]")
        members = np.arange(math.ceil(alpha * qn), dtype=np.int64)
        canon = f"interval:{alpha}"
    elif kind == "image":
        coeffs = _monic_coeffs(arg)
        xs = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * xs + c) % q
        members = np.unique(acc)
        canon = f"image:{arg}"
    elif kind == "subgroup":
        m = int(arg)
        if n != 1:
            raise InvalidDescriptor("subgroup descriptor requires n = 1")
        if m < 1 or (q - 1) % m != 0:
            raise InvalidDescriptor(f"order {m} does not divide q-1 = {q-1}")
        h = pow(multiplicative_generator(q), (q - 1) // m, q)
        members = np.array(sorted({pow(h, j, q) for j in range(m)}), dtype=np.int64)
        canon = f"subgroup:{m}"
    else:
        raise InvalidDescriptor(f"unknown descriptor {descriptor!r}")
    return ConditionSet(mod, members, canon)


def _parse_descriptor(descriptor) -> tuple[str, str]:
    if isinstance(descriptor, (tuple, list)):
        kind = str(descriptor[0])
        arg = str(descriptor[1]) if len(descriptor) > 1 else ""
        return kind, arg
    text = str(descriptor)
    if ":" in text:
        kind, arg = text.split(":", 1)
        return kind.strip(), arg.strip()
    return text.strip(), ""


def _monic_coeffs(text: str) -> list[int]:
    from .arith import _parse_terms

    terms = _parse_terms(text)
    if any(e < 0 for e, _ in terms):
        raise InvalidDescriptor("image polynomial must have nonnegative exponents")
    deg = max(e for e, _ in terms)
    coeffs = [0] * (deg + 1)
    for e, c in terms:
        coeffs[e] += c
    if coeffs[-1] != 1:
        raise InvalidDescriptor("image polynomial must be monic")
    return coeffs


def weyl_sum(g: IntPoly, q: int, n: int, alpha, A: ConditionSet) -> complex:
    """(1/|A|) sum_{a in A} e(a*c/q^n) with c = sum alpha_i r_i mod q^n.

    Over the full set this is decided exactly in integer arithmetic
    (character orthogonality): 1 if c = 0 mod q^n, else 0.
    """
    roots = _split_roots(g, q, n)
    if len(alpha) != len(roots):
        raise OutOfRangeParameter("alpha must have one entry per root")
    qn = PrimePowerModulus(q, n).modulus
    c = sum(int(a) * r for a, r in zip(alpha, roots)) % qn
    if A.descriptor == "full":
        return complex(1.0 if c == 0 else 0.0)
    members = A.members
    if qn < (1 << 31):
        ks = (members * c) % qn
    else:
        ks = np.array([(int(a) * c) % qn for a in members], dtype=object).astype(
            np.float64
        )
        return complex(np.exp((2j * np.pi / qn) * ks).mean())
    return complex(_exp_of_residues(ks, qn).mean())


def restricted_sum_values(
    g: IntPoly, q: int, n: int, A: ConditionSet, v: LaurentPoly | None = None
) -> np.ndarray:
    """S(a) = sum_r e(a*v(r)/q^n) for a running over the condition set."""
    if v is None:
        v = LaurentPoly.x()
    qn = PrimePowerModulus(q, n).modulus
    roots = _split_roots(g, q, n)
    if v.min_exp < 0 and any(r % q == 0 for r in roots):
        raise NonInvertibleRoot("a root is divisible by q but v has negative exponents")
    ws = [v.eval_mod(r, qn) for r in roots]
    acc = np.zeros(len(A.members), dtype=np.complex128)
    for w in ws:
        acc += _exp_of_residues((A.members * w) % qn, qn)
    return acc


def _dft_direct(x: np.ndarray) -> np.ndarray:
    n = len(x)
    out = np.empty(n, dtype=np.complex128)
    omega = np.exp(-2j * np.pi * np.arange(n) / n)
    support = np.nonzero(x)[0]
    weights = x[support]
    for s in range(0, n, 256):
        e = min(s + 256, n)
        h = np.arange(s, e, dtype=np.int64)
        idx = (h[:, None] * support[None, :]) % n
        out[s:e] = (omega[idx] * weights[None, :]).sum(axis=1)
    return out


def uniformity_metric(A: ConditionSet) -> float:
    """max over h != 0 of |sum_{a in A} e(a*h/q^n)| / |A|.

    Exact DFT of the indicator: direct O(N^2) summation for N <= 4096,
    numpy's pocketfft above (its Bluestein chirp transform handles prime N
    in O(N log N)).
    """
    if len(A.members) < 1:
        raise OutOfRangeParameter("condition set must be nonempty")
    n = A.modulus.modulus
    if n > PARAM_SPACE_CAP:
        raise OutOfRangeParameter("parameter space exceeds 2^26")
    x = np.zeros(n, dtype=np.float64)
    x[A.members] = 1.0
    spectrum = _dft_direct(x) if n <= _DFT_DIRECT_LIMIT else np.fft.fft(x)
    mags = np.abs(spectrum)
    mags[0] = 0.0
    return float(mags.max() / len(A.members))
