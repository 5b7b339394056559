"""The dual Steenrod algebra F2[z1, z2, ...] and its sub/quotient Hopf algebras.

Monomials are exponent tuples in the zeta generators (deg zn = 2^n - 1);
polynomials are frozensets of monomials (GF(2) set semantics).  The xi
generators are the antipode images xi_n = chi(zn); conversion both ways is
cached.  Sub/quotient Hopf algebras are described by per-generator
(lo, hi) exponent constraints: e is admissible when 2^lo | e and e < 2^hi.
That covers the squares subalgebras, the truncated duals of the finite
subalgebras A(n), the polynomial families P(n) at any power, and their
mutual quotients.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .milnor import Mono, trim

# a dual monomial is an exponent tuple (e1, e2, ...): z1^e1 z2^e2 ...


def mono_degree(mon: Mono) -> int:
    return sum(e * ((1 << (i + 1)) - 1) for i, e in enumerate(mon))


def mono_mul(a: Mono, b: Mono) -> Mono:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim(x + y for x, y in zip(a, b))


def mono_pow2(mon: Mono, k: int) -> Mono:
    return tuple(e << k for e in mon)


def poly_mul(p: frozenset, q: frozenset) -> frozenset:
    acc = set()
    for a in p:
        for b in q:
            m = mono_mul(a, b)
            acc ^= {m}
    return frozenset(acc)


def poly_pow2(p: frozenset, k: int) -> frozenset:
    # char 2: squaring has no cross terms
    return frozenset(mono_pow2(m, k) for m in p)


def poly_pow(p: frozenset, e: int) -> frozenset:
    out = frozenset([()])
    k = 0
    while e:
        if e & 1:
            out = poly_mul(out, poly_pow2(p, k))
        e >>= 1
        k += 1
    return out


ONE = frozenset([()])


def gen(n: int, e: int = 1) -> Mono:
    """The monomial zn^e."""
    m = [0] * n
    m[n - 1] = e
    return trim(m)


# ---------------------------------------------------------------------------
# coproducts (both coordinate systems) and the antipode


@lru_cache(maxsize=None)
def _psi_zeta_gen_power(n: int, p: int) -> tuple:
    """psi(zn^{2^p}) = sum_i z_i^{2^p} (x) z_{n-i}^{2^{i+p}}."""
    out = []
    for i in range(n + 1):
        out.append((gen(i, 1 << p) if i else (),
                    gen(n - i, 1 << (i + p)) if n - i else ()))
    return tuple(out)


@lru_cache(maxsize=None)
def _psi_xi_gen_power(n: int, p: int) -> tuple:
    """psi(xi_n^{2^p}) = sum_i xi_{n-i}^{2^{i+p}} (x) xi_i^{2^p}."""
    out = []
    for i in range(n + 1):
        out.append((gen(n - i, 1 << (i + p)) if n - i else (),
                    gen(i, 1 << p) if i else ()))
    return tuple(out)


def _tensor_mul(t1, t2):
    acc = {}
    for l1, r1 in t1:
        for l2, r2 in t2:
            key = (mono_mul(l1, l2), mono_mul(r1, r2))
            acc[key] = acc.get(key, 0) ^ 1
    return tuple(sorted(k for k, v in acc.items() if v))


def _psi_mono(mon: Mono, gen_power) -> tuple:
    terms = (((), ()),)
    for idx, e in enumerate(mon):
        n, p = idx + 1, 0
        while e:
            if e & 1:
                terms = _tensor_mul(terms, gen_power(n, p))
            e >>= 1
            p += 1
    return terms


@lru_cache(maxsize=None)
def psi_zeta(mon: Mono) -> tuple:
    """Full coproduct of a zeta monomial: tuple of (left, right) monomials."""
    return _psi_mono(mon, _psi_zeta_gen_power)


@lru_cache(maxsize=None)
def psi_xi(mon: Mono) -> tuple:
    """Full coproduct of a xi monomial (exponent tuple read in the xi's)."""
    return _psi_mono(mon, _psi_xi_gen_power)


@lru_cache(maxsize=None)
def chi_zeta(n: int) -> frozenset:
    """chi(zn) as a zeta polynomial; this is xi_n expressed in the zetas."""
    if n == 0:
        return ONE
    acc = set()
    for i in range(n):
        acc ^= poly_mul(chi_zeta(i), frozenset([gen(n - i, 1 << i)]))
    return frozenset(acc)


@lru_cache(maxsize=None)
def zeta_in_xi(n: int) -> frozenset:
    """zn = chi(xi_n) as a xi polynomial."""
    if n == 0:
        return ONE
    acc = set()
    for i in range(n):
        acc ^= poly_mul(frozenset([gen(n - i, 1 << i)]), zeta_in_xi(i))
    return frozenset(acc)


@lru_cache(maxsize=None)
def xi_mono_to_zeta(mon: Mono) -> frozenset:
    """Rewrite a xi monomial as a zeta polynomial."""
    out = ONE
    for idx, e in enumerate(mon):
        if e:
            out = poly_mul(out, poly_pow(chi_zeta(idx + 1), e))
    return out


@lru_cache(maxsize=None)
def zeta_mono_to_xi(mon: Mono) -> frozenset:
    """Rewrite a zeta monomial as a xi polynomial."""
    out = ONE
    for idx, e in enumerate(mon):
        if e:
            out = poly_mul(out, poly_pow(zeta_in_xi(idx + 1), e))
    return out


def dual_antipode(mon: Mono) -> frozenset:
    """chi on a zeta monomial (algebra map; chi(zn) is cached)."""
    out = ONE
    for idx, e in enumerate(mon):
        if e:
            out = poly_mul(out, poly_pow(chi_zeta(idx + 1), e))
    return out


def antipode_poly(p: frozenset) -> frozenset:
    acc = set()
    for m in p:
        acc ^= dual_antipode(m)
    return frozenset(acc)


def pair_sq_zeta(sq_mon: Mono, z_mon: Mono) -> int:
    """<Sq(R), zeta monomial> via the xi expansion (Sq(R) is dual to xi^R)."""
    return 1 if sq_mon in zeta_mono_to_xi(z_mon) else 0


# ---------------------------------------------------------------------------
# sub/quotient Hopf algebra specifications


@dataclass(frozen=True)
class HopfQuotientSpec:
    """Exponent constraints per generator: entry (lo, hi) admits exponents
    divisible by 2^lo and (when hi is not None) strictly below 2^hi.
    heads lists entries for z1, z2, ...; `tail` applies beyond."""

    heads: tuple = ()
    tail: tuple = (0, None)
    name: str = "A*"

    def entry(self, i: int) -> tuple:
        if 1 <= i <= len(self.heads):
            return self.heads[i - 1]
        return self.tail

    def admissible_exp(self, i: int, e: int) -> bool:
        lo, hi = self.entry(i)
        if e % (1 << lo):
            return False
        return hi is None or e < (1 << hi)

    def admissible(self, mon: Mono) -> bool:
        return all(self.admissible_exp(i, e)
                   for i, e in enumerate(mon, start=1) if e)

    def in_ideal(self, mon: Mono) -> bool:
        """True when some exponent reaches its hi bound (quotient kill)."""
        for i, e in enumerate(mon, start=1):
            lo, hi = self.entry(i)
            if hi is not None and e >= (1 << hi):
                return True
        return False

    def gen_poly_degree(self, mon: Mono) -> int:
        """Degree of the monomial in the spec's own generators z_i^{2^lo}."""
        total = 0
        for i, e in enumerate(mon, start=1):
            lo, _ = self.entry(i)
            total += e >> lo
        return total

    @property
    def is_finite(self) -> bool:
        if self.tail[1] is None or self.tail[1] > self.tail[0]:
            return False
        return all(hi is not None for _, hi in self.heads)

    def __str__(self):
        return self.name


FULL_DUAL = HopfQuotientSpec((), (0, None), "A*")


def dual_of_profile(profile) -> HopfQuotientSpec:
    """The (finite) dual A(n)* etc. as a quotient of A*: e < 2^h(i)."""
    heads = tuple((0, h) for h in profile.heights)
    tail = (0, profile.tail)
    return HopfQuotientSpec(heads, tail, profile.name + "*")


def sub_powers(s: int) -> HopfQuotientSpec:
    """The subalgebra of 2^s-th powers A*(s) = F2[z_i^{2^s}]."""
    return HopfQuotientSpec((), (s, None), "A*(%d)" % s)


def sub_quotient(a: int, b: int) -> HopfQuotientSpec:
    """A*(a)//A*(b): exponents divisible by 2^a and below 2^b."""
    return HopfQuotientSpec((), (a, b), "A*(%d)//A*(%d)" % (a, b))


def quotient_by_powers(s: int) -> HopfQuotientSpec:
    """A*//A*(s): truncation with all exponents below 2^s (s = 1 is the
    exterior quotient on the residues of the z_i)."""
    return HopfQuotientSpec((), (0, s), "A*//A*(%d)" % s)


def P_spec(n: int, s: int = 0) -> HopfQuotientSpec:
    """P(n) at the 2^s-th power level: F2[z1^{2^s},...,zn^{2^s}]."""
    heads = tuple((s, None) for _ in range(n))
    name = "P(%d)*" % n if s == 0 else "P(%d,%d)*" % (n, s)
    return HopfQuotientSpec(heads, (0, 0), name)


def quotient_by_P(n: int, s: int = 0) -> HopfQuotientSpec:
    """A*//P(n,s)* = A*/(z1^{2^s},...,zn^{2^s})."""
    heads = tuple((0, s) for _ in range(n))
    base = P_spec(n, s).name
    return HopfQuotientSpec(heads, (0, None), "A*//" + base)


def sub_quotient_by_P(a: int, n: int, s: int) -> HopfQuotientSpec:
    """A*(a)//P(n,s)* for s >= a: kill the P-generators inside the a-th
    powers subalgebra."""
    heads = tuple((a, s) for _ in range(n))
    return HopfQuotientSpec(heads, (a, None),
                            "A*(%d)//P(%d,%d)*" % (a, n, s))


def doubled_profile_spec(profile, e: int) -> HopfQuotientSpec:
    """Dual of the e-fold double of a finite profile algebra."""
    heads = tuple((e, h + e) for h in profile.heights)
    return HopfQuotientSpec(heads, (e, e), "%s*(dbl^%d)" % (profile.name, e))


def basis_in_degree(spec: HopfQuotientSpec, d: int,
                    gen_degree_le=None) -> list[Mono]:
    """Admissible monomials of internal degree d, reverse-lex ordered.
    gen_degree_le filters by degree in the spec's own generators."""
    out = []

    def rec(i, rem, pref):
        if rem == 0:
            out.append(trim(pref))
            return
        w = (1 << i) - 1
        if w > rem:
            return
        lo, hi = spec.entry(i)
        step = 1 << lo
        cap = rem // w
        if hi is not None:
            cap = min(cap, (1 << hi) - 1)
        for e in range(0, cap + 1, step):
            rec(i + 1, rem - e * w, pref + [e])

    rec(1, d, [])
    if gen_degree_le is not None:
        out = [m for m in out if spec.gen_poly_degree(m) <= gen_degree_le]
    return sorted(out, reverse=True)


@lru_cache(maxsize=None)
def _cached_sub_basis(spec: HopfQuotientSpec, d: int, cap=None):
    return tuple(basis_in_degree(spec, d, cap))


def sub_basis(spec: HopfQuotientSpec, d: int, cap=None) -> tuple:
    return _cached_sub_basis(spec, d, cap)


def reduce_poly(p, spec: HopfQuotientSpec, strict_lo: bool = True) -> frozenset:
    """Project a zeta polynomial to the quotient (kill the monomial ideal).

    With strict_lo, a monomial violating a divisibility constraint is an
    error: it would mean the input does not lie in the subalgebra at all.
    """
    out = set()
    for m in p:
        if spec.in_ideal(m):
            continue
        if not spec.admissible(m):
            if strict_lo:
                raise ValueError("monomial %s not in subalgebra %s" % (m, spec))
            continue
        out.add(m)
    return frozenset(out)


def dual_coproduct(mon: Mono, spec: HopfQuotientSpec = FULL_DUAL) -> list:
    """Coproduct of an admissible monomial, reduced to the quotient.
    Returns (left, right) monomial pairs (GF(2) sum of tensors)."""
    if not spec.admissible(mon):
        raise ValueError("monomial %s not admissible for %s" % (mon, spec))
    out = []
    for l, r in psi_zeta(mon):
        if spec.in_ideal(l) or spec.in_ideal(r):
            continue
        out.append((l, r))
    return out


def check_hopf_ideal(spec: HopfQuotientSpec, D: int) -> bool:
    """Every killed generator power has psi inside I (x) A* + A* (x) I,
    checked through degree D."""
    i = 1
    while ((1 << i) - 1) <= D:
        lo, hi = spec.entry(i)
        if hi is not None:
            g = gen(i, 1 << hi)
            if mono_degree(g) <= D:
                for l, r in psi_zeta(g):
                    if not (spec.in_ideal(l) or spec.in_ideal(r)):
                        return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# adjoint coaction and the Cotor generators q_n


@dataclass(frozen=True)
class QClass:
    """The polynomial generator q_n of Cotor over the exterior quotient,
    homological degree 1 and internal degree 2^{n+1} - 1."""

    n: int

    @property
    def bidegree(self):
        return (1, (1 << (self.n + 1)) - 1)

    def __str__(self):
        return "q%d" % self.n


@lru_cache(maxsize=None)
def _adjoint_gen(n: int) -> tuple:
    """Closed-form left adjoint coaction on zn:
    sum_{i,j} z_i xi_{n-i-j}^{2^{i+j}} (x) z_j^{2^i}, as (left, right) pairs
    of zeta monomials with GF(2) parity already folded in."""
    acc = {}
    for i in range(n + 1):
        for j in range(n + 1 - i):
            xi_part = (gen(n - i - j, 1 << (i + j))
                       if n - i - j > 0 else ())
            left_poly = poly_mul(frozenset([gen(i, 1) if i else ()]),
                                 xi_mono_to_zeta(xi_part))
            right = gen(j, 1 << i) if j else ()
            for lm in left_poly:
                key = (lm, right)
                acc[key] = acc.get(key, 0) ^ 1
    return tuple(sorted(k for k, v in acc.items() if v))


@lru_cache(maxsize=None)
def adjoint_coaction(mon: Mono) -> tuple:
    """Multiplicative extension of the closed-form adjoint coaction."""
    terms = (((), ()),)
    for idx, e in enumerate(mon):
        n, p = idx + 1, 0
        base = _adjoint_gen(n)
        while e:
            if e & 1:
                powered = tuple((mono_pow2(l, p), mono_pow2(r, p))
                                for l, r in base)
                acc = {}
                for l1, r1 in terms:
                    for l2, r2 in powered:
                        key = (mono_mul(l1, l2), mono_mul(r1, r2))
                        acc[key] = acc.get(key, 0) ^ 1
                terms = tuple(sorted(k for k, v in acc.items() if v))
            e >>= 1
            p += 1
    return terms


def adjoint_coaction_diagram(mon: Mono) -> tuple:
    """The same coaction evaluated step by step from its defining diagram:
    double coproduct, switch, antipode on the last factor, multiply back.
    Independent of the closed formula; used as a cross-check."""
    acc = {}
    for a1, a23 in psi_zeta(mon):
        for a2, a3 in psi_zeta(a23):
            left = poly_mul(frozenset([a1]), dual_antipode(a3))
            for lm in left:
                key = (lm, a2)
                acc[key] = acc.get(key, 0) ^ 1
    return tuple(sorted(k for k, v in acc.items() if v))


def coaction_on_q(n: int, target: HopfQuotientSpec) -> list:
    """Left coaction on q_n: sum_j xi_{n-j}^{2^{j+1}} (x) q_j, with the
    left factors reduced into the target quotient of the squares
    subalgebra.  Returns (zeta polynomial, QClass) pairs."""
    if not (target.entry(1)[0] >= 1):
        raise ValueError("target must live inside the squares subalgebra")
    out = []
    for j in range(n + 1):
        xi_part = gen(n - j, 1 << (j + 1)) if n - j > 0 else ()
        left = reduce_poly(xi_mono_to_zeta(xi_part), target)
        if left:
            out.append((left, QClass(j)))
    return out


def double(p: frozenset, e: int) -> frozenset:
    """Frobenius doubling: z_i^{k} -> z_i^{2^e k}; lands in A*(e)."""
    return poly_pow2(p, e)


# ---------------------------------------------------------------------------
# printing / parsing


def format_mono(mon: Mono, xi: bool = False) -> str:
    if mon == ():
        return "1"
    g = "x" if xi else "z"
    parts = []
    for i, e in enumerate(mon, start=1):
        if e == 0:
            continue
        parts.append("%s%d" % (g, i) if e == 1 else "%s%d^%d" % (g, i, e))
    return "*".join(parts)


def format_poly(p, xi: bool = False, spec: HopfQuotientSpec = None) -> str:
    if not p:
        return "0"
    body = " + ".join(format_mono(m, xi) for m in sorted(p, reverse=True))
    if spec is not None and spec.name != "A*":
        return "%s @%s" % (body, spec.name)
    return body


_TERM_RE = re.compile(r"^(z|xi?)(\d+)(?:\^(\d+))?$")


def parse_dual(text: str) -> frozenset:
    """Parse sums/products like 'z1^3*z2 + z3'; xi atoms are converted to
    their zeta expansions.  '@spec' suffixes are stripped by the CLI."""
    text = text.strip()
    if text == "0":
        return frozenset()
    total = set()
    for summand in text.split("+"):
        factor = ONE
        for atom in summand.strip().split("*"):
            atom = atom.strip()
            if atom in ("1", ""):
                continue
            m = _TERM_RE.match(atom)
            if not m:
                raise ValueError("cannot parse dual monomial: %r" % atom)
            kind, i, e = m.group(1), int(m.group(2)), int(m.group(3) or 1)
            if kind == "z":
                factor = poly_mul(factor, frozenset([gen(i, e)]))
            else:
                factor = poly_mul(factor, poly_pow(chi_zeta(i), e))
        total ^= factor
    return frozenset(total)
