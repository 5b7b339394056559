"""The mod-2 Steenrod algebra in the Milnor basis, with profile subalgebras.

A Milnor monomial Sq(r1,...,rk) is a tuple of naturals with rk > 0; the
empty tuple is the unit Sq(0).  An element is a frozenset of monomials of
equal degree (set symmetric difference = addition over GF(2)).

Finite subHopf algebras A(n) and the infinite exterior-type subalgebras
generated by the degree-halving-kernel primitives are cut out by profile
functions: Sq(r1,...) is admissible when r_i < 2^h(i) for all i.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .f2linalg import F2Matrix, rank_of_rows

Mono = tuple  # exponent tuple (r1,...,rk), trailing zeros stripped


def trim(exps) -> Mono:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def mono_degree(mon: Mono) -> int:
    return sum(r * ((1 << (i + 1)) - 1) for i, r in enumerate(mon))


def element_degree(terms: frozenset):
    """Common degree of a homogeneous term set, or None for zero."""
    degs = {mono_degree(m) for m in terms}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("inhomogeneous element: degrees %s" % sorted(degs))
    return degs.pop()


def _no_carries(entries) -> bool:
    """Multinomial coefficient of the entries is odd iff binary digits are
    disjoint (Lucas)."""
    seen = 0
    for e in entries:
        if seen & e:
            return False
        seen |= e
    return True


@lru_cache(maxsize=None)
def mono_product(r: Mono, s: Mono) -> frozenset:
    """Milnor-matrix product of two basis monomials.

    Matrices X = (x_ij) with sum_j 2^j x_ij = r_i (rows, i >= 1) and
    sum_i x_ij = s_j (columns, j >= 1); each contributes Sq(T) with
    T_n = sum_{i+j=n} x_ij when every diagonal multinomial is odd.
    """
    m, n = len(r), len(s)
    if m == 0:
        return frozenset([s])
    if n == 0:
        return frozenset([r])
    result = set()
    # cells (i,j), i in 1..m, j in 1..n, chosen in row-major order
    cells = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]

    def rec(idx, row_rem, col_rem, x):
        if idx == len(cells):
            diag_max = m + n
            t = [0] * (diag_max + 1)
            ok = True
            for dn in range(1, diag_max + 1):
                entries = []
                for i in range(max(0, dn - n), min(m, dn) + 1):
                    j = dn - i
                    if i == 0:
                        e = col_rem[j]
                    elif j == 0:
                        e = row_rem[i]
                    else:
                        e = x[(i, j)]
                    if e:
                        entries.append(e)
                    t[dn] += e
                if not _no_carries(entries):
                    ok = False
                    break
            if ok:
                mon = trim(t[1:])
                if mon in result:
                    result.discard(mon)
                else:
                    result.add(mon)
            return
        i, j = cells[idx]
        w = 1 << j
        max_v = min(row_rem[i] // w, col_rem[j])
        for v in range(max_v + 1):
            row_rem[i] -= v * w
            col_rem[j] -= v
            x[(i, j)] = v
            rec(idx + 1, row_rem, col_rem, x)
            row_rem[i] += v * w
            col_rem[j] += v

    rec(0, [0] + list(r), [0] + list(s), {})
    return frozenset(result)


def product(a: frozenset, b: frozenset) -> frozenset:
    acc = set()
    for r in a:
        for s in b:
            acc ^= mono_product(r, s)
    return frozenset(acc)


@lru_cache(maxsize=None)
def mono_coproduct(mon: Mono) -> tuple:
    """All componentwise splittings Sq(a) (x) Sq(b) with a + b = mon."""
    ranges = [range(r + 1) for r in mon]
    out = []
    for choice in itertools.product(*ranges):
        left = trim(choice)
        right = trim(tuple(r - c for r, c in zip(mon, choice)))
        out.append((left, right))
    return tuple(out)


@lru_cache(maxsize=None)
def mono_antipode(mon: Mono) -> frozenset:
    """chi solved degreewise from sum chi(a') a'' = eps(a) 1."""
    if mon == ():
        return frozenset([()])
    acc = set()
    for left, right in mono_coproduct(mon):
        if right == ():
            continue  # this is the chi(mon) * 1 term being solved for
        for t in mono_antipode(left):
            acc ^= mono_product(t, right)
    return frozenset(acc)


def antipode(a: frozenset) -> frozenset:
    acc = set()
    for mon in a:
        acc ^= mono_antipode(mon)
    return frozenset(acc)


def mono_verschiebung(mon: Mono):
    """Halve all exponents; zero when any is odd (dual of squaring)."""
    if any(r & 1 for r in mon):
        return None
    return trim(tuple(r >> 1 for r in mon))


def verschiebung(a: frozenset) -> frozenset:
    acc = set()
    for mon in a:
        half = mono_verschiebung(mon)
        if half is not None:
            acc ^= {half}
    return frozenset(acc)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """Exponent-height function h: Sq(r1,...) admissible iff r_i < 2^h(i).

    heights gives h(1), h(2), ...; indices beyond use `tail`.
    A height of None means no bound (infinite).
    """

    heights: tuple = ()
    tail: object = None
    name: str = "A"

    def h(self, i: int):
        if 1 <= i <= len(self.heights):
            return self.heights[i - 1]
        return self.tail

    @property
    def is_finite(self) -> bool:
        if self.tail is None or self.tail != 0:
            return False
        return all(h is not None for h in self.heights)

    def admissible(self, mon: Mono) -> bool:
        for i, r in enumerate(mon, start=1):
            hi = self.h(i)
            if hi is not None and r >= (1 << hi):
                return False
        return True

    def top_degree(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite profile has no top degree")
        return sum(((1 << h) - 1) * ((1 << i) - 1)
                   for i, h in enumerate(self.heights, start=1))


FULL = Profile((), None, "A")


def profile_A(n: int) -> Profile:
    """A(n), generated by Sq(1), Sq(2), ..., Sq(2^n): h(i) = n + 2 - i."""
    return Profile(tuple(n + 2 - i for i in range(1, n + 2)), 0, "A(%d)" % n)


def profile_E(s: int) -> Profile:
    """Constant profile h = s: the subalgebra generated by the basis
    elements Sq(0,..,0,2^a) with a < s.  s = 1 is the exterior algebra on
    the Milnor primitives; infinite for s >= 1."""
    return Profile((), s, "E(%d)" % s)


def basis_in_degree(p: Profile, d: int) -> list[Mono]:
    """Profile-admissible monomials of degree d, reverse-lex ordered."""
    out = []

    def rec(i, rem, prefix):
        part = (1 << i) - 1
        if rem == 0:
            out.append(trim(prefix))
            return
        if part > rem:
            return
        hi = p.h(i)
        max_r = rem // part
        if hi is not None:
            max_r = min(max_r, (1 << hi) - 1)
        for r in range(max_r + 1):
            rec(i + 1, rem - r * part, prefix + [r])

    rec(1, d, [])
    return sorted(out, reverse=True)


@lru_cache(maxsize=None)
def _cached_basis(heights, tail, d):
    return tuple(basis_in_degree(Profile(heights, tail), d))


def basis(p: Profile, d: int) -> tuple:
    return _cached_basis(p.heights, p.tail, d)


def pd_degree(n: int) -> int:
    """Top nonzero degree of A(n), confirmed against enumeration."""
    p = profile_A(n)
    top = p.top_degree()
    assert basis(p, top) and not any(basis(p, top + k) for k in range(1, 8))
    return top


def smallest_A_containing_degree(d: int) -> int:
    """Least n with every Milnor monomial of degree <= d inside A(n)."""
    n = 0
    while True:
        p = profile_A(n)
        if all(p.admissible(m) for dd in range(d + 1) for m in basis(FULL, dd)):
            return n
        n += 1


# ---------------------------------------------------------------------------
# multiplication matrices and Poincare duality


def mult_matrix(p: Profile, d1: int, d2: int, product_fn=None) -> F2Matrix:
    """Matrix of the product basis(d1) x basis(d2) -> basis(d1+d2).

    Row (i * dim2 + j) holds the expansion of b1[i] * b2[j].
    """
    product_fn = product_fn or mono_product
    b1, b2 = basis(p, d1), basis(p, d2)
    target = basis(p, d1 + d2)
    index = {m: k for k, m in enumerate(target)}
    rows = []
    for u in b1:
        for v in b2:
            bits = 0
            for t in product_fn(u, v):
                # products of admissible monomials stay admissible for a
                # valid profile; a KeyError here falsifies closure
                bits |= 1 << index[t]
            rows.append(bits)
    return F2Matrix(len(b1) * len(b2), len(target), tuple(rows))


@dataclass(frozen=True)
class PDWitness:
    n: int
    pd: int
    dims: tuple
    pairing_ranks: tuple
    ok: bool
    failure: object = None  # first degree where the pairing degenerates


def poincare_duality_check(n: int, product_fn=None) -> PDWitness:
    """Certify dim A(n)^pd = 1 and perfect multiplication pairings.

    product_fn may be overridden (tests inject a corrupted product as a
    negative control).
    """
    product_fn = product_fn or mono_product
    p = profile_A(n)
    pd = p.top_degree()
    dims = tuple(len(basis(p, d)) for d in range(pd + 1))
    if dims[pd] != 1:
        return PDWitness(n, pd, dims, (), False, ("top-dim", dims[pd]))
    top = basis(p, pd)[0]
    ranks = []
    for k in range(pd + 1):
        bk, bc = basis(p, k), basis(p, pd - k)
        if len(bk) != len(bc):
            return PDWitness(n, pd, dims, tuple(ranks), False,
                             ("dims", k, len(bk), len(bc)))
        rows = []
        for u in bk:
            bits = 0
            for j, v in enumerate(bc):
                if top in product_fn(u, v):
                    bits |= 1 << j
            rows.append(bits)
        r = rank_of_rows(rows, len(bc))
        ranks.append((k, len(bk), r))
        if r != len(bk):
            return PDWitness(n, pd, dims, tuple(ranks), False, ("rank", k))
    return PDWitness(n, pd, dims, tuple(ranks), True)


# ---------------------------------------------------------------------------
# element wrapper, parsing and printing


@dataclass(frozen=True)
class MilnorElement:
    """A homogeneous GF(2) sum of Milnor monomials."""

    terms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        element_degree(self.terms)  # raises when inhomogeneous

    @property
    def degree(self):
        return element_degree(self.terms)

    @staticmethod
    def monomial(*exps) -> "MilnorElement":
        return MilnorElement(frozenset([trim(exps)]))

    @staticmethod
    def zero() -> "MilnorElement":
        return MilnorElement(frozenset())

    @staticmethod
    def unit() -> "MilnorElement":
        return MilnorElement(frozenset([()]))

    def __add__(self, other):
        return MilnorElement(self.terms ^ other.terms)

    def __mul__(self, other):
        return MilnorElement(product(self.terms, other.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        return format_milnor(self.terms)


def format_mono(mon: Mono) -> str:
    if mon == ():
        return "Sq(0)"
    return "Sq(%s)" % ",".join(str(r) for r in mon)


def format_milnor(terms) -> str:
    if not terms:
        return "0"
    return " + ".join(format_mono(m) for m in sorted(terms, reverse=True))


_SQ_RE = re.compile(r"^Sq\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)$")


def parse_mono(text: str) -> Mono:
    text = text.strip()
    m = _SQ_RE.match(text)
    if not m:
        raise ValueError("cannot parse Milnor monomial: %r" % text)
    return trim(int(t) for t in m.group(1).split(","))


def parse_milnor(text: str) -> MilnorElement:
    """Parse sums/products of Sq(...) monomials; '0' is the zero element."""
    text = text.strip()
    if text == "0":
        return MilnorElement.zero()
    total = MilnorElement.zero()
    for summand in text.split("+"):
        factor = MilnorElement.unit()
        for atom in summand.split("*"):
            atom = atom.strip()
            if atom == "1":
                continue
            factor = factor * MilnorElement(frozenset([parse_mono(atom)]))
        total = total + factor
    return total
