"""Admissible-basis oracle for the Steenrod algebra, via Adem relations.

Deliberately self-contained and slow: multiplication happens by Adem
rewriting of Sq^i words, and the change of basis to/from exponent tuples
goes through the iterated coproduct pairing, not through the Milnor
product.  Used by tests to cross-check the main Milnor-matrix product.

Words are tuples (i1,...,ik) of positive ints meaning Sq^{i1}...Sq^{ik};
admissible means i_j >= 2 i_{j+1}.
"""

from __future__ import annotations

from functools import lru_cache

from .f2linalg import F2Matrix, solve, F2Vector


def binom2(n: int, k: int) -> int:
    """Binomial coefficient mod 2 (Lucas: k must be a submask of n)."""
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if (n & k) == k else 0


def is_admissible(word) -> bool:
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


@lru_cache(maxsize=None)
def adem_rewrite(word) -> frozenset:
    """Express a Sq word in the admissible basis."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a >= 2 * b:
            continue
        acc = set()
        for c in range(a // 2 + 1):
            if binom2(b - c - 1, a - 2 * c):
                if c == 0:
                    repl = (a + b,)
                else:
                    repl = (a + b - c, c)
                acc ^= adem_rewrite(word[:i] + repl + word[i + 2:])
        return frozenset(acc)
    return frozenset([word])


def adem_product(u: frozenset, v: frozenset) -> frozenset:
    acc = set()
    for w1 in u:
        for w2 in v:
            acc ^= adem_rewrite(w1 + w2)
    return frozenset(acc)


@lru_cache(maxsize=None)
def admissible_words(d: int, cap=None) -> tuple:
    """All admissible words of total degree d (cap bounds the first entry)."""
    if d == 0:
        return ((),)
    cap = d if cap is None else cap
    out = []
    for i in range(min(d, cap), 0, -1):
        for w in admissible_words(d - i, i // 2):
            out.append((i,) + w)
    return tuple(out)


# -- pairing against xi monomials -------------------------------------------
# xi monomials are exponent tuples E = (e1, e2, ...) for xi_1^e1 xi_2^e2 ...


def _trim(t):
    t = list(t)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def xi_degree(E) -> int:
    return sum(e * ((1 << (i + 1)) - 1) for i, e in enumerate(E))


@lru_cache(maxsize=None)
def xi_monomials(d: int) -> tuple:
    out = []

    def rec(i, rem, pref):
        if rem == 0:
            out.append(_trim(pref))
            return
        part = (1 << i) - 1
        if part > rem:
            return
        for e in range(rem // part + 1):
            rec(i + 1, rem - e * part, pref + [e])

    rec(1, d, [])
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def _psi_xi_gen_power(n: int, p: int) -> tuple:
    """Terms of psi(xi_n^{2^p}) = sum xi_{n-i}^{2^{i+p}} (x) xi_i^{2^p}."""
    out = []
    for i in range(n + 1):
        left = [0] * (n - i)
        if n - i > 0:
            left[n - i - 1] = 1 << (i + p)
        right = [0] * i
        if i > 0:
            right[i - 1] = 1 << p
        out.append((tuple(left), tuple(right)))
    return tuple(out)


def _tensor_mul(terms1, terms2):
    acc = {}
    for l1, r1 in terms1:
        for l2, r2 in terms2:
            ml = _trim(tuple(a + b for a, b in
                             zip(list(l1) + [0] * len(l2), list(l2) + [0] * len(l1))))
            mr = _trim(tuple(a + b for a, b in
                             zip(list(r1) + [0] * len(r2), list(r2) + [0] * len(r1))))
            key = (ml, mr)
            acc[key] = acc.get(key, 0) ^ 1
    return tuple(k for k, v in acc.items() if v)


@lru_cache(maxsize=None)
def psi_xi(E) -> tuple:
    """Coproduct of a xi monomial, as a parity-reduced term list."""
    terms = (((), ()),)
    for idx, e in enumerate(E):
        n = idx + 1
        p = 0
        while e:
            if e & 1:
                terms = _tensor_mul(terms, _psi_xi_gen_power(n, p))
            e >>= 1
            p += 1
    return terms


@lru_cache(maxsize=None)
def pair_word_xi(word, E) -> int:
    """<Sq^{i1}...Sq^{ik}, xi^E> via the iterated coproduct."""
    if not word:
        return 1 if E == () else 0
    i1 = word[0]
    want = (i1,) if i1 > 0 else ()
    total = 0
    for left, right in psi_xi(E):
        if left == want:
            total ^= pair_word_xi(word[1:], right)
    return total


@lru_cache(maxsize=None)
def _basis_change(d: int):
    """(words, mons, word->Milnor rows, Milnor->word solver data) in deg d."""
    words = admissible_words(d)
    mons = xi_monomials(d)
    index = {m: k for k, m in enumerate(mons)}
    rows = []
    for w in words:
        bits = 0
        for m in mons:
            if pair_word_xi(w, m):
                bits |= 1 << index[m]
        rows.append(bits)
    assert len(words) == len(mons)
    mat = F2Matrix(len(words), len(mons), tuple(rows))
    return words, mons, mat


def adm_to_milnor(word) -> frozenset:
    d = sum(word)
    _, mons, mat = _basis_change(d)
    words = admissible_words(d)
    bits = mat.row_data[words.index(word)]
    return frozenset(m for k, m in enumerate(mons) if (bits >> k) & 1)


def milnor_to_adm(terms: frozenset) -> frozenset:
    """Invert the pairing matrix to express exponent tuples in Sq words."""
    if not terms:
        return frozenset()
    d = xi_degree(next(iter(terms)))
    words, mons, mat = _basis_change(d)
    index = {m: k for k, m in enumerate(mons)}
    target = 0
    for m in terms:
        target |= 1 << index[m]
    # rows of mat span the degree-d dual space: solve x * mat = target
    sol = solve(mat.transpose(), F2Vector(len(mons), target))
    assert sol is not None
    return frozenset(w for k, w in enumerate(words) if sol[k])


def oracle_product(r_terms: frozenset, s_terms: frozenset) -> frozenset:
    """Product of two Milnor-basis elements computed entirely on the
    admissible side; returns Milnor-basis terms."""
    u = milnor_to_adm(r_terms)
    v = milnor_to_adm(s_terms)
    acc = set()
    for w in adem_product(u, v):
        acc ^= adm_to_milnor(w)
    return frozenset(acc)
