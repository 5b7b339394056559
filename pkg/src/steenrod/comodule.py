"""Finite-type graded left comodules over quotient coalgebras of A*.

A ComoduleWindow stores an ordered graded basis and the full coaction
table; coefficients are zeta-exponent monomials admissible for the
coalgebra spec.  Coaction terms always include the counit term (1, x) and
every other term lands in strictly lower internal degree, so windows are
closed under everything we do to them.

`window_complete` distinguishes honestly finite comodules from degree
truncations of infinite ones; unipotence verdicts are only ever issued
for the former, since a truncation always exhausts its own window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import dual_hopf as dh
from .dual_hopf import HopfQuotientSpec, FULL_DUAL
from .f2linalg import (F2Matrix, F2Vector, kernel_basis, rank_of_rows,
                       row_space_basis, in_span, quotient_reps, solve)
from .milnor import Mono, trim
from . import milnor


@dataclass(frozen=True)
class ComoduleWindow:
    spec: HopfQuotientSpec
    D: int
    basis: tuple                 # ((label, degree), ...)
    coaction: tuple              # per index: tuple of (coef monomial, index)
    window_complete: bool = True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def degrees(self) -> list[int]:
        return sorted({d for _, d in self.basis})

    def indices_in_degree(self, d: int) -> list[int]:
        return [i for i, (_, dd) in enumerate(self.basis) if dd == d]

    def reduced_terms(self, i: int) -> list:
        return [(c, j) for c, j in self.coaction[i] if c != ()]

    def validate(self):
        for i, terms in enumerate(self.coaction):
            counit = [j for c, j in terms if c == ()]
            if counit != [i]:
                raise ValueError("counit law fails at basis element %d" % i)
            for c, j in terms:
                if not self.spec.admissible(c):
                    raise ValueError("coefficient %s not admissible" % (c,))
                if dh.mono_degree(c) + self.degree(j) != self.degree(i):
                    raise ValueError("degree mismatch in coaction of %d" % i)
        # coassociativity: (psi x id) mu = (id x mu) mu, exactly
        for i in range(self.dim):
            lhs, rhs = {}, {}
            for c, j in self.coaction[i]:
                for c1, c2 in dh.dual_coproduct(c, self.spec):
                    key = (c1, c2, j)
                    lhs[key] = lhs.get(key, 0) ^ 1
                for c2, j2 in self.coaction[j]:
                    key = (c, c2, j2)
                    rhs[key] = rhs.get(key, 0) ^ 1
            if ({k for k, v in lhs.items() if v} !=
                    {k for k, v in rhs.items() if v}):
                raise ValueError("coassociativity fails at basis element %d" % i)
        return self

    def coact_vector(self, bits: int) -> dict:
        """Coaction of a vector: {(coef monomial, index): parity}."""
        acc = {}
        i = 0
        b = bits
        while b:
            if b & 1:
                for c, j in self.coaction[i]:
                    key = (c, j)
                    acc[key] = acc.get(key, 0) ^ 1
            b >>= 1
            i += 1
        return {k: 1 for k, v in acc.items() if v}


# ---------------------------------------------------------------------------
# constructors


def trivial_comodule(degrees, spec: HopfQuotientSpec = FULL_DUAL,
                     D=None) -> ComoduleWindow:
    degrees = list(degrees)
    D = max(degrees, default=0) if D is None else D
    basis = tuple(("t%d_%d" % (k, d), d) for k, d in enumerate(degrees))
    coaction = tuple((((), i),) for i in range(len(degrees)))
    return ComoduleWindow(spec, D, basis, coaction).validate()


def extended_comodule(W, spec: HopfQuotientSpec, D: int) -> ComoduleWindow:
    """The cofree comodule (coalgebra window) tensor W, coaction on the
    left factor only.  W is a list of (label, degree) pairs."""
    basis = []
    for w_label, w_deg in W:
        for d in range(0, D - w_deg + 1):
            for c in dh.sub_basis(spec, d):
                basis.append(((c, w_label), d + w_deg))
    basis.sort(key=lambda t: (t[1], t[0][1], t[0][0]))
    index = {lab: i for i, (lab, _) in enumerate(basis)}
    coaction = []
    for (c, w_label), _ in basis:
        terms = []
        for c1, c2 in dh.dual_coproduct(c, spec):
            terms.append((c1, index[(c2, w_label)]))
        coaction.append(tuple(terms))
    return ComoduleWindow(spec, D, tuple(basis), tuple(coaction),
                          window_complete=False).validate()


def algebra_comodule(sub_spec: HopfQuotientSpec,
                     over_spec: HopfQuotientSpec, D: int) -> ComoduleWindow:
    """A window of the algebra cut out by sub_spec, as a left comodule over
    the quotient coalgebra over_spec (coproduct, then project the left
    factor)."""
    basis = []
    for d in range(D + 1):
        for m in dh.sub_basis(sub_spec, d):
            basis.append((m, d))
    index = {m: i for i, (m, _) in enumerate(basis)}
    coaction = []
    for m, _ in basis:
        terms = {}
        for l, r in dh.psi_zeta(m):
            if over_spec.in_ideal(l):
                continue
            if not over_spec.admissible(l):
                raise ValueError("coaction leaves %s" % over_spec)
            key = (l, index[r])
            terms[key] = terms.get(key, 0) ^ 1
        coaction.append(tuple(sorted(k for k, v in terms.items() if v)))
    return ComoduleWindow(over_spec, D, tuple(basis), tuple(coaction),
                          window_complete=False).validate()


def xi_span_comodule(k: int, D: int, doubled: bool = False) -> ComoduleWindow:
    """The subcomodule of A* (or of the squares subalgebra, when doubled)
    spanned by xi monomials of polynomial degree at most k.

    Basis labels are xi-exponent tuples; coefficients are converted to the
    canonical zeta representation.
    """
    sub = dh.sub_powers(1) if doubled else FULL_DUAL
    basis = []
    for d in range(D + 1):
        for m in dh.sub_basis(sub, d, cap=k):
            basis.append((m, d))
    index = {m: i for i, (m, _) in enumerate(basis)}
    coaction = []
    for m, _ in basis:
        terms = {}
        for l, r in dh.psi_xi(m):
            # right factors keep polynomial degree <= k
            for lz in dh.xi_mono_to_zeta(l):
                key = (lz, index[r])
                terms[key] = terms.get(key, 0) ^ 1
        coaction.append(tuple(sorted(k2 for k2, v in terms.items() if v)))
    return ComoduleWindow(FULL_DUAL, D, tuple(basis), tuple(coaction),
                          window_complete=False).validate()


# ---------------------------------------------------------------------------
# subspaces, primitives, filtrations


@dataclass(frozen=True)
class Filtration:
    """Ascending list of subcomodule bases (each a tuple of homogeneous
    bit-vectors over the ambient basis)."""

    stages: tuple

    @property
    def length(self) -> int:
        return len(self.stages)


def _graded(M: ComoduleWindow, vectors):
    by_deg = {}
    for bits in vectors:
        degs = {M.degree(i) for i in range(M.dim) if (bits >> i) & 1}
        if len(degs) != 1:
            raise ValueError("subspace vector not homogeneous")
        by_deg.setdefault(degs.pop(), []).append(bits)
    return by_deg


def subspace_contains(M, vectors, bits) -> bool:
    return in_span(list(vectors), M.dim, bits)


def is_subcomodule(M: ComoduleWindow, vectors) -> bool:
    """Closure under coaction: all reduced components stay in the span."""
    vecs = list(vectors)
    for bits in vecs:
        comps = {}
        for (c, j), _ in M.coact_vector(bits).items():
            if c == ():
                continue
            comps[c] = comps.get(c, 0) ^ (1 << j)
        for c, comp in comps.items():
            if comp and not in_span(vecs, M.dim, comp):
                return False
    return True


def primitives(M: ComoduleWindow, relative_to=()) -> list[int]:
    """Basis of {x : mu(x) = 1 (x) x  mod  C (x) span(relative_to)},
    returned as homogeneous bit-vectors (all degrees of the window)."""
    rel = list(relative_to)
    out = []
    for d in M.degrees():
        idxs = M.indices_in_degree(d)
        if not idxs:
            continue
        cols = len(idxs)
        # rows: for each coefficient monomial c != 1, the component vector
        # in degree d - |c| reduced modulo the relative subspace
        rows_by_c = {}
        for col, i in enumerate(idxs):
            for c, j in M.coaction[i]:
                if c == ():
                    continue
                rows_by_c.setdefault(c, {}).setdefault(col, 0)
                rows_by_c[c][col] ^= 1 << j
        constraint_rows = []
        for c, colmap in sorted(rows_by_c.items()):
            dd = d - dh.mono_degree(c)
            rel_here = [b for b in rel
                        if b and all(M.degree(i2) == dd
                                     for i2 in range(M.dim) if (b >> i2) & 1)]
            _, reduce = quotient_reps(rel_here, M.dim)
            # matrix over target indices: one constraint row per target bit
            reduced_cols = {col: reduce(v) for col, v in colmap.items()}
            target_bits = 0
            for v in reduced_cols.values():
                target_bits |= v
            t = target_bits
            while t:
                low = t & -t
                row = 0
                for col in range(cols):
                    if reduced_cols.get(col, 0) & low:
                        row |= 1 << col
                constraint_rows.append(row)
                t ^= low
        mat = F2Matrix(len(constraint_rows), cols, tuple(constraint_rows))
        for v in kernel_basis(mat):
            bits = 0
            for col in range(cols):
                if v[col]:
                    bits |= 1 << idxs[col]
            out.append(bits)
    return out


def primitive_sequence(M: ComoduleWindow) -> Filtration:
    """Stages M^[1] <= M^[2] <= ... (preimages of primitives of the
    successive quotients), stopping at stabilisation."""
    stages = []
    current = []
    while True:
        prim = primitives(M, relative_to=current)
        new = row_space_basis(list(current) + list(prim), M.dim)
        if len(new) == len(row_space_basis(current, M.dim)) and stages:
            break
        stages.append(tuple(new))
        if len(new) == len(current) and not prim:
            break
        current = new
        if len(new) == M.dim:
            break
    # drop a repeated final stage
    pruned = [stages[0]]
    for s in stages[1:]:
        if len(s) != len(pruned[-1]):
            pruned.append(s)
    return Filtration(tuple(pruned))


def filtration_is_unipotent(M: ComoduleWindow, filt: Filtration) -> bool:
    """Each stage a subcomodule and each successive quotient trivial."""
    prev = []
    for stage in filt.stages:
        stage = list(stage)
        if not is_subcomodule(M, stage):
            return False
        for bits in stage:
            comps = {}
            for (c, j) in M.coact_vector(bits):
                if c != ():
                    comps[c] = comps.get(c, 0) ^ (1 << j)
            for comp in comps.values():
                if comp and not in_span(prev, M.dim, comp):
                    return False
        prev = stage
    return True


def is_unipotent(M: ComoduleWindow):
    """The primitive-sequence filtration when it exhausts an honestly
    finite comodule; None otherwise ("not unipotent in window").

    A truncation of an infinite comodule always exhausts its own window,
    so a verdict there would say nothing about the full comodule; such
    windows are refused.
    """
    if not M.window_complete:
        return None
    filt = primitive_sequence(M)
    if rank_of_rows(list(filt.stages[-1]), M.dim) == M.dim:
        return filt
    return None


# ---------------------------------------------------------------------------
# tensor, cotensor, maps


def tensor_diagonal(M: ComoduleWindow, N: ComoduleWindow) -> ComoduleWindow:
    if M.spec != N.spec:
        raise ValueError("coalgebra mismatch")
    D = max(M.D, N.D)
    pairs = [(i, j) for i in range(M.dim) for j in range(N.dim)
             if M.degree(i) + N.degree(j) <= D]
    pairs.sort(key=lambda p: (M.degree(p[0]) + N.degree(p[1]), p))
    index = {p: k for k, p in enumerate(pairs)}
    basis = tuple(((M.basis[i][0], N.basis[j][0]),
                   M.degree(i) + N.degree(j)) for i, j in pairs)
    coaction = []
    for i, j in pairs:
        terms = {}
        for c1, i2 in M.coaction[i]:
            for c2, j2 in N.coaction[j]:
                c = dh.mono_mul(c1, c2)
                if M.spec.in_ideal(c):
                    continue
                key = (c, index[(i2, j2)])
                terms[key] = terms.get(key, 0) ^ 1
        coaction.append(tuple(sorted(k for k, v in terms.items() if v)))
    return ComoduleWindow(M.spec, D, basis, tuple(coaction),
                          M.window_complete and N.window_complete).validate()


def right_coaction_of_algebra(sub_spec: HopfQuotientSpec,
                              over_spec: HopfQuotientSpec, D: int):
    """Right coaction table of an algebra window over a quotient coalgebra:
    (1 x pi) psi.  Returns (basis, table) with table entries (index, c)."""
    basis = []
    for d in range(D + 1):
        for m in dh.sub_basis(sub_spec, d):
            basis.append((m, d))
    index = {m: i for i, (m, _) in enumerate(basis)}
    table = []
    for m, _ in basis:
        terms = {}
        for l, r in dh.psi_zeta(m):
            if over_spec.in_ideal(r):
                continue
            key = (index[l], r)
            terms[key] = terms.get(key, 0) ^ 1
        table.append(tuple(sorted(k for k, v in terms.items() if v)))
    return basis, table


def cotensor_dims(sub_spec: HopfQuotientSpec, over_spec: HopfQuotientSpec,
                  N: ComoduleWindow, D: int) -> dict:
    """Dimensions per degree of (algebra window) cotensor_{over_spec} N,
    the equalizer of mu_R (x) id and id (x) mu_L."""
    if N.spec != over_spec:
        raise ValueError("N must be a comodule over the cotensor coalgebra")
    m_basis, m_table = right_coaction_of_algebra(sub_spec, over_spec, D)
    out = {}
    for d in range(D + 1):
        cells = [(i, j) for i, (_, di) in enumerate(m_basis)
                 for j in range(N.dim)
                 if di + N.degree(j) == d]
        if not cells:
            out[d] = 0
            continue
        col = {p: k for k, p in enumerate(cells)}
        rows = {}
        for (i, j), k in col.items():
            for i2, c in m_table[i]:
                if c == ():
                    continue
                key = ("M", i2, c, j)
                rows[key] = rows.get(key, 0) ^ (1 << k)
            for c, j2 in N.coaction[j]:
                if c == ():
                    continue
                key = ("M", i, c, j2)  # same indexing space after the twist
                rows[key] = rows.get(key, 0) ^ (1 << k)
        mat = F2Matrix(len(rows), len(cells),
                       tuple(v for _, v in sorted(rows.items())))
        out[d] = len(cells) - rank_of_rows(list(mat.row_data), len(cells))
    return out


def comodule_maps(M: ComoduleWindow, N: ComoduleWindow, shift: int):
    """Basis of the space of comodule maps f with f(M_d) <= N_{d+shift}.

    Solves mu_N(f x) = (id (x) f)(mu_M x) exactly; every basis element of
    M contributes complete constraints because coaction terms never leave
    the window.  Returns a list of maps, each a tuple over M indices of
    bit-vectors over N's basis.
    """
    if M.spec != N.spec:
        raise ValueError("coalgebra mismatch")
    unknowns = []
    for i in range(M.dim):
        for j in range(N.dim):
            if N.degree(j) == M.degree(i) + shift:
                unknowns.append((i, j))
    if not unknowns:
        return []
    col = {u: k for k, u in enumerate(unknowns)}
    rows = {}
    for i in range(M.dim):
        # constraint indexed by (source i, coefficient c, N target t):
        # sum over j of f[i -> j] coeff of (c,t) in mu_N(j)
        #   = sum over (c, y) in mu_M(i) of f[y -> t]
        for (ii, j), k in col.items():
            if ii != i:
                continue
            for c, t in N.coaction[j]:
                key = (i, c, t)
                rows[key] = rows.get(key, 0) ^ (1 << k)
        for c, y in M.coaction[i]:
            for (yy, t), k in col.items():
                if yy != y:
                    continue
                key = (i, c, t)
                rows[key] = rows.get(key, 0) ^ (1 << k)
    mat = F2Matrix(len(rows), len(unknowns),
                   tuple(v for _, v in sorted(rows.items())))
    sols = kernel_basis(mat)
    maps = []
    for v in sols:
        f = [0] * M.dim
        for k, (i, j) in enumerate(unknowns):
            if v[k]:
                f[i] |= 1 << j
        maps.append(tuple(f))
    return maps


def check_comodule_map(M: ComoduleWindow, N: ComoduleWindow, f) -> bool:
    for i in range(M.dim):
        lhs = {}
        j = 0
        b = f[i]
        while b:
            if b & 1:
                for c, t in N.coaction[j]:
                    key = (c, t)
                    lhs[key] = lhs.get(key, 0) ^ 1
            b >>= 1
            j += 1
        rhs = {}
        for c, y in M.coaction[i]:
            t = 0
            b = f[y]
            while b:
                if b & 1:
                    key = (c, t)
                    rhs[key] = rhs.get(key, 0) ^ 1
                b >>= 1
                t += 1
        if ({k for k, v in lhs.items() if v} != {k for k, v in rhs.items() if v}):
            return False
    return True


def cohom(M: ComoduleWindow, N: ComoduleWindow, shifts=None) -> dict:
    """Comodule-map spaces per degree shift, each map re-certified."""
    if shifts is None:
        lo = min((d for _, d in N.basis), default=0) - max(
            (d for _, d in M.basis), default=0)
        hi = max((d for _, d in N.basis), default=0) - min(
            (d for _, d in M.basis), default=0)
        shifts = range(lo, hi + 1)
    out = {}
    for s in shifts:
        maps = comodule_maps(M, N, s)
        for f in maps:
            assert check_comodule_map(M, N, f)
        out[s] = maps
    return out


# ---------------------------------------------------------------------------
# duality with modules


@dataclass(frozen=True)
class DualizedModule:
    """Degreewise dual of a comodule window: a module over the dual algebra
    in the window, action twisted by the antipode."""

    basis: tuple                # same labels/degrees as the source comodule
    action: dict                # Milnor monomial -> tuple of column bit-vectors
    D: int

    def act(self, sq_mon: Mono, i: int) -> int:
        cols = self.action.get(sq_mon)
        return cols[i] if cols else 0


def _chi_pairing(sq: Mono, E: Mono) -> int:
    """<chi(Sq(R)), zeta^E>."""
    parity = 0
    for t in milnor.mono_antipode(sq):
        parity ^= dh.pair_sq_zeta(t, E)
    return parity


def dualize_comodule(M: ComoduleWindow) -> DualizedModule:
    """(a . phi_x)(y) = sum <chi(a), c> over terms (c, x) of mu(y)."""
    action = {}
    for d in range(1, M.D + 1):
        for sq in milnor.basis(milnor.FULL, d):
            cols = [0] * M.dim
            for y in range(M.dim):
                for c, x in M.coaction[y]:
                    if dh.mono_degree(c) != d:
                        continue
                    if _chi_pairing(sq, c):
                        cols[x] ^= 1 << y
            if any(cols):
                action[sq] = tuple(cols)
    return DualizedModule(M.basis, action, M.D)


def double_dual_coaction(dm: DualizedModule) -> tuple:
    """Recover a coaction table from a dualized module; dualizing twice
    returns the original table because the Sq/zeta pairing is perfect in
    each degree."""
    dim = len(dm.basis)
    coaction = []
    for y in range(dim):
        terms = {((), y)}
        for x in range(dim):
            d = dm.basis[y][1] - dm.basis[x][1]
            if d <= 0:
                continue
            sqs = milnor.basis(milnor.FULL, d)
            zs = dh.sub_basis(FULL_DUAL, d)
            vals = [(dm.act(sq, x) >> y) & 1 for sq in sqs]
            if not any(vals):
                continue
            # coefficient polynomial c with <chi(Sq), c> matching vals
            rows = []
            for E in zs:
                bits = 0
                for k, sq in enumerate(sqs):
                    if _chi_pairing(sq, E):
                        bits |= 1 << k
                rows.append(bits)
            target = 0
            for k, v in enumerate(vals):
                if v:
                    target |= 1 << k
            sol = solve(F2Matrix(len(zs), len(sqs), tuple(rows)).transpose(),
                        F2Vector(len(sqs), target))
            assert sol is not None
            for k, E in enumerate(zs):
                if sol[k]:
                    terms.add((E, x))
        coaction.append(frozenset(terms))
    return tuple(coaction)


# ---------------------------------------------------------------------------
# random comodules (seeded)


def random_comodule(rng, spec: HopfQuotientSpec, dim: int, max_deg: int,
                    tries: int = 200) -> ComoduleWindow:
    """Seeded random window comodule: upper-triangular coaction closed up
    by solving the coassociativity constraint layer by layer, with
    rejection when a layer has no consistent completion."""
    for _ in range(tries):
        degs = sorted(rng.choice(range(0, max_deg + 1)) for _ in range(dim))
        basis = tuple(("m%d" % i, d) for i, d in enumerate(degs))
        c_mat = {}
        ok = True
        pairs = sorted(((i, j) for i in range(dim) for j in range(dim)
                        if degs[i] > degs[j]),
                       key=lambda p: degs[p[0]] - degs[p[1]])
        for i, j in pairs:
            d = degs[i] - degs[j]
            mons = [m for m in dh.sub_basis(spec, d) if m != ()]
            # required reduced coproduct from already chosen entries
            need = {}
            for k in range(dim):
                if degs[j] < degs[k] < degs[i]:
                    for a in c_mat.get((i, k), ()):
                        for b in c_mat.get((k, j), ()):
                            key = (a, b)
                            need[key] = need.get(key, 0) ^ 1
            need = {k for k, v in need.items() if v}
            # solve reduced-psi(x) = need over the span of mons
            term_lists = []
            all_keys = set()
            for m in mons:
                terms = {}
                for l, r in dh.dual_coproduct(m, spec):
                    if l == () or r == ():
                        continue
                    terms[(l, r)] = terms.get((l, r), 0) ^ 1
                terms = {k for k, v in terms.items() if v}
                term_lists.append(terms)
                all_keys |= terms
            all_keys |= need
            key_index = {k: t for t, k in enumerate(sorted(all_keys))}
            rows = [0] * len(key_index)
            for c_idx, terms in enumerate(term_lists):
                for t in terms:
                    rows[key_index[t]] |= 1 << c_idx
            target = 0
            for t in need:
                target |= 1 << key_index[t]
            mat = F2Matrix(len(rows), len(mons), tuple(rows))
            sol = solve(mat, F2Vector(len(rows), target))
            if sol is None:
                ok = False
                break
            # add a random kernel element for variety
            ker = kernel_basis(mat)
            pick = sol.bits
            for v in ker:
                if rng.random() < 0.5:
                    pick ^= v.bits
            chosen = frozenset(m for k, m in enumerate(mons) if (pick >> k) & 1)
            if chosen:
                c_mat[(i, j)] = chosen
        if not ok:
            continue
        coaction = []
        for i in range(dim):
            terms = [((), i)]
            for j in range(dim):
                for m in c_mat.get((i, j), ()):
                    terms.append((m, j))
            coaction.append(tuple(terms))
        try:
            return ComoduleWindow(spec, max(degs, default=0), basis,
                                  tuple(coaction)).validate()
        except ValueError:
            continue
    raise RuntimeError("could not sample a valid comodule")


# ---------------------------------------------------------------------------
# serialization


FORMAT_TAG = "steenrod-comodule-v1"


def spec_to_json(spec: HopfQuotientSpec) -> dict:
    return {"heads": [list(h) for h in spec.heads],
            "tail": list(spec.tail), "name": spec.name}


def spec_from_json(d) -> HopfQuotientSpec:
    to_pair = lambda p: (p[0], None if p[1] is None else p[1])
    return HopfQuotientSpec(tuple(to_pair(h) for h in d["heads"]),
                            to_pair(d["tail"]), d["name"])


def comodule_to_json(M: ComoduleWindow) -> str:
    doc = {
        "format": FORMAT_TAG,
        "coalgebra": spec_to_json(M.spec),
        "D": M.D,
        "window_complete": M.window_complete,
        "basis": [[str(lab), d] for lab, d in M.basis],
        "coaction": [[[list(c), j] for c, j in terms]
                     for terms in M.coaction],
    }
    return json.dumps(doc, sort_keys=True, indent=1)


def comodule_from_json(text: str) -> ComoduleWindow:
    doc = json.loads(text)
    if doc.get("format") != FORMAT_TAG:
        raise ValueError("unsupported comodule format")
    spec = spec_from_json(doc["coalgebra"])
    basis = tuple((lab, d) for lab, d in doc["basis"])
    coaction = tuple(tuple((trim(c), j) for c, j in terms)
                     for terms in doc["coaction"])
    M = ComoduleWindow(spec, doc["D"], basis, coaction,
                       doc.get("window_complete", True))
    return M.validate()
