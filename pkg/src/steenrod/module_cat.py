"""Modules over finite subHopf algebras and windowed modules over the
whole Steenrod algebra: finite presentations, induction, minimal free
resolutions, Ext, and the socle/duality vanishing certificates.

Two interchangeable algebra backends exist: the Milnor-matrix product on a
profile subalgebra, and the transpose of the (xi-coordinate) coproduct on
a dual quotient spec.  For the duals of the A(n) these must agree, which
the tests use as a structure-constant cross-check; the second backend also
realises doubled algebras concretely.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

from . import dual_hopf as dh
from . import milnor
from .f2linalg import (F2Matrix, F2Vector, kernel_basis, rank_of_rows,
                       row_space_basis, in_span, quotient_reps, solve)
from .milnor import Mono, Profile


class MilnorTable:
    """Profile subalgebra of the Steenrod algebra with the Milnor product."""

    def __init__(self, profile: Profile, product_fn=None):
        self.profile = profile
        self.name = profile.name
        self.product_fn = product_fn or milnor.mono_product

    @property
    def is_finite(self):
        return self.profile.is_finite

    def top_degree(self):
        return self.profile.top_degree()

    def basis(self, d: int) -> tuple:
        return milnor.basis(self.profile, d)

    def degree(self, label) -> int:
        return milnor.mono_degree(label)

    def product(self, u, v) -> frozenset:
        out = self.product_fn(u, v)
        assert all(self.profile.admissible(t) for t in out), \
            "profile not closed under product"
        return out

    def key(self) -> str:
        return "milnor:%s:%s:%s" % (self.name, self.profile.heights,
                                    self.profile.tail)


class DualTransposeTable:
    """Algebra dual to a quotient/sub spec of A*, with structure constants
    read off from the reduced xi-coordinate coproduct."""

    def __init__(self, spec: dh.HopfQuotientSpec):
        if not spec.is_finite:
            raise ValueError("dual transpose table needs a finite spec")
        self.spec = spec
        self.name = spec.name + "^"
        self._mult = {}

    @property
    def is_finite(self):
        return True

    def top_degree(self):
        d = 0
        total = 0
        i = 1
        while True:
            lo, hi = self.spec.entry(i)
            if hi is None:
                raise ValueError("infinite spec")
            if hi > lo:
                top_e = ((1 << hi) - 1) // (1 << lo) * (1 << lo)
                total += top_e * ((1 << i) - 1)
            if i > len(self.spec.heads) and hi <= lo:
                break
            i += 1
        return total

    def basis(self, d: int) -> tuple:
        return dh.sub_basis(self.spec, d)

    def degree(self, label) -> int:
        return dh.mono_degree(label)

    def _block(self, d1: int, d2: int) -> dict:
        key = (d1, d2)
        if key not in self._mult:
            table = {}
            for T in self.basis(d1 + d2):
                for l, r in dh.psi_xi(T):
                    if self.spec.in_ideal(l) or self.spec.in_ideal(r):
                        continue
                    if dh.mono_degree(l) != d1:
                        continue
                    cur = table.setdefault((l, r), set())
                    cur ^= {T}
            self._mult[key] = {k: frozenset(v) for k, v in table.items() if v}
        return self._mult[key]

    def product(self, u, v) -> frozenset:
        block = self._block(dh.mono_degree(u), dh.mono_degree(v))
        return block.get((u, v), frozenset())

    def key(self) -> str:
        return "dualT:%s:%s:%s" % (self.spec.name, self.spec.heads,
                                   self.spec.tail)


def milnor_table_A(n: int) -> MilnorTable:
    return MilnorTable(milnor.profile_A(n))


def doubled_table(profile: Profile, e: int) -> DualTransposeTable:
    return DualTransposeTable(dh.doubled_profile_spec(profile, e))


# ---------------------------------------------------------------------------
# finite modules


@dataclass(frozen=True)
class FinModule:
    """A finite module over a finite algebra table.

    `action` maps every positive-degree algebra basis label to a tuple of
    column bit-vectors over the module basis (absent labels act by zero,
    which is degree-forced for anything this stores)."""

    algebra: object
    basis: tuple                  # ((label, degree), ...)
    action: dict                  # alg label -> tuple of column bits

    @property
    def dim(self):
        return len(self.basis)

    def degree(self, i):
        return self.basis[i][1]

    def degrees(self):
        return sorted({d for _, d in self.basis})

    def top(self):
        return max((d for _, d in self.basis), default=0)

    def act_vec(self, label, bits: int) -> int:
        cols = self.action.get(label)
        if cols is None:
            return 0
        out = 0
        i = 0
        while bits:
            if bits & 1:
                out ^= cols[i]
            bits >>= 1
            i += 1
        return out

    def validate(self):
        top = self.top()
        for label, cols in self.action.items():
            d = self.algebra.degree(label)
            for i, col in enumerate(cols):
                j = 0
                c = col
                while c:
                    if c & 1 and self.degree(j) != self.degree(i) + d:
                        raise ValueError("action not degree %d at %s" % (d, label))
                    c >>= 1
                    j += 1
        # associativity against the algebra's own products
        for d1 in range(1, top + 1):
            for u in self.algebra.basis(d1):
                for d2 in range(1, top - d1 + 1):
                    for v in self.algebra.basis(d2):
                        for i in range(self.dim):
                            lhs = self.act_vec(u, self.act_vec(v, 1 << i))
                            rhs = 0
                            for t in self.algebra.product(u, v):
                                rhs ^= self.act_vec(t, 1 << i)
                            if lhs != rhs:
                                raise ValueError(
                                    "action violates %s * %s" % (u, v))
        return self


def trivial_module(table, degrees=(0,)) -> FinModule:
    basis = tuple(("k%d" % i, d) for i, d in enumerate(degrees))
    return FinModule(table, basis, {})


def regular_module(table) -> FinModule:
    """The algebra as a left module over itself."""
    top = table.top_degree()
    basis = []
    for d in range(top + 1):
        for b in table.basis(d):
            basis.append((b, d))
    index = {b: i for i, (b, _) in enumerate(basis)}
    action = {}
    for d in range(1, top + 1):
        for a in table.basis(d):
            cols = [0] * len(basis)
            for i, (b, db) in enumerate(basis):
                if db + d > top:
                    continue
                for t in table.product(a, b):
                    cols[i] ^= 1 << index[t]
            if any(cols):
                action[a] = tuple(cols)
    return FinModule(table, tuple(basis), action)


def closed_span(M: FinModule, seed_bits) -> list[int]:
    """Span of the seeds closed under the module action (homogeneous
    seeds give a homogeneous basis)."""
    vecs = list(seed_bits)
    changed = True
    while changed:
        changed = False
        span = row_space_basis(vecs, M.dim)
        for label in M.action:
            for v in list(span):
                w = M.act_vec(label, v)
                if w and not in_span(span, M.dim, w):
                    vecs.append(w)
                    changed = True
    return row_space_basis(vecs, M.dim)


def submodule(M: FinModule, seed_bits) -> FinModule:
    """The submodule generated by the given homogeneous vectors."""
    return _carve(M, closed_span(M, seed_bits), quotient=False)


def quotient_module(M: FinModule, seed_bits) -> FinModule:
    """Quotient by the submodule generated by the given vectors."""
    return _carve(M, closed_span(M, seed_bits), quotient=True)


def _carve(M: FinModule, span, quotient: bool) -> FinModule:
    if quotient:
        comp, reduce = quotient_reps(span, M.dim)
        new_index = {g: k for k, g in enumerate(comp)}
        basis = tuple((M.basis[g][0], M.degree(g)) for g in comp)

        def project(bits):
            bits = reduce(bits)
            out = 0
            for g, k in new_index.items():
                if (bits >> g) & 1:
                    out |= 1 << k
            return out

        action = {}
        for label, cols in M.action.items():
            new_cols = [project(cols[g]) for g in comp]
            if any(new_cols):
                action[label] = tuple(new_cols)
        return FinModule(M.algebra, basis, action)
    # submodule: new basis = span vectors (homogeneous)
    degs = []
    for v in span:
        ds = {M.degree(i) for i in range(M.dim) if (v >> i) & 1}
        assert len(ds) == 1
        degs.append(ds.pop())
    basis = tuple(("s%d" % k, d) for k, d in enumerate(degs))

    def express(bits):
        # coordinates of a vector of the ambient lying in span
        rows = [v for v in span]
        mat = F2Matrix(len(rows), M.dim, tuple(rows)).transpose()
        sol = solve(mat, F2Vector(M.dim, bits))
        assert sol is not None
        return sol.bits

    action = {}
    for label in M.action:
        new_cols = []
        for v in span:
            w = M.act_vec(label, v)
            new_cols.append(express(w) if w else 0)
        if any(new_cols):
            action[label] = tuple(new_cols)
    return FinModule(M.algebra, basis, action)


def random_module(rng, table, max_dim: int) -> FinModule:
    """Seeded random submodule-then-quotient of the regular module."""
    R = regular_module(table)
    picks = [1 << rng.randrange(R.dim) for _ in range(rng.randint(1, 3))]
    S = submodule(R, picks)
    while S.dim > max_dim:
        top = S.top()
        idxs = [i for i in range(S.dim) if S.degree(i) == top]
        S = quotient_module(S, [1 << rng.choice(idxs)])
    return S


# ---------------------------------------------------------------------------
# free modules and minimal resolutions


@dataclass(frozen=True)
class ResolutionWindow:
    algebra_key: str
    s_max: int
    t_max: int
    gens: tuple        # per stage: tuple of generator degrees
    diffs: tuple       # per stage s>=1: tuple over gens of image elements,
                       # each a tuple of ((target gen, alg label), ...)
    aug: tuple = ()    # stage-0 generator images in the module (bit vectors)

    def gen_counts(self) -> dict:
        out = {}
        for s, degs in enumerate(self.gens):
            for t in degs:
                out[(s, t)] = out.get((s, t), 0) + 1
        return out


class FreeWindow:
    """Window basis ((gen index, algebra label) pairs) of a free module."""

    def __init__(self, table, gen_degrees, t_max):
        self.table = table
        self.gen_degrees = list(gen_degrees)
        self.t_max = t_max
        self._basis = {}

    def basis(self, t: int) -> list:
        if t not in self._basis:
            out = []
            for k, dg in enumerate(self.gen_degrees):
                if dg > t:
                    continue
                for b in self.table.basis(t - dg):
                    out.append((k, b))
            self._basis[t] = out
        return self._basis[t]

    def index(self, t: int) -> dict:
        return {p: i for i, p in enumerate(self.basis(t))}

    def act_into(self, t_from: int, label, bits: int) -> int:
        """Left multiplication by an algebra label on a degree component."""
        d = self.table.degree(label)
        src = self.basis(t_from)
        tgt_index = self.index(t_from + d)
        out = 0
        i = 0
        while bits:
            if bits & 1:
                k, b = src[i]
                for tt in self.table.product(label, b):
                    out ^= 1 << tgt_index[(k, tt)]
            bits >>= 1
            i += 1
        return out


def minimal_free_resolution(M: FinModule, s_max: int, t_max: int,
                            cache_dir=None) -> ResolutionWindow:
    """Kernel-and-cover iteration; minimality holds by construction (new
    generators complement the decomposables) and is asserted."""
    cached = _cache_load(M, s_max, t_max, cache_dir)
    if cached is not None:
        return cached
    table = M.algebra
    gen0_degs, gen0_vecs = _module_min_gens(M, t_max)
    gens = [tuple(gen0_degs)]
    diffs = []
    aug = tuple(gen0_vecs)

    prev_free = FreeWindow(table, gen0_degs, t_max)

    # phi maps prev_free into M
    def phi0_matrix(t):
        src = prev_free.basis(t)
        tgt = [i for i in range(M.dim) if M.degree(i) == t]
        tgt_index = {i: k for k, i in enumerate(tgt)}
        rows = []
        for k, b in src:
            vec = M.act_vec(b, gen0_vecs[k]) if b != () else gen0_vecs[k]
            bits = 0
            for i in tgt:
                if (vec >> i) & 1:
                    bits |= 1 << tgt_index[i]
            rows.append(bits)
        return F2Matrix(len(src), len(tgt), tuple(rows))

    phi_matrix = phi0_matrix
    for s in range(1, s_max + 1):
        # kernel of phi per degree
        kernels = {}
        for t in range(t_max + 1):
            mat = phi_matrix(t)
            if mat.rows == 0:
                continue
            ker = kernel_basis(mat.transpose())
            if ker:
                kernels[t] = [v.bits for v in ker]
        new_degs, new_vecs = _submodule_min_gens(prev_free, kernels, t_max)
        gens.append(tuple(new_degs))
        # differential entries: express each new generator in (gen, label)
        entries = []
        for t, v in zip(new_degs, new_vecs):
            basis_t = prev_free.basis(t)
            comp = tuple(sorted(basis_t[i] for i in range(len(basis_t))
                                if (v >> i) & 1))
            assert all(b != () for _, b in comp), "resolution not minimal"
            entries.append(comp)
        diffs.append(tuple(entries))
        if not new_degs:
            # pad remaining stages with zero
            for _ in range(s + 1, s_max + 1):
                gens.append(())
                diffs.append(())
            break

        cur_free = FreeWindow(table, new_degs, t_max)
        prev_free_local, entries_local = prev_free, entries

        def make_phi(cur, prev, ents):
            def phi(t):
                src = cur.basis(t)
                tgt_index = prev.index(t)
                rows = []
                for k, b in src:
                    bits = 0
                    for (k2, b2) in ents[k]:
                        for tt in prev.table.product(b, b2):
                            bits ^= 1 << tgt_index[(k2, tt)]
                    rows.append(bits)
                return F2Matrix(len(src), len(tgt_index), tuple(rows))
            return phi

        phi_matrix = make_phi(cur_free, prev_free_local, entries_local)
        prev_free = cur_free

    res = ResolutionWindow(table.key(), s_max, t_max, tuple(gens),
                           tuple(diffs), aug)
    _cache_store(M, res, cache_dir)
    return res


def _module_min_gens(M: FinModule, t_max: int):
    """Minimal generators of a finite module (complement of A+ M)."""
    table = M.algebra
    gen_degs, gen_vecs = [], []
    chosen = []
    for t in range(min(M.top(), t_max) + 1):
        idxs = [i for i in range(M.dim) if M.degree(i) == t]
        if not idxs:
            continue
        # decomposables: positive-degree action on everything lower
        dec = []
        for d in range(1, t + 1):
            for label in table.basis(d):
                for i in range(M.dim):
                    if M.degree(i) == t - d:
                        w = M.act_vec(label, 1 << i)
                        if w:
                            dec.append(w)
        span = list(dec)
        for i in idxs:
            v = 1 << i
            if in_span(span, M.dim, v):
                continue
            gen_degs.append(t)
            gen_vecs.append(v)
            span.append(v)
    return gen_degs, gen_vecs


def _submodule_min_gens(free: FreeWindow, kernels: dict, t_max: int):
    """Minimal generators of the kernel submodule inside a free window."""
    table = free.table
    gen_degs, gen_vecs = [], []
    for t in range(t_max + 1):
        here = kernels.get(t, [])
        if not here:
            continue
        dim_t = len(free.basis(t))
        # A+ . (kernel below): apply positive labels to all kernel elements
        span = []
        for d in range(1, t + 1):
            for v in kernels.get(t - d, []):
                for label in table.basis(d):
                    w = free.act_into(t - d, label, v)
                    if w:
                        span.append(w)
        span = row_space_basis(span, dim_t)
        for v in here:
            if in_span(span, dim_t, v):
                continue
            gen_degs.append(t)
            gen_vecs.append(v)
            span = row_space_basis(list(span) + [v], dim_t)
    return gen_degs, gen_vecs


def resolution_d_matrix(table, res: ResolutionWindow, s: int, t: int):
    """Matrix of d_s : F_s^t -> F_{s-1}^t over the window bases."""
    up = FreeWindow(table, res.gens[s], res.t_max)
    down = FreeWindow(table, res.gens[s - 1], res.t_max)
    src = up.basis(t)
    tgt_index = down.index(t)
    rows = []
    for k, b in src:
        bits = 0
        for (k2, b2) in res.diffs[s - 1][k]:
            for tt in table.product(b, b2):
                bits ^= 1 << tgt_index[(k2, tt)]
        rows.append(bits)
    return F2Matrix(len(src), len(tgt_index), tuple(rows))


def check_resolution(table, res: ResolutionWindow) -> bool:
    """d o d = 0 and minimality (no unit entries) through the window."""
    for s, stage in enumerate(res.diffs):
        for comp in stage:
            for (_, b) in comp:
                if b == ():
                    return False
    for s in range(2, len(res.gens)):
        if not res.gens[s]:
            continue
        for t in range(res.t_max + 1):
            a = resolution_d_matrix(table, res, s, t)
            b = resolution_d_matrix(table, res, s - 1, t)
            if a.rows and b.rows and any(a.matmul(b).row_data):
                return False
    return True


def ext_dims(M: FinModule, s_max: int, t_max: int, N: FinModule = None,
             cache_dir=None) -> dict:
    """dim Ext^{s,t}(M, N); for N = k these are the generator counts."""
    res = minimal_free_resolution(M, s_max + 1, t_max, cache_dir)
    table = M.algebra
    if N is None:
        return {k: v for k, v in res.gen_counts().items() if k[0] <= s_max}
    out = {}
    # Hom^t(F_s, N): components f(g_k) in N^{deg g_k - t}
    def hom_basis(s, t):
        cells = []
        for k, dg in enumerate(res.gens[s]):
            for i in range(N.dim):
                if N.degree(i) == dg - t:
                    cells.append((k, i))
        return cells

    def delta_matrix(s, t):
        # Hom^t(F_s, N) -> Hom^t(F_{s+1}, N): f -> f o d_{s+1}
        src = hom_basis(s, t)
        tgt = hom_basis(s + 1, t)
        src_index = {c: i for i, c in enumerate(src)}
        rows = [0] * len(src)
        for j, (k1, i1) in enumerate(tgt):
            for (k2, b2) in res.diffs[s][k1]:
                # f(d g_{k1}) picks up b2 . f(g_{k2})
                for (ks, isrc) in src:
                    if ks != k2:
                        continue
                    w = N.act_vec(b2, 1 << isrc)
                    if (w >> i1) & 1:
                        rows[src_index[(ks, isrc)]] ^= 1 << j
        return F2Matrix(len(src), len(tgt), tuple(rows))

    for t in range(t_max + 1):
        prev_rank = 0
        for s in range(s_max + 1):
            mat = delta_matrix(s, t)
            dim_here = mat.rows
            r = rank_of_rows(list(mat.row_data), mat.cols) if mat.rows else 0
            ker = dim_here - r
            out[(s, t)] = ker - prev_rank
            prev_rank = r
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# resolution disk cache


CACHE_FORMAT = "steenrod-resolution-v1"


def _module_hash(M: FinModule) -> str:
    doc = {"basis": [[str(l), d] for l, d in M.basis],
           "action": sorted((str(k), list(v)) for k, v in M.action.items())}
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _cache_path(M, s_max, t_max, cache_dir):
    if cache_dir is None:
        cache_dir = os.environ.get("STEENROD_CACHE_DIR")
    if not cache_dir:
        return None
    key = "%s-%s-%d-%d" % (M.algebra.key().replace("/", "_"),
                           _module_hash(M)[:16], s_max, t_max)
    key = key.replace(" ", "").replace("(", "").replace(")", "").replace(
        ",", "_").replace(":", "-").replace("*", "s")
    return os.path.join(cache_dir, key + ".json")


def _cache_load(M, s_max, t_max, cache_dir):
    path = _cache_path(M, s_max, t_max, cache_dir)
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != CACHE_FORMAT:
        return None
    if doc.get("algebra") != M.algebra.key():
        return None
    gens = tuple(tuple(g) for g in doc["gens"])
    diffs = tuple(tuple(tuple((k, tuple(b)) for k, b in comp)
                        for comp in stage) for stage in doc["diffs"])
    return ResolutionWindow(doc["algebra"], s_max, t_max, gens, diffs,
                            tuple(doc["aug"]))


def _cache_store(M, res: ResolutionWindow, cache_dir):
    path = _cache_path(M, res.s_max, res.t_max, cache_dir)
    if not path:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    doc = {"format": CACHE_FORMAT, "algebra": res.algebra_key,
           "gens": [list(g) for g in res.gens],
           "diffs": [[[[k, list(b)] for k, b in comp] for comp in stage]
                     for stage in res.diffs],
           "aug": list(res.aug)}
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


# ---------------------------------------------------------------------------
# windowed modules over the whole Steenrod algebra


FULL_TABLE = MilnorTable(milnor.FULL)


def free_module(table, gen_degrees) -> FinModule:
    """Finite free module over a finite algebra table."""
    top = table.top_degree()
    basis = []
    for k, dg in enumerate(gen_degrees):
        for d in range(top + 1):
            for b in table.basis(d):
                basis.append(((k, b), dg + d))
    basis.sort(key=lambda p: (p[1], p[0]))
    index = {lab: i for i, (lab, _) in enumerate(basis)}
    action = {}
    for d in range(1, top + 1):
        for a in table.basis(d):
            cols = [0] * len(basis)
            for i, ((k, b), _) in enumerate(basis):
                for t in table.product(a, b):
                    if (k, t) in index:
                        cols[i] ^= 1 << index[(k, t)]
            if any(cols):
                action[a] = tuple(cols)
    return FinModule(table, tuple(basis), action)


def window_module_of_A(D: int) -> FinModule:
    """The degree-truncation of the Steenrod algebra as a left module
    (an honest quotient module: everything above D is killed)."""
    basis = []
    for d in range(D + 1):
        for b in milnor.basis(milnor.FULL, d):
            basis.append((b, d))
    index = {b: i for i, (b, _) in enumerate(basis)}
    action = {}
    for d in range(1, D + 1):
        for a in milnor.basis(milnor.FULL, d):
            cols = [0] * len(basis)
            for i, (b, db) in enumerate(basis):
                if db + d > D:
                    continue
                for t in milnor.mono_product(a, b):
                    cols[i] ^= 1 << index[t]
            if any(cols):
                action[a] = tuple(cols)
    return FinModule(FULL_TABLE, tuple(basis), action)


def cyclic_quotient_window(n: int, D: int) -> FinModule:
    """Window of A//A(n) = A / A A(n)^+ as a module over the full algebra."""
    W = window_module_of_A(D)
    seeds = []
    for i in range(n + 1):
        g = milnor.trim([1 << i])
        seeds.append(W.act_vec(g, 1))  # g . 1
    return quotient_module(W, [s for s in seeds if s])


def moore_module() -> FinModule:
    """The 2-dimensional module with a single Sq(1) connecting degree 0
    to degree 1 (all other generators act by zero)."""
    basis = (("x", 0), ("y", 1))
    return FinModule(FULL_TABLE, basis, {(1,): (2, 0)}).validate()


def random_window_module(rng, max_dim: int, D: int = 6) -> FinModule:
    """Seeded random finite module over the full algebra: random submodule
    of a quotient of the window module."""
    W = window_module_of_A(D)
    for _ in range(200):
        kill = [1 << rng.randrange(1, W.dim) for _ in range(rng.randint(1, 4))]
        Q = quotient_module(W, kill)
        if Q.dim == 0:
            continue
        seeds = [1 << rng.randrange(Q.dim) for _ in range(rng.randint(1, 3))]
        S = submodule(Q, seeds)
        if 1 <= S.dim <= max_dim:
            return S
    raise RuntimeError("could not sample a random module")


# ---------------------------------------------------------------------------
# induction A (x)_{A(n)} M'


def section_monomials(profile: Profile, d: int) -> list:
    """Milnor monomials with every exponent divisible by 2^h(i): the
    graded-lex-least coset representatives for A over the profile algebra."""
    out = []

    def rec(i, rem, pref):
        if rem == 0:
            out.append(milnor.trim(pref))
            return
        w = (1 << i) - 1
        if w > rem:
            return
        h = profile.h(i)
        step = (1 << h) if h is not None else None
        if step is None:
            # infinite height: only exponent 0 survives in the section
            rec(i + 1, rem, pref + [0])
            return
        for r in range(0, rem // w + 1, step):
            rec(i + 1, rem - r * w, pref + [r])

    rec(1, d, [])
    return sorted(out, reverse=True)


class InducedDecomposition:
    """Per-degree change of basis between Milnor monomials and the
    section x subalgebra products w * b; invertibility of each block is a
    freeness witness for A over the profile algebra."""

    def __init__(self, profile: Profile, D: int):
        self.profile = profile
        self.D = D
        self._blocks = {}

    def pairs(self, d: int) -> list:
        out = []
        for dw in range(d + 1):
            for w in section_monomials(self.profile, dw):
                for b in milnor.basis(self.profile, d - dw):
                    out.append((w, b))
        return out

    def decompose(self, d: int):
        """Returns (pairs, express) with express(mono-set) -> parity dict
        over pairs."""
        if d not in self._blocks:
            pairs = self.pairs(d)
            target = milnor.basis(milnor.FULL, d)
            t_index = {m: j for j, m in enumerate(target)}
            assert len(pairs) == len(target), "freeness dimension mismatch"
            rows = []
            for w, b in pairs:
                bits = 0
                for t in milnor.mono_product(w, b):
                    bits ^= 1 << t_index[t]
                rows.append(bits)
            # invert: augmented elimination
            n = len(pairs)
            aug = [rows[i] | (1 << (len(target) + i)) for i in range(n)]
            reduced, pivots = _eliminate_rows(aug, len(target))
            assert len(pivots) == len(target), "section does not span: not free"
            self._blocks[d] = (pairs, target, t_index, reduced, pivots)
        pairs, target, t_index, reduced, pivots = self._blocks[d]

        def express(mono_set):
            want = 0
            for m in mono_set:
                want |= 1 << t_index[m]
            combo = 0
            for row, pc in zip(reduced, pivots):
                if want & (1 << pc):
                    want ^= row & ((1 << len(target)) - 1)
                    combo ^= row >> len(target)
            assert want == 0
            return {pairs[i] for i in range(len(pairs)) if (combo >> i) & 1}

        return pairs, express


def _eliminate_rows(rows, pivot_cols):
    rows = list(rows)
    pivots = []
    pr = 0
    for col in range(pivot_cols):
        mask = 1 << col
        found = -1
        for r in range(pr, len(rows)):
            if rows[r] & mask:
                found = r
                break
        if found < 0:
            continue
        rows[pr], rows[found] = rows[found], rows[pr]
        for r in range(len(rows)):
            if r != pr and rows[r] & mask:
                rows[r] ^= rows[pr]
        pivots.append(col)
        pr += 1
    return rows[:pr], pivots


def quotient_algebra_dims(n: int, D: int) -> list:
    """dim (A // A(n))_d computed by rank (independent of the section)."""
    out = []
    gens = [milnor.trim([1 << i]) for i in range(n + 1)]
    for d in range(D + 1):
        target = milnor.basis(milnor.FULL, d)
        t_index = {m: j for j, m in enumerate(target)}
        rows = []
        for g in gens:
            dg = milnor.mono_degree(g)
            if dg > d:
                continue
            for u in milnor.basis(milnor.FULL, d - dg):
                bits = 0
                for t in milnor.mono_product(u, g):
                    bits ^= 1 << t_index[t]
                if bits:
                    rows.append(bits)
        out.append(len(target) - rank_of_rows(rows, len(target)))
    return out


def induce_up(Mp: FinModule, D: int) -> FinModule:
    """A (x)_{A(n)} M' in a window, as a module over the full algebra.

    Basis pairs (section monomial, M' element); the action decomposes
    a*w through the section and pushes subalgebra factors into M'."""
    profile = Mp.algebra.profile
    dec = InducedDecomposition(profile, D)
    basis = []
    for dw in range(D + 1):
        for w in section_monomials(profile, dw):
            for i in range(Mp.dim):
                if dw + Mp.degree(i) <= D:
                    basis.append(((w, i), dw + Mp.degree(i)))
    basis.sort(key=lambda p: (p[1], p[0]))
    index = {lab: k for k, (lab, _) in enumerate(basis)}
    action = {}
    for da in range(1, D + 1):
        for a in milnor.basis(milnor.FULL, da):
            cols = [0] * len(basis)
            for kidx, ((w, i), dcur) in enumerate(basis):
                if dcur + da > D:
                    continue
                prod = milnor.mono_product(a, w)
                if not prod:
                    continue
                _, express = dec.decompose(da + milnor.mono_degree(w))
                for (w2, b) in express(prod):
                    img = Mp.act_vec(b, 1 << i) if b != () else (1 << i)
                    j = 0
                    v = img
                    while v:
                        if v & 1:
                            cols[kidx] ^= 1 << index[(w2, j)]
                        v >>= 1
                        j += 1
            if any(cols):
                action[a] = tuple(cols)
    return FinModule(FULL_TABLE, tuple(basis), action)


# ---------------------------------------------------------------------------
# vanishing certificates


@dataclass(frozen=True)
class HomFreeCertificate:
    ok: bool
    witness_n: int
    top_degree: int
    degree_data: tuple      # (k, dim A(n)^k, stacked kernel dim)
    z_examples: tuple       # (k, basis monomial, pairing partner z)
    reason: str = ""


def hom_to_free_vanishing(M: FinModule, witness_n: int,
                          product_fn=None) -> HomFreeCertificate:
    """Certify Hom_A(M, A) = 0 in the window through the top degree of M:
    no nonzero element of A(n) in degrees <= top(M) is annihilated by all
    generators, exhibited by the multiplication pairing into the top class
    (the duality step of the vanishing argument for finite modules
    against bounded-below free modules)."""
    product_fn = product_fn or milnor.mono_product
    if M.dim == 0:
        return HomFreeCertificate(True, witness_n, -1, (), (), "vacuous")
    top = M.top()
    profile = milnor.profile_A(witness_n)
    pd = profile.top_degree()
    if pd <= top:
        return HomFreeCertificate(False, witness_n, top, (), (),
                                  "witness algebra too small: pd <= top(M)")
    for d in range(top + 1):
        for m in milnor.basis(milnor.FULL, d):
            if not profile.admissible(m):
                return HomFreeCertificate(
                    False, witness_n, top, (), (),
                    "degree %d monomial outside A(%d)" % (d, witness_n))
    gens = [milnor.trim([1 << i]) for i in range(witness_n + 1)]
    degree_data = []
    z_examples = []
    ok = True
    top_mono = milnor.basis(profile, pd)[0]
    for k in range(top + 1):
        bk = milnor.basis(profile, k)
        if not bk:
            degree_data.append((k, 0, 0))
            continue
        rows = {}
        for col, v in enumerate(bk):
            for g in gens:
                tgt = milnor.basis(profile, k + milnor.mono_degree(g))
                t_index = {m: j for j, m in enumerate(tgt)}
                for t in product_fn(g, v):
                    key = (g, t_index[t])
                    rows[key] = rows.get(key, 0) ^ (1 << col)
        mat_rows = [v for _, v in sorted(rows.items())]
        r = rank_of_rows(mat_rows, len(bk))
        degree_data.append((k, len(bk), len(bk) - r))
        if r != len(bk):
            ok = False
        # pairing witness z: some z with z*v hitting the top class
        bc = milnor.basis(profile, pd - k)
        for v in bk:
            z_found = None
            for z in bc:
                if top_mono in product_fn(z, v):
                    z_found = z
                    break
            if z_found is None:
                ok = False
            else:
                z_examples.append((k, v, z_found))
    reason = "" if ok else "annihilated vector or degenerate pairing found"
    return HomFreeCertificate(ok, witness_n, top, tuple(degree_data),
                              tuple(z_examples), reason)


def module_maps(M: FinModule, N: FinModule, shift: int, labels=None) -> list:
    """Maps f with f(M_d) <= N_{d+shift} commuting with the given algebra
    labels (defaults to the union of both action supports)."""
    if labels is None:
        labels = sorted(set(M.action) | set(N.action))
    unknowns = [(i, j) for i in range(M.dim) for j in range(N.dim)
                if N.degree(j) == M.degree(i) + shift]
    col = {u: k for k, u in enumerate(unknowns)}
    rows = {}
    for a in labels:
        for i in range(M.dim):
            img = M.act_vec(a, 1 << i)
            # constraint per (a, i, target index of N)
            for (ii, j), k in col.items():
                if ii == i:
                    w = N.act_vec(a, 1 << j)
                    t = 0
                    while w:
                        if w & 1:
                            key = (a, i, t)
                            rows[key] = rows.get(key, 0) ^ (1 << k)
                        w >>= 1
                        t += 1
            ii = 0
            v = img
            while v:
                if v & 1:
                    for (src, j), k in col.items():
                        if src == ii:
                            key = (a, i, j)
                            rows[key] = rows.get(key, 0) ^ (1 << k)
                v >>= 1
                ii += 1
    mat = F2Matrix(len(rows), len(unknowns),
                   tuple(v for _, v in sorted(rows.items())))
    sols = kernel_basis(mat)
    out = []
    for v in sols:
        f = [0] * M.dim
        for k, (i, j) in enumerate(unknowns):
            if v[k]:
                f[i] |= 1 << j
        out.append(tuple(f))
    return out


@dataclass(frozen=True)
class InducedHomVerdict:
    ok: bool
    socle_table: tuple     # (degree k, dim of stacked kernel, certified)
    solve_dims: tuple      # (shift, dim of module-map space)
    reason: str = ""


def hom_induced_vanishing(L: FinModule, B_profile: Profile, D: int,
                          j0_shifts=(0,), shifts=(0,)) -> InducedHomVerdict:
    """Certify Hom_B(L, J0) = 0 in a window, J0 a finitely generated free
    module over the full algebra and B an infinite exterior-type profile
    subalgebra: the socle of the window is empty in the relevant degrees.

    A finite-dimensional B is rejected: the statement is false there (the
    window socle is nonzero), and the argument needs B infinite."""
    if B_profile.is_finite:
        raise ValueError("B must be an infinite profile subalgebra")
    if B_profile.tail is None or B_profile.heights:
        raise ValueError("only constant-tail profiles are supported")
    s = B_profile.tail
    # generators: the primitive-type monomials (0,...,0,2^a), a < s
    gens = []
    b = 1
    while ((1 << b) - 1) <= D:
        for a in range(s):
            g = milnor.trim([0] * (b - 1) + [1 << a])
            if milnor.mono_degree(g) <= D:
                gens.append(g)
        b += 1
    k_needed = sorted({L.degree(i) + sh - j0 for i in range(L.dim)
                       for sh in shifts for j0 in j0_shifts if
                       L.degree(i) + sh - j0 >= 0})
    socle_table = []
    ok = True
    for k in (range(max(k_needed) + 1) if k_needed else []):
        bk = milnor.basis(milnor.FULL, k)
        rows = {}
        usable = [g for g in gens if milnor.mono_degree(g) + k <= D]
        for col, v in enumerate(bk):
            for g in usable:
                tgt = milnor.basis(milnor.FULL, k + milnor.mono_degree(g))
                t_index = {m: j for j, m in enumerate(tgt)}
                for t in milnor.mono_product(g, v):
                    key = (g, t_index[t])
                    rows[key] = rows.get(key, 0) ^ (1 << col)
        r = rank_of_rows([v for _, v in sorted(rows.items())], len(bk))
        kdim = len(bk) - r
        certified = (kdim == 0)
        if k in k_needed and not certified:
            ok = False
        socle_table.append((k, kdim, certified))
    # direct solve per shift against the rank-1 free window
    W = window_module_of_A(D)
    solve_dims = []
    for sh in shifts:
        sols = module_maps(L, W, sh, labels=[g for g in gens
                                             if milnor.mono_degree(g) <= D])
        solve_dims.append((sh, len(sols)))
        if sols:
            ok = False
    reason = "" if ok else "socle nonzero or direct solve nonzero"
    return InducedHomVerdict(ok, tuple(socle_table), tuple(solve_dims), reason)


# ---------------------------------------------------------------------------
# finite presentations


@dataclass(frozen=True)
class FinitePresentationSpec:
    """A presentation over A(n): free target with gen degrees e_i, free
    source with gen degrees d_j, entries[j] = ((target index, A(n)
    element), ...)."""

    n: int
    target_degrees: tuple
    source_degrees: tuple
    entries: tuple

    def cokernel_over_subalgebra(self) -> FinModule:
        table = milnor_table_A(self.n)
        F0 = free_module(table, self.target_degrees)
        index = {lab: i for i, (lab, _) in enumerate(F0.basis)}
        seeds = []
        for comp in self.entries:
            bits = 0
            for k, elem in comp:
                for mono in elem:
                    if (k, mono) in index:
                        bits ^= 1 << index[(k, mono)]
            if bits:
                seeds.append(bits)
        return quotient_module(F0, seeds)

    def induced_cokernel_dims(self, D: int) -> list:
        """dims of coker( (+)_j A[-d_j] -> (+)_i A[-e_i] ) per degree,
        computed over the full algebra window."""
        out = []
        for d in range(D + 1):
            tgt = [(i, m) for i, e in enumerate(self.target_degrees)
                   for m in milnor.basis(milnor.FULL, d - e) if d - e >= 0]
            t_index = {c: k for k, c in enumerate(tgt)}
            rows = []
            for j, dj in enumerate(self.source_degrees):
                if d - dj < 0:
                    continue
                for u in milnor.basis(milnor.FULL, d - dj):
                    bits = 0
                    for k, elem in self.entries[j]:
                        for mono in elem:
                            for t in milnor.mono_product(u, mono):
                                cell = (k, t)
                                if cell in t_index:
                                    bits ^= 1 << t_index[cell]
                    if bits:
                        rows.append(bits)
            out.append(len(tgt) - rank_of_rows(rows, len(tgt)))
        return out


def cyclic_presentation(n: int) -> FinitePresentationSpec:
    """A//A(n) presented by the defining generators of A(n)+."""
    entries = []
    degs = []
    for i in range(n + 1):
        g = milnor.trim([1 << i])
        degs.append(milnor.mono_degree(g))
        entries.append(((0, frozenset([g])),))
    return FinitePresentationSpec(n, (0,), tuple(degs), tuple(entries))


def free_presentation(n: int = 0) -> FinitePresentationSpec:
    return FinitePresentationSpec(n, (0,), (), ())


def socle_basis(Mp: FinModule) -> list:
    """Joint kernel of all positive-degree actions (homogeneous vectors)."""
    con = {}
    for label in Mp.action:
        for src in range(Mp.dim):
            img = Mp.act_vec(label, 1 << src)
            t = 0
            while img:
                if img & 1:
                    key = (label, t)
                    con[key] = con.get(key, 0) ^ (1 << src)
                img >>= 1
                t += 1
    mat = F2Matrix(len(con), Mp.dim, tuple(v for _, v in sorted(con.items())))
    return kernel_basis(mat)


def embed_into_free(Mp: FinModule):
    """A monomorphism of a finite module over a Poincare duality profile
    algebra into a finitely generated free module, one summand per socle
    generator (the constructive step behind resolving coherent modules by
    finitely generated frees).

    Returns (shifts, maps): component r is a module map into the regular
    module placed so its top class sits over the r-th socle degree."""
    table = Mp.algebra
    pd = table.top_degree()
    R = regular_module(table)
    top_idx = R.dim - 1
    shifts, maps = [], []
    for v in socle_basis(Mp):
        degs = {Mp.degree(i) for i in range(Mp.dim) if v[i]}
        assert len(degs) == 1
        d = degs.pop()
        shifts.append(d - pd)
        # module maps M -> R with internal shift pd - d, hitting the top
        cands = module_maps(Mp, R, pd - d, labels=sorted(Mp.action))
        chosen = None
        for f in cands:
            img = 0
            for i in range(Mp.dim):
                if v[i]:
                    img ^= f[i]
            if (img >> top_idx) & 1:
                chosen = f
                break
        if chosen is None:
            raise RuntimeError("socle element admits no splitting map")
        maps.append(chosen)
    # combined injectivity, degree by degree
    for d in Mp.degrees():
        idxs = [i for i in range(Mp.dim) if Mp.degree(i) == d]
        rows = []
        for i in idxs:
            big = 0
            for r, f in enumerate(maps):
                big |= f[i] << (r * R.dim)
            rows.append(big)
        if rank_of_rows(rows, len(maps) * R.dim) != len(idxs):
            raise RuntimeError("combined map not injective in degree %d" % d)
    return shifts, maps


# ---------------------------------------------------------------------------
# doubling


def double_module(M: FinModule, e: int) -> FinModule:
    """Transport a module over a profile algebra to the concretely doubled
    algebra (dual transpose table of the doubled spec): degrees scale by
    2^e and the dual-basis labels get their exponents scaled."""
    if isinstance(M.algebra, MilnorTable):
        profile = M.algebra.profile
    else:
        raise ValueError("double_module expects a Milnor profile algebra")
    new_table = doubled_table(profile, e)
    basis = tuple((lab, d << e) for lab, d in M.basis)
    action = {}
    for label, cols in M.action.items():
        new_label = tuple(r << e for r in label)
        action[new_label] = cols
    return FinModule(new_table, basis, action)


# ---------------------------------------------------------------------------
# tensor products of modules and the twisting isomorphism


def tensor_modules(M: FinModule, N: FinModule, D: int) -> FinModule:
    """Diagonal action through the Milnor coproduct (both factors must be
    modules over Milnor-basis tables)."""
    pairs = [(i, j) for i in range(M.dim) for j in range(N.dim)
             if M.degree(i) + N.degree(j) <= D]
    pairs.sort(key=lambda p: (M.degree(p[0]) + N.degree(p[1]), p))
    index = {p: k for k, p in enumerate(pairs)}
    basis = tuple(((M.basis[i][0], N.basis[j][0]),
                   M.degree(i) + N.degree(j)) for i, j in pairs)
    labels = set()
    for d in range(1, D + 1):
        for a in milnor.basis(milnor.FULL, d):
            labels.add(a)
    action = {}
    for a in sorted(labels):
        cols = [0] * len(pairs)
        nonzero = False
        for k, (i, j) in enumerate(pairs):
            if M.degree(i) + N.degree(j) + milnor.mono_degree(a) > D:
                continue
            acc = 0
            for a1, a2 in milnor.mono_coproduct(a):
                v1 = M.act_vec(a1, 1 << i) if a1 != () else (1 << i)
                if not v1:
                    continue
                v2 = N.act_vec(a2, 1 << j) if a2 != () else (1 << j)
                if not v2:
                    continue
                i2 = 0
                vv1 = v1
                while vv1:
                    if vv1 & 1:
                        j2 = 0
                        vv2 = v2
                        while vv2:
                            if vv2 & 1:
                                acc ^= 1 << index[(i2, j2)]
                            vv2 >>= 1
                            j2 += 1
                    vv1 >>= 1
                    i2 += 1
            cols[k] = acc
            nonzero = nonzero or bool(acc)
        if nonzero:
            action[a] = tuple(cols)
    return FinModule(FULL_TABLE, tuple(basis), action)


def restrict_to_profile(M: FinModule, profile: Profile) -> FinModule:
    table = MilnorTable(profile)
    action = {lab: cols for lab, cols in M.action.items()
              if profile.admissible(lab)}
    return FinModule(table, M.basis, action)


def theta_twisting_check(M: FinModule, Np: FinModule, D: int) -> bool:
    """The twist m (x) (a (x) n) -> sum a' (x) (chi(a'') m (x) n) is an
    isomorphism commuting with the generator actions, on windows.

    M is a window module over the full algebra, Np a module over a finite
    profile algebra."""
    profile = Np.algebra.profile
    lhs = tensor_modules(M, induce_up(Np, D), D)
    MB = restrict_to_profile(M, profile)
    rhs = induce_up(tensor_modules_over(MB, Np, D), D)
    dec = InducedDecomposition(profile, D)

    rhs_index = {lab: k for k, (lab, _) in enumerate(rhs.basis)}
    mn_index = {}
    inner = tensor_modules_over(MB, Np, D)
    for k, (lab, _) in enumerate(inner.basis):
        mn_index[lab] = k

    def theta_of(lhs_idx):
        (m_lab, (w, np_idx)), _ = lhs.basis[lhs_idx]
        m_idx = next(i for i, (lab, _) in enumerate(M.basis) if lab == m_lab)
        out = 0
        for w1, w2 in milnor.mono_coproduct(w):
            chi = milnor.mono_antipode(w2)
            mm = 0
            for t in chi:
                mm ^= M.act_vec(t, 1 << m_idx) if t != () else (1 << m_idx)
            if not mm:
                continue
            dtot = milnor.mono_degree(w1)
            _, express = dec.decompose(dtot)
            for (w0, b) in express(frozenset([w1])):
                # b acts diagonally on (chi(w2) m (x) n)
                i2 = 0
                v = mm
                while v:
                    if v & 1:
                        cell = (M.basis[i2][0], Np.basis[np_idx][0])
                        src = mn_index.get(cell)
                        if src is not None:
                            img = inner.act_vec(b, 1 << src) if b != () \
                                else (1 << src)
                            t2 = 0
                            while img:
                                if img & 1:
                                    lab2 = (w0, t2)
                                    if lab2 in rhs_index:
                                        out ^= 1 << rhs_index[lab2]
                                img >>= 1
                                t2 += 1
                    v >>= 1
                    i2 += 1
        return out

    theta_cols = [theta_of(i) for i in range(lhs.dim)]
    # bijective per degree
    for d in range(D + 1):
        li = [i for i in range(lhs.dim) if lhs.degree(i) == d]
        ri = [j for j in range(rhs.dim) if rhs.degree(j) == d]
        if len(li) != len(ri):
            return False
        rows = []
        rmap = {j: k for k, j in enumerate(ri)}
        for i in li:
            bits = 0
            v = theta_cols[i]
            j = 0
            while v:
                if v & 1:
                    bits |= 1 << rmap[j]
                v >>= 1
                j += 1
            rows.append(bits)
        if rank_of_rows(rows, len(ri)) != len(li):
            return False
    # equivariance on generators within the window
    for g in ((1,), (2,), (4,)):
        dg = milnor.mono_degree(g)
        for i in range(lhs.dim):
            if lhs.degree(i) + dg > D:
                continue
            via_lhs = 0
            v = lhs.act_vec(g, 1 << i)
            j = 0
            while v:
                if v & 1:
                    via_lhs ^= theta_cols[j]
                v >>= 1
                j += 1
            via_rhs = rhs.act_vec(g, theta_cols[i])
            if via_lhs != via_rhs:
                return False
    return True


def tensor_modules_over(M: FinModule, N: FinModule, D: int) -> FinModule:
    """Diagonal tensor over a common finite profile algebra."""
    profile = M.algebra.profile
    pairs = [(i, j) for i in range(M.dim) for j in range(N.dim)
             if M.degree(i) + N.degree(j) <= D]
    pairs.sort(key=lambda p: (M.degree(p[0]) + N.degree(p[1]), p))
    index = {p: k for k, p in enumerate(pairs)}
    basis = tuple(((M.basis[i][0], N.basis[j][0]),
                   M.degree(i) + N.degree(j)) for i, j in pairs)
    top = max((d for _, d in basis), default=0)
    action = {}
    for d in range(1, top + 1):
        for a in milnor.basis(profile, d):
            cols = [0] * len(pairs)
            nonzero = False
            for k, (i, j) in enumerate(pairs):
                if M.degree(i) + N.degree(j) + d > D:
                    continue
                acc = 0
                for a1, a2 in milnor.mono_coproduct(a):
                    v1 = M.act_vec(a1, 1 << i) if a1 != () else (1 << i)
                    if not v1:
                        continue
                    v2 = N.act_vec(a2, 1 << j) if a2 != () else (1 << j)
                    if not v2:
                        continue
                    i2 = 0
                    vv1 = v1
                    while vv1:
                        if vv1 & 1:
                            j2 = 0
                            vv2 = v2
                            while vv2:
                                if vv2 & 1 and (i2, j2) in index:
                                    acc ^= 1 << index[(i2, j2)]
                                vv2 >>= 1
                                j2 += 1
                        vv1 >>= 1
                        i2 += 1
                cols[k] = acc
                nonzero = nonzero or bool(acc)
            if nonzero:
                action[a] = tuple(cols)
    return FinModule(MilnorTable(profile), tuple(basis), action)
