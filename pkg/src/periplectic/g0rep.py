"""Modules over reduced enveloping algebras: construction by PBW straightening.

Every module here is induced from a small base module through an ordered set
of "lowering" factors F_1 < ... < F_k with nilpotency caps (p for even
factors, 2 for odd ones).  A symbolic engine rewrites x * F^e * v into
canonically ordered monomials times at most one terminal operator acting on
the base; the invariant that makes a single terminal suffice is that the
factor set is closed under brackets among its members (asserted).  Structure
constants and p-character values are prime-field integers, so the symbolic
tables are field-independent and shared across weights; base-module matrices
enter only at assembly time.

Instantiations:
  * baby Verma modules  (factors = even negative root vectors, base 1-dim)
  * induction from a Levi parabolic (factors = two commuting root vectors,
    base a simple gl(2)-module)
  * Kac modules, built in kac.py (factors = the three odd lowering vectors,
    base a simple module over the even part)
"""

from __future__ import annotations

import numpy as np

from .field import FieldParams, Matrix, RowSpace, SparseOp
from .structure import AlgebraStructure
from .weights import PChar, Weight, lambda_in_admissible_set


class StraighteningEngine:
    """Symbolic left action on ordered monomials F_1^{e_1} ... F_k^{e_k}.

    act(x, e) returns {(e', terminal): coeff} with coeff in GF(p), where
    terminal is None (identity on the base) or an algebra basis index whose
    base action multiplies in from the left.
    """

    def __init__(self, alg: AlgebraStructure, factors: tuple[int, ...], chi: PChar):
        self.alg = alg
        self.factors = factors
        self.pos = {f: i for i, f in enumerate(factors)}
        self.parity = tuple(alg.basis[f].parity for f in factors)
        self.caps = tuple(2 if pa else alg.p for pa in self.parity)
        self.chi_wrap = tuple(pow(chi.value(f), alg.p, alg.p) for f in factors)
        fset = set(factors)
        for f in factors:
            if alg.basis[f].parity:
                if alg.bracket[(f, f)]:
                    raise ValueError("odd factor with nonzero self-bracket")
            elif alg.p_power[f]:
                raise ValueError("even factor with nonzero restricted power")
            for g in factors:
                if not set(alg.bracket[(f, g)]) <= fset:
                    raise ValueError("factor set not closed under brackets")
        self.memo: dict[tuple[int, tuple[int, ...]], dict] = {}

    def act(self, x: int, e: tuple[int, ...]) -> dict[tuple[tuple[int, ...], int | None], int]:
        key = (x, e)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        p = self.alg.p
        out: dict[tuple[tuple[int, ...], int | None], int] = {}

        def accumulate(ekey, coeff):
            if coeff % p:
                out[ekey] = (out.get(ekey, 0) + coeff) % p

        support = [i for i, ei in enumerate(e) if ei]
        if not support:
            if x in self.pos:
                i = self.pos[x]
                unit = tuple(1 if j == i else 0 for j in range(len(e)))
                accumulate((unit, None), 1)
            else:
                accumulate((e, x), 1)
        else:
            i0 = support[0]
            if x in self.pos and self.pos[x] <= i0:
                i = self.pos[x]
                ne = e[i] + 1
                if ne == self.caps[i]:
                    if not self.parity[i] and self.chi_wrap[i]:
                        wrapped = tuple(0 if j == i else ej for j, ej in enumerate(e))
                        accumulate((wrapped, None), self.chi_wrap[i])
                    # odd square, or even wrap with chi(F) = 0: term vanishes
                else:
                    bumped = tuple(ne if j == i else ej for j, ej in enumerate(e))
                    accumulate((bumped, None), 1)
            else:
                f0 = self.factors[i0]
                e2 = tuple(ej - 1 if j == i0 else ej for j, ej in enumerate(e))
                sgn = -1 if (self.alg.basis[x].parity and self.parity[i0]) else 1
                for (e3, t), c in self.act(x, e2).items():
                    for (e4, t2), c2 in self.act(f0, e3).items():
                        # factor-closure guarantees prepends stay terminal-free
                        assert t2 is None
                        accumulate((e4, t), sgn * c * c2)
                for u, cu in self.alg.bracket[(x, f0)].items():
                    for (e4, t), c2 in self.act(u, e2).items():
                        accumulate((e4, t), cu * c2)
        out = {k: v for k, v in out.items() if v}
        self.memo[key] = out
        return out


_ENGINE_CACHE: dict[tuple, StraighteningEngine] = {}


def get_engine(alg: AlgebraStructure, factors: tuple[int, ...], chi: PChar) -> StraighteningEngine:
    key = (alg.n, alg.p, factors, tuple(pow(chi.value(f), alg.p, alg.p) for f in factors))
    if key not in _ENGINE_CACHE:
        _ENGINE_CACHE[key] = StraighteningEngine(alg, factors, chi)
    return _ENGINE_CACHE[key]


class RepModule:
    """A finite-dimensional module given by one action matrix per generator.

    actions maps algebra basis indices to SparseOp matrices over `params`.
    weights[i] is the Cartan weight of basis vector i; Cartan actions are
    diagonal in this basis.  grades[i], when present, is the Z-grade.
    cyclic_index, when set, names a basis vector known to generate.
    """

    def __init__(
        self,
        alg: AlgebraStructure,
        params: FieldParams,
        actions: dict[int, SparseOp],
        weights: list[Weight],
        chi: PChar,
        basis_labels: list,
        grades: list[int] | None = None,
        cyclic_index: int | None = None,
        base: "RepModule | None" = None,
        name: str = "",
    ):
        self.alg = alg
        self.params = params
        self.actions = actions
        self.weights = list(weights)
        self.chi = chi
        self.basis_labels = list(basis_labels)
        self.grades = list(grades) if grades is not None else None
        self.cyclic_index = cyclic_index
        self.base = base
        self.name = name
        self.dim = len(self.weights)
        for op in actions.values():
            if op.shape != (self.dim, self.dim):
                raise ValueError("action shape mismatch")

    # --- evaluation -------------------------------------------------------
    def act_vec(self, gen: int, vec: np.ndarray) -> np.ndarray:
        return self.actions[gen].apply(vec)

    def weight_blocks(self) -> dict[tuple, list[int]]:
        blocks: dict[tuple, list[int]] = {}
        for i, w in enumerate(self.weights):
            blocks.setdefault(w.key(), []).append(i)
        return blocks

    def weight_by_key(self) -> dict[tuple, Weight]:
        return {w.key(): w for w in self.weights}

    # --- verification ------------------------------------------------------
    def verify(self, check_pchar: bool = True) -> list[str]:
        """Machine check: Cartan diagonality, weight sparsity pattern,
        the bracket homomorphism identity on all generator pairs, and the
        p-power identity on even generators."""
        v: list[str] = []
        alg, p = self.alg, self.alg.p
        gens = sorted(self.actions)
        # Cartan actions are the diagonal weight matrices
        for ci, k in enumerate(alg.cartan_indices()):
            if k not in self.actions:
                continue
            want = np.zeros((self.dim, self.dim, self.params.m), dtype=np.int64)
            for j, w in enumerate(self.weights):
                want[j, j] = w.coords[ci].as_array()
            if not self.actions[k] == SparseOp.from_dense(self.params, want):
                v.append(f"{self.name}: Cartan {alg.basis[k]} is not diag(weights)")
        # weight-shift sparsity for every generator
        wid: dict[tuple, int] = {}
        for w in self.weights:
            wid.setdefault(w.key(), len(wid))
        warr = np.array([wid[w.key()] for w in self.weights], dtype=np.int64)
        uniq: dict[int, Weight] = {}
        for w in self.weights:
            uniq.setdefault(wid[w.key()], w)
        for k in gens:
            pair = alg.weight_pair(k)
            shifted = np.full(len(wid), -1, dtype=np.int64)
            for i, w in uniq.items():
                tk = w.shift(pair).key()
                shifted[i] = wid.get(tk, -1)
            for s in self.actions[k].slices:
                coo = s.tocoo()
                if coo.nnz and not (warr[coo.row] == shifted[warr[coo.col]]).all():
                    v.append(f"{self.name}: action of {alg.basis[k]} breaks weights")
                    break
        # homomorphism identity on generator pairs
        for ai, a in enumerate(gens):
            for b in gens[ai:]:
                sign = -1 if (alg.basis[a].parity and alg.basis[b].parity) else 1
                lhs = self.actions[a] @ self.actions[b]
                rhs2 = (self.actions[b] @ self.actions[a]).scale(sign)
                diff = lhs - rhs2
                for k, c in alg.bracket[(a, b)].items():
                    if k not in self.actions:
                        v.append(f"{self.name}: bracket [{alg.basis[a]},{alg.basis[b]}] leaves generator set")
                        break
                    diff = diff - self.actions[k].scale(c)
                else:
                    if not diff.is_zero():
                        v.append(
                            f"{self.name}: homomorphism fails on [{alg.basis[a]}, {alg.basis[b]}]"
                        )
        # p-power identity on even generators
        if check_pchar:
            for a in gens:
                if alg.basis[a].parity:
                    continue
                lhs = self.actions[a].matpow(p)
                for k, c in alg.p_power[a].items():
                    lhs = lhs - self.actions[k].scale(c)
                cp = pow(self.chi.value(a), p, p)
                if cp:
                    eye = np.zeros((self.dim, self.dim, self.params.m), dtype=np.int64)
                    eye[np.arange(self.dim), np.arange(self.dim), 0] = cp
                    lhs = lhs - SparseOp.from_dense(self.params, eye)
                if not lhs.is_zero():
                    v.append(f"{self.name}: p-power identity fails on {alg.basis[a]}")
        return v

    def __repr__(self):
        return f"RepModule({self.name or 'unnamed'}, dim={self.dim})"


def induced_module(
    alg: AlgebraStructure,
    factors: tuple[int, ...],
    exponents: list[tuple[int, ...]],
    base: RepModule,
    chi: PChar,
    name: str,
) -> RepModule:
    """Free induction through `factors` from `base`.

    Basis vector exponents[t] (x) base_j has index t * base.dim + j; the zero
    exponent must come first so the top of the base stays cyclic.
    """
    engine = get_engine(alg, factors, chi)
    params = base.params
    D = base.dim
    dim = len(exponents) * D
    col_of = {e: t * D for t, e in enumerate(exponents)}
    gen_set = sorted(set(factors) | set(base.actions))
    base_dense = {t: op.to_dense() for t, op in base.actions.items()}
    eye = np.zeros((D, D, params.m), dtype=np.int64)
    eye[np.arange(D), np.arange(D), 0] = 1
    base_dense[None] = eye

    actions: dict[int, SparseOp] = {}
    buf = np.zeros((dim, dim, params.m), dtype=np.int64)
    for x in gen_set:
        buf.fill(0)
        for e in exponents:
            c0 = col_of[e]
            for (e2, t), c in engine.act(x, e).items():
                r0 = col_of[e2]
                buf[r0 : r0 + D, c0 : c0 + D] += c * base_dense[t]
        actions[x] = SparseOp.from_dense(params, buf)

    weights: list[Weight] = []
    grades: list[int] | None = [] if base.grades is not None else None
    labels = []
    for e in exponents:
        shift = [0] * (alg.n - 1)
        deg = 0
        for i, f in enumerate(factors):
            pair = alg.weight_pair(f)
            for k in range(alg.n - 1):
                shift[k] += e[i] * pair[k]
            deg += e[i] * alg.basis[f].degree
        for j in range(D):
            weights.append(base.weights[j].shift(tuple(shift)))
            if grades is not None:
                grades.append(deg + (base.grades[j] if base.grades else 0))
            labels.append((e, base.basis_labels[j]))

    cyclic = base.cyclic_index if exponents[0] == tuple([0] * len(factors)) else None
    return RepModule(
        alg,
        params,
        actions,
        weights,
        chi,
        labels,
        grades=grades,
        cyclic_index=cyclic,
        base=base,
        name=name,
    )


def _product_exponents(caps: tuple[int, ...]) -> list[tuple[int, ...]]:
    import itertools

    return list(itertools.product(*[range(c) for c in caps]))


# --- baby Verma modules -----------------------------------------------------

VERMA_FACTORS = ("X31", "X32", "X21")  # ordered PBW factors of the even negative part


def _one_dim_base(alg: AlgebraStructure, chi: PChar, lam: Weight, terminal_zero: list[int]) -> RepModule:
    params = chi.field_params
    actions: dict[int, SparseOp] = {}
    for ci, k in enumerate(alg.cartan_indices()):
        actions[k] = SparseOp.from_dense(params, lam.coords[ci].as_array()[None, None, :])
    for k in terminal_zero:
        actions[k] = SparseOp.zeros(params, 1, 1)
    return RepModule(
        alg, params, actions, [lam], chi, basis_labels=["v"], grades=[0], cyclic_index=0,
        name="highest-line",
    )


def baby_verma(alg: AlgebraStructure, chi: PChar, lam: Weight) -> RepModule:
    """The reduced Verma module over the even part, of dimension p^3 for n=3.

    Requires chi to vanish on the strictly upper even part and lam to lie in
    the admissible set of chi.
    """
    if not chi.is_zero_on(alg.nilpotent_pos_indices()):
        raise ValueError("baby Verma needs chi = 0 on the positive even part")
    if not lambda_in_admissible_set(chi, lam):
        raise ValueError(f"weight {lam} is not admissible for {chi.kind}")
    factors = tuple(alg.idx(l) for l in VERMA_FACTORS)
    base = _one_dim_base(alg, chi, lam, terminal_zero=alg.nilpotent_pos_indices())
    exps = _product_exponents((alg.p,) * len(factors))
    return induced_module(alg, factors, exps, base, chi, name=f"Z({lam})")


# --- simple gl(2) modules for the Levi subalgebra ------------------------------

LEVI_GENS = ("H12", "H23", "X12", "X21")  # a gl(2) copy: Cartans + e + f
LEVI_RADICAL = ("X23", "X13")  # acts by zero on Levi base modules
LEVI_FACTORS = ("X31", "X32")  # abelian complement inducing up to the even part


def gl2_simple(alg: AlgebraStructure, chi: PChar, lam: Weight, kind: str) -> RepModule:
    """A simple module over the Levi gl(2) with highest weight lam.

    kind 'restricted': dimension r+1 where r = lam(H12) is a prime-field
    integer; the f-string stops at w_r.  kind 'regular_nilpotent': dimension
    p with f acting cyclically (chi(X21)^p = 1), always simple.
    """
    params = chi.field_params
    p = alg.p
    r = lam.coords[0].lift_int()
    s = lam.coords[1]
    if kind == "restricted":
        D = r + 1
        f_wrap = 0
    elif kind == "regular_nilpotent":
        D = p
        f_wrap = pow(chi.value(alg.idx("X21")), p, p)
        if f_wrap == 0:
            raise ValueError("regular_nilpotent needs chi(X21) != 0")
    else:
        raise ValueError(f"unknown gl2 simple kind {kind!r}")

    h12 = np.zeros((D, D, params.m), dtype=np.int64)
    h23 = np.zeros((D, D, params.m), dtype=np.int64)
    e = np.zeros((D, D, params.m), dtype=np.int64)
    f = np.zeros((D, D, params.m), dtype=np.int64)
    weights = []
    for k in range(D):
        wk = Weight((params.element(r - 2 * k), s + k))
        weights.append(wk)
        h12[k, k] = wk.coords[0].as_array()
        h23[k, k] = wk.coords[1].as_array()
        if k + 1 < D:
            f[k + 1, k, 0] = 1
        elif f_wrap:
            f[0, k, 0] = f_wrap
        if k > 0:
            e[k - 1, k, 0] = (k * (r - k + 1)) % p
    actions = {
        alg.idx("H12"): SparseOp.from_dense(params, h12),
        alg.idx("H23"): SparseOp.from_dense(params, h23),
        alg.idx("X12"): SparseOp.from_dense(params, e),
        alg.idx("X21"): SparseOp.from_dense(params, f),
    }
    for lab in LEVI_RADICAL:
        actions[alg.idx(lab)] = SparseOp.zeros(params, D, D)
    return RepModule(
        alg, params, actions, weights, chi,
        basis_labels=[f"w{k}" for k in range(D)], grades=[0] * D, cyclic_index=0,
        name=f"V_{kind}({lam})",
    )


def levi_induced(alg: AlgebraStructure, chi: PChar, V: RepModule) -> RepModule:
    """Induce a Levi base module through the two commuting lowering factors."""
    factors = tuple(alg.idx(l) for l in LEVI_FACTORS)
    exps = _product_exponents((alg.p,) * len(factors))
    return induced_module(alg, factors, exps, V, chi, name=f"Ind({V.name})")


# --- contravariant form and its radical (chi = 0) -------------------------------

def contravariant_gram(Z: RepModule) -> Matrix:
    """Gram matrix of the contravariant form on a baby Verma at chi = 0.

    The transpose antiautomorphism swaps X(i,j) with X(j,i) and fixes the
    Cartans; the form pairs basis monomials through the coefficient of the
    highest vector.  Computed by row recursions with the raising actions.
    """
    if Z.chi.values:
        raise ValueError("contravariant form requires chi = 0")
    alg = Z.alg
    p = alg.p
    dim = Z.dim
    M12 = Z.actions[alg.idx("X12")].to_dense()[:, :, 0]
    M23 = Z.actions[alg.idx("X23")].to_dense()[:, :, 0]
    M13 = Z.actions[alg.idx("X13")].to_dense()[:, :, 0]
    top = np.zeros(dim, dtype=np.int64)
    top[0] = 1
    G = np.zeros((dim, dim), dtype=np.int64)
    u = top
    for a in range(p):
        vab = u
        for b in range(p):
            w = vab
            for c in range(p):
                G[c * p * p + b * p + a] = w
                w = (w @ M13) % p
            vab = (vab @ M23) % p
        u = (u @ M12) % p
    return Matrix(Z.params, G[:, :, None])


def contravariant_radical(Z: RepModule) -> RowSpace:
    """Radical of the contravariant form, as a row space in Z coordinates."""
    G = contravariant_gram(Z)
    ns = G.nullspace()
    rs = RowSpace(Z.params, Z.dim)
    for j in range(ns.cols):
        rs.add(ns.arr[:, j, :])
    return rs


# --- submodule / quotient surgery --------------------------------------------------

def _grades_for_pivots(M: RepModule, rows: np.ndarray, pivots: list[int]) -> list[int] | None:
    if M.grades is None:
        return None
    grades = []
    for i, pc in enumerate(pivots):
        g = M.grades[pc]
        support = np.flatnonzero(rows[i].any(axis=1))
        if any(M.grades[int(j)] != g for j in support):
            return None
        grades.append(g)
    return grades


def submodule_module(M: RepModule, rs: RowSpace, name: str = "") -> RepModule:
    """The module structure on an invariant row space (rows must be invariant)."""
    rows = rs.sorted_rows()
    pivots = rs.sorted_pivots()
    k = rows.shape[0]
    actions: dict[int, SparseOp] = {}
    cols = np.ascontiguousarray(rows.transpose(1, 0, 2))  # (dim, k, m)
    for x, op in M.actions.items():
        img = op.apply(cols)  # (dim, k, m)
        actions[x] = SparseOp.from_dense(M.params, np.ascontiguousarray(img[pivots]))
    weights = [M.weights[pc] for pc in pivots]
    labels = [("sub", pc) for pc in pivots]
    return RepModule(
        M.alg, M.params, actions, weights, M.chi, labels,
        grades=_grades_for_pivots(M, rows, pivots), cyclic_index=None, name=name or f"sub({M.name})",
    )


def quotient_module(M: RepModule, rs: RowSpace, name: str = "") -> RepModule:
    """The quotient of M by an invariant row space, in free-column coordinates."""
    from .field import _fold

    rows = rs.sorted_rows()
    pivots = rs.sorted_pivots()
    pivot_set = set(pivots)
    free = [j for j in range(M.dim) if j not in pivot_set]
    p, m = M.params.p, M.params.m
    kdim = rows.shape[0]
    actions: dict[int, SparseOp] = {}
    for x, op in M.actions.items():
        sub = op.restrict_cols(free)
        img = np.zeros((M.dim, len(free), m), dtype=np.int64)
        for d, s in enumerate(sub.slices):
            img[:, :, d] = s.toarray()
        if kdim:
            factors = img[pivots]  # (k, q, m)
            if factors.any():
                acc = np.zeros((M.dim, len(free), 2 * m - 1), dtype=np.int64)
                for d1 in range(m):
                    R = rows[:, :, d1]  # (k, dim)
                    if not R.any():
                        continue
                    for d2 in range(m):
                        F = factors[:, :, d2]  # (k, q)
                        if F.any():
                            acc[:, :, d1 + d2] += np.rint(
                                R.astype(np.float64).T @ F.astype(np.float64)
                            ).astype(np.int64)
                img = (img - _fold(acc, p, m)) % p
        actions[x] = SparseOp.from_dense(M.params, np.ascontiguousarray(img[free]))
    weights = [M.weights[j] for j in free]
    labels = [("quo", j) for j in free]
    grades = None
    if M.grades is not None and _grades_for_pivots(M, rows, pivots) is not None:
        grades = [M.grades[j] for j in free]
    cyclic = None
    if M.cyclic_index is not None and M.cyclic_index not in pivot_set:
        cyclic = free.index(M.cyclic_index)
    return RepModule(
        M.alg, M.params, actions, weights, M.chi, labels,
        grades=grades, cyclic_index=cyclic, name=name or f"quo({M.name})",
    )


def lift_quotient_rows(M: RepModule, rs: RowSpace, qrows: np.ndarray) -> np.ndarray:
    """Lift row vectors from quotient coordinates back to M coordinates."""
    pivots = set(rs.sorted_pivots())
    free = [j for j in range(M.dim) if j not in pivots]
    out = np.zeros((qrows.shape[0], M.dim, M.params.m), dtype=np.int64)
    out[:, free, :] = qrows
    return out


# --- the simple head over the even part, per orbit ------------------------------------

def simple_g0(alg: AlgebraStructure, chi: PChar, lam: Weight) -> RepModule:
    """The simple module over the even part with highest weight lam.

    chi1/chi6: the baby Verma itself.  chi2/chi5: induced from a restricted
    simple gl(2) module.  chi4: induced from the p-dimensional simple of the
    regular-nilpotent gl(2) character.  chi3: head of the baby Verma by the
    radical of the contravariant form.
    """
    if not lambda_in_admissible_set(chi, lam):
        raise ValueError(f"weight {lam} is not admissible for {chi.kind}")
    kind = chi.kind
    if kind in ("chi1", "chi6"):
        L = baby_verma(alg, chi, lam)
        L.name = f"L0({lam})"
        return L
    if kind in ("chi2", "chi5"):
        V = gl2_simple(alg, chi, lam, "restricted")
        L = levi_induced(alg, chi, V)
        L.name = f"L0({lam})"
        return L
    if kind == "chi4":
        V = gl2_simple(alg, chi, lam, "regular_nilpotent")
        L = levi_induced(alg, chi, V)
        L.name = f"L0({lam})"
        return L
    if kind == "chi3":
        Z = baby_verma(alg, chi, lam)
        rad = contravariant_radical(Z)
        if rad.dim == 0:
            Z.name = f"L0({lam})"
            return Z
        L = quotient_module(Z, rad, name=f"L0({lam})")
        return L
    raise ValueError(f"no simple-module recipe for p-character kind {kind!r}")
