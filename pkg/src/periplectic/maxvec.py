"""Maximal vectors: weight vectors annihilated by all raising operators.

For a module of the full superalgebra the raising set is the strictly upper
even root vectors together with the whole positive odd part; for modules of
the even part only, the odd generators are absent and the set degenerates to
the even nilpotent radical.  The solver works one weight block at a time
(Cartan actions are diagonal), stacking the restricted raising actions and
computing an exact nullspace; blocks decompose further by Z-grade when the
module carries one, which the nullspace basis respects automatically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Matrix, scalar_inv, poly_mul
from .g0rep import RepModule
from .weights import Weight


@dataclass
class MaximalVector:
    weight: Weight
    grade: int | None
    vector: np.ndarray  # (dim, m), leading nonzero coordinate normalized to 1
    weight_block_dim: int  # solution-space dimension over the whole weight block

    def leading_index(self) -> int:
        return int(np.flatnonzero(self.vector.any(axis=1))[0])


def normalize_vector(vec: np.ndarray, p: int, m: int) -> np.ndarray:
    """Rescale so the first nonzero coordinate is 1."""
    lead = int(np.flatnonzero(vec.any(axis=1))[0])
    return poly_mul(vec, scalar_inv(vec[lead], p, m), p, m)


def raising_set(M: RepModule) -> list[int]:
    return [k for k in M.alg.raising_indices() if k in M.actions]


def maximal_vector_blocks(M: RepModule) -> list[tuple[Weight, list[int], np.ndarray]]:
    """Per weight block: (weight, column indices, solution basis (k, dim_block, m))."""
    gens = raising_set(M)
    p, m = M.params.p, M.params.m
    blocks = M.weight_blocks()
    keys = sorted(blocks)
    by_key = M.weight_by_key()
    out = []
    for key in keys:
        cols = blocks[key]
        pieces = []
        for g in gens:
            op = M.actions[g].restrict_cols(cols)
            dense = np.zeros((op.shape[0], len(cols), m), dtype=np.int64)
            for d, s in enumerate(op.slices):
                dense[:, :, d] = s.toarray()
            nz = np.flatnonzero(dense.any(axis=(1, 2)))
            if nz.size:
                pieces.append(dense[nz])
        if pieces:
            stacked = Matrix(M.params, np.concatenate(pieces, axis=0), reduce=False)
            ns = stacked.nullspace()
            sols = np.ascontiguousarray(ns.arr.transpose(1, 0, 2))  # (k, bs, m)
        else:
            sols = np.zeros((len(cols), len(cols), m), dtype=np.int64)
            sols[np.arange(len(cols)), np.arange(len(cols)), 0] = 1
        out.append((by_key[key], cols, sols))
    return out


def maximal_vectors(M: RepModule) -> list[MaximalVector]:
    p, m = M.params.p, M.params.m
    result = []
    for weight, cols, sols in maximal_vector_blocks(M):
        k = sols.shape[0]
        for row in sols:
            vec = np.zeros((M.dim, m), dtype=np.int64)
            vec[cols] = row
            vec = normalize_vector(vec, p, m)
            grade = None
            if M.grades is not None:
                support = np.flatnonzero(vec.any(axis=1))
                gset = {M.grades[int(i)] for i in support}
                if len(gset) == 1:
                    grade = gset.pop()
            result.append(MaximalVector(weight, grade, vec, k))
    result.sort(
        key=lambda v: (v.weight.key(), -(v.grade if v.grade is not None else 0), v.leading_index())
    )
    return result


def is_maximal(M: RepModule, vec: np.ndarray) -> bool:
    """True when vec is nonzero, a weight vector, and killed by every raiser."""
    if not vec.any():
        return False
    support = np.flatnonzero(vec.any(axis=1))
    keys = {M.weights[int(i)].key() for i in support}
    if len(keys) != 1:
        return False
    return all(not M.act_vec(g, vec).any() for g in raising_set(M))


# --- structured candidates in a Kac module -----------------------------------------

def embed_base(K: RepModule, w: np.ndarray) -> np.ndarray:
    """Embed a base-module vector into the grade-0 block of a Kac module."""
    D = K.base.dim
    out = np.zeros((K.dim, K.params.m), dtype=np.int64)
    out[:D] = np.asarray(w, dtype=np.int64) % K.params.p
    return out


def build_m_vector(K: RepModule, kind: str, comps: dict[str, np.ndarray]) -> np.ndarray:
    """Assemble the three candidate shapes from base components, by acting.

    kind 'm1': y1 w1 + y2 w2 + y3 w3     (components w1, w2, w3)
    kind 'm2': y2 y1 w1 + y3 y1 w2 + y2 y3 w3
    kind 'm3': y2 y3 y1 w                (component w)

    Components are base-module coordinate arrays (dim_base, m); the vector is
    produced by the module action matrices, so no sign conventions enter.
    """
    alg = K.alg
    y1, y2, y3 = (K.actions[alg.idx(l)] for l in ("Y12", "Y13", "Y23"))
    p = K.params.p

    def emb(name):
        return embed_base(K, comps[name])

    if kind == "m1":
        out = y1.apply(emb("w1")) + y2.apply(emb("w2")) + y3.apply(emb("w3"))
    elif kind == "m2":
        out = (
            y2.apply(y1.apply(emb("w1")))
            + y3.apply(y1.apply(emb("w2")))
            + y2.apply(y3.apply(emb("w3")))
        )
    elif kind == "m3":
        out = y2.apply(y3.apply(y1.apply(emb("w"))))
    else:
        raise ValueError(f"unknown candidate kind {kind!r}")
    return out % p


def _vec_eq(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    return not ((a - b) % p).any()


def check_m_conditions(K: RepModule, kind: str, mu: Weight, comps: dict[str, np.ndarray]) -> dict:
    """Evaluate the closed-form maximality conditions for the three candidate
    shapes against the direct definition, returning both verdicts.

    The returned dict has one boolean per numbered condition, their
    conjunction under 'all_conditions', the direct annihilation test under
    'is_maximal_of_weight', and 'equivalent'.
    """
    alg = K.alg
    base = K.base
    p = K.params.p
    act = {lab: base.actions[alg.idx(lab)] for lab in ("H12", "H23", "X12", "X23", "X31", "X32")}
    mu1, mu2 = mu.coords

    def scaled(w, c):
        return poly_mul(np.asarray(w, dtype=np.int64), c.as_array(), p, K.params.m)

    conds: dict[str, bool] = {}
    if kind == "m1":
        w1, w2, w3 = comps["w1"], comps["w2"], comps["w3"]
        conds["2.1"] = (
            _vec_eq(act["H12"].apply(w1), scaled(w1, mu1), p)
            and _vec_eq(act["H12"].apply(w2), scaled(w2, mu1 + 1), p)
            and _vec_eq(act["H12"].apply(w3), scaled(w3, mu1 - 1), p)
        )
        conds["2.2"] = (
            _vec_eq(act["H23"].apply(w1), scaled(w1, mu2 + 1), p)
            and _vec_eq(act["H23"].apply(w2), scaled(w2, mu2 - 1), p)
            and _vec_eq(act["H23"].apply(w3), scaled(w3, mu2), p)
        )
        conds["2.3"] = not ((act["X31"].apply(w2) + act["X32"].apply(w3)) % p).any()
        conds["2.4"] = (
            not act["X12"].apply(w1).any()
            and not act["X12"].apply(w2).any()
            and _vec_eq(act["X12"].apply(w3), w2 % p, p)
        )
        conds["2.5"] = (
            not act["X23"].apply(w1).any()
            and _vec_eq(act["X23"].apply(w2), w1 % p, p)
            and not act["X23"].apply(w3).any()
        )
    elif kind == "m2":
        w1, w2, w3 = comps["w1"], comps["w2"], comps["w3"]
        conds["2.6"] = (
            _vec_eq(act["H12"].apply(w1), scaled(w1, mu1 + 1), p)
            and _vec_eq(act["H12"].apply(w2), scaled(w2, mu1 - 1), p)
            and _vec_eq(act["H12"].apply(w3), scaled(w3, mu1), p)
        )
        conds["2.7"] = (
            _vec_eq(act["H23"].apply(w1), scaled(w1, mu2), p)
            and _vec_eq(act["H23"].apply(w2), scaled(w2, mu2 + 1), p)
            and _vec_eq(act["H23"].apply(w3), scaled(w3, mu2 - 1), p)
        )
        conds["2.8"] = (
            not ((act["X32"].apply(w2) + act["X31"].apply(w1) + w3) % p).any()
            and not act["X31"].apply(w3).any()
            and not act["X32"].apply(w3).any()
        )
        conds["2.9"] = (
            not act["X12"].apply(w1).any()
            and _vec_eq(act["X12"].apply(w2), w1 % p, p)
            and not act["X12"].apply(w3).any()
        )
        conds["2.10"] = (
            not act["X23"].apply(w1).any()
            and not act["X23"].apply(w2).any()
            and not ((w2 + act["X23"].apply(w3)) % p).any()
        )
    elif kind == "m3":
        w = comps["w"]
        conds["2.11"] = _vec_eq(act["H12"].apply(w), scaled(w, mu1), p) and _vec_eq(
            act["H23"].apply(w), scaled(w, mu2), p
        )
        conds["2.12"] = (
            not act["X32"].apply(w).any()
            and not act["X31"].apply(w).any()
            and not act["X12"].apply(w).any()
            and not act["X23"].apply(w).any()
        )
    else:
        raise ValueError(f"unknown candidate kind {kind!r}")

    vec = build_m_vector(K, kind, comps)
    nonzero = bool(vec.any())
    maximal = nonzero and is_maximal(K, vec)
    weight_ok = False
    if nonzero:
        support = np.flatnonzero(vec.any(axis=1))
        weight_ok = all(K.weights[int(i)] == mu for i in support)
    all_conds = all(conds.values())
    # the conditions characterize maximality for nonzero candidates only
    return {
        "kind": kind,
        "conditions": conds,
        "all_conditions": all_conds,
        "vector_nonzero": nonzero,
        "is_maximal_of_weight": bool(maximal and weight_ok),
        "equivalent": all_conds == bool(maximal and weight_ok) if nonzero else True,
        "vector": vec,
    }
