"""Kac modules: induction from the even part through the odd lowering vectors.

K(lambda) = U_chi(g) tensored over the non-negative part with the simple
module L0(lambda) of the even part; the positive odd part acts by zero on
L0.  The PBW basis is indexed by (mask, j): mask is a bitset over the odd
factors (bit 0 = Y12, bit 1 = Y13, bit 2 = Y23), j indexes the L0 basis, and
the vector Y^mask (x) L0_j sits at index mask * dim(L0) + j with Z-grade
minus popcount(mask).
"""

from __future__ import annotations

import numpy as np

from .field import SparseOp
from .g0rep import RepModule, induced_module, simple_g0
from .structure import AlgebraStructure
from .weights import PChar, Weight

ODD_FACTORS = ("Y12", "Y13", "Y23")

DIM_GUARD = 20000


def odd_exponents() -> list[tuple[int, int, int]]:
    """Exponent tuples in mask order: bit i of the index flags factor i."""
    return [((mask >> 0) & 1, (mask >> 1) & 1, (mask >> 2) & 1) for mask in range(8)]


def kac_module(
    alg: AlgebraStructure,
    chi: PChar,
    lam: Weight,
    base: RepModule | None = None,
    force: bool = False,
) -> RepModule:
    """Build K(lambda) on top of L0(lambda) (or a supplied base module)."""
    if base is None:
        base = simple_g0(alg, chi, lam)
    dim = (1 << len(ODD_FACTORS)) * base.dim
    if dim > DIM_GUARD and not force:
        raise ValueError(f"Kac module dimension {dim} exceeds guard {DIM_GUARD}; pass force=True")
    # the positive odd part acts by zero on the base
    ext_actions = dict(base.actions)
    for k in alg.odd_pos_indices():
        ext_actions[k] = SparseOp.zeros(base.params, base.dim, base.dim)
    base_ext = RepModule(
        alg, base.params, ext_actions, base.weights, chi, base.basis_labels,
        grades=base.grades, cyclic_index=base.cyclic_index, name=base.name,
    )
    factors = tuple(alg.idx(l) for l in ODD_FACTORS)
    K = induced_module(alg, factors, odd_exponents(), base_ext, chi, name=f"K({lam})")
    K.base = base
    return K


def grading_census(K: RepModule) -> dict[int, int]:
    """Dimension of each Z-grade; for a Kac module this is base * (1,3,3,1)."""
    out: dict[int, int] = {}
    for g in K.grades:
        out[g] = out.get(g, 0) + 1
    return out


def degree_zero_block_matches_base(K: RepModule) -> bool:
    """The grade-0 block of every even action equals the base module action."""
    base = K.base
    D = base.dim
    for x in K.alg.even_indices():
        sub = K.actions[x]
        for d in range(K.params.m):
            block = sub.slices[d][:D, :D]
            if (block - base.actions[x].slices[d]).nnz != 0:
                return False
        # and no even action leaves the grade-0 block downward
    return True


def vector_from_components(K: RepModule, comps: dict[int, np.ndarray]) -> np.ndarray:
    """Assemble a K-vector from {mask: base-coordinate array} components."""
    D = K.base.dim
    out = np.zeros((K.dim, K.params.m), dtype=np.int64)
    for mask, arr in comps.items():
        arr = np.asarray(arr, dtype=np.int64)
        if arr.shape != (D, K.params.m):
            raise ValueError("component shape mismatch")
        out[mask * D : (mask + 1) * D] = arr % K.params.p
    return out
