"""The restricted periplectic Lie superalgebra p(n) over GF(p), p > n.

Basis realization inside 2n x 2n supermatrices {(A, B; C, -A^t)} with B
symmetric, C antisymmetric and tr(A) = 0:

  Cartan    H(i,j)   = E_ii - E_jj - E_{n+i,n+i} + E_{n+j,n+j}       (even)
  EvenX     X(i,j)   = E_ij - E_{n+j,n+i}                  (i != j, even)
  OddNeg    Y(i,j)   = E_{n+i,j} - E_{n+j,i}               (i < j, degree -1)
  OddPos    Z(i,j)   = E_{i,n+j} + E_{j,n+i}               (i <= j, degree +1)

The Z_2-grading has the even part in degree 0 and splits the odd part by the
consistent Z-grading g(-1) + g(0) + g(+1).  The structure-constant table is
total, built from the realization, and verified restricted: the p-power map
fixes Cartans and kills all other basis elements.

Structure constants and p-power coefficients are plain ints mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import FieldParams


@dataclass(frozen=True)
class BasisElement:
    """One basis vector: kind in {'H','X','Y','Z'}, matrix indices 1-based."""

    kind: str
    i: int
    j: int

    @property
    def parity(self) -> int:
        return 0 if self.kind in ("H", "X") else 1

    @property
    def degree(self) -> int:
        return {"H": 0, "X": 0, "Y": -1, "Z": 1}[self.kind]

    @property
    def label(self) -> str:
        return f"{self.kind}{self.i}{self.j}"

    def eps_weight(self, n: int) -> tuple[int, ...]:
        """Adjoint weight in the epsilon basis (integer vector of length n)."""
        w = [0] * n
        if self.kind == "X":
            w[self.i - 1] += 1
            w[self.j - 1] -= 1
        elif self.kind == "Y":
            w[self.i - 1] -= 1
            w[self.j - 1] -= 1
        elif self.kind == "Z":
            w[self.i - 1] += 1
            w[self.j - 1] += 1
        return tuple(w)

    def __repr__(self):
        return self.label


def eps_to_pair(eps: tuple[int, ...]) -> tuple[int, ...]:
    """Convert an epsilon-basis integer weight to Cartan coordinates.

    Coordinate k (0-based) is the value on H(k+1, k+2), i.e. the consecutive
    difference eps[k] - eps[k+1].
    """
    return tuple(eps[k] - eps[k + 1] for k in range(len(eps) - 1))


def _basis_list(n: int) -> list[BasisElement]:
    basis = [BasisElement("H", i, i + 1) for i in range(1, n)]
    basis += [BasisElement("X", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    basis += [BasisElement("Y", i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    basis += [BasisElement("Z", i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    return basis


def supermatrix(e: BasisElement, n: int, p: int) -> np.ndarray:
    """The 2n x 2n integer matrix mod p realizing a basis element."""
    M = np.zeros((2 * n, 2 * n), dtype=np.int64)
    i, j = e.i - 1, e.j - 1
    if e.kind == "H":
        M[i, i] += 1
        M[j, j] -= 1
        M[n + i, n + i] -= 1
        M[n + j, n + j] += 1
    elif e.kind == "X":
        M[i, j] += 1
        M[n + j, n + i] -= 1
    elif e.kind == "Y":
        M[n + i, j] += 1
        M[n + j, i] -= 1
    elif e.kind == "Z":
        M[i, n + j] += 1
        M[j, n + i] += 1
    return M % p


def super_commutator(a: np.ndarray, b: np.ndarray, pa: int, pb: int, p: int) -> np.ndarray:
    """[a, b] = ab - (-1)^{|a||b|} ba, an anticommutator for two odd inputs."""
    sign = -1 if (pa and pb) else 1
    return (a @ b - sign * (b @ a)) % p


class AlgebraStructure:
    """p(n) over GF(p): basis, total bracket table, p-power map, realization."""

    def __init__(self, n: int, p: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        if p <= n + 1:
            raise ValueError(f"need p > n + 1 for the theory to apply, got p={p}, n={n}")
        FieldParams(p, 1)  # validates primality and p > 3
        self.n = n
        self.p = p
        self.basis = _basis_list(n)
        self.dim = len(self.basis)
        self.index = {e.label: k for k, e in enumerate(self.basis)}
        self.mats = [supermatrix(e, n, p) for e in self.basis]
        self._build_bracket()
        self._build_p_power()

    # --- construction -----------------------------------------------------
    def expand(self, M: np.ndarray) -> dict[int, int]:
        """Coefficients of a p(n) supermatrix in the basis; asserts membership."""
        n, p = self.n, self.p
        A = M[:n, :n]
        B = M[:n, n:]
        C = M[n:, :n]
        D = M[n:, n:]
        if ((A + D.T) % p).any():
            raise ValueError("matrix not in p(n): A != -D^t")
        if ((B - B.T) % p).any() or ((C + C.T) % p).any():
            raise ValueError("matrix not in p(n): block symmetry violated")
        if int(np.trace(A)) % p != 0:
            raise ValueError("matrix not in p(n): tr(A) != 0")
        coeffs: dict[int, int] = {}
        # Cartans: diagonal a_1..a_n with sum 0; coefficient of H(k,k+1) is
        # the partial sum a_1 + ... + a_k.
        run = 0
        for k in range(1, n):
            run = (run + int(A[k - 1, k - 1])) % p
            if run:
                coeffs[self.index[f"H{k}{k + 1}"]] = run
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and A[i - 1, j - 1] % p:
                    coeffs[self.index[f"X{i}{j}"]] = int(A[i - 1, j - 1]) % p
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if C[i - 1, j - 1] % p:
                    coeffs[self.index[f"Y{i}{j}"]] = int(C[i - 1, j - 1]) % p
        half = pow(2, p - 2, p)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                v = int(B[i - 1, j - 1]) % p
                if i == j:
                    v = (v * half) % p
                if v:
                    coeffs[self.index[f"Z{i}{j}"]] = v
        # safety: reconstruction must reproduce the input exactly
        recon = np.zeros_like(M)
        for k, c in coeffs.items():
            recon = (recon + c * self.mats[k]) % p
        if ((recon - M) % p).any():
            raise ValueError("expansion failed to reconstruct input")
        return coeffs

    def _build_bracket(self):
        self.bracket: dict[tuple[int, int], dict[int, int]] = {}
        for a in range(self.dim):
            ea = self.basis[a]
            for b in range(self.dim):
                eb = self.basis[b]
                M = super_commutator(self.mats[a], self.mats[b], ea.parity, eb.parity, self.p)
                self.bracket[(a, b)] = self.expand(M)

    def _build_p_power(self):
        self.p_power: dict[int, dict[int, int]] = {}
        for k, e in enumerate(self.basis):
            if e.parity:
                continue
            M = np.linalg.matrix_power(self.mats[k] % self.p, self.p) % self.p
            self.p_power[k] = self.expand(M)

    # --- queries --------------------------------------------------------------
    def idx(self, label: str) -> int:
        return self.index[label]

    def element(self, label: str) -> BasisElement:
        return self.basis[self.index[label]]

    def weight_pair(self, k: int) -> tuple[int, ...]:
        return eps_to_pair(self.basis[k].eps_weight(self.n))

    def cartan_indices(self) -> list[int]:
        return [self.index[f"H{i}{i + 1}"] for i in range(1, self.n)]

    def even_indices(self) -> list[int]:
        return [k for k, e in enumerate(self.basis) if e.parity == 0]

    def odd_neg_indices(self) -> list[int]:
        return [k for k, e in enumerate(self.basis) if e.kind == "Y"]

    def odd_pos_indices(self) -> list[int]:
        return [k for k, e in enumerate(self.basis) if e.kind == "Z"]

    def nilpotent_pos_indices(self) -> list[int]:
        """Even strictly-upper root vectors X(i,j) with i < j."""
        return [k for k, e in enumerate(self.basis) if e.kind == "X" and e.i < e.j]

    def nilpotent_neg_indices(self) -> list[int]:
        return [k for k, e in enumerate(self.basis) if e.kind == "X" and e.i > e.j]

    def raising_indices(self) -> list[int]:
        """Generators whose annihilation defines maximal vectors: n0 and g(+1)."""
        return self.nilpotent_pos_indices() + self.odd_pos_indices()

    # --- verification -----------------------------------------------------------
    def bracket_apply(self, coeffs: dict[int, int], b: int) -> dict[int, int]:
        """[sum_k coeffs_k x_k, x_b] as a coefficient dict."""
        out: dict[int, int] = {}
        for a, ca in coeffs.items():
            for k, c in self.bracket[(a, b)].items():
                out[k] = (out.get(k, 0) + ca * c) % self.p
        return {k: v for k, v in out.items() if v}

    def ad_power_apply(self, a: int, y: int, e: int) -> dict[int, int]:
        """(ad x_a)^e applied to x_y, via the bracket table."""
        cur = {y: 1}
        for _ in range(e):
            nxt: dict[int, int] = {}
            for k, c in cur.items():
                for k2, c2 in self.bracket[(a, k)].items():
                    nxt[k2] = (nxt.get(k2, 0) + c * c2) % self.p
            cur = {k: v for k, v in nxt.items() if v}
        return cur

    def verify_restricted(self) -> list[str]:
        """Check ad(x^{[p]}) = (ad x)^p for every even basis x, on all basis y."""
        violations = []
        for a in self.even_indices():
            pw = self.p_power[a]
            for y in range(self.dim):
                lhs: dict[int, int] = {}
                for k, c in pw.items():
                    for k2, c2 in self.bracket[(k, y)].items():
                        lhs[k2] = (lhs.get(k2, 0) + c * c2) % self.p
                lhs = {k: v for k, v in lhs.items() if v}
                rhs = self.ad_power_apply(a, y, self.p)
                if lhs != rhs:
                    violations.append(
                        f"restricted identity fails for x={self.basis[a]}, y={self.basis[y]}"
                    )
        return violations

    def verify_jacobi(self) -> list[str]:
        """Graded Leibniz rule [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]."""
        violations = []
        for a in range(self.dim):
            pa = self.basis[a].parity
            for b in range(self.dim):
                pb = self.basis[b].parity
                sign = -1 if (pa and pb) else 1
                for c in range(self.dim):
                    lhs: dict[int, int] = {}
                    for k, ck in self.bracket[(b, c)].items():
                        for k2, c2 in self.bracket[(a, k)].items():
                            lhs[k2] = (lhs.get(k2, 0) + ck * c2) % self.p
                    rhs: dict[int, int] = {}
                    for k, ck in self.bracket[(a, b)].items():
                        for k2, c2 in self.bracket[(k, c)].items():
                            rhs[k2] = (rhs.get(k2, 0) + ck * c2) % self.p
                    for k, ck in self.bracket[(a, c)].items():
                        for k2, c2 in self.bracket[(b, k)].items():
                            rhs[k2] = (rhs.get(k2, 0) + sign * ck * c2) % self.p
                    diff = {
                        k: (lhs.get(k, 0) - rhs.get(k, 0)) % self.p
                        for k in set(lhs) | set(rhs)
                    }
                    if any(diff.values()):
                        violations.append(
                            f"Jacobi fails at ({self.basis[a]}, {self.basis[b]}, {self.basis[c]})"
                        )
        return violations

    # --- serialization -------------------------------------------------------------
    def bracket_table_json(self) -> list[dict]:
        rows = []
        for a in range(self.dim):
            for b in range(self.dim):
                res = self.bracket[(a, b)]
                if res:
                    rows.append(
                        {
                            "left": self.basis[a].label,
                            "right": self.basis[b].label,
                            "result": sorted(
                                [self.basis[k].label, c] for k, c in res.items()
                            ),
                        }
                    )
        return rows


_ALGEBRA_CACHE: dict[tuple[int, int], AlgebraStructure] = {}


def build_algebra(n: int, p: int) -> AlgebraStructure:
    key = (n, p)
    if key not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[key] = AlgebraStructure(n, p)
    return _ALGEBRA_CACHE[key]
