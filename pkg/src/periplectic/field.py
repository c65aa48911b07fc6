"""Exact linear algebra over GF(p) and its degree-p Artin-Schreier extension.

The extension GF(p^p) is realized as GF(p)[w]/(w^p - w - 1), which contains
every scalar the representation-theoretic computations need: for c in GF(p)
the element c*w solves X^p - X = c.  Field elements are little-endian
coefficient vectors of length m, where m = 1 encodes the prime field and
m = p the extension.

Bulk data lives in numpy int64 arrays of shape (..., m) with entries reduced
into [0, p).  Matrix products route through float64 BLAS one coefficient
slice at a time; this is exact as long as inner_dim * (p-1)^2 < 2^53, which
is asserted.  No floating point value ever survives into a result without an
exact integer round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_FLOAT_EXACT_BOUND = 2**53


class NoSolutionError(Exception):
    """Raised by solve() when the right-hand side is not in the column space."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldParams:
    """Parameters of GF(p) (ext_degree 1) or GF(p^p) (ext_degree p)."""

    p: int
    ext_degree: int = 1

    def __post_init__(self):
        if not _is_prime(self.p) or self.p <= 3:
            raise ValueError(f"p must be a prime > 3, got {self.p}")
        if self.ext_degree not in (1, self.p):
            raise ValueError(f"ext_degree must be 1 or p={self.p}, got {self.ext_degree}")

    @property
    def m(self) -> int:
        return self.ext_degree

    @property
    def order(self) -> int:
        return self.p**self.ext_degree

    # --- element constructors -------------------------------------------
    def element(self, coeffs) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            if coeffs.params != self:
                raise ValueError("field mismatch")
            return coeffs
        if isinstance(coeffs, (int, np.integer)):
            c = [int(coeffs) % self.p] + [0] * (self.m - 1)
            return FieldElement(self, tuple(c))
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        coeffs += [0] * (self.m - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The Artin-Schreier generator w with w^p = w + 1."""
        if self.m == 1:
            raise ValueError("prime field has no extension generator")
        return self.element([0, 1])


def _fold(arr: np.ndarray, p: int, m: int) -> np.ndarray:
    """Reduce (..., L) coefficient arrays by w^p = w + 1, then mod p.

    Requires L <= 2m - 1, so a single high-to-low pass suffices (folded
    contributions land strictly below degree m).
    """
    L = arr.shape[-1]
    for d in range(L - 1, m - 1, -1):
        c = arr[..., d]
        arr[..., d - m + 1] += c
        arr[..., d - m] += c
        arr[..., d] = 0
    out = arr[..., :m] % p
    return np.ascontiguousarray(out)


def poly_mul(a: np.ndarray, b: np.ndarray, p: int, m: int) -> np.ndarray:
    """Broadcasted product of coefficient vectors, reduced into GF(p^m)."""
    if m == 1:
        return (a * b) % p
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(shape + (2 * m - 1,), dtype=np.int64)
    for d in range(m):
        out[..., d : d + m] += a[..., d : d + 1] * b
    return _fold(out, p, m)


def scalar_inv(coeffs: np.ndarray, p: int, m: int) -> np.ndarray:
    """Inverse of a single nonzero scalar, as an (m,) coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    if not coeffs.any():
        raise ZeroDivisionError("inversion of zero field element")
    if m == 1:
        return np.array([pow(int(coeffs[0]), p - 2, p)], dtype=np.int64)
    return scalar_pow(coeffs, p**m - 2, p, m)


def scalar_pow(coeffs: np.ndarray, e: int, p: int, m: int) -> np.ndarray:
    """Square-and-multiply power of a single scalar coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    if e < 0:
        return scalar_pow(scalar_inv(coeffs, p, m), -e, p, m)
    result = np.zeros(m, dtype=np.int64)
    result[0] = 1
    base = coeffs
    while e:
        if e & 1:
            result = poly_mul(result, base, p, m)
        base = poly_mul(base, base, p, m)
        e >>= 1
    return result


class FieldElement:
    """Immutable element of GF(p) or GF(p^p); coefficients little-endian in w."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params: FieldParams, coeffs: tuple):
        self.params = params
        self.coeffs = coeffs

    # --- helpers ---------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.params != self.params:
                raise ValueError("field mismatch")
            return other
        return self.params.element(other)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def in_prime_field(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def lift_int(self) -> int:
        """The integer representative, only for prime-subfield elements."""
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime subfield")
        return self.coeffs[0]

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        p = self.params.p
        return FieldElement(self.params, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.params.p
        return FieldElement(self.params, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        pr = self.params
        out = poly_mul(self.as_array(), o.as_array(), pr.p, pr.m)
        return FieldElement(pr, tuple(int(c) for c in out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        pr = self.params
        out = scalar_inv(self.as_array(), pr.p, pr.m)
        return FieldElement(pr, tuple(int(c) for c in out))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        pr = self.params
        out = scalar_pow(self.as_array(), e, pr.p, pr.m)
        return FieldElement(pr, tuple(int(c) for c in out))

    def frobenius(self) -> "FieldElement":
        return self**self.params.p

    # --- identity ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.params.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.params == other.params and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.params, self.coeffs))

    def __repr__(self):
        if self.params.m == 1 or self.in_prime_field():
            return str(self.coeffs[0])
        terms = []
        for d in range(self.params.m - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            if d == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                terms.append(f"{head}w" if d == 1 else f"{head}w^{d}")
        return " + ".join(terms) if terms else "0"


def matmul(a: np.ndarray, b: np.ndarray, p: int, m: int) -> np.ndarray:
    """Exact product of (r, k, m) @ (k, c, m) coefficient arrays."""
    r, k = a.shape[0], a.shape[1]
    c = b.shape[1]
    if k == 0 or r == 0 or c == 0:
        return np.zeros((r, c, m), dtype=np.int64)
    if k * (p - 1) ** 2 >= _FLOAT_EXACT_BOUND:
        raise ValueError("inner dimension too large for exact float64 product")
    out = np.zeros((r, c, 2 * m - 1), dtype=np.int64)
    bs = [np.asarray(b[:, :, d], dtype=np.float64) for d in range(m)]
    for d1 in range(m):
        af = np.asarray(a[:, :, d1], dtype=np.float64)
        for d2 in range(m):
            out[:, :, d1 + d2] += np.rint(af @ bs[d2]).astype(np.int64)
    return _fold(out, p, m)


class Matrix:
    """Dense matrix over GF(p) or GF(p^p): int64 array of shape (rows, cols, m)."""

    __slots__ = ("params", "arr")

    def __init__(self, params: FieldParams, arr: np.ndarray, reduce: bool = True):
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[2] != params.m:
            raise ValueError(f"expected shape (rows, cols, {params.m}), got {arr.shape}")
        self.params = params
        self.arr = arr % params.p if reduce else arr

    # --- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, params: FieldParams, rows: int, cols: int) -> "Matrix":
        return cls(params, np.zeros((rows, cols, params.m), dtype=np.int64), reduce=False)

    @classmethod
    def identity(cls, params: FieldParams, n: int) -> "Matrix":
        arr = np.zeros((n, n, params.m), dtype=np.int64)
        arr[np.arange(n), np.arange(n), 0] = 1
        return cls(params, arr, reduce=False)

    @classmethod
    def from_rows(cls, params: FieldParams, rows) -> "Matrix":
        rows = list(rows)
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        arr = np.zeros((nr, nc, params.m), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged rows")
            for j, ent in enumerate(row):
                arr[i, j] = params.element(ent).as_array()
        return cls(params, arr, reduce=False)

    # --- basic properties ---------------------------------------------------
    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    def get(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.params, tuple(int(c) for c in self.arr[i, j]))

    def is_zero(self) -> bool:
        return not self.arr.any()

    def copy(self) -> "Matrix":
        return Matrix(self.params, self.arr.copy(), reduce=False)

    def transpose(self) -> "Matrix":
        return Matrix(self.params, np.ascontiguousarray(self.arr.transpose(1, 0, 2)), reduce=False)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.params == other.params
            and self.arr.shape == other.arr.shape
            and bool((self.arr == other.arr).all())
        )

    def __repr__(self):
        ents = [[repr(self.get(i, j)) for j in range(self.cols)] for i in range(self.rows)]
        return "[" + "\n ".join("[" + ", ".join(r) + "]" for r in ents) + "]"

    # --- arithmetic ----------------------------------------------------------
    def _check(self, other: "Matrix"):
        if self.params != other.params:
            raise ValueError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.params, self.arr + other.arr)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.params, self.arr - other.arr)

    def __neg__(self) -> "Matrix":
        return Matrix(self.params, -self.arr)

    def scale(self, k) -> "Matrix":
        k = self.params.element(k)
        pr = self.params
        return Matrix(pr, poly_mul(self.arr, k.as_array(), pr.p, pr.m), reduce=False)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        pr = self.params
        return Matrix(pr, matmul(self.arr, other.arr, pr.p, pr.m), reduce=False)

    def matpow(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("matpow needs a square matrix")
        result = Matrix.identity(self.params, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    # --- gaussian elimination -------------------------------------------------
    def rref(self) -> tuple["Matrix", int, tuple[int, ...]]:
        """Reduced row-echelon form; returns (matrix, rank, pivot columns)."""
        p, m = self.params.p, self.params.m
        R = self.arr.copy()
        nr, nc = R.shape[0], R.shape[1]
        pivots = []
        row = 0
        for col in range(nc):
            if row == nr:
                break
            piv = None
            for rr in range(row, nr):
                if R[rr, col].any():
                    piv = rr
                    break
            if piv is None:
                continue
            if piv != row:
                R[[row, piv]] = R[[piv, row]]
            inv = scalar_inv(R[row, col], p, m)
            R[row] = poly_mul(R[row], inv, p, m)
            colvals = R[:, col].copy()
            colvals[row] = 0
            if colvals.any():
                upd = poly_mul(colvals[:, None, :], R[row][None, :, :], p, m)
                R = (R - upd) % p
            pivots.append(col)
            row += 1
        return Matrix(self.params, R, reduce=False), len(pivots), tuple(pivots)

    def rank(self) -> int:
        return self.rref()[1]

    def nullspace(self) -> "Matrix":
        """Matrix whose columns form a basis of {x : self @ x = 0}."""
        R, rank, pivots = self.rref()
        nc = self.cols
        free = [j for j in range(nc) if j not in set(pivots)]
        ns = np.zeros((nc, len(free), self.params.m), dtype=np.int64)
        p = self.params.p
        for k, j in enumerate(free):
            ns[j, k, 0] = 1
            for i, pc in enumerate(pivots):
                ns[pc, k] = (-R.arr[i, j]) % p
        return Matrix(self.params, ns, reduce=False)

    def solve(self, b: "Matrix") -> "Matrix":
        """Solve self @ x = b (free variables set to 0); NoSolutionError if none."""
        self._check(b)
        if b.rows != self.rows:
            raise ValueError("rhs row count mismatch")
        aug = Matrix(self.params, np.concatenate([self.arr, b.arr], axis=1), reduce=False)
        R, rank, pivots = aug.rref()
        nc = self.cols
        if any(pc >= nc for pc in pivots):
            raise NoSolutionError("right-hand side not in column space")
        x = np.zeros((nc, b.cols, self.params.m), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = R.arr[i, nc:]
        return Matrix(self.params, x, reduce=False)

    # --- on-disk text format ----------------------------------------------------
    def to_text(self) -> str:
        """Cache format: header 'p ext rows cols', then rows*cols coefficient lines."""
        lines = [f"{self.params.p} {self.params.ext_degree} {self.rows} {self.cols}"]
        flat = self.arr.reshape(self.rows * self.cols, self.params.m)
        lines.extend(" ".join(str(int(c)) for c in ent) for ent in flat)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        p, ext, rows, cols = (int(t) for t in lines[0].split())
        params = FieldParams(p, ext)
        ents = [[int(t) for t in ln.split()] for ln in lines[1:]]
        if len(ents) != rows * cols:
            raise ValueError("entry count mismatch in matrix text")
        arr = np.array(ents, dtype=np.int64).reshape(rows, cols, params.m)
        return cls(params, arr)


def stack_rows(mats: list[Matrix]) -> Matrix:
    params = mats[0].params
    return Matrix(params, np.concatenate([m.arr for m in mats], axis=0), reduce=False)


class RowSpace:
    """Incremental row-reduced span of vectors of shape (ncols, m).

    Rows are kept in full reduced echelon form, so membership reduction is a
    single vectorized pass.  Vectors are numpy int64 arrays.
    """

    def __init__(self, params: FieldParams, ncols: int):
        self.params = params
        self.ncols = ncols
        self.rows = np.zeros((0, ncols, params.m), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Return vec minus its projection onto the current span."""
        p, m = self.params.p, self.params.m
        v = np.asarray(vec, dtype=np.int64) % p
        r = self.rows.shape[0]
        if r == 0:
            return v
        factors = v[self.pivots]  # (r, m)
        if not factors.any():
            return v
        L = 2 * m - 1
        acc = np.zeros((self.ncols, L), dtype=np.int64)
        flat = self.rows.reshape(r, self.ncols * m)
        for d in range(m):
            fd = factors[:, d]
            if not fd.any():
                continue
            contrib = np.rint(fd.astype(np.float64) @ flat.astype(np.float64)).astype(np.int64)
            acc[:, d : d + m] += contrib.reshape(self.ncols, m)
        return (v - _fold(acc, p, m)) % p

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def add(self, vec: np.ndarray) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        p, m = self.params.p, self.params.m
        v = self.reduce(vec)
        nz = np.flatnonzero(v.any(axis=1))
        if nz.size == 0:
            return False
        j = int(nz[0])
        v = poly_mul(v, scalar_inv(v[j], p, m), p, m)
        if self.rows.shape[0]:
            factors = self.rows[:, j].copy()  # (r, m)
            if factors.any():
                upd = np.zeros((self.rows.shape[0], self.ncols, 2 * m - 1), dtype=np.int64)
                for d in range(m):
                    fd = factors[:, d]
                    if fd.any():
                        upd[:, :, d : d + m] += fd[:, None, None] * v[None, :, :]
                self.rows = (self.rows - _fold(upd, p, m)) % p
        self.rows = np.concatenate([self.rows, v[None]], axis=0)
        self.pivots.append(j)
        return True

    def sorted_rows(self) -> np.ndarray:
        """Basis rows ordered by pivot column (canonical rref order)."""
        order = np.argsort(np.array(self.pivots, dtype=np.int64), kind="stable")
        return self.rows[order]

    def sorted_pivots(self) -> list[int]:
        return sorted(self.pivots)


class SparseOp:
    """A linear operator over GF(p^m) stored as one scipy CSR matrix per w-power.

    apply() maps vectors of shape (cols, m) to (rows, m); composition and
    exact integer arithmetic follow the same convolve-then-fold scheme as the
    dense kernel.
    """

    __slots__ = ("params", "shape", "slices")

    def __init__(self, params: FieldParams, slices):
        from scipy.sparse import csr_matrix

        self.params = params
        self.slices = [csr_matrix(s, dtype=np.int64) for s in slices]
        if len(self.slices) != params.m:
            raise ValueError("need one slice per extension coefficient")
        self.shape = self.slices[0].shape
        for s in self.slices:
            if s.shape != self.shape:
                raise ValueError("inconsistent slice shapes")

    @classmethod
    def from_dense(cls, params: FieldParams, arr: np.ndarray) -> "SparseOp":
        from scipy.sparse import csr_matrix

        arr = np.asarray(arr, dtype=np.int64) % params.p
        return cls(params, [csr_matrix(arr[:, :, d]) for d in range(params.m)])

    @classmethod
    def zeros(cls, params: FieldParams, rows: int, cols: int) -> "SparseOp":
        from scipy.sparse import csr_matrix

        return cls(params, [csr_matrix((rows, cols), dtype=np.int64)] * params.m)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape + (self.params.m,), dtype=np.int64)
        for d, s in enumerate(self.slices):
            out[:, :, d] = s.toarray()
        return out

    def to_matrix(self) -> Matrix:
        return Matrix(self.params, self.to_dense(), reduce=False)

    def nnz(self) -> int:
        return sum(s.nnz for s in self.slices)

    def is_zero(self) -> bool:
        return all(s.nnz == 0 for s in self.slices)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Apply to one vector (cols, m) or a batch (cols, k, m)."""
        p, m = self.params.p, self.params.m
        batch = vec.ndim == 3
        if not batch:
            vec = vec[:, None, :]
        out = np.zeros((self.shape[0], vec.shape[1], 2 * m - 1), dtype=np.int64)
        for d2 in range(m):
            col = vec[:, :, d2]
            if not col.any():
                continue
            for d1 in range(m):
                s = self.slices[d1]
                if s.nnz:
                    out[:, :, d1 + d2] += s @ col
        res = _fold(out, p, m)
        return res if batch else res[:, 0, :]

    def __add__(self, other: "SparseOp") -> "SparseOp":
        p = self.params.p
        slices = []
        for a, b in zip(self.slices, other.slices):
            s = (a + b).tocsr()
            s.data %= p
            s.eliminate_zeros()
            slices.append(s)
        return SparseOp(self.params, slices)

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return self + other.scale(-1)

    def scale(self, k) -> "SparseOp":
        """Scale by a prime-field integer (cheap path, no slice mixing)."""
        k = int(k) % self.params.p
        slices = []
        for s in self.slices:
            t = s.copy()
            t.data = (t.data * k) % self.params.p
            t.eliminate_zeros()
            slices.append(t)
        return SparseOp(self.params, slices)

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        from scipy.sparse import csr_matrix

        p, m = self.params.p, self.params.m
        rows, cols = self.shape[0], other.shape[1]
        acc = [csr_matrix((rows, cols), dtype=np.int64) for _ in range(2 * m - 1)]
        for d1 in range(m):
            a = self.slices[d1]
            if not a.nnz:
                continue
            for d2 in range(m):
                b = other.slices[d2]
                if b.nnz:
                    acc[d1 + d2] = acc[d1 + d2] + a @ b
        for d in range(2 * m - 2, m - 1, -1):
            if acc[d].nnz:
                acc[d - m + 1] = acc[d - m + 1] + acc[d]
                acc[d - m] = acc[d - m] + acc[d]
        slices = []
        for d in range(m):
            s = acc[d].tocsr()
            s.data %= p
            s.eliminate_zeros()
            slices.append(s)
        return SparseOp(self.params, slices)

    def matpow(self, e: int) -> "SparseOp":
        from scipy.sparse import csr_matrix, identity

        n = self.shape[0]
        m = self.params.m
        eye = identity(n, dtype=np.int64, format="csr")
        zero = csr_matrix((n, n), dtype=np.int64)
        result = SparseOp(self.params, [eye] + [zero] * (m - 1))
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "SparseOp":
        return SparseOp(self.params, [s.transpose().tocsr() for s in self.slices])

    def column(self, j: int) -> np.ndarray:
        out = np.zeros((self.shape[0], self.params.m), dtype=np.int64)
        for d, s in enumerate(self.slices):
            out[:, d] = s[:, [j]].toarray()[:, 0]
        return out

    def restrict_cols(self, cols) -> "SparseOp":
        cols = list(cols)
        return SparseOp(self.params, [s[:, cols] for s in self.slices])

    def __eq__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        if self.params != other.params or self.shape != other.shape:
            return False
        return all((a - b).nnz == 0 for a, b in zip(self.slices, other.slices))
