"""Weights, p-characters, the Weyl dot action and the typicality polynomial.

A weight lambda is stored by its n-1 Cartan coordinates lambda(H(k,k+1)).
Its epsilon-lift is x = (x_1, ..., x_n) with x_n = 0 and consecutive
differences given by the coordinates; all weight combinatorics (dot action,
typicality factors) are computed on that lift.

A p-character chi is a linear form on the even part vanishing on the odd
part; here always one of six catalogued orbit representatives, with values
in the prime field.  The admissible weight set Lambda_chi consists of the
lambda with lambda(h)^p - lambda(h^[p]) = chi(h)^p for all Cartan h; writing
lambda(h_k) = chi(h_k) * w + t_k with t_k in GF(p) parameterizes it, since
(c*w)^p - c*w = c in the Artin-Schreier extension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .field import FieldElement, FieldParams
from .structure import AlgebraStructure

CHI_KINDS = ("chi1", "chi2", "chi3", "chi4", "chi5", "chi6")

# Which orbit representatives force extension-field weights.
EXT_FIELD_KINDS = {"chi1": True, "chi2": True, "chi3": False, "chi4": True, "chi5": False, "chi6": False}


@dataclass(frozen=True)
class Weight:
    """A weight of the Cartan subalgebra, as n-1 field-element coordinates."""

    coords: tuple[FieldElement, ...]

    @property
    def params(self) -> FieldParams:
        return self.coords[0].params

    @property
    def n(self) -> int:
        return len(self.coords) + 1

    def shift(self, delta_pair: tuple[int, ...]) -> "Weight":
        """Translate by an integer coordinate vector (a root, typically)."""
        if len(delta_pair) != len(self.coords):
            raise ValueError("shift length mismatch")
        return Weight(tuple(c + int(d) for c, d in zip(self.coords, delta_pair)))

    def key(self) -> tuple:
        """Canonical sorting/identification key."""
        return tuple(c.coeffs for c in self.coords)

    def lift(self) -> tuple[FieldElement, ...]:
        """Epsilon coordinates (x_1, ..., x_n) with x_n = 0."""
        pr = self.params
        xs = [pr.zero()]
        for c in reversed(self.coords):
            xs.append(xs[-1] + c)
        return tuple(reversed(xs))

    def in_prime_field(self) -> bool:
        return all(c.in_prime_field() for c in self.coords)

    def int_coords(self) -> tuple[int, ...]:
        return tuple(c.lift_int() for c in self.coords)

    def json(self) -> list[list[int]]:
        return [list(c.coeffs) for c in self.coords]

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


def weight_from_ints(params: FieldParams, ints) -> Weight:
    return Weight(tuple(params.element(i) for i in ints))


@dataclass(frozen=True)
class WeylElement:
    """Permutation (i_1, ..., i_n) acting on lifts by (w x)_k = x_{i_k}."""

    perm: tuple[int, ...]  # 1-based images

    @property
    def n(self) -> int:
        return len(self.perm)

    def apply_lift(self, xs: tuple) -> tuple:
        return tuple(xs[i - 1] for i in self.perm)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self o other, acting on lifts right-to-left."""
        return WeylElement(tuple(other.perm[i - 1] for i in self.perm))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(1, self.n + 1))

    def __repr__(self):
        return "w(" + "".join(str(i) for i in self.perm) + ")"


def weyl_identity(n: int) -> WeylElement:
    return WeylElement(tuple(range(1, n + 1)))


def weyl_elements(n: int) -> list[WeylElement]:
    return [WeylElement(p) for p in itertools.permutations(range(1, n + 1))]


def simple_reflection(n: int, k: int) -> WeylElement:
    """The transposition swapping epsilon_k and epsilon_{k+1} (1-based k)."""
    perm = list(range(1, n + 1))
    perm[k - 1], perm[k] = perm[k], perm[k - 1]
    return WeylElement(tuple(perm))


def dot_action(w: WeylElement, lam: Weight) -> Weight:
    """w . lambda = w(lambda + rho) - rho with the lift rho = (n-1, ..., 1, 0)."""
    pr = lam.params
    n = lam.n
    xs = lam.lift()
    ys = tuple(x + (n - 1 - k) for k, x in enumerate(xs))
    wy = w.apply_lift(ys)
    coords = tuple(wy[k] - wy[k + 1] - 1 for k in range(n - 1))
    return Weight(coords)


def delta(lam: Weight) -> FieldElement:
    """The typicality value prod_{i<j} (x_i - x_j + j - i - 1) on the lift."""
    xs = lam.lift()
    n = lam.n
    out = lam.params.one()
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (xs[i] - xs[j] + (j - i - 1))
    return out


def delta_permuted(w: WeylElement, lam: Weight) -> FieldElement:
    """delta(w . lambda) computed directly from the permuted plain lift."""
    xs = lam.lift()
    n = lam.n
    out = lam.params.one()
    for k in range(n):
        for l in range(k + 1, n):
            ik, il = w.perm[k], w.perm[l]
            out = out * (xs[ik - 1] - xs[il - 1] + (il - ik - 1))
    return out


def is_typical(lam: Weight) -> bool:
    return not delta(lam).is_zero()


def typicality_linear_factor(lam: Weight, k: int) -> FieldElement:
    """L_k(lambda) = prod_{i != k} (x_i - x_k + k - i - 1), 1-based k."""
    xs = lam.lift()
    n = lam.n
    out = lam.params.one()
    for i in range(1, n + 1):
        if i != k:
            out = out * (xs[i - 1] - xs[k - 1] + (k - i - 1))
    return out


def weyl_typicality_scan(n: int, p: int) -> dict:
    """Check two claims over every prime-field weight:

    (a) some Weyl twist of every weight is typical, and
    (b) all twists are atypical exactly when every linear factor L_k vanishes.

    Returns a report with any counterexamples and one typical witness per
    weight.
    """
    params = FieldParams(p, 1)
    W = weyl_elements(n)
    existence_fail = []
    equivalence_fail = []
    witnesses = {}
    count = 0
    for ints in itertools.product(range(p), repeat=n - 1):
        lam = weight_from_ints(params, ints)
        count += 1
        witness = None
        for w in W:
            val = delta_permuted(w, lam)
            if not val.is_zero():
                witness = (w, val)
                break
        all_linear_zero = all(
            typicality_linear_factor(lam, k).is_zero() for k in range(1, n + 1)
        )
        if witness is None:
            existence_fail.append(ints)
        if (witness is None) != all_linear_zero:
            equivalence_fail.append(ints)
        witnesses[ints] = None if witness is None else "".join(str(i) for i in witness[0].perm)
    return {
        "n": n,
        "p": p,
        "num_weights": count,
        "existence_counterexamples": existence_fail,
        "equivalence_counterexamples": equivalence_fail,
        "witnesses": witnesses,
    }


class PChar:
    """One of the six catalogued p-character orbit representatives.

    Values are prime-field integers keyed by algebra basis index; everything
    outside `values` is zero.  `field_params` is the coefficient field that
    modules with this p-character live over (the extension iff some Cartan
    value is nonzero).
    """

    def __init__(self, alg: AlgebraStructure, kind: str, values: dict[int, int], params_ab: tuple[int, int]):
        self.alg = alg
        self.kind = kind
        self.values = {k: v % alg.p for k, v in values.items() if v % alg.p}
        self.params_ab = params_ab
        ext = EXT_FIELD_KINDS[kind]
        self.field_params = FieldParams(alg.p, alg.p if ext else 1)
        for k in self.values:
            if alg.basis[k].parity:
                raise ValueError("p-character must vanish on the odd part")

    @property
    def p(self) -> int:
        return self.alg.p

    def value(self, k: int) -> int:
        return self.values.get(k, 0)

    def value_field(self, k: int) -> FieldElement:
        return self.field_params.element(self.value(k))

    def is_zero_on(self, indices) -> bool:
        return all(self.value(k) == 0 for k in indices)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "params": {"a": self.params_ab[0], "b": self.params_ab[1]},
            "values": {self.alg.basis[k].label: v for k, v in sorted(self.values.items())},
            "ext_field": self.field_params.ext_degree != 1,
        }

    def __repr__(self):
        return f"PChar({self.kind}, a={self.params_ab[0]}, b={self.params_ab[1]})"


def make_chi(alg: AlgebraStructure, kind: str, a: int = 1, b: int = 1) -> PChar:
    """Build a catalogued p-character for p(3).

    chi1: regular semisimple, values (a, b) on the Cartans, a*b*(a+b) != 0.
    chi2: subregular semisimple, value b != 0 on H23 only.
    chi3: zero.
    chi4: value b != 0 on H23 and 1 on X21 (mixed).
    chi5: subregular nilpotent, value 1 on X32 only.
    chi6: regular nilpotent, value 1 on X21 and X32.
    """
    if alg.n != 3:
        raise ValueError("the p-character catalog is specific to n = 3")
    p = alg.p
    a %= p
    b %= p
    h12, h23 = alg.idx("H12"), alg.idx("H23")
    x21, x32 = alg.idx("X21"), alg.idx("X32")
    if kind == "chi1":
        if (a * b * (a + b)) % p == 0:
            raise ValueError("chi1 requires a*b*(a+b) != 0 mod p")
        return PChar(alg, kind, {h12: a, h23: b}, (a, b))
    if kind == "chi2":
        if b % p == 0:
            raise ValueError("chi2 requires b != 0 mod p")
        return PChar(alg, kind, {h23: b}, (0, b))
    if kind == "chi3":
        return PChar(alg, kind, {}, (0, 0))
    if kind == "chi4":
        if b % p == 0:
            raise ValueError("chi4 requires b != 0 mod p")
        return PChar(alg, kind, {h23: b, x21: 1}, (0, b))
    if kind == "chi5":
        return PChar(alg, kind, {x32: 1}, (0, 0))
    if kind == "chi6":
        return PChar(alg, kind, {x21: 1, x32: 1}, (0, 0))
    raise ValueError(f"unknown p-character kind {kind!r}; expected one of {CHI_KINDS}")


def lambda_in_admissible_set(chi: PChar, lam: Weight) -> bool:
    """Check lambda(h)^p - lambda(h) = chi(h)^p on every Cartan generator."""
    p = chi.p
    for k, c in zip(chi.alg.cartan_indices(), lam.coords):
        rhs = chi.value_field(k) ** p
        if c**p - c != rhs:
            return False
    return True


def enumerate_lambda(chi: PChar) -> list[Weight]:
    """All p^(n-1) admissible weights, ordered by their prime-field parameters."""
    pr = chi.field_params
    p = chi.p
    cartans = chi.alg.cartan_indices()
    base = []
    for k in cartans:
        c = chi.value(k)
        if c and pr.ext_degree == 1:
            raise ValueError("semisimple part needs the extension field")
        coeffs = [0] * pr.m
        if c:
            coeffs[1] = c
        base.append(pr.element(coeffs))
    out = []
    for ts in itertools.product(range(p), repeat=len(cartans)):
        out.append(Weight(tuple(bc + t for bc, t in zip(base, ts))))
    return out


def lambda_from_params(chi: PChar, ts) -> Weight:
    """The admissible weight with prime-field parameters ts (one per Cartan)."""
    pr = chi.field_params
    cartans = chi.alg.cartan_indices()
    ts = list(ts)
    if len(ts) != len(cartans):
        raise ValueError(f"need {len(cartans)} parameters, got {len(ts)}")
    coords = []
    for k, t in zip(cartans, ts):
        coeffs = [0] * pr.m
        coeffs[0] = int(t) % chi.p
        c = chi.value(k)
        if c:
            coeffs[1] = c
        coords.append(pr.element(coeffs))
    return Weight(tuple(coords))
