"""Ternary quartics and the symmetric forms Q_C, R_C, D_C on S²A.

A quartic is written

    f = Σ a_j x_j⁴ + 4 Σ_{j≠k} b_jk x_j x_k³ + 6 Σ_{j<k} c_jk x_j² x_k²
        + 12 Σ_j d_j x_j² x_k x_l          ({j, k, l} = {0, 1, 2})

and all 6x6 forms use the basis ``e0², e1², e2², e0e1, e0e2, e1e2`` of S²A.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from . import multilinear as ml
from .exactnum import format_rational, parse_rational
from .ggcomplex import S2_LEX, S2_FORM_ORDER, context, is_multiset_determined, levi_civita

B_KEYS: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))
C_KEYS: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))
QUARTIC_MONOMIALS = tuple(e for e in itertools.product(range(5), repeat=3) if sum(e) == 4)

Exponent = Tuple[int, int, int]


def _frac3(v) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(x) for x in v)


@dataclass(frozen=True)
class QuarticCoefficients:
    a: Tuple[Fraction, Fraction, Fraction]
    b: Tuple[Fraction, ...]  # ordered as B_KEYS
    c: Tuple[Fraction, Fraction, Fraction]  # ordered as C_KEYS
    d: Tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "a", _frac3(self.a))
        object.__setattr__(self, "b", _frac3(self.b))
        object.__setattr__(self, "c", _frac3(self.c))
        object.__setattr__(self, "d", _frac3(self.d))
        if (len(self.a), len(self.b), len(self.c), len(self.d)) != (3, 6, 3, 3):
            raise ValueError("quartic needs 3 + 6 + 3 + 3 coefficients")

    @classmethod
    def zero(cls) -> "QuarticCoefficients":
        return cls((0,) * 3, (0,) * 6, (0,) * 3, (0,) * 3)

    def bjk(self, j: int, k: int) -> Fraction:
        return self.b[B_KEYS.index((j, k))]

    def cjk(self, j: int, k: int) -> Fraction:
        return self.c[C_KEYS.index(tuple(sorted((j, k))))]

    def to_monomials(self) -> Dict[Exponent, Fraction]:
        """Coefficients of the 15 monomials ``x0^i x1^j x2^k`` (zeros dropped)."""
        out: Dict[Exponent, Fraction] = {}
        for j in range(3):
            out[_exp({j: 4})] = self.a[j]
            l, m = [i for i in range(3) if i != j]
            out[_exp({j: 2, l: 1, m: 1})] = 12 * self.d[j]
        for (j, k), v in zip(B_KEYS, self.b):
            out[_exp({j: 1, k: 3})] = 4 * v
        for (j, k), v in zip(C_KEYS, self.c):
            out[_exp({j: 2, k: 2})] = 6 * v
        return {e: v for e, v in out.items() if v}

    def _flat(self) -> Tuple[Fraction, ...]:
        return self.a + self.b + self.c + self.d

    @classmethod
    def _unflat(cls, v: Sequence[Fraction]) -> "QuarticCoefficients":
        return cls(v[0:3], v[3:9], v[9:12], v[12:15])

    def __add__(self, other: "QuarticCoefficients") -> "QuarticCoefficients":
        return self._unflat([x + y for x, y in zip(self._flat(), other._flat())])

    def scale(self, lam) -> "QuarticCoefficients":
        lam = parse_rational(lam)
        return self._unflat([lam * x for x in self._flat()])

    def to_json(self) -> dict:
        return {"monomials": {",".join(map(str, e)): format_rational(v)
                              for e, v in sorted(self.to_monomials().items(), reverse=True)}}


def _exp(powers: Mapping[int, int]) -> Exponent:
    return tuple(powers.get(i, 0) for i in range(3))


def _parse_key(key) -> Exponent:
    if isinstance(key, str):
        try:
            e = tuple(int(t) for t in key.split(","))
        except ValueError:
            raise ValueError(f"malformed exponent key {key!r}") from None
    else:
        e = tuple(int(t) for t in key)
    if len(e) != 3 or any(t < 0 for t in e):
        raise ValueError(f"exponent key {key!r} is not a ternary exponent vector")
    if sum(e) != 4:
        raise ValueError(f"exponent key {key!r} is not quartic (degree {sum(e)})")
    return e


def parse_quartic(monomials: Mapping) -> QuarticCoefficients:
    """Build coefficients from ``{"i,j,k": "p/q"}`` (or tuple keys)."""
    if isinstance(monomials, Mapping) and "monomials" in monomials:
        monomials = monomials["monomials"]
    coef: Dict[Exponent, Fraction] = {}
    for key, val in monomials.items():
        e = _parse_key(key)
        coef[e] = coef.get(e, Fraction(0)) + parse_rational(val)
    a, b, c, d = [0] * 3, [0] * 6, [0] * 3, [0] * 3
    for e, v in coef.items():
        support = sorted(e, reverse=True)
        if support == [4, 0, 0]:
            a[e.index(4)] = v
        elif support == [3, 1, 0]:
            b[B_KEYS.index((e.index(1), e.index(3)))] = v / 4
        elif support == [2, 2, 0]:
            j, k = [i for i in range(3) if e[i] == 2]
            c[C_KEYS.index((j, k))] = v / 6
        else:  # [2, 1, 1]
            d[e.index(2)] = v / 12
    return QuarticCoefficients(a, b, c, d)


def monomials_to_quartic(poly: Mapping[Exponent, Fraction]) -> QuarticCoefficients:
    return parse_quartic({e: v for e, v in poly.items()})


KLEIN = parse_quartic({"3,1,0": 1, "0,3,1": 1, "1,0,3": 1})
FERMAT = parse_quartic({"4,0,0": 1, "0,4,0": 1, "0,0,4": 1})


# ---------------------------------------------------------------------------
# Q_C


def qc_matrix(f: QuarticCoefficients) -> ml.Matrix:
    """The 6x6 matrix of Q_C, entry by entry from the coefficient table."""
    a0, a1, a2 = f.a
    c01, c02, c12 = f.c
    d0, d1, d2 = f.d
    b = f.bjk
    return [
        [a0, c01, c02, b(1, 0), b(2, 0), d0],
        [c01, a1, c12, b(0, 1), d1, b(2, 1)],
        [c02, c12, a2, d2, b(0, 2), b(1, 2)],
        [b(1, 0), b(0, 1), d2, c01, d0, d1],
        [b(2, 0), d1, b(0, 2), d0, c02, d2],
        [d0, b(2, 1), b(1, 2), d1, d2, c12],
    ]


def evaluate_on_s4a(f: QuarticCoefficients, es: Sequence[int]) -> Fraction:
    """``<f, e_{i1} e_{i2} e_{i3} e_{i4}>`` under the sum-over-permutations pairing."""
    ctx = context()
    total = Fraction(0)
    for e, v in f.to_monomials().items():
        xs = [i for i in range(3) for _ in range(e[i])]
        total += v * ctx.pairing(xs, es)
    return total


def qc_oracle(f: QuarticCoefficients) -> ml.Matrix:
    """``Q(u, v) = f(uv)/24`` computed directly from the pairing."""
    return [[evaluate_on_s4a(f, u + v) / 24 for v in S2_FORM_ORDER] for u in S2_FORM_ORDER]


def quartic_from_form(Q: ml.Matrix) -> QuarticCoefficients:
    """Inverse of :func:`qc_matrix` on multiset-determined forms."""
    if not is_multiset_determined(Q):
        raise ValueError("form has nonzero R-component")
    pos = {p: n for n, p in enumerate(S2_FORM_ORDER)}

    def at(i, j, k, l):
        return Q[pos[tuple(sorted((i, j)))]][pos[tuple(sorted((k, l)))]]

    a = [at(j, j, j, j) for j in range(3)]
    b = [at(k, k, j, k) for j, k in B_KEYS]
    c = [at(j, j, k, k) for j, k in C_KEYS]
    d = []
    for j in range(3):
        k, l = [i for i in range(3) if i != j]
        d.append(at(j, j, k, l))
    return QuarticCoefficients(a, b, c, d)


# ---------------------------------------------------------------------------
# R_C


@dataclass(frozen=True)
class DegreeTwoElement:
    """``h = Σ p_j e_j² + 2 Σ_{j<k} q_jk e_j e_k`` in S²A."""

    p: Tuple[Fraction, Fraction, Fraction]
    q: Tuple[Fraction, Fraction, Fraction]  # ordered as C_KEYS

    def __post_init__(self):
        object.__setattr__(self, "p", _frac3(self.p))
        object.__setattr__(self, "q", _frac3(self.q))

    @classmethod
    def zero(cls) -> "DegreeTwoElement":
        return cls((0, 0, 0), (0, 0, 0))

    def terms(self):
        """``(coefficient, (i, j))`` pairs of ``h`` on monomials ``e_i e_j``."""
        for j in range(3):
            if self.p[j]:
                yield self.p[j], (j, j)
        for (j, k), v in zip(C_KEYS, self.q):
            if v:
                yield 2 * v, (j, k)


def _contract_vol_b(i: int) -> Tuple[int, int, int]:
    """``e_i ⌟ vol_B = sign * x_a ∧ x_b``; returns ``(sign, a, b)``."""
    a, b = [j for j in range(3) if j != i]
    return levi_civita(i, a, b), a, b


def _s2b(i: int, j: int) -> int:
    return S2_LEX.index(tuple(sorted((i, j))))


def rc_tensor(h: DegreeTwoElement) -> ml.Matrix:
    """Image of ``h`` in ``S²B ⊗ S²B`` (rows: first factor, lex monomials)."""
    T = ml.zeros(6, 6)
    for coef, (i, j) in h.terms():
        s1, b1, b2 = _contract_vol_b(i)
        s2, c1, c2 = _contract_vol_b(j)
        c = coef * s1 * s2
        # (b1∧b2)(c1∧c2) -> b1c1⊗b2c2 + b2c2⊗b1c1 - b1c2⊗b2c1 - b2c1⊗b1c2
        T[_s2b(b1, c1)][_s2b(b2, c2)] += c
        T[_s2b(b2, c2)][_s2b(b1, c1)] += c
        T[_s2b(b1, c2)][_s2b(b2, c1)] -= c
        T[_s2b(b2, c1)][_s2b(b1, c2)] -= c
    return T


def tensor_to_form(T: ml.Matrix) -> ml.Matrix:
    """Read ``Σ T[m][n] m⊗n ∈ S²B⊗S²B`` as a bilinear form on S²A."""
    ctx = context()
    P = [[Fraction(ctx.pairing(m, u)) for u in S2_FORM_ORDER] for m in S2_LEX]
    return ml.matmul(ml.matmul(ml.transpose(P), T), P)


def rc_matrix(h: DegreeTwoElement) -> ml.Matrix:
    """The 6x6 matrix of R_C computed from its defining composite."""
    return tensor_to_form(rc_tensor(h))


# ---------------------------------------------------------------------------
# D_C


@dataclass(frozen=True)
class FormSummary:
    matrix: ml.Matrix
    rank: int
    det: Fraction

    def to_json(self) -> dict:
        return {
            "matrix": [[format_rational(x) for x in row] for row in self.matrix],
            "rank": self.rank,
            "det": format_rational(self.det),
        }


def summarize(M: ml.Matrix) -> FormSummary:
    return FormSummary(M, ml.rank(M), ml.det(M))


def dc_matrix(f: QuarticCoefficients, h: Optional[DegreeTwoElement] = None) -> FormSummary:
    h = h or DegreeTwoElement.zero()
    return summarize(ml.add(qc_matrix(f), rc_matrix(h)))


# ---------------------------------------------------------------------------
# coordinate changes


def substitute(poly: Mapping[Exponent, object], g: ml.Matrix) -> Dict[Exponent, object]:
    """``f(x) -> f(g x)``: replace ``x_i`` by ``Σ_j g[i][j] x_j``."""
    out: Dict[Exponent, object] = {}
    for e, v in poly.items():
        terms = {(0, 0, 0): v}
        for i in range(3):
            for _ in range(e[i]):
                new: Dict[Exponent, object] = {}
                for mono, c in terms.items():
                    for j in range(3):
                        x = g[i][j]
                        if x:
                            key = tuple(mono[t] + (t == j) for t in range(3))
                            new[key] = new[key] + c * x if key in new else c * x
                terms = new
        for mono, c in terms.items():
            out[mono] = out[mono] + c if mono in out else c
    return {e: v for e, v in out.items() if v}


def s2_action(g: ml.Matrix, fld: str = ml.QQ) -> ml.Matrix:
    """Matrix of ``e_i e_j ↦ (g e_i)(g e_j)`` on S²A in the 6x6-form order."""
    lex = ml.induced_matrix(g, "sym", 2, fld)
    perm = [S2_LEX.index(p) for p in S2_FORM_ORDER]
    return [[lex[r][c] for c in perm] for r in perm]


def transform_form(Q: ml.Matrix, g: ml.Matrix) -> ml.Matrix:
    """``(S²g)ᵀ Q (S²g) / det g``: the induced action on S⁴B ⊗ det A."""
    S = s2_action(g)
    return ml.scale(ml.matmul(ml.matmul(ml.transpose(S), Q), S), 1 / ml.det(g))


@dataclass(frozen=True)
class CoordinateChange:
    quartic: QuarticCoefficients
    form: ml.Matrix  # qc_matrix(quartic) / det g


def change_coordinates(f: QuarticCoefficients, g: ml.Matrix) -> CoordinateChange:
    g = [[parse_rational(x) for x in row] for row in g]
    if len(g) != 3 or any(len(r) != 3 for r in g):
        raise ValueError("g must be 3x3")
    dg = ml.det(g)
    if not dg:
        raise ValueError("coordinate change must be invertible")
    new = monomials_to_quartic(substitute(f.to_monomials(), g))
    return CoordinateChange(new, ml.scale(qc_matrix(new), 1 / dg))
