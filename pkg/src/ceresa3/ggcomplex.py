"""The genus-3 Green-Griffiths complexes Gr_F^p(V ⊗ Λ^• S²B).

Conventions
-----------
``H = A ⊕ B`` with basis ``e0, e1, e2, x0, x1, x2``; ``<x_i, e_j> = δ_ij``.
The polarization is ``θ = Σ e_i ∧ x_i`` and ``V = Λ³H / θ∧H``.  A basis
vector of ``Λ³H`` with ``k`` factors from ``B`` sits in Hodge level
``k - 2``, so ``Gr_F^{-2} V = Λ³A`` and ``Gr_F^1 V = Λ³B``.

The nilpotent part of the connection is ``∇(x_k) = Σ_i e_i ⊗ x_i x_k`` and
``∇(e_i) = 0``; for each monomial ``s`` of ``S²B`` it gives an endomorphism
``N_s`` of ``H`` and the differential is

    d(v ⊗ ω) = Σ_s D(N_s) v ⊗ (ω ∧ s)

where ``D(N)`` is the derivation extension of ``N`` to ``Λ³H``.  The
``N_s`` commute (their products vanish), so ``d∘d = 0``.  ``det A`` and
``det B`` are trivialized by ``vol_A = e0∧e1∧e2`` and ``vol_B = x0∧x1∧x2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from . import multilinear as ml
from .multilinear import BasedSpace, LinMap, QuotientSpace

A_LABELS = ("e0", "e1", "e2")
B_LABELS = ("x0", "x1", "x2")
H_LABELS = A_LABELS + B_LABELS

# S²A basis order used for all 6x6 forms
S2_FORM_ORDER: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))
S2_LEX = tuple(ml.sym_indices(3, 2))  # (0,0),(0,1),(0,2),(1,1),(1,2),(2,2)

ZERO, ONE = Fraction(0), Fraction(1)


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
            elif s[i] == s[j]:
                return 0
    return sign


def wedge_basis(idx: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign and sorted index tuple of ``h_{i1} ∧ ... ∧ h_{ik}``."""
    sgn = _perm_sign(idx)
    return sgn, tuple(sorted(idx))


def levi_civita(i: int, j: int, k: int) -> int:
    return _perm_sign((i, j, k))


def s2_pairing(m: Tuple[int, int], u: Tuple[int, int]) -> int:
    """``<x_i x_j, e_k e_l>`` with the sum-over-permutations normalization."""
    (i, j), (k, l) = m, u
    return (i == k) * (j == l) + (i == l) * (j == k)


@dataclass(frozen=True)
class GGContext:
    """The fixed linear-algebra data: based spaces, volumes, θ, ∇."""

    A: BasedSpace
    B: BasedSpace
    H: BasedSpace
    S2B: BasedSpace
    L3H: BasedSpace
    L2H: BasedSpace

    @property
    def theta(self) -> List[Fraction]:
        """θ = Σ e_i ∧ x_i as a vector in Λ²H."""
        v = self.L2H.zero_vector()
        for i in range(3):
            v[self.L2H.index(f"e{i}∧x{i}")] = ONE
        return v

    @property
    def vol_A(self) -> List[Fraction]:
        return self.L3H.basis_vector("e0∧e1∧e2")

    @property
    def vol_B(self) -> List[Fraction]:
        return self.L3H.basis_vector("x0∧x1∧x2")

    def pairing(self, xs: Sequence[int], es: Sequence[int]) -> int:
        """``<x_{j1}...x_{jk}, e_{i1}...e_{ik}> = Σ_σ Π <x_{j_m}, e_{i_σ(m)}>``."""
        return sum(all(xs[m] == es[p[m]] for m in range(len(xs)))
                   for p in itertools.permutations(range(len(es))))


@lru_cache(maxsize=None)
def context() -> GGContext:
    A = BasedSpace(A_LABELS)
    B = BasedSpace(B_LABELS)
    H = BasedSpace(H_LABELS)
    return GGContext(A, B, H, ml.sym_power(B, 2), ml.ext_power(H, 3), ml.ext_power(H, 2))


# ---------------------------------------------------------------------------
# the connection


def n_matrix(s: Tuple[int, int]) -> ml.Matrix:
    """``N_s`` on ``H``: the ``s``-component of ∇ (6x6, columns = inputs)."""
    i, j = s
    N = ml.zeros(6, 6)
    N[j][3 + i] = ONE  # x_i -> e_j
    N[i][3 + j] = ONE  # x_j -> e_i
    return N


def nabla_on_H() -> LinMap:
    """∇ : H -> A ⊗ S²B, zero on A."""
    ctx = context()
    target = ml.tensor(ctx.A, ctx.S2B)
    M = ml.zeros(target.dim, 6)
    for col, s in enumerate(S2_LEX):
        N = n_matrix(s)
        for a in range(3):
            for h in range(6):
                if N[a][h]:
                    M[a * 6 + col][h] += N[a][h]
    return LinMap(ctx.H, target, M)


def derivation(N: ml.Matrix, k: int) -> ml.Matrix:
    """Matrix of the derivation extension of ``N`` to ``Λ^k H``."""
    idx = ml.ext_indices(6, k)
    pos = {t: n for n, t in enumerate(idx)}
    M = ml.zeros(len(idx), len(idx))
    for c, t in enumerate(idx):
        for slot in range(k):
            for out in range(6):
                coef = N[out][t[slot]]
                if not coef:
                    continue
                new = list(t)
                new[slot] = out
                sgn, key = wedge_basis(new)
                if sgn:
                    M[pos[key]][c] += sgn * coef
    return M


def nabla_theta() -> List[List[Fraction]]:
    """``D(N_s) θ`` for each monomial ``s``; all should vanish."""
    ctx = context()
    return [ml.matvec(derivation(n_matrix(s), 2), ctx.theta) for s in S2_LEX]


# ---------------------------------------------------------------------------
# graded pieces of V


def _b_count(t: Tuple[int, ...]) -> int:
    return sum(1 for i in t if i >= 3)


@lru_cache(maxsize=None)
def graded_ambient(k: int) -> Tuple[Tuple[int, ...], ...]:
    """Basis triples of Λ³H with ``k`` factors from ``B``."""
    return tuple(t for t in ml.ext_indices(6, 3) if _b_count(t) == k)


def _label(t: Tuple[int, ...]) -> str:
    return "∧".join(H_LABELS[i] for i in t)


@lru_cache(maxsize=None)
def graded_piece(k: int) -> QuotientSpace:
    """``Gr_F^{k-2} V`` as a quotient of the ``k``-part of ``Λ³H`` by ``θ∧H``.

    Empty outside ``0 <= k <= 3``.
    """
    if not 0 <= k <= 3:
        return QuotientSpace(BasedSpace(()), [])
    basis = graded_ambient(k)
    ambient = BasedSpace(tuple(_label(t) for t in basis))
    pos = {t: n for n, t in enumerate(basis)}
    relations = []
    for h in range(6):
        v = [ZERO] * len(basis)
        hit = False
        for i in range(3):
            sgn, key = wedge_basis((i, 3 + i, h))
            if sgn and key in pos:
                v[pos[key]] += sgn
                hit = True
        if hit:
            relations.append(v)
    return QuotientSpace(ambient, relations)


def theta_wedge(h: int) -> Dict[Tuple[int, ...], int]:
    out: Dict[Tuple[int, ...], int] = {}
    for i in range(3):
        sgn, key = wedge_basis((i, 3 + i, h))
        if sgn:
            out[key] = out.get(key, 0) + sgn
    return out


@lru_cache(maxsize=None)
def graded_nabla(k: int, s: Tuple[int, int]) -> ml.Matrix:
    """``D(N_s)`` from the ``k``-part to the ``(k-1)``-part of Λ³H, ambient coordinates."""
    src, dst = graded_ambient(k), graded_ambient(k - 1)
    full = derivation(n_matrix(s), 3)
    idx = ml.ext_indices(6, 3)
    pos = {t: n for n, t in enumerate(idx)}
    return [[full[pos[r]][pos[c]] for c in src] for r in dst]


def _descended_nabla(k: int, s: Tuple[int, int]) -> ml.Matrix:
    Qs, Qt = graded_piece(k), graded_piece(k - 1)
    if Qs.dim == 0 or Qt.dim == 0:
        return ml.zeros(Qt.dim, Qs.dim)
    amb = LinMap(Qs.ambient, Qt.ambient, graded_nabla(k, s))
    return Qs.descend(amb, Qt).matrix


# ---------------------------------------------------------------------------
# Λ^j S²B


@lru_cache(maxsize=None)
def lambda_s2b(j: int) -> BasedSpace:
    ctx = context()
    if j == 0:
        return BasedSpace(("1",))
    return ml.ext_power(ctx.S2B, j)


@lru_cache(maxsize=None)
def wedge_right(j: int, s_index: int) -> ml.Matrix:
    """``ω ↦ ω ∧ s`` from ``Λ^j S²B`` to ``Λ^{j+1} S²B``."""
    src = [()] if j == 0 else ml.ext_indices(6, j)
    dst = ml.ext_indices(6, j + 1)
    pos = {t: n for n, t in enumerate(dst)}
    M = ml.zeros(len(dst), len(src))
    for c, t in enumerate(src):
        sgn, key = wedge_basis(tuple(t) + (s_index,))
        if sgn:
            M[pos[key]][c] = Fraction(sgn)
    return M


# ---------------------------------------------------------------------------
# the complexes


@dataclass(frozen=True)
class GGComplex:
    p: int
    terms: Tuple[BasedSpace, ...]
    differentials: Tuple[LinMap, ...]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(t.dim for t in self.terms)

    def level(self, j: int) -> int:
        """Number of B-factors of the V-part of the degree-j term."""
        return self.p - j + 2


def term_space(p: int, j: int) -> BasedSpace:
    Q = graded_piece(p - j + 2)
    if Q.dim == 0:
        return BasedSpace(())
    return ml.tensor(Q.space, lambda_s2b(j))


def differential(p: int, j: int) -> LinMap:
    """``d : C^j -> C^{j+1}`` for the complex Gr_F^p."""
    src, dst = term_space(p, j), term_space(p, j + 1)
    k = p - j + 2
    M = ml.zeros(dst.dim, src.dim)
    if src.dim and dst.dim:
        for si, s in enumerate(S2_LEX):
            Nk = _descended_nabla(k, s)
            W = wedge_right(j, si)
            M = ml.add(M, ml.kron(Nk, W))
    return LinMap(src, dst, M)


@lru_cache(maxsize=None)
def build_complex(p: int) -> GGComplex:
    """The truncated complex Gr_F^p in degrees 0, 1, 2; checks d∘d = 0."""
    if p not in (0, 1, 2):
        raise ValueError("p must be 0, 1 or 2")
    terms = tuple(term_space(p, j) for j in range(3))
    diffs = (differential(p, 0), differential(p, 1))
    if terms[0].dim and terms[2].dim:
        if not (diffs[1] @ diffs[0]).is_zero():
            raise AssertionError(f"d∘d != 0 for p={p}")
    return GGComplex(p, terms, diffs)


def dd_is_zero(c: GGComplex) -> bool:
    d0, d1 = c.differentials
    if c.terms[0].dim == 0 or c.terms[2].dim == 0:
        return True
    return (d1 @ d0).is_zero()


def differential_ranks(c: GGComplex) -> Tuple[int, int]:
    return tuple(ml.exact_rank(d).rank for d in c.differentials)


def homology_dims(c: GGComplex) -> Tuple[int, int, int]:
    r0, r1 = differential_ranks(c)
    n0, n1, n2 = c.dims
    return (n0 - r0, n1 - r1 - r0, n2 - r1)


@dataclass(frozen=True)
class CocycleSpaces:
    cocycle_dim: int
    coboundary_dim: int
    cocycles: List[list]
    coboundaries: List[list]

    @property
    def cohomology_dim(self) -> int:
        return self.cocycle_dim - self.coboundary_dim


def cocycle_spaces(c: GGComplex) -> CocycleSpaces:
    """1-cocycles and 1-coboundaries of the complex, with explicit bases."""
    d0, d1 = c.differentials
    z = ml.exact_rank(d1).kernel
    b = ml.exact_rank(d0).image
    return CocycleSpaces(len(z), len(b), z, b)


# ---------------------------------------------------------------------------
# group action


def gl_action_on_H(g: ml.Matrix) -> ml.Matrix:
    """``g ∈ GL(B)`` acts on ``H = A ⊕ B`` by ``g^{-T} ⊕ g``."""
    return ml.block_diag(ml.transpose(ml.inverse(g)), g)


def graded_action(g: ml.Matrix, k: int) -> ml.Matrix:
    Q = graded_piece(k)
    if Q.dim == 0:
        return []
    L3 = ml.induced_matrix(gl_action_on_H(g), "ext", 3)
    idx = ml.ext_indices(6, 3)
    pos = {t: n for n, t in enumerate(idx)}
    basis = graded_ambient(k)
    block = [[L3[pos[r]][pos[c]] for c in basis] for r in basis]
    amb = LinMap(Q.ambient, Q.ambient, block)
    return Q.descend(amb, Q).matrix


def term_action(g: ml.Matrix, p: int, j: int) -> ml.Matrix:
    k = p - j + 2
    Vg = graded_action(g, k)
    if not Vg:
        return []
    if j == 0:
        return Vg
    S2g = ml.induced_matrix(g, "sym", 2)
    Lg = S2g if j == 1 else ml.induced_matrix(S2g, "ext", j)
    return ml.kron(Vg, Lg)


def is_equivariant(c: GGComplex, g: ml.Matrix) -> bool:
    """``d ∘ ρ(g) == ρ(g) ∘ d`` on every differential, exactly."""
    for j, d in enumerate(c.differentials):
        if d.domain.dim == 0 or d.codomain.dim == 0:
            continue
        left = ml.matmul(d.matrix, term_action(g, c.p, j))
        right = ml.matmul(term_action(g, c.p, j + 1), d.matrix)
        if left != right:
            return False
    return True


# ---------------------------------------------------------------------------
# representation isomorphisms


def _contract_pair_to_dual(i: int, j: int) -> Tuple[int, int]:
    """``ω = h_i ∧ h_j`` (both in A or both in B) ↦ ``sign * (dual basis index)``.

    For ``ω ∈ Λ²A`` this is the linear form ``a ↦ (a ∧ ω)/vol_A`` on A.
    """
    m = 3 - i - j
    return levi_civita(m, i, j), m


def lemrep_unquotiented() -> Tuple[LinMap, LinMap]:
    """``Λ²A⊗B -> S²B`` and ``A⊗Λ²B -> S²A`` (det twists trivialized)."""
    ctx = context()
    S2A = ml.sym_power(ctx.A, 2)
    maps = []
    for k, target in ((1, ctx.S2B), (2, S2A)):
        Q = graded_piece(k)
        basis = graded_ambient(k)
        M = ml.zeros(6, len(basis))
        for c, t in enumerate(basis):
            if k == 1:
                i, j, x = t[0], t[1], t[2] - 3
                sgn, m = _contract_pair_to_dual(i, j)
                mono = tuple(sorted((m, x)))
            else:
                a, i, j = t[0], t[1] - 3, t[2] - 3
                sgn, m = _contract_pair_to_dual(i, j)
                mono = tuple(sorted((m, a)))
            M[S2_LEX.index(mono)][c] += sgn
        maps.append(LinMap(Q.ambient, target, M))
    return maps[0], maps[1]


def lemrep_isos() -> Tuple[LinMap, LinMap]:
    """Isomorphisms ``(Λ²A⊗B)/θA ≅ S²B⊗detA`` and ``(A⊗Λ²B)/θB ≅ S²A⊗detB``."""
    f1, f2 = lemrep_unquotiented()
    return f1 @ graded_piece(1).inclusion, f2 @ graded_piece(2).inclusion


def theta_relations(k: int) -> List[list]:
    """``θ∧A`` (k=1) or ``θ∧B`` (k=2) in ambient coordinates."""
    basis = graded_ambient(k)
    pos = {t: n for n, t in enumerate(basis)}
    hs = range(3) if k == 1 else range(3, 6)
    out = []
    for h in hs:
        v = [ZERO] * len(basis)
        for key, sgn in theta_wedge(h).items():
            v[pos[key]] += sgn
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# forms


def _form_pairing_matrix() -> ml.Matrix:
    """Rows: lex monomials of S²B; columns: S²A in the 6x6-form order."""
    return [[Fraction(s2_pairing(m, u)) for u in S2_FORM_ORDER] for m in S2_LEX]


def cocycle_to_form(z: Sequence) -> Tuple[ml.Matrix, bool]:
    """Read a degree-1 element of Gr_F^0 as a bilinear form on S²A.

    Returns the 6x6 matrix over ``e0², e1², e2², e0e1, e0e2, e1e2`` and
    whether it is symmetric (which happens exactly for cocycles).
    """
    phi, _ = lemrep_isos()
    if len(z) != 36:
        raise ValueError("expected a vector in the 36-dimensional degree-1 term")
    # z indexed (quotient basis q, S²B monomial n); first slot through phi
    T = ml.zeros(6, 6)
    for q in range(6):
        for n in range(6):
            c = z[q * 6 + n]
            if c:
                for m in range(6):
                    if phi.matrix[m][q]:
                        T[m][n] += phi.matrix[m][q] * c
    P = _form_pairing_matrix()
    M = ml.matmul(ml.matmul(ml.transpose(P), T), P)
    sym = all(M[a][b] == M[b][a] for a in range(6) for b in range(a + 1, 6))
    return M, sym


def _pos(i: int, j: int) -> int:
    return S2_FORM_ORDER.index(tuple(sorted((i, j))))


def split_form(M: ml.Matrix) -> Tuple[ml.Matrix, ml.Matrix]:
    """Split a symmetric form into its S⁴-part (multiset-determined) and the rest."""
    if any(M[a][b] != M[b][a] for a in range(6) for b in range(6)):
        raise ValueError("split_form needs a symmetric matrix")
    Q = ml.zeros(6, 6)
    for a, (i, j) in enumerate(S2_FORM_ORDER):
        for b, (k, l) in enumerate(S2_FORM_ORDER):
            Q[a][b] = (Fraction(M[a][b]) + M[_pos(i, k)][_pos(j, l)]
                       + M[_pos(i, l)][_pos(j, k)]) / 3
    return Q, ml.sub(M, Q)


def is_multiset_determined(M: ml.Matrix) -> bool:
    seen: Dict[Tuple[int, ...], Fraction] = {}
    for a, (i, j) in enumerate(S2_FORM_ORDER):
        for b, (k, l) in enumerate(S2_FORM_ORDER):
            key = tuple(sorted((i, j, k, l)))
            if key in seen and seen[key] != M[a][b]:
                return False
            seen.setdefault(key, M[a][b])
    return True
