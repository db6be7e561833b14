"""Exact linear algebra over labelled based spaces.

Matrices are plain lists of rows.  Entries are :class:`fractions.Fraction`
(field ``"Q"``) or :class:`~ceresa3.exactnum.Cyclo7` (field ``"Q(z7)"``);
every routine here only uses ``+ - * /`` and truthiness, so it is generic
over both.  Dimensions in this project stay below a hundred, so everything
is dense.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .exactnum import Cyclo7, format_rational

Matrix = List[list]

QQ = "Q"
CYCLO7 = "Q(z7)"


def field_zero(fld: str):
    return Fraction(0) if fld == QQ else Cyclo7.from_rational(0)


def field_one(fld: str):
    return Fraction(1) if fld == QQ else Cyclo7.from_rational(1)


def to_field(x, fld: str):
    if fld == QQ:
        if isinstance(x, Cyclo7):
            return x.to_rational()
        return Fraction(x)
    return x if isinstance(x, Cyclo7) else Cyclo7.from_rational(x)


# ---------------------------------------------------------------------------
# dense matrix kernels


def zeros(m: int, n: int, fld: str = QQ) -> Matrix:
    z = field_zero(fld)
    return [[z] * n for _ in range(m)]


def identity(n: int, fld: str = QQ) -> Matrix:
    M = zeros(n, n, fld)
    one = field_one(fld)
    for i in range(n):
        M[i][i] = one
    return M


def shape(M: Matrix, ncols: Optional[int] = None) -> Tuple[int, int]:
    return len(M), (len(M[0]) if M else (ncols or 0))


def transpose(M: Matrix, ncols: int = 0) -> Matrix:
    if not M:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*M)]


def _all_fractions(M: Matrix) -> bool:
    return all(type(x) is Fraction for row in M for x in row)


def _as_integer(M: Matrix):
    den = 1
    for row in M:
        for x in row:
            d = x.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
    return [[x.numerator * (den // x.denominator) for x in row] for row in M], den


def matmul(A: Matrix, B: Matrix) -> Matrix:
    """Exact product.  Rational inputs go through a common-denominator integer path."""
    if not A:
        return []
    n = len(A[0])
    if len(B) != n:
        raise ValueError(f"shape mismatch: {len(A)}x{n} times {len(B)}x?")
    if not B or not B[0]:
        return [[] for _ in A]
    if _all_fractions(A) and _all_fractions(B):
        Ai, da = _as_integer(A)
        Bi, db = _as_integer(B)
        Bt = list(zip(*Bi))
        den = da * db
        out = []
        for row in Ai:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([Fraction(sum(a * col[k] for k, a in nz), den) for col in Bt])
        return out
    cyc = any(isinstance(x, Cyclo7) for M in (A, B) for row in M for x in row)
    zero = Cyclo7.from_rational(0) if cyc else Fraction(0)
    Bt = list(zip(*B))
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        new_row = []
        for col in Bt:
            acc = None
            for k, a in nz:
                b = col[k]
                if b:
                    acc = a * b if acc is None else acc + a * b
            new_row.append(zero if acc is None else acc)
        out.append(new_row)
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    return [row[0] for row in matmul(A, [[x] for x in v])] if A else []


def kron(A: Matrix, B: Matrix) -> Matrix:
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def block_diag(*blocks: Matrix, fld: str = QQ) -> Matrix:
    n = sum(len(b) for b in blocks)
    M = zeros(n, n, fld)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                M[off + i][off + j] = x
        off += len(b)
    return M


def scale(M: Matrix, c) -> Matrix:
    return [[c * x for x in row] for row in M]


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def is_zero_matrix(M: Matrix) -> bool:
    return not any(x for row in M for x in row)


def rref(M: Matrix, column_order: Optional[Sequence[int]] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns.

    ``column_order`` changes the order in which columns are tried as pivots;
    the rank does not depend on it, which is used as a self-check.
    """
    R = [list(row) for row in M]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    order = list(range(n)) if column_order is None else list(column_order)
    pivots: List[int] = []
    r = 0
    for c in order:
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][c]
        R[r] = [x / piv for x in R[r]]
        prow = R[r]
        nz = [j for j in range(n) if prow[j]]
        for i in range(m):
            if i != r:
                f = R[i][c]
                if f:
                    Ri = R[i]
                    for j in nz:
                        Ri[j] = Ri[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M: Matrix, column_order: Optional[Sequence[int]] = None) -> int:
    return len(rref(M, column_order)[1])


def kernel(M: Matrix, ncols: Optional[int] = None, fld: str = QQ) -> List[list]:
    """Basis of the right kernel, one vector per free column."""
    n = len(M[0]) if M else (ncols or 0)
    if not M:
        return identity(n, fld)
    R, pivots = rref(M)
    zero, one = field_zero(fld), field_one(fld)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def image(M: Matrix) -> List[list]:
    """Basis of the column space: the pivot columns of ``M`` itself."""
    if not M:
        return []
    _, pivots = rref(M)
    return [[row[j] for row in M] for j in pivots]


def inverse(M: Matrix, fld: str = QQ) -> Matrix:
    n = len(M)
    aug = [list(row) + e for row, e in zip(M, identity(n, fld))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def det(M: Matrix, fld: str = QQ):
    """Determinant by exact elimination."""
    n = len(M)
    if n == 0:
        return field_one(fld)
    A = [list(row) for row in M]
    d = field_one(fld)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return field_zero(fld)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        piv = A[c][c]
        d = d * piv
        for i in range(c + 1, n):
            f = A[i][c] / piv
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


# ---------------------------------------------------------------------------
# based spaces and maps


@dataclass(frozen=True)
class BasedSpace:
    labels: Tuple[str, ...]
    field: str = QQ

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def zero_vector(self) -> list:
        return [field_zero(self.field)] * self.dim

    def basis_vector(self, label: str) -> list:
        v = self.zero_vector()
        v[self.index(label)] = field_one(self.field)
        return v


@dataclass(frozen=True)
class LinMap:
    domain: BasedSpace
    codomain: BasedSpace
    matrix: Matrix = field(compare=False)

    def __post_init__(self):
        m, n = self.codomain.dim, self.domain.dim
        if len(self.matrix) != m or any(len(row) != n for row in self.matrix):
            raise ValueError(
                f"matrix shape does not match {m}x{n} ({self.codomain.dim} x {self.domain.dim})"
            )

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if other.codomain.labels != self.domain.labels:
            raise ValueError("cannot compose: codomain/domain mismatch")
        if not self.matrix or other.domain.dim == 0:
            return LinMap(other.domain, self.codomain,
                          zeros(self.codomain.dim, other.domain.dim, self.codomain.field))
        if other.codomain.dim == 0:
            return LinMap(other.domain, self.codomain,
                          zeros(self.codomain.dim, other.domain.dim, self.codomain.field))
        return LinMap(other.domain, self.codomain, matmul(self.matrix, other.matrix))

    def __call__(self, v: Sequence) -> list:
        if self.codomain.dim == 0:
            return []
        if self.domain.dim == 0:
            return self.codomain.zero_vector()
        return matvec(self.matrix, v)

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.matrix == other.matrix)

    def is_zero(self) -> bool:
        return is_zero_matrix(self.matrix)

    def rank(self) -> int:
        return rank(self.matrix) if self.codomain.dim and self.domain.dim else 0

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain.labels),
            "codomain": list(self.codomain.labels),
            "matrix": [[_scalar_json(x) for x in row] for row in self.matrix],
        }


def _scalar_json(x):
    if isinstance(x, Cyclo7):
        return x.to_json()
    return format_rational(x)


@dataclass(frozen=True)
class RankResult:
    rank: int
    kernel: List[list]
    image: List[list]

    @property
    def nullity(self) -> int:
        return len(self.kernel)


def exact_rank(f: LinMap) -> RankResult:
    """Rank with explicit kernel and image bases, both checked by multiplication."""
    n, m = f.domain.dim, f.codomain.dim
    fld = f.codomain.field
    if n == 0:
        return RankResult(0, [], [])
    if m == 0:
        return RankResult(0, identity(n, fld), [])
    ker = kernel(f.matrix, n, fld)
    img = image(f.matrix)
    if len(ker) + len(img) != n:
        raise AssertionError("rank-nullity violated")
    for v in ker:
        if any(f(v)):
            raise AssertionError("kernel vector not annihilated")
    return RankResult(len(img), ker, img)


# ---------------------------------------------------------------------------
# constructions


def _mono_label(base: Sequence[str], idx: Tuple[int, ...]) -> str:
    parts = []
    for i, grp in itertools.groupby(idx):
        e = len(list(grp))
        parts.append(base[i] if e == 1 else f"{base[i]}^{e}")
    return "*".join(parts)


def sym_indices(n: int, k: int) -> List[Tuple[int, ...]]:
    """Degree-k monomials as sorted index tuples (descending lex on exponent vectors)."""
    return list(itertools.combinations_with_replacement(range(n), k))


def ext_indices(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def sym_power(space: BasedSpace, k: int) -> BasedSpace:
    if k < 1:
        raise ValueError("k must be >= 1")
    return BasedSpace(tuple(_mono_label(space.labels, t) for t in sym_indices(space.dim, k)),
                      space.field)


def ext_power(space: BasedSpace, k: int) -> BasedSpace:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > space.dim:
        raise ValueError("exterior power vanishes")
    return BasedSpace(tuple("∧".join(space.labels[i] for i in t)
                            for t in ext_indices(space.dim, k)), space.field)


def tensor(*spaces: BasedSpace) -> BasedSpace:
    labels = [""]
    for s in spaces:
        labels = [a + ("⊗" if a else "") + b for a in labels for b in s.labels]
    if any(s.dim == 0 for s in spaces):
        labels = []
    return BasedSpace(tuple(labels), spaces[0].field)


def dual(space: BasedSpace) -> BasedSpace:
    return BasedSpace(tuple(f"{l}*" for l in space.labels), space.field)


def direct_sum(*spaces: BasedSpace) -> BasedSpace:
    labels = []
    for i, s in enumerate(spaces):
        labels.extend(f"{l}@{i}" for l in s.labels)
    return BasedSpace(tuple(labels), spaces[0].field)


def _sym_matrix(g: Matrix, k: int, fld: str) -> Matrix:
    n = len(g)
    idx = sym_indices(n, k)
    pos = {t: i for i, t in enumerate(idx)}
    cols = []
    zero = field_zero(fld)
    for t in idx:
        poly = {(): field_one(fld)}
        for j in t:
            new = {}
            for mono, c in poly.items():
                for a in range(n):
                    x = g[a][j]
                    if x:
                        key = tuple(sorted(mono + (a,)))
                        new[key] = new[key] + c * x if key in new else c * x
            poly = new
        col = [zero] * len(idx)
        for mono, c in poly.items():
            col[pos[mono]] = c
        cols.append(col)
    return transpose(cols)


def _ext_matrix(g: Matrix, k: int, fld: str) -> Matrix:
    n = len(g)
    idx = ext_indices(n, k)
    return [[det([[g[r][c] for c in J] for r in I], fld) for J in idx] for I in idx]


def _require_invertible(g: Matrix, fld: str):
    if not g or len(g) != len(g[0]) or not det(g, fld):
        raise ValueError("induced map requires an invertible matrix")


def induced_matrix(g: Matrix, construction: str, k: int = 1, fld: str = QQ,
                   other: Optional[Matrix] = None) -> Matrix:
    """Matrix of the functorially induced map.

    ``construction`` is one of ``"sym"``, ``"ext"``, ``"dual"``, ``"tensor"``
    (the latter takes the second factor as ``other``).
    """
    _require_invertible(g, fld)
    if construction == "sym":
        return _sym_matrix(g, k, fld)
    if construction == "ext":
        if k > len(g):
            raise ValueError("exterior power vanishes")
        return _ext_matrix(g, k, fld)
    if construction == "dual":
        return transpose(inverse(g, fld))
    if construction == "tensor":
        if other is None:
            raise ValueError("tensor construction needs a second factor")
        _require_invertible(other, fld)
        return kron(g, other)
    raise ValueError(f"unknown construction {construction!r}")


def induced_map(g: LinMap, construction: str, k: int = 1,
                other: Optional[LinMap] = None) -> LinMap:
    if g.domain.labels != g.codomain.labels:
        raise ValueError("induced maps need an endomorphism")
    W = g.domain
    if construction == "sym":
        S = sym_power(W, k)
    elif construction == "ext":
        S = ext_power(W, k)
    elif construction == "dual":
        S = dual(W)
    elif construction == "tensor":
        if other is None:
            raise ValueError("tensor construction needs a second factor")
        S = tensor(W, other.domain)
    else:
        raise ValueError(f"unknown construction {construction!r}")
    M = induced_matrix(g.matrix, construction, k, W.field,
                       other.matrix if other is not None else None)
    return LinMap(S, S, M)


# ---------------------------------------------------------------------------
# quotients


class QuotientSpace:
    """``ambient / span(relations)`` with a basis of complementary ambient labels.

    ``relations`` is a list of ambient vectors (they need not be independent).
    The complement consists of the non-pivot columns of the echelon form of
    the relation matrix, which makes the choice deterministic.
    """

    def __init__(self, ambient: BasedSpace, relations: Sequence[Sequence], name: str = ""):
        self.ambient = ambient
        fld = ambient.field
        rel = [list(v) for v in relations]
        _, pivots = rref(rel) if rel else ([], [])
        self.relation_rank = len(pivots)
        pivset = set(pivots)
        self.complement = tuple(i for i in range(ambient.dim) if i not in pivset)
        self.space = BasedSpace(tuple(f"[{ambient.labels[i]}]" for i in self.complement), fld)
        self.relations = LinMap(BasedSpace(tuple(f"r{i}" for i in range(len(rel))), fld),
                                ambient, transpose(rel, ambient.dim) if rel else
                                zeros(ambient.dim, 0, fld))
        n = ambient.dim
        indep = [rel[i] for i in _independent_rows(rel)] if rel else []
        one, zero = field_one(fld), field_zero(fld)
        cols = indep + [[one if j == c else zero for j in range(n)] for c in self.complement]
        if n:
            big = transpose(cols)  # n x n, columns = relations then complement
            inv = inverse(big, fld)
            proj = inv[len(indep):]
        else:
            proj = []
        self.projection = LinMap(ambient, self.space, proj)
        incl = zeros(n, len(self.complement), fld)
        for j, c in enumerate(self.complement):
            incl[c][j] = one
        self.inclusion = LinMap(self.space, ambient, incl)

    @property
    def dim(self) -> int:
        return self.space.dim

    def descend(self, f: LinMap, target: "QuotientSpace") -> LinMap:
        """Induced map ``self -> target`` of a map between the ambients."""
        return target.projection @ f @ self.inclusion


def _independent_rows(rows: Sequence[Sequence]) -> List[int]:
    """Indices of a maximal independent subset of ``rows``, greedily from the front."""
    return rref(transpose([list(r) for r in rows]))[1]
