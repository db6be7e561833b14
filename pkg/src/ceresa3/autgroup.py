"""Finite matrix groups over Q(zeta_7) and their characters.

Group elements are 3x3 matrices acting on column vectors of ``A``; ``B``
is the dual, so ``g`` acts on ``B`` by ``(g^{-1})^T``.  Characters are
summed over the enumerated group; no character table is hard-coded.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import multilinear as ml
from .exactnum import Cyclo7
from .multilinear import CYCLO7
from .quartic import QuarticCoefficients, substitute

Mat = Tuple[Tuple[Cyclo7, ...], ...]

DEFAULT_CAP = 10000


def as_element(M: Sequence[Sequence]) -> Mat:
    rows = tuple(tuple(ml.to_field(x, CYCLO7) for x in row) for row in M)
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("group elements must be 3x3")
    return rows


def mat_mul(g: Mat, h: Mat) -> Mat:
    return tuple(tuple(row) for row in ml.matmul([list(r) for r in g], [list(r) for r in h]))


def mat_det(g: Mat) -> Cyclo7:
    return (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))


def mat_inv(g: Mat) -> Mat:
    """Inverse through the adjugate (3x3 only)."""
    d = mat_det(g)
    if not d:
        raise ValueError("matrix is singular")
    inv_d = d.inverse()
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [a for a in range(3) if a != i]
            c = [b for b in range(3) if b != j]
            minor = g[r[0]][c[0]] * g[r[1]][c[1]] - g[r[0]][c[1]] * g[r[1]][c[0]]
            cof[j][i] = minor * inv_d if (i + j) % 2 == 0 else -minor * inv_d
    return tuple(tuple(row) for row in cof)


IDENTITY: Mat = as_element(ml.identity(3, CYCLO7))


@dataclass(frozen=True)
class MatrixGroup:
    elements: Tuple[Mat, ...]
    generators: Tuple[Mat, ...]
    _reps: Dict[str, List[ml.Matrix]] = field(default_factory=dict, compare=False, repr=False)

    def representation(self, module: str) -> List[ml.Matrix]:
        """Matrices of every element on ``module`` (cached per group)."""
        if module not in self._reps:
            rho = module_action(module)
            self._reps[module] = [rho(_mat(g)) for g in self.elements]
        return self._reps[module]

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_closed(self) -> bool:
        """Exhaustive check: products and inverses stay inside, identity present."""
        elems = set(self.elements)
        if IDENTITY not in elems:
            return False
        for g in self.elements:
            if mat_inv(g) not in elems:
                return False
            for h in self.elements:
                if mat_mul(g, h) not in elems:
                    return False
        return True


def closure(generators: Sequence[Sequence[Sequence]], cap: int = DEFAULT_CAP) -> MatrixGroup:
    """Breadth-first closure of ``generators`` under multiplication."""
    gens = tuple(as_element(g) for g in generators)
    for g in gens:
        if not mat_det(g):
            raise ValueError("generator is not invertible")
    seen = {IDENTITY: None}
    order = [IDENTITY]
    queue = deque([IDENTITY])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(x, g)
            if y not in seen:
                if len(order) >= cap:
                    raise ValueError("group too large or not finite")
                seen[y] = None
                order.append(y)
                queue.append(y)
    return MatrixGroup(tuple(order), gens)


# ---------------------------------------------------------------------------
# quartic invariance


@dataclass(frozen=True)
class InvarianceCertificate:
    preserved: bool
    scalars: Tuple[Optional[Cyclo7], ...]  # λ_g with f∘g = λ_g f, None if not proportional

    def __bool__(self):
        return self.preserved


def _proportionality(fg: Dict, f: Dict) -> Optional[Cyclo7]:
    if set(fg) != set(f):
        return None
    lam = None
    for e, v in f.items():
        r = fg[e] / v
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


def _is_root_of_unity(x: Cyclo7) -> bool:
    # roots of unity in Q(zeta_7) have order dividing 14
    return x ** 14 == Cyclo7.from_rational(1)


def preserves_quartic(G: MatrixGroup, f: QuarticCoefficients) -> InvarianceCertificate:
    """Check ``f∘g = λ_g f`` with ``λ_g`` a root of unity for every element."""
    poly = {e: Cyclo7.from_rational(v) for e, v in f.to_monomials().items()}
    scalars = []
    ok = True
    for g in G.elements:
        fg = substitute(poly, g)
        if not poly:
            lam = Cyclo7.from_rational(1) if not fg else None
        else:
            lam = _proportionality(fg, poly)
        scalars.append(lam)
        if lam is None or not _is_root_of_unity(lam):
            ok = False
    return InvarianceCertificate(ok, tuple(scalars))


# ---------------------------------------------------------------------------
# modules and characters

# each module maps g (acting on A) to its matrix on that module
ModuleFn = Callable[[ml.Matrix], ml.Matrix]


def _on_B(g: ml.Matrix) -> ml.Matrix:
    return ml.transpose([list(r) for r in mat_inv(as_element(g))])


def _det_line(g: ml.Matrix) -> ml.Matrix:
    return [[mat_det(as_element(g))]]


MODULES: Dict[str, ModuleFn] = {
    "A": lambda g: g,
    "B": _on_B,
    "detA": _det_line,
    "detB": lambda g: _det_line(_on_B(g)),
    "S2A": lambda g: ml.induced_matrix(g, "sym", 2, CYCLO7),
    "S2B": lambda g: ml.induced_matrix(_on_B(g), "sym", 2, CYCLO7),
    "S4B": lambda g: ml.induced_matrix(_on_B(g), "sym", 4, CYCLO7),
    "S2A*detB": lambda g: ml.kron(ml.induced_matrix(g, "sym", 2, CYCLO7),
                                  _det_line(_on_B(g))),
}
MODULE_ALIASES = {"S²A⊗detB": "S2A*detB", "S⁴B": "S4B", "S²A": "S2A", "S²B": "S2B"}


def module_action(name: str) -> ModuleFn:
    """Resolve a module name; ``"M+N"`` is a direct sum."""
    if "+" in name:
        parts = [module_action(p.strip()) for p in name.split("+")]
        return lambda g: ml.block_diag(*(p(g) for p in parts), fld=CYCLO7)
    key = MODULE_ALIASES.get(name, name)
    if key not in MODULES:
        raise ValueError(f"unknown module {name!r}; known: {sorted(MODULES)}")
    return MODULES[key]


def _mat(g: Mat) -> ml.Matrix:
    return [list(r) for r in g]


def character(G: MatrixGroup, module: str) -> List[Cyclo7]:
    out = []
    for M in G.representation(module):
        out.append(sum((M[i][i] for i in range(len(M))), Cyclo7.from_rational(0)))
    return out


def _average(values: Sequence[Cyclo7], n: int) -> int:
    total = sum(values, Cyclo7.from_rational(0)) / n
    if not total.is_rational() or total.to_rational().denominator != 1:
        raise ValueError("inconsistent group action")
    return int(total.to_rational())


def trivial_multiplicity(G: MatrixGroup, module: str) -> int:
    """``(1/|G|) Σ_g tr ρ(g)`` in exact arithmetic."""
    return _average(character(G, module), G.order)


def character_norm(G: MatrixGroup, module: str) -> int:
    """``(1/|G|) Σ_g |χ(g)|²``; equals 1 exactly for irreducible modules."""
    chi = character(G, module)
    return _average([c * c.conjugate() for c in chi], G.order)


def averaging_projector(G: MatrixGroup, module: str) -> ml.Matrix:
    P = None
    for M in G.representation(module):
        P = M if P is None else ml.add(P, M)
    return ml.scale(P, Fraction(1, G.order))


def invariant_subspace(G: MatrixGroup, module: str) -> List[list]:
    """Basis of the G-fixed vectors: the image of the averaging projector."""
    P = averaging_projector(G, module)
    if ml.is_zero_matrix(P):
        return []
    R, _ = ml.rref(ml.transpose(P))
    return [row for row in R if any(row)]


def s4b_vector_to_quartic(v: Sequence[Cyclo7]) -> Dict[Tuple[int, int, int], Cyclo7]:
    """Coordinates on the lex monomial basis of S⁴B as a polynomial dict."""
    out = {}
    for c, t in zip(v, ml.sym_indices(3, 4)):
        if c:
            out[tuple(t.count(i) for i in range(3))] = c
    return out


def proportional_to(poly: Dict, f: QuarticCoefficients) -> Optional[Cyclo7]:
    target = {e: Cyclo7.from_rational(x) for e, x in f.to_monomials().items()}
    return _proportionality(poly, target)


# ---------------------------------------------------------------------------
# bundled generators


def load_generators(path=None) -> List[Mat]:
    """Read generators: a JSON list of 3x3 matrices of Cyclo7 coefficient arrays."""
    if path is None:
        text = resources.files("ceresa3.data").joinpath("klein_generators.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    if isinstance(data, dict):
        data = data["generators"]
    return [as_element([[Cyclo7.from_json(x) for x in row] for row in g]) for g in data]


def generators_to_json(gens: Sequence[Mat]) -> list:
    return [[[x.to_json() for x in row] for row in g] for g in gens]


def klein_group(path=None, cap: int = DEFAULT_CAP) -> MatrixGroup:
    return closure(load_generators(path), cap)
