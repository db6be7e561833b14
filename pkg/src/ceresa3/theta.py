"""Genus-3 theta constants with characteristics and the product χ₁₈.

For a characteristic ``(a, b) = (mu/2, nu/2)`` with ``mu, nu ∈ {0,1}³``

    θ[a; b](τ) = Σ_{n ∈ Z³} exp(πi (n+a)ᵀ τ (n+a) + 2πi (n+a)ᵀ b),

truncated to a cube whose Gaussian tail is bounded by the requested
``eps`` using a certified lower bound on the smallest eigenvalue of Im τ.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

MAX_RADIUS = 40
DEFAULT_EPS = 1e-12
DEFAULT_THRESHOLD = 1e-8


class ValidationError(ValueError):
    """Raised for matrices outside the Siegel upper half space."""


@dataclass(frozen=True, order=True)
class ThetaChar:
    mu: Tuple[int, int, int]
    nu: Tuple[int, int, int]

    def __post_init__(self):
        mu, nu = tuple(int(x) for x in self.mu), tuple(int(x) for x in self.nu)
        if len(mu) != 3 or len(nu) != 3 or any(x not in (0, 1) for x in mu + nu):
            raise ValueError("characteristic bits must be 0 or 1")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @property
    def parity(self) -> int:
        return sum(m * n for m, n in zip(self.mu, self.nu)) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    @property
    def a(self) -> np.ndarray:
        return np.array(self.mu, dtype=float) / 2

    @property
    def b(self) -> np.ndarray:
        return np.array(self.nu, dtype=float) / 2

    def __str__(self):
        return "[{};{}]".format("".join(map(str, self.mu)), "".join(map(str, self.nu)))

    @classmethod
    def parse(cls, text: str) -> "ThetaChar":
        """Accept ``"000;100"`` or ``"0,0,0;1,0,0"``."""
        left, _, right = text.strip().strip("[]").partition(";")
        bits = lambda s: tuple(int(c) for c in s.replace(",", "").strip())
        return cls(bits(left), bits(right))


def enumerate_all() -> List[ThetaChar]:
    cube = list(itertools.product((0, 1), repeat=3))
    return [ThetaChar(mu, nu) for mu in cube for nu in cube]


def enumerate_even() -> List[ThetaChar]:
    return [c for c in enumerate_all() if c.is_even]


def enumerate_odd() -> List[ThetaChar]:
    return [c for c in enumerate_all() if not c.is_even]


# ---------------------------------------------------------------------------
# period matrices


@dataclass(frozen=True)
class PeriodMatrix:
    tau: np.ndarray = field(compare=False)

    def __post_init__(self):
        t = np.array(self.tau, dtype=complex)
        if t.shape != (3, 3):
            raise ValidationError("period matrix must be 3x3")
        if not np.all(np.isfinite(t)):
            raise ValidationError("period matrix has non-finite entries")
        if np.max(np.abs(t - t.T)) > 1e-12:
            raise ValidationError("period matrix is not symmetric")
        t = (t + t.T) / 2
        try:
            np.linalg.cholesky(t.imag)
        except np.linalg.LinAlgError:
            raise ValidationError("imaginary part is not positive definite") from None
        t.setflags(write=False)
        object.__setattr__(self, "tau", t)

    @classmethod
    def from_json(cls, data: dict) -> "PeriodMatrix":
        re = np.array(data.get("re", np.zeros((3, 3))), dtype=float)
        im = np.array(data["im"], dtype=float)
        return cls(re + 1j * im)

    def to_json(self) -> dict:
        return {"re": self.tau.real.tolist(), "im": self.tau.imag.tolist()}

    def __add__(self, other) -> "PeriodMatrix":
        return PeriodMatrix(self.tau + np.asarray(other))

    def inverted(self) -> "PeriodMatrix":
        """``-τ⁻¹``."""
        return PeriodMatrix(-np.linalg.inv(self.tau))

    def conjugated(self, P: np.ndarray) -> "PeriodMatrix":
        """``Pᵀ τ P``."""
        P = np.asarray(P)
        return PeriodMatrix(P.T @ self.tau @ P)


def generic_tau() -> PeriodMatrix:
    """i·I₃ with real off-diagonal entries (0.1, 0.05, 0.1) at (12), (13), (23)."""
    t = 1j * np.eye(3, dtype=complex)
    t[0, 1] = t[1, 0] = 0.1
    t[0, 2] = t[2, 0] = 0.05
    t[1, 2] = t[2, 1] = 0.1
    return PeriodMatrix(t)


def block_tau(t1: complex, t2: np.ndarray) -> PeriodMatrix:
    """Block-diagonal ``diag(t1, t2)`` with a 2x2 block ``t2``."""
    t = np.zeros((3, 3), dtype=complex)
    t[0, 0] = t1
    t[1:, 1:] = np.asarray(t2)
    return PeriodMatrix(t)


# ---------------------------------------------------------------------------
# truncation


def lambda_min_lower_bound(Y: np.ndarray) -> float:
    """Positive lower bound for the smallest eigenvalue of a real SPD matrix.

    Gershgorin if that is positive, otherwise bisection on ``μ`` with a
    Cholesky test of ``Y - μI``.
    """
    Y = np.asarray(Y, dtype=float)
    radii = np.sum(np.abs(Y), axis=1) - np.abs(np.diag(Y))
    gersh = float(np.min(np.diag(Y) - radii))
    if gersh > 0:
        return gersh * (1 - 1e-12)
    lo, hi = 0.0, float(np.max(np.diag(Y)))
    for _ in range(60):
        mid = (lo + hi) / 2
        try:
            np.linalg.cholesky(Y - mid * np.eye(len(Y)))
            lo = mid
        except np.linalg.LinAlgError:
            hi = mid
    if lo <= 0:
        raise ValidationError("imaginary part is not positive definite")
    return lo * (1 - 1e-9)


def tail_bound(lam: float, M: int) -> float:
    """Bound on the dropped terms when summing ``n ∈ [-M, M]³``.

    Dropped vectors ``v = n + a`` have some coordinate with ``|v_i| >= M + 1/2``.
    """
    r = M + 0.5
    c = math.pi * lam
    one_dim_tail = 2 * math.exp(-c * r * r) * (1 + 1 / (2 * c * r))
    full = 2 + 1 / math.sqrt(lam)
    return 3 * one_dim_tail * full * full


def truncation_radius(lam: float, eps: float, cap: int = MAX_RADIUS) -> int:
    if eps <= 0:
        raise ValueError("eps must be positive")
    for M in range(1, cap + 1):
        if tail_bound(lam, M) < eps:
            return M
    raise ValueError("precision unreachable")


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    eps: float
    radius: int

    def __abs__(self):
        return abs(self.value)


def _box(M: int) -> np.ndarray:
    r = np.arange(-M, M + 1, dtype=float)
    return np.array(list(itertools.product(r, r, r)))


def _theta_numpy(chars: Sequence[ThetaChar], tau: np.ndarray, M: int) -> List[complex]:
    box = _box(M)
    out = []
    by_mu = {}
    for ch in chars:
        by_mu.setdefault(ch.mu, []).append(ch)
    cache = {}
    for mu, group in by_mu.items():
        V = box + np.array(mu, dtype=float) / 2
        gauss = np.exp(1j * np.pi * np.einsum("ki,ij,kj->k", V, tau, V))
        for ch in group:
            cache[ch] = complex(np.sum(gauss * np.exp(1j * np.pi * (V @ np.array(ch.nu, float)))))
    return [cache[ch] for ch in chars]


def _theta_mpmath(chars: Sequence[ThetaChar], tau: np.ndarray, M: int,
                  precision: int) -> List[mpmath.mpc]:
    with mpmath.workdps(precision + 5):
        T = [[mpmath.mpc(complex(tau[i, j])) for j in range(3)] for i in range(3)]
        out = []
        for ch in chars:
            s = mpmath.mpc(0)
            a = [mpmath.mpf(m) / 2 for m in ch.mu]
            b = [mpmath.mpf(n) / 2 for n in ch.nu]
            for n in itertools.product(range(-M, M + 1), repeat=3):
                v = [n[i] + a[i] for i in range(3)]
                q = sum(v[i] * T[i][j] * v[j] for i in range(3) for j in range(3))
                s += mpmath.expjpi(q + 2 * sum(v[i] * b[i] for i in range(3)))
            out.append(+s)
        return out


def _as_tau(tau) -> PeriodMatrix:
    return tau if isinstance(tau, PeriodMatrix) else PeriodMatrix(tau)


def theta_constants(chars: Sequence[ThetaChar], tau, eps: float = DEFAULT_EPS,
                    precision: int = 15) -> List[ThetaValue]:
    """Several theta constants sharing one truncation box."""
    tau = _as_tau(tau)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lam = lambda_min_lower_bound(tau.tau.imag)
    M = truncation_radius(lam, eps)
    live = [c for c in chars if c.is_even]
    if precision > 15:
        vals = _theta_mpmath(live, tau.tau, M, precision)
    else:
        vals = _theta_numpy(live, tau.tau, M)
    lookup = dict(zip(live, vals))
    return [ThetaValue(lookup[c] if c.is_even else 0j, eps, M if c.is_even else 0)
            for c in chars]


def theta_constant(alpha: ThetaChar, tau, eps: float = DEFAULT_EPS,
                   precision: int = 15) -> ThetaValue:
    """θ_α(τ) to absolute error ``eps``; odd characteristics return exactly 0."""
    return theta_constants([alpha], tau, eps, precision)[0]


def theta_1d(a: float, b: float, tau: complex, terms: int = 40) -> complex:
    """Genus-1 theta constant, used as an independent factorization oracle."""
    n = np.arange(-terms, terms + 1) + a
    return complex(np.sum(np.exp(1j * np.pi * n * n * tau + 2j * np.pi * n * b)))


# ---------------------------------------------------------------------------
# χ18


@dataclass(frozen=True)
class Chi18Value:
    value: complex
    log_abs: float  # log|χ18|, finite even when the product underflows
    rel_err: float  # bound on the relative error of the product
    factors: Tuple[ThetaValue, ...] = field(repr=False)

    def __abs__(self):
        return abs(self.value)


def _floor_for(precision: int) -> float:
    return 10.0 ** (-min(precision, 15) + 1)


def chi18(tau, eps: float = DEFAULT_EPS, precision: int = 15) -> Chi18Value:
    """Product of the 36 even theta constants.

    Each factor gets absolute tolerance ``eps * |θ| / 36`` (estimated in a
    first pass), so the product has relative error about ``eps``; factors
    below the working-precision floor are treated absolutely.
    """
    tau = _as_tau(tau)
    chars = enumerate_even()
    rough = theta_constants(chars, tau, 1e-6, 15)
    scale_ = max(max(abs(v.value) for v in rough), 1.0)
    floor = _floor_for(precision) * scale_
    target = max(eps * max(min(abs(v.value) for v in rough), floor) / 36, 1e-300)
    vals = theta_constants(chars, tau, target, precision)
    prod = complex(1)
    log_abs = 0.0
    rel = 0.0
    for v in vals:
        z = complex(v.value)
        prod *= z
        mag = abs(z)
        log_abs += math.log(mag) if mag > 0 else -math.inf
        round_err = 1e-16 * scale_ if precision <= 15 else 10.0 ** (-precision) * scale_
        rel += (target + round_err) / mag if mag > 0 else math.inf
    return Chi18Value(prod, log_abs, rel, tuple(vals))


@dataclass(frozen=True)
class MinNull:
    char: ThetaChar
    modulus: float
    hyperelliptic_candidate: bool
    threshold: float


def min_theta_null(tau, eps: float = DEFAULT_EPS, threshold: float = DEFAULT_THRESHOLD,
                   precision: int = 15) -> MinNull:
    """The even characteristic with the smallest |θ_α(τ)|."""
    chars = enumerate_even()
    vals = theta_constants(chars, tau, eps, precision)
    best = min(range(len(chars)), key=lambda i: (abs(vals[i].value), chars[i]))
    m = float(abs(vals[best].value))
    return MinNull(chars[best], m, m < threshold, threshold)


# ---------------------------------------------------------------------------
# modular transformation checks


@dataclass(frozen=True)
class TransformReport:
    kind: str
    lhs: float
    rhs: float
    rel_deviation: float
    phase_ratio: complex  # reported only; multiplier phases are not asserted

    def to_json(self) -> dict:
        return {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs,
                "rel_deviation": self.rel_deviation,
                "phase_ratio": [self.phase_ratio.real, self.phase_ratio.imag]}


def transform_check(tau, kind: str = "translation", shift: Optional[np.ndarray] = None,
                    eps: float = DEFAULT_EPS, precision: int = 15) -> TransformReport:
    """Compare the modulus of χ18 across a symplectic move.

    ``translation``: |χ18(τ + S)| = |χ18(τ)| for integral symmetric ``S``.
    ``inversion``: |χ18(-τ⁻¹)| = |det τ|¹⁸ |χ18(τ)|.
    """
    tau = _as_tau(tau)
    base = chi18(tau, eps, precision)
    if kind == "translation":
        S = np.zeros((3, 3)) if shift is None else np.asarray(shift, dtype=float)
        if S.shape != (3, 3) or np.any(S != S.T) or np.any(S != np.round(S)):
            raise ValidationError("translation needs an integral symmetric 3x3 matrix")
        moved = chi18(tau + S, eps, precision)
        log_rhs = base.log_abs
        phase = moved.value / base.value if base.value else complex("nan")
    elif kind == "inversion":
        moved = chi18(tau.inverted(), eps, precision)
        d = np.linalg.det(tau.tau)
        log_rhs = 18 * math.log(abs(d)) + base.log_abs
        phase = moved.value / (d ** 18 * base.value) if base.value else complex("nan")
    else:
        raise ValueError(f"unknown transformation {kind!r}")
    if math.isinf(moved.log_abs) and math.isinf(log_rhs):
        rel = 0.0  # both sides vanish
    elif math.isinf(moved.log_abs) or math.isinf(log_rhs):
        rel = 1.0
    else:
        rel = abs(math.expm1(moved.log_abs - log_rhs))
    return TransformReport(kind, math.exp(moved.log_abs), math.exp(log_rhs), rel, complex(phase))


# ---------------------------------------------------------------------------
# cusp order


@dataclass(frozen=True)
class CuspFit:
    slope: float
    intercept: float
    residual: float
    ts: Tuple[float, ...]
    neg_log_abs: Tuple[float, ...]
    fitted_from: int


def _fit(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
    A = np.vstack([np.asarray(xs), np.ones(len(xs))]).T
    sol, *_ = np.linalg.lstsq(A, np.asarray(ys), rcond=None)
    res = np.asarray(ys) - A @ sol
    return float(sol[0]), float(sol[1]), float(np.sqrt(np.mean(res ** 2)))


def default_t_samples() -> List[float]:
    return [1.0 + 0.5 * k for k in range(7)]


def cusp_order(tau0, t_samples: Optional[Iterable[float]] = None, direction: int = 0,
               eps: float = 1e-10, precision: int = 15, control: bool = False) -> CuspFit:
    """Slope of ``-log|χ18(τ0 + i t E_jj)|`` against ``2πt`` over the upper half of the samples.

    With ``control=True`` the t-dependence is dropped (χ18(τ0) at every sample),
    which must fit to slope 0.
    """
    tau0 = _as_tau(tau0)
    ts = list(default_t_samples() if t_samples is None else t_samples)
    if len(ts) < 2 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_samples must be an increasing sequence of length >= 2")
    E = np.zeros((3, 3), dtype=complex)
    E[direction, direction] = 1j
    ys = []
    for t in ts:
        tau = tau0 if control else PeriodMatrix(tau0.tau + t * E)
        val = chi18(tau, eps, precision)
        if not math.isfinite(val.log_abs) or val.rel_err >= 0.5:
            raise ValueError("increase precision or lower t")
        ys.append(-val.log_abs)
    start = len(ts) // 2
    xs = [2 * math.pi * t for t in ts]
    slope, icpt, res = _fit(xs[start:], ys[start:])
    return CuspFit(slope, icpt, res, tuple(ts), tuple(ys), start)
