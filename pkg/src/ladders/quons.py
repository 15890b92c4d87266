"""Truncated bosons and truncated quons with their defect operators.

A truncated quon is an ``(L+1)``-dimensional lowering operator ``C`` whose
deformed bracket with its adjoint misses the identity by a correction term:

    C C^+ - q C^+ C = 1 - (L+1) K.

Two regimes are supported, differing in the commutator of ``C`` with the
number-like operator ``N = C^+ C``:

* ``Regime.QUON``: ``[N, C] = -C + (1-q) N C``; the weights follow the
  geometric recursion ``beta_n^2 = 1 + q beta_{n-1}^2`` and the defect ``K``
  has a single nonzero entry in the bottom-right corner.
* ``Regime.BOSON_LIKE``: ``[N, C] = -C`` with purely bosonic weights
  ``sqrt(n+1)``; ``K`` is diagonal but spread over all levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateLadderError, SingularOperatorError
from .matrix_core import adjoint, commutator
from .report import VerificationReport

__all__ = [
    "QuonFamily",
    "Regime",
    "TraceObstruction",
    "beta",
    "generate_state",
    "lower",
    "make_circulant_quon",
    "make_quon_family",
    "make_truncated_boson",
    "number_operator",
    "q_factorial",
    "quon_logarithmic_number",
    "raise_",
    "trace_obstruction",
    "verify_regime",
]

# closed-form weights hit 0/0 at q=1; below this gap the limit value is used
_Q_ONE_GAP = 1e-12


class Regime(Enum):
    QUON = "quon"
    BOSON_LIKE = "bosonlike"


def beta(n: int, q: float) -> float:
    """Ladder weight ``beta_n = sqrt((1 - q^(n+1)) / (1 - q))``.

    At ``q = 1`` (within 1e-12) the limit ``sqrt(n+1)`` is returned.  A
    radicand that underflows to a tiny negative is clamped to zero, so the
    degenerate weights at ``q = -1`` come out as exact zeros.
    """
    if n < 0:
        return 0.0
    if abs(1.0 - q) < _Q_ONE_GAP:
        return math.sqrt(n + 1)
    radicand = (1.0 - q ** (n + 1)) / (1.0 - q)
    return math.sqrt(max(radicand, 0.0))


def q_factorial(n: int, q: float) -> float:
    """Product ``beta_n beta_{n-1} ... beta_1`` (empty product 1 for n <= 0)."""
    value = 1.0
    for k in range(1, n + 1):
        value *= beta(k, q)
    return value


def make_truncated_boson(L: int) -> np.ndarray:
    """Bosonic lowering operator cut off at level ``L``.

    The ``(L+1) x (L+1)`` matrix with ``sqrt(n+1)`` on the superdiagonal.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    a = np.zeros((L + 1, L + 1), dtype=np.complex128)
    for n in range(L):
        a[n, n + 1] = math.sqrt(n + 1)
    return a


@dataclass(frozen=True)
class QuonFamily:
    """A truncated-quon configuration: weights, lowering operator, defect.

    ``betas`` holds ``beta_0 .. beta_L``; ``C`` carries ``beta_0 .. beta_{L-1}``
    on its superdiagonal and ``K`` is the diagonal defect making the deformed
    bracket close.  Arrays are read-only.
    """

    L: int
    q: float
    regime: Regime
    betas: np.ndarray
    C: np.ndarray
    K: np.ndarray

    @property
    def dim(self) -> int:
        return self.L + 1


def _freeze(*arrays: np.ndarray) -> None:
    for a in arrays:
        a.setflags(write=False)


def make_quon_family(L: int, q: float, regime: Regime) -> QuonFamily:
    """Build the lowering operator and defect for the requested regime.

    Parameters
    ----------
    L : int
        Highest occupied level; the space has dimension ``L + 1``.
    q : float
        Deformation parameter in ``[-1, 1]``.
    regime : Regime
        Which commutation rule the weights must satisfy.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    regime = Regime(regime)
    dim = L + 1
    K = np.zeros((dim, dim), dtype=np.complex128)
    if regime is Regime.QUON:
        betas = np.array([beta(n, q) for n in range(dim)])
        C = np.zeros((dim, dim), dtype=np.complex128)
        for n in range(L):
            C[n, n + 1] = betas[n]
        K[L, L] = betas[L] ** 2 / dim
    else:
        betas = np.sqrt(np.arange(1, dim + 1, dtype=float))
        C = make_truncated_boson(L)
        for n in range(1, L):
            K[n, n] = n * (q - 1.0) / dim
        K[L, L] = (1.0 + L * q) / dim
    _freeze(betas, C, K)
    return QuonFamily(L=L, q=q, regime=regime, betas=betas, C=C, K=K)


def lower(f: QuonFamily, n: int) -> np.ndarray:
    """Apply the lowering action to basis state ``n``: ``beta_{n-1} e_{n-1}``."""
    if not 0 <= n <= f.L:
        raise IndexError(f"level index {n} outside 0..{f.L}")
    v = np.zeros(f.dim, dtype=np.complex128)
    if n > 0:
        v[n - 1] = f.betas[n - 1]
    return v


def raise_(f: QuonFamily, n: int) -> np.ndarray:
    """Apply the raising action to basis state ``n``: ``beta_n e_{n+1}``."""
    if not 0 <= n <= f.L - 1:
        raise IndexError(f"level index {n} outside 0..{f.L - 1}")
    v = np.zeros(f.dim, dtype=np.complex128)
    v[n + 1] = f.betas[n]
    return v


def generate_state(f: QuonFamily, n: int) -> np.ndarray:
    """Build ``e_n`` from the vacuum: ``(C^+)^n e_0`` over its normalizer.

    Raises :class:`DegenerateLadderError` naming the first vanishing weight
    when the normalizer is zero (e.g. every odd level at ``q = -1``).
    """
    if not 0 <= n <= f.L:
        raise IndexError(f"level index {n} outside 0..{f.L}")
    zeros = np.flatnonzero(f.betas[:n] == 0.0)
    if zeros.size:
        raise DegenerateLadderError(int(zeros[0]))
    v = np.zeros(f.dim, dtype=np.complex128)
    v[0] = 1.0
    raising = f.C.conj().T
    for _ in range(n):
        v = raising @ v
    return v / np.prod(f.betas[:n])


def number_operator(f: QuonFamily) -> np.ndarray:
    """Number-like operator ``C^+ C``, diagonal with entries ``beta_{n-1}^2``."""
    return adjoint(f.C) @ f.C


def quon_logarithmic_number(f: QuonFamily) -> np.ndarray:
    """Logarithmic number operator ``log(1 - N(1-q)) / log(q)``.

    Defined for the quon regime with ``0 < q < 1`` strictly; its eigenvalue on
    level ``m`` is exactly ``m``.  The diagonal of ``1 - (1-q) N`` telescopes
    to ``q^m`` exactly, and is evaluated in that form: the literal subtraction
    loses all significance once ``q^m`` drops below machine epsilon.
    """
    if f.regime is not Regime.QUON:
        raise ValueError("logarithmic number operator is defined for the quon regime")
    if not 0.0 < f.q < 1.0 or abs(1.0 - f.q) < _Q_ONE_GAP:
        raise ValueError(f"logarithmic form requires 0 < q < 1 strictly, got q={f.q}")
    levels = np.arange(f.dim, dtype=float)
    return np.diag(np.log(f.q ** levels) / math.log(f.q)).astype(np.complex128)


def verify_regime(f: QuonFamily, tol: float = 1e-12) -> VerificationReport:
    """Residual norms for every identity the family must satisfy.

    Checks the closed deformed bracket, the regime's number commutator and
    ``K C`` side condition, hermiticity of ``K``, and the claim that ``K`` is
    idempotent exactly at ``q = 1`` (a vanishing ``K`` is trivially idempotent
    and does not count against the claim).
    """
    descriptor = (
        f"truncated_quon(L={f.L}, q={f.q}, regime={f.regime.value})"
        if f.regime is Regime.QUON
        else f"bosonlike_quon(L={f.L}, q={f.q})"
    )
    report = VerificationReport(family_descriptor=descriptor)
    C, K, q, dim = f.C, f.K, f.q, f.dim
    Cd = adjoint(C)
    N = Cd @ C
    eye = np.eye(dim)

    report.add(
        "defect_identity",
        np.linalg.norm(C @ Cd - q * (Cd @ C) - (eye - dim * K)),
        tol,
    )
    if f.regime is Regime.QUON:
        report.add(
            "number_commutator",
            np.linalg.norm(commutator(N, C) + C - (1.0 - q) * (N @ C)),
            tol,
        )
        report.add("defect_annihilates_ladder", np.linalg.norm(K @ C), tol)
    else:
        report.add("number_commutator", np.linalg.norm(commutator(N, C) + C), tol)
        report.add(
            "defect_ladder_proportionality",
            np.linalg.norm(K @ C - ((q - 1.0) / dim) * (N @ C)),
            tol,
        )
    report.add("defect_hermitian", np.linalg.norm(K - adjoint(K)), tol)

    idempotency_gap = np.linalg.norm(K @ K - K)
    trivially_idempotent = np.linalg.norm(K) <= tol
    expect_idempotent = abs(q - 1.0) <= tol or trivially_idempotent
    if expect_idempotent:
        violation = idempotency_gap
    else:
        violation = 0.0 if idempotency_gap > tol else 1.0
    report.add("defect_projector_iff_boson_limit", violation, tol)
    return report


@dataclass(frozen=True)
class TraceObstruction:
    """Both sides of the trace identity that forbids an exact finite q-mutator."""

    lhs: float
    rhs: float
    satisfiable: bool


def trace_obstruction(L: int, q: float, tol: float = 1e-12) -> TraceObstruction:
    """Trace balance ``sum_{n=0}^{L-1} (1 - q^(n+1)) = L + 1``.

    An exact identity ``[c, c^+]_q = 1`` in dimension ``L+1`` forces this
    balance; it holds only for ``q = -1`` with odd ``L`` (the fermionic case
    and its extensions).
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    lhs = float(sum(1.0 - q ** (n + 1) for n in range(L)))
    rhs = float(L + 1)
    return TraceObstruction(lhs=lhs, rhs=rhs, satisfiable=abs(lhs - rhs) <= tol)


def make_circulant_quon(L: int, q: float) -> np.ndarray:
    """Cyclic-shift solution of ``[c, c^+]_q = 1`` for ``q < 1``.

    Returns ``1/sqrt(1-q)`` times the cyclic shift on ``L+1`` levels.  The
    matrices for different ``q`` are proportional, so this family carries no
    deformation structure beyond the bracket identity itself.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    if abs(1.0 - q) < _Q_ONE_GAP:
        raise SingularOperatorError("normalization 1/sqrt(1-q) is singular at q=1")
    dim = L + 1
    c = np.eye(dim, k=1, dtype=np.complex128)
    c[dim - 1, 0] = 1.0
    return c / math.sqrt(1.0 - q)
