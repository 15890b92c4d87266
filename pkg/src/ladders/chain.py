"""Ladder operators on a closed chain and their discrete coherent states.

A closed chain of length ``M`` is an ``M``-level system whose raising
operator moves level ``j`` to ``j+1`` with weight ``gamma_{j+1}``, wrapping
the top level back to the bottom with weight ``gamma_0``.  No level is
annihilated, so the lowering operator has a full set of eigenvectors: a
finite family of discrete coherent states that, with its biorthogonal dual,
resolves the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateSpectrumError
from .matrix_core import (
    adjoint,
    as_operator,
    commutator,
    eigensystem,
    matrix_exponential,
)
from .report import VerificationReport

__all__ = [
    "BiorthogonalSystem",
    "ChainSystem",
    "chain_coherent_closed_form",
    "coherent_state_instability",
    "discrete_coherent_states",
    "heisenberg_evolve",
    "make_chain",
    "verify_chain_algebra",
]


@dataclass(frozen=True)
class ChainSystem:
    """Closed chain: weights, ladder pair, number operator and its defect.

    ``N = a^+ a`` is diagonal with entries ``gamma_j^2`` and
    ``Gamma = [a, a^+]`` is the diagonal operator that replaces the identity
    in the bosonic commutation rule.
    """

    gammas: np.ndarray
    a: np.ndarray
    a_dagger: np.ndarray
    N: np.ndarray
    Gamma: np.ndarray

    @property
    def M(self) -> int:
        return self.gammas.shape[0]


def make_chain(gammas) -> ChainSystem:
    """Build the chain for strictly positive weights ``gamma_0 .. gamma_{M-1}``.

    The raising operator acts as ``a^+ e_j = gamma_{j+1} e_{j+1}`` with
    indices mod ``M``: ``gammas[j]`` weighs the step into level ``j``.
    """
    gammas = np.asarray(gammas, dtype=float)
    if gammas.ndim != 1 or gammas.shape[0] < 2:
        raise ValueError(f"need at least 2 weights, got shape {gammas.shape}")
    if np.any(gammas <= 0.0) or not np.all(np.isfinite(gammas)):
        raise ValueError("all chain weights must be finite and strictly positive")
    M = gammas.shape[0]
    a = np.zeros((M, M), dtype=np.complex128)
    for j in range(M - 1):
        a[j, j + 1] = gammas[j + 1]
    a[M - 1, 0] = gammas[0]
    a_dagger = a.conj().T
    N = a_dagger @ a
    Gamma = a @ a_dagger - N
    for arr in (gammas, a, a_dagger, N, Gamma):
        arr.setflags(write=False)
    return ChainSystem(gammas=gammas, a=a, a_dagger=a_dagger, N=N, Gamma=Gamma)


def verify_chain_algebra(c: ChainSystem, tol: float = 1e-11) -> VerificationReport:
    """Residuals for the chain commutators and the full-cycle powers.

    The cycle-power residuals are measured relative to ``prod(gammas)``; the
    absolute defect scales with ``gamma^M`` and is meaningless for large
    weights.  The last entry confirms ``[a, a^+]`` stays away from the
    identity, which no finite-dimensional pair can reach (its Frobenius
    distance is at least ``sqrt(M)`` because ``Gamma`` is traceless).
    """
    report = VerificationReport(
        family_descriptor=f"chain(gammas={np.array2string(c.gammas, separator=', ')})"
    )
    a, ad, N, Gamma = c.a, c.a_dagger, c.N, c.Gamma
    M = c.M
    eye = np.eye(M)
    report.add(
        "number_lowering_commutator",
        np.linalg.norm(commutator(N, a) + Gamma @ a),
        tol,
    )
    report.add(
        "number_raising_commutator",
        np.linalg.norm(commutator(N, ad) - ad @ Gamma),
        tol,
    )
    report.add("number_defect_commute", np.linalg.norm(commutator(N, Gamma)), tol)
    report.add(
        "product_defect_commute",
        np.linalg.norm(commutator(Gamma + N, Gamma)),
        tol,
    )
    cycle = float(np.prod(c.gammas))
    report.add(
        "full_cycle_lowering",
        np.linalg.norm(np.linalg.matrix_power(a, M) - cycle * eye) / cycle,
        tol,
    )
    report.add(
        "full_cycle_raising",
        np.linalg.norm(np.linalg.matrix_power(ad, M) - cycle * eye) / cycle,
        tol,
    )
    identity_gap = np.linalg.norm(Gamma - eye)
    report.add(
        "commutator_never_identity",
        max(0.0, 1.0 - identity_gap),
        tol,
    )
    return report


def heisenberg_evolve(c: ChainSystem, t: float, check_tol: float = 1e-10) -> np.ndarray:
    """Evolved lowering operator ``exp(i N t) a exp(-i N t)``.

    Cross-checks the closed form ``exp(-i Gamma t) a`` and the invariance of
    ``a^+(t) a(t)`` before returning; a disagreement beyond ``check_tol``
    raises :class:`ConvergenceError`.
    """
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    forward = matrix_exponential(1j * t * c.N)
    backward = matrix_exponential(-1j * t * c.N)
    evolved = forward @ c.a @ backward
    closed = matrix_exponential(-1j * t * c.Gamma) @ c.a
    gap = np.linalg.norm(evolved - closed)
    if gap > check_tol:
        raise ConvergenceError(
            f"Heisenberg evolution disagrees with its closed form by {gap:.3e}"
        )
    isometry_gap = np.linalg.norm(adjoint(evolved) @ evolved - c.a_dagger @ c.a)
    if isometry_gap > check_tol:
        raise ConvergenceError(
            f"a^+(t) a(t) drifted from a^+ a by {isometry_gap:.3e}"
        )
    return evolved


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Eigenvalues with right eigenvectors and their biorthogonal duals.

    ``phi[:, j]`` satisfies ``A phi_j = values[j] phi_j``; ``psi[:, j]``
    satisfies ``A^+ psi_j = conj(values[j]) psi_j`` and
    ``<phi_j, psi_k> = delta_jk``.
    """

    values: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


def discrete_coherent_states(A, distinct_tol: float = 1e-8) -> BiorthogonalSystem:
    """Eigenvector family of ``A`` together with its biorthogonal dual.

    Works for any square matrix with well-separated eigenvalues, ladder or
    not.  Raises :class:`DegenerateSpectrumError` when eigenvalues are closer
    than the separation threshold, where the dual basis is unreliable.
    """
    A = as_operator(A)
    es = eigensystem(A, distinct_tol=distinct_tol)
    if not es.distinct:
        raise DegenerateSpectrumError(
            "spectrum has (near-)repeated eigenvalues; no unique dual basis"
        )
    phi = es.right_vectors
    psi = np.linalg.solve(phi.conj().T, np.eye(phi.shape[0], dtype=np.complex128))
    for arr in (phi, psi):
        arr.setflags(write=False)
    return BiorthogonalSystem(values=es.values, phi=phi, psi=psi)


def _closed_form_vectors(gammas: np.ndarray):
    gamma = float(np.prod(gammas)) ** 0.25
    roots = np.array([-1.0, -1.0j, 1.0j, 1.0])
    values = gamma * roots
    phi = np.empty((4, 4), dtype=np.complex128)
    psi = np.empty((4, 4), dtype=np.complex128)
    for j, z in enumerate(values):
        for k in range(4):
            phi[k, j] = z ** (k + 1) / np.prod(gammas[: k + 1]) / 2.0
            psi[k, j] = np.conj(z) ** (3 - k) / np.prod(gammas[k + 1 :]) / 2.0
    return values, phi, psi


def chain_coherent_closed_form(
    c: ChainSystem, check_tol: float = 1e-10
) -> BiorthogonalSystem:
    """Closed-form coherent states of a length-4 chain.

    Eigenvalues are ``gamma`` times the fourth roots of unity with
    ``gamma = (gamma_0 gamma_1 gamma_2 gamma_3)^(1/4)``; each eigenvector and
    dual carries an overall 1/2 with last component 1/2.  The result is
    verified against the eigen-equations and against the numerically computed
    eigensystem (up to the per-vector scalar freedom) before returning.
    """
    if c.M != 4:
        raise ValueError(f"closed form is available for length-4 chains, got M={c.M}")
    values, phi, psi = _closed_form_vectors(c.gammas)
    for j in range(4):
        eig_gap = np.linalg.norm(c.a @ phi[:, j] - values[j] * phi[:, j])
        dual_gap = np.linalg.norm(
            c.a_dagger @ psi[:, j] - np.conj(values[j]) * psi[:, j]
        )
        if max(eig_gap, dual_gap) > check_tol * max(1.0, np.linalg.norm(c.a)):
            raise ConvergenceError(
                f"closed-form pair {j} violates its eigen-equation by "
                f"{max(eig_gap, dual_gap):.3e}"
            )
    gram_gap = np.linalg.norm(phi.conj().T @ psi - np.eye(4))
    if gram_gap > check_tol:
        raise ConvergenceError(f"closed-form biorthogonality off by {gram_gap:.3e}")

    numeric = discrete_coherent_states(c.a)
    for j in range(4):
        k = int(np.argmin(np.abs(numeric.values - values[j])))
        ref = phi[:, j] / phi[3, j]
        got = numeric.phi[:, k]
        if abs(got[3]) < 1e-12 * np.abs(got).max():
            raise ConvergenceError("numeric eigenvector has vanishing last component")
        got = got / got[3]
        if np.linalg.norm(ref - got) > 1e-9 * np.linalg.norm(ref):
            raise ConvergenceError(
                f"closed-form eigenvector {j} disagrees with the computed one"
            )
    for arr in (values, phi, psi):
        arr.setflags(write=False)
    return BiorthogonalSystem(values=values, phi=phi, psi=psi)


def coherent_state_instability(c: ChainSystem, j: int, t: float) -> np.ndarray:
    """Expansion of the evolved coherent state ``exp(i N t) phi_j`` over the basis.

    Returns the overlaps ``<psi_k, exp(i N t) phi_j>`` for all ``k``.  At
    ``t = 0`` this is the Kronecker delta; for generic weights the evolved
    state spreads over several components, unlike canonical coherent states.
    """
    system = chain_coherent_closed_form(c)
    if not 0 <= j < c.M:
        raise IndexError(f"state index {j} outside 0..{c.M - 1}")
    evolved = matrix_exponential(1j * t * c.N) @ system.phi[:, j]
    return np.array([np.vdot(system.psi[:, k], evolved) for k in range(c.M)])
