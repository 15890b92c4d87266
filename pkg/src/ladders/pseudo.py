"""Pseudo-quon pairs obtained by similarity deformation.

An invertible, generally non-unitary ``R`` turns a truncated quon ``C`` into
the pair ``D = R C R^-1``, ``G = R C^+ R^-1`` with ``G^+ != D``: the raising
operator is no longer the adjoint of the lowering one.  The deformed bracket
survives with a transformed defect ``Q = R K R^-1``:

    [D, G]_q = 1 - (L+1) Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularOperatorError
from .matrix_core import adjoint, as_operator, commutator, qmutator, rank_one
from .quons import QuonFamily, Regime, beta
from .report import VerificationReport

__all__ = [
    "FourLevelExample",
    "PseudoTriple",
    "deform",
    "example_fixture",
    "r_block_validator",
    "validate_regime_conditions",
]


@dataclass(frozen=True)
class PseudoTriple:
    """Similarity-deformed ladder pair with its transformed defect.

    ``inverse_residual`` records ``||R R^-1 - 1||_F`` for the inverse actually
    used, so downstream tolerances can be judged against it.
    """

    base: QuonFamily
    R: np.ndarray
    R_inv: np.ndarray
    D: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    inverse_residual: float


def _invert(R: np.ndarray, cond_limit: float, inverse_tol: float):
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularOperatorError(
            f"R is singular or near-singular (condition estimate {cond:.3e})"
        )
    eye = np.eye(R.shape[0], dtype=np.complex128)
    R_inv = np.linalg.solve(R, eye)
    residual = np.linalg.norm(R @ R_inv - eye)
    # one Newton step squares the inverse residual when the solve was sloppy
    for _ in range(2):
        if residual <= inverse_tol:
            break
        R_inv = R_inv @ (2.0 * eye - R @ R_inv)
        residual = np.linalg.norm(R @ R_inv - eye)
    return R_inv, float(residual)


def deform(
    f: QuonFamily,
    R,
    cond_limit: float = 1e12,
    inverse_tol: float = 1e-12,
) -> PseudoTriple:
    """Similarity-transform a family by an invertible ``R``.

    Parameters
    ----------
    f : QuonFamily
        Base family supplying ``C`` and ``K``.
    R : array_like
        Invertible matrix of the family's dimension.
    cond_limit : float
        Condition-number estimate above which ``R`` is rejected as
        near-singular.
    inverse_tol : float
        Target residual for ``||R R^-1 - 1||``; the inverse is refined while
        above it.
    """
    R = as_operator(R, "R")
    if R.shape[0] != f.dim:
        raise ValueError(f"R has dimension {R.shape[0]}, family needs {f.dim}")
    R_inv, residual = _invert(R, cond_limit, inverse_tol)
    D = R @ f.C @ R_inv
    G = R @ adjoint(f.C) @ R_inv
    Q = R @ f.K @ R_inv
    for a in (R, R_inv, D, G, Q):
        a.setflags(write=False)
    return PseudoTriple(
        base=f, R=R, R_inv=R_inv, D=D, G=G, Q=Q, inverse_residual=residual
    )


def validate_regime_conditions(t: PseudoTriple, tol: float = 1e-10) -> VerificationReport:
    """Residuals for the deformed side conditions and number commutators.

    For a quon-regime base, ``Q D`` and ``G Q`` must vanish; for a boson-like
    base they are proportional to ``Ntilde D`` and ``G Ntilde`` respectively,
    where ``Ntilde = G D``.  Hermiticity of ``Q`` is only guaranteed when
    ``R^+ R`` commutes with the base defect, so that entry is skipped
    otherwise.
    """
    f = t.base
    q, dim = f.q, f.dim
    D, G, Q = t.D, t.G, t.Q
    n_tilde = G @ D
    report = VerificationReport(
        family_descriptor=f"pseudo(L={f.L}, q={q}, regime={f.regime.value})"
    )
    if f.regime is Regime.QUON:
        report.add("transformed_defect_kills_lowering", np.linalg.norm(Q @ D), tol)
        report.add("raising_kills_transformed_defect", np.linalg.norm(G @ Q), tol)
        report.add(
            "deformed_number_commutator",
            np.linalg.norm(commutator(n_tilde, D) + D - (1.0 - q) * (n_tilde @ D)),
            tol,
        )
        nt_adj = adjoint(n_tilde)
        g_adj = adjoint(G)
        report.add(
            "deformed_number_commutator_adjoint",
            np.linalg.norm(
                commutator(nt_adj, g_adj) + g_adj - (1.0 - q) * (nt_adj @ g_adj)
            ),
            tol,
        )
    else:
        scale = (q - 1.0) / dim
        report.add(
            "transformed_defect_proportionality",
            np.linalg.norm(Q @ D - scale * (n_tilde @ D)),
            tol,
        )
        report.add(
            "raising_defect_proportionality",
            np.linalg.norm(G @ Q - scale * (G @ n_tilde)),
            tol,
        )
        report.add(
            "deformed_number_commutator",
            np.linalg.norm(commutator(n_tilde, D) + D),
            tol,
        )
        nt_adj = adjoint(n_tilde)
        g_adj = adjoint(G)
        report.add(
            "deformed_number_commutator_adjoint",
            np.linalg.norm(commutator(nt_adj, g_adj) + g_adj),
            tol,
        )

    gram = adjoint(t.R) @ t.R
    commute_gap = np.linalg.norm(commutator(f.K, gram))
    scale = max(1.0, np.linalg.norm(f.K) * np.linalg.norm(gram))
    if commute_gap <= 1e-12 * scale:
        report.add(
            "transformed_defect_hermitian", np.linalg.norm(Q - adjoint(Q)), 1e-11
        )
    else:
        report.skip(
            "transformed_defect_hermitian",
            "R^+ R does not commute with the defect",
        )
    return report


def r_block_validator(
    R,
    regime: Regime,
    pattern_tol: float = 1e-14,
    cond_limit: float = 1e12,
) -> bool:
    """Whether ``R`` has the sparsity pattern that keeps the base defect intact.

    Quon regime: bordered form, last row and column zero apart from the
    corner.  Boson-like regime: diagonal with nonzero diagonal.  Returns False
    when the pattern is violated beyond ``pattern_tol`` or ``R`` is not
    invertible.
    """
    R = as_operator(R, "R")
    regime = Regime(regime)
    if regime is Regime.QUON:
        forbidden = max(
            np.abs(R[-1, :-1]).max(initial=0.0),
            np.abs(R[:-1, -1]).max(initial=0.0),
        )
    else:
        off = R - np.diag(np.diagonal(R))
        forbidden = np.abs(off).max(initial=0.0)
    if forbidden > pattern_tol:
        return False
    cond = np.linalg.cond(R)
    return bool(np.isfinite(cond) and cond <= cond_limit)


@dataclass(frozen=True)
class FourLevelExample:
    """Worked four-dimensional deformation built from explicit Riesz bases.

    ``phi[:, n]`` and ``psi[:, n]`` are the biorthogonal basis vectors,
    related to the canonical basis by ``phi_n = R e_n`` and
    ``psi_n = (R^-1)^+ e_n``.  ``E`` and ``F`` are the deformed ladder pair
    assembled from rank-one terms, and ``K = R^-1 Q R`` is the base defect
    they descend from.
    """

    q: float
    phi: np.ndarray
    psi: np.ndarray
    R: np.ndarray
    C: np.ndarray
    K: np.ndarray
    Q: np.ndarray
    E: np.ndarray
    F: np.ndarray


def example_fixture(q: float = 0.5) -> FourLevelExample:
    """Build the explicit four-level deformation for a given ``q``.

    The bases are upper-triangular integer vectors, ``R`` is the unit upper
    bidiagonal matrix, and the weights come from :func:`beta`, which makes the
    base defect collapse to its single corner entry.
    """
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    phi = np.array(
        [[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]],
        dtype=np.complex128,
    ).T
    psi = np.array(
        [[1, -1, 1, -1], [0, 1, -1, 1], [0, 0, 1, -1], [0, 0, 0, 1]],
        dtype=np.complex128,
    ).T
    R = np.array(
        [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
        dtype=np.complex128,
    )
    b = np.array([beta(n, q) for n in range(3)])
    C = np.zeros((4, 4), dtype=np.complex128)
    for n in range(3):
        C[n, n + 1] = b[n]
    b2 = b**2
    K = (
        np.diag(
            [
                1.0 - b2[0],
                1.0 + q * b2[0] - b2[1],
                1.0 + q * b2[1] - b2[2],
                1.0 + q * b2[2],
            ]
        ).astype(np.complex128)
        / 4.0
    )
    R_inv = np.linalg.solve(R, np.eye(4, dtype=np.complex128))
    Q = R @ K @ R_inv
    E = sum(b[n] * rank_one(phi[:, n], psi[:, n + 1]) for n in range(3))
    F = sum(b[n] * rank_one(phi[:, n + 1], psi[:, n]) for n in range(3))
    for a in (phi, psi, R, C, K, Q, E, F):
        a.setflags(write=False)
    return FourLevelExample(q=q, phi=phi, psi=psi, R=R, C=C, K=K, Q=Q, E=E, F=F)


def example_identities(ex: FourLevelExample, tol: float = 1e-12) -> VerificationReport:
    """Check the five identities the four-level example must satisfy."""
    report = VerificationReport(family_descriptor=f"example_fixture(q={ex.q})")
    eye = np.eye(4)
    gram = adjoint(ex.phi) @ ex.psi
    report.add("biorthogonality", np.linalg.norm(gram - eye), tol)
    R_inv_adj = adjoint(np.linalg.solve(ex.R, eye.astype(np.complex128)))
    report.add(
        "riesz_construction",
        max(
            np.linalg.norm(ex.phi - ex.R @ eye),
            np.linalg.norm(ex.psi - R_inv_adj @ eye),
        ),
        tol,
    )
    resolution = sum(
        rank_one(ex.phi[:, n], ex.psi[:, n]) for n in range(4)
    )
    report.add("resolution_of_identity", np.linalg.norm(resolution - eye), tol)
    report.add(
        "deformed_qmutator",
        np.linalg.norm(qmutator(ex.E, ex.F, ex.q) - (eye - 4.0 * ex.Q)),
        tol,
    )
    Cd = adjoint(ex.C)
    report.add(
        "defect_reconstruction",
        np.linalg.norm(ex.K - 0.25 * (eye - ex.C @ Cd + ex.q * (Cd @ ex.C))),
        tol,
    )
    return report
