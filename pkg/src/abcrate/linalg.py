"""Minimal complex linear algebra for the rate laboratory.

Vectors are 1-D ``complex128`` numpy arrays, matrices 2-D. Only the pieces
the rest of the package needs live here: a conjugating inner product and the
dominant singular triplet of a complex matrix, computed by power iteration
on ``A^H A`` (the full spectrum is never required downstream).

All functions are pure; no shared mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularTriplet",
    "DimensionError",
    "DegenerateInputError",
    "ConvergenceError",
    "inner",
    "dominant_singular_triplet",
]

# Relative gap below which the top two Rayleigh quotients are treated as tied.
_DEGENERACY_GAP = 1e-8
# Power steps spent estimating the second Rayleigh quotient after deflation.
_DEFLATED_STEPS = 30


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class DegenerateInputError(ValueError):
    """Input admits no dominant singular triplet (e.g. the zero matrix)."""


class ConvergenceError(RuntimeError):
    """Power iteration failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class SingularTriplet:
    """Largest singular value of a matrix with its unit singular vectors.

    ``left`` has the row dimension of the source matrix, ``right`` the
    column dimension, and ``A @ right == sigma * left`` up to the iteration
    tolerance. ``degenerate`` is set when the second Rayleigh quotient of
    ``A^H A`` sits within 1e-8 relative of the first, i.e. the returned
    vectors are one arbitrary basis choice in a (near-)tied subspace.
    """

    sigma: float
    left: np.ndarray
    right: np.ndarray
    degenerate: bool = False


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Inner product conjugating the first argument, ``sum(conj(a) * b)``.

    Raises:
        DimensionError: if the vectors differ in length.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise DimensionError(
            f"inner product needs equal-length vectors, got {a.shape} and {b.shape}"
        )
    return complex(np.vdot(a, b))


def _start_vector(n: int) -> np.ndarray:
    # Deterministic start with a mild ramp so it is not orthogonal to the
    # dominant eigenvector of structured (e.g. permutation-like) inputs.
    return (1.0 + np.arange(n) / (10.0 * n)).astype(np.complex128)


def _phase_fix(v: np.ndarray) -> complex:
    """Unit phase factor making the first nonzero entry of ``v`` real >= 0."""
    mags = np.abs(v)
    idx = np.flatnonzero(mags > 1e-12 * mags.max())
    lead = v[idx[0]] if idx.size else v[np.argmax(mags)]
    return np.exp(-1j * np.angle(lead))


def dominant_singular_triplet(
    A: np.ndarray, tol: float = 1e-10, max_iter: int = 20000
) -> SingularTriplet:
    """Dominant singular triplet of a complex matrix by power iteration.

    Iterates ``x <- A^H (A x)`` from a deterministic start until the sine
    distance between successive unit iterates drops to ``tol``. The output
    phase is fixed so the first nonzero entry of ``right`` is real and
    nonnegative, making the result a pure function of the input bits.

    Args:
        A: 2-D complex array, nonzero.
        tol: convergence threshold on the successive-iterate sine distance.
        max_iter: iteration budget.

    Returns:
        SingularTriplet with unit ``left``/``right`` and ``sigma >= 0``.

    Raises:
        DegenerateInputError: zero matrix, empty matrix, or bad tol/max_iter.
        ConvergenceError: budget exhausted; ``residual`` holds the last sine.
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.size == 0:
        raise DegenerateInputError(f"need a nonempty 2-D matrix, got shape {A.shape}")
    if not tol > 0:
        raise DegenerateInputError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise DegenerateInputError(f"max_iter must be >= 1, got {max_iter}")
    if not np.any(A):
        raise DegenerateInputError("zero matrix has no dominant singular triplet")

    Ah = A.conj().T
    x = _start_vector(A.shape[1])
    x /= np.linalg.norm(x)

    sine = np.inf
    for _ in range(max_iter):
        y = Ah @ (A @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            raise DegenerateInputError(
                "start vector annihilated by A^H A; matrix is numerically degenerate"
            )
        y /= ny
        # sine via the orthogonal residual: sqrt(1-|<x,y>|^2) loses to
        # cancellation below ~1e-8, this form is accurate down to ~1e-15
        sine = float(np.linalg.norm(y - x * np.vdot(x, y)))
        x = y
        if sine <= tol:
            break
    else:
        raise ConvergenceError(
            f"power iteration did not reach sine distance {tol:g} "
            f"within {max_iter} iterations (last {sine:.3e})",
            residual=float(sine),
        )

    phase = _phase_fix(x)
    right = x * phase
    Av = A @ right
    sigma = float(np.linalg.norm(Av))
    if sigma == 0.0:
        raise DegenerateInputError("converged to the null space; no dominant triplet")
    left = Av / sigma

    return SingularTriplet(
        sigma=sigma,
        left=left,
        right=right,
        degenerate=_near_degenerate(A, Ah, right, sigma * sigma),
    )


def _near_degenerate(A, Ah, v, lam1: float) -> bool:
    """Estimate the second Rayleigh quotient of A^H A by deflated power steps."""
    m = v.shape[0]
    if m < 2:
        return False
    x = _start_vector(m)[::-1].copy()
    x -= v * np.vdot(v, x)
    nx = np.linalg.norm(x)
    if nx < 1e-30:
        return False
    x /= nx
    for _ in range(_DEFLATED_STEPS):
        y = Ah @ (A @ x)
        y -= v * np.vdot(v, y)
        ny = np.linalg.norm(y)
        if ny < lam1 * 1e-30:
            return False
        x = y / ny
    lam2 = float(np.real(np.vdot(x, Ah @ (A @ x))))
    return lam2 > lam1 * (1.0 - _DEGENERACY_GAP)
