"""Scalars, dense matrices, weighted norms and the matrix exponential.

Two scalar modes are supported throughout the package:

* exact: :class:`fractions.Fraction` entries stored in ``dtype=object`` arrays,
* float: ``float64`` arrays, compared with :data:`FLOAT_TOL`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

FLOAT_TOL = 1e-9

Scalar = Fraction | float


def parse_scalar(value, exact: bool = True) -> Scalar:
    """Convert ``value`` (int, float, Fraction or a ``"p/q"`` string) to a scalar.

    Floats are read through their decimal repr in exact mode, so ``0.1``
    becomes ``Fraction(1, 10)`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        q = Fraction(value.strip())
        return q if exact else float(q)
    if isinstance(value, Rational):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        return Fraction(repr(value)) if exact else value
    if isinstance(value, np.floating | np.integer):
        return parse_scalar(value.item(), exact)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def convert(value, exact: bool) -> Scalar:
    """Coerce an already-numeric value into the requested mode."""
    if exact:
        if isinstance(value, Fraction):
            return value
        return parse_scalar(value, True)
    return float(value)


def is_exact_value(value) -> bool:
    return isinstance(value, Rational) and not isinstance(value, bool)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def as_matrix(rows, exact: bool) -> np.ndarray:
    """Build a 2-d array from nested sequences in the requested mode."""
    arr = np.asarray(rows, dtype=object)
    if arr.ndim != 2:
        arr = arr.reshape((arr.shape[0], -1)) if arr.size else np.empty((0, 0), dtype=object)
    out = zeros(arr.shape, exact)
    for idx, v in np.ndenumerate(arr):
        out[idx] = convert(v, exact)
    return out


def as_vector(values, exact: bool) -> np.ndarray:
    values = list(values)
    out = zeros(len(values), exact)
    for i, v in enumerate(values):
        out[i] = convert(v, exact)
    return out


def is_zero(x, tol: float = FLOAT_TOL) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def leq(a, b, tol: float = FLOAT_TOL) -> bool:
    """``a <= b`` exactly for rationals, with slack ``tol`` otherwise."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return a <= b + tol


def close(a, b, tol: float = FLOAT_TOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= tol * (1.0 + abs(float(b)))


def matrices_equal(A: np.ndarray, B: np.ndarray, tol: float = FLOAT_TOL) -> bool:
    if A.shape != B.shape:
        return False
    return all(close(a, b, tol) for a, b in zip(A.ravel(), B.ravel()))


# ---------------------------------------------------------------------------
# exact linear algebra


def solve_exact(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` by Gauss-Jordan elimination over the rationals.

    ``b`` may be a vector or a matrix of right-hand sides. Raises
    :class:`numpy.linalg.LinAlgError` if ``A`` is singular.
    """
    A = as_matrix(A, True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("coefficient matrix must be square")
    vector_rhs = np.ndim(b) == 1
    B = as_matrix(np.asarray(b, dtype=object).reshape(n, -1), True)
    M = np.concatenate([A, B], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r, col] != 0), None)
        if pivot is None:
            raise np.linalg.LinAlgError("singular matrix")
        if pivot != col:
            M[[col, pivot]] = M[[pivot, col]]
        M[col] = M[col] / M[col, col]
        for r in range(n):
            if r != col and M[r, col] != 0:
                M[r] = M[r] - M[r, col] * M[col]
    X = M[:, n:]
    return X[:, 0] if vector_rhs else X


def inverse_exact(A: np.ndarray) -> np.ndarray:
    return solve_exact(A, identity(len(A), True))


# ---------------------------------------------------------------------------
# weighted spaces and norms


@dataclass(frozen=True)
class WeightedSpace:
    """``C(X)`` with the scalar product ``<f, g> = sum f(x) g(x) m(x)``."""

    m: tuple

    def __post_init__(self):
        if any(not (w > 0) for w in self.m):
            raise ValueError("weights must be strictly positive")

    def __len__(self):
        return len(self.m)

    def inner(self, f: Sequence, g: Sequence):
        return sum(a * b * w for a, b, w in zip(f, g, self.m))

    def norm(self, f: Sequence, p: float = 2):
        return norm_p_omega(f, p, None, self.m)


def norm_p_omega(f: Sequence, p: float, omega: Sequence | None, m: Sequence):
    """``||f||_{omega,p} = ||omega^(2/p - 1) f||_p`` and ``||f/omega||_inf`` at ``p = inf``.

    ``||g||_p^p = sum m(x) |g(x)|^p``. With ``omega`` omitted this is the
    plain m-weighted p-norm. Exact rationals are preserved for ``p`` in
    ``{1, inf}`` as long as ``omega`` does not force a root.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    f = list(f)
    if omega is None:
        omega = [1] * len(f)
    omega = list(omega)
    if any(not (o > 0) for o in omega):
        raise ValueError("omega must be strictly positive")
    if math.isinf(p):
        return max((abs(a) / o for a, o in zip(f, omega)), default=0)
    if p == 1:
        return sum(w * abs(o * a) for a, o, w in zip(f, omega, m))
    expo = 2.0 / p - 1.0
    total = sum(float(w) * abs(float(o) ** expo * float(a)) ** p for a, o, w in zip(f, omega, m))
    return total ** (1.0 / p)


# ---------------------------------------------------------------------------
# semigroups


def matrix_exponential(A, t: float = 1.0) -> np.ndarray:
    """``exp(-t A)`` by scaling and squaring with a Pade approximant (float only)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if t < 0:
        raise ValueError("t must be non-negative")
    return scipy.linalg.expm(-t * A)


def matrix_exponential_eig(A, t: float, m: Sequence | None = None) -> np.ndarray:
    """``exp(-t A)`` for ``A`` self-adjoint on ``l2(X, m)`` via eigendecomposition.

    ``A`` is conjugated to the symmetric ``M^{1/2} A M^{-1/2}`` first.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    s = np.sqrt(np.asarray(m if m is not None else np.ones(n), dtype=float))
    S = (s[:, None] * A) / s[None, :]
    S = 0.5 * (S + S.T)
    lam, V = np.linalg.eigh(S)
    E = (V * np.exp(-t * lam)) @ V.T
    return E * s[None, :] / s[:, None]


def trace(A: np.ndarray):
    return sum(A[i, i] for i in range(min(A.shape)))


def to_float_matrix(A) -> np.ndarray:
    return np.asarray(A, dtype=object).astype(float)


def fmt_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{x:.12g}"


def sum_exact(values: Iterable, exact: bool):
    return sum(values, Fraction(0) if exact else 0.0)
