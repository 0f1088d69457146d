"""Power series in the spectral parameter built on a recursive family.

For u'' + qu = lambda*u with q = f''/f, the two solutions

    u1 = f * sum_k lambda^k X~(2k) / (2k)!,
    u2 = f * sum_k lambda^k X(2k+1) / (2k+1)!

satisfy u1(x0) = f(x0), u1'(x0) = f'(x0), u2(x0) = 0, u2'(x0) = 1/f(x0),
so their Wronskian is identically 1.  Derivatives are evaluated from the
term-wise differentiated series

    u1' = (f'/f) u1 + (1/f) * sum_{k>=1} lambda^k X~(2k-1) / (2k-1)!,
    u2' = (f'/f) u2 + (1/f) * sum_{k>=0} lambda^k X(2k) / (2k)!,

never by grid differentiation, so the eigenvalue search downstream does
not inherit stencil error.  All sums run Horner-style in lambda over the
cached basis.
"""

from __future__ import annotations

import warnings
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import AccuracyWarning, OrderError
from .grid import GridFunction
from .recint import RecursiveFamily


@lru_cache(maxsize=None)
def _inv_factorials(n: int) -> np.ndarray:
    f = np.ones(n + 1)
    for k in range(2, n + 1):
        f[k] = f[k - 1] * k
    return 1.0 / f


def _check_truncation(family: RecursiveFamily, n_terms: int) -> int:
    n_terms = int(n_terms)
    if n_terms < 1:
        raise OrderError(f"n_terms must be >= 1, got {n_terms}")
    if 2 * n_terms - 1 > family.N:
        raise OrderError(
            f"n_terms={n_terms} needs basis order {2 * n_terms - 1}, "
            f"family has N={family.N}")
    return n_terms


def _horner(parts: list[np.ndarray], lam: complex) -> np.ndarray:
    # accumulate in complex even for real bases: lam may be complex
    acc = parts[-1].astype(complex)
    for p in parts[-2::-1]:
        acc *= lam
        acc += p
    return acc


def u1_grid(family: RecursiveFamily, lam: complex, n_terms: int) -> GridFunction:
    """u1 on the whole grid."""
    M = _check_truncation(family, n_terms)
    inv = _inv_factorials(2 * M)
    parts = [family.Xt[2 * k].values * inv[2 * k] for k in range(M)]
    return GridFunction(family.grid, family.f.values * _horner(parts, lam))


def u2_grid(family: RecursiveFamily, lam: complex, n_terms: int) -> GridFunction:
    """u2 on the whole grid."""
    M = _check_truncation(family, n_terms)
    inv = _inv_factorials(2 * M)
    parts = [family.X[2 * k + 1].values * inv[2 * k + 1] for k in range(M)]
    return GridFunction(family.grid, family.f.values * _horner(parts, lam))


def u1_prime_grid(family: RecursiveFamily, lam: complex, n_terms: int) -> GridFunction:
    """u1' on the whole grid (term-wise differentiated series)."""
    M = _check_truncation(family, n_terms)
    inv = _inv_factorials(2 * M)
    parts = [family.Xt[2 * k].values * inv[2 * k] for k in range(M)]
    S1 = _horner(parts, lam)
    if M > 1:
        dparts = [family.Xt[2 * k - 1].values * inv[2 * k - 1]
                  for k in range(1, M)]
        S1p = lam * _horner(dparts, lam)
    else:
        S1p = np.zeros(family.grid.n_nodes)
    fp = family.f_prime.values
    return GridFunction(family.grid, fp * S1 + S1p / family.f.values)


def u2_prime_grid(family: RecursiveFamily, lam: complex, n_terms: int) -> GridFunction:
    """u2' on the whole grid (term-wise differentiated series)."""
    M = _check_truncation(family, n_terms)
    inv = _inv_factorials(2 * M)
    parts = [family.X[2 * k + 1].values * inv[2 * k + 1] for k in range(M)]
    S2 = _horner(parts, lam)
    dparts = [family.X[2 * k].values * inv[2 * k] for k in range(M)]
    S2p = _horner(dparts, lam)
    fp = family.f_prime.values
    return GridFunction(family.grid, fp * S2 + S2p / family.f.values)


def eval_u1(family, lam, x, n_terms):
    """u1(x); x may be a scalar or an array inside [a, b]."""
    return u1_grid(family, lam, n_terms).at(x)


def eval_u2(family, lam, x, n_terms):
    """u2(x); x may be a scalar or an array inside [a, b]."""
    return u2_grid(family, lam, n_terms).at(x)


def eval_u1_prime(family, lam, x, n_terms):
    """u1'(x)."""
    return u1_prime_grid(family, lam, n_terms).at(x)


def eval_u2_prime(family, lam, x, n_terms):
    """u2'(x)."""
    return u2_prime_grid(family, lam, n_terms).at(x)


def residual(family: RecursiveFamily, lam: complex, u_values: GridFunction,
             q: GridFunction) -> float:
    """Normalized defect of u'' + q u = lambda u.

    Returns max over interior nodes of |u'' + q u - lambda u| divided by
    (1 + |lambda| * max|u|).  The second grid derivative uses one-sided
    stencils near the ends, so the two outermost nodes on each side are
    excluded.
    """
    from .grid import derivative
    upp = derivative(derivative(u_values))
    r = upp.values + (q.values - lam) * u_values.values
    denom = 1.0 + abs(lam) * u_values.sup_norm
    return float(np.max(np.abs(r[2:-2])) / denom)


class TruncationChoice(NamedTuple):
    n_terms: int
    capped: bool


def choose_truncation(family: RecursiveFamily, lam: complex,
                      tol: float = 1e-12) -> TruncationChoice:
    """Smallest truncation whose first two omitted terms are negligible.

    Picks the smallest M such that, for both series, the sup-norms of
    terms M and M+1 (the first two beyond the truncation) are below
    tol * sup-norm of the partial sum through M-1.  Capped at the family
    order; hitting the cap sets the flag and issues an AccuracyWarning.
    """
    if not tol > 0:
        raise OrderError(f"tol must be positive, got {tol}")
    M_max = (family.N + 1) // 2
    inv = _inv_factorials(family.N + 1)
    alam = abs(lam)

    def term1(k):  # sup-norm of the k-th term of the u1 series
        return alam ** k * family.Xt[2 * k].sup_norm * inv[2 * k]

    def term2(k):
        return alam ** k * family.X[2 * k + 1].sup_norm * inv[2 * k + 1]

    S1 = np.zeros(family.grid.n_nodes, dtype=complex)
    S2 = np.zeros(family.grid.n_nodes, dtype=complex)
    lam_k = 1.0 + 0j
    for M in range(1, M_max + 1):
        k = M - 1
        S1 += lam_k * family.Xt[2 * k].values * inv[2 * k]
        S2 += lam_k * family.X[2 * k + 1].values * inv[2 * k + 1]
        lam_k *= lam
        # the two dropped terms must exist inside the built family
        if 2 * (M + 1) + 1 > family.N:
            break
        s1 = float(np.max(np.abs(S1)))
        s2 = float(np.max(np.abs(S2)))
        ok1 = term1(M) <= tol * s1 and term1(M + 1) <= tol * s1
        ok2 = term2(M) <= tol * s2 and term2(M + 1) <= tol * s2
        if ok1 and ok2:
            return TruncationChoice(M, False)
    warnings.warn(
        f"truncation cap {M_max} reached without meeting tol={tol:g}",
        AccuracyWarning, stacklevel=2)
    return TruncationChoice(M_max, True)
