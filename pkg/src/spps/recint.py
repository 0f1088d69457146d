"""Recursive integral families generated by a nonvanishing seed.

Given a seed f with f(x)f(x0) != 0 on the interval and phi = f^2, two
interleaved families are built from X~(0) = X(0) = 1 by

    X~(n) = n * integral from x0 of X~(n-1) * phi^(+1 if n odd else -1),
    X(n)  = n * integral from x0 of X(n-1)  * phi^(-1 if n odd else +1).

For f = 1 both collapse to (x - x0)^n.  The mixed sequence

    psi_k = X(k) for odd k, X~(k) for even k

is the polynomial-like basis behind the generalized Taylor calculus,
and phi_k = f * psi_k is the solution basis: the even half solves
u'' + q u = 0 for the potential q = f''/f and the odd half is the
second independent solution family.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, GridFunction, cumulative_integral
from .errors import OrderError, SeedError

# Seeds whose modulus falls below this are rejected: every second
# recursion step divides by phi = f^2.
MIN_SEED_ABS = 1e-12


class RecursiveFamily:
    """Both recursive integral families of a seed, up to order N.

    Attributes
    ----------
    f : GridFunction
        The seed.
    phi : GridFunction
        f squared.
    N : int
        Highest order built.
    X, Xt : list[GridFunction]
        The two families, indexed by order 0..N.
    """

    def __init__(self, f: GridFunction, X, Xt, N: int):
        self.f = f
        self.phi = f * f
        self.X = X
        self.Xt = Xt
        self.N = N
        self.grid = f.grid
        self._f_prime = None

    @property
    def f_prime(self) -> GridFunction:
        """Derivative of the seed (grid stencil, computed once)."""
        if self._f_prime is None:
            from .grid import derivative
            self._f_prime = derivative(self.f)
        return self._f_prime

    def _check_order(self, k: int) -> int:
        k = int(k)
        if k < 0 or k > self.N:
            raise OrderError(f"order {k} outside built range 0..{self.N}")
        return k

    def psi(self, k: int) -> GridFunction:
        """Mixed basis element: X(k) for odd k, X~(k) for even k."""
        k = self._check_order(k)
        return self.X[k] if k % 2 else self.Xt[k]

    def phi_k(self, k: int) -> GridFunction:
        """Solution basis element f * psi_k."""
        return self.f * self.psi(k)

    def __repr__(self):
        return f"RecursiveFamily(N={self.N}, grid={self.grid!r})"


def build_family(f: GridFunction, N: int = 60) -> RecursiveFamily:
    """Build both families up to order N.

    Raises SeedError if |f| dips below MIN_SEED_ABS anywhere on the
    grid.  Cost is 2N anchored cumulative integrals.
    """
    N = int(N)
    if N < 1:
        raise OrderError(f"family order must be >= 1, got {N}")
    fmin = float(np.min(np.abs(f.values)))
    if fmin < MIN_SEED_ABS:
        i = int(np.argmin(np.abs(f.values)))
        raise SeedError(
            f"seed modulus {fmin:.3g} at node {i} (x={f.grid.nodes[i]}) "
            f"is below {MIN_SEED_ABS:g}")
    phi = f * f
    phi_inv = 1.0 / phi
    one = GridFunction(f.grid, np.ones(f.grid.n_nodes))
    X = [one]
    Xt = [one]
    for n in range(1, N + 1):
        # weight parity swaps between the families at every order
        w_X = phi_inv if n % 2 else phi
        w_Xt = phi if n % 2 else phi_inv
        X.append(n * cumulative_integral(X[n - 1] * w_X))
        Xt.append(n * cumulative_integral(Xt[n - 1] * w_Xt))
    return RecursiveFamily(f, X, Xt, N)
