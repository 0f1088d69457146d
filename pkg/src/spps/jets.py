"""Truncated Taylor expansions (jets) with exact coefficient algebra.

A Jet carries the normalized coefficients c_j = h^(j)(x0) / j! of a
function at an anchor point.  Sums and products truncate to the shorter
operand, differentiation shifts and drops one order, and reciprocals
use the standard power-series recurrence.  The transformation-matrix
builders run entirely on this algebra, so their entries are exact up to
floating point whenever the input jet is.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import AccuracyWarning, AnchorError, JetDivisionError, OrderError

# Below this the constant term counts as zero for division purposes.
_RECIP_EPS = 1e-14
# Jets extracted from sampled data degrade fast with depth; see from_grid.
_GRID_SAFE_ORDER = 4


class Jet:
    """Normalized Taylor coefficients of a function at x0."""

    __slots__ = ("x0", "coeffs")

    def __init__(self, x0: float, coeffs):
        self.x0 = float(x0)
        c = np.asarray(coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise OrderError("a jet needs at least the constant coefficient")
        self.coeffs = c

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, x0: float, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(x0, c)

    @classmethod
    def identity(cls, x0: float, order: int) -> "Jet":
        """Jet of the coordinate function x."""
        if order < 1:
            raise OrderError("identity jet needs order >= 1")
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = x0
        c[1] = 1.0
        return cls(x0, c)

    @classmethod
    def from_derivatives(cls, derivs, x0: float) -> "Jet":
        """Build from raw derivative values h(x0), h'(x0), h''(x0), ..."""
        d = np.asarray(derivs, dtype=np.complex128)
        fact = np.cumprod(np.concatenate(([1.0], np.arange(1.0, len(d)))))
        return cls(x0, d / fact)

    @classmethod
    def from_grid(cls, g, order: int, x0_index: int | None = None) -> "Jet":
        """Extract a jet from sampled data by repeated stencil differentiation.

        Each level multiplies the rounding noise by O(1/h), so this is a
        last resort for seeds with no closed form; an AccuracyWarning is
        issued past order 4.  Prefer exact jets whenever available.
        """
        if x0_index is None:
            x0_index = g.grid.x0_index
        if order > _GRID_SAFE_ORDER:
            warnings.warn(
                f"jet of order {order} from grid data: repeated numerical "
                f"differentiation beyond order {_GRID_SAFE_ORDER} loses "
                f"accuracy", AccuracyWarning, stacklevel=2)
        from .grid import derivative
        derivs = [g.values[x0_index]]
        cur = g
        for _ in range(order):
            cur = derivative(cur)
            derivs.append(cur.values[x0_index])
        return cls.from_derivatives(derivs, g.grid.nodes[x0_index])

    # -- algebra -----------------------------------------------------------

    def _match(self, other: "Jet") -> None:
        if self.x0 != other.x0:
            raise AnchorError(f"anchors differ: {self.x0} vs {other.x0}")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._match(other)
            m = min(self.order, other.order)
            return Jet(self.x0, self.coeffs[:m + 1] + other.coeffs[:m + 1])
        if np.isscalar(other):
            c = self.coeffs.copy()
            c[0] += other
            return Jet(self.x0, c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.x0, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._match(other)
            m = min(self.order, other.order)
            prod = np.convolve(self.coeffs[:m + 1], other.coeffs[:m + 1])
            return Jet(self.x0, prod[:m + 1])
        if np.isscalar(other):
            return Jet(self.x0, self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        """Jet of 1/h; the constant coefficient must be nonzero."""
        a = self.coeffs
        if abs(a[0]) <= _RECIP_EPS:
            raise JetDivisionError(
                f"constant coefficient {a[0]} too small to invert")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for j in range(1, len(a)):
            b[j] = -np.dot(a[1:j + 1], b[j - 1::-1]) / a[0]
        return Jet(self.x0, b)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if np.isscalar(other):
            return Jet(self.x0, self.coeffs / other)
        return NotImplemented

    def derive(self) -> "Jet":
        """Jet of h'; drops one order."""
        if self.order == 0:
            raise OrderError("cannot differentiate an order-0 jet")
        j = np.arange(1.0, len(self.coeffs))
        return Jet(self.x0, self.coeffs[1:] * j)

    def exp(self) -> "Jet":
        """Jet of exp(h)."""
        a = self.coeffs
        b = np.zeros_like(a)
        b[0] = np.exp(a[0])
        for k in range(1, len(a)):
            j = np.arange(1.0, k + 1)
            b[k] = np.dot(j * a[1:k + 1], b[k - 1::-1]) / k
        return Jet(self.x0, b)

    def truncate(self, order: int) -> "Jet":
        if order < 0 or order > self.order:
            raise OrderError(f"cannot truncate order {self.order} to {order}")
        return Jet(self.x0, self.coeffs[:order + 1])

    # -- inspection ---------------------------------------------------------

    def derivatives(self) -> np.ndarray:
        """Raw derivative values h(x0), h'(x0), ... recovered from coeffs."""
        fact = np.cumprod(
            np.concatenate(([1.0], np.arange(1.0, len(self.coeffs)))))
        return self.coeffs * fact

    def eval(self, x) -> complex:
        """Evaluate the truncated expansion at x."""
        dx = np.asarray(x) - self.x0
        return np.polynomial.polynomial.polyval(dx, self.coeffs)

    def __repr__(self):
        return f"Jet(x0={self.x0}, order={self.order})"
