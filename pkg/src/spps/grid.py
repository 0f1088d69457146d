"""Uniform grids and grid functions.

Everything downstream (recursive integral families, series solutions,
generalized derivatives) works on a fixed uniform mesh with a
distinguished anchor node x0.  This module owns the mesh, the sampled
function type, and the three numerical primitives the rest of the
package is built on: anchored cumulative integration, differentiation,
and off-node evaluation.  Both the quadrature and the differentiation
rules are 4th order so that repeated application through the recursions
keeps enough accuracy at the default resolution.
"""

from __future__ import annotations

import csv

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from .errors import DomainError, GridConfigError, SamplingError

# Snap tolerance for "x is a node", as a fraction of the spacing.
_NODE_SNAP = 1e-9
# Slack allowed past the interval ends before raising, relative to b-a.
_EDGE_SLACK = 1e-12


class Grid:
    """Uniform mesh on [a, b] with an anchor node x0.

    Parameters
    ----------
    a, b : float
        Interval endpoints, a < b.
    n_nodes : int
        Number of nodes, at least 2.  Quadrature needs 4 and the
        derivative stencils need 5; those operations enforce their own
        minimums.
    x0 : float, optional
        Anchor of the recursions; must coincide with a node.  Defaults
        to a.
    """

    def __init__(self, a: float, b: float, n_nodes: int = 5001, x0: float | None = None):
        a = float(a)
        b = float(b)
        if not (np.isfinite(a) and np.isfinite(b)) or not b > a:
            raise GridConfigError(f"need finite a < b, got a={a}, b={b}")
        n_nodes = int(n_nodes)
        if n_nodes < 2:
            raise GridConfigError(f"need at least 2 nodes, got {n_nodes}")
        self.a = a
        self.b = b
        self.n_nodes = n_nodes
        self.h = (b - a) / (n_nodes - 1)
        self.nodes = np.linspace(a, b, n_nodes)
        self.nodes.flags.writeable = False
        if x0 is None:
            x0 = a
        self.x0_index = self.index_of(x0)
        self.x0 = self.nodes[self.x0_index]

    def index_of(self, x: float) -> int:
        """Index of the node at x; raises if x is not (numerically) a node."""
        i = int(round((float(x) - self.a) / self.h))
        if i < 0 or i >= self.n_nodes or abs(self.nodes[i] - x) > _NODE_SNAP * self.h:
            raise GridConfigError(f"x={x} is not a node of this grid")
        return i

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.n_nodes == other.n_nodes
                and self.x0_index == other.x0_index)

    def __hash__(self):
        return hash((self.a, self.b, self.n_nodes, self.x0_index))

    def __repr__(self):
        return (f"Grid(a={self.a}, b={self.b}, n_nodes={self.n_nodes}, "
                f"x0={self.x0})")


class GridFunction:
    """Function values on the nodes of a Grid.

    Supports pointwise arithmetic with scalars and with other functions
    on the same grid, and cubic-spline evaluation between nodes.  Values
    may be real or complex.
    """

    def __init__(self, grid: Grid, values):
        values = np.asarray(values)
        if values.shape != (grid.n_nodes,):
            raise GridConfigError(
                f"values shape {values.shape} does not match grid with "
                f"{grid.n_nodes} nodes")
        if values.dtype.kind in "iub":
            values = values.astype(np.float64)
        elif values.dtype.kind not in "fc":
            raise GridConfigError(f"unsupported dtype {values.dtype}")
        self.grid = grid
        self.values = values
        self._spline = None

    # -- pointwise algebra ------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise GridConfigError("operands live on different grids")
            return other.values
        if np.isscalar(other):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, self.values + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, self.values - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, v - self.values)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, self.values * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, self.values / v)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return GridFunction(self.grid, v / self.values)

    def __pow__(self, k: int):
        return GridFunction(self.grid, self.values ** k)

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def conj(self):
        return GridFunction(self.grid, np.conj(self.values))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def is_real(self) -> bool:
        return self.values.dtype.kind == "f" or not np.any(self.values.imag)

    # -- evaluation --------------------------------------------------------

    def at(self, x):
        """Evaluate at x (scalar or array) inside [a, b].

        Node hits return the stored values exactly; points between nodes
        go through a not-a-knot cubic spline, which reproduces cubic
        polynomials and keeps 4th-order accuracy for smooth data.
        """
        g = self.grid
        xa = np.asarray(x, dtype=float)
        scalar = xa.ndim == 0
        xa = np.atleast_1d(xa)
        slack = _EDGE_SLACK * (g.b - g.a)
        if np.any(xa < g.a - slack) or np.any(xa > g.b + slack):
            bad = xa[(xa < g.a - slack) | (xa > g.b + slack)][0]
            raise DomainError(f"x={bad} outside [{g.a}, {g.b}]")
        xa = np.clip(xa, g.a, g.b)
        if self._spline is None:
            if g.n_nodes >= 4:
                self._spline = CubicSpline(g.nodes, self.values)
            else:
                self._spline = make_interp_spline(
                    g.nodes, self.values, k=g.n_nodes - 1)
        out = self._spline(xa)
        # stored values win on (near-)node hits
        idx = np.rint((xa - g.a) / g.h).astype(int)
        idx = np.clip(idx, 0, g.n_nodes - 1)
        hit = np.abs(xa - g.nodes[idx]) <= _NODE_SNAP * g.h
        if np.any(hit):
            out = np.asarray(out, dtype=np.result_type(out, self.values))
            out[hit] = self.values[idx[hit]]
        return out[0] if scalar else out

    def __repr__(self):
        return f"GridFunction({self.grid!r}, sup_norm={self.sup_norm:.3g})"


def sample(fn, grid: Grid) -> GridFunction:
    """Sample a callable on the nodes of a grid.

    Tries a vectorized call first and falls back to per-node evaluation.
    Raises SamplingError naming the first offending node if any value is
    not finite.
    """
    try:
        values = np.asarray(fn(grid.nodes))
        if values.shape != grid.nodes.shape:
            raise TypeError
    except Exception:
        values = np.asarray([fn(x) for x in grid.nodes])
    if values.dtype.kind not in "fc":
        try:
            values = values.astype(np.float64)
        except (TypeError, ValueError):
            values = values.astype(np.complex128)
    bad = ~np.isfinite(values)
    if values.dtype.kind == "c":
        bad = ~(np.isfinite(values.real) & np.isfinite(values.imag))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise SamplingError(
            f"non-finite sample {values[i]} at node {i} (x={grid.nodes[i]})")
    return GridFunction(grid, values)


def cumulative_integral(g: GridFunction, x0_index: int | None = None) -> GridFunction:
    """Signed primitive of g anchored at the grid's x0 node.

    Each cell is integrated with the 4-point cubic rule (the two cells
    touching the boundary use the one-sided variant) and the increments
    are accumulated, so the result G satisfies G(x0) = 0 exactly and
    G(x) = integral from x0 to x of g with 4th-order global accuracy.
    """
    grid = g.grid
    y = g.values
    n = grid.n_nodes
    if n < 4:
        raise GridConfigError("cumulative integral needs at least 4 nodes")
    if x0_index is None:
        x0_index = grid.x0_index
    inc = np.empty(n - 1, dtype=y.dtype if y.dtype.kind == "c" else np.float64)
    inc[0] = (9 * y[0] + 19 * y[1] - 5 * y[2] + y[3]) / 24.0
    inc[1:-1] = (-y[0:n - 3] + 13 * y[1:n - 2] + 13 * y[2:n - 1] - y[3:n]) / 24.0
    inc[-1] = (y[n - 4] - 5 * y[n - 3] + 19 * y[n - 2] + 9 * y[n - 1]) / 24.0
    G = np.concatenate(([0.0], np.cumsum(inc))) * grid.h
    G = G - G[x0_index]
    G[x0_index] = 0.0
    return GridFunction(grid, G)


def derivative(g: GridFunction) -> GridFunction:
    """Node-wise derivative via 5-point stencils (4th order).

    Interior nodes use the centered stencil; the two nodes at each end
    use one-sided stencils of the same order.
    """
    grid = g.grid
    y = g.values
    n = grid.n_nodes
    if n < 5:
        raise GridConfigError("derivative needs at least 5 nodes")
    d = np.empty_like(y, dtype=y.dtype if y.dtype.kind == "c" else np.float64)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / 12.0
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / 12.0
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / 12.0
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / 12.0
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / 12.0
    return GridFunction(grid, d / grid.h)


def write_csv(g: GridFunction, path) -> None:
    """Write a grid function as CSV with columns x, re, im."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        v = g.values.astype(complex)
        for x, z in zip(g.grid.nodes, v):
            w.writerow([f"{x:.17g}", f"{z.real:.17g}", f"{z.imag:.17g}"])


def read_csv(path, x0: float | None = None) -> GridFunction:
    """Read a grid function written by write_csv.

    The nodes must form a uniform mesh; x0 defaults to the first node.
    """
    data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 5:
        raise GridConfigError(f"{path}: expected >= 5 rows of x,re,im")
    x = data[:, 0]
    steps = np.diff(x)
    h = steps[0]
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise GridConfigError(f"{path}: nodes are not a uniform increasing mesh")
    grid = Grid(x[0], x[-1], len(x), x0=x0)
    values = data[:, 1] + 1j * data[:, 2]
    if not np.any(data[:, 2]):
        values = data[:, 1].copy()
    return GridFunction(grid, values)
