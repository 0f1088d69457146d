"""Exception types shared across the package."""


class SppsError(Exception):
    """Base class for all errors raised by this package."""


class GridConfigError(SppsError, ValueError):
    """Grid construction or use with parameters that cannot work
    (too few nodes, anchor off the mesh, mismatched grids)."""


class DomainError(SppsError, ValueError):
    """Evaluation point outside the interval covered by a grid."""


class SamplingError(SppsError, ValueError):
    """A sampled function produced a non-finite value at some node."""


class SeedError(SppsError, ValueError):
    """Seed function unusable: vanishing (or nearly vanishing) on the
    grid, or a generated seed drifted below the safety threshold."""


class OrderError(SppsError, ValueError):
    """Requested order outside what was built: basis index past the
    family order, truncation level exceeding the cached basis, a jet
    operation that needs more coefficients than are carried."""


class AnchorError(SppsError, ValueError):
    """Jet operands anchored at different points."""


class JetDivisionError(SppsError, ZeroDivisionError):
    """Reciprocal of a jet whose constant coefficient is (numerically)
    zero."""


class RankCollapseError(SppsError, ValueError):
    """Least-squares design matrix lost rank; the projection is not
    determined."""


class AccuracyWarning(UserWarning):
    """Result still returned, but a documented accuracy limit was
    crossed (deep repeated numerical differentiation, truncation cap,
    clustered roots near the scan resolution)."""
