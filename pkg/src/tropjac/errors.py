"""Exception hierarchy.

Every domain error carries a stable machine-readable ``code`` that the CLI
reports on stderr.
"""


class TropJacError(Exception):
    """Base class for all domain errors."""

    code = "tropjac_error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(value):
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def _make(name: str, code: str, doc: str) -> type:
    return type(name, (TropJacError,), {"code": code, "__doc__": doc})


MissingValuation = _make("MissingValuation", "missing_valuation", "Explicit valuation has no entry for a term.")
DegenerateLift = _make("DegenerateLift", "degenerate_lift", "Lifted points do not span enough dimensions.")
ConeNotPointed = _make("ConeNotPointed", "cone_not_pointed", "Cone contains a line.")
NotSaturated = _make("NotSaturated", "not_saturated", "Lattice is not saturated in Z^n.")
CoincidentMarkedPoints = _make("CoincidentMarkedPoints", "coincident_marked_points", "Two marked points coincide.")
NotTreeMetric = _make("NotTreeMetric", "not_tree_metric", "Four-point condition fails.")
TooFewLeaves = _make("TooFewLeaves", "too_few_leaves", "Neighbor joining needs at least four leaves.")
NotConnected = _make("NotConnected", "not_connected", "Graph is disconnected.")
UnsupportedGenus = _make("UnsupportedGenus", "unsupported_genus", "Operation requires genus >= 2.")
OddLeafCount = _make("OddLeafCount", "odd_leaf_count", "Tree has an odd number of infinite leaves.")
InternalError = _make("InternalError", "internal_error", "An internal consistency check failed.")
DegenerateNewtonPolygon = _make("DegenerateNewtonPolygon", "degenerate_newton_polygon", "Newton polygon is not two-dimensional.")
NotCertifiedError = _make("NotCertifiedError", "not_certified", "Tropical curve is not certified faithful.")
NotPSD = _make("NotPSD", "not_psd", "Matrix is not positive semidefinite.")
UnsupportedDimension = _make("UnsupportedDimension", "unsupported_dimension", "Dimension exceeds the supported bound.")
NotSimpleUnimodular = _make("NotSimpleUnimodular", "not_simple_unimodular", "Vector configuration is not simple unimodular.")
UnsupportedConeShape = _make("UnsupportedConeShape", "unsupported_cone_shape", "Cone generators are not all rank one.")
NoPositiveSolution = _make("NoPositiveSolution", "no_positive_solution", "Edge lengths are not all positive.")
NotTriangularWeight = _make("NotTriangularWeight", "not_triangular_weight", "Vertex weight is not of the form binom(d-1, 2).")
TooManyEdges = _make("TooManyEdges", "too_many_edges", "More edges between two vertices than intersection points.")
NotStableGraph = _make("NotStableGraph", "not_stable_graph", "A weight-zero vertex has valence below three.")
WindowLimitExceeded = _make("WindowLimitExceeded", "window_limit_exceeded", "Lattice enumeration exceeded TROPJAC_MAX_CELLS.")
InvalidInput = _make("InvalidInput", "invalid_input", "Input violates a precondition.")
