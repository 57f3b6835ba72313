"""Exception hierarchy shared across the package."""


class GraphledError(Exception):
    """Base class for all package errors."""

    code = "internal"
    http_status = 500


class LoaderSyntaxError(GraphledError):
    """Loader input is not valid JSON."""

    code = "syntax_error"
    http_status = 400


class SchemaError(GraphledError):
    """Loader JSON is valid JSON but violates the loader schema.

    ``path`` names the offending JSON location (e.g. ``documents[2].blocks[0].key``).
    """

    code = "schema_error"
    http_status = 400

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class DanglingReferenceError(GraphledError):
    """A databook references a doc_id that does not exist."""

    code = "reference_error"
    http_status = 400

    def __init__(self, doc_id, databook_id=None):
        self.doc_id = doc_id
        self.databook_id = databook_id
        where = f" in databook {databook_id!r}" if databook_id else ""
        super().__init__(f"unknown doc_id {doc_id!r}{where}")


class EmptyAfterNormalize(GraphledError):
    """Normalization left nothing to compare."""

    code = "empty_after_normalize"
    http_status = 400


class DivisionDomain(GraphledError):
    """Ambiguity metrics requested where no ambiguity exists but values were removed."""

    code = "division_domain"
    http_status = 400


class UnknownNode(GraphledError):
    code = "unknown_node"
    http_status = 404


class UnknownEdge(GraphledError):
    code = "unknown_edge"
    http_status = 404


class UnknownDatabook(GraphledError):
    code = "unknown_databook"
    http_status = 404


class AmbiguousMerge(GraphledError):
    """merge_node matched more than one existing node."""

    code = "ambiguous_merge"
    http_status = 409


class FormatError(GraphledError):
    """Persistence file has a bad magic line, bad version or is truncated."""

    code = "format_error"
    http_status = 400


class NoEdges(GraphledError):
    """Eigenvector centrality requested on a graph without edges."""

    code = "no_edges"
    http_status = 400


class EmptyTruth(GraphledError):
    """OCR accuracy classification needs a non-empty ground-truth value."""

    code = "empty_truth"
    http_status = 400


class EmptyCorpus(GraphledError):
    code = "empty_corpus"
    http_status = 400


class EmptyGraph(GraphledError):
    code = "empty_graph"
    http_status = 400


class InsufficientNodes(GraphledError):
    """random_linkage needs at least two nodes to draw from."""

    code = "insufficient_nodes"
    http_status = 400


class DepthZero(GraphledError):
    code = "depth_zero"
    http_status = 400
