"""
定数定義モジュール
"""

from typing import ClassVar


class MetricConstants:
    """
    距離行列の検証に関する定数クラス。
    """

    # Absolute slack for triangle checks (Floyd-Warshall output must pass)
    TRIANGLE_TOL = 1e-9

    # Asymmetry / diagonal noise tolerated silently when loading CSV matrices
    LOAD_TOL = 1e-9

    # Tolerance of the ultrametric check during tree reconstruction
    ULTRAMETRIC_TOL = 1e-6

    # Negative branch lengths smaller than this are rounding noise
    BRANCH_TOL = 1e-9


class FitDefaults:
    """
    最適化ループのデフォルト値。
    """

    MU = 0.1
    LAMBDA = 10.0
    BATCHES = 100
    BATCH_SIZE = 32
    LR = 0.01
    MAX_EPOCHS = 1000
    PATIENCE = 50
    SEED = 0
    WEIGHT_FLOOR = 1e-6
    ACCUM_CHUNKS = 1

    # Adam moment hyperparameters
    BETA1 = 0.9
    BETA2 = 0.999
    EPS_HAT = 1e-8

    MIN_BATCH_SIZE = 4


class GeneratorConstants:
    """
    合成グラフ生成に関する定数クラス。
    """

    MAX_RESAMPLES = 1000
    DEFAULT_WEIGHT_RANGE: ClassVar[tuple[float, float]] = (1.0, 1.0)


class GeneratorKinds:
    """
    生成可能なグラフ種別の定数クラス。
    """

    TREE = "tree"
    CYCLE = "cycle"
    GRID = "grid"
    ER = "er"
    SBM = "sbm"

    @classmethod
    def all(cls) -> list[str]:
        """Return all supported generator kinds."""
        return [cls.TREE, cls.CYCLE, cls.GRID, cls.ER, cls.SBM]

    @classmethod
    def is_valid(cls, kind: str) -> bool:
        """Check if generator kind is supported."""
        return kind in cls.all()


class DeltaModes:
    """
    双曲性の計算モード定数クラス。
    """

    EXACT = "exact"
    SMOOTH = "smooth"
    BATCHED = "batched"

    @classmethod
    def all(cls) -> list[str]:
        """Return all delta evaluation modes."""
        return [cls.EXACT, cls.SMOOTH, cls.BATCHED]

    @classmethod
    def is_valid(cls, mode: str) -> bool:
        """Check if delta mode is valid."""
        return mode in cls.all()


class InputFormats:
    """
    入力ファイル形式の定数クラス。
    """

    EDGES = "edges"
    MATRIX = "matrix"
    FEATURES = "features"

    @classmethod
    def all(cls) -> list[str]:
        """Return all supported input formats."""
        return [cls.EDGES, cls.MATRIX, cls.FEATURES]

    @classmethod
    def infer(cls, path: str) -> str:
        """Guess the input format from a file name (CSV means dense matrix)."""
        return cls.MATRIX if path.lower().endswith(".csv") else cls.EDGES


class ExitCodes:
    """
    CLIの終了コード。
    """

    OK = 0
    INTERNAL_ERROR = 1
    INPUT_ERROR = 2
    GUARD_REFUSAL = 3


class ErrorMessages:
    """
    集中管理されたエラーメッセージ定数クラス。

    すべてのエラーメッセージはここで定義し、他のモジュールからインポートして利用すること。
    """

    # Matrix errors
    NOT_SQUARE = "Matrix must be square, got shape {shape}"
    SHAPE_MISMATCH = "Matrices must have the same shape, got {left} and {right}"
    NOT_SYMMETRIC = "Matrix must be symmetric"
    NONZERO_DIAGONAL = "Matrix diagonal must be zero"
    NEGATIVE_ENTRY = "Matrix entries must be nonnegative"
    NOT_FINITE = "Matrix entries must be finite"
    INDEX_OUT_OF_RANGE = "Index {index} out of range for {n} points"
    TOO_FEW_POINTS = "At least {minimum} points are required, got {n}"
    NEGATIVE_TOLERANCE = "Tolerance must be nonnegative"

    # Ingest errors
    EDGE_PARSE_ERROR = "Line {line}: expected 'u v' or 'u v w', got {content!r}"
    EDGE_BAD_WEIGHT = "Line {line}: weight {token!r} is not a number"
    EDGE_NONPOSITIVE_WEIGHT = "Line {line}: weight must be positive, got {weight}"
    EDGE_SELF_LOOP = "Line {line}: self-loop on node {node!r}"
    EDGE_DUPLICATE = "Line {line}: duplicate edge {u!r}-{v!r}"
    CSV_RAGGED = "Line {line}: expected {expected} values, got {actual}"
    CSV_NOT_NUMERIC = "Line {line}: value {token!r} is not a number"
    CSV_EMPTY = "Matrix file is empty"
    CSV_NEGATIVE = "Line {line}: negative entry {value}"
    EMPTY_GRAPH = "Graph has no nodes"
    DISCONNECTED = "Graph is disconnected: no path between {u!r} and {v!r}"
    ZERO_NORM_ROW = "Feature row {row} has zero norm"
    INVALID_EDGE = "Edge ({u}, {v}) is invalid for a graph with {n} nodes"
    UNKNOWN_PATH_METHOD = "Unknown shortest path method {method!r}"
    BFS_NEEDS_UNIT_WEIGHTS = "Breadth-first search requires unit edge weights"
    CSV_NOT_SQUARE = "Matrix file has {rows} rows of {cols} values; a square matrix is required"

    # Generator errors
    GENERATOR_PARAM = "Invalid generator parameter: {detail}"
    NOT_CONNECTED = "No connected sample after {attempts} attempts"
    UNKNOWN_GENERATOR = "Unknown generator kind {kind!r}"

    # Smoothing errors
    EMPTY_VALUES = "Log-sum-exp needs at least one value"
    ZERO_TEMPERATURE = "Temperature lambda must be nonzero"
    EMPTY_SUBSET = "Subset must contain at least one point"
    EMPTY_BATCHES = "Batch set must contain at least one batch"
    BATCH_TOO_SMALL = "Batch size m={m} must be at least 4"
    BATCH_TOO_LARGE = "Batch size m={m} exceeds point count n={n}"
    BATCH_NOT_DISTINCT = "Batch {index} contains repeated points"
    BATCH_COUNT = "Number of batches K must be positive, got {k}"

    # Optimizer errors
    FIT_CONFIG_FOR_N = "Configuration invalid for n={n}: {detail}"
    N_TOO_SMALL_FOR_BOUND = "Bound requires n >= 4, got n={n}"
    NEGATIVE_GAP = "Gap must be nonnegative, got {gap}"

    # Embedding errors
    NOT_REALIZABLE = "Matrix is not realizable as a rooted tree: {detail}"
    MALFORMED_TREE = "Malformed tree: {detail}"

    # Guard errors
    SIZE_GUARD = (
        "n={n} exceeds the exact computation limit {limit}; "
        "pass --override-size-guard to proceed"
    )

    # CLI errors
    INVALID_ROOT = "Root {root} is not a valid point index for n={n}"
    UNKNOWN_MODE = "Unknown delta mode {mode!r}"
    INTERNAL_ERROR = "An unexpected error occurred."
